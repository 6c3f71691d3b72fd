"""Dense complex matrix/vector kernels with operation accounting.

Matrices are 2-D ``complex128`` numpy arrays and vectors are 1-D ones.
Each kernel evaluates with numpy and charges the active counter the exact
number of real operations the corresponding scalar algorithm performs.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from .counting import OpCounter, ensure_counter


def as_matrix(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.complex128)
    if a.ndim == 1:
        a = a[:, None]
    if a.ndim != 2:
        raise ValueError(f"expected a 2-D array, got shape {a.shape}")
    return a


def as_vector(v) -> np.ndarray:
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim == 2 and v.shape[1] == 1:
        v = v[:, 0]
    if v.ndim != 1:
        raise ValueError(f"expected a vector, got shape {v.shape}")
    return v


def matmul(a, b, counter: OpCounter | None = None) -> np.ndarray:
    """Complex matrix product ``a @ b``.

    Costs ``p*k*q`` complex multiplies and ``p*q*(k-1)`` complex adds for
    a ``(p, k) @ (k, q)`` product.
    """
    a, b = as_matrix(a), as_matrix(b)
    if a.shape[1] != b.shape[0]:
        raise ValueError(f"dimension mismatch: {a.shape} @ {b.shape}")
    p, k = a.shape
    q = b.shape[1]
    ensure_counter(counter).record(mults=4 * p * k * q, adds=2 * p * k * q + 2 * p * q * (k - 1))
    return a @ b


def matvec(a, x, counter: OpCounter | None = None) -> np.ndarray:
    a, x = as_matrix(a), as_vector(x)
    return matmul(a, x[:, None], counter)[:, 0]


def hermitian(a) -> np.ndarray:
    """Conjugate transpose. A 1-D input is treated as a column."""
    return as_matrix(a).conj().T


def sq_norm2(v, counter: OpCounter | None = None) -> float:
    """Squared Euclidean norm, ``sum(re**2 + im**2)``."""
    v = np.asarray(v, dtype=np.complex128).ravel()
    k = v.size
    ensure_counter(counter).record(mults=2 * k, adds=max(2 * k - 1, 0))
    return float(v.real @ v.real + v.imag @ v.imag)


def inner(u, v, counter: OpCounter | None = None) -> complex:
    """``u^H v`` for two vectors of equal length."""
    u, v = as_vector(u), as_vector(v)
    if u.shape != v.shape:
        raise ValueError(f"length mismatch: {u.shape} vs {v.shape}")
    k = u.size
    ensure_counter(counter).record(mults=4 * k, adds=2 * k + 2 * (k - 1))
    return complex(np.vdot(u, v))


def sub_scaled(y, alpha: complex, x, counter: OpCounter | None = None) -> np.ndarray:
    """``y - alpha * x`` with complex ``alpha``."""
    y, x = as_vector(y), as_vector(x)
    k = y.size
    ensure_counter(counter).record(mults=4 * k, adds=4 * k)
    return y - alpha * x


def sub(y, x, counter: OpCounter | None = None) -> np.ndarray:
    y, x = np.asarray(y, dtype=np.complex128), np.asarray(x, dtype=np.complex128)
    ensure_counter(counter).record(adds=2 * y.size)
    return y - x


def scale_real(v, s: float, counter: OpCounter | None = None) -> np.ndarray:
    """Multiply a complex array by a real scalar."""
    v = np.asarray(v, dtype=np.complex128)
    ensure_counter(counter).record(mults=2 * v.size)
    return v * s


def cmul(a: complex, b: complex, counter: OpCounter | None = None) -> complex:
    ensure_counter(counter).record(mults=4, adds=2)
    return a * b


def reciprocal(x: float, counter: OpCounter | None = None) -> float:
    ensure_counter(counter).record(divs=1)
    return 1.0 / x


def complex_reciprocal(z: complex, counter: OpCounter | None = None) -> complex:
    """``1/z`` as ``conj(z) * (1/|z|^2)``: a single real division."""
    if z.imag == 0.0:
        return complex(reciprocal(z.real, counter))
    c = ensure_counter(counter)
    c.record(mults=2, adds=1)
    inv = reciprocal(z.real * z.real + z.imag * z.imag, c)
    c.record(mults=2)
    return z.conjugate() * inv


def sqrt(x: float, counter: OpCounter | None = None) -> float:
    ensure_counter(counter).record(sqrts=1)
    return math.sqrt(x)


def sub_outer(m, u, w, counter: OpCounter | None = None) -> np.ndarray:
    """``m - outer(u, w)`` (no conjugation)."""
    m = as_matrix(m)
    u, w = as_vector(u), as_vector(w)
    p, q = m.shape
    ensure_counter(counter).record(mults=4 * p * q, adds=2 * p * q + 2 * p * q)
    return m - np.outer(u, w)


# -- batched candidate metrics ------------------------------------------------


def triangular_residuals(z, r, cands, unit_diagonal: bool = False, counter: OpCounter | None = None) -> np.ndarray:
    """Residuals ``z - r @ x`` for every row ``x`` of ``cands``.

    ``r`` is upper triangular, so row ``i`` of ``r @ x`` has ``n - i`` terms.
    With ``unit_diagonal`` the diagonal term is taken as ``x_i`` without a
    multiply.
    """
    z, r = as_vector(z), as_matrix(r)
    cands = np.asarray(cands, dtype=np.complex128)
    n = r.shape[0]
    P = cands.shape[0]
    products = n * (n - 1) // 2 if unit_diagonal else n * (n + 1) // 2
    # n(n-1)/2 term additions plus n subtractions from z
    additions = n * (n - 1) // 2 + n
    ensure_counter(counter).record(mults=4 * products * P, adds=(2 * products + 2 * additions) * P)
    return z[None, :] - cands @ np.triu(r).T


def dense_residuals(y, a, cands, counter: OpCounter | None = None) -> np.ndarray:
    """Residuals ``y - a @ x`` for every row ``x`` of ``cands``."""
    y, a = as_vector(y), as_matrix(a)
    cands = np.asarray(cands, dtype=np.complex128)
    m, n = a.shape
    P = cands.shape[0]
    ensure_counter(counter).record(mults=4 * m * n * P, adds=(2 * m * n + 2 * m * n) * P)
    return y[None, :] - cands @ a.T


def row_sq_norms(e, weights=None, counter: OpCounter | None = None) -> np.ndarray:
    """Per-row squared norms, optionally weighted per column.

    Weighting costs one extra real multiply per entry.
    """
    e = np.asarray(e, dtype=np.complex128)
    P, L = e.shape
    mags = e.real**2 + e.imag**2
    mults = 2 * L * P
    if weights is not None:
        mags = mags * np.asarray(weights, dtype=np.float64)[None, :]
        mults += L * P
    ensure_counter(counter).record(mults=mults, adds=(2 * L - 1) * P)
    return mags.sum(axis=1)


# -- text format --------------------------------------------------------------


def format_matrix(a) -> str:
    """Serialize to the ``m n`` header plus ``re:im`` token rows."""
    a = as_matrix(a)
    m, n = a.shape
    rows = [f"{m} {n}"]
    for row in a:
        rows.append(" ".join(f"{float(v.real)!r}:{float(v.imag)!r}" for v in row))
    return "\n".join(rows) + "\n"


def _parse_token(tok: str) -> complex:
    if ":" in tok:
        re_, im_ = tok.split(":", 1)
        return complex(float(re_), float(im_))
    return complex(float(tok), 0.0)


def parse_matrix(text: str) -> np.ndarray:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix text")
    try:
        m, n = (int(t) for t in lines[0].split())
    except ValueError as exc:
        raise ValueError(f"bad header line {lines[0]!r}; expected 'm n'") from exc
    if m < 1 or n < 1:
        raise ValueError("matrix dimensions must be positive")
    if len(lines) - 1 != m:
        raise ValueError(f"expected {m} rows, found {len(lines) - 1}")
    out = np.empty((m, n), dtype=np.complex128)
    for i, ln in enumerate(lines[1:]):
        toks = ln.split()
        if len(toks) != n:
            raise ValueError(f"row {i}: expected {n} entries, found {len(toks)}")
        out[i] = [_parse_token(t) for t in toks]
    return out


def read_matrix(path) -> np.ndarray:
    return parse_matrix(Path(path).read_text())


def write_matrix(path, a) -> None:
    Path(path).write_text(format_matrix(a))
