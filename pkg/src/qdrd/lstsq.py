"""Unconstrained least squares through QR and through QDRD."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import matrix_core as mc
from .counting import OpCounter, ensure_counter
from .factorization import QdrdFactors, QrFactors, SingularMatrixError, qdrd_sqrt_free, thin_qr_mgs


@dataclass(frozen=True)
class LsSolution:
    x_star: np.ndarray
    residual_sq: float


def back_substitute(r, b, counter: OpCounter | None = None) -> np.ndarray:
    """Solve ``r x = b`` for upper-triangular ``r``.

    Each pivot is inverted once, so exactly ``n`` divisions are counted
    whether the diagonal is real or complex.
    """
    r, b = mc.as_matrix(r), mc.as_vector(b)
    n = r.shape[0]
    if r.shape != (n, n) or b.size != n:
        raise ValueError(f"shape mismatch: r {r.shape}, b {b.shape}")
    counter = ensure_counter(counter)
    x = np.zeros(n, dtype=np.complex128)
    with counter.phase("back-substitution"):
        for i in range(n - 1, -1, -1):
            if r[i, i] == 0:
                raise SingularMatrixError(f"zero pivot at row {i}")
            s = _row_remainder(r, b, x, i, counter)
            inv = mc.complex_reciprocal(complex(r[i, i]), counter)
            if inv.imag == 0.0:
                x[i] = mc.scale_real(s, inv.real, counter)
            else:
                x[i] = mc.cmul(s, inv, counter)
    return x


def back_substitute_unit_diag(r_prime, b, counter: OpCounter | None = None) -> np.ndarray:
    """Solve ``r' x = b`` for unit upper-triangular ``r'``; division free."""
    r_prime, b = mc.as_matrix(r_prime), mc.as_vector(b)
    n = r_prime.shape[0]
    if r_prime.shape != (n, n) or b.size != n:
        raise ValueError(f"shape mismatch: r' {r_prime.shape}, b {b.shape}")
    if not np.all(np.diag(r_prime) == 1.0):
        raise ValueError("r_prime must have a unit diagonal")
    counter = ensure_counter(counter)
    x = np.zeros(n, dtype=np.complex128)
    with counter.phase("back-substitution"):
        for i in range(n - 1, -1, -1):
            x[i] = _row_remainder(r_prime, b, x, i, counter)
    return x


def _row_remainder(r, b, x, i, counter) -> complex:
    # b_i - sum_{j>i} r_ij x_j
    k = r.shape[0] - 1 - i
    if k == 0:
        return complex(b[i])
    counter.record(mults=4 * k, adds=2 * k + 2 * k)
    return complex(b[i] - r[i, i + 1 :] @ x[i + 1 :])


def solve_ls_qr(a, y, counter: OpCounter | None = None, factors: QrFactors | None = None) -> LsSolution:
    """Least squares via thin QR: solve ``R x = Q^H y``.

    The residual is ``||y||^2 - ||Q^H y||^2``, i.e. the energy of ``y``
    outside the column space.
    """
    a, y = mc.as_matrix(a), mc.as_vector(y)
    _check_rhs(a, y)
    counter = ensure_counter(counter)
    f = factors if factors is not None else thin_qr_mgs(a, counter)
    with counter.phase("back-substitution"):
        z = mc.matvec(mc.hermitian(f.q), y, counter)
        x = back_substitute(f.r, z, counter)
        res = mc.sq_norm2(y, counter) - mc.sq_norm2(z, counter)
        counter.record(adds=1)
    return LsSolution(x, max(res, 0.0))


def solve_ls_qdrd(a, y, counter: OpCounter | None = None, factors: QdrdFactors | None = None) -> LsSolution:
    """Least squares via QDRD: solve ``R' x = Q'^H y``, ignoring ``D'``.

    The residual is recomputed directly as ``||y - A x||^2`` because the
    complement basis is not available from the thin factors.
    """
    a, y = mc.as_matrix(a), mc.as_vector(y)
    _check_rhs(a, y)
    counter = ensure_counter(counter)
    f = factors if factors is not None else qdrd_sqrt_free(a, counter)
    with counter.phase("back-substitution"):
        z = mc.matvec(mc.hermitian(f.q_prime), y, counter)
        x = back_substitute_unit_diag(f.r_prime, z, counter)
        res = mc.sq_norm2(mc.sub(y, mc.matvec(a, x, counter), counter), counter)
    return LsSolution(x, res)


def _check_rhs(a: np.ndarray, y: np.ndarray) -> None:
    if y.size != a.shape[0]:
        raise ValueError(f"y has length {y.size}, expected {a.shape[0]}")
