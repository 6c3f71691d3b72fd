"""Thin QR, full QR and square-root-free QDRD factorizations.

The thin QR and QDRD share a modified Gram-Schmidt sweep. The thin QR
divides each orthogonalized column by its norm; the QDRD divides it by the
squared norm instead and keeps that squared norm, so it never takes a
square root:

    A = Q R = (Q D^-1) (D^2) (D^-1 R) = Q' D' R'
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import matrix_core as mc
from .counting import OpCounter, ensure_counter

#: A column is treated as dependent when its residual squared norm falls
#: at or below this fraction of ``||A||_F^2``.
RANK_TOL = 1e-24


class SingularMatrixError(np.linalg.LinAlgError):
    """Raised on rank deficiency or a zero pivot."""


@dataclass(frozen=True)
class QrFactors:
    q: np.ndarray
    r: np.ndarray


@dataclass(frozen=True)
class FullQrFactors:
    q_bar: np.ndarray
    r_bar: np.ndarray

    @property
    def n(self) -> int:
        return self.r_bar.shape[1]

    @property
    def q(self) -> np.ndarray:
        """Leading ``n`` columns: the thin ``Q``."""
        return self.q_bar[:, : self.n]

    @property
    def q_tilde(self) -> np.ndarray:
        """Trailing ``m - n`` columns spanning the orthogonal complement."""
        return self.q_bar[:, self.n :]

    @property
    def r(self) -> np.ndarray:
        return self.r_bar[: self.n, :]


@dataclass(frozen=True)
class QdrdFactors:
    q_prime: np.ndarray
    d_prime: np.ndarray
    r_prime: np.ndarray

    def reconstruct(self) -> np.ndarray:
        return (self.q_prime * self.d_prime[None, :]) @ self.r_prime


def _check_tall(a: np.ndarray) -> None:
    m, n = a.shape
    if m < n:
        raise ValueError(f"need rows >= cols, got {m}x{n}")


def _rank_threshold(a: np.ndarray, rank_tol: float) -> float:
    return rank_tol * float(np.sum(a.real**2 + a.imag**2))


def thin_qr_mgs(a, counter: OpCounter | None = None, rank_tol: float = RANK_TOL) -> QrFactors:
    """Thin QR by modified Gram-Schmidt.

    ``R`` has a real positive diagonal. Exactly ``n`` square roots and ``n``
    divisions are spent, all in the ``"normalization"`` phase.

    Raises
    ------
    SingularMatrixError
        If a column's residual squared norm is at or below
        ``rank_tol * ||A||_F^2``.
    """
    a = mc.as_matrix(a)
    _check_tall(a)
    counter = ensure_counter(counter)
    m, n = a.shape
    thresh = _rank_threshold(a, rank_tol)
    v = a.copy()
    q = np.zeros((m, n), dtype=np.complex128)
    r = np.zeros((n, n), dtype=np.complex128)
    with counter.phase("factorization"):
        for i in range(n):
            d = mc.sq_norm2(v[:, i], counter)
            if not d > thresh:
                raise SingularMatrixError(f"column {i} is linearly dependent (residual {d:.3e})")
            with counter.phase("normalization"):
                rii = mc.sqrt(d, counter)
                q[:, i] = mc.scale_real(v[:, i], mc.reciprocal(rii, counter), counter)
            r[i, i] = rii
            for j in range(i + 1, n):
                r[i, j] = mc.inner(q[:, i], v[:, j], counter)
                v[:, j] = mc.sub_scaled(v[:, j], r[i, j], q[:, i], counter)
    return QrFactors(q, r)


def qdrd_sqrt_free(a, counter: OpCounter | None = None, rank_tol: float = RANK_TOL) -> QdrdFactors:
    """Square-root-free factorization ``A = Q' diag(d') R'``.

    With ``v_i`` the i-th orthogonalized column, ``d'_i = ||v_i||^2`` and
    ``q'_i = v_i / d'_i``, so ``Q'^H Q' = diag(1/d')`` and ``R'`` is unit
    upper triangular. Costs one reciprocal per column (``n`` divisions)
    and no square roots.
    """
    a = mc.as_matrix(a)
    _check_tall(a)
    counter = ensure_counter(counter)
    m, n = a.shape
    thresh = _rank_threshold(a, rank_tol)
    v = a.copy()
    q_prime = np.zeros((m, n), dtype=np.complex128)
    d_prime = np.zeros(n)
    r_prime = np.eye(n, dtype=np.complex128)
    with counter.phase("factorization"):
        for i in range(n):
            d = mc.sq_norm2(v[:, i], counter)
            if not d > thresh:
                raise SingularMatrixError(f"column {i} is linearly dependent (d'={d:.3e})")
            d_prime[i] = d
            q_prime[:, i] = mc.scale_real(v[:, i], mc.reciprocal(d, counter), counter)
            for j in range(i + 1, n):
                r_prime[i, j] = mc.inner(q_prime[:, i], v[:, j], counter)
                v[:, j] = mc.sub_scaled(v[:, j], r_prime[i, j], v[:, i], counter)
    return QdrdFactors(q_prime, d_prime, r_prime)


def relate_qdrd_to_qr(f: QdrdFactors, counter: OpCounter | None = None) -> QrFactors:
    """Recover ``Q = Q' D`` and ``R = D R'`` with ``D = sqrt(D')``.

    Reference path only; it spends ``n`` square roots.
    """
    if np.any(f.d_prime <= 0):
        raise ValueError("d_prime entries must be positive")
    counter = ensure_counter(counter)
    with counter.phase("normalization"):
        d = np.array([mc.sqrt(float(x), counter) for x in f.d_prime])
        counter.record(mults=2 * f.q_prime.size + 2 * f.r_prime.size)
    return QrFactors(f.q_prime * d[None, :], d[:, None] * f.r_prime)


def full_qr_householder(a, counter: OpCounter | None = None) -> FullQrFactors:
    """Full QR by Householder reflections.

    ``Q_bar`` is ``m x m`` unitary. Columns are re-phased so the leading
    ``n`` diagonal entries of ``R_bar`` are real and nonnegative, which makes
    ``Q_bar[:, :n]`` agree with :func:`thin_qr_mgs` entrywise. A zero pivot is
    allowed (rank-deficient input).
    """
    a = mc.as_matrix(a)
    _check_tall(a)
    counter = ensure_counter(counter)
    m, n = a.shape
    r = a.copy()
    q = np.eye(m, dtype=np.complex128)
    with counter.phase("factorization"):
        for k in range(n):
            x = r[k:, k]
            normx2 = mc.sq_norm2(x, counter)
            if normx2 == 0.0:
                continue
            with counter.phase("normalization"):
                normx = mc.sqrt(normx2, counter)
                abs_x0 = abs(x[0])
                if abs_x0 > 0.0:
                    counter.record(mults=2, adds=1, sqrts=1, divs=1)
                    phase = x[0] / abs_x0
                else:
                    phase = 1.0
            v = x.copy()
            counter.record(mults=2, adds=2)
            v[0] += phase * normx
            beta = 2.0 * mc.reciprocal(mc.sq_norm2(v, counter), counter)
            counter.record(mults=1)
            # R[k:, k:] -= beta v (v^H R[k:, k:])
            w = mc.matmul(v.conj()[None, :], r[k:, k:], counter)[0]
            r[k:, k:] = mc.sub_outer(r[k:, k:], v, mc.scale_real(w, beta, counter), counter)
            r[k + 1 :, k] = 0.0
            # Q[:, k:] -= beta (Q[:, k:] v) v^H
            u = mc.matvec(q[:, k:], v, counter)
            q[:, k:] = mc.sub_outer(q[:, k:], mc.scale_real(u, beta, counter), v.conj(), counter)
        with counter.phase("normalization"):
            for j in range(n):
                djj = r[j, j]
                mag = abs(djj)
                if mag == 0.0:
                    continue
                counter.record(mults=2, adds=1, sqrts=1, divs=1)
                ph = djj / mag
                r[j, :] = r[j, :] * ph.conjugate()
                q[:, j] = q[:, j] * ph
                counter.record(mults=4 * (n + m), adds=2 * (n + m))
                r[j, j] = mag
    return FullQrFactors(q, r)


def frobenius(a) -> float:
    a = np.asarray(a)
    return math.sqrt(float(np.sum(a.real**2 + a.imag**2)))
