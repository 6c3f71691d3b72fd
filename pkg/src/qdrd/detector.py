"""Exhaustive finite-set detectors and soft-output LLRs.

Four metrics are compared over the same candidate enumeration:

``oracle``           ``||y - A x||^2``
``qr``               ``||Q^H y - R x||^2``
``qdrd-weighted``    ``sum_i d'_i |(Q'^H y)_i - (R' x)_i|^2``
``qdrd-unweighted``  ``sum_i |(Q'^H y)_i - (R' x)_i|^2``

The first three share their argmin. The last one rescales each residual
component by ``1/d'_i`` and can pick a different vector. All argmins break
ties toward the lowest enumeration index.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import matrix_core as mc
from .counting import OpCounter, ensure_counter
from .factorization import QdrdFactors, QrFactors, qdrd_sqrt_free, thin_qr_mgs
from .mimo import Constellation, MimoInstance, candidate_bits, enumerate_vectors, sample_instance

METHODS = ("oracle", "qr", "qdrd-weighted", "qdrd-unweighted")


@dataclass(frozen=True)
class DetectionResult:
    best_index: int
    best_vector: np.ndarray
    min_metric: float


@dataclass(frozen=True)
class LlrResult:
    """Per-bit ``min(bit = 0) - min(bit = 1)``; positive favours a 1."""

    llr: np.ndarray
    min0: np.ndarray
    min1: np.ndarray


def candidate_metrics(
    inst: MimoInstance,
    c: Constellation,
    method: str,
    counter: OpCounter | None = None,
    factors: QrFactors | QdrdFactors | None = None,
) -> np.ndarray:
    """Metric of every candidate in enumeration order, shape ``(P,)``."""
    if method not in METHODS:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    counter = ensure_counter(counter)
    cands = enumerate_vectors(c, inst.n)
    if method == "oracle":
        with counter.phase("detection"):
            return mc.row_sq_norms(mc.dense_residuals(inst.y, inst.a, cands, counter), counter=counter)
    if method == "qr":
        f = factors if factors is not None else thin_qr_mgs(inst.a, counter)
        with counter.phase("detection"):
            z = mc.matvec(mc.hermitian(f.q), inst.y, counter)
            e = mc.triangular_residuals(z, f.r, cands, counter=counter)
            return mc.row_sq_norms(e, counter=counter)
    f = factors if factors is not None else qdrd_sqrt_free(inst.a, counter)
    with counter.phase("detection"):
        z = mc.matvec(mc.hermitian(f.q_prime), inst.y, counter)
        e = mc.triangular_residuals(z, f.r_prime, cands, unit_diagonal=True, counter=counter)
        weights = f.d_prime if method == "qdrd-weighted" else None
        return mc.row_sq_norms(e, weights, counter=counter)


def detect(inst, c, method: str, counter: OpCounter | None = None, factors=None) -> DetectionResult:
    return result_from_metrics(candidate_metrics(inst, c, method, counter, factors), c, inst.n)


def result_from_metrics(metrics: np.ndarray, c: Constellation, n: int) -> DetectionResult:
    best = int(np.argmin(metrics))
    return DetectionResult(best, enumerate_vectors(c, n)[best], float(metrics[best]))


def oracle_ml(inst, c, counter: OpCounter | None = None) -> DetectionResult:
    """Exhaustive minimizer of ``||y - A x||^2``."""
    return detect(inst, c, "oracle", counter)


def detect_qr(inst, c, counter: OpCounter | None = None, factors: QrFactors | None = None) -> DetectionResult:
    return detect(inst, c, "qr", counter, factors)


def detect_qdrd_weighted(inst, c, counter: OpCounter | None = None, factors: QdrdFactors | None = None) -> DetectionResult:
    """QDRD detection with the ``d'`` weights restored; no square roots."""
    return detect(inst, c, "qdrd-weighted", counter, factors)


def detect_qdrd_unweighted(inst, c, counter: OpCounter | None = None, factors: QdrdFactors | None = None) -> DetectionResult:
    """QDRD detection that drops ``D'``. Not equivalent to ML in general."""
    return detect(inst, c, "qdrd-unweighted", counter, factors)


def llr_soft(inst, c, method: str = "qr", counter: OpCounter | None = None, factors=None) -> LlrResult:
    """Max-log LLRs as raw differences of partition minima (no ``1/sigma^2``)."""
    return llr_from_metrics(candidate_metrics(inst, c, method, counter, factors), c, inst.n)


def llr_from_metrics(metrics: np.ndarray, c: Constellation, n: int) -> LlrResult:
    bits = candidate_bits(c, n)
    min0 = np.where(bits, np.inf, metrics[:, None]).min(axis=0)
    min1 = np.where(bits, metrics[:, None], np.inf).min(axis=0)
    return LlrResult(min0 - min1, min0, min1)


@dataclass(frozen=True)
class Counterexample:
    trial: int
    instance: MimoInstance
    oracle: DetectionResult
    unweighted: DetectionResult
    weighted: DetectionResult = field(repr=False)


def find_counterexample(m: int, n: int, c: Constellation, snr_db: float, max_trials: int, seed: int, sampler=None):
    """First sampled instance on which the unweighted QDRD argmin differs from ML.

    ``sampler(m, n, snr_db, c, seed, trial)`` defaults to
    :func:`sample_instance`. Returns ``None`` if nothing is found within
    ``max_trials``.
    """
    if max_trials < 1:
        raise ValueError("max_trials must be >= 1")
    sampler = sampler or sample_instance
    for trial in range(max_trials):
        inst = sampler(m, n, snr_db, c, seed, trial)
        ref = oracle_ml(inst, c)
        f = qdrd_sqrt_free(inst.a)
        unw = detect_qdrd_unweighted(inst, c, factors=f)
        if unw.best_index != ref.best_index:
            return Counterexample(trial, inst, ref, unw, detect_qdrd_weighted(inst, c, factors=f))
    return None
