"""Monte Carlo driver, operation ledger and flat-file outputs."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from . import matrix_core as mc
from .counting import OpCounter, ensure_counter
from .detector import METHODS, Counterexample, DetectionResult, detect, oracle_ml
from .factorization import qdrd_sqrt_free, thin_qr_mgs
from .lstsq import solve_ls_qdrd, solve_ls_qr
from .mimo import (
    Constellation,
    MimoInstance,
    candidate_count,
    complex_gaussian,
    constellation_by_name,
    sample_instance,
    trial_rng,
)

CSV_HEADER = ("snr_db", "method", "trials", "ser", "mismatch_rate", "mean_adds", "mean_mults", "mean_divs", "mean_sqrts")


@dataclass(frozen=True)
class ExperimentConfig:
    m: int
    n: int
    constellation: str
    snr_db_list: Sequence[float]
    trials: int
    seed: int = 0
    methods: Sequence[str] = METHODS

    def __post_init__(self):
        if not self.m >= self.n >= 1:
            raise ValueError(f"need m >= n >= 1, got m={self.m}, n={self.n}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        bad = [meth for meth in self.methods if meth not in METHODS]
        if bad:
            raise ValueError(f"unknown method(s) {bad}; expected a subset of {METHODS}")


@dataclass(frozen=True)
class ExperimentRow:
    snr_db: float
    method: str
    trials: int
    ser: float
    mismatch_rate: float
    mean_adds: float
    mean_mults: float
    mean_divs: float
    mean_sqrts: float

    def as_csv_fields(self) -> list[str]:
        return [repr(float(self.snr_db)), self.method, str(self.trials)] + [
            repr(float(v))
            for v in (self.ser, self.mismatch_rate, self.mean_adds, self.mean_mults, self.mean_divs, self.mean_sqrts)
        ]


def run_pipeline(inst: MimoInstance, c: Constellation, method: str, counter: OpCounter | None = None) -> DetectionResult:
    """Factor once, solve the unconstrained LS, then detect.

    ``oracle`` skips the first two stages.
    """
    counter = ensure_counter(counter)
    if method == "oracle":
        return oracle_ml(inst, c, counter)
    if method == "qr":
        f = thin_qr_mgs(inst.a, counter)
        solve_ls_qr(inst.a, inst.y, counter, factors=f)
    elif method in ("qdrd-weighted", "qdrd-unweighted"):
        f = qdrd_sqrt_free(inst.a, counter)
        solve_ls_qdrd(inst.a, inst.y, counter, factors=f)
    else:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    return detect(inst, c, method, counter, factors=f)


def run_montecarlo(cfg: ExperimentConfig) -> list[ExperimentRow]:
    """One row per ``(snr, method)``, all methods run on identical instances."""
    c = constellation_by_name(cfg.constellation)
    candidate_count(c, cfg.n)
    rows = []
    for snr in cfg.snr_db_list:
        sym_err = dict.fromkeys(cfg.methods, 0)
        mismatch = dict.fromkeys(cfg.methods, 0)
        ops = {meth: np.zeros(4) for meth in cfg.methods}
        for trial in range(cfg.trials):
            inst = sample_instance(cfg.m, cfg.n, snr, c, cfg.seed, trial)
            ref = oracle_ml(inst, c).best_index
            for meth in cfg.methods:
                counter = OpCounter()
                res = run_pipeline(inst, c, meth, counter)
                sym = _symbols_of(res.best_index, c.size, cfg.n)
                sym_err[meth] += int(np.count_nonzero(sym != inst.symbols))
                mismatch[meth] += res.best_index != ref
                ops[meth] += counter.total().as_tuple()
        for meth in cfg.methods:
            means = ops[meth] / cfg.trials
            rows.append(
                ExperimentRow(
                    snr_db=float(snr),
                    method=meth,
                    trials=cfg.trials,
                    ser=sym_err[meth] / (cfg.trials * cfg.n),
                    mismatch_rate=mismatch[meth] / cfg.trials,
                    mean_adds=float(means[0]),
                    mean_mults=float(means[1]),
                    mean_divs=float(means[2]),
                    mean_sqrts=float(means[3]),
                )
            )
    return rows


def _symbols_of(index: int, M: int, n: int) -> np.ndarray:
    out = np.empty(n, dtype=int)
    for i in range(n - 1, -1, -1):
        index, out[i] = divmod(index, M)
    return out


def rows_to_csv(rows: Sequence[ExperimentRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in rows:
        w.writerow(r.as_csv_fields())
    return buf.getvalue()


def gated_gaussian_matrix(rng: np.random.Generator, m: int, n: int, min_residual: float = 1e-3) -> np.ndarray:
    """Complex Gaussian ``m x n`` matrix, redrawn until well conditioned.

    A draw is kept when every orthogonalized column keeps at least
    ``min_residual`` of ``||A||_F`` (checked on squared norms, so no
    square roots), which bounds the conditioning of the LS comparisons.
    """
    while True:
        a = complex_gaussian(rng, (m, n))
        d = qdrd_sqrt_free(a, rank_tol=0.0).d_prime
        if d.min() >= min_residual**2 * float(np.sum(np.abs(a) ** 2)):
            return a


# -- operation ledger ---------------------------------------------------------


@dataclass(frozen=True)
class LedgerCheck:
    name: str
    expected: int
    actual: int

    @property
    def ok(self) -> bool:
        return self.expected == self.actual


@dataclass
class OpReport:
    n: int
    p: int
    checks: list[LedgerCheck] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(ch.ok for ch in self.checks)

    def text(self) -> str:
        lines = [f"op ledger: n={self.n} P={self.p}"]
        for ch in self.checks:
            flag = "PASS" if ch.ok else "FAIL"
            lines.append(f"[{flag}] {ch.name}: expected {ch.expected}, got {ch.actual}")
        lines.extend(self.notes)
        return "\n".join(lines)


def op_report(counters: Mapping[str, OpCounter], n: int, p: int) -> OpReport:
    """Check the integer savings/cost ledger between pipelines.

    ``counters`` maps pipeline names (``qr``, ``qdrd-weighted``,
    ``qdrd-unweighted``) to counters from :func:`run_pipeline`. Checks are
    emitted only for the pipelines present.
    """
    rep = OpReport(n, p)
    qr = counters.get("qr")
    w = counters.get("qdrd-weighted")
    u = counters.get("qdrd-unweighted")
    for name, cnt in (("qdrd-weighted", w), ("qdrd-unweighted", u)):
        if cnt is not None:
            rep.checks.append(LedgerCheck(f"{name} pipeline sqrts", 0, cnt.total().sqrts))
            rep.checks.append(LedgerCheck(f"{name} back-substitution divs", 0, cnt["back-substitution"].divs))
    if qr is not None:
        rep.checks.append(LedgerCheck("qr pipeline sqrts", n, qr.total().sqrts))
        rep.checks.append(LedgerCheck("qr back-substitution divs", n, qr["back-substitution"].divs))
        rep.notes.append(f"qr normalization divs: {qr['normalization'].divs}")
    if w is not None:
        rep.notes.append(f"qdrd factorization divs: {w['factorization'].divs}")
    if w is not None and u is not None:
        rep.checks.append(
            LedgerCheck("weighted - unweighted detection mults", n * p, w["detection"].mults - u["detection"].mults)
        )
    return rep


def ledger_for_instance(inst: MimoInstance, c: Constellation) -> tuple[OpReport, dict[str, OpCounter]]:
    counters = {}
    for meth in ("qr", "qdrd-weighted", "qdrd-unweighted"):
        counters[meth] = OpCounter()
        run_pipeline(inst, c, meth, counters[meth])
    return op_report(counters, inst.n, candidate_count(c, inst.n)), counters


# -- noise statistics ---------------------------------------------------------


@dataclass(frozen=True)
class NoiseStats:
    cov_q: np.ndarray
    cov_q_prime: np.ndarray
    expected_q: np.ndarray
    expected_q_prime: np.ndarray
    d_prime: np.ndarray


def noise_statistics(a, noise_var: float, draws: int, seed: int) -> NoiseStats:
    """Empirical covariance of ``Q^H n`` and ``Q'^H n`` for white noise ``n``."""
    a = mc.as_matrix(a)
    f = thin_qr_mgs(a)
    g = qdrd_sqrt_free(a)
    noise = complex_gaussian(trial_rng(seed), (a.shape[0], draws), noise_var)
    zq = f.q.conj().T @ noise
    zp = g.q_prime.conj().T @ noise
    cov_q = zq @ zq.conj().T / draws
    cov_p = zp @ zp.conj().T / draws
    n = a.shape[1]
    return NoiseStats(cov_q, cov_p, noise_var * np.eye(n), noise_var * np.diag(1.0 / g.d_prime), g.d_prime)


# -- counterexample files -----------------------------------------------------


def format_counterexample(ce: Counterexample, c: Constellation, snr_db: float, seed: int) -> str:
    inst = ce.instance
    lines = [
        f"constellation {c.name}",
        f"m {inst.m}",
        f"n {inst.n}",
        f"snr_db {float(snr_db)!r}",
        f"seed {seed}",
        f"trial {ce.trial}",
        f"noise_var {float(inst.noise_var)!r}",
        f"oracle_index {ce.oracle.best_index}",
        f"unweighted_index {ce.unweighted.best_index}",
        f"weighted_index {ce.weighted.best_index}",
    ]
    out = "\n".join(lines) + "\n"
    for name, mat in (("A", inst.a), ("y", inst.y), ("x_true", inst.x_true)):
        out += f"[{name}]\n" + mc.format_matrix(mat)
    return out


def counterexample_summary(ce: Counterexample) -> str:
    return (
        f"counterexample at trial {ce.trial}: unweighted QDRD picked candidate "
        f"{ce.unweighted.best_index}, ML picked {ce.oracle.best_index}, "
        f"weighted QDRD picked {ce.weighted.best_index}"
    )


@dataclass(frozen=True)
class StoredCounterexample:
    meta: dict
    instance: MimoInstance

    @property
    def constellation(self) -> Constellation:
        return constellation_by_name(self.meta["constellation"])


def parse_counterexample(text: str) -> StoredCounterexample:
    meta: dict = {}
    blocks: dict[str, list[str]] = {}
    current = None
    for ln in text.splitlines():
        s = ln.strip()
        if not s:
            continue
        if s.startswith("[") and s.endswith("]"):
            current = s[1:-1]
            blocks[current] = []
        elif current is not None:
            blocks[current].append(s)
        else:
            key, val = s.split(None, 1)
            meta[key] = val
    for key in ("m", "n", "seed", "trial", "oracle_index", "unweighted_index", "weighted_index"):
        meta[key] = int(meta[key])
    for key in ("snr_db", "noise_var"):
        meta[key] = float(meta[key])
    a = mc.parse_matrix("\n".join(blocks["A"]))
    y = mc.as_vector(mc.parse_matrix("\n".join(blocks["y"])))
    x = mc.as_vector(mc.parse_matrix("\n".join(blocks["x_true"])))
    return StoredCounterexample(meta, MimoInstance(a, y, x, None, meta["noise_var"]))


def read_counterexample(path) -> StoredCounterexample:
    return parse_counterexample(Path(path).read_text())
