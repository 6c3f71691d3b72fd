"""Constellations, candidate enumeration and random MIMO instances.

Points are stored so that ``points[i]`` carries bit label ``i``. The
concatenated label of a candidate vector is then its enumeration index
written in ``n * bits_per_symbol`` binary digits, first symbol most
significant.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

DEFAULT_ENUM_CAP = 1 << 20
ENUM_CAP_ENV = "QDRD_ENUM_CAP"


class EnumerationCapError(ValueError):
    """Raised when exhaustive enumeration would exceed the configured cap."""


@dataclass(frozen=True, eq=False)
class Constellation:
    name: str
    points: np.ndarray
    bits_per_symbol: int
    labels: np.ndarray

    @property
    def size(self) -> int:
        return self.points.size


@dataclass(frozen=True)
class BitPartition:
    """Candidate indices split by one bit: ``set1`` has the bit set."""

    bit_index: int
    set1: np.ndarray
    set0: np.ndarray

    @property
    def set2(self) -> np.ndarray:
        return self.set0


@dataclass(frozen=True, eq=False)
class MimoInstance:
    """``y = a @ x_true + noise``.

    ``x_true``/``symbols`` are ``None`` when the instance comes from files
    rather than from :func:`sample_instance`.
    """

    a: np.ndarray
    y: np.ndarray
    x_true: np.ndarray | None = None
    symbols: np.ndarray | None = None
    noise_var: float | None = None

    @property
    def m(self) -> int:
        return self.a.shape[0]

    @property
    def n(self) -> int:
        return self.a.shape[1]


def gray_code(bits: int) -> np.ndarray:
    i = np.arange(1 << bits)
    return i ^ (i >> 1)


def make_qam(order: int) -> Constellation:
    """Square Gray-mapped QAM with unit average energy.

    The leading half of each label selects the in-phase level and the
    trailing half the quadrature level; each axis is Gray coded so that
    neighbours differ in one bit.
    """
    if order not in (4, 16, 64):
        raise ValueError(f"unsupported QAM order {order}; use 4, 16 or 64")
    k = int(math.log2(order))
    h = k // 2
    side = 1 << h
    levels = 2.0 * np.arange(side) - (side - 1)
    # level position of each Gray label value on one axis
    pos = np.empty(side, dtype=int)
    pos[gray_code(h)] = np.arange(side)
    labels = np.arange(order)
    re = levels[pos[labels >> h]]
    im = levels[pos[labels & (side - 1)]]
    scale = math.sqrt(2.0 * (order - 1) / 3.0)
    points = (re + 1j * im) / scale
    return Constellation(f"qam{order}", points, k, labels)


def constellation_by_name(name: str) -> Constellation:
    names = {"qam4": 4, "qam16": 16, "qam64": 64}
    if name not in names:
        raise ValueError(f"unknown constellation {name!r}; choose from {sorted(names)}")
    return make_qam(names[name])


def enum_cap() -> int:
    return int(os.environ.get(ENUM_CAP_ENV, DEFAULT_ENUM_CAP))


def candidate_count(c: Constellation, n: int) -> int:
    return c.size**n


def _check_cap(c: Constellation, n: int) -> None:
    if n < 1:
        raise ValueError("n must be >= 1")
    P = candidate_count(c, n)
    cap = enum_cap()
    if P > cap:
        raise EnumerationCapError(
            f"{c.name}^{n} has {P} candidates, above the cap of {cap}; "
            f"reduce n or the constellation order (or raise {ENUM_CAP_ENV})"
        )


@lru_cache(maxsize=32)
def _symbol_indices(M: int, n: int) -> np.ndarray:
    idx = np.indices((M,) * n).reshape(n, -1).T
    idx.setflags(write=False)
    return idx


@lru_cache(maxsize=32)
def _label_bits(M: int, n: int, k: int) -> np.ndarray:
    nbits = n * k
    c = np.arange(M**n)[:, None]
    bits = (c >> (nbits - 1 - np.arange(nbits))[None, :]) & 1
    out = bits.astype(bool)
    out.setflags(write=False)
    return out


def candidate_symbols(c: Constellation, n: int) -> np.ndarray:
    """``(P, n)`` constellation indices in lexicographic order."""
    _check_cap(c, n)
    return _symbol_indices(c.size, n)


def enumerate_vectors(c: Constellation, n: int) -> np.ndarray:
    """All ``|X|^n`` candidate vectors as rows of a ``(P, n)`` array."""
    return c.points[candidate_symbols(c, n)]


def candidate_bits(c: Constellation, n: int) -> np.ndarray:
    """``(P, n * bits_per_symbol)`` boolean label matrix."""
    _check_cap(c, n)
    return _label_bits(c.size, n, c.bits_per_symbol)


def bit_partitions(c: Constellation, n: int, bit_index: int) -> BitPartition:
    nbits = n * c.bits_per_symbol
    if not 0 <= bit_index < nbits:
        raise IndexError(f"bit index {bit_index} out of range [0, {nbits})")
    col = candidate_bits(c, n)[:, bit_index]
    return BitPartition(bit_index, np.flatnonzero(col), np.flatnonzero(~col))


def snr_to_noise_var(snr_db: float, n: int) -> float:
    """Noise variance for per-receive-antenna SNR ``n / sigma^2``."""
    if math.isinf(snr_db) and snr_db > 0:
        return 0.0
    return n / 10.0 ** (snr_db / 10.0)


def trial_rng(seed: int, trial: int = 0) -> np.random.Generator:
    """Independent counter-based stream per ``(seed, trial)``."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, trial])))


def complex_gaussian(rng: np.random.Generator, shape, var: float = 1.0) -> np.ndarray:
    """Circularly-symmetric complex Gaussian samples with variance ``var``."""
    s = rng.standard_normal((2,) + tuple(np.atleast_1d(shape)))
    return math.sqrt(var / 2.0) * (s[0] + 1j * s[1])


def sample_instance(m: int, n: int, snr_db: float, c: Constellation, seed: int, trial: int = 0) -> MimoInstance:
    """Draw a Rayleigh channel, uniform symbols and AWGN.

    Draw order is fixed (channel, symbols, unit noise) and the noise is
    scaled afterwards, so the same ``(seed, trial)`` gives the same channel
    and symbols at every SNR.
    """
    if not m >= n >= 1:
        raise ValueError(f"need m >= n >= 1, got m={m}, n={n}")
    rng = trial_rng(seed, trial)
    a = complex_gaussian(rng, (m, n))
    symbols = rng.integers(0, c.size, size=n)
    w = complex_gaussian(rng, m)
    noise_var = snr_to_noise_var(snr_db, n)
    x = c.points[symbols]
    y = a @ x + math.sqrt(noise_var) * w
    return MimoInstance(a, y, x, symbols, noise_var)


def candidate_index(symbols, M: int) -> int:
    """Enumeration index of a symbol-index vector."""
    idx = 0
    for s in symbols:
        idx = idx * M + int(s)
    return idx
