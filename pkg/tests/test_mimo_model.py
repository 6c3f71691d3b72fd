import math

import numpy as np
import pytest

from qdrd import EnumerationCapError, bit_partitions, enumerate_vectors, make_qam, sample_instance
from qdrd.mimo import (
    ENUM_CAP_ENV,
    candidate_bits,
    candidate_index,
    complex_gaussian,
    constellation_by_name,
    snr_to_noise_var,
    trial_rng,
)


def test_qpsk_points():
    c = make_qam(4)
    assert c.bits_per_symbol == 2
    expected = {complex(a, b) / math.sqrt(2) for a in (-1, 1) for b in (-1, 1)}
    got = {complex(round(p.real, 12), round(p.imag, 12)) for p in c.points}
    assert got == {complex(round(p.real, 12), round(p.imag, 12)) for p in expected}


@pytest.mark.parametrize("order", [4, 16, 64])
def test_unit_energy_and_labels(order):
    c = make_qam(order)
    assert c.size == order == 2**c.bits_per_symbol
    assert len(set(c.labels.tolist())) == order
    assert np.mean(np.abs(c.points) ** 2) == pytest.approx(1.0, abs=1e-12)
    assert len(set(np.round(c.points, 12))) == order


@pytest.mark.parametrize("order", [4, 16, 64])
def test_gray_adjacency(order):
    c = make_qam(order)
    step = 2 / math.sqrt(2 * (order - 1) / 3)
    pairs = 0
    for i in range(order):
        for j in range(i + 1, order):
            d = c.points[j] - c.points[i]
            horizontal = abs(abs(d.real) - step) < 1e-9 and abs(d.imag) < 1e-9
            vertical = abs(abs(d.imag) - step) < 1e-9 and abs(d.real) < 1e-9
            if horizontal or vertical:
                pairs += 1
                assert bin(int(c.labels[i]) ^ int(c.labels[j])).count("1") == 1
    side = int(math.isqrt(order))
    assert pairs == 2 * side * (side - 1)


def test_unsupported_order():
    with pytest.raises(ValueError):
        make_qam(8)
    with pytest.raises(ValueError):
        constellation_by_name("psk8")


@pytest.mark.parametrize("order, n, P", [(4, 1, 4), (4, 2, 16), (16, 2, 256)])
def test_enumeration_size(order, n, P):
    v = enumerate_vectors(make_qam(order), n)
    assert v.shape == (P, n)
    assert len({tuple(row) for row in v.tolist()}) == P


def test_enumeration_lexicographic():
    c = make_qam(4)
    v = enumerate_vectors(c, 2)
    np.testing.assert_array_equal(v[0], [c.points[0], c.points[0]])
    np.testing.assert_array_equal(v[1], [c.points[0], c.points[1]])
    np.testing.assert_array_equal(v[4], [c.points[1], c.points[0]])
    assert candidate_index([1, 0], 4) == 4


def test_enumeration_cap(monkeypatch):
    monkeypatch.setenv(ENUM_CAP_ENV, "100")
    with pytest.raises(EnumerationCapError, match="reduce n"):
        enumerate_vectors(make_qam(16), 2)
    enumerate_vectors(make_qam(4), 3)


@pytest.mark.parametrize("order, n", [(4, 1), (4, 2), (16, 2)])
def test_partitions_balanced_and_disjoint(order, n):
    c = make_qam(order)
    P = c.size**n
    for b in range(n * c.bits_per_symbol):
        part = bit_partitions(c, n, b)
        assert len(part.set1) == len(part.set2) == P // 2
        assert set(part.set1).isdisjoint(part.set2)
        assert set(part.set1) | set(part.set2) == set(range(P))


def test_qpsk_partitions_are_half_planes():
    c = make_qam(4)
    v = enumerate_vectors(c, 1)[:, 0]
    # leading bit picks the in-phase sign, trailing bit the quadrature sign
    re_signs = {np.sign(v[i].real) for i in bit_partitions(c, 1, 0).set1}
    im_signs = {np.sign(v[i].imag) for i in bit_partitions(c, 1, 1).set1}
    assert len(re_signs) == 1 and len(im_signs) == 1


def test_label_bits_match_labels():
    c = make_qam(16)
    bits = candidate_bits(c, 2)
    for idx in (0, 37, 255):
        s0, s1 = divmod(idx, 16)
        label = (int(c.labels[s0]) << 4) | int(c.labels[s1])
        assert "".join("1" if b else "0" for b in bits[idx]) == format(label, "08b")


def test_bit_index_out_of_range():
    with pytest.raises(IndexError):
        bit_partitions(make_qam(4), 2, 4)


def test_noiseless_instance():
    c = make_qam(16)
    inst = sample_instance(4, 2, math.inf, c, seed=3)
    assert inst.noise_var == 0.0
    np.testing.assert_array_equal(inst.y, inst.a @ inst.x_true)
    np.testing.assert_array_equal(inst.x_true, c.points[inst.symbols])


def test_instance_determinism():
    c = make_qam(4)
    a = sample_instance(3, 2, 10.0, c, seed=5, trial=9)
    b = sample_instance(3, 2, 10.0, c, seed=5, trial=9)
    assert a.a.tobytes() == b.a.tobytes() and a.y.tobytes() == b.y.tobytes()
    other = sample_instance(3, 2, 10.0, c, seed=5, trial=10)
    assert not np.array_equal(a.a, other.a)


def test_same_channel_across_snr():
    c = make_qam(4)
    lo = sample_instance(2, 2, 0.0, c, seed=1, trial=4)
    hi = sample_instance(2, 2, 30.0, c, seed=1, trial=4)
    np.testing.assert_array_equal(lo.a, hi.a)
    np.testing.assert_array_equal(lo.symbols, hi.symbols)


def test_snr_convention():
    assert snr_to_noise_var(10.0, 2) == pytest.approx(0.2)
    assert snr_to_noise_var(0.0, 4) == pytest.approx(4.0)


def test_invalid_dims():
    with pytest.raises(ValueError):
        sample_instance(1, 2, 10.0, make_qam(4), seed=0)


def test_empirical_noise_variance():
    var = 0.37
    w = complex_gaussian(trial_rng(11), 100_000, var)
    assert np.mean(np.abs(w) ** 2) == pytest.approx(var, rel=0.02)
    # circular symmetry: equal real/imag power, no pseudo-covariance
    assert np.var(w.real) == pytest.approx(var / 2, rel=0.02)
    assert abs(np.mean(w * w)) < 0.02 * var


def test_channel_entries_unit_variance():
    c = make_qam(4)
    a = np.concatenate([sample_instance(4, 4, 10.0, c, 0, t).a.ravel() for t in range(4000)])
    assert np.mean(np.abs(a) ** 2) == pytest.approx(1.0, rel=0.02)
