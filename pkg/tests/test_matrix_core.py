import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qdrd import matrix_core as mc
from qdrd.counting import NullCounter, OpCounter

from conftest import crandn


def test_matmul_identity():
    np.testing.assert_array_equal(mc.matmul(np.eye(2), np.eye(2)), np.eye(2))


def test_matmul_permutation():
    out = mc.matmul([[0, 1], [1, 0]], [[1], [2]])
    np.testing.assert_array_equal(out, [[2], [1]])


def test_matmul_conjugate_product():
    assert mc.matmul([[1 + 1j]], [[1 - 1j]])[0, 0] == 2


def test_matmul_dimension_mismatch():
    with pytest.raises(ValueError):
        mc.matmul(np.ones((2, 3)), np.ones((2, 3)))


def test_matmul_associative(rng):
    for _ in range(50):
        p, k, q, r = rng.integers(1, 8, size=4)
        a, b, c = crandn(rng, p, k), crandn(rng, k, q), crandn(rng, q, r)
        left = mc.matmul(mc.matmul(a, b), c)
        right = mc.matmul(a, mc.matmul(b, c))
        assert np.linalg.norm(left - right) <= 1e-12 * np.linalg.norm(left)


def test_hermitian():
    s = np.array([[1.0, 2.0], [2.0, 5.0]])
    np.testing.assert_array_equal(mc.hermitian(s), s)
    assert mc.hermitian([[1j]])[0, 0] == -1j


def test_hermitian_involution(rng):
    a = crandn(rng, 4, 3)
    np.testing.assert_array_equal(mc.hermitian(mc.hermitian(a)), a)
    assert mc.hermitian(a).shape == (3, 4)


@pytest.mark.parametrize(
    "v, expected",
    [(np.zeros(3), 0.0), ([3, 4], 25.0), ([1 + 1j, 1 - 1j], 4.0)],
)
def test_sq_norm2(v, expected):
    assert mc.sq_norm2(v) == expected


@settings(max_examples=50, deadline=None)
@given(st.lists(st.complex_numbers(max_magnitude=1e3, allow_nan=False, allow_infinity=False), min_size=1, max_size=8))
def test_sq_norm2_matches_hermitian_product(vals):
    v = np.array(vals, dtype=complex)[:, None]
    ref = (mc.hermitian(v) @ v)[0, 0].real
    assert mc.sq_norm2(v) == pytest.approx(ref, rel=1e-12, abs=1e-300)


# hand-derived real-operation counts

def test_matmul_count():
    c = OpCounter()
    mc.matmul(np.ones((2, 3)), np.ones((3, 4)), c)
    # 24 complex mults, 2*4*(3-1)=16 complex adds
    assert c.total().as_tuple() == (2 * 24 + 2 * 16, 4 * 24, 0, 0)


def test_sq_norm2_count():
    c = OpCounter()
    mc.sq_norm2(np.ones(5), c)
    assert c.total().as_tuple() == (9, 10, 0, 0)


def test_inner_and_axpy_counts():
    c = OpCounter()
    mc.inner(np.ones(3), np.ones(3), c)
    assert c.total().as_tuple() == (2 * 3 + 2 * 2, 12, 0, 0)
    c = OpCounter()
    mc.sub_scaled(np.ones(3), 1j, np.ones(3), c)
    assert c.total().as_tuple() == (12, 12, 0, 0)


def test_scalar_counts():
    c = OpCounter()
    mc.reciprocal(4.0, c)
    mc.sqrt(4.0, c)
    assert c.total().as_tuple() == (0, 0, 1, 1)
    c = OpCounter()
    z = mc.complex_reciprocal(3 + 4j, c)
    assert z == pytest.approx(1 / (3 + 4j))
    assert c.total().divs == 1


def test_triangular_residual_counts():
    n, P = 3, 5
    cands = np.ones((P, n))
    r = np.triu(np.ones((n, n)))
    c = OpCounter()
    mc.triangular_residuals(np.zeros(n), r, cands, counter=c)
    # per candidate: 6 complex mults, 3 term adds + 3 subs
    assert c.total().as_tuple() == (P * (2 * 6 + 2 * 6), P * 24, 0, 0)
    c = OpCounter()
    e = mc.triangular_residuals(np.zeros(n), r, cands, unit_diagonal=True, counter=c)
    assert c.total().mults == P * 4 * 3
    np.testing.assert_allclose(e, -(cands @ r.T))


def test_weighting_adds_one_mult_per_entry(rng):
    e = crandn(rng, 7, 3)
    plain, weighted = OpCounter(), OpCounter()
    w = rng.uniform(0.5, 2, 3)
    a = mc.row_sq_norms(e, counter=plain)
    b = mc.row_sq_norms(e, w, counter=weighted)
    assert weighted.total().mults - plain.total().mults == 7 * 3
    np.testing.assert_allclose(b, (np.abs(e) ** 2 * w).sum(axis=1))
    np.testing.assert_allclose(a, (np.abs(e) ** 2).sum(axis=1))


def test_phases_are_disjoint():
    c = OpCounter()
    with c.phase("detection"):
        c.record(mults=2)
        with c.phase("normalization"):
            c.record(sqrts=1)
    assert c["detection"].as_tuple() == (0, 2, 0, 0)
    assert c["normalization"].as_tuple() == (0, 0, 0, 1)
    with pytest.raises(ValueError):
        with c.phase("bogus"):
            pass


def test_null_counter_discards():
    c = NullCounter()
    mc.matmul(np.eye(3), np.eye(3), c)
    assert c.total().as_tuple() == (0, 0, 0, 0)


def test_text_format_round_trip(rng):
    a = crandn(rng, 3, 2)
    text = mc.format_matrix(a)
    assert text.splitlines()[0] == "3 2"
    np.testing.assert_array_equal(mc.parse_matrix(text), a)


def test_parse_plain_and_pair_tokens():
    a = mc.parse_matrix("2 2\n1.5:-0.25 3\n0:1 -2:0\n")
    np.testing.assert_array_equal(a, [[1.5 - 0.25j, 3], [1j, -2]])


@pytest.mark.parametrize("text", ["", "2 2\n1 2\n", "1 2\n1 2 3\n", "x y\n1\n"])
def test_parse_rejects_malformed(text):
    with pytest.raises(ValueError):
        mc.parse_matrix(text)
