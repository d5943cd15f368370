import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from exactcat import linalg as la

PRIMES = st.sampled_from([2, 3, 5, 7])


@st.composite
def matrices(draw, max_side=6):
    p = draw(PRIMES)
    r = draw(st.integers(0, max_side))
    c = draw(st.integers(0, max_side))
    a = draw(arrays(np.int64, (r, c), elements=st.integers(0, p - 1)))
    return a, p


def test_field_rejects_composites():
    assert la.FieldPrime(7).inv(3) == 5
    for bad in (0, 1, 4, 9, 15):
        with pytest.raises(ValueError):
            la.FieldPrime(bad)


def test_rref_examples():
    r, piv = la.rref(la.identity(2), 2)
    assert np.array_equal(r, la.identity(2)) and piv == [0, 1]
    r, piv = la.rref(la.zeros(3, 3), 2)
    assert not r.any() and piv == []
    r, piv = la.rref(np.array([[1, 1], [1, 1]]), 2)
    assert r.tolist() == [[1, 1], [0, 0]] and piv == [0]


def test_solve_examples():
    b = np.array([[1, 0, 1], [0, 1, 1]])
    assert np.array_equal(la.solve(la.identity(2), b, 2), b)
    assert la.solve(la.zeros(2, 2), np.array([[1], [0]]), 2) is None
    assert la.solve(np.array([[1, 1]]), np.array([[1]]), 2).tolist() == [[1], [0]]
    with pytest.raises(ValueError):
        la.solve(la.identity(2), la.zeros(3, 1), 2)


def test_solve_example_matches_enumeration():
    # the solution with free variable 0 is the first of the two solutions found by enumeration
    sols = [v for v in ([0, 0], [0, 1], [1, 0], [1, 1]) if (v[0] + v[1]) % 2 == 1]
    assert sols == [[0, 1], [1, 0]]
    assert la.solve(np.array([[1, 1]]), np.array([[1]]), 2)[:, 0].tolist() in sols


def test_kernel_examples():
    assert la.kernel_basis(la.identity(3), 5).shape == (3, 0)
    assert np.array_equal(la.kernel_basis(la.zeros(3, 3), 2), la.identity(3))
    assert la.kernel_basis(np.array([[1, 1]]), 2)[:, 0].tolist() == [1, 1]


@given(matrices())
def test_rank_nullity(data):
    a, p = data
    k = la.kernel_basis(a, p)
    assert la.rank(a, p) + k.shape[1] == a.shape[1]
    if a.size:
        assert not (a @ k % p).any()


@given(matrices())
def test_rref_idempotent(data):
    a, p = data
    r, piv = la.rref(a, p)
    r2, piv2 = la.rref(r, p)
    assert np.array_equal(r, r2) and piv == piv2


@given(matrices(), st.data())
def test_solve_consistent(data, draw):
    a, p = data
    x = draw.draw(arrays(np.int64, (a.shape[1], 2), elements=st.integers(0, p - 1)))
    b = la.matmul(a, x, p) if a.shape[0] else la.zeros(0, 2)
    sol = la.solve(a, b, p)
    assert sol is not None
    assert np.array_equal(la.matmul(a, sol, p) if a.shape[0] else la.zeros(0, 2), b)


def test_matmul_large_prime_is_exact():
    p = 2**31 - 1
    a = np.full((3, 3), p - 1, dtype=np.int64)
    assert la.matmul(a, a, p).tolist() == [[3] * 3] * 3


@given(matrices(max_side=5))
def test_span_builder_dimension_is_rank(data):
    a, p = data
    sb = la.SpanBuilder(a.shape[1], p)
    sb.add_many(a)
    assert len(sb) == la.rank(a, p)
    for row in a:
        assert sb.contains(row)


def test_inverse_roundtrip():
    t = np.array([[1, 2], [3, 4]])
    inv = la.inverse(t, 5)
    assert np.array_equal(la.matmul(t, inv, 5), la.identity(2))
    with pytest.raises(ValueError):
        la.inverse(np.array([[1, 1], [1, 1]]), 2)
