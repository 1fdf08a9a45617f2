import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wittcenter import _kernels, linalg


def span_set(rows, M, width):
    """All Z/M-combinations of the rows (brute force), zero included."""
    rows = np.asarray(rows, dtype=np.int64).reshape(-1, width)
    out = {tuple([0] * width)}
    for coeffs in itertools.product(range(M), repeat=rows.shape[0]):
        out.add(tuple(int(v) for v in (np.asarray(coeffs, dtype=np.int64) @ rows) % M))
    return out


small = st.sampled_from([(2, 1), (2, 2), (3, 1), (2, 3), (3, 2)])


@st.composite
def matrices(draw, max_rows=3, max_cols=3):
    p, k = draw(small)
    r = draw(st.integers(1, max_rows))
    c = draw(st.integers(1, max_cols))
    vals = draw(st.lists(st.integers(0, p**k - 1), min_size=r * c, max_size=r * c))
    return p, k, np.array(vals, dtype=np.int64).reshape(r, c)


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_howell_spans_same_module(case):
    p, k, A = case
    M = p**k
    H = linalg.howell_form(A, p, k)
    assert span_set(H, M, A.shape[1]) == span_set(A, M, A.shape[1])


@settings(max_examples=60, deadline=None)
@given(matrices())
def test_howell_is_canonical(case):
    p, k, A = case
    rng = np.random.default_rng(A.sum())
    # invertible row operations and duplicate rows give the same form
    U = np.eye(A.shape[0], dtype=np.int64)
    for i in range(A.shape[0] - 1):
        U[i + 1, i] = rng.integers(0, p**k)
    B = np.vstack([(U @ A) % p**k, A[:1] * p])
    assert np.array_equal(linalg.howell_form(A, p, k), linalg.howell_form(B, p, k))


@settings(max_examples=60, deadline=None)
@given(matrices(max_rows=4, max_cols=3))
def test_kernel_matches_brute_force(case):
    p, k, A = case
    M = p**k
    K = linalg.kernel(A, p, k)
    brute = {x for x in itertools.product(range(M), repeat=A.shape[0]) if not ((np.array(x) @ A) % M).any()}
    assert span_set(K, M, A.shape[0]) == brute


@settings(max_examples=60, deadline=None)
@given(matrices(), st.data())
def test_solve_finds_solutions_when_they_exist(case, data):
    p, k, A = case
    M = p**k
    x0 = np.array(data.draw(st.lists(st.integers(0, M - 1), min_size=A.shape[1], max_size=A.shape[1])))
    b = (A @ x0) % M
    x = linalg.solve(A, b, p, k)
    assert x is not None and np.array_equal((A @ x) % M, b)


def test_solve_reports_inconsistent_system():
    A = np.array([[2]])
    assert linalg.solve(A, np.array([1]), 2, 2) is None


def test_intersect_leading_zero():
    A = np.array([[1, 1, 0], [0, 1, 1]])
    H = linalg.howell_form(A, 3, 1)
    sub = linalg.intersect_leading_zero(H, 1)
    # elements with first coordinate 0 are multiples of (0, 1, 1)
    assert span_set(sub, 3, 2) == {(0, 0), (1, 1), (2, 2)}


@pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")
@pytest.mark.parametrize("p,k", [(2, 1), (2, 3), (3, 2), (5, 2)])
def test_backends_agree_on_howell(p, k):
    rng = np.random.default_rng(p * 10 + k)
    for _ in range(20):
        A = rng.integers(0, p**k, size=(rng.integers(1, 12), rng.integers(1, 12)))
        A = A * (rng.random(A.shape) < 0.5)
        assert np.array_equal(_kernels.howell_inplace(A, p, k, "numba"), _kernels.howell_inplace(A, p, k, "numpy"))
