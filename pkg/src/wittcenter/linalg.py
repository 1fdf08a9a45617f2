"""Linear algebra over Z/p^k via Howell normal form.

Howell form is the canonical row form for submodules of (Z/p^k)^n: two
matrices span the same submodule iff their Howell forms are identical. It
also has the property that the rows whose first ``t`` entries vanish span
exactly the elements of the row module whose first ``t`` entries vanish,
which gives kernels and intersections with coordinate subspaces.
"""

from __future__ import annotations

import numpy as np

from . import _kernels


def howell_form(A, p: int, k: int) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    if A.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    if A.shape[0] == 0:
        return np.zeros((0, A.shape[1]), dtype=np.int64)
    return _kernels.howell_inplace(A, p, k)


def _pivots(H: np.ndarray) -> list[int]:
    return [int(np.flatnonzero(row)[0]) for row in H]


def reduce_vector(H: np.ndarray, v, p: int, k: int) -> tuple[np.ndarray, np.ndarray]:
    """Reduce ``v`` against a Howell matrix.

    Returns ``(remainder, quotients)`` with ``v = quotients @ H + remainder``.
    The remainder is zero iff ``v`` lies in the row span.
    """
    M = p**k
    r = np.asarray(v, dtype=np.int64) % M
    q = np.zeros(H.shape[0], dtype=np.int64)
    for i, col in enumerate(_pivots(H)):
        piv = int(H[i, col])
        x = int(r[col])
        if x == 0:
            continue
        if x % piv:
            continue
        c = x // piv
        q[i] = c
        r = (r - c * H[i]) % M
    return r, q


def span_contains(H: np.ndarray, v, p: int, k: int) -> bool:
    r, _ = reduce_vector(H, v, p, k)
    return not r.any()


def kernel(A, p: int, k: int) -> np.ndarray:
    """Howell basis of {x : x @ A == 0} (row vectors) over Z/p^k."""
    A = np.asarray(A, dtype=np.int64) % p**k
    n, m = A.shape
    aug = np.concatenate([A, np.eye(n, dtype=np.int64)], axis=1)
    H = howell_form(aug, p, k)
    zero_left = ~H[:, :m].any(axis=1)
    return howell_form(H[zero_left, m:], p, k)


def solve(A, b, p: int, k: int):
    """Find x with ``A @ x == b`` over Z/p^k, or None when no solution exists."""
    A = np.asarray(A, dtype=np.int64) % p**k
    b = np.asarray(b, dtype=np.int64) % p**k
    rows, cols = A.shape
    # rows of aug are (A e_j, e_j); reducing (b, 0) leaves (0, -x)
    aug = np.concatenate([A.T, np.eye(cols, dtype=np.int64)], axis=1)
    H = howell_form(aug, p, k)
    r, _ = reduce_vector(H, np.concatenate([b, np.zeros(cols, dtype=np.int64)]), p, k)
    if r[:rows].any():
        return None
    return (-r[rows:]) % p**k


def intersect_leading_zero(H: np.ndarray, t: int) -> np.ndarray:
    """Rows of a Howell matrix whose first ``t`` entries vanish (a Howell basis
    of the submodule of elements with those coordinates zero)."""
    keep = ~H[:, :t].any(axis=1)
    return H[keep][:, t:]
