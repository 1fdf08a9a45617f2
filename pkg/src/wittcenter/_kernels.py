"""Hot integer kernels with a numba path and a pure-numpy fallback.

Two kernels dominate runtime: Howell-form row reduction over Z/p^k and the
normal-ordered product of Weyl algebra elements. Both operate on small int64
residues (moduli stay far below 2**31, so products never overflow).

Set ``WITTCENTER_DISABLE_NUMBA=1`` to force the numpy path; the choice can
also be changed at runtime with :func:`set_backend`.
"""

from __future__ import annotations

import itertools
import os

import numpy as np

try:
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover
    HAVE_NUMBA = False

_DISABLED = os.environ.get("WITTCENTER_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes"}
BACKEND = "numba" if HAVE_NUMBA and not _DISABLED else "numpy"

# dense accumulation buffers larger than this switch to sparse sort/merge
DENSE_LIMIT = 1 << 24


def set_backend(name: str) -> None:
    global BACKEND
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    BACKEND = name


def get_backend() -> str:
    return BACKEND


# ---------------------------------------------------------------------------
# Howell form over Z/p^k


def _modinv(a, m):
    # extended Euclid; a must be a unit mod m
    t, newt = 0, 1
    r, newr = m, a % m
    while newr != 0:
        q = r // newr
        t, newt = newt, t - q * newt
        r, newr = newr, r - q * newr
    return t % m


def _howell_py(H, nrows, p, k):
    """Numpy Howell reduction of ``H[:nrows]`` in place; returns the rank."""
    M = p**k
    ncols = H.shape[1]
    r = 0
    for col in range(ncols):
        if r >= nrows:
            break
        column = H[r:nrows, col]
        nz = np.flatnonzero(column)
        if nz.size == 0:
            continue
        vals = column[nz]
        v = np.zeros(nz.size, dtype=np.int64)
        rem = vals.copy()
        while True:
            mask = rem % p == 0
            if not mask.any():
                break
            v[mask] += 1
            rem[mask] //= p
        best = r + nz[int(np.argmin(v))]
        bv = int(v.min())
        if best != r:
            H[[r, best]] = H[[best, r]]
        pv = p**bv
        u = int(H[r, col]) // pv
        if u != 1:
            H[r] = H[r] * _modinv(u, M) % M
        if r + 1 < nrows:
            q = H[r + 1 : nrows, col] // pv
            sel = np.flatnonzero(q)
            if sel.size:
                rows = r + 1 + sel
                H[rows] = (H[rows] - q[sel, None] * H[r]) % M
        if r > 0:
            q = H[:r, col] // pv
            sel = np.flatnonzero(q)
            if sel.size:
                H[sel] = (H[sel] - q[sel, None] * H[r]) % M
        if bv > 0:
            H[nrows] = H[r] * p ** (k - bv) % M
            nrows += 1
        r += 1
    return r


if HAVE_NUMBA:

    @njit(cache=True)
    def _modinv_nb(a, m):
        t, newt = 0, 1
        r, newr = m, a % m
        while newr != 0:
            q = r // newr
            t, newt = newt, t - q * newt
            r, newr = newr, r - q * newr
        return t % m

    @njit(cache=True)
    def _howell_nb(H, nrows, p, k):
        M = 1
        for _ in range(k):
            M *= p
        ncols = H.shape[1]
        r = 0
        for col in range(ncols):
            if r >= nrows:
                break
            best = -1
            bv = k
            for i in range(r, nrows):
                x = H[i, col]
                if x != 0:
                    v = 0
                    while x % p == 0:
                        x //= p
                        v += 1
                    if v < bv:
                        bv = v
                        best = i
                        if v == 0:
                            break
            if best < 0:
                continue
            if best != r:
                for j in range(ncols):
                    tmp = H[r, j]
                    H[r, j] = H[best, j]
                    H[best, j] = tmp
            pv = 1
            for _ in range(bv):
                pv *= p
            u = H[r, col] // pv
            if u != 1:
                uinv = _modinv_nb(u, M)
                for j in range(ncols):
                    H[r, j] = H[r, j] * uinv % M
            for i in range(r + 1, nrows):
                q = H[i, col] // pv
                if q != 0:
                    for j in range(col, ncols):
                        H[i, j] = (H[i, j] - q * H[r, j]) % M
            for i in range(r):
                q = H[i, col] // pv
                if q != 0:
                    for j in range(col, ncols):
                        H[i, j] = (H[i, j] - q * H[r, j]) % M
            if bv > 0:
                s = M // pv
                for j in range(ncols):
                    H[nrows, j] = H[r, j] * s % M
                nrows += 1
            r += 1
        return r


def howell_inplace(A: np.ndarray, p: int, k: int, backend: str | None = None) -> np.ndarray:
    """Return the Howell form of the rows of ``A`` over Z/p^k (zero rows dropped)."""
    A = np.asarray(A, dtype=np.int64) % p**k
    rows, cols = A.shape
    H = np.zeros((rows + cols + 1, cols), dtype=np.int64)
    H[:rows] = A
    backend = backend or BACKEND
    if backend == "numba":
        rank = _howell_nb(H, rows, p, k)
    else:
        rank = _howell_py(H, rows, p, k)
    return H[:rank].copy()


# ---------------------------------------------------------------------------
# Normal-ordered Weyl product
#
# (x^a d^b)(x^c d^e) = sum_k prod_i C(b_i,k_i) C(c_i,k_i) k_i! x^(a+c-k) d^(b+e-k)


def _weyl_dense_py(e1, c1, e2, c2, d, M, binom, fact, kmax, dims):
    size = int(np.prod(dims))
    out = np.zeros(size, dtype=np.int64)
    strides = np.ones(2 * d, dtype=np.int64)
    for i in range(2 * d - 2, -1, -1):
        strides[i] = strides[i + 1] * dims[i + 1]
    xs2 = e2[:, :d]
    base2 = e2 @ strides
    for s in range(e1.shape[0]):
        b = e1[s, d:]
        cs = int(c1[s])
        base = int(e1[s] @ strides)
        ranges = [range(min(int(b[i]), kmax) + 1) for i in range(d)]
        for kv in itertools.product(*ranges):
            kv = np.asarray(kv, dtype=np.int64)
            ok = np.all(xs2 >= kv, axis=1)
            if not ok.any():
                continue
            coef = np.full(int(ok.sum()), cs, dtype=np.int64) * c2[ok] % M
            for i in range(d):
                ki = int(kv[i])
                if ki == 0:
                    continue
                coef = coef * (binom[int(b[i]), ki] * fact[ki] % M) % M
                coef = coef * binom[xs2[ok, i], ki] % M
            shift = int(kv @ strides[:d]) + int(kv @ strides[d:])
            idx = base + base2[ok] - shift
            np.add.at(out, idx, coef)
        if s % 64 == 63:
            out %= M
    out %= M
    return out


if HAVE_NUMBA:

    @njit(cache=True)
    def _weyl_dense_nb(e1, c1, e2, c2, d, M, binom, fact, kmax, dims):
        size = 1
        for i in range(2 * d):
            size *= dims[i]
        out = np.zeros(size, dtype=np.int64)
        strides = np.ones(2 * d, dtype=np.int64)
        for i in range(2 * d - 2, -1, -1):
            strides[i] = strides[i + 1] * dims[i + 1]
        kv = np.zeros(d, dtype=np.int64)
        klim = np.zeros(d, dtype=np.int64)
        for s in range(e1.shape[0]):
            for t in range(e2.shape[0]):
                cc = c1[s] * c2[t] % M
                if cc == 0:
                    continue
                base = 0
                for i in range(2 * d):
                    base += (e1[s, i] + e2[t, i]) * strides[i]
                for i in range(d):
                    lim = e1[s, d + i]
                    if e2[t, i] < lim:
                        lim = e2[t, i]
                    if kmax < lim:
                        lim = kmax
                    klim[i] = lim
                    kv[i] = 0
                while True:
                    coef = cc
                    shift = 0
                    for i in range(d):
                        ki = kv[i]
                        if ki:
                            coef = coef * binom[e1[s, d + i], ki] % M
                            coef = coef * binom[e2[t, i], ki] % M
                            coef = coef * fact[ki] % M
                            shift += ki * (strides[i] + strides[d + i])
                    if coef != 0:
                        idx = base - shift
                        out[idx] = (out[idx] + coef) % M
                    j = 0
                    while j < d:
                        kv[j] += 1
                        if kv[j] <= klim[j]:
                            break
                        kv[j] = 0
                        j += 1
                    if j == d:
                        break
        return out


def _tables(M, p, level_k, nmax):
    from .ring import factorial_valuation

    kmax = 0
    while factorial_valuation(kmax + 1, p) < level_k:
        kmax += 1
    binom = np.zeros((nmax + 1, kmax + 1), dtype=np.int64)
    for n in range(nmax + 1):
        c = 1
        for kk in range(min(n, kmax) + 1):
            binom[n, kk] = c % M
            c = c * (n - kk) // (kk + 1)
    fact = np.ones(kmax + 1, dtype=np.int64)
    f = 1
    for kk in range(1, kmax + 1):
        f *= kk
        fact[kk] = f % M
    return binom, fact, kmax


def weyl_product(e1, c1, e2, c2, d, p, k, backend=None):
    """Product of two normal-ordered elements given as (exponents, coeffs) arrays.

    Returns exponent rows in lexicographic order with nonzero coefficients mod p^k.
    """
    M = p**k
    if e1.shape[0] == 0 or e2.shape[0] == 0:
        return np.zeros((0, 2 * d), dtype=np.int64), np.zeros(0, dtype=np.int64)
    nmax = int(max(e1.max(initial=0), e2.max(initial=0)))
    binom, fact, kmax = _tables(M, p, k, nmax)
    dims = (e1.max(axis=0) + e2.max(axis=0) + 1).astype(np.int64)
    backend = backend or BACKEND
    size = int(np.prod(dims.astype(object)))
    if size > DENSE_LIMIT:
        return _weyl_sparse(e1, c1, e2, c2, d, M, binom, fact, kmax)
    if backend == "numba":
        out = _weyl_dense_nb(e1, c1, e2, c2, d, M, binom, fact, kmax, dims)
    else:
        out = _weyl_dense_py(e1, c1, e2, c2, d, M, binom, fact, kmax, dims)
    idx = np.flatnonzero(out)
    exps = np.stack(np.unravel_index(idx, tuple(int(x) for x in dims)), axis=1).astype(np.int64)
    return exps.reshape(-1, 2 * d), out[idx]


def _weyl_sparse(e1, c1, e2, c2, d, M, binom, fact, kmax):
    # sparse accumulation for products whose exponent box is too large to hold densely
    xs2 = e2[:, :d]
    acc_e, acc_c = [], []
    pending = 0
    out_e = np.zeros((0, 2 * d), dtype=np.int64)
    out_c = np.zeros(0, dtype=np.int64)
    for s in range(e1.shape[0]):
        b = e1[s, d:]
        ranges = [range(min(int(b[i]), kmax) + 1) for i in range(d)]
        for kv in itertools.product(*ranges):
            kv = np.asarray(kv, dtype=np.int64)
            ok = np.all(xs2 >= kv, axis=1)
            if not ok.any():
                continue
            coef = int(c1[s]) * c2[ok] % M
            for i in range(d):
                ki = int(kv[i])
                if ki:
                    coef = coef * (binom[int(b[i]), ki] * fact[ki] % M) % M
                    coef = coef * binom[xs2[ok, i], ki] % M
            shift = np.concatenate([kv, kv])
            acc_e.append(e1[s] + e2[ok] - shift)
            acc_c.append(coef)
            pending += coef.size
        if pending > 1 << 20:
            out_e, out_c = canonicalize(np.concatenate([out_e] + acc_e), np.concatenate([out_c] + acc_c), M)
            acc_e, acc_c, pending = [], [], 0
    return canonicalize(np.concatenate([out_e] + acc_e), np.concatenate([out_c] + acc_c), M)


def canonicalize(exps: np.ndarray, coeffs: np.ndarray, M: int):
    """Merge duplicate exponent rows, reduce mod M, drop zeros, sort lexicographically."""
    if exps.shape[0] == 0:
        return exps.astype(np.int64), coeffs.astype(np.int64)
    uniq, inv = np.unique(exps, axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    summed = np.zeros(uniq.shape[0], dtype=np.int64)
    np.add.at(summed, inv, coeffs % M)
    summed %= M
    keep = summed != 0
    return uniq[keep].astype(np.int64), summed[keep]
