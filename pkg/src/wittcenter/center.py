"""Center of the Weyl algebra over Z/p^(m+1) and the maps into it.

Mod-p central elements are polynomials in x_i^p and d_i^p; through that
identification ``CenterPoly`` is F_p[X_1..X_d, Xi_1..Xi_d] with X_i <-> x_i^p and
Xi_i <-> d_i^p. ``canonical_lift`` fixes one lift per polynomial; everything
that should not depend on that choice is tested against perturbed lifts.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import linalg
from .poly import MultiPoly, OneForm, PolyRing, TwoForm, VectorField, contract2, de_rham_d
from .ring import GF, StructureError, check_prime
from .weyl import (
    WeylElement,
    commutator,
    is_central,
    monomials_up_to,
    weyl_lift,
    weyl_pdiv,
    weyl_pow,
    weyl_reduce,
)
from .witt import WittVector


class CenterInvariantError(AssertionError):
    """A result that must be central (or p-divisible) was not."""


@lru_cache(maxsize=None)
def center_ring(p: int, d: int) -> PolyRing:
    names = tuple(f"X{i}" for i in range(1, d + 1)) + tuple(f"Xi{i}" for i in range(1, d + 1))
    return PolyRing(names, GF(check_prime(p)))


def _dims(ring: PolyRing) -> tuple[int, int]:
    p = ring.prime
    if p is None or ring.nvars % 2:
        raise StructureError(f"{ring!r} is not a center ring F_p[X.., Xi..]")
    return p, ring.nvars // 2


def canonical_lift(f: MultiPoly, level: int) -> WeylElement:
    """X_i -> x_i^p, Xi_i -> d_i^p monomialwise, x's left of d's, coefficients in [0, p)."""
    p, d = _dims(f.ring)
    if not f.terms:
        return WeylElement(p, level, d)
    exps = np.array(list(f.terms), dtype=np.int64) * p
    coeffs = np.array(list(f.terms.values()), dtype=np.int64)
    return WeylElement(p, level, d, exps, coeffs)


def from_central(u: WeylElement) -> MultiPoly:
    """Read a central element, reduced mod p, as a polynomial in X = x^p, Xi = d^p."""
    r = weyl_reduce(u, 0)
    if (r.exps % r.p).any():
        raise CenterInvariantError(f"not a polynomial in x^p, d^p: {r}")
    ring = center_ring(r.p, r.d)
    return ring.from_dict({tuple(int(v) for v in e // r.p): int(c) for e, c in zip(r.exps, r.coeffs)})


def chi(i: int, z: MultiPoly, level: int | None = None) -> WeylElement:
    """z -> canonical_lift(z)^(p^i), central at level i (odd p)."""
    p, _ = _dims(z.ring)
    if p == 2 and i >= 1:
        raise ValueError("chi^(i) for i >= 1 needs odd p; use poisson2.chi2 at p = 2")
    level = i if level is None else level
    return weyl_pow(canonical_lift(z, level), p**i)


def pi(u: WeylElement) -> WeylElement:
    return u.scale(u.p)


def phi_from_lifts(lifts, p: int) -> WeylElement:
    """sum_i p^i * lifts[i]^(p^(m-i)) for given lifts of z_1..z_(m+1)."""
    m = len(lifts) - 1
    total = lifts[0].zero()
    for i, t in enumerate(lifts):
        if t:
            total = total + weyl_pow(t, p ** (m - i)).scale(p**i)
    return total


def phi_odd(m: int, w: WittVector, lifts=None, check: bool = True) -> WeylElement:
    p = w.p
    if p == 2:
        raise ValueError("phi_odd needs odd p; use poisson2.phi_even at p = 2")
    if len(w) != m + 1:
        raise ValueError(f"expected a Witt vector of length {m + 1}, got {len(w)}")
    if lifts is None:
        lifts = [canonical_lift(z, m) for z in w.components]
    out = phi_from_lifts(lifts, p)
    if check and not is_central(out):
        raise CenterInvariantError(f"phi_{m}({w}) is not central")
    return out


# ---------------------------------------------------------------------------
# brackets


def bracket_general(x: WeylElement, y: WeylElement, i: int, j: int, n: int | None = None) -> WeylElement:
    """(1/p^(j+1)) [x~, y~] mod p^(i+1) for x central at level i, y central at level j.

    Lifts are the canonical representatives at level n (default i + j + 1).
    """
    if not i <= j:
        raise ValueError("need i <= j")
    n = i + j + 1 if n is None else n
    if n < i + j + 1:
        raise ValueError(f"ambient level {n} too small for i={i}, j={j}")
    c = commutator(weyl_lift(x, n), weyl_lift(y, n))
    try:
        q = weyl_pdiv(c, j + 1)
    except ArithmeticError as exc:
        raise CenterInvariantError(f"[x~, y~] not divisible by p^{j + 1}") from exc
    return weyl_reduce(q, i)


def bracket0(z: MultiPoly, w: MultiPoly, n: int = 1) -> MultiPoly:
    """Deformation bracket {z, w} = (1/p)[z~, w~] mod p on the mod-p center."""
    if n < 1:
        raise ValueError("the bracket needs ambient level n >= 1")
    c = commutator(canonical_lift(z, n), canonical_lift(w, n))
    try:
        q = weyl_pdiv(c, 1)
    except ArithmeticError as exc:
        raise CenterInvariantError("commutator of central lifts is not divisible by p") from exc
    return from_central(q)


def coordinate_brackets(p: int, d: int, n: int = 1) -> list[list[MultiPoly]]:
    """Matrix of {v_a, v_b} over the coordinates (X_1..X_d, Xi_1..Xi_d)."""
    gens = center_ring(p, d).gens
    return [[bracket0(a, b, n) for b in gens] for a in gens]


@lru_cache(maxsize=None)
def symplectic_form(p: int, d: int) -> TwoForm:
    """omega = inverse of the computed bracket matrix, as a 2-form on Z_0."""
    ring = center_ring(p, d)
    B = coordinate_brackets(p, d)
    N = 2 * d
    if any(B[a][b].degree() > 0 for a in range(N) for b in range(N)):
        raise CenterInvariantError("coordinate brackets are not constant")
    mat = np.array([[B[a][b].coefficient((0,) * N) for b in range(N)] for a in range(N)], dtype=np.int64)
    inv = _inverse_mod_p(mat, p)
    entries = {(a, b): ring.from_int(int(inv[a, b])) for a in range(N) for b in range(a + 1, N)}
    return TwoForm.from_pairs(ring, entries)


def _inverse_mod_p(mat: np.ndarray, p: int) -> np.ndarray:
    N = mat.shape[0]
    H = linalg.howell_form(np.concatenate([mat % p, np.eye(N, dtype=np.int64)], axis=1), p, 1)
    if H.shape[0] < N or not np.array_equal(H[:N, :N], np.eye(N, dtype=np.int64)):
        raise CenterInvariantError("bracket matrix is degenerate")
    return H[:N, N:]


# ---------------------------------------------------------------------------
# Serre morphism


def pi_derivation(y: WeylElement, m: int) -> VectorField:
    """Pi_y(x) = [y~, x~] / p^(m+1) mod p on the coordinate functions."""
    p, d = y.p, y.d
    ring = center_ring(p, d)
    yl = weyl_lift(y, m + 1)
    comps = []
    for v in ring.gens:
        c = commutator(yl, canonical_lift(v, m + 1))
        try:
            comps.append(from_central(weyl_pdiv(c, m + 1)))
        except ArithmeticError as exc:
            raise CenterInvariantError(f"[y~, x~] not divisible by p^{m + 1}") from exc
    return VectorField(ring, tuple(comps))


def pi_form(y: WeylElement, m: int) -> OneForm:
    """i_(Pi_y) omega for y central at level m."""
    if y.level < m:
        raise ValueError(f"element lives at level {y.level} < {m}")
    return contract2(pi_derivation(weyl_reduce(y, m), m), symplectic_form(y.p, y.d))


def serre_map(w: WittVector, m: int | None = None) -> OneForm:
    """S(w) = sum_i z_(i+1)^(p^(m-i) - 1) dz_(i+1)."""
    m = len(w) - 1 if m is None else m
    if len(w) != m + 1:
        raise ValueError(f"expected a Witt vector of length {m + 1}")
    p = w.p
    ring = w.ring
    total = OneForm.zero(ring)
    for i, z in enumerate(w.components):
        total = total + de_rham_d(z).scale(z ** (p ** (m - i) - 1))
    return total


# ---------------------------------------------------------------------------
# bounded-degree submodules of A_m


@dataclass(frozen=True, eq=False)
class SubmoduleBasis:
    """Submodule of the degree <= D part of A_m, as a Howell matrix over Z/p^(m+1)."""

    p: int
    level: int
    d: int
    D: int
    ambient: tuple
    matrix: np.ndarray

    def __eq__(self, other):
        if not isinstance(other, SubmoduleBasis):
            return NotImplemented
        return (
            (self.p, self.level, self.d, self.D, self.ambient) == (other.p, other.level, other.d, other.D, other.ambient)
            and self.matrix.shape == other.matrix.shape
            and bool(np.array_equal(self.matrix, other.matrix))
        )

    __hash__ = None

    @property
    def rank(self) -> int:
        return self.matrix.shape[0]

    def vector(self, u: WeylElement) -> np.ndarray:
        return to_vector(u, self.ambient)

    def contains(self, u: WeylElement) -> bool:
        return linalg.span_contains(self.matrix, self.vector(u), self.p, self.level + 1)

    def elements(self) -> list[WeylElement]:
        return [from_vector(row, self.ambient, self.p, self.level, self.d) for row in self.matrix]


def to_vector(u: WeylElement, ambient) -> np.ndarray:
    index = {e: i for i, e in enumerate(ambient)}
    v = np.zeros(len(ambient), dtype=np.int64)
    for e, c in zip(u.exps, u.coeffs):
        key = tuple(int(t) for t in e)
        if key not in index:
            raise ValueError(f"monomial {key} outside the ambient basis")
        v[index[key]] = c
    return v


def from_vector(v, ambient, p: int, level: int, d: int) -> WeylElement:
    nz = np.flatnonzero(v)
    if not nz.size:
        return WeylElement(p, level, d)
    return WeylElement(p, level, d, np.array([ambient[i] for i in nz], dtype=np.int64), np.asarray(v)[nz])


def _submodule(rows: np.ndarray, p: int, level: int, d: int, D: int, ambient) -> SubmoduleBasis:
    H = linalg.howell_form(rows, p, level + 1)
    return SubmoduleBasis(p, level, d, D, tuple(ambient), H)


def center_kernel(p: int, m: int, d: int, D: int) -> SubmoduleBasis:
    """Central elements of degree <= D, solved as the kernel of the commutator map."""
    check_prime(p)
    basis = monomials_up_to(d, D)
    cols = monomials_up_to(d, max(D - 1, 0))
    ncol = len(cols)
    A = np.zeros((len(basis), 2 * d * ncol), dtype=np.int64)
    gens = [WeylElement.x(p, m, d, i) for i in range(d)] + [WeylElement.dx(p, m, d, i) for i in range(d)]
    for r, e in enumerate(basis):
        mono = WeylElement.from_terms(p, m, d, {e: 1})
        for g, gen in enumerate(gens):
            A[r, g * ncol : (g + 1) * ncol] = to_vector(commutator(mono, gen), cols)
    K = linalg.kernel(A, p, m + 1)
    return SubmoduleBasis(p, m, d, D, tuple(basis), K)


def truncate_span(generators, p: int, level: int, d: int, D: int) -> SubmoduleBasis:
    """Span of the generators intersected with the degree <= D part.

    Howell form with high-degree columns first: rows whose high part vanishes
    span exactly the elements of degree <= D.
    """
    generators = [g for g in generators if g]
    top = max([D] + [g.exps.sum(axis=1).max() for g in generators])
    high = [e for e in monomials_up_to(d, int(top)) if sum(e) > D]
    low = monomials_up_to(d, D)
    order = high[::-1] + low
    if not generators:
        return SubmoduleBasis(p, level, d, D, tuple(low), np.zeros((0, len(low)), dtype=np.int64))
    rows = np.array([to_vector(g, order) for g in generators], dtype=np.int64)
    H = linalg.howell_form(rows, p, level + 1)
    kept = linalg.intersect_leading_zero(H, len(high))
    return _submodule(kept, p, level, d, D, low) if kept.shape[0] else SubmoduleBasis(
        p, level, d, D, tuple(low), np.zeros((0, len(low)), dtype=np.int64)
    )


def phi_generators(p: int, m: int, d: int, max_degree: int) -> list[WeylElement]:
    """p^j * canonical_lift(mu)^(p^(m-j)) for monomials mu, j <= m, Weyl degree <= max_degree."""
    ring = center_ring(p, d)
    out = []
    for j in range(m + 1):
        scale = p ** (m - j + 1)
        for e in ring.monomials_up_to(max_degree // scale):
            lift = canonical_lift(ring.monomial(e), m)
            out.append(weyl_pow(lift, p ** (m - j)).scale(p**j))
    return out


def phi_image_submodule(p: int, m: int, d: int, D: int, margin: int | None = None) -> SubmoduleBasis:
    """Span of the phi_m generators, truncated to degree <= D.

    Generators up to degree D + margin are used so that lower-degree
    combinations of higher generators are not missed.
    """
    if p == 2:
        raise ValueError("use poisson2.phi_even_submodule at p = 2")
    margin = D if margin is None else margin
    return truncate_span(phi_generators(p, m, d, D + margin), p, m, d, D)


def verify_phi_ring_hom(p: int, m: int, trials: int, seed: int, d: int = 1, deg: int | None = None) -> dict:
    from .suites import run_suite

    return run_suite("phi-odd-hom", p=p, m=m, d=d, trials=trials, seed=seed, deg=deg)
