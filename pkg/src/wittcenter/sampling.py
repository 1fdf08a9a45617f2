"""Seeded random elements for the verification suites and tests."""

from __future__ import annotations

import numpy as np

from .center import center_ring
from .poly import MultiPoly, PolyRing, VectorField
from .weyl import WeylElement, monomials_up_to
from .witt import WittVector


def trial_rngs(seed: int, trials: int) -> list[np.random.Generator]:
    """Independent per-trial generators derived from one seed."""
    return [np.random.default_rng(s) for s in np.random.SeedSequence(seed).spawn(trials)]


def random_poly(rng, ring: PolyRing, deg: int, max_terms: int = 4, allow_zero: bool = False) -> MultiPoly:
    p = ring.prime
    monos = ring.monomials_up_to(deg)
    while True:
        n = int(rng.integers(1, max_terms + 1))
        terms = {}
        for idx in rng.choice(len(monos), size=min(n, len(monos)), replace=False):
            c = int(rng.integers(1, p)) if p else int(rng.integers(-9, 10))
            terms[monos[int(idx)]] = c
        f = ring.from_dict(terms)
        if f or allow_zero:
            return f


def random_center_poly(rng, p: int, d: int, deg: int, max_terms: int = 4) -> MultiPoly:
    return random_poly(rng, center_ring(p, d), deg, max_terms)


def random_witt(rng, p: int, d: int, length: int, deg: int, max_terms: int = 3, zero_prob: float = 0.2) -> WittVector:
    """Witt vector over F_p[X, Xi]; each component is zero with probability ``zero_prob``."""
    ring = center_ring(p, d)
    comps = [
        ring.zero() if rng.random() < zero_prob else random_poly(rng, ring, deg, max_terms) for _ in range(length)
    ]
    return WittVector(p, tuple(comps), ring)


def random_int_witt(rng, p: int, length: int, bound: int = 50) -> WittVector:
    from .ring import ZZ

    return WittVector(p, tuple(int(v) for v in rng.integers(-bound, bound + 1, size=length)), ZZ)


def random_weyl(rng, p: int, level: int, d: int, deg: int, max_terms: int = 3) -> WeylElement:
    monos = monomials_up_to(d, deg)
    n = int(rng.integers(1, max_terms + 1))
    pick = rng.choice(len(monos), size=min(n, len(monos)), replace=False)
    M = p ** (level + 1)
    terms = {monos[int(i)]: int(rng.integers(1, M)) for i in pick}
    return WeylElement.from_terms(p, level, d, terms)


def random_vector_field(rng, ring: PolyRing, deg: int, max_terms: int = 3) -> VectorField:
    comps = []
    for _ in range(ring.nvars):
        comps.append(ring.zero() if rng.random() < 0.25 else random_poly(rng, ring, deg, max_terms))
    return VectorField(ring, tuple(comps))
