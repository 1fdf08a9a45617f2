"""Characteristic-2 restricted structure and the corrected center map at p = 2.

At p = 2 the naive sum of powers of lifts is not central; the square of a lift
has to be corrected by twice the lift of the restricted square z^[2], which
comes from the exact symplectic form omega = d(eta) with eta = sum Xi_i dX_i.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import linalg
from .center import (
    CenterInvariantError,
    canonical_lift,
    center_ring,
    phi_from_lifts,
    symplectic_form,
    truncate_span,
)
from .poly import (
    MultiPoly,
    OneForm,
    TwoForm,
    VectorField,
    contract1,
    d_one_form,
    de_rham_d,
    lie_derivative_fn,
    vf_p_power,
)
from .weyl import WeylElement, is_central, weyl_pow
from .witt import WittVector


@dataclass(frozen=True)
class SymplecticData:
    d: int
    omega: TwoForm
    eta: OneForm
    _hamilton: np.ndarray  # (W^T)^-1 over F_2, W the coefficient matrix of omega

    @classmethod
    def standard(cls, d: int) -> SymplecticData:
        return _standard(d)

    @property
    def ring(self):
        return self.omega.ring


@lru_cache(maxsize=None)
def _standard(d: int) -> SymplecticData:
    ring = center_ring(2, d)
    omega = symplectic_form(2, d)
    gens = ring.gens
    comps = [ring.zero()] * (2 * d)
    for i in range(d):
        comps[i] = gens[d + i]
    eta = OneForm(ring, tuple(comps))
    if d_one_form(eta) != omega:
        raise CenterInvariantError("d(eta) differs from the deformation 2-form")
    N = 2 * d
    W = np.array([[omega.coefficient(i, j).coefficient((0,) * N) for j in range(N)] for i in range(N)], dtype=np.int64)
    H = linalg.howell_form(np.concatenate([W.T % 2, np.eye(N, dtype=np.int64)], axis=1), 2, 1)
    if H.shape[0] < N or not np.array_equal(H[:N, :N], np.eye(N, dtype=np.int64)):
        raise CenterInvariantError("omega is degenerate")
    return SymplecticData(d, omega, eta, H[:N, N:].copy())


def _sd(sd: SymplecticData | None, ring) -> SymplecticData:
    if sd is None:
        if ring.prime != 2:
            raise ValueError("the restricted structure is implemented for p = 2 only")
        return SymplecticData.standard(ring.nvars // 2)
    return sd


def hamiltonian_field(z: MultiPoly, sd: SymplecticData | None = None) -> VectorField:
    """The field t_z with dz = i_(t_z) omega."""
    sd = _sd(sd, z.ring)
    dz = de_rham_d(z).components
    N = len(dz)
    comps = []
    for i in range(N):
        acc = z.ring.zero()
        for k in range(N):
            if sd._hamilton[i, k]:
                acc = acc + dz[k]
        comps.append(acc)
    return VectorField(z.ring, tuple(comps))


def quadratic_refinement(theta: VectorField, sd: SymplecticData | None = None) -> MultiPoly:
    """Q(theta) = L_theta i_theta eta - i_(theta^[2]) eta."""
    sd = _sd(sd, theta.ring)
    return lie_derivative_fn(theta, contract1(theta, sd.eta)) - contract1(vf_p_power(theta), sd.eta)


def restricted_square(z: MultiPoly, sd: SymplecticData | None = None) -> MultiPoly:
    sd = _sd(sd, z.ring)
    return quadratic_refinement(hamiltonian_field(z, sd), sd)


def chi2(i: int, z: MultiPoly, level: int | None = None, sd: SymplecticData | None = None, lifts=None) -> WeylElement:
    """chi^(i)(z) = (z~^2 + 2 lift(z^[2]))^(2^(i-1)), central at level i; chi^(0) is the lift.

    ``lifts`` optionally replaces the canonical pair (lift of z, lift of z^[2]).
    """
    level = i if level is None else level
    if lifts is None:
        zl = canonical_lift(z, level)
        sq = canonical_lift(restricted_square(z, sd), level) if i else None
    else:
        zl, sq = lifts
    if i == 0:
        return zl
    return weyl_pow(weyl_pow(zl, 2) + sq.scale(2), 2 ** (i - 1))


def phi_even(m: int, w: WittVector, check: bool = True, sd: SymplecticData | None = None, lifts=None) -> WeylElement:
    """sum_(i<m) 2^i chi^(m-i)(z_(i+1)) + 2^m z~_(m+1) at level m.

    ``lifts[i]`` may supply the pair (lift of z_(i+1), lift of z_(i+1)^[2]).
    """
    if w.p != 2:
        raise ValueError("phi_even is the p = 2 map")
    if len(w) != m + 1:
        raise ValueError(f"expected a Witt vector of length {m + 1}, got {len(w)}")
    p, d = 2, w.ring.nvars // 2
    total = WeylElement(p, m, d)
    for i, z in enumerate(w.components):
        pair = None if lifts is None else lifts[i]
        if not z and pair is None:
            continue
        term = chi2(m - i if i < m else 0, z, m, sd, pair)
        total = total + term.scale(2**i)
    if check and not is_central(total):
        raise CenterInvariantError(f"phi_even_{m}({w}) is not central")
    return total


def naive_phi(m: int, w: WittVector) -> WeylElement:
    """The uncorrected formula sum_i 2^i z~_(i+1)^(2^(m-i)) at p = 2 (no centrality claim)."""
    if w.p != 2:
        raise ValueError("naive_phi is the uncorrected p = 2 map")
    return phi_from_lifts([canonical_lift(z, m) for z in w.components], 2)


def naive_map_witness(d: int = 1) -> dict:
    """Evidence that the uncorrected map fails at p = 2 while phi_even does not.

    Uses X = X1, Xi = Xi1 at m = 1: the naive map is not additive on
    (X, 0) + (Xi, 0) and not multiplicative on (X, 0) * (Xi, 0).
    """
    ring = center_ring(2, d)
    X, Xi, zero = ring.gen(0), ring.gen(d), ring.zero()
    a = WittVector.of(2, [X, zero])
    b = WittVector.of(2, [Xi, zero])
    return {
        "naive_sum_of_images": naive_phi(1, a) + naive_phi(1, b),
        "naive_image_of_sum": naive_phi(1, a + b),
        "naive_product_of_images": naive_phi(1, a) * naive_phi(1, b),
        "naive_image_of_product": naive_phi(1, a * b),
        "naive_square": weyl_pow(canonical_lift(X * Xi, 1), 2),
        "corrected_sum": phi_even(1, a + b),
        "corrected_product": phi_even(1, a * b),
        "corrected_images": (phi_even(1, a), phi_even(1, b)),
    }


def phi_even_generators(m: int, d: int, max_degree: int) -> list[WeylElement]:
    """phi_even(V^j [mu]) for monomials mu, as far as the Weyl degree stays <= max_degree."""
    ring = center_ring(2, d)
    out = []
    for j in range(m + 1):
        scale = 2 ** (m - j + 1)
        for e in ring.monomials_up_to(max_degree // scale):
            mu = ring.monomial(e)
            gen = chi2(m - j, mu, m) if j < m else canonical_lift(mu, m)
            out.append(gen.scale(2**j))
    return out


def phi_even_submodule(m: int, d: int, D: int, margin: int | None = None):
    margin = D if margin is None else margin
    return truncate_span(phi_even_generators(m, d, D + margin), 2, m, d, D)


def verify_restricted_identities(trials: int, seed: int, d: int = 1, deg: int | None = None) -> dict:
    from .suites import run_suite

    return run_suite("restricted-identities", p=2, m=1, d=d, trials=trials, seed=seed, deg=deg)


def verify_phi_even(m: int, trials: int, seed: int, d: int = 1, deg: int | None = None) -> dict:
    from .suites import run_suite

    return run_suite("phi-even-hom", p=2, m=m, d=d, trials=trials, seed=seed, deg=deg)
