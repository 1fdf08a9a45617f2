import itertools

import numpy as np
import pytest
from oracles import product_by_action

from wittcenter.center import (
    CenterInvariantError,
    bracket0,
    bracket_general,
    canonical_lift,
    center_kernel,
    center_ring,
    chi,
    coordinate_brackets,
    from_central,
    phi_image_submodule,
    phi_odd,
    pi,
    pi_form,
    serre_map,
    symplectic_form,
    to_vector,
    truncate_span,
)
from wittcenter.poly import OneForm
from wittcenter.sampling import random_witt
from wittcenter.weyl import WeylElement, commutator, monomials_up_to, parse_weyl, weyl_pdiv, weyl_pow
from wittcenter.witt import WittVector


def W(text, p, level, d=1):
    return parse_weyl(text, p, level, d)


F3 = center_ring(3, 1)
F2 = center_ring(2, 1)
X3, XI3 = F3.gens
X2, XI2 = F2.gens


def test_canonical_lift_examples():
    assert canonical_lift(X3, 1) == W("x1^3", 3, 1)
    assert canonical_lift(X2 * XI2, 1) == W("x1^2*d1^2", 2, 1)
    assert canonical_lift(X3 + XI3, 1) == W("x1^3 + d1^3", 3, 1)
    assert from_central(W("x1^3 + 2*d1^3", 3, 1)) == X3 + 2 * XI3
    with pytest.raises(CenterInvariantError):
        from_central(W("x1", 3, 0))


def test_chi_and_pi_examples():
    assert chi(1, X3) == W("x1^9", 3, 1)
    assert chi(0, X3 * XI3, 2) == canonical_lift(X3 * XI3, 2)
    assert pi(W("d1^3", 3, 1)) == W("3*d1^3", 3, 1)
    with pytest.raises(ValueError):
        chi(1, X2)


def test_phi_odd_examples():
    z = F3.zero()
    assert phi_odd(1, WittVector.of(3, [X3, z])) == W("x1^9", 3, 1)
    assert phi_odd(1, WittVector.of(3, [z, XI3])) == W("3*d1^3", 3, 1)
    two_x = WittVector.of(3, [2 * X3, X3**3])
    assert phi_odd(1, two_x) == W("2*x1^9", 3, 1)
    u = WittVector.of(3, [X3, z])
    assert u + u == two_x
    assert phi_odd(1, u + u) == phi_odd(1, u) + phi_odd(1, u)


def test_phi_odd_rejects_bad_input():
    with pytest.raises(ValueError):
        phi_odd(1, WittVector.of(2, [X2, F2.zero()]))
    with pytest.raises(ValueError):
        phi_odd(2, WittVector.of(3, [X3, F3.zero()]))


def test_bracket_examples():
    assert bracket0(XI3, X3) == F3.from_int(2)
    assert bracket0(XI2, X2) == F2.one()
    z = X3 * XI3**2 + 1
    assert bracket0(z, z).is_zero()


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("d", [1, 2])
def test_coordinate_brackets_sign(p, d):
    B = coordinate_brackets(p, d)
    ring = center_ring(p, d)
    for i, j in itertools.product(range(2 * d), repeat=2):
        want = 0
        if i >= d and j == i - d:
            want = -1
        elif j >= d and i == j - d:
            want = 1
        assert B[i][j] == ring.from_int(want)


def test_bracket_general_reduces_to_bracket0():
    lx, ly = canonical_lift(X3 * XI3, 1), canonical_lift(XI3**2, 1)
    assert from_central(bracket_general(lx, ly, 0, 0)) == bracket0(X3 * XI3, XI3**2)


def test_bracket_general_mixed_levels():
    """i = 0, j = 1: (1/9)[x^3, d^9] mod 3, computed directly over Z/27."""
    x, y = W("x1^3", 3, 2), W("d1^9", 3, 2)
    direct = weyl_pdiv(commutator(x, y), 2)
    got = bracket_general(canonical_lift(X3, 0), phi_odd(1, WittVector.of(3, [XI3, F3.zero()])), 0, 1)
    assert got == direct


def test_symplectic_form_prints():
    assert str(symplectic_form(3, 1)) == "(2)*dX1^dXi1"
    assert str(symplectic_form(2, 1)) == "(1)*dX1^dXi1"


def test_serre_examples():
    z = F3.zero()
    assert serre_map(WittVector.of(3, [X3, z]), 1) == OneForm(F3, (X3**2, z))
    assert serre_map(WittVector.of(3, [z, X3 * XI3]), 1) == OneForm(F3, (XI3, X3))


@pytest.mark.parametrize("seed", range(5))
def test_pi_form_of_phi_is_serre(seed):
    w = random_witt(np.random.default_rng(seed), 3, 1, 2, 3)
    assert pi_form(phi_odd(1, w), 1) == serre_map(w, 1)


# --- bounded-degree center --------------------------------------------------


def brute_center(p, m, d, D):
    """Central vectors of degree <= D by enumerating the commutator matrix via the action oracle."""
    M = p ** (m + 1)
    basis = monomials_up_to(d, D)
    cols = {}
    rows = []
    for e in basis:
        row = {}
        for g in range(2 * d):
            gen = tuple(1 if i == g else 0 for i in range(2 * d))
            c1 = product_by_action({e: 1}, {gen: 1}, d)
            c2 = product_by_action({gen: 1}, {e: 1}, d)
            for k in set(c1) | set(c2):
                val = (c1.get(k, 0) - c2.get(k, 0)) % M
                if val:
                    row[(g, k)] = val
                    cols.setdefault((g, k), len(cols))
        rows.append(row)
    A = np.zeros((len(basis), max(len(cols), 1)), dtype=np.int64)
    for r, row in enumerate(rows):
        for key, val in row.items():
            A[r, cols[key]] = val
    central = set()
    for x in itertools.product(range(M), repeat=len(basis)):
        if not ((np.array(x) @ A) % M).any():
            central.add(x)
    return central


def span_set(H, M, width):
    out = {tuple([0] * width)}
    for coeffs in itertools.product(range(M), repeat=H.shape[0]):
        out.add(tuple(int(v) for v in (np.array(coeffs, dtype=np.int64) @ H) % M))
    return out


@pytest.mark.parametrize("p,m,D", [(2, 0, 2), (2, 1, 2), (3, 0, 2), (2, 0, 3)])
def test_center_kernel_matches_brute_force(p, m, D):
    K = center_kernel(p, m, 1, D)
    assert span_set(K.matrix, p ** (m + 1), len(K.ambient)) == brute_center(p, m, 1, D)


def test_center_kernel_examples():
    K = center_kernel(3, 0, 1, 3)
    expected = truncate_span([W("1", 3, 0), W("x1^3", 3, 0), W("d1^3", 3, 0)], 3, 0, 1, 3)
    assert K == expected
    assert center_kernel(3, 1, 1, 0).rank == 1
    # mod 4 in degree <= 2 only the even-exponent monomials survive, doubled
    K2 = center_kernel(2, 1, 1, 2)
    assert K2 == truncate_span([W("1", 2, 1), W("2*x1^2", 2, 1), W("2*d1^2", 2, 1)], 2, 1, 1, 2)
    for odd in ("2*x1", "2*d1", "2*x1*d1", "x1^2"):
        assert not K2.contains(W(odd, 2, 1))


def test_phi_image_examples():
    assert phi_image_submodule(3, 0, 1, 3) == center_kernel(3, 0, 1, 3)
    S = phi_image_submodule(3, 1, 1, 9)
    assert S.contains(weyl_pow(W("x1^3 + d1^3", 3, 1), 3))
    assert S.contains(W("3*x1^3", 3, 1))
    assert not S.contains(W("x1^3", 3, 1))


def test_m0_image_is_span_of_p_power_monomials():
    p, D = 3, 6
    gens = [canonical_lift(F3.monomial(e), 0) for e in F3.monomials_up_to(D // p)]
    assert phi_image_submodule(p, 0, 1, D) == truncate_span(gens, p, 0, 1, D)


@pytest.mark.parametrize("p,m,d,D", [(3, 1, 1, 9), (3, 0, 2, 3), (5, 0, 1, 5)])
def test_center_equals_phi_image(p, m, d, D):
    assert center_kernel(p, m, d, D) == phi_image_submodule(p, m, d, D)


def test_to_vector_rejects_outside_monomials():
    with pytest.raises(ValueError):
        to_vector(W("x1^5", 3, 0), monomials_up_to(1, 2))
