import numpy as np
import pytest

from wittcenter.center import bracket0, canonical_lift, center_kernel, center_ring, phi_odd, pi_form, serre_map
from wittcenter.poisson2 import (
    SymplecticData,
    chi2,
    naive_map_witness,
    hamiltonian_field,
    naive_phi,
    phi_even,
    phi_even_submodule,
    quadratic_refinement,
    restricted_square,
)
from wittcenter.poly import VectorField, contract1, contract2, de_rham_d, vf_p_power
from wittcenter.sampling import random_center_poly, random_vector_field, random_witt
from wittcenter.weyl import is_central, parse_weyl
from wittcenter.witt import WittVector

F2 = center_ring(2, 1)
X, XI = F2.gens
Z = F2.zero()


def W(text, level=1):
    return parse_weyl(text, 2, level, 1)


def test_hamiltonian_fields():
    assert hamiltonian_field(X) == VectorField.coordinate(F2, 1)
    assert hamiltonian_field(XI) == VectorField.coordinate(F2, 0)
    assert hamiltonian_field(X * XI) == VectorField(F2, (X, XI))


@pytest.mark.parametrize("seed", range(5))
def test_hamiltonian_field_solves_dz(seed):
    sd = SymplecticData.standard(2)
    z = random_center_poly(np.random.default_rng(seed), 2, 2, 4)
    assert contract2(hamiltonian_field(z, sd), sd.omega) == de_rham_d(z)


def test_restricted_square_examples():
    assert restricted_square(X).is_zero()
    assert restricted_square(XI).is_zero()
    assert restricted_square(X * XI) == X * XI
    assert quadratic_refinement(hamiltonian_field(X)).is_zero()
    # additivity defect is the bracket
    assert restricted_square(X + XI) == bracket0(X, XI)


@pytest.mark.parametrize("seed", range(5))
def test_restricted_square_is_hamiltonian_square(seed):
    z = random_center_poly(np.random.default_rng(seed), 2, 1, 4)
    assert hamiltonian_field(restricted_square(z)) == vf_p_power(hamiltonian_field(z))


@pytest.mark.parametrize("seed", range(5))
def test_quadratic_refinement_properties(seed):
    rng = np.random.default_rng(seed)
    sd = SymplecticData.standard(1)
    t1, t2 = random_vector_field(rng, F2, 3), random_vector_field(rng, F2, 3)
    defect = quadratic_refinement(t1 + t2) - quadratic_refinement(t1) - quadratic_refinement(t2)
    assert defect == contract1(t1, contract2(t2, sd.omega))
    f = random_center_poly(rng, 2, 1, 2)
    assert quadratic_refinement(t1.scale(f)) == f * f * quadratic_refinement(t1)


def test_phi_even_examples():
    assert phi_even(1, WittVector.of(2, [X, Z])) == W("x1^4")
    assert phi_even(1, WittVector.of(2, [X * XI, Z])) == W("x1^4*d1^4")
    z = X * XI + XI**3
    assert phi_even(1, WittVector.of(2, [Z, z])) == canonical_lift(z, 1).scale(2)
    assert chi2(0, X, 1) == canonical_lift(X, 1)


def test_phi_even_additivity_example():
    u = WittVector.of(2, [X, Z])
    assert phi_even(1, u + u) == phi_even(1, u) + phi_even(1, u)


def test_phi_even_rejects_odd_p():
    F3 = center_ring(3, 1)
    with pytest.raises(ValueError):
        phi_even(1, WittVector.of(3, [F3.gen(0), F3.zero()]))
    with pytest.raises(ValueError):
        phi_odd(1, WittVector.of(2, [X, Z]))


def test_naive_map_witness():
    w = naive_map_witness()
    assert w["naive_sum_of_images"] != w["naive_image_of_sum"]
    assert w["naive_product_of_images"] != w["naive_image_of_product"]
    assert w["naive_square"] == W("x1^4*d1^4 + 2*x1^2*d1^2")
    assert w["corrected_product"] == W("x1^4*d1^4")
    a, b = w["corrected_images"]
    assert w["corrected_sum"] == a + b
    assert w["corrected_product"] == a * b
    assert is_central(w["corrected_product"])


def test_naive_square_is_central():
    """The uncorrected square (x^2 d^2)^2 is central mod 4; only additivity and multiplicativity fail."""
    assert is_central(naive_map_witness()["naive_square"])


def test_naive_map_fails_additivity_on_sum():
    a, b = WittVector.of(2, [X, Z]), WittVector.of(2, [XI, Z])
    assert naive_phi(1, a + b) == W("x1^4 + d1^4 + 2")
    assert naive_phi(1, a) + naive_phi(1, b) == W("x1^4 + d1^4")
    # the correction 2*lift((X + Xi)^[2]) = 2 cancels the constant
    assert phi_even(1, a + b) == W("x1^4 + d1^4")


@pytest.mark.parametrize("seed", range(5))
def test_pi_form_of_phi_even_is_serre(seed):
    w = random_witt(np.random.default_rng(seed), 2, 1, 2, 3)
    assert pi_form(phi_even(1, w), 1) == serre_map(w, 1)


@pytest.mark.parametrize("m", [1, 2])
def test_phi_even_image_is_center(m):
    D = 2 ** (m + 1)
    assert phi_even_submodule(m, 1, D) == center_kernel(2, m, 1, D)
