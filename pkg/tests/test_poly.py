import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from wittcenter._grammar import ParseError
from wittcenter.poly import (
    OneForm,
    PolyRing,
    TwoForm,
    VectorField,
    cartier_inverse,
    contract1,
    contract2,
    d_one_form,
    de_rham_d,
    frobenius_image,
    is_exact_mod_p,
    lie_derivative_fn,
    lie_derivative_form,
    poly_scale,
    vf_bracket,
    vf_p_power,
)
from wittcenter.ring import GF, ZZ

F2 = PolyRing(("X", "Xi"), GF(2))
F3 = PolyRing(("X", "Xi"), GF(3))
ZXY = PolyRing(("x", "y"), ZZ)


def polys(ring, max_deg=4, coeffs=st.integers(-20, 20)):
    expo = st.tuples(*[st.integers(0, max_deg)] * ring.nvars)
    return st.dictionaries(expo, coeffs, max_size=5).map(ring.from_dict)


def fields(ring):
    return st.tuples(*[polys(ring, 3)] * ring.nvars).map(lambda c: VectorField(ring, c))


def test_char2_square():
    f = F2.parse("X + Xi")
    assert f * f == F2.parse("X^2 + Xi^2")


def test_cube_over_z():
    x, y = ZXY.gens
    assert (x + y) ** 3 - x**3 - y**3 == ZXY.parse("3*x^2*y + 3*x*y^2")


def test_scale_zero():
    assert poly_scale(0, ZXY.parse("x*y + 7")).is_zero()


def test_differential_examples():
    X, Xi = F2.gens
    assert de_rham_d(X * Xi) == OneForm(F2, (Xi, X))
    assert de_rham_d(X**2).is_zero()
    assert de_rham_d(F3.gen("X") ** 3).is_zero()


def test_contraction_examples():
    X, Xi = F2.gens
    eta = OneForm(F2, (Xi, F2.zero()))
    d_xi, d_x = VectorField.coordinate(F2, 1), VectorField.coordinate(F2, 0)
    assert contract1(d_xi, eta).is_zero()
    assert contract1(d_x, eta) == Xi
    omega = TwoForm.from_pairs(F2, {(0, 1): F2.one()})
    assert contract2(d_x, omega) == OneForm(F2, (F2.zero(), F2.one()))


def test_lie_derivative_examples():
    X, Xi = F2.gens
    euler = VectorField(F2, (X, Xi))
    assert lie_derivative_fn(euler, X * Xi).is_zero()
    d_xi = VectorField.coordinate(F2, 1)
    assert lie_derivative_form(d_xi, OneForm(F2, (Xi, F2.zero()))) == OneForm(F2, (F2.one(), F2.zero()))
    assert lie_derivative_fn(euler, F2.one()).is_zero()


def test_restricted_power_examples():
    X, Xi = F2.gens
    assert vf_p_power(VectorField.coordinate(F2, 1)).is_zero()
    euler = VectorField(F2, (X, Xi))
    assert vf_p_power(euler) == euler
    assert vf_bracket(VectorField.coordinate(F2, 0), VectorField.coordinate(F2, 1)).is_zero()


def test_frobenius_examples():
    assert frobenius_image(F2.parse("X + Xi")) == F2.parse("X^2 + Xi^2")
    assert frobenius_image(F3.gen("X")) == F3.parse("X^3")
    assert frobenius_image(F3.one()) == F3.one()


def test_cartier_inverse_examples():
    X, Xi = F2.gens
    z = F2.zero()
    assert cartier_inverse(OneForm(F2, (F2.one(), z))) == OneForm(F2, (X, z))
    assert cartier_inverse(OneForm(F2, (Xi, z))) == OneForm(F2, (Xi**2 * X, z))
    assert cartier_inverse(OneForm.zero(F2)).is_zero()


def test_exactness_examples():
    X, Xi = F2.gens
    ok, f = is_exact_mod_p(OneForm(F2, (Xi, X)), 2)
    assert ok and f == X * Xi
    assert is_exact_mod_p(OneForm(F2, (X, F2.zero()))) == (False, None)
    ok, f = is_exact_mod_p(OneForm.zero(F2))
    assert ok and f.is_zero()


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as err:
        ZXY.parse("x + * y")
    assert err.value.pos == 4


@given(polys(ZXY), polys(ZXY), st.integers(-5, 5), st.integers(-5, 5))
def test_arithmetic_matches_evaluation(f, g, a, b):
    def ev(h):
        return h.evaluate((a, b), 1, int)

    assert ev(f + g) == ev(f) + ev(g)
    assert ev(f * g) == ev(f) * ev(g)
    assert ev(f - g) == ev(f) - ev(g)


@given(polys(ZXY))
def test_parse_print_roundtrip_z(f):
    assert ZXY.parse(str(f)) == f


@given(polys(F3))
def test_parse_print_roundtrip_fp(f):
    assert F3.parse(str(f)) == f


@given(polys(F3))
def test_d_squared_is_zero(f):
    assert d_one_form(de_rham_d(f)).is_zero()


@given(polys(F3), polys(F3))
def test_leibniz(f, g):
    assert de_rham_d(f * g) == de_rham_d(f).scale(g) + de_rham_d(g).scale(f)


@given(polys(F2), polys(F2))
def test_frobenius_is_ring_map_in_char_p(f, g):
    assert frobenius_image(f + g) == frobenius_image(f) + frobenius_image(g)
    assert frobenius_image(f) == f * f


@settings(max_examples=40)
@given(fields(F3), polys(F3), polys(F3))
def test_restricted_power_is_derivation(theta, f, g):
    t3 = vf_p_power(theta)

    def apply3(h):
        for _ in range(3):
            h = theta(h)
        return h

    assert apply3(f) == t3(f)
    assert t3(f * g) == t3(f) * g + f * t3(g)


@settings(max_examples=40)
@given(fields(F2), polys(F2, 3))
def test_cartan_on_functions_and_exact_forms(theta, f):
    assert lie_derivative_fn(theta, f) == contract1(theta, de_rham_d(f))
    assert lie_derivative_form(theta, de_rham_d(f)) == de_rham_d(lie_derivative_fn(theta, f))


@settings(max_examples=40)
@given(polys(F3, 3))
def test_cartier_inverse_of_exact_form(f):
    # C^-1(df) and f^(p-1) df differ by an exact form
    diff = cartier_inverse(de_rham_d(f)) - de_rham_d(f).scale(f * f)
    ok, _ = is_exact_mod_p(diff)
    assert ok
