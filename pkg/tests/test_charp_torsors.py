import pytest

from backend.charp_torsors import (
    ALPHA_P,
    ETALE,
    MU_P,
    CharPTorsor,
    MixedTorsor,
    artin_schreier_reduce,
    canonical_form,
    cartier_class_check,
    conductor_residue,
    frobenius_act,
    is_trivial,
    mixed_add,
    same_class,
)
from backend.errors import SchemeMismatch, TrivialLocally, UnsupportedKind
from backend.finite_field import finite_field
from backend.fp_series import INFINITY, ORIGIN, LaurentSeries, P1Point
from backend.polynomials import Polynomial, RationalFunction


def rf(F, num, den=(1,)):
    return RationalFunction(Polynomial(F, tuple(num)), Polynomial(F, tuple(den)))


def test_artin_schreier_reduce_two_steps(F3):
    a = LaurentSeries(F3, {-9: 1, -2: 1}, 5)
    reduced, witness = artin_schreier_reduce(a)
    assert reduced.coeffs == {-2: 1, -1: 1}
    assert witness.coeffs == {-3: 1, -1: 1}
    again, _ = artin_schreier_reduce(reduced)
    assert again.coeffs == reduced.coeffs


def test_artin_schreier_image_reduces_to_zero(F3):
    b = LaurentSeries(F3, {-2: 1, 1: 2}, 12)
    a = b.pth_power().truncate(12) - b
    reduced, _ = artin_schreier_reduce(a)
    assert reduced.is_zero()


def test_etale_conductor(F3, window):
    f = CharPTorsor(ETALE, rf(F3, (1, 0, 0, 0, 0, 0, 0, 1), (0,) * 9 + (1,)))  # t^-9 + t^-2
    local = conductor_residue(f, ORIGIN, window)
    assert (local.m, local.h) == (2, 0)
    at_infinity = conductor_residue(CharPTorsor(ETALE, rf(F3, (0, 0, 1))), INFINITY, window)
    assert at_infinity.m == 2


def test_mu_p_conductor_and_residue(F3, window):
    t = CharPTorsor(MU_P, RationalFunction.variable(F3))
    assert conductor_residue(t, ORIGIN, window).to_dict() == {"m": 0, "h": 1, "order": -1, "trivial_locally": False}
    assert conductor_residue(t, INFINITY, window).h == 2
    f = CharPTorsor(MU_P, rf(F3, (1, 0, 0, 0, 1)))  # 1 + t^4
    local = conductor_residue(f, ORIGIN, window)
    assert (local.m, local.h, local.order) == (-4, 0, 3)


def test_alpha_p_conductor(F3, window):
    f = CharPTorsor(ALPHA_P, rf(F3, (1,), (0, 1)))  # 1/t
    assert conductor_residue(f, ORIGIN, window).m == 1
    cube = CharPTorsor(ALPHA_P, rf(F3, (0, 0, 0, 1)))
    assert conductor_residue(cube, ORIGIN, window).trivial_locally
    with pytest.raises(TrivialLocally):
        conductor_residue(cube, ORIGIN, window, strict=True)


def test_cartier_class_check(F3):
    assert cartier_class_check(CharPTorsor(MU_P, RationalFunction.variable(F3))).passed
    assert cartier_class_check(CharPTorsor(MU_P, rf(F3, (1, 1)))).passed
    assert cartier_class_check(CharPTorsor(ALPHA_P, rf(F3, (0, 0, 1)))).passed
    assert cartier_class_check(CharPTorsor(ALPHA_P, rf(F3, (1,), (0, 1)))).passed
    with pytest.raises(UnsupportedKind):
        cartier_class_check(CharPTorsor(ETALE, RationalFunction.variable(F3)))


def test_frobenius_act_over_f9(F9, window):
    a1 = F9.generator
    f = CharPTorsor(MU_P, rf(F9, (1, a1)))  # 1 + a1 t
    g = frobenius_act(1, f)
    assert g.datum == rf(F9, (1, F9.frobenius(a1)))
    assert frobenius_act(2, f).datum == f.datum
    x = P1Point(a1, F9)
    before = conductor_residue(f, x, window)
    after = conductor_residue(g, x.frobenius(1), window)
    assert (after.m, after.h) == (before.m, F9.frobenius(before.h))


def test_prime_field_data_is_frobenius_fixed(F3):
    f = CharPTorsor(ETALE, rf(F3, (1,), (0, 1)))
    assert frobenius_act(1, f).datum == f.datum


def test_same_class(F3, window):
    f = CharPTorsor(ETALE, rf(F3, (1, 0, 1), (0, 0, 0, 1)))  # t^-3 + t^-1
    g = CharPTorsor(ETALE, rf(F3, (2,), (0, 1)))  # 2 t^-1
    assert same_class(f, g, ORIGIN, window)
    u = CharPTorsor(MU_P, RationalFunction.variable(F3))
    v = CharPTorsor(MU_P, rf(F3, (0, 1, 0, 0, 1)))  # t (1 + t^3)
    assert same_class(u, v, ORIGIN, window)
    assert not same_class(u, f, ORIGIN, window)


def test_trivial_classes(F3, window):
    assert is_trivial(CharPTorsor(MU_P, rf(F3, (0, 0, 0, 1))), ORIGIN, window)
    assert not is_trivial(CharPTorsor(MU_P, RationalFunction.variable(F3)), ORIGIN, window)
    assert canonical_form(CharPTorsor(ALPHA_P, rf(F3, (0, 1, 0, 1))), ORIGIN, window).datum.coeffs == {1: 1}


def test_mixed_add(F3):
    a = MixedTorsor.of(CharPTorsor(ETALE, rf(F3, (1,), (0, 1))))
    b = MixedTorsor.of(CharPTorsor(ETALE, rf(F3, (1,), (0, 0, 1))))
    u = MixedTorsor.of(CharPTorsor(MU_P, RationalFunction.variable(F3)))
    total = mixed_add(a, b)
    assert total.get(ETALE).datum == rf(F3, (1,), (0, 1)) + rf(F3, (1,), (0, 0, 1))
    assert (a + MixedTorsor.zero()).to_dict() == a.to_dict()
    both = mixed_add(total, u + u)
    assert both.kinds() == (ETALE, MU_P)
    assert both.get(MU_P).datum == rf(F3, (0, 0, 1))
    cube = u + u + u
    assert cube.get(MU_P).datum == rf(F3, (0, 0, 0, 1))


def test_mixed_add_over_different_fields(F3):
    other = finite_field(5)
    x = MixedTorsor.of(CharPTorsor(ETALE, RationalFunction.variable(F3)))
    y = MixedTorsor.of(CharPTorsor(ETALE, RationalFunction.variable(other)))
    with pytest.raises(SchemeMismatch):
        mixed_add(x, y)
