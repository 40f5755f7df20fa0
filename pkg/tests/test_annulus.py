import pytest

from backend import annulus
from backend.annulus import AnnulusElement, pth_power_test
from backend.errors import NotAUnit, PositivePiContent, PrecisionExhausted
from backend.fp_series import LaurentSeries

WINDOW = (-16, 16)


def test_inverse_of_a_unit_with_polar_tail(tower3):
    x = AnnulusElement.one(tower3) + AnnulusElement.t_power(tower3, -1).scale(tower3.pi)
    assert (x * x.inverse(WINDOW)).is_one()


def test_inverse_of_a_power_series_unit(tower3):
    x = AnnulusElement.one(tower3) + AnnulusElement.t_power(tower3, 1)
    assert (x * x.inverse(WINDOW)).is_one()


def test_inverse_needs_zero_pi_content(tower3):
    with pytest.raises(NotAUnit):
        AnnulusElement.constant(tower3.pi).inverse(WINDOW)


def test_inverse_raises_when_iteration_does_not_settle(tower3, monkeypatch):
    monkeypatch.setattr(annulus, "_same_coeffs", lambda a, b: False)
    x = AnnulusElement.one(tower3) + AnnulusElement.t_power(tower3, -1).scale(tower3.pi)
    with pytest.raises(PrecisionExhausted):
        x.inverse(WINDOW)


def test_inverse_mod_t(tower3):
    x = AnnulusElement.one(tower3) + AnnulusElement.t_power(tower3, 1) + AnnulusElement.t_power(tower3, 2)
    cube = x ** 3
    inv = cube.inverse_mod_t(10)
    assert inv.t_prec == 10
    assert (cube * inv).is_one()
    with pytest.raises(NotAUnit):
        (x + AnnulusElement.t_power(tower3, -1)).inverse_mod_t(10)
    with pytest.raises(NotAUnit):
        AnnulusElement.t_power(tower3, 1).inverse_mod_t(10)


def test_pth_power_test(F3):
    root = pth_power_test(LaurentSeries(F3, {3: 1, 6: 1}, 12)).root
    assert root.coeffs == {1: 1, 2: 1}
    failed = pth_power_test(LaurentSeries(F3, {3: 1, 4: 1}, 12))
    assert not failed.is_pth_power
    assert failed.offending_exponent == 4


def test_lift_then_reduce(tower3, F3):
    s = LaurentSeries(F3, {-2: 1, 1: 2}, 10)
    lifted = AnnulusElement.lift_series(tower3, s)
    assert lifted.t_prec == 10
    assert lifted.reduce_mod_pi(WINDOW).coeffs == s.coeffs


def test_reduce_mod_pi_needs_unit_content(tower3):
    x = AnnulusElement.t_power(tower3, 1).scale(tower3.pi)
    assert x.pi_content() == 1
    with pytest.raises(PositivePiContent):
        x.reduce_mod_pi(WINDOW)


def test_divide_by_pi(tower3):
    x = AnnulusElement.t_power(tower3, -1).scale(tower3.from_int(3))
    y = x.divide_by_pi(2)
    assert y.pi_content() == 0
    assert y.reduce_mod_pi(WINDOW).coeffs == {-1: 2}


def test_zeta_power_is_one(tower3):
    zeta = AnnulusElement.constant(tower3.one() + tower3.pi)
    assert (zeta ** 3).is_one()


def test_to_expression(tower3):
    x = AnnulusElement.one(tower3) + AnnulusElement.t_power(tower3, 1)
    assert x.to_expression() == "1 + T"
    assert AnnulusElement.zero(tower3).to_expression() == "0"
