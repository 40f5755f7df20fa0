import math

import pytest

from backend.errors import BadParameters, NotAUnit
from backend.padic_tower import (
    LocalFieldTower,
    make_base_field,
    ramified_base_change,
    unramified_base_change,
    v_p,
)


def test_eisenstein_polynomial(tower3):
    assert tower3.eisenstein == (3, 3, 1)
    assert (tower3.e, tower3.v_p, tower3.v_lambda) == (2, 2, 1)
    assert tower3.lam.agrees_with(tower3.pi)


def test_ramified_eisenstein(tower3_c2):
    assert tower3_c2.eisenstein == (3, 0, 3, 0, 1)
    assert (tower3_c2.v_p, tower3_c2.v_lambda) == (4, 2)
    assert tower3_c2.lam.agrees_with(tower3_c2.pi_power(2))


def test_valuations(tower3):
    assert tower3.from_int(3).valuation() == 2
    assert tower3.from_int(9).valuation() == 4
    assert tower3.from_int(2).valuation() == 0
    assert tower3.zero().valuation() == math.inf
    assert v_p(18, 3) == 2
    assert v_p(0, 3) == math.inf


def test_pi_is_zeta_minus_one(tower3):
    zeta = tower3.one() + tower3.pi
    assert (zeta ** 3).agrees_with(tower3.one())
    assert not zeta.agrees_with(tower3.one())


def test_divide_by_pi(tower3):
    assert tower3.from_int(3).divide_by_pi(2).residue() == 2
    assert (tower3.p_over_pi() * tower3.pi).agrees_with(tower3.from_int(3))
    with pytest.raises(BadParameters):
        tower3.from_int(2).divide_by_pi(1)


def test_inverse(tower3):
    x = tower3.from_int(2) + tower3.pi
    assert (x * x.inverse()).agrees_with(tower3.one())
    with pytest.raises(NotAUnit):
        tower3.pi.inverse()


def test_frobenius_on_generator():
    tower = make_base_field(3, 2, 8)
    a1 = tower.generator()
    assert a1.frobenius(1).agrees_with(-a1)
    assert a1.frobenius(2).agrees_with(a1)
    assert (a1 * a1).agrees_with(-tower.one())


def test_ramified_base_change(tower3):
    target, embedding = ramified_base_change(tower3, 2)
    assert target.prec == 16
    assert target.v_lambda == 2
    assert embedding(tower3.pi).agrees_with(target.pi_power(2))
    assert embedding(tower3.from_int(3)).valuation() == target.from_int(3).valuation() == 4


def test_unramified_base_change(tower3):
    target, embedding = unramified_base_change(tower3, 2)
    assert target.f == 2
    assert embedding(tower3.from_int(5) + tower3.pi).agrees_with(target.from_int(5) + target.pi)
    with pytest.raises(BadParameters):
        unramified_base_change(make_base_field(3, 2, 8), 3)


def test_bad_parameters():
    with pytest.raises(BadParameters):
        LocalFieldTower(3, prec=1)
    with pytest.raises(BadParameters):
        make_base_field(4)
    with pytest.raises(BadParameters):
        make_base_field(3, 1, 8).generator(2)


def test_printing(tower3):
    assert tower3.zero().to_expression() == "0"
    assert (tower3.one() + tower3.pi).to_expression() == "1 + pi"
    assert (tower3.pi - tower3.one()).to_expression() == "-1 + pi"
    assert make_base_field(2, 1, 16).lam.to_expression() == "-2"
    assert tower3.describe()["eisenstein"] == [3, 3, 1]
