import random

import pytest

from backend.errors import NotExpandable, WindowTooSmall
from backend.finite_field import finite_field
from backend.fp_series import (
    INFINITY,
    ORIGIN,
    Differential,
    LaurentSeries,
    P1Point,
    cartier,
    d,
    dlog,
    local_expand,
    order,
    residue,
    sum_of_orders,
)
from backend.polynomials import Polynomial, RationalFunction
from backend.sampling import random_rational


def rf(F, num, den=(1,)):
    return RationalFunction(Polynomial(F, tuple(num)), Polynomial(F, tuple(den)))


def test_inverse_is_geometric_series(F3):
    s = LaurentSeries(F3, {0: 1, 1: 1}, 5)
    inv = s.inverse()
    assert inv.coeffs == {0: 1, 1: 2, 2: 1, 3: 2, 4: 1}
    assert inv.prec == 5


def test_product_precision(F3):
    a = LaurentSeries(F3, {-1: 1}, 3)
    b = LaurentSeries(F3, {0: 1}, 5)
    assert (a * b).prec == 3


def test_unknown_coefficient_is_an_error(F3):
    s = LaurentSeries(F3, {0: 1}, 2)
    with pytest.raises(WindowTooSmall):
        s.coefficient(2)


def test_pth_root(F3):
    s = LaurentSeries(F3, {3: 1, 6: 2}, 10)
    assert s.pth_root().coeffs == {1: 1, 2: 2}
    assert LaurentSeries(F3, {1: 1}, 10).pth_root() is None


def test_local_expand_simple_pole(F3, window):
    s = local_expand(rf(F3, (1,), (2, 1)), P1Point(1, F3), window)
    assert s.coeffs == {-1: 1}


def test_local_expand_at_infinity(F3, window):
    s = local_expand(rf(F3, (0, 1)), INFINITY, window)
    assert s.coeffs == {-1: 1}


def test_local_expand_geometric(F3):
    s = local_expand(rf(F3, (0, 0, 1), (1, 1)), ORIGIN, (-2, 5))
    assert s.coeffs == {2: 1, 3: 2, 4: 1, 5: 2}
    assert s.prec == 6


def test_local_expand_window_too_small(F3):
    with pytest.raises(WindowTooSmall):
        local_expand(rf(F3, (1,), (0, 0, 0, 0, 0, 1)), ORIGIN, (-3, 3))


def test_germ_expands_only_at_origin(F3, window):
    germ = LaurentSeries(F3, {0: 1}, 4)
    with pytest.raises(NotExpandable):
        local_expand(germ, INFINITY, window)


def test_d_of_pth_power_vanishes(F3):
    assert d(rf(F3, (0, 0, 0, 1))).is_zero()
    assert d(rf(F3, (0, 0, 1))).base == rf(F3, (0, 2))


def test_cartier_examples(F3):
    t = RationalFunction.variable(F3)
    log_form = dlog(t)
    assert cartier(log_form).base == log_form.base
    assert cartier(Differential(RationalFunction.constant(F3, 1))).is_zero()
    image = cartier(Differential(rf(F3, (0, 0, 1, 0, 0, 1))))
    assert image.base == rf(F3, (1, 1))


def test_cartier_on_germs(F3):
    omega = Differential(LaurentSeries(F3, {-1: 1, 2: 1, 5: 1}, 9))
    assert cartier(omega).base.coeffs == {-1: 1, 0: 1, 1: 1}


def test_residues(F3):
    u = rf(F3, (0, 0, 1, 1))  # t^2 (1 + t)
    assert residue(dlog(u), ORIGIN) == 2
    t = RationalFunction.variable(F3)
    assert residue(dlog(t), ORIGIN) == 1
    assert residue(dlog(t), INFINITY) == 2
    assert residue(Differential(RationalFunction.constant(F3, 1)), ORIGIN) == 0


def test_orders(F3):
    assert order(Differential(RationalFunction.constant(F3, 1)), INFINITY) == -2
    assert order(dlog(RationalFunction.variable(F3)), ORIGIN) == -1
    assert order(dlog(rf(F3, (1, 0, 0, 0, 1))), ORIGIN) == 3


@pytest.mark.parametrize("seed", range(5))
def test_degree_of_canonical_divisor(seed):
    rng = random.Random(seed)
    F = finite_field(3, 2)
    g = random_rational(rng, F)
    assert sum_of_orders(Differential(g)) == -2
