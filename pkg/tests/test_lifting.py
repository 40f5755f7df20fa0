import pytest

from backend.charp_torsors import ALPHA_P, ETALE, MU_P, CharPTorsor
from backend.degeneration import specialize
from backend.errors import BadN, NeedsRamifiedExtension, NotAUnit, TrivialDatum
from backend.lifting import (
    admissibility_report,
    inertia_check,
    lift_alpha_p,
    lift_etale,
    lift_mu_p,
    perturb_lift,
    perturbation_is_nontrivial,
)
from backend.polynomials import Polynomial, RationalFunction

WINDOW = (-16, 16)


def rf(F, num, den=(1,)):
    return RationalFunction(Polynomial(F, tuple(num)), Polynomial(F, tuple(den)))


def test_etale_lift_round_trip(tower3, F3):
    report = admissibility_report(CharPTorsor(ETALE, rf(F3, (1,), (0, 1))), tower3, window=WINDOW)
    assert report.round_trip
    assert report.report.kind == ETALE
    assert report.report.m == 1
    assert report.extension_used == 1


def test_mu_p_lift_round_trip(tower3, F3):
    report = admissibility_report(CharPTorsor(MU_P, rf(F3, (1, 1))), tower3, window=WINDOW)
    assert report.round_trip
    assert report.report.m == -1
    assert report.to_dict()["extension"] == {"c": 1}


def test_alpha_p_lift_extends_the_base(tower3, F3):
    report = admissibility_report(CharPTorsor(ALPHA_P, rf(F3, (1,), (0, 1))), tower3, window=WINDOW)
    assert report.extension_used == 2
    assert report.report.kind == ALPHA_P
    assert report.report.m == 1
    assert report.round_trip
    assert report.tower.v_lambda == 2


def test_alpha_p_lift_errors(tower3, tower3_c2, F3):
    with pytest.raises(NeedsRamifiedExtension) as excinfo:
        lift_alpha_p(tower3, rf(F3, (1,), (0, 1)), 1, WINDOW)
    assert excinfo.value.c == 2
    with pytest.raises(TrivialDatum):
        lift_alpha_p(tower3_c2, rf(F3, (0, 0, 0, 1)), 1, WINDOW)
    with pytest.raises(BadN):
        lift_alpha_p(tower3_c2, rf(F3, (0, 1)), 0, WINDOW)


def test_lift_etale_of_zero_is_one(tower3, F3):
    assert lift_etale(tower3, rf(F3, ()), WINDOW).is_one()


def test_lift_mu_p(tower3, F3):
    assert specialize(lift_mu_p(tower3, rf(F3, (0, 0, 0, 1)), WINDOW), "off", WINDOW).trivial
    with pytest.raises(NotAUnit):
        lift_mu_p(tower3, rf(F3, ()), WINDOW)


def test_perturbation(tower3, tower3_c2, F3):
    u = lift_mu_p(tower3_c2, rf(F3, (0, 1)), WINDOW)
    with pytest.raises(BadN):
        perturb_lift(u, 1, rf(F3, (1,), (0, 1)), above=1, window=WINDOW)
    perturbed = perturb_lift(u, 2, rf(F3, (1,), (0, 1)), window=WINDOW)
    assert specialize(perturbed, "off", WINDOW).kind == MU_P
    assert perturbation_is_nontrivial(tower3_c2, 1, rf(F3, (1,), (0, 1)), WINDOW)
    assert not perturbation_is_nontrivial(tower3_c2, 1, rf(F3, (0, 0, 0, 1)), WINDOW)
    with pytest.raises(BadN):
        perturbation_is_nontrivial(tower3, 1, rf(F3, (1,), (0, 1)), WINDOW)


def test_inertia(tower3, F3):
    verdict = inertia_check(tower3, rf(F3, (1,), (0, 1)), 2, WINDOW)
    assert verdict.passed
    assert verdict.details["after"]["n"] == 2
