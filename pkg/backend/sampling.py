"""
Seeded generators for randomized checks. Every generator takes an explicit
random.Random so a run is reproducible from its seed.
"""
from random import Random
from typing import Dict, Optional, Tuple

from backend.annulus import AnnulusElement
from backend.charp_torsors import ALPHA_P, ETALE, MU_P, CharPTorsor, GroupSchemeKindP
from backend.finite_field import FiniteField
from backend.fp_series import INFINITY, LaurentSeries, P1Point
from backend.padic_tower import LocalFieldTower
from backend.polynomials import Polynomial, RationalFunction

KINDS = (ETALE, MU_P, ALPHA_P)


def make_rng(seed: int) -> Random:
    return Random(seed)


def random_exponents(rng: Random, lo: int, hi: int, count: int) -> Tuple[int, ...]:
    count = min(count, hi - lo + 1)
    return tuple(sorted(rng.sample(range(lo, hi + 1), count)))


def random_laurent(
    rng: Random, F: FiniteField, lo: int, hi: int, prec: int, terms: int = 4, leading: Optional[int] = None
) -> LaurentSeries:
    """Random series with nonzero coefficients at up to `terms` exponents in [lo, hi]"""
    coeffs: Dict[int, int] = {k: F.random_element(rng, nonzero=True) for k in random_exponents(rng, lo, hi, terms)}
    if leading is not None:
        coeffs = {k: c for k, c in coeffs.items() if k > leading}
        coeffs[leading] = F.random_element(rng, nonzero=True)
    return LaurentSeries(F, coeffs, prec)


def random_polynomial(rng: Random, F: FiniteField, degree: int, monic: bool = False) -> Polynomial:
    coeffs = [F.random_element(rng) for _ in range(degree)]
    coeffs.append(1 if monic else F.random_element(rng, nonzero=True))
    return Polynomial(F, tuple(coeffs))


def random_rational(rng: Random, F: FiniteField, max_degree: int = 3) -> RationalFunction:
    """A nonzero rational function with numerator and denominator of degree <= max_degree"""
    num = random_polynomial(rng, F, rng.randint(0, max_degree))
    den = random_polynomial(rng, F, rng.randint(0, max_degree), monic=True)
    return RationalFunction(num, den)


def random_unit_series(rng: Random, F: FiniteField, prec: int, terms: int = 4) -> LaurentSeries:
    """A unit of k[[t]] (valuation 0)"""
    return random_laurent(rng, F, 0, max(prec - 1, 0), prec, terms, leading=0)


def _non_pth_power(rng: Random, F: FiniteField, lo: int, hi: int, prec: int, terms: int) -> LaurentSeries:
    p = F.p
    while True:
        s = random_laurent(rng, F, lo, hi, prec, terms)
        if any(k % p for k in s.coeffs):
            return s


def random_torsor(rng: Random, F: FiniteField, kind: GroupSchemeKindP, max_pole: int = 6) -> CharPTorsor:
    """Rational data on P^1: polar Artin-Schreier data, Kummer units, alpha_p functions"""
    p = F.p
    if kind == ETALE:
        poles = [k for k in range(1, max_pole + 1) if k % p]
        coeffs = [0] * (max_pole + 1)
        for k in rng.sample(poles, min(len(poles), rng.randint(1, 3))):
            coeffs[k] = F.random_element(rng, nonzero=True)
        num = Polynomial(F, tuple(reversed(coeffs)))
        return CharPTorsor(ETALE, RationalFunction(num, Polynomial.monomial(F, 1, max_pole)))
    while True:
        datum = random_rational(rng, F)
        if not datum.is_zero() and not datum.derivative().is_zero():
            return CharPTorsor(kind, datum)


def random_point(rng: Random, F: FiniteField) -> P1Point:
    value = rng.randrange(F.q + 1)
    if value == F.q:
        return INFINITY
    return P1Point(value, F)


# -- annulus units ---------------------------------------------------------------

def lift_polynomial(tower: LocalFieldTower, s: LaurentSeries) -> AnnulusElement:
    return AnnulusElement.lift_series(tower, s, exact=True)


def random_mu_p_unit(rng: Random, tower: LocalFieldTower, spread: int = 4, terms: int = 3) -> AnnulusElement:
    """Exact unit whose reduction is not a p-th power, plus a random pi-adic tail"""
    F = tower.residue_field
    reduction = _non_pth_power(rng, F, -spread, spread, spread + 1, terms)
    u = lift_polynomial(tower, reduction)
    tail = random_laurent(rng, F, -spread, spread, spread + 1, 2)
    return u + lift_polynomial(tower, tail).scale(tower.pi_power(rng.randint(1, 3)))


def random_etale_unit(rng: Random, tower: LocalFieldTower, spread: int = 4, terms: int = 3) -> AnnulusElement:
    """1 + lambda^p a with a a lift of a random polar datum"""
    F = tower.residue_field
    a = random_laurent(rng, F, -spread, spread, spread + 1, terms)
    one = AnnulusElement.one(tower)
    return one + lift_polynomial(tower, a).scale(tower.lam ** tower.p)


def random_alpha_p_unit(rng: Random, tower: LocalFieldTower, spread: int = 4, terms: int = 3) -> AnnulusElement:
    """1 + pi^{pn} a with 0 < n < v(lambda); needs a ramified tower"""
    if tower.v_lambda < 2:
        raise ValueError("alpha_p units need v(lambda) >= 2")
    F = tower.residue_field
    n = rng.randint(1, tower.v_lambda - 1)
    a = _non_pth_power(rng, F, -spread, spread, spread + 1, terms)
    one = AnnulusElement.one(tower)
    return one + lift_polynomial(tower, a).scale(tower.pi_power(tower.p * n))


def random_kummer_unit(
    rng: Random, tower: LocalFieldTower, kind: Optional[GroupSchemeKindP] = None, spread: int = 4
) -> AnnulusElement:
    kinds = [ETALE, MU_P] + ([ALPHA_P] if tower.v_lambda >= 2 else [])
    kind = kind or rng.choice(kinds)
    if kind == MU_P:
        return random_mu_p_unit(rng, tower, spread)
    if kind == ETALE:
        return random_etale_unit(rng, tower, spread)
    return random_alpha_p_unit(rng, tower, spread)


def random_annulus_unit(rng: Random, tower: LocalFieldTower, spread: int = 2) -> AnnulusElement:
    """A unit of A: a monomial times 1 + (positive tail), lifted exactly"""
    F = tower.residue_field
    body = random_laurent(rng, F, 0, spread, spread + 1, 2, leading=0)
    shift = rng.randint(-spread, spread)
    return lift_polynomial(tower, body).shift(shift)
