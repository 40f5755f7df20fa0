"""
Lifting rank-p torsors from the special fibre to mu_p-torsors over the annulus.
"""
from dataclasses import dataclass, replace
from typing import Any, Dict, Optional, Tuple, Union

from backend.annulus import AnnulusElement, pth_power_test
from backend.charp_torsors import ETALE, MU_P, CharPTorsor, conductor_residue, same_class
from backend.config import logger, TORSOR_WINDOW
from backend.degeneration import SpecializationReport, Verdict, specialize
from backend.errors import BadN, NeedsRamifiedExtension, NotAUnit, TrivialDatum
from backend.fp_series import ORIGIN, Function, LaurentSeries, as_germ
from backend.padic_tower import LocalFieldTower, ramified_base_change

Window = Tuple[int, int]


def _germ(datum: Function, window: Optional[Window]) -> LaurentSeries:
    return as_germ(datum, window or TORSOR_WINDOW)


def _lift(tower: LocalFieldTower, datum: Union[Function, AnnulusElement], window: Optional[Window]) -> AnnulusElement:
    if isinstance(datum, AnnulusElement):
        return datum
    return AnnulusElement.lift_series(tower, _germ(datum, window))


def lift_etale(tower: LocalFieldTower, a_bar: Function, window: Optional[Window] = None) -> AnnulusElement:
    """u = 1 + lambda^p * a for a coefficientwise lift a of the Artin-Schreier datum"""
    one = AnnulusElement.one(tower)
    if a_bar.is_zero():
        return one
    a = _lift(tower, a_bar, window)
    return one + a.scale(tower.lam ** tower.p)


def lift_mu_p(tower: LocalFieldTower, u_bar: Function, window: Optional[Window] = None) -> AnnulusElement:
    """Any coefficientwise lift; p-th power data lift to the p-th power of a lifted root"""
    if u_bar.is_zero():
        raise NotAUnit("a mu_p datum must be a unit")
    germ = _germ(u_bar, window)
    test = pth_power_test(germ)
    if test.is_pth_power:
        return AnnulusElement.lift_series(tower, test.root) ** tower.p
    return AnnulusElement.lift_series(tower, germ)


def perturb_lift(
    u: AnnulusElement,
    n: int,
    u_prime: Union[Function, AnnulusElement],
    above: Optional[int] = None,
    window: Optional[Window] = None,
) -> AnnulusElement:
    """u * (1 + pi^{pn} u'); with `above` set, n must exceed that level"""
    tower = u.tower
    if not 0 < n <= tower.v_lambda:
        raise BadN(f"n={n} must satisfy 0 < n <= v(lambda)={tower.v_lambda}", n=n)
    if above is not None and n <= above:
        raise BadN(f"perturbation level {n} must exceed {above}", n=n)
    w = _lift(tower, u_prime, window)
    return u * (AnnulusElement.one(tower) + w.scale(tower.pi_power(tower.p * n)))


def perturbation_is_nontrivial(
    tower: LocalFieldTower, n: int, u_prime: Union[Function, AnnulusElement], window: Optional[Window] = None
) -> bool:
    """Certificate that 1 + pi^{pn} u' is not a p-th power (for n < v(lambda))"""
    if not 0 < n < tower.v_lambda:
        raise BadN(f"certificates need 0 < n < v(lambda)={tower.v_lambda}", n=n)
    w = _lift(tower, u_prime, window)
    if w.pi_content() != 0:
        return False
    return not pth_power_test(w.reduce_mod_pi(window)).is_pth_power


def lift_alpha_p(tower: LocalFieldTower, a_bar: Function, n: int, window: Optional[Window] = None) -> AnnulusElement:
    """u = 1 + pi^{pn} a; needs 0 < n < v(lambda)"""
    if n <= 0:
        raise BadN(f"n={n} must be positive", n=n)
    if n >= tower.v_lambda:
        c = n // tower.v_lambda + 1
        raise NeedsRamifiedExtension(c, n=n, v_lambda=tower.v_lambda)
    germ = _germ(a_bar, window)
    if germ.is_zero() or pth_power_test(germ).is_pth_power:
        raise TrivialDatum("alpha_p datum is a p-th power; its torsor is trivial")
    a = AnnulusElement.lift_series(tower, germ)
    return AnnulusElement.one(tower) + a.scale(tower.pi_power(tower.p * n))


@dataclass(frozen=True, eq=False)
class LiftReport:
    source: CharPTorsor
    unit: AnnulusElement
    extension_used: int
    report: SpecializationReport
    round_trip: bool

    @property
    def tower(self) -> LocalFieldTower:
        return self.unit.tower

    def to_dict(self) -> Dict[str, Any]:
        return {
            "source": self.source.to_dict(),
            "lift": self.unit.to_expression(),
            "extension": {"c": self.extension_used},
            "report": self.report.to_dict(),
            "round_trip": self.round_trip,
        }


def round_trip_matches(source: CharPTorsor, report: SpecializationReport, window: Optional[Window] = None) -> bool:
    """Kind, conductor, residue and special-fibre class agree with the source torsor"""
    window = window or TORSOR_WINDOW
    if report.kind != source.kind:
        return False
    local = conductor_residue(source, ORIGIN, window)
    if local.trivial_locally or report.trivial:
        return local.trivial_locally == report.trivial
    if (local.m, local.h) != (report.m, report.h):
        return False
    return same_class(source, report.special_fibre, ORIGIN, window)


def admissibility_report(
    source: CharPTorsor,
    tower: LocalFieldTower,
    n: Optional[int] = None,
    window: Optional[Window] = None,
) -> LiftReport:
    """Lift source, extending the base when the alpha_p case needs it, and verify the round trip"""
    window = window or TORSOR_WINDOW
    c = 1
    if source.kind == ETALE:
        unit = lift_etale(tower, source.datum, window)
    elif source.kind == MU_P:
        unit = lift_mu_p(tower, source.datum, window)
    else:
        level = n or 1
        if level >= tower.v_lambda:
            c = level // tower.v_lambda + 1
            tower, _ = ramified_base_change(tower, c)
            logger.debug(f"🔧 alpha_p lift at n={level} needs c={c}")
        unit = lift_alpha_p(tower, source.datum, level, window)
    report = specialize(unit, "off", window)
    report = replace(report, extension_used=c)
    ok = round_trip_matches(source, report, window)
    logger.debug(f"🔁 Lift round trip for {source.kind.value}: {'ok' if ok else 'mismatch'}")
    return LiftReport(source, unit, c, report, ok)


def inertia_check(tower: LocalFieldTower, a_bar: Function, c: int, window: Optional[Window] = None) -> Verdict:
    """An etale lift specializes to the same class after a ramified base change of degree c"""
    window = window or TORSOR_WINDOW
    unit = lift_etale(tower, a_bar, window)
    before = specialize(unit, "off", window)
    target, embedding = ramified_base_change(tower, c)
    after = specialize(unit.embed(embedding), "off", window)
    passed = (
        after.kind == before.kind
        and (after.m, after.h, after.trivial) == (before.m, before.h, before.trivial)
        and after.n == c * before.n
        and (before.trivial or same_class(before.special_fibre, after.special_fibre, ORIGIN, window))
    )
    return Verdict("inertia-check", passed, {"c": c, "before": before.to_dict(), "after": after.to_dict()})
