"""
Randomized property families behind the `selfcheck` directive.

Each prop_* function draws its inputs from a seeded random.Random and returns
True when the identity holds on that sample.
"""
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Any, Callable, Dict, List, Optional, Tuple

from backend.charp_torsors import ALPHA_P, ETALE, MU_P, CharPTorsor, conductor_residue, frobenius_act
from backend.config import logger
from backend.degeneration import galois_equivariance_check, sp_homomorphism_check, specialize
from backend.errors import TorsorError
from backend.finite_field import finite_field
from backend.fp_series import Differential, cartier, d, dlog
from backend.lifting import admissibility_report, perturb_lift
from backend.padic_tower import make_base_field
from backend.sampling import (
    make_rng,
    random_annulus_unit,
    random_kummer_unit,
    random_mu_p_unit,
    random_point,
    random_rational,
    random_torsor,
)

Window = Tuple[int, int]

DEFAULT_COUNTS = {
    "cartier": 1000,
    "galois-invariance": 500,
    "kummer-invariance": 200,
    "sp-homomorphism": 200,
    "sp-equivariance": 200,
    "lift-roundtrip": 200,
    "filtration": 200,
}

CARTIER_FIELDS = ((3, 1), (2, 2), (5, 2))


@dataclass
class PropertyParams:
    p: int
    prec: int
    window: Window
    extend: str = "off"


# -- characteristic p -----------------------------------------------------------

def prop_cartier(rng, params: PropertyParams) -> bool:
    """C(dlog u) = dlog u, C(da) = 0, additivity, C(g^p w) = g C(w)"""
    F = finite_field(*CARTIER_FIELDS[rng.randrange(len(CARTIER_FIELDS))])
    u, a, g = random_rational(rng, F), random_rational(rng, F), random_rational(rng, F)
    w1 = Differential(random_rational(rng, F))
    w2 = Differential(random_rational(rng, F))
    log_form = dlog(u)
    checks = (
        cartier(log_form).agrees_with(log_form),
        cartier(d(a)).is_zero(),
        cartier(w1 + w2).agrees_with(cartier(w1) + cartier(w2)),
        cartier(w1.times(g ** F.p)).agrees_with(cartier(w1).times(g)),
    )
    return all(checks)


def prop_galois_invariance(rng, params: PropertyParams) -> bool:
    """Conductor and residue are carried along by Frobenius on F_{p^2}"""
    F = finite_field(params.p, 2)
    kind = rng.choice((ETALE, MU_P, ALPHA_P))
    f = random_torsor(rng, F, kind)
    x = random_point(rng, F)
    j = rng.randint(1, 3)
    local = conductor_residue(f, x, params.window)
    twisted = conductor_residue(frobenius_act(j, f), x.frobenius(j), params.window)
    return (
        twisted.m == local.m
        and twisted.trivial_locally == local.trivial_locally
        and twisted.h == F.frobenius(local.h, j)
    )


# -- mixed characteristic -----------------------------------------------------

def prop_kummer_invariance(rng, params: PropertyParams) -> bool:
    """Multiplying by a p-th power does not change the specialization"""
    tower = make_base_field(params.p, 1, params.prec, rng.choice((1, 2)))
    u = random_kummer_unit(rng, tower)
    w = random_annulus_unit(rng, tower)
    before = specialize(u, params.extend, params.window)
    after = specialize(u * w ** tower.p, params.extend, params.window)
    return after.matches(before)


def prop_sp_homomorphism(rng, params: PropertyParams) -> bool:
    tower = make_base_field(params.p, 1, params.prec)
    u, v = random_mu_p_unit(rng, tower), random_mu_p_unit(rng, tower)
    return sp_homomorphism_check(u, v, params.extend, params.window).passed


def prop_sp_equivariance(rng, params: PropertyParams) -> bool:
    tower = make_base_field(params.p, 2, params.prec)
    u = random_kummer_unit(rng, tower)
    return galois_equivariance_check(rng.randint(1, 2), u, params.extend, params.window).passed


def prop_lift_roundtrip(rng, params: PropertyParams) -> bool:
    """specialize(lift(f)) reproduces f; a perturbed lift reproduces the same report"""
    kind = rng.choice((ETALE, MU_P, ALPHA_P))
    tower = make_base_field(params.p, 1, params.prec, 2 if kind == ALPHA_P else 1)
    source = random_torsor(rng, tower.residue_field, kind)
    n = 1 if kind == ALPHA_P else None
    lifted = admissibility_report(source, tower, n, params.window)
    if not lifted.round_trip:
        return False
    if kind == ETALE:
        return True
    level = 1 if kind == MU_P else n + 1
    noise = random_rational(rng, tower.residue_field)
    perturbed = perturb_lift(lifted.unit, level, noise, None if kind == MU_P else n, params.window)
    return specialize(perturbed, "off", params.window).matches(lifted.report, compare_extension=False)


def _scaled_level(report) -> Fraction:
    return Fraction(report.filtration_level, report.extension_used)


def prop_filtration(rng, params: PropertyParams) -> bool:
    """level(uv) >= min(level u, level v) and level(u^-1) = level(u)"""
    tower = make_base_field(params.p, 1, params.prec, 2)
    u, v = random_kummer_unit(rng, tower, spread=2), random_kummer_unit(rng, tower, spread=2)
    ru = specialize(u, "auto", params.window)
    rv = specialize(v, "auto", params.window)
    ruv = specialize(u * v, "auto", params.window)
    # u^-1 and u^(p-1) differ by a p-th power
    rinv = specialize(u ** (tower.p - 1), "auto", params.window)
    return (
        _scaled_level(ruv) >= min(_scaled_level(ru), _scaled_level(rv))
        and _scaled_level(rinv) == _scaled_level(ru)
    )


PROPERTIES: Dict[str, Callable[[Any, PropertyParams], bool]] = {
    "cartier": prop_cartier,
    "galois-invariance": prop_galois_invariance,
    "kummer-invariance": prop_kummer_invariance,
    "sp-homomorphism": prop_sp_homomorphism,
    "sp-equivariance": prop_sp_equivariance,
    "lift-roundtrip": prop_lift_roundtrip,
    "filtration": prop_filtration,
}


@dataclass
class SelfCheckResult:
    name: str
    count: int
    seed: int
    failed: int = 0
    failures: List[Dict[str, Any]] = dc_field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.failed == 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "property": self.name,
            "count": self.count,
            "seed": self.seed,
            "failed": self.failed,
            "failures": self.failures,
            "pass": self.passed,
        }


def run_property(name: str, params: PropertyParams, count: Optional[int] = None, seed: int = 0) -> SelfCheckResult:
    """Run one family on `count` samples drawn from Random(seed)"""
    prop = PROPERTIES[name]
    count = count or DEFAULT_COUNTS[name]
    rng = make_rng(seed)
    result = SelfCheckResult(name, count, seed)
    for index in range(count):
        try:
            ok = prop(rng, params)
            failure = None if ok else {"sample": index}
        except TorsorError as exc:
            failure = {"sample": index, "error": exc.to_dict()}
        if failure is not None:
            result.failed += 1
            if len(result.failures) < 5:
                result.failures.append(failure)
    logger.info(f"🧮 selfcheck {name}: {count - result.failed}/{count} passed (seed {seed})")
    return result
