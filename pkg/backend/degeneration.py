"""
Degeneration of mu_p-torsors over the annulus: the isogenies phi_n, normalization of
Kummer units, the specialization report, and the checks and filtration built on it.
"""
import math
from dataclasses import dataclass, field as dc_field, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

from backend.annulus import AnnulusElement, pth_power_test
from backend.charp_torsors import (
    ALPHA_P,
    ETALE,
    MU_P,
    CharPTorsor,
    GroupSchemeKindP,
    artin_schreier_reduce,
    canonical_form,
    conductor_residue,
    same_class,
)
from backend.config import logger, parse_extend, TORSOR_WINDOW
from backend.errors import BadN, ExtensionRequired, NotAUnit, PrecisionExhausted, RamifiedInputContent, TorsorError
from backend.fp_series import LaurentSeries, ORIGIN
from backend.padic_tower import LocalFieldTower, TowerElement, ramified_base_change
from backend.polynomials import Polynomial

Window = Tuple[int, int]


# -- the isogenies phi_n ----------------------------------------------------

def _check_n(tower: LocalFieldTower, n: int) -> None:
    if not 0 < n <= tower.v_lambda:
        raise BadN(f"n={n} must satisfy 0 < n <= v(lambda)={tower.v_lambda}", n=n)


def phi_coefficients(tower: LocalFieldTower, n: int) -> List[TowerElement]:
    """Coefficients of x^1..x^p in ((pi^n x + 1)^p - 1) / pi^{pn}"""
    _check_n(tower, n)
    p = tower.p
    return [tower.from_int(math.comb(p, k)).divide_by_pi(n * (p - k)) for k in range(1, p + 1)]


def phi_n(tower: LocalFieldTower, n: int, x: TowerElement) -> TowerElement:
    total = tower.zero()
    power = tower.one()
    for coefficient in phi_coefficients(tower, n):
        power = power * x
        total = total + coefficient * power
    return total


@dataclass(frozen=True)
class PhiSpecialFibre:
    n: int
    polynomial: Polynomial
    label: str

    def to_dict(self) -> Dict[str, Any]:
        return {"n": self.n, "special_fibre": self.label, "coefficients": list(self.polynomial.coeffs)}


def special_fibre_of_phi(tower: LocalFieldTower, n: int) -> PhiSpecialFibre:
    """Reduction of phi_n mod pi: x^p when n < v(lambda), x^p - x when n = v(lambda)"""
    F = tower.residue_field
    coeffs = (0,) + tuple(c.residue() for c in phi_coefficients(tower, n))
    poly = Polynomial(F, coeffs)
    terms = []
    for k in range(poly.degree, -1, -1):
        c = poly.coefficient(k)
        if not c:
            continue
        mono = "x" if k == 1 else f"x^{k}"
        if c == 1:
            terms.append(f"+ {mono}")
        elif c == F.neg(1):
            terms.append(f"- {mono}")
        else:
            terms.append(f"+ {F.format(c)}*{mono}")
    label = " ".join(terms).lstrip("+ ") if terms else "0"
    return PhiSpecialFibre(n, poly, label)


# -- normalization -------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class NormalForm:
    """u equals (a p-th power) times a unit whose reduction data is `datum`"""

    kind: GroupSchemeKindP
    n: int
    datum: LaurentSeries
    unit: AnnulusElement
    s: Optional[int] = None
    trivial: bool = False
    provenance: Tuple[str, ...] = ()

    @property
    def tower(self) -> LocalFieldTower:
        return self.unit.tower

    def special_fibre(self) -> CharPTorsor:
        return CharPTorsor(self.kind, self.datum)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "n": self.n,
            "s": self.s,
            "datum": self.datum.to_expression(),
            "unit": self.unit.to_expression(),
            "trivial": self.trivial,
            "provenance": list(self.provenance),
        }


def _full_reduction(u: AnnulusElement, window: Window) -> LaurentSeries:
    """Reduction of an exact u covering every coefficient, not just the window"""
    lo, hi = window
    return u.reduce_mod_pi((lo, max(hi, max(u.coeffs))))


def _divide_by_root_power(u: AnnulusElement, root: LaurentSeries, window: Window) -> AnnulusElement:
    """u / lift(root)^p, with lift(root)^p inverted exactly modulo a power of T"""
    tower = u.tower
    p = tower.p
    limit = u.t_prec if u.t_prec is not None else window[1] + 1
    exact = False
    if u.t_prec is None:
        full = pth_power_test(_full_reduction(u, window))
        if full.is_pth_power:
            root, exact = full.root, True
    lowest = min(0, u.lowest_exponent())
    if not exact:
        # a truncated root leaves p-fold cross terms from T^(root.prec + lowest) on
        limit = min(limit, root.prec + lowest)
        if limit <= 0:
            raise PrecisionExhausted(f"p-th root known below t^{root.prec} only; widen the window")
    power = AnnulusElement.lift_series(tower, root, exact=True) ** p
    return (u * power.inverse_mod_t(limit - lowest)).truncate(limit)


def normalize_kummer_unit(u: AnnulusElement, window: Optional[Window] = None) -> NormalForm:
    """Multiply u by p-th powers until its reduction type is visible"""
    window = window or TORSOR_WINDOW
    hi = window[1]
    tower = u.tower
    p, vl = tower.p, tower.v_lambda
    provenance: List[str] = []
    if u.is_zero():
        raise NotAUnit("the zero element is not a Kummer unit")
    kappa = u.pi_content()
    if kappa % p:
        raise RamifiedInputContent(f"pi-content {kappa} is not divisible by p={p}", kappa=int(kappa))
    if kappa:
        u = u.divide_by_pi(int(kappa))
        provenance.append(f"divided by pi^{kappa}")
    reduction = u.reduce_mod_pi(window)
    beta = reduction.valuation() // p
    if beta:
        u = u.shift(-p * beta)
        provenance.append(f"divided by T^{p * beta}")
        reduction = u.reduce_mod_pi(window)
    test = pth_power_test(reduction)
    if not test.is_pth_power:
        logger.debug(f"🌊 Reduction {reduction.to_expression()} is not a p-th power: mu_p type")
        return NormalForm(MU_P, 0, reduction, u, 0, False, tuple(provenance))
    root = test.root
    if root.coeffs != {0: 1}:
        u = _divide_by_root_power(u, root, window)
        provenance.append(f"multiplied by lift({root.to_expression()})^-{p}")
    limit = p * vl + 2
    for _ in range(limit + 1):
        w = u - AnnulusElement.one(tower)
        if w.is_zero():
            if u.prec > p * vl:
                provenance.append("unit is 1 beyond lambda^p")
                zero = LaurentSeries.zero(tower.residue_field, hi + 1)
                return NormalForm(ETALE, vl, zero, u, None, True, tuple(provenance))
            raise PrecisionExhausted(f"unit is 1 modulo pi^{u.prec}; raise the precision")
        s = int(w.pi_content())
        if s >= p * vl:
            if s > p * vl:
                datum = LaurentSeries.zero(tower.residue_field, w.t_prec if w.t_prec is not None else hi + 1)
            else:
                datum = w.divide_by_pi(s).reduce_mod_pi(window)
            reduced, _ = artin_schreier_reduce(datum)
            trivial = not any(k < 0 for k in reduced.coeffs)
            logger.debug(f"🌊 s={s} >= p*v(lambda): etale type, datum {datum.to_expression()}")
            return NormalForm(ETALE, vl, datum, u, s, trivial, tuple(provenance))
        if s % p:
            c = p // math.gcd(s, p)
            logger.debug(f"🌊 s={s} is prime to p: needs a ramified extension of degree {c}")
            raise ExtensionRequired(c, s=s)
        n = s // p
        datum = w.divide_by_pi(s).reduce_mod_pi(window)
        test = pth_power_test(datum)
        if not test.is_pth_power:
            logger.debug(f"🌊 s={s}: alpha_p type with n={n}, datum {datum.to_expression()}")
            return NormalForm(ALPHA_P, n, datum, u, s, False, tuple(provenance))
        exact = False
        if w.t_prec is None:
            full = _full_reduction(w.divide_by_pi(s), window)
            exact = full.pth_root() is not None
            if exact:
                datum = full
        y_bar = (-datum).pth_root()
        y = AnnulusElement.lift_series(tower, y_bar, exact=True)
        step = (AnnulusElement.one(tower) + y.scale(tower.pi_power(n))) ** p
        u = u * step
        if not exact:
            u = u.truncate(w.t_prec if w.t_prec is not None else hi + 1)
        provenance.append(f"multiplied by (1 + pi^{n}*({y_bar.to_expression()}))^{p}")
    raise PrecisionExhausted(f"normalization did not settle within {limit} rounds")


# -- specialization ------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class SpecializationReport:
    delta: int
    n: int
    kind: GroupSchemeKindP
    special_fibre: CharPTorsor
    m: int
    h: int
    order: Optional[int]
    normal_form_exponent: Optional[int]
    extension_used: int
    filtration_level: int
    trivial: bool
    tower: LocalFieldTower
    normal_form: Optional[NormalForm] = dc_field(default=None, repr=False)

    @property
    def deg_type(self) -> Tuple[str, int, int]:
        return (self.kind.value, self.m, self.h)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "delta": self.delta,
            "n": self.n,
            "m": self.m,
            "h": self.h,
            "level": self.filtration_level,
            "trivial": self.trivial,
            "order": self.order,
            "normal_form_exponent": self.normal_form_exponent,
            "special_fibre": self.special_fibre.datum_expression(),
            "extension": {"c": self.extension_used},
            "v_p": self.tower.v_p,
            "v_lambda": self.tower.v_lambda,
        }

    def frobenius(self, j: int) -> "SpecializationReport":
        return replace(self, special_fibre=self.special_fibre.frobenius(j))

    def matches(self, other: "SpecializationReport", compare_extension: bool = True) -> bool:
        """Field equality plus equality of special-fibre classes on the common window"""
        fields = ("delta", "n", "kind", "m", "h", "filtration_level", "trivial")
        if any(getattr(self, name) != getattr(other, name) for name in fields):
            return False
        if compare_extension and self.extension_used != other.extension_used:
            return False
        if self.trivial:
            return True
        return same_class(self.special_fibre, other.special_fibre)


def _extend(u: AnnulusElement, c: int) -> AnnulusElement:
    if c == 1:
        return u
    _, embedding = ramified_base_change(u.tower, c)
    return u.embed(embedding)


def normalize_with_policy(u: AnnulusElement, extend: str, window: Window) -> Tuple[NormalForm, int]:
    policy = parse_extend(extend)
    c = int(policy[2:]) if policy.startswith("c=") else 1
    u = _extend(u, c)
    for _ in range(4):
        try:
            return normalize_kummer_unit(u, window), c
        except ExtensionRequired as exc:
            if policy != "auto":
                raise
            logger.debug(f"🔧 Applying ramified extension of degree {exc.c}")
            u = _extend(u, exc.c)
            c *= exc.c
    raise PrecisionExhausted(f"no normal form after extensions of total degree {c}")


def report_from_normal_form(nf: NormalForm, extension_used: int = 1, window: Optional[Window] = None) -> SpecializationReport:
    tower = nf.tower
    window = window or TORSOR_WINDOW
    n = nf.n
    delta = tower.v_p - n * (tower.p - 1)
    special = canonical_form(nf.special_fibre(), ORIGIN, window)
    if nf.trivial:
        m, h, order, exponent = 0, 0, None, None
        level = tower.v_lambda
    else:
        local = conductor_residue(special, ORIGIN, window)
        m, h, order = local.m, local.h, local.order
        exponent = h if (nf.kind == MU_P and m == 0) else -m
        level = n
    return SpecializationReport(
        delta=delta,
        n=n,
        kind=nf.kind,
        special_fibre=special,
        m=m,
        h=h,
        order=order,
        normal_form_exponent=exponent,
        extension_used=extension_used,
        filtration_level=level,
        trivial=nf.trivial,
        tower=tower,
        normal_form=nf,
    )


def specialize(u: AnnulusElement, extend: str = "off", window: Optional[Window] = None) -> SpecializationReport:
    """The specialization of the mu_p-torsor T^p = u to the special fibre"""
    window = window or TORSOR_WINDOW
    nf, c = normalize_with_policy(u, extend, window)
    report = report_from_normal_form(nf, c, window)
    logger.debug(f"✅ Specialized {u.to_expression()} -> {report.deg_type}, delta {report.delta}")
    return report


def specialize_batch(
    units: Sequence[AnnulusElement], extend: str = "off", window: Optional[Window] = None
) -> List[Union[SpecializationReport, TorsorError]]:
    """One report or error per input, in input order"""
    results: List[Union[SpecializationReport, TorsorError]] = []
    for u in units:
        try:
            results.append(specialize(u, extend, window))
        except TorsorError as exc:
            results.append(exc)
    return results


def sp_mu_p_class(u: AnnulusElement, extend: str = "off", window: Optional[Window] = None) -> CharPTorsor:
    """Sp into mu_p classes; alpha_p and etale reductions land on the trivial class"""
    window = window or TORSOR_WINDOW
    trivial = CharPTorsor(MU_P, LaurentSeries.constant(u.tower.residue_field, 1, window[1] + 1))
    try:
        report = specialize(u, extend, window)
    except ExtensionRequired:
        # only raised once the reduction is a p-th power
        return trivial
    return report.special_fibre if report.kind == MU_P else trivial


@dataclass(frozen=True)
class Verdict:
    name: str
    passed: bool
    details: Dict[str, Any] = dc_field(default_factory=dict)

    def to_dict(self) -> Dict[str, Any]:
        return {"check": self.name, "pass": self.passed, **self.details}


def sp_homomorphism_check(
    u: AnnulusElement, v: AnnulusElement, extend: str = "off", window: Optional[Window] = None
) -> Verdict:
    """Sp(u v) = Sp(u) Sp(v) as mu_p classes"""
    window = window or TORSOR_WINDOW
    left = sp_mu_p_class(u * v, extend, window)
    su, sv = sp_mu_p_class(u, extend, window), sp_mu_p_class(v, extend, window)
    right = CharPTorsor(MU_P, su.datum * sv.datum)
    passed = same_class(left, right, ORIGIN, window)
    return Verdict("sp-check", passed, {"product": left.datum_expression(), "factors": right.datum_expression()})


def galois_equivariance_check(
    j: int, u: AnnulusElement, extend: str = "off", window: Optional[Window] = None
) -> Verdict:
    """Sp(u^sigma) = Sp(u)^sigma for sigma the j-th power of Frobenius"""
    window = window or TORSOR_WINDOW
    twisted = specialize(u.frobenius(j), extend, window)
    expected = specialize(u, extend, window).frobenius(j)
    passed = twisted.matches(expected)
    return Verdict(
        "galois-check",
        passed,
        {"sigma": j, "twisted": twisted.to_dict(), "expected": expected.to_dict()},
    )


# -- filtration and the different --------------------------------------------

def filtration_level(u: AnnulusElement, extend: str = "off", window: Optional[Window] = None) -> int:
    return specialize(u, extend, window).filtration_level


def filtration_bucket(
    units: Sequence[AnnulusElement], extend: str = "off", window: Optional[Window] = None
) -> Dict[int, List[int]]:
    """Fil_n as index sets, n = 0..v(lambda); levels rescaled to a common extension"""
    reports = [specialize(u, extend, window) for u in units]
    if not reports:
        return {}
    common = math.lcm(*(r.extension_used for r in reports))
    levels = [r.filtration_level * (common // r.extension_used) for r in reports]
    top = max(r.tower.v_lambda * (common // r.extension_used) for r in reports)
    return {n: [i for i, level in enumerate(levels) if level >= n] for n in range(top + 1)}


def different_degree_oracle(u: AnnulusElement, extend: str = "off", window: Optional[Window] = None) -> int:
    """Valuation of the derivative of the normalized equation, computed term by term"""
    window = window or TORSOR_WINDOW
    nf, _ = normalize_with_policy(u, extend, window)
    tower = nf.tower
    p = tower.p
    if nf.kind == MU_P:
        return int(tower.valuation_of_int(p))
    n = nf.n
    return int(min(tower.from_int(k * math.comb(p, k)).valuation() + n * (k - p) for k in range(1, p + 1)))
