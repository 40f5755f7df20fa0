"""
Rank-p torsors in characteristic p: Artin-Schreier reduction, conductors and residues,
the Cartier test, Frobenius action, canonical class representatives and mixed torsors.
"""
from dataclasses import dataclass, field as dc_field
from enum import Enum
from typing import Any, Dict, Optional, Tuple

from backend.config import logger
from backend.errors import SchemeMismatch, TrivialLocally, UnsupportedKind, WindowTooSmall, ZeroFunction
from backend.finite_field import FiniteField
from backend.fp_series import (
    Differential,
    Function,
    LaurentSeries,
    ORIGIN,
    P1Point,
    cartier,
    d,
    default_window,
    dlog,
    format_rational,
    local_expand,
)
from backend.polynomials import RationalFunction


class GroupSchemeKindP(str, Enum):
    ETALE = "etale"
    MU_P = "mu_p"
    ALPHA_P = "alpha_p"


ETALE = GroupSchemeKindP.ETALE
MU_P = GroupSchemeKindP.MU_P
ALPHA_P = GroupSchemeKindP.ALPHA_P


@dataclass(frozen=True, eq=False)
class CharPTorsor:
    """t^p - t = a (etale), t^p = u (mu_p) or t^p = a (alpha_p)"""

    kind: GroupSchemeKindP
    datum: Function
    chart: str = "t"

    def __post_init__(self):
        if self.kind == MU_P and self.datum.is_zero():
            raise ZeroFunction("a mu_p torsor needs a nonzero datum")

    @property
    def field(self) -> FiniteField:
        return self.datum.field

    @property
    def is_germ(self) -> bool:
        return isinstance(self.datum, LaurentSeries)

    def differential(self) -> Differential:
        if self.kind == MU_P:
            return dlog(self.datum)
        if self.kind == ALPHA_P:
            return d(self.datum)
        raise UnsupportedKind("etale torsors have no associated differential form")

    def frobenius(self, j: int = 1) -> "CharPTorsor":
        return CharPTorsor(self.kind, self.datum.frobenius(j), self.chart)

    def datum_expression(self) -> str:
        if isinstance(self.datum, RationalFunction):
            return format_rational(self.datum, self.chart)
        return self.datum.to_expression(self.chart)

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "datum": self.datum_expression()}


@dataclass(frozen=True)
class TorsorLocalData:
    m: int
    h: int
    order: Optional[int] = None
    trivial_locally: bool = False

    def to_dict(self) -> Dict[str, Any]:
        return {"m": self.m, "h": self.h, "order": self.order, "trivial_locally": self.trivial_locally}


# -- Artin-Schreier reduction -------------------------------------------

def artin_schreier_reduce(a: LaurentSeries) -> Tuple[LaurentSeries, LaurentSeries]:
    """(reduced, witness) with reduced = a - (witness^p - witness) and no negative exponent divisible by p"""
    F = a.field
    p = F.p
    if a.prec < 1:
        raise WindowTooSmall(f"series known only below t^{a.prec}; the constant term is needed")
    witness = LaurentSeries.zero(F, a.prec)
    current = a
    while True:
        bad = [k for k in current.coeffs if k < 0 and k % p == 0]
        if not bad:
            break
        k = min(bad)
        b = LaurentSeries.monomial(F, F.pth_root(current.coeffs[k]), k // p, a.prec)
        witness = witness + b
        current = current - (b.pth_power().truncate(a.prec) - b)
    positive = LaurentSeries(F, {k: c for k, c in current.coeffs.items() if k > 0}, a.prec)
    if not positive.is_zero():
        acc = LaurentSeries.zero(F, a.prec)
        term = positive
        while not term.is_zero():
            acc = acc + term
            term = term.pth_power().truncate(a.prec)
        witness = witness - acc
    constant = current.coeffs.get(0, 0)
    if constant:
        x = F.solve_artin_schreier(constant)
        if x is not None:
            witness = witness + LaurentSeries.constant(F, x, a.prec)
    reduced = a - (witness.pth_power().truncate(a.prec) - witness)
    logger.debug(f"🔍 AS-reduced {a.to_expression()} to {reduced.to_expression()}")
    return reduced, witness


# -- local invariants -----------------------------------------------------

def _local_datum(f: CharPTorsor, x: P1Point, window: Tuple[int, int]) -> LaurentSeries:
    return local_expand(f.datum, x, window)


def _trivial(kind: GroupSchemeKindP, x: P1Point, strict: bool) -> TorsorLocalData:
    if strict:
        raise TrivialLocally(f"{kind.value} torsor is trivial at {x.label()} to the inspected depth")
    return TorsorLocalData(0, 0, None, True)


def conductor_residue(
    f: CharPTorsor,
    x: P1Point = ORIGIN,
    window: Optional[Tuple[int, int]] = None,
    strict: bool = False,
) -> TorsorLocalData:
    """Conductor m_x and residue h_x of f at x"""
    window = window or default_window()
    if f.kind == ETALE:
        if f.datum.is_zero():
            return _trivial(f.kind, x, strict)
        reduced, _ = artin_schreier_reduce(_local_datum(f, x, window))
        polar = [k for k in reduced.coeffs if k < 0]
        if not polar:
            return _trivial(f.kind, x, strict)
        return TorsorLocalData(-min(polar), 0, min(polar))
    if f.kind == ALPHA_P and f.datum.is_zero():
        return _trivial(f.kind, x, strict)
    local = _local_datum(f, x, window)
    omega = dlog(local) if f.kind == MU_P else d(local)
    if omega.is_zero():
        return _trivial(f.kind, x, strict)
    ord_x = omega.base.valuation()
    m = -(ord_x + 1)
    h = omega.base.coeffs.get(-1, 0) if m == 0 else 0
    return TorsorLocalData(m, h, ord_x)


@dataclass(frozen=True, eq=False)
class CartierVerdict:
    kind: GroupSchemeKindP
    differential: Differential
    image: Differential
    passed: bool

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "differential": self.differential.to_expression(),
            "image": self.image.to_expression(),
            "pass": self.passed,
        }


def cartier_class_check(f: CharPTorsor) -> CartierVerdict:
    """C(omega) = omega for mu_p data, C(omega) = 0 for alpha_p data"""
    if f.kind == ETALE:
        raise UnsupportedKind("the Cartier test applies to mu_p and alpha_p torsors")
    omega = f.differential()
    image = cartier(omega)
    if f.kind == MU_P:
        passed = omega.agrees_with(image) if omega.is_germ else image.base == omega.base
    else:
        passed = image.is_zero()
    logger.debug(f"🔍 Cartier check {f.kind.value}: {'pass' if passed else 'fail'}")
    return CartierVerdict(f.kind, omega, image, passed)


def frobenius_act(j: int, f: CharPTorsor) -> CharPTorsor:
    """The transform of f by the j-th power of Frobenius on coefficients"""
    return f.frobenius(j)


# -- canonical representatives ------------------------------------------

def _mu_p_canonical(s: LaurentSeries) -> LaurentSeries:
    F = s.field
    p = F.p
    v = s.valuation()
    r = v % p
    unit = s.scale(F.inv(s.coeffs[v])).shift(-v)
    i = 1
    while i < unit.prec:
        c = unit.coeffs.get(i, 0)
        if c and i % p == 0:
            # (1 + c t^i) is a p-th power; divide it out
            inverse_terms = {}
            k = 0
            while i * k < unit.prec:
                inverse_terms[i * k] = F.pow(F.neg(c), k)
                k += 1
            unit = unit * LaurentSeries(F, inverse_terms, unit.prec)
        i += 1
    return unit.shift(r)


def canonical_form(f: CharPTorsor, x: P1Point = ORIGIN, window: Optional[Tuple[int, int]] = None) -> CharPTorsor:
    """The unique representative of the class of f as a Laurent germ at x (classes taken over k-bar)"""
    window = window or default_window()
    F = f.field
    if f.kind != MU_P and f.datum.is_zero():
        return CharPTorsor(f.kind, LaurentSeries.zero(F, window[1] + 1), f.chart)
    local = _local_datum(f, x, window)
    if f.kind == ETALE:
        reduced, _ = artin_schreier_reduce(local)
        datum = LaurentSeries(F, {k: c for k, c in reduced.coeffs.items() if k < 0}, reduced.prec)
    elif f.kind == ALPHA_P:
        datum = LaurentSeries(F, {k: c for k, c in local.coeffs.items() if k % F.p}, local.prec)
    else:
        datum = _mu_p_canonical(local)
    return CharPTorsor(f.kind, datum, f.chart)


def same_class(f: CharPTorsor, g: CharPTorsor, x: P1Point = ORIGIN, window: Optional[Tuple[int, int]] = None) -> bool:
    if f.kind != g.kind:
        return False
    if f.field != g.field:
        raise SchemeMismatch("torsors live over different fields")
    return canonical_form(f, x, window).datum.agrees_with(canonical_form(g, x, window).datum)


def is_trivial(f: CharPTorsor, x: P1Point = ORIGIN, window: Optional[Tuple[int, int]] = None) -> bool:
    """Triviality of the local class at x, to the inspected depth"""
    canonical = canonical_form(f, x, window).datum
    if f.kind == MU_P:
        return all(k == 0 for k in canonical.coeffs)
    return canonical.is_zero()


# -- mixed torsors --------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MixedTorsor:
    """A formal sum of torsors, at most one per group-scheme kind"""

    parts: Dict[GroupSchemeKindP, CharPTorsor] = dc_field(default_factory=dict)

    @classmethod
    def zero(cls) -> "MixedTorsor":
        return cls({})

    @classmethod
    def of(cls, torsor: CharPTorsor) -> "MixedTorsor":
        return cls({torsor.kind: torsor})

    def get(self, kind: GroupSchemeKindP) -> Optional[CharPTorsor]:
        return self.parts.get(kind)

    def kinds(self) -> Tuple[GroupSchemeKindP, ...]:
        return tuple(k for k in GroupSchemeKindP if k in self.parts)

    def negate(self) -> "MixedTorsor":
        out = {}
        for kind, torsor in self.parts.items():
            datum = torsor.datum.inverse() if kind == MU_P else -torsor.datum
            out[kind] = CharPTorsor(kind, datum, torsor.chart)
        return MixedTorsor(out)

    def frobenius(self, j: int = 1) -> "MixedTorsor":
        return MixedTorsor({kind: torsor.frobenius(j) for kind, torsor in self.parts.items()})

    def __add__(self, other: "MixedTorsor") -> "MixedTorsor":
        return mixed_add(self, other)

    def to_dict(self) -> Dict[str, Any]:
        return {kind.value: self.parts[kind].datum_expression() for kind in self.kinds()}


def _check_compatible(a: CharPTorsor, b: CharPTorsor) -> None:
    if a.field != b.field:
        raise SchemeMismatch(f"torsors over {a.field} and {b.field} cannot be added")
    if a.is_germ != b.is_germ or a.chart != b.chart:
        raise SchemeMismatch("torsors live on different charts")


def mixed_add(x: MixedTorsor, y: MixedTorsor) -> MixedTorsor:
    """Componentwise sum: etale and alpha_p data add, mu_p data multiply"""
    out = dict(x.parts)
    for kind, torsor in y.parts.items():
        if kind not in out:
            out[kind] = torsor
            continue
        mine = out[kind]
        _check_compatible(mine, torsor)
        datum = mine.datum * torsor.datum if kind == MU_P else mine.datum + torsor.datum
        out[kind] = CharPTorsor(kind, datum, mine.chart)
    return MixedTorsor(out)
