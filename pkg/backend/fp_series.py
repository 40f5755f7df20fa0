"""
Truncated Laurent series, differential forms and the Cartier operator over F_{p^f}.

A LaurentSeries knows every coefficient with exponent < prec; everything at or
above prec is unknown.  Operations compute the exact precision of their output
and raise WindowTooSmall instead of truncating silently.
"""
from dataclasses import dataclass, field as dc_field
from typing import Dict, List, Optional, Tuple, Union

from backend.config import logger, TORSOR_WINDOW
from backend.errors import NotExpandable, WindowTooSmall, ZeroFunction
from backend.finite_field import FiniteField, FieldEmbedding
from backend.polynomials import Polynomial, RationalFunction


@dataclass(frozen=True, eq=False)
class LaurentSeries:
    field: FiniteField
    coeffs: Dict[int, int] = dc_field(default_factory=dict)
    prec: int = 0

    def __post_init__(self):
        clean = {k: c for k, c in self.coeffs.items() if c and k < self.prec}
        object.__setattr__(self, "coeffs", clean)

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, field: FiniteField, prec: int) -> "LaurentSeries":
        return cls(field, {}, prec)

    @classmethod
    def monomial(cls, field: FiniteField, c: int, k: int, prec: int) -> "LaurentSeries":
        return cls(field, {k: c}, prec)

    @classmethod
    def constant(cls, field: FiniteField, c: int, prec: int) -> "LaurentSeries":
        return cls(field, {0: c}, prec)

    @classmethod
    def from_polynomial(cls, poly: Polynomial, prec: int, shift: int = 0) -> "LaurentSeries":
        return cls(poly.field, {i + shift: c for i, c in enumerate(poly.coeffs)}, prec)

    # -- inspection -----------------------------------------------------

    def is_zero(self) -> bool:
        """Zero to the known precision"""
        return not self.coeffs

    def valuation(self) -> int:
        if not self.coeffs:
            raise WindowTooSmall(f"series is zero below t^{self.prec}, valuation unknown")
        return min(self.coeffs)

    def _order_bound(self) -> int:
        return min(self.coeffs) if self.coeffs else self.prec

    def coefficient(self, k: int) -> int:
        if k >= self.prec:
            raise WindowTooSmall(f"coefficient of t^{k} lies beyond the known precision {self.prec}")
        return self.coeffs.get(k, 0)

    def leading_coefficient(self) -> int:
        return self.coeffs[self.valuation()]

    def exponents(self) -> List[int]:
        return sorted(self.coeffs)

    def truncate(self, prec: int) -> "LaurentSeries":
        return LaurentSeries(self.field, self.coeffs, min(prec, self.prec))

    def agrees_with(self, other: "LaurentSeries") -> bool:
        """Equality of all coefficients both series know"""
        common = min(self.prec, other.prec)
        keys = {k for k in self.coeffs if k < common} | {k for k in other.coeffs if k < common}
        return all(self.coeffs.get(k, 0) == other.coeffs.get(k, 0) for k in keys)

    def polar_part(self) -> "LaurentSeries":
        return LaurentSeries(self.field, {k: c for k, c in self.coeffs.items() if k < 0}, min(self.prec, 0))

    # -- ring operations ------------------------------------------------

    def __add__(self, other: "LaurentSeries") -> "LaurentSeries":
        F = self.field
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = F.add(out.get(k, 0), c)
        return LaurentSeries(F, out, min(self.prec, other.prec))

    def __neg__(self) -> "LaurentSeries":
        return LaurentSeries(self.field, {k: self.field.neg(c) for k, c in self.coeffs.items()}, self.prec)

    def __sub__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self + (-other)

    def __mul__(self, other: "LaurentSeries") -> "LaurentSeries":
        F = self.field
        prec = min(self._order_bound() + other.prec, other._order_bound() + self.prec)
        out: Dict[int, int] = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                if i + j < prec:
                    out[i + j] = F.add(out.get(i + j, 0), F.mul(a, b))
        return LaurentSeries(F, out, prec)

    def scale(self, c: int) -> "LaurentSeries":
        return LaurentSeries(self.field, {k: self.field.mul(c, a) for k, a in self.coeffs.items()}, self.prec)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by t^k"""
        return LaurentSeries(self.field, {e + k: c for e, c in self.coeffs.items()}, self.prec + k)

    def inverse(self) -> "LaurentSeries":
        F = self.field
        v = self.valuation()
        relative = self.prec - v
        inv_lead = F.inv(self.coeffs[v])
        a = [self.coeffs.get(v + i, 0) for i in range(relative)]
        b = [inv_lead]
        for n in range(1, relative):
            acc = 0
            for k in range(1, n + 1):
                if a[k]:
                    acc = F.add(acc, F.mul(a[k], b[n - k]))
            b.append(F.neg(F.mul(inv_lead, acc)))
        return LaurentSeries(F, {i - v: c for i, c in enumerate(b)}, relative - v)

    def __truediv__(self, other: "LaurentSeries") -> "LaurentSeries":
        return self * other.inverse()

    def __pow__(self, n: int) -> "LaurentSeries":
        if n < 0:
            return self.inverse() ** (-n)
        if n == 0:
            return LaurentSeries.constant(self.field, 1, self.prec - self._order_bound())
        result = self
        for _ in range(n - 1):
            result = result * self
        return result

    def pth_power(self) -> "LaurentSeries":
        F = self.field
        return LaurentSeries(F, {F.p * k: F.pow(c, F.p) for k, c in self.coeffs.items()}, F.p * self.prec)

    def pth_root(self) -> Optional["LaurentSeries"]:
        """r with r^p = self on the window, or None if some exponent is prime to p"""
        F = self.field
        if any(k % F.p for k in self.coeffs):
            return None
        return LaurentSeries(F, {k // F.p: F.pth_root(c) for k, c in self.coeffs.items()}, -((-self.prec) // F.p))

    def frobenius(self, j: int = 1) -> "LaurentSeries":
        return LaurentSeries(self.field, {k: self.field.frobenius(c, j) for k, c in self.coeffs.items()}, self.prec)

    def extend(self, embedding: FieldEmbedding) -> "LaurentSeries":
        return LaurentSeries(embedding.target, {k: embedding(c) for k, c in self.coeffs.items()}, self.prec)

    def derivative(self) -> "LaurentSeries":
        F = self.field
        return LaurentSeries(F, {k - 1: F.scalar(k, c) for k, c in self.coeffs.items()}, self.prec - 1)

    def to_expression(self, var: str = "t") -> str:
        return format_terms(self.field, sorted(self.coeffs.items()), var)


def format_terms(field: FiniteField, terms: List[Tuple[int, int]], var: str) -> str:
    """Print (exponent, coefficient) pairs in the document expression grammar"""
    parts = []
    for k, c in terms:
        coef = field.format(c)
        if " + " in coef:
            coef = f"({coef})"
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        if not mono:
            parts.append(coef)
        elif coef == "1":
            parts.append(mono)
        else:
            parts.append(f"{coef}*{mono}")
    return " + ".join(parts) if parts else "0"


def format_rational(r: RationalFunction, var: str = "t") -> str:
    num = format_terms(r.field, sorted(r.numerator.to_dict().items()), var)
    if r.is_polynomial():
        return num
    den = format_terms(r.field, sorted(r.denominator.to_dict().items()), var)
    return f"({num})/({den})"


@dataclass(frozen=True)
class P1Point:
    """The point t = value (over `field` when given) or the point at infinity"""

    value: Optional[int] = None
    field: Optional[FiniteField] = None

    @property
    def is_infinity(self) -> bool:
        return self.value is None

    def frobenius(self, j: int = 1) -> "P1Point":
        if self.value is None or self.field is None:
            return self
        return P1Point(self.field.frobenius(self.value, j), self.field)

    def label(self) -> str:
        if self.value is None:
            return "inf"
        return self.field.format(self.value) if self.field else str(self.value)


INFINITY = P1Point()
ORIGIN = P1Point(0)


Function = Union[LaurentSeries, RationalFunction]


@dataclass(frozen=True, eq=False)
class Differential:
    """omega = base * dt; a RationalFunction base is global on P^1, a LaurentSeries base is a germ at t = 0"""

    base: Function
    chart: str = "t"

    @property
    def field(self) -> FiniteField:
        return self.base.field

    @property
    def is_germ(self) -> bool:
        return isinstance(self.base, LaurentSeries)

    def is_zero(self) -> bool:
        return self.base.is_zero()

    def __add__(self, other: "Differential") -> "Differential":
        return Differential(_align(self.base, other.base, lambda a, b: a + b), self.chart)

    def __neg__(self) -> "Differential":
        return Differential(-self.base, self.chart)

    def __sub__(self, other: "Differential") -> "Differential":
        return self + (-other)

    def times(self, g: Function) -> "Differential":
        return Differential(_align(self.base, g, lambda a, b: a * b), self.chart)

    def frobenius(self, j: int = 1) -> "Differential":
        return Differential(self.base.frobenius(j), self.chart)

    def agrees_with(self, other: "Differential") -> bool:
        a, b = self.base, other.base
        if isinstance(a, RationalFunction) and isinstance(b, RationalFunction):
            return a == b
        window = default_window()
        return as_germ(a, window).agrees_with(as_germ(b, window))

    def to_expression(self) -> str:
        if isinstance(self.base, RationalFunction):
            body = format_rational(self.base, self.chart)
        else:
            body = self.base.to_expression(self.chart)
        return f"({body}) d{self.chart}"


def default_window() -> Tuple[int, int]:
    return TORSOR_WINDOW


def as_germ(g: Function, window: Optional[Tuple[int, int]] = None) -> LaurentSeries:
    """A function as a Laurent germ at t = 0"""
    if isinstance(g, LaurentSeries):
        return g
    return local_expand(g, ORIGIN, window or default_window())


def _align(a: Function, b: Function, op):
    if isinstance(a, RationalFunction) and isinstance(b, RationalFunction):
        return op(a, b)
    window = default_window()
    return op(as_germ(a, window), as_germ(b, window))


# -- local expansion ----------------------------------------------------

def _power_series_quotient(num: Polynomial, den: Polynomial, count: int) -> List[int]:
    """First `count` coefficients of num/den where den(0) != 0"""
    F = num.field
    inv0 = F.inv(den.coefficient(0))
    out: List[int] = []
    for n in range(count):
        acc = num.coefficient(n)
        for k in range(1, min(n, den.degree) + 1):
            d = den.coefficient(k)
            if d:
                acc = F.sub(acc, F.mul(d, out[n - k]))
        out.append(F.mul(acc, inv0))
    return out


def _extend_to_point(r: RationalFunction, x: P1Point) -> RationalFunction:
    if x.field is None or x.field == r.field:
        return r
    return r.extend(r.field.embed_into(x.field))


def local_expand(r: Function, x: P1Point, window: Tuple[int, int]) -> LaurentSeries:
    """Expansion of r in the local parameter s = t - a (or s = 1/t at infinity), exact on the window"""
    lo, hi = window
    if isinstance(r, LaurentSeries):
        if x.is_infinity or x.value != 0:
            raise NotExpandable(f"a Laurent germ at t=0 cannot be expanded at {x.label()}")
        if r.is_zero():
            raise ZeroFunction("cannot expand the zero function")
        if r.valuation() < lo:
            raise WindowTooSmall(f"leading exponent {r.valuation()} lies left of the window {lo}:{hi}")
        return r.truncate(hi + 1)
    if r.is_zero():
        raise ZeroFunction("cannot expand the zero function")
    r = _extend_to_point(r, x)
    num, den = r.numerator, r.denominator
    if x.is_infinity:
        order = den.degree - num.degree
        num_local, den_local = num.reversed_to(num.degree), den.reversed_to(den.degree)
    else:
        num_local, den_local = num.taylor_shift(x.value), den.taylor_shift(x.value)
        num_v, den_v = num_local.valuation(), den_local.valuation()
        order = num_v - den_v
        num_local = Polynomial(r.field, num_local.coeffs[num_v:])
        den_local = Polynomial(r.field, den_local.coeffs[den_v:])
    if order < lo:
        raise WindowTooSmall(f"order {order} at {x.label()} lies left of the window {lo}:{hi}")
    count = max(hi + 1 - order, 0)
    coeffs = _power_series_quotient(num_local, den_local, count)
    return LaurentSeries(r.field, {order + i: c for i, c in enumerate(coeffs)}, hi + 1)


# -- differentials --------------------------------------------------------

def dlog(u: Function) -> Differential:
    """omega = du / u"""
    if u.is_zero():
        raise ZeroFunction("dlog of the zero function")
    return Differential(u.derivative() * u.inverse())


def d(a: Function) -> Differential:
    return Differential(a.derivative())


def _polynomial_cartier(poly: Polynomial) -> Polynomial:
    F = poly.field
    p = F.p
    out = [F.pth_root(poly.coefficient(p * j + p - 1)) for j in range((poly.degree + 1) // p + 1)]
    return Polynomial(F, tuple(out))


def cartier(omega: Differential) -> Differential:
    """C(sum a_i t^i dt) = sum a_{pj+p-1}^{1/p} t^j dt"""
    g = omega.base
    F = omega.field
    p = F.p
    if isinstance(g, RationalFunction):
        num, den = g.numerator, g.denominator
        top = _polynomial_cartier(num * den ** (p - 1))
        return Differential(RationalFunction(top, den), omega.chart)
    out_prec = g.prec // p
    if g.coeffs and out_prec <= -((-(g.valuation() + 1)) // p) - 1:
        raise WindowTooSmall(f"window below t^{g.prec} is too narrow for the Cartier operator")
    out = {}
    for k, c in g.coeffs.items():
        if (k + 1) % p == 0:
            out[(k + 1) // p - 1] = F.pth_root(c)
    return Differential(LaurentSeries(F, out, out_prec), omega.chart)


def local_differential(omega: Differential, x: P1Point, window: Tuple[int, int]) -> LaurentSeries:
    """The coefficient series g_x(s) with omega = g_x(s) ds near x"""
    g = omega.base
    lo, hi = window
    if x.is_infinity:
        if isinstance(g, LaurentSeries):
            raise NotExpandable("a Laurent germ at t=0 cannot be expanded at inf")
        return -local_expand(g, x, (lo + 2, hi + 2)).shift(-2)
    return local_expand(g, x, window)


def residue(omega: Differential, x: P1Point, window: Optional[Tuple[int, int]] = None) -> int:
    if omega.is_zero():
        return 0
    window = window or default_window()
    local = local_differential(omega, x, window)
    if local.prec <= -1:
        raise WindowTooSmall("window does not reach the s^-1 coefficient")
    return local.coeffs.get(-1, 0)


def order(omega: Differential, x: P1Point, window: Optional[Tuple[int, int]] = None) -> int:
    """ord_x(omega); exact for rational differentials"""
    g = omega.base
    if g.is_zero():
        raise ZeroFunction("order of the zero differential")
    if isinstance(g, RationalFunction):
        g = _extend_to_point(g, x)
        return g.order_at_infinity() - 2 if x.is_infinity else g.order_at(x.value)
    return local_differential(omega, x, window or default_window()).valuation()


@dataclass(frozen=True)
class Divisor:
    """Rational zeros and poles of a differential plus the degree carried by non-rational points"""

    points: Tuple[Tuple[P1Point, int], ...]
    residual_degree: int

    def degree(self) -> int:
        return sum(m for _, m in self.points) + self.residual_degree


def divisor(omega: Differential) -> Divisor:
    g = omega.base
    if not isinstance(g, RationalFunction):
        raise NotExpandable("divisors are computed for rational differentials only")
    if g.is_zero():
        raise ZeroFunction("divisor of the zero differential")
    F = g.field
    points = []
    residual = g.numerator.degree - g.denominator.degree
    for poly, sign in ((g.numerator, 1), (g.denominator, -1)):
        for a in poly.roots():
            mult = poly.root_multiplicity(a)
            points.append((P1Point(a, F), sign * mult))
            residual -= sign * mult
    at_infinity = g.order_at_infinity() - 2
    if at_infinity:
        points.append((INFINITY, at_infinity))
    return Divisor(tuple(points), residual)


def sum_of_orders(omega: Differential) -> int:
    """Degree of the divisor; -2 for every nonzero differential on P^1"""
    total = divisor(omega).degree()
    logger.debug(f"🔍 sum of orders of {omega.to_expression()}: {total}")
    return total
