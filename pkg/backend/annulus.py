"""
The annulus ring A = R[[T]]{T^-1}: Laurent expansions in T with coefficients in R,
known modulo pi^prec and, when t_prec is set, modulo T^t_prec R[[T]].
"""
from dataclasses import dataclass, field as dc_field
from typing import Dict, Optional, Tuple, Union

from backend.config import logger, TORSOR_WINDOW
from backend.errors import NotAUnit, PositivePiContent, PrecisionExhausted, WindowTooSmall
from backend.fp_series import LaurentSeries, format_terms
from backend.padic_tower import INFINITY, LocalFieldTower, TowerElement, TowerEmbedding

_NO_BOUND = 10 ** 9


def _min_bound(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


@dataclass(frozen=True, eq=False)
class AnnulusElement:
    tower: LocalFieldTower
    coeffs: Dict[int, TowerElement] = dc_field(default_factory=dict)
    prec: int = 0
    t_prec: Optional[int] = None

    def __post_init__(self):
        prec = min(self.prec, self.tower.prec)
        clean = {}
        for k, c in self.coeffs.items():
            if self.t_prec is not None and k >= self.t_prec:
                continue
            c = c.with_prec(prec)
            if not c.is_zero():
                clean[k] = c
        object.__setattr__(self, "prec", prec)
        object.__setattr__(self, "coeffs", clean)

    # -- constructors ---------------------------------------------------

    @classmethod
    def constant(cls, x: TowerElement) -> "AnnulusElement":
        return cls(x.tower, {0: x}, x.prec)

    @classmethod
    def one(cls, tower: LocalFieldTower) -> "AnnulusElement":
        return cls.constant(tower.one())

    @classmethod
    def zero(cls, tower: LocalFieldTower) -> "AnnulusElement":
        return cls(tower, {}, tower.prec)

    @classmethod
    def t_power(cls, tower: LocalFieldTower, k: int) -> "AnnulusElement":
        return cls(tower, {k: tower.one()}, tower.prec)

    @classmethod
    def lift_series(cls, tower: LocalFieldTower, s: LaurentSeries, exact: bool = False) -> "AnnulusElement":
        """Coefficientwise digit lift of a residue Laurent series (no Teichmuller digits)"""
        coeffs = {k: tower.lift(c) for k, c in s.coeffs.items()}
        return cls(tower, coeffs, tower.prec, None if exact else s.prec)

    # -- inspection -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.coeffs

    def pi_content(self) -> Union[int, float]:
        """min over coefficients of the valuation; INFINITY for zero"""
        return min((c.valuation() for c in self.coeffs.values()), default=INFINITY)

    def _content_bound(self) -> int:
        v = self.pi_content()
        return self.prec if v == INFINITY else int(v)

    def _lo_bound(self) -> int:
        if self.coeffs:
            return min(self.coeffs)
        return self.t_prec if self.t_prec is not None else _NO_BOUND

    def lowest_exponent(self) -> Optional[int]:
        return min(self.coeffs) if self.coeffs else None

    def coefficient(self, k: int) -> TowerElement:
        return self.coeffs.get(k, self.tower.zero().with_prec(self.prec))

    def agrees_with(self, other: "AnnulusElement") -> bool:
        return (self - other).is_zero()

    def is_one(self) -> bool:
        return self.agrees_with(AnnulusElement.one(self.tower))

    # -- ring operations ------------------------------------------------

    def __add__(self, other: "AnnulusElement") -> "AnnulusElement":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out[k] + c if k in out else c
        return AnnulusElement(self.tower, out, min(self.prec, other.prec), _min_bound(self.t_prec, other.t_prec))

    def __neg__(self) -> "AnnulusElement":
        return AnnulusElement(self.tower, {k: -c for k, c in self.coeffs.items()}, self.prec, self.t_prec)

    def __sub__(self, other: "AnnulusElement") -> "AnnulusElement":
        return self + (-other)

    def __mul__(self, other: "AnnulusElement") -> "AnnulusElement":
        prec = min(self.prec + other._content_bound(), other.prec + self._content_bound())
        t_prec = None
        if self.t_prec is not None:
            t_prec = self.t_prec + other._lo_bound()
        if other.t_prec is not None:
            t_prec = _min_bound(t_prec, other.t_prec + self._lo_bound())
        out: Dict[int, TowerElement] = {}
        for i, a in self.coeffs.items():
            for j, b in other.coeffs.items():
                k = i + j
                if t_prec is not None and k >= t_prec:
                    continue
                if a.valuation() + b.valuation() >= prec:
                    continue
                term = (a * b).with_prec(prec)
                out[k] = out[k] + term if k in out else term
        return AnnulusElement(self.tower, out, prec, t_prec)

    def scale(self, x: TowerElement) -> "AnnulusElement":
        return self * AnnulusElement.constant(x)

    def shift(self, k: int) -> "AnnulusElement":
        """Multiply by T^k"""
        t_prec = None if self.t_prec is None else self.t_prec + k
        return AnnulusElement(self.tower, {e + k: c for e, c in self.coeffs.items()}, self.prec, t_prec)

    def __pow__(self, n: int) -> "AnnulusElement":
        if n < 0:
            return self.inverse() ** (-n)
        result = AnnulusElement.one(self.tower)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def truncate(self, t_prec: Optional[int]) -> "AnnulusElement":
        return AnnulusElement(self.tower, self.coeffs, self.prec, _min_bound(self.t_prec, t_prec))

    def divide_by_pi(self, k: int) -> "AnnulusElement":
        if k == 0:
            return self
        coeffs = {e: c.divide_by_pi(k) for e, c in self.coeffs.items()}
        return AnnulusElement(self.tower, coeffs, self.prec - k, self.t_prec)

    def frobenius(self, j: int = 1) -> "AnnulusElement":
        return AnnulusElement(self.tower, {k: c.frobenius(j) for k, c in self.coeffs.items()}, self.prec, self.t_prec)

    def embed(self, embedding: TowerEmbedding) -> "AnnulusElement":
        coeffs = {k: embedding(c) for k, c in self.coeffs.items()}
        return AnnulusElement(embedding.target, coeffs, embedding.c * self.prec, self.t_prec)

    # -- reduction ------------------------------------------------------

    def reduce_mod_pi(self, window: Optional[Tuple[int, int]] = None) -> LaurentSeries:
        """Coefficientwise residue in k((t))"""
        if self.pi_content() != 0:
            raise PositivePiContent(f"pi-content {self.pi_content()} is positive; the reduction vanishes")
        window = window or TORSOR_WINDOW
        t_prec = self.t_prec if self.t_prec is not None else window[1] + 1
        coeffs = {k: c.residue() for k, c in self.coeffs.items() if k < t_prec}
        return LaurentSeries(self.tower.residue_field, coeffs, t_prec)

    def inverse(self, window: Optional[Tuple[int, int]] = None) -> "AnnulusElement":
        """Divide by the leading unit term, then solve (1 + w+ + w-) x = 1 by iterating in the pi-direction"""
        window = window or TORSOR_WINDOW
        lo, hi = window
        T = self.tower
        if self.pi_content() != 0:
            raise NotAUnit("element with positive pi-content is not a unit of A")
        d = self.reduce_mod_pi(window).valuation()
        lead_inv = self.coeffs[d].inverse()
        normalized = self.scale(lead_inv).shift(-d)
        minus = {k: c for k, c in normalized.coeffs.items() if k < 0}
        plus = {k: c for k, c in normalized.coeffs.items() if k > 0}
        depth = -min(minus) if minus else 0
        work = hi + d + 1 + depth * (self.prec + 1)
        if normalized.t_prec is not None:
            work = min(work, normalized.t_prec)
        one = T.one().with_prec(self.prec)
        x = _solve_unit_tail(plus, {0: one}, work)
        rounds = 0
        while minus:
            rounds += 1
            rhs = {0: one}
            for k, c in minus.items():
                for n, a in x.items():
                    if k + n < work:
                        term = c * a
                        rhs[k + n] = rhs[k + n] - term if k + n in rhs else -term
            new = _solve_unit_tail(plus, rhs, work)
            if _same_coeffs(new, x):
                x = new
                break
            if rounds > self.prec + 1:
                raise PrecisionExhausted(f"annulus inverse did not settle within {rounds} rounds")
            x = new
        t_prec = work - depth * (rounds + 1) if minus else work
        result = AnnulusElement(T, x, self.prec, t_prec).scale(lead_inv).shift(-d)
        if result.coeffs and min(result.coeffs) < lo:
            raise WindowTooSmall(f"inverse has terms below T^{lo}")
        logger.debug(f"🔁 Annulus inverse: {rounds} rounds, t_prec {result.t_prec}")
        return result

    def inverse_mod_t(self, length: int) -> "AnnulusElement":
        """Inverse of a power series with unit constant term, known modulo T^length"""
        if not self.coeffs or min(self.coeffs) < 0 or 0 not in self.coeffs or self.coeffs[0].valuation() != 0:
            raise NotAUnit("expected a power series in T with a unit constant term")
        if self.t_prec is not None:
            length = min(length, self.t_prec)
        c0_inv = self.coeffs[0].inverse()
        plus = {k: c * c0_inv for k, c in self.coeffs.items() if k > 0}
        x = _solve_unit_tail(plus, {0: self.tower.one().with_prec(self.prec)}, length)
        return AnnulusElement(self.tower, x, self.prec, length).scale(c0_inv)

    def __truediv__(self, other: "AnnulusElement") -> "AnnulusElement":
        return self * other.inverse()

    def to_expression(self) -> str:
        parts = []
        for k in sorted(self.coeffs):
            coef = self.coeffs[k].to_expression()
            if " + " in coef or " - " in coef:
                coef = f"({coef})"
            mono = "" if k == 0 else ("T" if k == 1 else f"T^{k}")
            if not mono:
                parts.append(coef)
            elif coef == "1":
                parts.append(mono)
            else:
                parts.append(f"{coef}*{mono}")
        return " + ".join(parts) if parts else "0"


def _solve_unit_tail(
    plus: Dict[int, TowerElement], rhs: Dict[int, TowerElement], work: int
) -> Dict[int, TowerElement]:
    """x with (1 + plus) x = rhs below T^work, where plus has only positive exponents"""
    x: Dict[int, TowerElement] = {}
    for n in range(min(rhs), work):
        acc = rhs.get(n)
        for k, c in plus.items():
            if n - k in x:
                term = c * x[n - k]
                acc = -term if acc is None else acc - term
        if acc is not None and not acc.is_zero():
            x[n] = acc
    return x


def _same_coeffs(a: Dict[int, TowerElement], b: Dict[int, TowerElement]) -> bool:
    return a.keys() == b.keys() and all(a[k].agrees_with(b[k]) for k in a)


@dataclass(frozen=True)
class PthPowerTest:
    root: Optional[LaurentSeries]
    offending_exponent: Optional[int] = None

    @property
    def is_pth_power(self) -> bool:
        return self.root is not None


def pth_power_test(s: LaurentSeries) -> PthPowerTest:
    """A p-th root of s on its window, or the first exponent prime to p"""
    if s.is_zero():
        raise WindowTooSmall("series is zero on its window")
    root = s.pth_root()
    if root is not None:
        return PthPowerTest(root)
    p = s.field.p
    return PthPowerTest(None, min(k for k in s.coeffs if k % p))


def series_terms(s: LaurentSeries, var: str = "t") -> str:
    return format_terms(s.field, sorted(s.coeffs.items()), var)
