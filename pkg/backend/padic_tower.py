"""
The mixed-characteristic base: R = W[pi] / (E(pi)) where W is the unramified lift of
F_{p^f} and E(X) = E_0(X^c) with E_0(X) = ((1 + X)^p - 1) / X.

At c = 1 the uniformizer is pi = lambda = zeta_p - 1; after a ramified base change of
degree c the old uniformizer becomes pi^c, so lambda = pi^c throughout.  Elements are
polynomials of degree < e in pi with coefficients in W, reduced modulo pi^prec.
"""
import math
from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable, List, Optional, Sequence, Tuple, Union

from backend.config import logger, TORSOR_PREC
from backend.errors import BadParameters, NotAUnit, PrecisionExhausted
from backend.finite_field import FiniteField, finite_field, is_prime

INFINITY = math.inf

WElement = Tuple[int, ...]


def v_p(n: int, p: int) -> Union[int, float]:
    if n == 0:
        return INFINITY
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


class LocalFieldTower:
    """A complete DVR containing zeta_p, modelled as a two-level tower"""

    def __init__(
        self,
        p: int,
        f: int = 1,
        c: int = 1,
        prec: int = TORSOR_PREC,
        residue_field: Optional[FiniteField] = None,
    ):
        if not is_prime(p):
            raise BadParameters(f"p={p} is not prime")
        if f < 1 or c < 1:
            raise BadParameters(f"degrees must be positive, got f={f}, c={c}")
        if prec < 2:
            raise BadParameters(f"precision must be at least 2, got {prec}")
        self.p = p
        self.f = f
        self.c = c
        self.prec = prec
        self.residue_field = residue_field or finite_field(p, f)
        if self.residue_field.f != f:
            raise BadParameters("residue field degree does not match f")
        self.e = (p - 1) * c
        self.v_p = self.e
        self.v_lambda = c
        base = [math.comb(p, k + 1) for k in range(p)]
        eisenstein = [0] * (self.e + 1)
        for k, b in enumerate(base):
            eisenstein[k * c] = b
        self.eisenstein: Tuple[int, ...] = tuple(eisenstein)
        self._check_eisenstein()
        self.w_modulus: Tuple[int, ...] = self.residue_field.modulus
        self.w_prec = -(-prec // self.e) + 1
        self._frobenius_images: List[WElement] = []

    def _check_eisenstein(self) -> None:
        E, p = self.eisenstein, self.p
        ok = E[-1] == 1 and E[0] % p == 0 and E[0] % (p * p) != 0 and all(x % p == 0 for x in E[1:-1])
        if not ok:
            raise BadParameters(f"{E} is not an Eisenstein polynomial")

    @property
    def key(self) -> Tuple:
        return (self.p, self.f, self.c, self.prec, self.residue_field.modulus)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, LocalFieldTower) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return f"LocalFieldTower(p={self.p}, f={self.f}, c={self.c}, prec={self.prec})"

    def describe(self) -> dict:
        return {
            "p": self.p,
            "f": self.f,
            "c": self.c,
            "prec": self.prec,
            "e": self.e,
            "v_p": self.v_p,
            "v_lambda": self.v_lambda,
            "eisenstein": list(self.eisenstein),
        }

    # -- the unramified level W ----------------------------------------------

    def w_zero(self) -> WElement:
        return (0,) * self.f

    def w_from_int(self, n: int) -> WElement:
        return (n,) + (0,) * (self.f - 1)

    def w_add(self, a: WElement, b: WElement) -> WElement:
        return tuple(x + y for x, y in zip(a, b))

    def w_sub(self, a: WElement, b: WElement) -> WElement:
        return tuple(x - y for x, y in zip(a, b))

    def w_scale(self, n: int, a: WElement) -> WElement:
        return tuple(n * x for x in a)

    def w_mul(self, a: WElement, b: WElement) -> WElement:
        f = self.f
        if f == 1:
            return (a[0] * b[0],)
        prod = [0] * (2 * f - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        g = self.w_modulus
        for deg in range(2 * f - 2, f - 1, -1):
            top = prod[deg]
            if top:
                prod[deg] = 0
                for j in range(f):
                    prod[deg - f + j] -= top * g[j]
        return tuple(prod[:f])

    def w_mod(self, a: WElement, k: int) -> WElement:
        if k <= 0:
            return self.w_zero()
        m = self.p ** k
        return tuple(x % m for x in a)

    def w_valuation(self, a: WElement) -> Union[int, float]:
        return min(v_p(x, self.p) for x in a)

    def w_residue(self, a: WElement) -> int:
        return self.residue_field.from_vector(a)

    def w_lift(self, r: int) -> WElement:
        return tuple(self.residue_field.to_vector(r)) + (0,) * (self.f - len(self.residue_field.to_vector(r)))

    def w_inverse(self, a: WElement, k: Optional[int] = None) -> WElement:
        """Inverse of a W-unit modulo p^k by Newton iteration"""
        k = k or self.w_prec
        r = self.w_residue(self.w_mod(a, 1))
        if r == 0:
            raise NotAUnit("element of the unramified level is not a unit")
        y = self.w_lift(self.residue_field.inv(r))
        two = self.w_from_int(2)
        for _ in range(max(k, 1).bit_length() + 1):
            y = self.w_mod(self.w_mul(y, self.w_sub(two, self.w_mul(a, y))), k)
        return y

    def _w_evaluate(self, poly: Sequence[int], x: WElement, k: int) -> WElement:
        value = self.w_zero()
        for coef in reversed(poly):
            value = self.w_mod(self.w_add(self.w_mul(value, x), self.w_from_int(coef)), k)
        return value

    def w_hensel_root(self, poly: Sequence[int], approx: WElement, k: Optional[int] = None) -> WElement:
        """Lift a simple root of an integer polynomial from W/p to W/p^k"""
        k = k or self.w_prec
        derivative = [i * a for i, a in enumerate(poly)][1:]
        x = approx
        for _ in range(max(k, 1).bit_length() + 1):
            value = self._w_evaluate(poly, x, k)
            slope = self._w_evaluate(derivative, x, k)
            x = self.w_mod(self.w_sub(x, self.w_mul(value, self.w_inverse(slope, k))), k)
        return x

    def frobenius_image(self, j: int) -> WElement:
        """sigma^j(alpha) where sigma lifts x -> x^p on the residue field"""
        j %= self.f
        if not self._frobenius_images:
            alpha = self.w_lift(self.residue_field.generator) if self.f > 1 else self.w_zero()
            images = [alpha]
            for _ in range(1, self.f):
                residue = self.residue_field.frobenius(self.w_residue(self.w_mod(images[-1], 1)))
                images.append(self.w_hensel_root(self.w_modulus, self.w_lift(residue)))
            self._frobenius_images = images
        return self._frobenius_images[j]

    def w_substitute(self, a: WElement, image: WElement) -> WElement:
        """sum a_i alpha^i -> sum a_i image^i"""
        value = self.w_zero()
        for coef in reversed(a):
            value = self.w_add(self.w_mul(value, image), self.w_from_int(coef))
        return value

    # -- elements of R -------------------------------------------------------

    def element(self, coeffs: Sequence[WElement], prec: Optional[int] = None) -> "TowerElement":
        """Reduce a polynomial in pi (any degree) with W coefficients"""
        prec = self.prec if prec is None else min(prec, self.prec)
        poly = [tuple(c) for c in coeffs]
        E, e = self.eisenstein, self.e
        for deg in range(len(poly) - 1, e - 1, -1):
            top = poly[deg]
            if any(top):
                poly[deg] = self.w_zero()
                for j in range(e):
                    if E[j]:
                        poly[deg - e + j] = self.w_sub(poly[deg - e + j], self.w_scale(E[j], top))
        poly = poly[:e] + [self.w_zero()] * (e - len(poly))
        reduced = tuple(self.w_mod(c, -((j - prec) // e)) for j, c in enumerate(poly))
        return TowerElement(self, reduced, prec)

    def zero(self) -> "TowerElement":
        return self.element([])

    def one(self) -> "TowerElement":
        return self.from_int(1)

    def from_int(self, n: int) -> "TowerElement":
        return self.element([self.w_from_int(n)])

    def pi_power(self, k: int) -> "TowerElement":
        if k < 0:
            raise BadParameters("negative powers of pi are not integral")
        return self.element([self.w_zero()] * k + [self.w_from_int(1)])

    @property
    def pi(self) -> "TowerElement":
        return self.pi_power(1)

    @property
    def lam(self) -> "TowerElement":
        """lambda = zeta_p - 1 = pi^c"""
        return self.pi_power(self.c)

    def generator(self, index: int = 1) -> "TowerElement":
        """The lift of the residue-field generator a1"""
        if index != 1:
            raise BadParameters(f"only the generator a1 exists, got a{index}")
        return self.lift(self.residue_field.generator)

    def lift(self, r: int) -> "TowerElement":
        return self.element([self.w_lift(r)])

    def p_over_pi(self) -> "TowerElement":
        """p / pi, read off from E(pi) = 0 with constant term p"""
        E, e = self.eisenstein, self.e
        coeffs = [self.w_from_int(-E[j]) for j in range(1, e)] + [self.w_from_int(-1)]
        return self.element(coeffs)

    def valuation_of_int(self, n: int) -> Union[int, float]:
        return self.e * v_p(n, self.p)

    def frobenius(self, x: "TowerElement", j: int = 1) -> "TowerElement":
        return x.frobenius(j)


@dataclass(frozen=True, eq=False)
class TowerElement:
    tower: LocalFieldTower
    coeffs: Tuple[WElement, ...]
    prec: int

    def is_zero(self) -> bool:
        return not any(any(c) for c in self.coeffs)

    @cached_property
    def _valuation(self) -> Union[int, float]:
        T = self.tower
        best: Union[int, float] = INFINITY
        for j, c in enumerate(self.coeffs):
            if any(c):
                best = min(best, T.e * T.w_valuation(c) + j)
        return best

    def valuation(self, strict: bool = False) -> Union[int, float]:
        """Normalized valuation v(pi) = 1; INFINITY when zero to precision"""
        if self._valuation == INFINITY and strict:
            raise PrecisionExhausted(f"element is zero modulo pi^{self.prec}")
        return self._valuation

    def _order_bound(self) -> int:
        v = self.valuation()
        return self.prec if v == INFINITY else int(v)

    def __add__(self, other: "TowerElement") -> "TowerElement":
        T = self.tower
        return T.element([T.w_add(a, b) for a, b in zip(self.coeffs, other.coeffs)], min(self.prec, other.prec))

    def __neg__(self) -> "TowerElement":
        T = self.tower
        return T.element([T.w_scale(-1, a) for a in self.coeffs], self.prec)

    def __sub__(self, other: "TowerElement") -> "TowerElement":
        return self + (-other)

    def __mul__(self, other: "TowerElement") -> "TowerElement":
        T = self.tower
        prec = min(self.prec + other._order_bound(), other.prec + self._order_bound())
        prod = [T.w_zero()] * (2 * T.e - 1)
        for i, a in enumerate(self.coeffs):
            if any(a):
                for j, b in enumerate(other.coeffs):
                    if any(b):
                        prod[i + j] = T.w_add(prod[i + j], T.w_mul(a, b))
        return T.element(prod, prec)

    def __pow__(self, n: int) -> "TowerElement":
        if n < 0:
            return self.inverse() ** (-n)
        result = self.tower.element([self.tower.w_from_int(1)], self.prec)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale_int(self, n: int) -> "TowerElement":
        T = self.tower
        return T.element([T.w_scale(n, a) for a in self.coeffs], self.prec)

    def with_prec(self, prec: int) -> "TowerElement":
        return self.tower.element(self.coeffs, min(prec, self.prec))

    def divide_by_pi(self, k: int = 1) -> "TowerElement":
        """self / pi^k; the valuation must be at least k"""
        T = self.tower
        if self.valuation() < k:
            raise BadParameters(f"valuation {self.valuation()} is below {k}, cannot divide by pi^{k}")
        x = self
        p_over_pi = T.p_over_pi()
        for _ in range(k):
            head = T.w_scale(1, x.coeffs[0])
            quotient = tuple(c // T.p for c in head)
            shifted = T.element(list(x.coeffs[1:]), x.prec - 1)
            x = shifted + T.element([quotient], x.prec - 1) * p_over_pi
        return x

    def residue(self) -> int:
        """Image in the residue field (the element must be integral and known mod pi)"""
        if self.prec < 1:
            raise PrecisionExhausted("residue unknown at precision 0")
        T = self.tower
        return T.w_residue(T.w_mod(self.coeffs[0], 1))

    def is_unit(self) -> bool:
        return self.prec >= 1 and self.residue() != 0

    def inverse(self) -> "TowerElement":
        T = self.tower
        if not self.is_unit():
            raise NotAUnit("element of R is not a unit")
        y = T.element([T.w_lift(T.residue_field.inv(self.residue()))], self.prec)
        two = T.from_int(2)
        for _ in range(max(self.prec, 1).bit_length() + 1):
            y = y * (two - self * y)
        return y.with_prec(self.prec)

    def frobenius(self, j: int = 1) -> "TowerElement":
        T = self.tower
        if j % T.f == 0:
            return self
        image = T.frobenius_image(j)
        return T.element([T.w_substitute(c, image) for c in self.coeffs], self.prec)

    def agrees_with(self, other: "TowerElement") -> bool:
        return (self - other).is_zero()

    def to_expression(self) -> str:
        """Print in the document grammar using pi and a1, with balanced digits"""
        T = self.tower
        terms: List[Tuple[bool, str]] = []
        for j, c in enumerate(self.coeffs):
            if not any(c):
                continue
            modulus = T.p ** (-((j - self.prec) // T.e))
            digits = []
            for i, x in enumerate(c):
                if x > modulus // 2:
                    x -= modulus
                if x:
                    mono = "" if i == 0 else ("a1" if i == 1 else f"a1^{i}")
                    size = abs(x)
                    digits.append((x < 0, str(size) if not mono else (mono if size == 1 else f"{size}*{mono}")))
            mono = "" if j == 0 else ("pi" if j == 1 else f"pi^{j}")
            if len(digits) > 1:
                coef = f"({_signed_sum(list(reversed(digits)))})"
                terms.append((False, f"{coef}*{mono}" if mono else coef))
                continue
            negative, coef = digits[0]
            if not mono:
                terms.append((negative, coef))
            elif coef == "1":
                terms.append((negative, mono))
            else:
                terms.append((negative, f"{coef}*{mono}"))
        return _signed_sum(terms)


def _signed_sum(terms: List[Tuple[bool, str]]) -> str:
    """Join (negative, text) pairs with binary plus and minus"""
    out = ""
    for negative, text in terms:
        if not out:
            out = f"-{text}" if negative else text
        else:
            out += f" - {text}" if negative else f" + {text}"
    return out or "0"


# -- base change -------------------------------------------------------------

class TowerEmbedding:
    """A ring embedding R -> R' sending pi to pi'^c and acting on W by w_map"""

    def __init__(
        self,
        source: LocalFieldTower,
        target: LocalFieldTower,
        c: int = 1,
        w_map: Optional[Callable[[WElement], WElement]] = None,
        residue_map: Optional[Callable[[int], int]] = None,
    ):
        self.source = source
        self.target = target
        self.c = c
        self.w_map = w_map
        self.residue_map = residue_map

    def __call__(self, x: TowerElement) -> TowerElement:
        T = self.target
        poly = [T.w_zero()] * (self.c * (len(x.coeffs) - 1) + 1)
        for j, coef in enumerate(x.coeffs):
            poly[self.c * j] = self.w_map(coef) if self.w_map else coef
        return T.element(poly, self.c * x.prec)

    def map_residue(self, r: int) -> int:
        return self.residue_map(r) if self.residue_map else r

    def compose(self, after: "TowerEmbedding") -> "TowerEmbedding":
        """after o self"""
        first_w, second_w = self.w_map, after.w_map
        if first_w and second_w:
            w_map = lambda a: second_w(first_w(a))
        else:
            w_map = first_w or second_w
        residue = None
        if self.residue_map or after.residue_map:
            first_r, second_r = self.map_residue, after.map_residue
            residue = lambda r: second_r(first_r(r))
        return TowerEmbedding(self.source, after.target, self.c * after.c, w_map, residue)

    def describe(self) -> dict:
        return {"c": self.c, "f": self.target.f, "prec": self.target.prec}


def make_base_field(p: int, f: int = 1, prec: int = TORSOR_PREC, c: int = 1) -> LocalFieldTower:
    """R = W(F_{p^f})[pi] with E(X) = E0(X^c), E0(X) = ((1+X)^p - 1)/X; pi = lambda when c = 1"""
    tower = _cached_tower(p, f, c, prec)
    logger.debug(f"🏗️ Base tower p={p} f={f} c={c} prec={prec}: E={tower.eisenstein}")
    return tower


@lru_cache(maxsize=None)
def _cached_tower(p: int, f: int, c: int, prec: int) -> LocalFieldTower:
    return LocalFieldTower(p, f, c, prec)


def ramified_base_change(
    tower: LocalFieldTower, c: int, prec: Optional[int] = None
) -> Tuple[LocalFieldTower, TowerEmbedding]:
    """E_c(X) = E(X^c); valuations scale by c"""
    if c < 1:
        raise BadParameters(f"ramification factor must be positive, got {c}")
    if c == 1:
        return tower, TowerEmbedding(tower, tower)
    needed = c * tower.prec
    new_prec = needed if prec is None else prec
    if new_prec < needed:
        raise PrecisionExhausted(f"precision {new_prec} cannot hold pi^{tower.prec} after rescaling by {c}")
    if tower.residue_field == finite_field(tower.p, tower.f):
        target = _cached_tower(tower.p, tower.f, tower.c * c, new_prec)
    else:
        target = LocalFieldTower(tower.p, tower.f, tower.c * c, new_prec, tower.residue_field)
    logger.debug(f"🔧 Ramified base change by {c}: e {tower.e} -> {target.e}")
    return target, TowerEmbedding(tower, target, c)


def unramified_base_change(tower: LocalFieldTower, f_new: int) -> Tuple[LocalFieldTower, TowerEmbedding]:
    """Residue field F_{p^f} -> F_{p^f'}; the target carries the Frobenius lift"""
    if f_new < 1 or f_new % tower.f:
        raise BadParameters(f"f'={f_new} is not a multiple of f={tower.f}")
    if f_new == tower.f:
        return tower, TowerEmbedding(tower, tower)
    target = _cached_tower(tower.p, f_new, tower.c, tower.prec)
    residue_map = tower.residue_field.embed_into(target.residue_field)
    root = target.w_hensel_root(tower.w_modulus, target.w_lift(residue_map.image_of_generator))
    w_map = lambda a: target.w_substitute(a, root)
    logger.debug(f"🔧 Unramified base change f {tower.f} -> {f_new}")
    return target, TowerEmbedding(tower, target, 1, w_map, residue_map)
