"""
Polynomials and rational functions in one variable t over a finite field.
"""
from dataclasses import dataclass
from typing import Callable, Dict, List, Sequence, Tuple

from backend.errors import ZeroFunction
from backend.finite_field import FiniteField


def _trimmed(coeffs: Sequence[int]) -> Tuple[int, ...]:
    coeffs = list(coeffs)
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


@dataclass(frozen=True)
class Polynomial:
    """Coefficients low -> high, trailing zeros removed"""

    field: FiniteField
    coeffs: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _trimmed(self.coeffs))

    @classmethod
    def constant(cls, field: FiniteField, c: int) -> "Polynomial":
        return cls(field, (c,))

    @classmethod
    def monomial(cls, field: FiniteField, c: int, k: int) -> "Polynomial":
        return cls(field, (0,) * k + (c,))

    @classmethod
    def variable(cls, field: FiniteField) -> "Polynomial":
        return cls.monomial(field, 1, 1)

    @property
    def degree(self) -> int:
        """Degree, -1 for the zero polynomial"""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def coefficient(self, k: int) -> int:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else 0

    def __add__(self, other: "Polynomial") -> "Polynomial":
        F = self.field
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(F, tuple(F.add(self.coefficient(i), other.coefficient(i)) for i in range(n)))

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.field, tuple(self.field.neg(c) for c in self.coeffs))

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + (-other)

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        F = self.field
        if self.is_zero() or other.is_zero():
            return Polynomial(F)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                if b:
                    out[i + j] = F.add(out[i + j], F.mul(a, b))
        return Polynomial(F, tuple(out))

    def __pow__(self, n: int) -> "Polynomial":
        result = Polynomial.constant(self.field, 1)
        base = self
        while n > 0:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def scale(self, c: int) -> "Polynomial":
        return Polynomial(self.field, tuple(self.field.mul(c, a) for a in self.coeffs))

    def divmod(self, other: "Polynomial") -> Tuple["Polynomial", "Polynomial"]:
        if other.is_zero():
            raise ZeroFunction("polynomial division by zero")
        F = self.field
        rem = list(self.coeffs)
        quot = [0] * max(len(rem) - len(other.coeffs) + 1, 0)
        inv_lead = F.inv(other.leading)
        d = other.degree
        while len(rem) - 1 >= d and rem:
            coef = F.mul(rem[-1], inv_lead)
            shift = len(rem) - 1 - d
            quot[shift] = coef
            for i, b in enumerate(other.coeffs):
                rem[shift + i] = F.sub(rem[shift + i], F.mul(coef, b))
            rem = list(_trimmed(rem))
        return Polynomial(F, tuple(quot)), Polynomial(F, tuple(rem))

    def __mod__(self, other: "Polynomial") -> "Polynomial":
        return self.divmod(other)[1]

    def __floordiv__(self, other: "Polynomial") -> "Polynomial":
        return self.divmod(other)[0]

    def monic(self) -> "Polynomial":
        if self.is_zero():
            return self
        return self.scale(self.field.inv(self.leading))

    def gcd(self, other: "Polynomial") -> "Polynomial":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic()

    def evaluate(self, x: int) -> int:
        F = self.field
        value = 0
        for c in reversed(self.coeffs):
            value = F.add(F.mul(value, x), c)
        return value

    def derivative(self) -> "Polynomial":
        F = self.field
        return Polynomial(F, tuple(F.scalar(i, c) for i, c in enumerate(self.coeffs))[1:])

    def taylor_shift(self, a: int) -> "Polynomial":
        """The polynomial q(s) = self(s + a)"""
        result = Polynomial(self.field)
        shift = Polynomial(self.field, (a, 1))
        for c in reversed(self.coeffs):
            result = result * shift + Polynomial.constant(self.field, c)
        return result

    def reversed_to(self, n: int) -> "Polynomial":
        """s^n * self(1/s) for n >= degree"""
        return Polynomial(self.field, tuple(reversed(self.coeffs + (0,) * (n + 1 - len(self.coeffs)))))

    def valuation(self) -> int:
        """Order of vanishing at t = 0 (the zero polynomial is not allowed)"""
        if self.is_zero():
            raise ZeroFunction("valuation of the zero polynomial")
        return next(i for i, c in enumerate(self.coeffs) if c)

    def root_multiplicity(self, a: int) -> int:
        return self.taylor_shift(a).valuation() if not self.is_zero() else 0

    def roots(self) -> List[int]:
        """Field-rational roots, by brute force"""
        return [a for a in self.field.elements() if self.evaluate(a) == 0]

    def map_coefficients(self, fn: Callable[[int], int], field: FiniteField = None) -> "Polynomial":
        return Polynomial(field or self.field, tuple(fn(c) for c in self.coeffs))

    def frobenius(self, j: int = 1) -> "Polynomial":
        return self.map_coefficients(lambda c: self.field.frobenius(c, j))

    def to_dict(self) -> Dict[int, int]:
        return {i: c for i, c in enumerate(self.coeffs) if c}


@dataclass(frozen=True)
class RationalFunction:
    """numerator / denominator with gcd 1 and monic denominator"""

    numerator: Polynomial
    denominator: Polynomial

    def __post_init__(self):
        num, den = self.numerator, self.denominator
        if den.is_zero():
            raise ZeroFunction("rational function with zero denominator")
        if num.is_zero():
            den = Polynomial.constant(den.field, 1)
        else:
            g = num.gcd(den)
            if g.degree > 0:
                num, den = num // g, den // g
            lead = den.leading
            if lead != 1:
                inv = den.field.inv(lead)
                num, den = num.scale(inv), den.scale(inv)
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)

    @property
    def field(self) -> FiniteField:
        return self.numerator.field

    @classmethod
    def from_polynomial(cls, poly: Polynomial) -> "RationalFunction":
        return cls(poly, Polynomial.constant(poly.field, 1))

    @classmethod
    def constant(cls, field: FiniteField, c: int) -> "RationalFunction":
        return cls.from_polynomial(Polynomial.constant(field, c))

    @classmethod
    def variable(cls, field: FiniteField) -> "RationalFunction":
        return cls.from_polynomial(Polynomial.variable(field))

    def is_zero(self) -> bool:
        return self.numerator.is_zero()

    def is_polynomial(self) -> bool:
        return self.denominator.degree == 0

    def __add__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(
            self.numerator * other.denominator + other.numerator * self.denominator,
            self.denominator * other.denominator,
        )

    def __neg__(self) -> "RationalFunction":
        return RationalFunction(-self.numerator, self.denominator)

    def __sub__(self, other: "RationalFunction") -> "RationalFunction":
        return self + (-other)

    def __mul__(self, other: "RationalFunction") -> "RationalFunction":
        return RationalFunction(self.numerator * other.numerator, self.denominator * other.denominator)

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroFunction("inverse of the zero function")
        return RationalFunction(self.denominator, self.numerator)

    def __truediv__(self, other: "RationalFunction") -> "RationalFunction":
        return self * other.inverse()

    def __pow__(self, n: int) -> "RationalFunction":
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction(self.numerator ** n, self.denominator ** n)

    def scale(self, c: int) -> "RationalFunction":
        return RationalFunction(self.numerator.scale(c), self.denominator)

    def derivative(self) -> "RationalFunction":
        num, den = self.numerator, self.denominator
        return RationalFunction(num.derivative() * den - num * den.derivative(), den * den)

    def frobenius(self, j: int = 1) -> "RationalFunction":
        return RationalFunction(self.numerator.frobenius(j), self.denominator.frobenius(j))

    def extend(self, embedding) -> "RationalFunction":
        """Scalar extension along a FieldEmbedding"""
        target = embedding.target
        return RationalFunction(
            self.numerator.map_coefficients(embedding, target),
            self.denominator.map_coefficients(embedding, target),
        )

    def order_at_infinity(self) -> int:
        if self.is_zero():
            raise ZeroFunction("order of the zero function")
        return self.denominator.degree - self.numerator.degree

    def order_at(self, a: int) -> int:
        if self.is_zero():
            raise ZeroFunction("order of the zero function")
        return self.numerator.root_multiplicity(a) - self.denominator.root_multiplicity(a)
