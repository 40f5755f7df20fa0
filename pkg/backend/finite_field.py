"""
Finite fields F_{p^f} with elements encoded as integers.

An element sum(c_i * a1^i) with 0 <= c_i < p is stored as the integer sum(c_i * p^i),
so the prime field is {0, ..., p-1} inside every extension.  Multiplication goes
through discrete log tables built once per field; the modulus is found (or checked)
by brute force, which is plenty at desk sizes.
"""
from functools import lru_cache
from itertools import product
from random import Random
from typing import Iterator, List, Optional, Sequence, Tuple

from backend.config import logger, TORSOR_MAX_FIELD
from backend.errors import BadParameters


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


# Dense polynomials over the prime field, coefficient lists low -> high.

def _trim(c: List[int]) -> List[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _prime_poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> List[int]:
    a = _trim([x % p for x in a])
    b = _trim([x % p for x in b])
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) >= len(b):
        coef = (a[-1] * inv_lead) % p
        shift = len(a) - len(b)
        for i, bc in enumerate(b):
            a[shift + i] = (a[shift + i] - coef * bc) % p
        _trim(a)
    return a


def _monic_polys(p: int, degree: int) -> Iterator[List[int]]:
    for low in product(range(p), repeat=degree):
        yield list(low) + [1]


def is_irreducible(modulus: Sequence[int], p: int) -> bool:
    """Brute-force irreducibility test: no monic factor of degree <= deg/2"""
    degree = len(modulus) - 1
    if degree < 1 or modulus[-1] % p != 1:
        return False
    for d in range(1, degree // 2 + 1):
        for candidate in _monic_polys(p, d):
            if not _prime_poly_mod(modulus, candidate, p):
                return False
    return True


def find_irreducible(p: int, f: int) -> Tuple[int, ...]:
    """First monic irreducible polynomial of degree f in base-p code order"""
    for code in range(p ** f):
        low = [(code // p ** i) % p for i in range(f)]
        modulus = low + [1]
        if is_irreducible(modulus, p):
            return tuple(modulus)
    raise BadParameters(f"no irreducible polynomial of degree {f} over F_{p}")


class FiniteField:
    """The field F_{p^f} = F_p[a1]/(modulus)"""

    def __init__(self, p: int, f: int = 1, modulus: Optional[Sequence[int]] = None):
        if not is_prime(p):
            raise BadParameters(f"p={p} is not prime")
        if f < 1:
            raise BadParameters(f"extension degree must be >= 1, got {f}")
        if p ** f > TORSOR_MAX_FIELD:
            raise BadParameters(f"F_{p}^{f} exceeds the table limit {TORSOR_MAX_FIELD}")
        if modulus is None:
            modulus = find_irreducible(p, f) if f > 1 else (0, 1)
        modulus = tuple(int(c) % p for c in modulus)
        if len(modulus) != f + 1 or not is_irreducible(modulus, p):
            raise BadParameters(f"modulus {modulus} is not monic irreducible of degree {f}")
        self.p = p
        self.f = f
        self.q = p ** f
        self.modulus = modulus
        self._vectors: List[Tuple[int, ...]] = []
        self._exp: List[int] = []
        self._log: List[int] = []
        if f > 1:
            self._build_tables()

    def _build_tables(self) -> None:
        p, f, q = self.p, self.f, self.q
        self._vectors = [tuple((a // p ** i) % p for i in range(f)) for a in range(q)]
        for g in range(2, q):
            exp = [1]
            x = g
            while x != 1:
                exp.append(x)
                x = self._mul_slow(x, g)
            if len(exp) == q - 1:
                log = [0] * q
                for i, value in enumerate(exp):
                    log[value] = i
                self._exp, self._log = exp, log
                self.primitive_element = g
                logger.debug(f"🧮 Built log tables for F_{p}^{f}, primitive element {g}")
                return
        raise BadParameters(f"no primitive element found in F_{p}^{f}")

    def _mul_slow(self, a: int, b: int) -> int:
        p, f = self.p, self.f
        va, vb = self._vectors[a], self._vectors[b]
        prod = [0] * (2 * f - 1)
        for i, x in enumerate(va):
            if x:
                for j, y in enumerate(vb):
                    prod[i + j] = (prod[i + j] + x * y) % p
        rem = _prime_poly_mod(prod, self.modulus, p)
        return self.from_vector(rem)

    # -- encoding -------------------------------------------------------

    def from_vector(self, vec: Sequence[int]) -> int:
        value = 0
        for i, c in enumerate(vec):
            value += (c % self.p) * self.p ** i
        return value

    def to_vector(self, a: int) -> Tuple[int, ...]:
        if self.f == 1:
            return (a,)
        return self._vectors[a]

    def from_int(self, n: int) -> int:
        return n % self.p

    @property
    def generator(self) -> int:
        """The class of a1 (equal to 0 in the prime field, where a1 is not used)"""
        return self.p if self.f > 1 else 0

    def elements(self) -> Iterator[int]:
        return iter(range(self.q))

    def random_element(self, rng: Random, nonzero: bool = False) -> int:
        return rng.randrange(1 if nonzero else 0, self.q)

    # -- arithmetic -----------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.f == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        va, vb = self._vectors[a], self._vectors[b]
        return self.from_vector([x + y for x, y in zip(va, vb)])

    def neg(self, a: int) -> int:
        if self.f == 1:
            return (-a) % self.p
        if self.p == 2:
            return a
        return self.from_vector([-x for x in self._vectors[a]])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.f == 1:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[(self._log[a] + self._log[b]) % (self.q - 1)]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in a finite field")
        if self.f == 1:
            return pow(a, self.p - 2, self.p)
        return self._exp[(-self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            return self.pow(self.inv(a), -n)
        if a == 0:
            return 1 if n == 0 else 0
        if self.f == 1:
            return pow(a, n, self.p)
        return self._exp[(self._log[a] * n) % (self.q - 1)]

    def scalar(self, n: int, a: int) -> int:
        """The element n*a for an integer n"""
        return self.mul(self.from_int(n), a)

    def frobenius(self, a: int, j: int = 1) -> int:
        """a -> a^(p^j); j is read modulo f"""
        j %= self.f
        return self.pow(a, self.p ** j) if j else a

    def pth_root(self, a: int) -> int:
        return self.frobenius(a, self.f - 1)

    def is_prime_field(self, a: int) -> bool:
        return a < self.p

    def solve_artin_schreier(self, c: int) -> Optional[int]:
        """Some x with x^p - x = c, or None when c is not in the image"""
        for x in range(self.q):
            if self.sub(self.pow(x, self.p), x) == c:
                return x
        return None

    # -- printing -------------------------------------------------------

    def format(self, a: int) -> str:
        if self.f == 1:
            return str(a)
        terms = []
        for i, c in reversed(list(enumerate(self._vectors[a]))):
            if c == 0:
                continue
            mono = "" if i == 0 else ("a1" if i == 1 else f"a1^{i}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms) if terms else "0"

    # -- comparison -----------------------------------------------------

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FiniteField) and (self.p, self.modulus) == (other.p, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.modulus))

    def __repr__(self) -> str:
        return f"FiniteField(p={self.p}, f={self.f}, modulus={self.modulus})"

    def embed_into(self, target: "FiniteField") -> "FieldEmbedding":
        return field_embedding(self, target)


class FieldEmbedding:
    """The embedding F_{p^f} -> F_{p^f'} sending a1 to a chosen root of the modulus"""

    def __init__(self, source: FiniteField, target: FiniteField):
        if source.p != target.p or target.f % source.f:
            raise BadParameters(f"cannot embed {source} into {target}")
        self.source = source
        self.target = target
        if source == target:
            self.image_of_generator = source.generator
            self._table = list(range(source.q))
            return
        root = None
        for b in target.elements():
            value = 0
            for c in reversed(source.modulus):
                value = target.add(target.mul(value, b), c)
            if value == 0:
                root = b
                break
        if root is None:
            raise BadParameters(f"modulus of {source} has no root in {target}")
        self.image_of_generator = root
        self._table = []
        for a in source.elements():
            value = 0
            for c in reversed(source.to_vector(a)):
                value = target.add(target.mul(value, root), c)
            self._table.append(value)
        logger.debug(f"🔗 Embedded F_{source.p}^{source.f} into F_{target.p}^{target.f} via a1 -> {root}")

    def __call__(self, a: int) -> int:
        return self._table[a]

    def preimage(self, b: int) -> Optional[int]:
        try:
            return self._table.index(b)
        except ValueError:
            return None


@lru_cache(maxsize=None)
def finite_field(p: int, f: int = 1) -> FiniteField:
    """Shared instance of the default model of F_{p^f}"""
    return FiniteField(p, f)


@lru_cache(maxsize=None)
def field_embedding(source: FiniteField, target: FiniteField) -> FieldEmbedding:
    return FieldEmbedding(source, target)
