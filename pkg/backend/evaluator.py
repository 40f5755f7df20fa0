"""
Evaluation of document expressions into library values.
"""
import threading
from dataclasses import dataclass
from typing import Dict, Optional, Tuple, Union

from backend.annulus import AnnulusElement
from backend.charp_torsors import CharPTorsor, GroupSchemeKindP, MixedTorsor, mixed_add
from backend.config import get_settings, logger, Settings
from backend.document import (
    ANNULUS,
    CONST,
    RESIDUE,
    TORSOR,
    Document,
    PointRef,
    infer_sort,
)
from backend.errors import TypeCheckError, UnsupportedKind
from backend.expressions import BinOp, Call, Expr, Neg, Num, Pow, Var
from backend.finite_field import FiniteField, finite_field
from backend.fp_series import INFINITY, ORIGIN, P1Point
from backend.padic_tower import LocalFieldTower, make_base_field
from backend.polynomials import RationalFunction

Value = Union[RationalFunction, AnnulusElement, MixedTorsor]


@dataclass(frozen=True)
class RunContext:
    """Effective parameters: flag > header > environment > default"""

    mode: str
    p: int
    f: int
    c: int
    prec: int
    window: Tuple[int, int]
    extend: str
    seed: int

    @property
    def field(self) -> FiniteField:
        return finite_field(self.p, self.f)

    @property
    def tower(self) -> LocalFieldTower:
        return make_base_field(self.p, self.f, self.prec, self.c)

    def to_dict(self) -> Dict[str, object]:
        return {
            "mode": self.mode,
            "p": self.p,
            "f": self.f,
            "c": self.c,
            "prec": self.prec,
            "window": f"{self.window[0]}:{self.window[1]}",
            "extend": self.extend,
            "seed": self.seed,
        }


def resolve_context(
    document: Document,
    prec: Optional[int] = None,
    window: Optional[Tuple[int, int]] = None,
    extend: Optional[str] = None,
    seed: Optional[int] = None,
    settings: Optional[Settings] = None,
) -> RunContext:
    settings = settings or get_settings()
    h = document.header

    def pick(flag, from_header, from_env):
        if flag is not None:
            return flag
        return from_header if from_header is not None else from_env

    context = RunContext(
        mode=h.mode,
        p=h.p,
        f=h.f,
        c=h.c,
        prec=pick(prec, h.prec, settings.prec),
        window=pick(window, h.window, settings.window),
        extend=pick(extend, h.extend, settings.extend),
        seed=pick(seed, None, settings.seed),
    )
    # validates p and f (BadParameters) before any directive runs
    context.field
    if context.mode == "mixed":
        context.tower
    logger.debug(f"⚙️ Run context {context.to_dict()}")
    return context


class Evaluator:
    """Evaluates expressions of a document; bindings are evaluated on demand and cached per sort"""

    def __init__(self, document: Document, context: RunContext):
        self.document = document
        self.context = context
        self.sorts = {b.name: b.sort for b in document.bindings}
        self.exprs = {b.name: b.expr for b in document.bindings}
        self._cache: Dict[Tuple[str, str], Value] = {}
        self._cache_lock = threading.Lock()

    def sort_of(self, node: Expr) -> str:
        return infer_sort(node, self.context.mode, self.sorts, self.context.f)

    def _target(self, node: Expr, want: Optional[str]) -> str:
        sort = self.sort_of(node)
        if sort != CONST:
            return sort
        if want is not None:
            return want
        return ANNULUS if self.context.mode == "mixed" else RESIDUE

    # -- public entry points --------------------------------------------------

    def value(self, node: Expr, want: Optional[str] = None) -> Value:
        return self._eval(node, self._target(node, want))

    def annulus(self, node: Expr) -> AnnulusElement:
        return self.value(node, ANNULUS)

    def function(self, node: Expr) -> RationalFunction:
        return self.value(node, RESIDUE)

    def mixed_torsor(self, node: Expr) -> MixedTorsor:
        return self._eval(node, TORSOR)

    def torsor(self, node: Expr) -> CharPTorsor:
        mt = self.mixed_torsor(node)
        kinds = mt.kinds()
        if len(kinds) != 1:
            raise UnsupportedKind(f"expected a single torsor, got kinds {[k.value for k in kinds]}")
        return mt.parts[kinds[0]]

    def named_mixed_torsor(self, name: str) -> MixedTorsor:
        return self.mixed_torsor(Var(name))

    def point(self, ref: PointRef) -> P1Point:
        if ref.expr is None:
            return INFINITY
        r = self.function(ref.expr)
        value = r.numerator.coefficient(0)
        return ORIGIN if value == 0 else P1Point(value, r.field)

    # -- evaluation -------------------------------------------------------------

    def _eval(self, node: Expr, target: str) -> Value:
        if isinstance(node, Num):
            return self._constant(node.value, target)
        if isinstance(node, Var):
            return self._var(node, target)
        if isinstance(node, Call):
            kind = GroupSchemeKindP(node.func)
            datum = self._eval(node.args[0], RESIDUE)
            return MixedTorsor.of(CharPTorsor(kind, datum))
        if isinstance(node, Neg):
            x = self._eval(node.operand, target)
            return x.negate() if isinstance(x, MixedTorsor) else -x
        if isinstance(node, Pow):
            base = self._eval(node.base, target)
            if node.exponent < 0:
                base = self._invert(base, node.base)
            return base ** abs(node.exponent)
        left = self._eval(node.left, target)
        right = self._eval(node.right, target)
        if node.op == "+":
            return mixed_add(left, right) if isinstance(left, MixedTorsor) else left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        return left * self._invert(right, node.right)

    def _invert(self, x: Value, node: Expr) -> Value:
        if isinstance(x, AnnulusElement):
            if x.is_zero() or x.pi_content() != 0:
                raise TypeCheckError("denominator is not a unit of the annulus", node.line, node.column)
            return x.inverse(self.context.window)
        return x.inverse()

    def _constant(self, n: int, target: str) -> Value:
        if target == ANNULUS:
            return AnnulusElement.constant(self.context.tower.from_int(n))
        F = self.context.field
        return RationalFunction.constant(F, F.from_int(n))

    def _var(self, node: Var, target: str) -> Value:
        name = node.name
        if name in self.exprs:
            key = (name, target)
            with self._cache_lock:
                cached = self._cache.get(key)
            if cached is not None:
                return cached
            # evaluated outside the lock; bindings may refer to other bindings
            value = self._eval(self.exprs[name], target)
            with self._cache_lock:
                return self._cache.setdefault(key, value)
        if name == "t":
            return RationalFunction.variable(self.context.field)
        if name == "a1":
            if target == ANNULUS:
                return AnnulusElement.constant(self.context.tower.generator(1))
            F = self.context.field
            return RationalFunction.constant(F, F.generator)
        tower = self.context.tower
        if name == "T":
            return AnnulusElement.t_power(tower, 1)
        if name == "pi":
            return AnnulusElement.constant(tower.pi)
        if name == "l":
            return AnnulusElement.constant(tower.lam)
        raise TypeCheckError(f"unknown name {name}", node.line, node.column)
