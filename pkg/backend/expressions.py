"""
Expression language: a Lark LALR grammar, a small immutable AST with source
positions, and a canonical printer.
"""
from dataclasses import dataclass, field as dc_field
from functools import lru_cache
from pathlib import Path
from typing import Optional, Tuple, Union

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedCharacters, UnexpectedEOF, UnexpectedInput, UnexpectedToken

from backend.config import logger
from backend.errors import ParseError

GRAMMAR_FILE = Path(__file__).parent / "grammar" / "expression.lark"


@dataclass(frozen=True)
class Num:
    value: int
    line: Optional[int] = dc_field(default=None, compare=False)
    column: Optional[int] = dc_field(default=None, compare=False)


@dataclass(frozen=True)
class Var:
    name: str
    line: Optional[int] = dc_field(default=None, compare=False)
    column: Optional[int] = dc_field(default=None, compare=False)


@dataclass(frozen=True)
class Neg:
    operand: "Expr"
    line: Optional[int] = dc_field(default=None, compare=False)
    column: Optional[int] = dc_field(default=None, compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Expr"
    right: "Expr"
    line: Optional[int] = dc_field(default=None, compare=False)
    column: Optional[int] = dc_field(default=None, compare=False)


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int
    line: Optional[int] = dc_field(default=None, compare=False)
    column: Optional[int] = dc_field(default=None, compare=False)


@dataclass(frozen=True)
class Call:
    func: str
    args: Tuple["Expr", ...]
    line: Optional[int] = dc_field(default=None, compare=False)
    column: Optional[int] = dc_field(default=None, compare=False)


Expr = Union[Num, Var, Neg, BinOp, Pow, Call]


def _where(meta, line_offset: int, column_offset: int) -> Tuple[Optional[int], Optional[int]]:
    if getattr(meta, "empty", True):
        return None, None
    return meta.line + line_offset, meta.column + column_offset


class ToAst(Transformer):
    """Parse tree -> AST, shifting positions into document coordinates"""

    def __init__(self, line_offset: int = 0, column_offset: int = 0):
        super().__init__()
        self.line_offset = line_offset
        self.column_offset = column_offset

    def _pos(self, meta):
        return _where(meta, self.line_offset, self.column_offset)

    @v_args(meta=True)
    def num(self, meta, children):
        return Num(int(children[0]), *self._pos(meta))

    @v_args(meta=True)
    def var(self, meta, children):
        return Var(str(children[0]), *self._pos(meta))

    @v_args(meta=True)
    def call(self, meta, children):
        return Call(str(children[0]), tuple(children[1:]), *self._pos(meta))

    @v_args(meta=True)
    def neg(self, meta, children):
        return Neg(children[0], *self._pos(meta))

    @v_args(meta=True)
    def pow(self, meta, children):
        return Pow(children[0], children[1], *self._pos(meta))

    def pos_exp(self, children):
        return int(children[0])

    def neg_exp(self, children):
        return -int(children[0])

    def _binary(op):
        @v_args(meta=True)
        def build(self, meta, children):
            return BinOp(op, children[0], children[1], *self._pos(meta))
        return build

    add = _binary("+")
    sub = _binary("-")
    mul = _binary("*")
    div = _binary("/")
    del _binary


@lru_cache(maxsize=None)
def expression_parser() -> Lark:
    with open(GRAMMAR_FILE, "r", encoding="utf-8") as f:
        grammar = f.read()
    logger.debug("🔧 Building expression parser")
    return Lark(
        grammar,
        parser="lalr",
        start="start",
        propagate_positions=True,
        maybe_placeholders=False,
    )


def parse_expression(text: str, line: int = 1, column: int = 1) -> Expr:
    """Parse one expression; line/column place its first character in the enclosing document"""
    try:
        tree = expression_parser().parse(text)
    except UnexpectedInput as exc:
        raise _parse_error(exc, text, line, column) from None
    return ToAst(line - 1, column - 1).transform(tree)


def _parse_error(exc: UnexpectedInput, text: str, line: int, column: int) -> ParseError:
    if isinstance(exc, UnexpectedEOF) or getattr(exc, "column", -1) in (None, -1):
        return ParseError("unexpected end of expression", line, column + len(text))
    col = column + exc.column - 1
    if isinstance(exc, UnexpectedToken):
        return ParseError(f"unexpected {exc.token!r}", line, col)
    if isinstance(exc, UnexpectedCharacters):
        return ParseError(f"unexpected character {exc.char!r}", line, col)
    return ParseError("syntax error", line, col)


# -- canonical printer -------------------------------------------------------

_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2}
_NEG, _POW, _ATOM = 3, 4, 5


def _level(node: Expr) -> int:
    if isinstance(node, BinOp):
        return _PRECEDENCE[node.op]
    if isinstance(node, Neg):
        return _NEG
    if isinstance(node, Pow):
        return _POW
    return _ATOM


def _wrap(node: Expr, needs: bool) -> str:
    text = to_source(node)
    return f"({text})" if needs else text


def to_source(node: Expr) -> str:
    """Canonical text: single spaces around + - and none around * / ^"""
    if isinstance(node, Num):
        return str(node.value)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Call):
        return f"{node.func}({', '.join(to_source(a) for a in node.args)})"
    if isinstance(node, Neg):
        return "-" + _wrap(node.operand, _level(node.operand) < _NEG)
    if isinstance(node, Pow):
        return f"{_wrap(node.base, _level(node.base) < _ATOM)}^{node.exponent}"
    level = _PRECEDENCE[node.op]
    left = _wrap(node.left, _level(node.left) < level)
    right = _wrap(node.right, _level(node.right) <= level)
    if level == 1:
        return f"{left} {node.op} {right}"
    return f"{left}{node.op}{right}"


def free_names(node: Expr) -> Tuple[str, ...]:
    """Variable names in order of first appearance"""
    seen = []
    stack = [node]
    while stack:
        current = stack.pop()
        if isinstance(current, Var):
            if current.name not in seen:
                seen.append(current.name)
        elif isinstance(current, Neg):
            stack.append(current.operand)
        elif isinstance(current, Pow):
            stack.append(current.base)
        elif isinstance(current, BinOp):
            stack.extend((current.right, current.left))
        elif isinstance(current, Call):
            stack.extend(reversed(current.args))
    return tuple(seen)
