"""
Documents: a header, bindings, semi-stable configurations and directives, one
statement per line. Expressions are parsed with the Lark grammar in
backend/grammar/expression.lark and sort-checked against the header mode.
"""
import re
from dataclasses import dataclass, field as dc_field
from typing import Callable, Dict, List, Optional, Tuple, Union

from backend.config import logger, parse_extend, parse_window
from backend.errors import ParseError, TypeCheckError
from backend.expressions import BinOp, Call, Expr, Neg, Num, Pow, Var, parse_expression, to_source

MODES = ("charp", "mixed")
HEADER_KEYS = ("mode", "p", "f", "c", "prec", "window", "extend")
TORSOR_CALLS = ("etale", "mu_p", "alpha_p")
SELFCHECK_PROPERTIES = (
    "cartier",
    "galois-invariance",
    "kummer-invariance",
    "sp-homomorphism",
    "sp-equivariance",
    "lift-roundtrip",
    "filtration",
)

# sorts of expressions
CONST, RESIDUE, ANNULUS, TORSOR = "const", "t", "T", "torsor"
ANNULUS_NAMES = ("T", "l", "pi")

_HEADER_RE = re.compile(r"^([A-Za-z_]+)\s*:\s*(.*)$")
_BINDING_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*)$")
_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")
_N_RE = re.compile(r"\s+n\s*=\s*(-?\d+)\s*$")


@dataclass(frozen=True)
class Header:
    mode: str = "charp"
    p: int = 3
    f: int = 1
    c: int = 1
    prec: Optional[int] = None
    window: Optional[Tuple[int, int]] = None
    extend: Optional[str] = None
    explicit: Tuple[str, ...] = dc_field(default=(), compare=False)


@dataclass(frozen=True)
class Binding:
    name: str
    expr: Expr
    sort: str
    line: Optional[int] = dc_field(default=None, compare=False)


@dataclass(frozen=True)
class PointRef:
    """A point of P^1: None is infinity, otherwise a constant expression"""

    expr: Optional[Expr] = None

    def to_source(self) -> str:
        return "inf" if self.expr is None else to_source(self.expr)


@dataclass(frozen=True)
class SlotRef:
    component: str
    point: PointRef

    def to_source(self) -> str:
        return f"{self.component}@{self.point.to_source()}"


@dataclass(frozen=True)
class NodeStatement:
    name: str
    first: SlotRef
    second: SlotRef
    line: Optional[int] = dc_field(default=None, compare=False)


@dataclass(frozen=True)
class MarkedStatement:
    name: str
    slot: SlotRef
    line: Optional[int] = dc_field(default=None, compare=False)


@dataclass(frozen=True)
class ConfigStatement:
    name: str
    components: Tuple[str, ...]
    nodes: Tuple[NodeStatement, ...] = ()
    marked: Tuple[MarkedStatement, ...] = ()
    line: Optional[int] = dc_field(default=None, compare=False)


Arg = Union[Expr, PointRef, str, int, None]


@dataclass(frozen=True)
class Directive:
    command: str
    args: Tuple[Arg, ...]
    line: Optional[int] = dc_field(default=None, compare=False)

    def to_source(self) -> str:
        return _PRINTERS[self.command](self.args)


@dataclass(frozen=True)
class Document:
    header: Header = Header()
    bindings: Tuple[Binding, ...] = ()
    configs: Tuple[ConfigStatement, ...] = ()
    directives: Tuple[Directive, ...] = ()

    def binding(self, name: str) -> Binding:
        for b in self.bindings:
            if b.name == name:
                return b
        raise KeyError(name)

    def config(self, name: str) -> ConfigStatement:
        for cfg in self.configs:
            if cfg.name == name:
                return cfg
        raise KeyError(name)


# -- sort checking -------------------------------------------------------------

def _join(a: str, b: str, node: Expr) -> str:
    if a == CONST:
        return b
    if b == CONST or a == b:
        return a
    if {a, b} == {RESIDUE, ANNULUS}:
        raise TypeCheckError("expression mixes t with T, pi or l", node.line, node.column)
    raise TypeCheckError(f"cannot combine {a} with {b}", node.line, node.column)


def infer_sort(node: Expr, mode: str, sorts: Dict[str, str], f: int = 1) -> str:
    """const, t, T or torsor; raises TypeCheckError with the offending position"""
    if isinstance(node, Num):
        return CONST
    if isinstance(node, Var):
        name = node.name
        if name in sorts:
            return sorts[name]
        if name == "t":
            return RESIDUE
        if name in ANNULUS_NAMES:
            if mode == "charp":
                raise TypeCheckError(f"{name} is not available in charp mode", node.line, node.column)
            return ANNULUS
        if re.fullmatch(r"a\d+", name):
            if name != "a1" or f == 1:
                raise TypeCheckError(f"{name} is not a generator of F_{{p^{f}}}", node.line, node.column)
            return CONST
        raise TypeCheckError(f"unknown name {name}", node.line, node.column)
    if isinstance(node, Call):
        if node.func not in TORSOR_CALLS:
            raise TypeCheckError(f"unknown function {node.func}", node.line, node.column)
        if len(node.args) != 1:
            raise TypeCheckError(f"{node.func} takes exactly one argument", node.line, node.column)
        inner = infer_sort(node.args[0], mode, sorts, f)
        if inner not in (CONST, RESIDUE):
            raise TypeCheckError(f"{node.func} needs a function of t", node.line, node.column)
        return TORSOR
    if isinstance(node, Neg):
        return infer_sort(node.operand, mode, sorts, f)
    if isinstance(node, Pow):
        sort = infer_sort(node.base, mode, sorts, f)
        if sort == TORSOR:
            raise TypeCheckError("torsors cannot be raised to powers", node.line, node.column)
        return sort
    left = infer_sort(node.left, mode, sorts, f)
    right = infer_sort(node.right, mode, sorts, f)
    if TORSOR in (left, right):
        if node.op != "+" or left != right:
            raise TypeCheckError("torsors only support +", node.line, node.column)
        return TORSOR
    return _join(left, right, node)


# -- statement parsers ---------------------------------------------------------

def _expr_at(line_text: str, start: int, end: int, line: int) -> Expr:
    text = line_text[start:end]
    stripped = text.strip()
    if not stripped:
        raise ParseError("missing expression", line, start + 1)
    offset = start + (len(text) - len(text.lstrip()))
    return parse_expression(stripped, line, offset + 1)


def _split_args(line_text: str, start: int, line: int) -> List[Expr]:
    """Comma-separated when a comma is present, else whitespace-separated"""
    rest = line_text[start:]
    sep = r"," if "," in rest else r"\s+"
    out = []
    pos = start
    for piece in re.split(f"({sep})", rest):
        if re.fullmatch(sep, piece) or not piece.strip():
            pos += len(piece)
            continue
        out.append(_expr_at(line_text, pos, pos + len(piece), line))
        pos += len(piece)
    return out


def _point(text: str, line: int, column: int) -> PointRef:
    if text in ("inf", "oo", "infinity"):
        return PointRef(None)
    return PointRef(parse_expression(text, line, column))


def _slot(token: str, line: int, column: int) -> SlotRef:
    if "@" not in token:
        raise ParseError(f"expected COMPONENT@POINT, got {token!r}", line, column)
    component, _, point = token.partition("@")
    if not _NAME_RE.match(component):
        raise ParseError(f"bad component name {component!r}", line, column)
    return SlotRef(component, _point(point, line, column + len(component) + 1))


def _one_expr(text: str, start: int, line: int) -> Tuple[Arg, ...]:
    return (_expr_at(text, start, len(text), line),)


def _expr_at_point(text: str, start: int, line: int) -> Tuple[Arg, ...]:
    match = re.search(r"\s+at\s+(\S+)\s*$", text[start:])
    if not match:
        raise ParseError("expected `at POINT`", line, len(text) + 1)
    expr = _expr_at(text, start, start + match.start(), line)
    return expr, _point(match.group(1), line, start + match.start(1) + 1)


def _config_name(text: str, start: int, line: int) -> Tuple[Arg, ...]:
    name = text[start:].strip()
    if not _NAME_RE.match(name):
        raise ParseError(f"expected a configuration name, got {name!r}", line, start + 1)
    return (name,)


def _lift_args(text: str, start: int, line: int) -> Tuple[Arg, ...]:
    rest = text[start:]
    match = re.match(r"\s*(\S+)", rest)
    if not match or match.group(1) not in TORSOR_CALLS:
        raise ParseError(f"lift needs a kind among {', '.join(TORSOR_CALLS)}", line, start + 1)
    kind = match.group(1)
    n = None
    end = len(text)
    tail = _N_RE.search(text)
    if tail and tail.start() >= start + match.end():
        n = int(tail.group(1))
        end = tail.start()
    return kind, _expr_at(text, start + match.end(), end, line), n


def _exprs(minimum: int, maximum: Optional[int] = None) -> Callable[[str, int, int], Tuple[Arg, ...]]:
    def parse(text: str, start: int, line: int) -> Tuple[Arg, ...]:
        exprs = _split_args(text, start, line)
        if len(exprs) < minimum or (maximum is not None and len(exprs) > maximum):
            wanted = f"{minimum}" if maximum == minimum else f"at least {minimum}"
            raise ParseError(f"expected {wanted} expressions, got {len(exprs)}", line, start + 1)
        return tuple(exprs)
    return parse


def _galois_args(text: str, start: int, line: int) -> Tuple[Arg, ...]:
    match = re.match(r"\s*(-?\d+)\s+", text[start:])
    if not match:
        raise ParseError("galois-check needs a Frobenius power and a unit", line, start + 1)
    return int(match.group(1)), _expr_at(text, start + match.end(), len(text), line)


def _int_arg(text: str, start: int, line: int) -> Tuple[Arg, ...]:
    value = text[start:].strip()
    if not re.fullmatch(r"-?\d+", value):
        raise ParseError(f"expected an integer, got {value!r}", line, start + 1)
    return (int(value),)


def _selfcheck_args(text: str, start: int, line: int) -> Tuple[Arg, ...]:
    parts = text[start:].split()
    if not parts or parts[0] not in SELFCHECK_PROPERTIES or len(parts) > 2:
        raise ParseError(f"selfcheck needs one of {', '.join(SELFCHECK_PROPERTIES)} [COUNT]", line, start + 1)
    if len(parts) == 2 and not parts[1].isdigit():
        raise ParseError(f"selfcheck count must be a positive integer, got {parts[1]!r}", line, start + 1)
    return parts[0], int(parts[1]) if len(parts) == 2 else None


_PARSERS: Dict[str, Callable[[str, int, int], Tuple[Arg, ...]]] = {
    "classify": _one_expr,
    "normalize": _one_expr,
    "different": _one_expr,
    "conductor": _expr_at_point,
    "residue": _expr_at_point,
    "cartier-check": _one_expr,
    "as-reduce": _one_expr,
    "kummerian": _config_name,
    "lift": _lift_args,
    "filtration": _exprs(1),
    "galois-check": _galois_args,
    "sp-check": _exprs(2, 2),
    "phi": _int_arg,
    "selfcheck": _selfcheck_args,
}

DIRECTIVES = tuple(_PARSERS)

# commands whose verdicts decide the exit code
VERDICT_COMMANDS = ("cartier-check", "kummerian", "galois-check", "sp-check", "selfcheck", "lift")

# argument sorts: which sorts each expression argument accepts, and the mode it needs
_ANNULUS_ARG = ((CONST, ANNULUS), "mixed")
_RESIDUE_ARG = ((CONST, RESIDUE), None)
_TORSOR_ARG = ((TORSOR,), None)
_ARG_SORTS = {
    "classify": _ANNULUS_ARG,
    "normalize": _ANNULUS_ARG,
    "different": _ANNULUS_ARG,
    "filtration": _ANNULUS_ARG,
    "galois-check": _ANNULUS_ARG,
    "sp-check": _ANNULUS_ARG,
    "conductor": _TORSOR_ARG,
    "residue": _TORSOR_ARG,
    "cartier-check": _TORSOR_ARG,
    "as-reduce": _RESIDUE_ARG,
    "lift": ((CONST, RESIDUE), "mixed"),
    "phi": ((), "mixed"),
    "selfcheck": ((), None),
    "kummerian": ((), None),
}


def _join_exprs(args) -> str:
    return ", ".join(to_source(a) for a in args)


_PRINTERS: Dict[str, Callable[[Tuple[Arg, ...]], str]] = {
    "classify": lambda a: f"classify {to_source(a[0])}",
    "normalize": lambda a: f"normalize {to_source(a[0])}",
    "different": lambda a: f"different {to_source(a[0])}",
    "conductor": lambda a: f"conductor {to_source(a[0])} at {a[1].to_source()}",
    "residue": lambda a: f"residue {to_source(a[0])} at {a[1].to_source()}",
    "cartier-check": lambda a: f"cartier-check {to_source(a[0])}",
    "as-reduce": lambda a: f"as-reduce {to_source(a[0])}",
    "kummerian": lambda a: f"kummerian {a[0]}",
    "lift": lambda a: f"lift {a[0]} {to_source(a[1])}" + (f" n={a[2]}" if a[2] is not None else ""),
    "filtration": lambda a: f"filtration {_join_exprs(a)}",
    "galois-check": lambda a: f"galois-check {a[0]} {to_source(a[1])}",
    "sp-check": lambda a: f"sp-check {_join_exprs(a)}",
    "phi": lambda a: f"phi {a[0]}",
    "selfcheck": lambda a: f"selfcheck {a[0]}" + (f" {a[1]}" if a[1] is not None else ""),
}


# -- the document parser -------------------------------------------------------

class _Builder:
    def __init__(self):
        self.header: Dict[str, object] = {}
        self.bindings: List[Binding] = []
        self.sorts: Dict[str, str] = {}
        self.configs: List[dict] = []
        self.directives: List[Directive] = []
        self.body_started = False

    @property
    def mode(self) -> str:
        return str(self.header.get("mode", "charp"))

    @property
    def f(self) -> int:
        return int(self.header.get("f", 1))

    def add_header(self, key: str, value: str, line: int) -> None:
        if self.body_started:
            raise ParseError(f"header key {key} after the first binding or directive", line, 1)
        if key in self.header:
            raise ParseError(f"header key {key} given twice", line, 1)
        try:
            if key == "mode":
                if value not in MODES:
                    raise ValueError(f"mode must be charp or mixed, got {value!r}")
                parsed: object = value
            elif key == "window":
                parsed = parse_window(value)
            elif key == "extend":
                parsed = parse_extend(value)
            else:
                parsed = int(value)
                if parsed < 1:
                    raise ValueError(f"{key} must be positive, got {parsed}")
        except ValueError as exc:
            raise ParseError(str(exc), line, 1) from None
        self.header[key] = parsed

    def check_sort(self, expr: Expr, accepted: Tuple[str, ...]) -> str:
        sort = infer_sort(expr, self.mode, self.sorts, self.f)
        if accepted and sort not in accepted:
            raise TypeCheckError(f"expected {' or '.join(accepted)}, got {sort}", expr.line, expr.column)
        return sort

    def add_binding(self, name: str, expr: Expr, line: int) -> None:
        if name in self.sorts:
            raise ParseError(f"name {name} is bound twice", line, 1)
        if name in ("t", "a1") + ANNULUS_NAMES + TORSOR_CALLS + DIRECTIVES or name in ("config", "node", "marked"):
            raise ParseError(f"{name} is reserved", line, 1)
        sort = self.check_sort(expr, ())
        self.sorts[name] = sort
        self.bindings.append(Binding(name, expr, sort, line))

    def _check_point(self, point: PointRef) -> None:
        if point.expr is not None and infer_sort(point.expr, "charp", {}, self.f) != CONST:
            raise TypeCheckError("points must be constants", point.expr.line, point.expr.column)

    def _check_component(self, name: str, line: int) -> None:
        if self.sorts.get(name) != TORSOR:
            raise TypeCheckError(f"component {name} is not a torsor binding", line, 1)

    def add_config(self, text: str, start: int, line: int) -> None:
        match = re.match(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*=\s*(.*)$", text[start:])
        if not match:
            raise ParseError("expected `config NAME = C1, C2, ...`", line, start + 1)
        name = match.group(1)
        components = tuple(c.strip() for c in match.group(2).split(",") if c.strip())
        if not components:
            raise ParseError(f"config {name} has no components", line, start + 1)
        if any(cfg["name"] == name for cfg in self.configs):
            raise ParseError(f"config {name} is defined twice", line, start + 1)
        for component in components:
            self._check_component(component, line)
        self.configs.append({"name": name, "components": components, "nodes": [], "marked": [], "line": line})

    def _current_config(self, what: str, line: int) -> dict:
        if not self.configs:
            raise ParseError(f"{what} before any config statement", line, 1)
        return self.configs[-1]

    def _slots(self, text: str, start: int, line: int, count: int) -> Tuple[str, List[SlotRef]]:
        match = re.match(r"\s*([A-Za-z_][A-Za-z0-9_]*)\s*:\s*", text[start:])
        if not match:
            raise ParseError("expected `NAME: COMPONENT@POINT ...`", line, start + 1)
        slots = []
        for token in re.finditer(r"\S+", text[start + match.end():]):
            slots.append(_slot(token.group(0), line, start + match.end() + token.start() + 1))
        if len(slots) != count:
            raise ParseError(f"expected {count} slot(s), got {len(slots)}", line, start + 1)
        for slot in slots:
            self._check_point(slot.point)
        return match.group(1), slots

    def add_node(self, text: str, start: int, line: int) -> None:
        cfg = self._current_config("node", line)
        name, (first, second) = self._slots(text, start, line, 2)
        cfg["nodes"].append(NodeStatement(name, first, second, line))

    def add_marked(self, text: str, start: int, line: int) -> None:
        cfg = self._current_config("marked", line)
        name, (slot,) = self._slots(text, start, line, 1)
        cfg["marked"].append(MarkedStatement(name, slot, line))

    def add_directive(self, command: str, text: str, start: int, line: int) -> None:
        args = _PARSERS[command](text, start, line)
        accepted, needs_mode = _ARG_SORTS[command]
        if needs_mode and self.mode != needs_mode:
            raise TypeCheckError(f"{command} needs {needs_mode} mode", line, 1)
        for arg in args:
            if isinstance(arg, (Num, Var, Neg, BinOp, Pow, Call)):
                self.check_sort(arg, accepted)
            elif isinstance(arg, PointRef):
                self._check_point(arg)
        if command == "kummerian" and not any(cfg["name"] == args[0] for cfg in self.configs):
            raise TypeCheckError(f"unknown configuration {args[0]}", line, 1)
        self.directives.append(Directive(command, args, line))

    def build(self) -> Document:
        keys = tuple(self.header)
        header = Header(**{k: v for k, v in self.header.items()}, explicit=keys)
        configs = tuple(
            ConfigStatement(c["name"], c["components"], tuple(c["nodes"]), tuple(c["marked"]), c["line"])
            for c in self.configs
        )
        return Document(header, tuple(self.bindings), configs, tuple(self.directives))


def parse_document(text: str) -> Document:
    """Parse and sort-check a document; raises ParseError or TypeCheckError"""
    builder = _Builder()
    for number, raw in enumerate(text.splitlines(), start=1):
        line_text = raw.split("#", 1)[0].rstrip()
        if not line_text.strip():
            continue
        indent = len(line_text) - len(line_text.lstrip())
        body = line_text.lstrip()
        first = body.split(None, 1)[0]
        header = _HEADER_RE.match(body)
        if header and header.group(1) in HEADER_KEYS:
            builder.add_header(header.group(1), header.group(2).strip(), number)
            continue
        builder.body_started = True
        start = indent + len(first)
        if first == "config":
            builder.add_config(line_text, start, number)
        elif first == "node":
            builder.add_node(line_text, start, number)
        elif first == "marked":
            builder.add_marked(line_text, start, number)
        elif first in _PARSERS:
            builder.add_directive(first, line_text, start, number)
        else:
            binding = _BINDING_RE.match(body)
            if not binding:
                raise ParseError(f"cannot read statement starting with {first!r}", number, indent + 1)
            expr_start = indent + binding.start(2)
            builder.add_binding(binding.group(1), _expr_at(line_text, expr_start, len(line_text), number), number)
    document = builder.build()
    logger.debug(
        f"📄 Parsed document: {len(document.bindings)} bindings, {len(document.configs)} configs, "
        f"{len(document.directives)} directives"
    )
    return document


# -- canonical printer ---------------------------------------------------------

def document_to_source(document: Document) -> str:
    """Canonical text; parsing it again yields an equal Document"""
    h = document.header
    lines = []
    for key in h.explicit:
        value = getattr(h, key)
        if key == "window":
            value = f"{value[0]}:{value[1]}"
        lines.append(f"{key}: {value}")
    for b in document.bindings:
        lines.append(f"{b.name} = {to_source(b.expr)}")
    for cfg in document.configs:
        lines.append(f"config {cfg.name} = {', '.join(cfg.components)}")
        for node in cfg.nodes:
            lines.append(f"node {node.name}: {node.first.to_source()} {node.second.to_source()}")
        for mark in cfg.marked:
            lines.append(f"marked {mark.name}: {mark.slot.to_source()}")
    for directive in document.directives:
        lines.append(directive.to_source())
    return "\n".join(lines) + ("\n" if lines else "")
