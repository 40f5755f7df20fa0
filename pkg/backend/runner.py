"""
Directive runner: evaluates a parsed document and produces one record per
directive, in directive order. Directives are independent pure computations and
run concurrently in worker threads.
"""
import asyncio
import json
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Tuple

from backend.charp_torsors import (
    CharPTorsor,
    GroupSchemeKindP,
    artin_schreier_reduce,
    cartier_class_check,
    conductor_residue,
)
from backend.config import logger
from backend.degeneration import (
    different_degree_oracle,
    filtration_bucket,
    galois_equivariance_check,
    normalize_with_policy,
    sp_homomorphism_check,
    special_fibre_of_phi,
    specialize,
)
from backend.document import VERDICT_COMMANDS, Directive, Document, parse_document
from backend.errors import TorsorError
from backend.evaluator import Evaluator, RunContext, resolve_context
from backend.fp_series import as_germ
from backend.lifting import admissibility_report
from backend.properties import PropertyParams, run_property
from backend.semistable import Node, SemiStableConfig, Slot, kummerian_check

Outcome = Tuple[Dict[str, Any], Optional[bool]]


@dataclass(frozen=True)
class RunResult:
    context: RunContext
    records: Tuple[Dict[str, Any], ...]

    @property
    def exit_code(self) -> int:
        """0 when every verdict directive passed, 1 otherwise"""
        for record in self.records:
            if record["command"] in VERDICT_COMMANDS and record["verdict"] is not True:
                return 1
        return 0

    def to_ndjson(self) -> str:
        return "".join(json.dumps(record, sort_keys=True) + "\n" for record in self.records)


# -- directive handlers ----------------------------------------------------------

def _classify(ev: Evaluator, args) -> Outcome:
    ctx = ev.context
    report = specialize(ev.annulus(args[0]), ctx.extend, ctx.window)
    return report.to_dict(), None


def _normalize(ev: Evaluator, args) -> Outcome:
    ctx = ev.context
    nf, c = normalize_with_policy(ev.annulus(args[0]), ctx.extend, ctx.window)
    return {**nf.to_dict(), "extension": {"c": c}}, None


def _different(ev: Evaluator, args) -> Outcome:
    ctx = ev.context
    u = ev.annulus(args[0])
    oracle = different_degree_oracle(u, ctx.extend, ctx.window)
    report = specialize(u, ctx.extend, ctx.window)
    return {"delta": oracle, "classifier_delta": report.delta, "agree": oracle == report.delta}, None


def _local_data(ev: Evaluator, args) -> Dict[str, Any]:
    torsor = ev.torsor(args[0])
    point = ev.point(args[1])
    local = conductor_residue(torsor, point, ev.context.window)
    return {"point": point.label(), "kind": torsor.kind.value, **local.to_dict()}


def _conductor(ev: Evaluator, args) -> Outcome:
    return _local_data(ev, args), None


def _residue(ev: Evaluator, args) -> Outcome:
    return _local_data(ev, args), None


def _cartier_check(ev: Evaluator, args) -> Outcome:
    verdict = cartier_class_check(ev.torsor(args[0]))
    return verdict.to_dict(), verdict.passed


def _as_reduce(ev: Evaluator, args) -> Outcome:
    germ = as_germ(ev.function(args[0]), ev.context.window)
    reduced, witness = artin_schreier_reduce(germ)
    polar = [k for k in reduced.coeffs if k < 0]
    return {
        "reduced": reduced.to_expression(),
        "witness": witness.to_expression(),
        "conductor": -min(polar) if polar else 0,
        "trivial": not polar,
    }, None


def _config(ev: Evaluator, name: str) -> SemiStableConfig:
    statement = ev.document.config(name)

    def slot(ref):
        return Slot(ref.component, ev.point(ref.point))

    nodes = tuple(Node(n.name, slot(n.first), slot(n.second)) for n in statement.nodes)
    marked = tuple(slot(m.slot) for m in statement.marked)
    return SemiStableConfig(statement.name, statement.components, nodes, marked)


def _kummerian(ev: Evaluator, args) -> Outcome:
    cfg = _config(ev, args[0])
    torsors = {name: ev.named_mixed_torsor(name) for name in cfg.components}
    report = kummerian_check(cfg, torsors, ev.context.p, ev.context.window)
    return {**report.to_dict(), "config": cfg.name, "genus": cfg.genus_contribution()}, report.kummerian


def _lift(ev: Evaluator, args) -> Outcome:
    kind, datum, n = args
    source = CharPTorsor(GroupSchemeKindP(kind), ev.function(datum))
    lifted = admissibility_report(source, ev.context.tower, n, ev.context.window)
    return lifted.to_dict(), lifted.round_trip


def _filtration(ev: Evaluator, args) -> Outcome:
    ctx = ev.context
    units = [ev.annulus(a) for a in args]
    buckets = filtration_bucket(units, ctx.extend, ctx.window)
    levels = [max((n for n, members in buckets.items() if i in members), default=0) for i in range(len(units))]
    return {"levels": levels, "buckets": {str(n): members for n, members in buckets.items()}}, None


def _galois_check(ev: Evaluator, args) -> Outcome:
    ctx = ev.context
    verdict = galois_equivariance_check(args[0], ev.annulus(args[1]), ctx.extend, ctx.window)
    return verdict.to_dict(), verdict.passed


def _sp_check(ev: Evaluator, args) -> Outcome:
    ctx = ev.context
    verdict = sp_homomorphism_check(ev.annulus(args[0]), ev.annulus(args[1]), ctx.extend, ctx.window)
    return verdict.to_dict(), verdict.passed


def _phi(ev: Evaluator, args) -> Outcome:
    return special_fibre_of_phi(ev.context.tower, args[0]).to_dict(), None


def _selfcheck(ev: Evaluator, args) -> Outcome:
    ctx = ev.context
    name, count = args
    params = PropertyParams(ctx.p, ctx.prec, ctx.window, ctx.extend)
    result = run_property(name, params, count, ctx.seed)
    return result.to_dict(), result.passed


HANDLERS: Dict[str, Callable[[Evaluator, Tuple], Outcome]] = {
    "classify": _classify,
    "normalize": _normalize,
    "different": _different,
    "conductor": _conductor,
    "residue": _residue,
    "cartier-check": _cartier_check,
    "as-reduce": _as_reduce,
    "kummerian": _kummerian,
    "lift": _lift,
    "filtration": _filtration,
    "galois-check": _galois_check,
    "sp-check": _sp_check,
    "phi": _phi,
    "selfcheck": _selfcheck,
}


# -- running --------------------------------------------------------------------

def run_directive(ev: Evaluator, index: int, directive: Directive) -> Dict[str, Any]:
    """One record; library errors become structured error objects"""
    record: Dict[str, Any] = {
        "index": index,
        "line": directive.line,
        "command": directive.command,
        "input": directive.to_source(),
        "ok": True,
        "verdict": None,
        "result": None,
        "error": None,
    }
    try:
        result, verdict = HANDLERS[directive.command](ev, directive.args)
        record["result"] = result
        record["verdict"] = verdict
    except TorsorError as e:
        logger.info(f"❌ {directive.command} (line {directive.line}): {e.kind}: {e.message}")
        record.update(ok=False, error=e.to_dict())
        if directive.command in VERDICT_COMMANDS:
            record["verdict"] = False
    except Exception as e:
        logger.error(f"❌ Unexpected error in {directive.command} (line {directive.line}): {e}", exc_info=True)
        record.update(ok=False, error={"kind": "InternalError", "message": str(e)})
        if directive.command in VERDICT_COMMANDS:
            record["verdict"] = False
    return record


async def run_document_async(document: Document, context: RunContext) -> RunResult:
    ev = Evaluator(document, context)
    logger.info(f"🚀 Running {len(document.directives)} directives ({context.mode}, p={context.p})")
    tasks = [asyncio.to_thread(run_directive, ev, i, d) for i, d in enumerate(document.directives)]
    records = await asyncio.gather(*tasks)
    logger.info(f"✅ Finished {len(records)} directives")
    return RunResult(context, tuple(records))


def run_document(document: Document, context: Optional[RunContext] = None, **overrides: Any) -> RunResult:
    context = context or resolve_context(document, **overrides)
    return asyncio.run(run_document_async(document, context))


def run_text(text: str, **overrides: Any) -> RunResult:
    """Parse then run; ParseError and TypeCheckError propagate to the caller"""
    document = parse_document(text)
    return run_document(document, **overrides)


# -- table output -----------------------------------------------------------------

_SUMMARY_KEYS = ("kind", "delta", "n", "m", "h", "level", "trivial", "pass", "kummerian", "round_trip", "point")


def format_table(records: List[Dict[str, Any]]) -> str:
    """Human-readable summary, one line per directive"""
    rows = [("#", "line", "command", "status", "summary")]
    for record in records:
        if record["ok"]:
            result = record["result"] or {}
            summary = " ".join(f"{k}={result[k]}" for k in _SUMMARY_KEYS if k in result and not isinstance(result[k], dict))
            status = {True: "pass", False: "FAIL", None: "ok"}[record["verdict"]]
        else:
            summary = f"{record['error']['kind']}: {record['error']['message']}"
            status = "error"
        rows.append((str(record["index"]), str(record["line"]), record["command"], status, summary))
    widths = [max(len(row[i]) for row in rows) for i in range(4)]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(row[:4], widths)) + "  " + row[4] for row in rows]
    return "\n".join(line.rstrip() for line in lines) + "\n"
