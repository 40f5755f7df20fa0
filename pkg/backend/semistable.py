"""
Semi-stable configurations of projective lines and the Kummerian node condition.
"""
from dataclasses import dataclass, field as dc_field
from typing import Any, Dict, List, Mapping, Optional, Tuple

import networkx as nx

from backend.charp_torsors import (
    CharPTorsor,
    MixedTorsor,
    TorsorLocalData,
    conductor_residue,
    mixed_add,
)
from backend.config import logger
from backend.errors import InvalidConfig, MissingTorsorAtNode
from backend.fp_series import P1Point


@dataclass(frozen=True)
class Slot:
    component: str
    point: P1Point

    def label(self) -> str:
        return f"{self.component}@{self.point.label()}"


@dataclass(frozen=True)
class Node:
    name: str
    first: Slot
    second: Slot


@dataclass(frozen=True)
class SemiStableConfig:
    name: str
    components: Tuple[str, ...]
    nodes: Tuple[Node, ...] = ()
    marked: Tuple[Slot, ...] = ()

    def dual_graph(self) -> nx.MultiGraph:
        """Components as vertices, nodes as edges; raises InvalidConfig when malformed"""
        if len(set(self.components)) != len(self.components):
            raise InvalidConfig(f"config {self.name} repeats a component")
        graph = nx.MultiGraph()
        graph.add_nodes_from(self.components)
        used = set()
        for node in self.nodes:
            for slot in (node.first, node.second):
                if slot.component not in graph:
                    raise InvalidConfig(f"node {node.name} references unknown component {slot.component}")
                if slot in used:
                    raise InvalidConfig(f"slot {slot.label()} is used by two nodes")
                used.add(slot)
            if node.first == node.second:
                raise InvalidConfig(f"node {node.name} glues a slot to itself")
            graph.add_edge(node.first.component, node.second.component, key=node.name)
        for slot in self.marked:
            if slot.component not in graph:
                raise InvalidConfig(f"marked point {slot.label()} is on an unknown component")
            if slot in used:
                raise InvalidConfig(f"marked point {slot.label()} coincides with a node")
        if self.components and not nx.is_connected(graph):
            raise InvalidConfig(f"config {self.name} is not connected")
        return graph

    def genus_contribution(self) -> int:
        """First Betti number of the dual graph"""
        graph = self.dual_graph()
        return graph.number_of_edges() - graph.number_of_nodes() + nx.number_connected_components(graph)


@dataclass(frozen=True)
class NodeReport:
    node: str
    first: TorsorLocalData
    second: TorsorLocalData
    kinds: Tuple[str, str]

    @property
    def m_sum(self) -> int:
        return self.first.m + self.second.m

    def h_sum(self, p: int) -> int:
        return (self.first.h + self.second.h) % p

    def to_dict(self, p: int) -> Dict[str, Any]:
        return {
            "node": self.node,
            "kinds": list(self.kinds),
            "m": [self.first.m, self.second.m],
            "h": [self.first.h, self.second.h],
            "kummerian": self.m_sum == 0 and self.h_sum(p) == 0,
        }


@dataclass(frozen=True)
class KummerianReport:
    kummerian: bool
    p: int
    nodes: Tuple[NodeReport, ...] = dc_field(default_factory=tuple)

    def to_dict(self) -> Dict[str, Any]:
        return {"kummerian": self.kummerian, "nodes": [n.to_dict(self.p) for n in self.nodes]}


def designated_torsor(mt: Optional[MixedTorsor], slot: Slot, window=None) -> Tuple[CharPTorsor, TorsorLocalData]:
    """The unique component of mt that is present (or nontrivial) at the slot"""
    if mt is None or not mt.parts:
        raise MissingTorsorAtNode(f"no torsor on component {slot.component}", slot=slot.label())
    kinds = mt.kinds()
    if len(kinds) == 1:
        torsor = mt.parts[kinds[0]]
        return torsor, conductor_residue(torsor, slot.point, window)
    local = {kind: conductor_residue(mt.parts[kind], slot.point, window) for kind in kinds}
    live = [kind for kind in kinds if not local[kind].trivial_locally]
    if len(live) != 1:
        raise MissingTorsorAtNode(f"no designated torsor at {slot.label()}", slot=slot.label())
    return mt.parts[live[0]], local[live[0]]


def kummerian_check(
    cfg: SemiStableConfig,
    mt: Mapping[str, MixedTorsor],
    p: int,
    window=None,
) -> KummerianReport:
    """Conductors cancel in Z and residues cancel in F_p at every node"""
    cfg.dual_graph()
    reports: List[NodeReport] = []
    for node in cfg.nodes:
        f1, first = designated_torsor(mt.get(node.first.component), node.first, window)
        f2, second = designated_torsor(mt.get(node.second.component), node.second, window)
        reports.append(NodeReport(node.name, first, second, (f1.kind.value, f2.kind.value)))
    verdict = all(r.m_sum == 0 and r.h_sum(p) == 0 for r in reports)
    logger.debug(f"🔍 Kummerian check on {cfg.name}: {verdict}")
    return KummerianReport(verdict, p, tuple(reports))


def kummerian_closure_report(
    cfg: SemiStableConfig,
    a: Mapping[str, MixedTorsor],
    b: Mapping[str, MixedTorsor],
    p: int,
    window=None,
) -> Dict[str, Optional[bool]]:
    """Whether a, b and a + b are Kummerian; closure is observed, never assumed"""
    total = {c: mixed_add(a.get(c, MixedTorsor.zero()), b.get(c, MixedTorsor.zero())) for c in cfg.components}
    first = kummerian_check(cfg, a, p, window).kummerian
    second = kummerian_check(cfg, b, p, window).kummerian
    try:
        both = kummerian_check(cfg, total, p, window).kummerian
    except MissingTorsorAtNode:
        both = None
    closed = both if first and second else None
    return {"first": first, "second": second, "sum": both, "closed": closed}
