import pytest

from backend.charp_torsors import ETALE, MU_P, CharPTorsor, MixedTorsor
from backend.errors import InvalidConfig, MissingTorsorAtNode
from backend.fp_series import INFINITY, ORIGIN
from backend.polynomials import Polynomial, RationalFunction
from backend.semistable import Node, SemiStableConfig, Slot, kummerian_check, kummerian_closure_report


def two_lines():
    node = Node("x", Slot("A", ORIGIN), Slot("B", ORIGIN))
    return SemiStableConfig("C", ("A", "B"), (node,))


def mu(F, *coeffs):
    return MixedTorsor.of(CharPTorsor(MU_P, RationalFunction.from_polynomial(Polynomial(F, coeffs))))


def test_residues_cancel(F3, window):
    report = kummerian_check(two_lines(), {"A": mu(F3, 0, 1), "B": mu(F3, 0, 0, 1)}, 3, window)
    assert report.kummerian
    assert report.to_dict()["nodes"][0]["h"] == [1, 2]


def test_residues_do_not_cancel(F3, window):
    report = kummerian_check(two_lines(), {"A": mu(F3, 0, 1), "B": mu(F3, 0, 1)}, 3, window)
    assert not report.kummerian


def test_missing_torsor(F3, window):
    with pytest.raises(MissingTorsorAtNode):
        kummerian_check(two_lines(), {"A": mu(F3, 0, 1)}, 3, window)


def test_designated_torsor_is_the_live_one(F3, window):
    etale = CharPTorsor(ETALE, RationalFunction.variable(F3))  # regular at t = 0
    mixed = mu(F3, 0, 1) + MixedTorsor.of(etale)
    report = kummerian_check(two_lines(), {"A": mixed, "B": mu(F3, 0, 0, 1)}, 3, window)
    assert report.kummerian
    assert report.nodes[0].kinds == ("mu_p", "mu_p")


def test_invalid_configs():
    disconnected = SemiStableConfig("D", ("A", "B"))
    with pytest.raises(InvalidConfig):
        disconnected.dual_graph()
    reused = SemiStableConfig(
        "R",
        ("A", "B"),
        (Node("x", Slot("A", ORIGIN), Slot("B", ORIGIN)), Node("y", Slot("A", ORIGIN), Slot("B", INFINITY))),
    )
    with pytest.raises(InvalidConfig):
        reused.dual_graph()


def test_genus_of_a_cycle():
    cycle = SemiStableConfig(
        "L",
        ("A", "B"),
        (Node("x", Slot("A", ORIGIN), Slot("B", ORIGIN)), Node("y", Slot("A", INFINITY), Slot("B", INFINITY))),
    )
    assert cycle.genus_contribution() == 1
    assert two_lines().genus_contribution() == 0


def test_subgroup_closure_report(F3, window):
    a = {"A": mu(F3, 0, 1), "B": mu(F3, 0, 0, 1)}
    b = {"A": mu(F3, 0, 0, 1), "B": mu(F3, 0, 1)}
    report = kummerian_closure_report(two_lines(), a, b, 3, window)
    assert report["first"] and report["second"]
    assert report["sum"] is True
    assert report["closed"] is True
