import pytest

from backend.document import ANNULUS, RESIDUE, TORSOR, PointRef, document_to_source, parse_document
from backend.errors import ParseError, TypeCheckError

KUMMERIAN = """p: 3
A = mu_p(t)
B = mu_p(t^2)
config C = A, B
node x: A@0 B@0
marked y: A@inf
kummerian C
"""

MIXED = """mode: mixed
p: 3
window: -16:16  # local expansions
u = 1 + l^3*T^-1
classify u
lift alpha_p 1/t n=2
filtration u, T^2
sp-check T T
galois-check 1 u
selfcheck cartier 10
phi 1
"""


def test_header_and_sorts():
    doc = parse_document(MIXED)
    assert (doc.header.mode, doc.header.p, doc.header.window) == ("mixed", 3, (-16, 16))
    assert doc.header.explicit == ("mode", "p", "window")
    assert doc.binding("u").sort == ANNULUS
    assert [d.command for d in doc.directives] == [
        "classify", "lift", "filtration", "sp-check", "galois-check", "selfcheck", "phi",
    ]


def test_directive_arguments():
    doc = parse_document(MIXED)
    lift = doc.directives[1]
    assert lift.args[0] == "alpha_p" and lift.args[2] == 2
    assert len(doc.directives[2].args) == 2
    assert len(doc.directives[3].args) == 2
    assert doc.directives[4].args[0] == 1
    assert doc.directives[5].args == ("cartier", 10)
    assert doc.directives[6].args == (1,)


def test_configs():
    doc = parse_document(KUMMERIAN)
    cfg = doc.config("C")
    assert cfg.components == ("A", "B")
    assert cfg.nodes[0].first.component == "A"
    assert cfg.marked[0].slot.point == PointRef(None)
    assert doc.binding("A").sort == TORSOR
    assert doc.directives[0].args == ("C",)


def test_canonical_text_reparses_to_the_same_document():
    for text in (KUMMERIAN, MIXED):
        doc = parse_document(text)
        canonical = document_to_source(doc)
        assert parse_document(canonical) == doc
        assert document_to_source(parse_document(canonical)) == canonical
    assert "classify 1 + l^3*T^-1" in document_to_source(parse_document("mode: mixed\nclassify 1+l^3*T^(-1)\n"))


def test_parse_error_position():
    with pytest.raises(ParseError) as excinfo:
        parse_document("mode: mixed\nu = 1 + pi^3 T\n")
    assert (excinfo.value.line, excinfo.value.column) == (2, 14)


@pytest.mark.parametrize(
    "text",
    [
        "u = t\np: 3\n",
        "u = t\nu = t^2\n",
        "p: 3\np: 5\n",
        "mode: other\n",
        "window: 3:1\n",
        "t = 1\n",
        "frobnicate t\n",
        "selfcheck nonsense\n",
        "node x: A@0 B@0\n",
    ],
)
def test_parse_errors(text):
    with pytest.raises(ParseError):
        parse_document(text)


@pytest.mark.parametrize(
    "text",
    [
        "u = T\n",
        "mode: mixed\nu = t + T\n",
        "classify t\n",
        "mode: mixed\nclassify mu_p(t)\n",
        "u = a1\n",
        "u = foo\n",
        "A = t\nconfig C = A\n",
        "kummerian C\n",
        "u = mu_p(t)^2\n",
    ],
)
def test_type_errors(text):
    with pytest.raises(TypeCheckError):
        parse_document(text)


def test_residue_sorts_and_generators():
    doc = parse_document("f: 2\nu = a1*t + 1\nA = etale(u)\nconductor A at a1\n")
    assert doc.binding("u").sort == RESIDUE
    assert doc.directives[0].args[1].expr is not None
