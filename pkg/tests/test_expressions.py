import pytest

from backend.errors import ParseError
from backend.expressions import BinOp, Call, Neg, Num, Pow, Var, free_names, parse_expression, to_source


@pytest.mark.parametrize(
    "text, canonical",
    [
        ("1 + l^3*T^-1", "1 + l^3*T^-1"),
        ("1+l^3 * T^(-1)", "1 + l^3*T^-1"),
        ("t - (t - 1)", "t - (t - 1)"),
        ("(t - 1) - t", "t - 1 - t"),
        ("(t + 1)^3", "(t + 1)^3"),
        ("-t^2", "-t^2"),
        ("(-t)^2", "(-t)^2"),
        ("mu_p(t^2 + 1)", "mu_p(t^2 + 1)"),
        ("t/(t*t)", "t/(t*t)"),
    ],
)
def test_canonical_printer(text, canonical):
    assert to_source(parse_expression(text)) == canonical
    assert parse_expression(canonical) == parse_expression(text)


def test_precedence():
    assert parse_expression("-t^2") == Neg(Pow(Var("t"), 2))
    assert parse_expression("1 + 2*t") == BinOp("+", Num(1), BinOp("*", Num(2), Var("t")))
    assert parse_expression("t^-2") == Pow(Var("t"), -2)
    assert parse_expression("etale(1/t)") == Call("etale", (BinOp("/", Num(1), Var("t")),))


def test_positions_are_in_document_coordinates():
    node = parse_expression("t + 1", line=3, column=5)
    assert (node.line, node.column) == (3, 5)
    assert (node.right.line, node.right.column) == (3, 9)


def test_implicit_product_is_rejected():
    with pytest.raises(ParseError) as excinfo:
        parse_expression("pi^3 T")
    assert (excinfo.value.line, excinfo.value.column) == (1, 6)


def test_unexpected_end():
    with pytest.raises(ParseError):
        parse_expression("t +")


def test_free_names():
    assert free_names(parse_expression("mu_p(t) + A + A")) == ("t", "A")
