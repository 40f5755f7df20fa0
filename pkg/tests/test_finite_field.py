import pytest

from backend.errors import BadParameters
from backend.finite_field import FiniteField, find_irreducible, finite_field, is_irreducible, is_prime


def test_is_prime():
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]


def test_default_moduli():
    assert find_irreducible(2, 2) == (1, 1, 1)
    assert find_irreducible(3, 2) == (1, 0, 1)
    assert not is_irreducible((2, 0, 1), 3)  # t^2 - 1


@pytest.mark.parametrize("p, f", [(4, 1), (3, 0), (2, 17)])
def test_bad_parameters(p, f):
    with pytest.raises(BadParameters):
        FiniteField(p, f)


@pytest.mark.parametrize("p, f", [(2, 2), (3, 2), (5, 2), (2, 3)])
def test_field_axioms(p, f):
    F = finite_field(p, f)
    for a in range(1, F.q):
        assert F.mul(a, F.inv(a)) == 1
        assert F.add(a, F.neg(a)) == 0
    c = F.q - 1
    for a in F.elements():
        for b in F.elements():
            assert F.mul(c, F.add(a, b)) == F.add(F.mul(c, a), F.mul(c, b))


def test_frobenius_and_pth_root(F9):
    for a in F9.elements():
        assert F9.frobenius(a, 2) == a
        assert F9.pth_root(F9.frobenius(a)) == a
        assert F9.pow(F9.pth_root(a), 3) == a
    # a1^2 = -1, so sigma(a1) = a1^3 = -a1
    assert F9.frobenius(F9.generator) == F9.neg(F9.generator)


def test_f4_generator():
    F4 = finite_field(2, 2)
    assert F4.mul(F4.generator, F4.generator) == F4.add(F4.generator, 1)


def test_artin_schreier_solutions(F3):
    assert F3.solve_artin_schreier(1) is None
    assert F3.solve_artin_schreier(0) is not None


def test_format(F9):
    assert F9.format(3) == "a1"
    assert F9.format(5) == "a1 + 2"
    assert F9.format(0) == "0"


def test_embedding_of_prime_field(F3, F9):
    embedding = F3.embed_into(F9)
    assert [embedding(a) for a in F3.elements()] == [0, 1, 2]
    assert embedding.preimage(F9.generator) is None
