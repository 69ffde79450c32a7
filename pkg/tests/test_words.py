import pytest

from stablab.errors import ParseError
from stablab.presentation import parse_presentation, parse_word
from stablab.words import Word, free_reduce


def test_free_reduction():
    assert free_reduce((1, -1)) == ()
    assert free_reduce((1, 2, -2, -1)) == ()
    assert free_reduce((1, 2, -2, 3)) == (1, 3)
    assert Word((1, -1, 2)).letters == (2,)


def test_inverse_and_product():
    w = Word((1, 2, -1))
    assert (w * w.inverse()).letters == ()
    assert w.inverse().letters == (1, -2, -1)
    assert (w ** 3).letters == (1, 2, 2, 2, -1)
    assert (w ** -2) == (w * w).inverse()


def test_commutator_and_conjugate():
    a, b = Word.gen(0), Word.gen(1)
    assert a.commutator(b).letters == (1, 2, -1, -2)
    assert a.conj(b).letters == (2, 1, -2)
    assert a.commutator(a).letters == ()


def test_parse_word_grammar():
    gens = ("a", "b")
    assert parse_word("a b^-1", gens).letters == (1, -2)
    assert parse_word("a^3", gens).letters == (1, 1, 1)
    assert parse_word("(a b)^2", gens).letters == (1, 2, 1, 2)
    assert parse_word("(a b)^-1", gens).letters == (-2, -1)
    assert parse_word("[a, b]", gens).letters == (1, 2, -1, -2)


def test_parse_presentation():
    p = parse_presentation("group S3\ngens a b\nrel a^3\nrel b^2\n"
                           "rel (a b)^2\n")
    assert p.name == "S3"
    assert p.generators == ("a", "b")
    assert len(p.relators) == 3


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_word("c", ("a", "b"))
    with pytest.raises(ParseError):
        parse_presentation("group G\ngens a a\nrel a^2\n")
