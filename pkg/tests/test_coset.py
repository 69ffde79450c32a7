import pytest

from stablab.coset import coset_enumerate
from stablab.errors import EnumerationOverflow
from stablab.presentation import parse_presentation

S3 = "group S3\ngens a b\nrel a^3\nrel b^2\nrel (a b)^2\n"
Q8 = "group Q8\ngens a b\nrel a^4\nrel a^2 b^-2\nrel b^-1 a b a\n"


def test_cyclic_trivial_subgroup():
    p = parse_presentation("group C5\ngens a\nrel a^5\n")
    act = coset_enumerate(p, [])
    assert act.degree == 5


def test_s3_index_computations():
    p = parse_presentation(S3)
    assert coset_enumerate(p, []).degree == 6
    assert coset_enumerate(p, [p.parse_word("b")]).degree == 3
    assert coset_enumerate(p, [p.parse_word("a")]).degree == 2


def test_q8_order():
    p = parse_presentation(Q8)
    assert coset_enumerate(p, []).degree == 8


def test_action_is_permutation():
    p = parse_presentation(S3)
    act = coset_enumerate(p, [])
    act.check_closed()
    for perm in act.generator_permutations():
        assert sorted(perm) == list(range(act.degree))


def test_relators_act_trivially():
    p = parse_presentation(Q8)
    act = coset_enumerate(p, [])
    for r in p.relators:
        for c in range(act.degree):
            assert act.act(c, r) == c


def test_overflow():
    # free group of rank 2 never closes
    p = parse_presentation("group F2\ngens a b\n")
    with pytest.raises(EnumerationOverflow):
        coset_enumerate(p, [], max_cosets=100)
