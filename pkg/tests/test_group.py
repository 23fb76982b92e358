import pytest
from hypothesis import given, strategies as st

from epalg.group import (Cyclic, DirectProduct, GroupError, Integers, Permutation, closure,
                         extend_hom, group_from_spec, group_to_spec, homomorphisms, subgroups)


def test_integers_basics():
    Z = Integers()
    assert Z.op(3, -5) == -2 and Z.inv(4) == -4 and Z.power(3, 4) == 12
    assert Z.parse(" -7 ") == -7
    assert not Z.contains(True)


def test_cyclic_parse_reduces():
    G = Cyclic(5)
    assert G.parse("7") == 2 and G.inv(2) == 3
    with pytest.raises(GroupError):
        Cyclic(0)


def test_permutation_composition_convention():
    S3 = Permutation(3)
    p, q = (1, 0, 2), (0, 2, 1)
    assert S3.op(p, q) == tuple(p[i] for i in q)
    assert len(S3.elements()) == 6 and not S3.is_abelian
    with pytest.raises(GroupError):
        Permutation(3, [(0, 0, 1)])


def test_subgroup_counts():
    assert len(subgroups(Cyclic(6))) == 4
    assert len(subgroups(Permutation(3))) == 6


def test_closure_and_extend_hom():
    Z6 = Cyclic(6)
    assert closure(Z6, [2]) == {0, 2, 4}
    hom = extend_hom(Z6, Cyclic(3), {1: 1})
    assert hom[4] == 1
    assert extend_hom(Z6, Cyclic(4), {1: 1}) is None


def test_homomorphisms_from_subgroup():
    homs = homomorphisms(Cyclic(6), {0, 3}, Cyclic(2))
    assert len(homs) == 2


def test_spec_round_trip():
    for G in (Integers(), Cyclic(4), Permutation(3), DirectProduct([Cyclic(2), Cyclic(3)])):
        assert group_from_spec(group_to_spec(G)).key == G.key


@given(st.integers(1, 12), st.integers(-50, 50), st.integers(-50, 50), st.integers(-50, 50))
def test_cyclic_axioms(n, a, b, c):
    G = Cyclic(n)
    a, b, c = a % n, b % n, c % n
    assert G.op(G.op(a, b), c) == G.op(a, G.op(b, c))
    assert G.op(a, G.inv(a)) == G.identity_value


@given(st.permutations(range(4)), st.permutations(range(4)), st.permutations(range(4)))
def test_permutation_axioms(p, q, r):
    G = Permutation(4)
    p, q, r = tuple(p), tuple(q), tuple(r)
    assert G.op(G.op(p, q), r) == G.op(p, G.op(q, r))
    assert G.op(G.inv(p), p) == G.identity_value
