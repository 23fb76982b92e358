import math

import pytest

from epalg.cocycle import validate_cocycle
from epalg.cohomology import signature
from epalg.constructions import (ConstructionError, EpkParameters, admissible_generating_value,
                                 dynamical_system_graph, epk_cocycle, epk_decompose,
                                 epk_generating_function, epk_system, integer_endomorphism_system,
                                 katsura_system, rotation_commuting_system,
                                 scan_commuting_cocycles, tree_system, z2_strings_system,
                                 zappa_szep_product)
from epalg.graph import Graph


def test_epk_generating_function_examples():
    # xi(k) = (b + k) // a
    assert epk_generating_function(2, 1) == (0, 1)
    assert epk_generating_function(3, 2) == (0, 1, 1)
    assert epk_generating_function(2, -1) == (-1, 0)
    assert epk_cocycle(3, 2).action.tau == (2, 0, 1)


def test_epk_parameters():
    p = EpkParameters(12, 8)
    assert (p.d, p.a_prime, p.b_prime) == (4, 3, 2)


@pytest.mark.parametrize("a,b", [(4, 2), (6, 9), (5, 0), (3, -6), (1, 7)])
def test_decompose_certified(a, b):
    comps = epk_decompose(a, b)
    d = math.gcd(a, b)
    assert len(comps) == d
    assert all(c.verified for c in comps)
    assert sorted(x for c in comps for x in c.orbit) == list(range(a))


def test_decompose_worked_example():
    comps = epk_decompose(4, 2)
    assert [c.orbit for c in comps] == [(0, 2), (1, 3)]
    assert all(c.target == (2, 1) for c in comps)


def test_epk_systems_validate():
    for a in range(1, 5):
        for b in range(-3, 4):
            s = epk_system(a, b)
            assert validate_cocycle(s.action, s.cocycle, strong=True).valid
            assert signature(s.cocycle) == b


def test_integer_endomorphism_matches_epk():
    for a, b in [(2, 1), (3, 2), (3, -1)]:
        action, phi = integer_endomorphism_system(a, b)
        ref = epk_cocycle(a, b)
        assert action.tau == ref.action.tau and phi.xi == ref.xi


def test_katsura_blocks():
    E = Graph.from_edges(["v", "w"], [("e0", "v", "v"), ("e1", "v", "v"), ("f", "v", "w"),
                                      ("g0", "w", "w"), ("g1", "w", "w"), ("g2", "w", "w")])
    s = katsura_system(E, {("v", "v"): 1, ("w", "w"): 2})
    assert validate_cocycle(s.action, s.cocycle, strong=True).valid
    assert s.cocycle.value(1, E.edge_index("f")) == 0
    assert s.cocycle.value(3, E.edge_index("g0")) == 2


def test_dynamical_graph_constraint():
    sys_, rep = dynamical_system_graph([1, 0], [1, 0], [1, 1])
    assert rep.ok
    _, rep = dynamical_system_graph([1, 0], [1, 0], [2, 1])
    assert not rep.ok and rep.violations[0]["point"] == "0"
    with pytest.raises(ConstructionError):
        dynamical_system_graph([1, 2, 0], [1, 0, 2], [1, 1, 1])


def test_admissible_values():
    assert admissible_generating_value(1, 0)
    assert not admissible_generating_value(2, 0)
    assert admissible_generating_value(4, 3) and not admissible_generating_value(3, 3)


def test_rotation_example_and_scan():
    s, rep = rotation_commuting_system(3, 1, 1, 0)
    assert rep.ok
    found = scan_commuting_cocycles(2, 3)
    assert found and all((x - 1) % 2 == 0 for xi in found for x in xi)


def test_tree_lift_of_odometer_fails_ct2():
    phi = epk_cocycle(2, 1)
    lift = tree_system(phi.action, phi, 2)
    assert not lift.valid and lift.ct2_violations


def test_zappa_szep_on_strings():
    rep = zappa_szep_product(z2_strings_system(), 1)
    assert rep.associativity_failures == [] and rep.left_neutral_ok
    assert rep.defined_products > 0
