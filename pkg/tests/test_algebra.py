import random

import pytest
from hypothesis import given, settings, strategies as st

from epalg.algebra import (AlgebraError, BElement, axiom_failures, axiom_suite, b_adjoint,
                           b_basis, b_multiply, chi, coeff, cohomology_iso,
                           cohomology_iso_failures, delta, ep_isometry_check, inner_product,
                           katsura_check, katsura_ideal_report, left_action, random_b, random_y,
                           right_action, unit_of, y_basis)
from epalg.cocycle import FiniteAction, GraphAction, System, TableCocycle, action_from_function
from epalg.cohomology import CohomologyWitness, apply_witness
from epalg.constructions import epk_system, z2_strings_system
from epalg.graph import Graph
from epalg.group import Cyclic


def _broken_system():
    """Z_3 rotating three loops at one vertex, with a table that breaks the
    cocycle identity at g = 2."""
    G = Cyclic(3)
    E = Graph.from_edges(["v"], [("0", "v", "v"), ("1", "v", "v"), ("2", "v", "v")])
    ea = FiniteAction.from_generators(G, 3, {1: (1, 2, 0)}, E.edges)
    va = action_from_function(G, 1, lambda g, v: v, ["v"])
    table = {0: (0, 0, 0), 1: (1, 2, 0), 2: (0, 0, 0)}
    return System(E, GraphAction(G, E, va, ea), TableCocycle(ea, G, table), "broken")


def test_b_product_and_unit():
    s = z2_strings_system()
    # vertex 0 is moved by 1, omega is fixed
    assert b_multiply(s, delta(1, 1), delta(0, 0)) == delta(1, 1)
    assert b_multiply(s, delta(0, 1), delta(0, 0)) == BElement()
    one = unit_of(s)
    for b in b_basis(s, 1):
        assert b_multiply(s, one, b) == b == b_multiply(s, b, one)


def test_adjoint_of_delta():
    s = z2_strings_system()
    assert b_adjoint(s, delta(0, 1, 2 + 3j)) == delta(1, 1, 2 - 3j)


def test_left_action_uses_cocycle():
    s = epk_system(2, 1)
    # u chi(1, 0) = chi(0, phi(1, 1)) = chi(0, 1)
    assert left_action(s, delta(0, 1), chi(1, 0)) == chi(0, 1)


def test_right_action_and_inner_product():
    s = epk_system(2, 1)
    assert right_action(s, chi(0, 2), delta(0, -1)) == chi(0, 1)
    assert inner_product(s, chi(0, 2), chi(0, 5)) == delta(0, 3)
    assert inner_product(s, chi(0, 2), chi(1, 5)) == BElement()


def test_mixed_types_rejected():
    with pytest.raises(AlgebraError):
        delta(0, 0) + chi(0, 0)


def test_coefficients_are_gaussian_rationals():
    c = coeff(1 + 2j)
    assert c * c == coeff(-3 + 4j)


@pytest.mark.parametrize("system", [epk_system(2, 1), epk_system(3, -1), z2_strings_system()],
                         ids=lambda s: s.name)
def test_axiom_suite_small(system):
    rep = axiom_suite(system, trials=40, seed=7, radius=3)
    assert rep["pass"], rep["failures"]


def test_broken_cocycle_fails_axioms():
    rep = axiom_suite(_broken_system(), trials=40, seed=7, radius=2)
    assert not rep["pass"]
    assert "left_module" in rep["failures"]


def test_katsura_and_isometry():
    for s in (epk_system(2, 1), z2_strings_system()):
        basis = y_basis(s, 2)
        for v in range(s.graph.num_vertices):
            for g in (s.group.identity_value, s.group.generators[0]):
                assert katsura_check(s, v, g, basis) == []
        assert ep_isometry_check(s, 2) == []


def test_katsura_ideal_report_sources():
    rep = katsura_ideal_report(z2_strings_system())
    assert rep["sources"] == ["omega"] and not rep["ideal_is_B"]
    assert katsura_ideal_report(epk_system(2, 1))["ideal_is_B"]


def test_cohomology_iso_passes():
    s = epk_system(3, 2)
    psi = CohomologyWitness(s.group, (2, -1, 4), "graph-edges")
    assert cohomology_iso_failures(s, psi, radius=2) == []


def test_wrong_iso_fails():
    s = epk_system(3, 2)
    psi = CohomologyWitness(s.group, (2, -1, 4), "graph-edges")
    other = CohomologyWitness(s.group, (0, 0, 1), "graph-edges")
    twisted = System(s.graph, s.action, apply_witness(s.cocycle, other, s.action))
    Phi = cohomology_iso(s, psi)
    bad = [(b, x) for x in y_basis(s, 1) for b in b_basis(s, 1)
           if Phi(left_action(s, b, x)) != left_action(twisted, b, Phi(x))]
    assert bad


def test_iso_needs_cochain_condition():
    # Z_2 swapping loops at u and v: psi(e) = 1 moves s(e)
    G = Cyclic(2)
    E = Graph.from_edges(["u", "v"], [("e", "u", "u"), ("f", "v", "v")])
    va = FiniteAction.from_generators(G, 2, {1: (1, 0)}, E.vertices)
    ea = FiniteAction.from_generators(G, 2, {1: (1, 0)}, E.edges)
    s = System(E, GraphAction(G, E, va, ea), TableCocycle.from_function(ea, G, lambda g, x: g))
    psi = CohomologyWitness(G, (1, 0), "graph-edges")
    with pytest.raises(AlgebraError):
        cohomology_iso(s, psi)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_random_axioms_epk(seed):
    s = epk_system(2, 1)
    rng = random.Random(seed)
    x, y, z = (random_b(s, rng, 3) for _ in range(3))
    xi, eta = random_y(s, rng, 3), random_y(s, rng, 3)
    assert axiom_failures(s, x, y, z, xi, eta, coeff(2 - 1j)) == []
