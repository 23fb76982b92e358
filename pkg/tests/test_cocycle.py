import pytest
from hypothesis import given, strategies as st

from epalg.cocycle import (ActionError, FiniteAction, GeneratingCocycle, GraphAction,
                           IntegerAction, System, TableCocycle, act_on_path, extend_to_paths,
                           extend_to_words, fixes_sources, path_extension_violations,
                           ss1_step, validate_cocycle)
from epalg.constructions import epk_cocycle, epk_system, z2_strings_system
from epalg.graph import Graph, Path
from epalg.group import Cyclic, Integers


def _swap_system(constant: bool):
    """Z_2 swapping two loops at two vertices; the cocycle is the identity
    element everywhere (``constant``) or the translation cocycle."""
    G = Cyclic(2)
    E = Graph.from_edges(["u", "v"], [("e", "u", "u"), ("f", "v", "v")])
    va = FiniteAction.from_generators(G, 2, {1: (1, 0)}, E.vertices)
    ea = FiniteAction.from_generators(G, 2, {1: (1, 0)}, E.edges)
    phi = TableCocycle.from_function(ea, G, (lambda g, x: 0) if constant else (lambda g, x: g))
    return System(E, GraphAction(G, E, va, ea), phi)


def test_epk_is_valid():
    s = epk_system(3, 2)
    rep = validate_cocycle(s.action, s.cocycle)
    assert rep.valid and rep.violations == []


def test_generating_cocycle_identity():
    phi = epk_cocycle(3, 4)
    A = phi.action
    for m in range(-6, 7):
        for n in range(-6, 7):
            for x in range(3):
                assert phi.value(m + n, x) == phi.value(m, A.act(n, x)) + phi.value(n, x)


def test_broken_table_cocycle_fails():
    G = Cyclic(3)
    A = FiniteAction.from_generators(G, 3, {1: (1, 2, 0)})
    with pytest.raises(ActionError):
        TableCocycle.from_generators(A, G, {1: (0, 0, 1)})
    good = TableCocycle.from_generators(A, G, {1: (1, 2, 0)})
    assert validate_cocycle(A, good).valid
    table = dict(good.table)
    table[2] = (1, 1, 1)
    bad = TableCocycle(A, G, table)
    rep = validate_cocycle(A, bad)
    assert not rep.valid
    assert {v["kind"] for v in rep.violations} == {"cocycle_identity"}


def test_inconsistent_generator_values_rejected():
    G = Cyclic(2)
    A = FiniteAction.from_generators(G, 1, {1: (0,)})
    TableCocycle.from_generators(A, G, {1: (1,)})
    # 1 + 1 = 0 holds in Z_2 but not in Z_3
    with pytest.raises(ActionError):
        TableCocycle.from_generators(A, Cyclic(3), {1: (1,)})


def test_constant_cocycle_violates_vertex_condition():
    s = _swap_system(constant=True)
    assert not fixes_sources(s.action)
    rep = validate_cocycle(s.action, s.cocycle)
    assert not rep.valid
    assert rep.violations[0]["kind"] == "vertex_condition"
    assert rep.violations[0]["g"] == "1"


def test_translation_cocycle_satisfies_vertex_condition():
    s = _swap_system(constant=False)
    assert validate_cocycle(s.action, s.cocycle, strong=True).valid


def test_strong_condition_is_stricter():
    s = z2_strings_system()
    assert validate_cocycle(s.action, s.cocycle).valid
    assert validate_cocycle(s.action, s.cocycle, strong=True).valid
    # epk(2,1) on one vertex: strong and weak agree trivially
    e = epk_system(2, 1)
    assert validate_cocycle(e.action, e.cocycle, strong=True).valid


def test_integer_action_rejects_non_bijection():
    with pytest.raises(ActionError):
        IntegerAction((0, 0))


def test_generating_values_must_lie_in_target():
    with pytest.raises(ActionError):
        GeneratingCocycle(IntegerAction((0,)), Integers(), ("x",))


def test_ss1_odometer_carry():
    phi = epk_cocycle(2, 1)
    assert ss1_step(phi.action, phi, 1, (1, 1, 0)) == ((0, 0, 1), 0)
    assert ss1_step(phi.action, phi, 1, (1, 1, 1)) == ((0, 0, 0), 1)


def test_word_and_path_extensions_agree():
    s = epk_system(2, 1)
    wa, wc = extend_to_words(s.action.edge_action, s.cocycle, 3)
    pa, pc = extend_to_paths(s, 3)
    for i, p in enumerate(pa.labels):
        w = tuple(p.edges)
        j = wa.labels.index(w)
        for g in range(-3, 4):
            assert pa.labels[pa.act(g, i)].edges == wa.labels[wa.act(g, j)]
            assert pc.value(g, i) == wc.value(g, j)


def test_path_extension_violations_empty():
    assert path_extension_violations(epk_system(3, 2), length=3, radius=2) == []
    assert path_extension_violations(z2_strings_system(), length=2) == []


def test_act_on_vertex_path():
    s = z2_strings_system()
    q, k = act_on_path(s, 1, Path((), 0))
    assert q == Path((), 1) and k == 1


@given(st.integers(1, 6), st.integers(-10, 10), st.integers(-8, 8), st.integers(-8, 8))
def test_epk_cocycle_identity_random(a, b, m, n):
    phi = epk_cocycle(a, b)
    for x in range(a):
        assert phi.value(m + n, x) == phi.value(m, phi.action.act(n, x)) + phi.value(n, x)
