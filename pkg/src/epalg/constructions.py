"""Builders for example systems: EPK systems and their orbit decomposition,
bouquets, string graphs, sink-free graphs, rooted trees, endomorphism pairs,
pasting, the dynamical graphs ``E_sigma``, commuting actions, and the
Zappa-Szep partial product on paths x G.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import gcd
from typing import Callable, Sequence

from .cocycle import (Cocycle, FiniteAction, GeneratingCocycle,
                      GraphAction, IntegerAction, SetAction, System, action_from_function,
                      act_on_path, extend_to_words, group_sample, materialize)
from .cohomology import (CohomologyWitness, transitive_conjugacy, transport,
                         verify_cohomologous)
from .graph import Graph, Path, paths_up_to
from .group import DirectProduct, Group, Integers

OMEGA = "omega"


class ConstructionError(ValueError):
    pass


# -- graphs ------------------------------------------------------------------------

def _names(S) -> list[str]:
    names = [str(x) for x in (range(S) if isinstance(S, int) else S)]
    if not names:
        raise ConstructionError("the letter set must be nonempty")
    return names


def bouquet(S, vertex: str = "v") -> Graph:
    """One vertex with the letters of ``S`` as loops (``S`` an int or names)."""
    return Graph.from_edges([vertex], [(x, vertex, vertex) for x in _names(S)])


def strings_graph(S) -> Graph:
    """Vertices ``S + [omega]``, edges ``S`` with ``r(x) = x``, ``s(x) = omega``."""
    names = _names(S)
    return Graph.from_edges(names + [OMEGA], [(x, x, OMEGA) for x in names])


def general_strings(S, I, rho: Callable[[int], int]) -> Graph:
    """Vertices ``I + [omega]``, edges ``S`` with ``r(x) = rho(x)``, ``s = omega``."""
    names, inames = _names(S), _names(I)
    return Graph.from_edges(inames + [OMEGA],
                            [(x, inames[rho(i)], OMEGA) for i, x in enumerate(names)])


def sink_free_graph(S, T) -> Graph:
    """``K^0 = S + [omega]``, ``K^1 = S x (T + [omega])`` with
    ``r(x, omega) = x``, ``s(x, omega) = omega`` and ``r(x, y) = x = s(x, y)``."""
    names, tnames = _names(S), _names(T)
    edges = []
    for x in names:
        for y in tnames + [OMEGA]:
            edges.append((f"({x},{y})", x, OMEGA if y == OMEGA else x))
    return Graph.from_edges(names + [OMEGA], edges)


def _word_name(names: Sequence[str], w: tuple) -> str:
    return "".join(names[x] for x in w) if w else "()"


def tree_graph(S, length: int) -> Graph:
    """Rooted tree on ``S^{<=length}``: edges ``(w, wx)`` with range ``w`` and
    source ``wx``."""
    names = _names(S)
    if length < 0:
        raise ConstructionError("length must be non-negative")
    from .cocycle import words_up_to
    words = words_up_to(len(names), length)
    vnames = [_word_name(names, w) for w in words]
    if len(set(vnames)) != len(vnames):
        vnames = [".".join(names[x] for x in w) if w else "()" for w in words]
    vindex = {w: vnames[i] for i, w in enumerate(words)}
    edges = [(f"{vindex[w[:-1]]}>{vindex[w]}", vindex[w[:-1]], vindex[w]) for w in words if w]
    return Graph.from_edges(vnames, edges)


# -- EPK systems -------------------------------------------------------------------

@dataclass(frozen=True)
class EpkParameters:
    a: int
    b: int

    def __post_init__(self):
        if self.a < 1:
            raise ConstructionError("a must be positive")

    @property
    def q(self) -> int:
        return self.b // self.a

    @property
    def r(self) -> int:
        return self.b % self.a

    @property
    def c(self) -> int:
        return self.a - self.r

    @property
    def d(self) -> int:
        return gcd(self.a, self.b)

    @property
    def a_prime(self) -> int:
        return self.a // self.d

    @property
    def b_prime(self) -> int:
        return self.b // self.d


def epk_division(a: int, b: int, m: int, k: int) -> tuple[int, int]:
    """``(phi, sigma)`` with ``b m + k = phi a + sigma``, ``0 <= sigma < a``."""
    return divmod(b * m + k, a)


def epk_action(a: int, b: int) -> IntegerAction:
    return IntegerAction([(b + k) % a for k in range(a)])


def epk_generating_function(a: int, b: int) -> tuple[int, ...]:
    p = EpkParameters(a, b)
    return tuple(p.q if k < p.c else p.q + 1 for k in range(a))


def epk_cocycle(a: int, b: int, action: IntegerAction | None = None) -> GeneratingCocycle:
    return GeneratingCocycle(action or epk_action(a, b), Integers(), epk_generating_function(a, b))


def bouquet_system(action: SetAction, cocycle: Cocycle, name: str = "",
                   edge_names: Sequence[str] | None = None) -> System:
    """Regard an S-system as a system on the bouquet with edge set S."""
    names = list(edge_names) if edge_names else [str(x) for x in action.labels]
    E = bouquet(names)
    G = action.group
    vertex_action = action_from_function(G, 1, lambda g, v: v, ["v"])
    return System(E, GraphAction(G, E, vertex_action, action), cocycle, name)


def epk_system(a: int, b: int) -> System:
    """The bouquet on ``Z_a`` with ``sigma_{a,b}`` and ``phi_{a,b}``."""
    action = epk_action(a, b)
    return bouquet_system(action, epk_cocycle(a, b, action), f"epk({a},{b})")


@dataclass
class EpkComponent:
    """One orbit ``i + dZ_a`` of an EPK system and its certified conjugacy with
    ``EPK(a', b')``: ``theta[k] = i + k d`` and ``witness`` verified."""

    orbit: tuple
    theta: tuple
    target: tuple
    witness: CohomologyWitness
    verified: bool

    def to_dict(self) -> dict:
        return {"orbit": list(self.orbit), "theta": list(self.theta),
                "target": {"a": self.target[0], "b": self.target[1]},
                "witness": self.witness.to_dict(), "verified": self.verified}


def restrict_to_orbit(cocycle: GeneratingCocycle, orbit: Sequence[int]) -> GeneratingCocycle:
    """Restriction of a Z-system to an invariant subset (labels are the
    original points)."""
    index = {x: i for i, x in enumerate(orbit)}
    A = cocycle.action
    try:
        action = IntegerAction([index[A.tau[x]] for x in orbit], labels=list(orbit))
    except KeyError:
        raise ConstructionError("the subset is not invariant") from None
    return GeneratingCocycle(action, cocycle.target, [cocycle.xi[x] for x in orbit])


def epk_decompose(a: int, b: int) -> list[EpkComponent]:
    """Split ``EPK(a, b)`` into ``d = gcd(a, b)`` orbits, each certified
    cohomology conjugate to ``EPK(a/d, b/d)`` through ``k -> i + k d``."""
    p = EpkParameters(a, b)
    phi = epk_cocycle(a, b)
    target = epk_cocycle(p.a_prime, p.b_prime)
    out = []
    for i in range(p.d):
        orbit = tuple(range(i, a, p.d))
        restricted = restrict_to_orbit(phi, orbit)
        result = transitive_conjugacy(restricted, target, base=0, base2=0)
        if result is None:
            raise ConstructionError(f"orbit {i} is not conjugate to EPK({p.a_prime},{p.b_prime})")
        theta_idx, psi = result
        theta = tuple(orbit[j] for j in theta_idx)
        verified = (theta == tuple(i + k * p.d for k in range(p.a_prime))
                    and verify_cohomologous(transport(restricted, theta_idx, target.action),
                                            target, psi))
        out.append(EpkComponent(orbit, theta, (p.a_prime, p.b_prime), psi, verified))
    return out


# -- lifts of S-systems -----------------------------------------------------------

def strings_system(action: SetAction, cocycle: Cocycle, name: str = "") -> System:
    """The strings graph over S; ``omega`` is fixed by G."""
    G = action.group
    n = action.size
    E = strings_graph([str(x) for x in action.labels])
    vertex_action = action_from_function(G, n + 1, lambda g, v: v if v == n else action.act(g, v),
                                         list(E.vertices))
    return System(E, GraphAction(G, E, vertex_action, action), cocycle, name)


def translation_strings_system(group: Group) -> System:
    """S = G acting on itself by left translation, cocycle ``(g, x) -> g``."""
    els = group.elements()
    index = {g: i for i, g in enumerate(els)}
    action = FiniteAction(group, {g: [index[group.op(g, h)] for h in els] for g in els},
                          [group.format(h) for h in els])
    cocycle = materialize(action, group, lambda g, x: g)
    return strings_system(action, cocycle, f"strings({group.describe()})")


def general_strings_system(action: SetAction, cocycle: Cocycle, i_action: SetAction,
                           rho: Sequence[int], name: str = "") -> System:
    G = action.group
    for g in group_sample(G):
        for x in range(action.size):
            if rho[action.act(g, x)] != i_action.act(g, rho[x]):
                raise ConstructionError("rho is not equivariant")
    m = i_action.size
    E = general_strings([str(x) for x in action.labels], [str(y) for y in i_action.labels],
                        lambda x: rho[x])
    vertex_action = action_from_function(G, m + 1, lambda g, v: v if v == m else i_action.act(g, v),
                                         list(E.vertices))
    return System(E, GraphAction(G, E, vertex_action, action), cocycle, name)


def sink_free_system(action: SetAction, cocycle: Cocycle, t_action: SetAction,
                     name: str = "") -> System:
    """The graph K with ``phi~(g, (x, omega)) = phi(g, x)`` and
    ``phi~(g, (x, y)) = g``."""
    G = action.group
    n, m = action.size, t_action.size
    E = sink_free_graph([str(x) for x in action.labels], [str(y) for y in t_action.labels])
    width = m + 1  # edge (x, y) has index x * width + y, y == m meaning omega

    def act_edge(g, e):
        x, y = divmod(e, width)
        return action.act(g, x) * width + (y if y == m else t_action.act(g, y))

    vertex_action = action_from_function(G, n + 1, lambda g, v: v if v == n else action.act(g, v),
                                         list(E.vertices))
    edge_action = action_from_function(G, E.num_edges, act_edge, list(E.edges))

    def phi(g, e):
        x, y = divmod(e, width)
        return cocycle.value(g, x) if y == m else g

    return System(E, GraphAction(G, E, vertex_action, edge_action),
                  materialize(edge_action, G, phi), name)


@dataclass
class TreeLift:
    system: System
    ct3: bool
    ct2: bool
    ct3_violations: list = field(default_factory=list)
    ct2_violations: list = field(default_factory=list)

    @property
    def valid(self) -> bool:
        return self.ct2

    def to_dict(self) -> dict:
        return {"CT3": self.ct3, "CT2": self.ct2, "valid_graph_cocycle": self.valid,
                "CT3_violations": self.ct3_violations[:20],
                "CT2_violations": self.ct2_violations[:20]}


def tree_system(action: SetAction, cocycle: Cocycle, length: int) -> TreeLift:
    """Lift to the rooted tree on ``S^{<=length}`` via the word extension and
    report the conditions ``phi(g, x) x = g x`` (CT3) and
    ``phi(g, wx) wx = g wx`` (CT2)."""
    G = action.group
    wa, wc = extend_to_words(action, cocycle, length)
    words = list(wa.labels)
    names = [str(x) for x in action.labels]
    E = tree_graph(names, length)
    edge_words = [w for w in words if w]  # edge (w[:-1], w) in tree_graph order
    eindex = {w: i for i, w in enumerate(edge_words)}
    vertex_action = FiniteAction(G, wa.perms, list(E.vertices)) if G.is_finite else \
        action_from_function(G, len(words), wa.act, list(E.vertices))
    edge_action = action_from_function(
        G, len(edge_words), lambda g, e: eindex[words[wa.act(g, wa.index_of(edge_words[e]))]],
        list(E.edges))
    phi = materialize(edge_action, G, lambda g, e: wc.value(g, wa.index_of(edge_words[e])))
    system = System(E, GraphAction(G, E, vertex_action, edge_action), phi,
                    f"tree(L={length})")

    ct3, ct2 = [], []
    for g in group_sample(G):
        for i, w in enumerate(words):
            if not w:
                continue
            if wa.act(wc.value(g, i), i) != wa.act(g, i):
                entry = {"g": G.format(g), "word": _word_name(names, w)}
                ct2.append(entry)
                if len(w) == 1:
                    ct3.append(entry)
    return TreeLift(system, not ct3, not ct2, ct3, ct2)


# -- endomorphism pairs --------------------------------------------------------------

def endomorphism_system(group: Group, rho_inv: Callable, tau: Callable,
                        reps: Sequence, rep_of: Callable | None = None):
    """Action ``g .' x = s(tau(g) x)`` and cocycle
    ``rho^-1(s(tau(g) x)^-1 tau(g) x)`` on coset representatives ``reps`` of
    ``rho(G)``.  ``rho_inv(h)`` returns the preimage or None when ``h`` is not
    in ``rho(G)``; ``rep_of(g)`` (optional) returns the index of ``s(g)``."""
    G = group
    reps = list(reps)
    if G.identity_value not in reps:
        raise ConstructionError("the representatives must contain the identity")

    def index_of_rep(g) -> int:
        if rep_of is not None:
            return rep_of(g)
        hits = [i for i, x in enumerate(reps) if rho_inv(G.op(G.inv(x), g)) is not None]
        if len(hits) != 1:
            raise ConstructionError(f"{G.format(g)} lies in {len(hits)} of the given cosets")
        return hits[0]

    def act(g, i):
        return index_of_rep(G.op(tau(g), reps[i]))

    def phi(g, i):
        y = G.op(tau(g), reps[i])
        h = rho_inv(G.op(G.inv(reps[index_of_rep(y)]), y))
        if h is None:
            raise ConstructionError("s(g x)^-1 g x is not in the image of rho")
        return h

    labels = [G.format(x) for x in reps]
    action = action_from_function(G, len(reps), act, labels)
    return action, materialize(action, G, phi)


def integer_endomorphism_system(a: int, b: int):
    """``rho(m) = a m``, ``tau(m) = b m`` on ``Z`` with representatives
    ``0..a-1``."""
    return endomorphism_system(Integers(), lambda h: h // a if h % a == 0 else None,
                               lambda m: b * m, list(range(a)), rep_of=lambda g: g % a)


def matrix_endomorphism_system(A: Sequence[Sequence[int]], B: Sequence[Sequence[int]],
                               reps: Sequence[Sequence[int]]):
    """``G = Z^n``, ``rho(m) = A m``, ``tau(m) = B m``."""
    import sympy
    n = len(A)
    G = DirectProduct([Integers()] * n)
    A_inv = sympy.Matrix(A).inv()
    B = [list(row) for row in B]

    def rho_inv(h):
        m = A_inv * sympy.Matrix(h)
        if any(not v.is_integer for v in m):
            return None
        return tuple(int(v) for v in m)

    def tau(m):
        return tuple(sum(B[i][j] * m[j] for j in range(n)) for i in range(n))

    return endomorphism_system(G, rho_inv, tau, [tuple(r) for r in reps])


# -- pasting ------------------------------------------------------------------------

def pasting_construction(graph: Graph, group: Group, blocks: dict, name: str = "") -> System:
    """Paste per-block systems on ``{e : r(e) = v, s(e) = w}``.

    ``blocks[(v, w)] = (edges, action, cocycle)`` where ``edges`` lists the
    block's edge indices in the order of the block action's points.  G acts
    trivially on vertices."""
    owner: dict = {}
    for (v, w), (edges, action, cocycle) in blocks.items():
        if action.group != group or cocycle.action is not action:
            raise ConstructionError(f"block ({v}, {w}) has an inconsistent action or cocycle")
        if len(edges) != action.size:
            raise ConstructionError(f"block ({v}, {w}) has the wrong number of edges")
        for pos, e in enumerate(edges):
            if e in owner:
                raise ConstructionError(f"edge {graph.edges[e]} lies in two blocks")
            if graph.range[e] != v or graph.source[e] != w:
                raise ConstructionError(f"edge {graph.edges[e]} is not in block ({v}, {w})")
            owner[e] = ((v, w), pos)
    if len(owner) != graph.num_edges:
        raise ConstructionError("the blocks do not cover every edge")

    def act(g, e):
        key, pos = owner[e]
        edges, action, _ = blocks[key]
        return edges[action.act(g, pos)]

    def phi(g, e):
        key, pos = owner[e]
        return blocks[key][2].value(g, pos)

    vertex_action = action_from_function(group, graph.num_vertices, lambda g, v: v,
                                         list(graph.vertices))
    edge_action = action_from_function(group, graph.num_edges, act, list(graph.edges))
    return System(graph, GraphAction(group, graph, vertex_action, edge_action),
                  materialize(edge_action, group, phi), name)


def katsura_system(graph: Graph, B: dict, name: str = "") -> System:
    """Paste ``EPK(A(v, w), B(v, w))`` into each nonempty block, with the
    block's edges in index order; missing ``B`` entries default to 0."""
    cells: dict = {}
    for e in range(graph.num_edges):
        cells.setdefault((graph.range[e], graph.source[e]), []).append(e)
    blocks = {}
    for key, edges in cells.items():
        b = B.get(key, B.get((graph.vertices[key[0]], graph.vertices[key[1]]), 0))
        action = epk_action(len(edges), b)
        blocks[key] = (edges, action, epk_cocycle(len(edges), b, action))
    return pasting_construction(graph, Integers(), blocks, name or "katsura")


# -- dynamical graphs and commuting actions ------------------------------------------

def admissible_generating_value(value: int, period: int) -> bool:
    """``value - 1`` lies in the return set ``{k : tau^k x = x}`` of a point of
    the given orbit period; period 0 stands for a free orbit."""
    return value == 1 if period == 0 else (value - 1) % period == 0


@dataclass
class ConstraintReport:
    ok: bool
    violations: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"ok": self.ok, "violations": self.violations}


def dynamical_system_graph(sigma: Sequence[int], tau: Sequence[int], xi: Sequence[int],
                           labels: Sequence | None = None):
    """``E^0 = E^1 = S``, ``s = id``, ``r = sigma``; Z acts by ``tau`` and the
    cocycle has generating function ``xi``.  Returns ``(system, report)``."""
    n = len(sigma)
    if any(sigma[tau[x]] != tau[sigma[x]] for x in range(n)):
        raise ConstructionError("sigma and tau do not commute")
    names = [str(x) for x in (labels or range(n))]
    E = Graph.from_edges(names, [(names[x], names[sigma[x]], names[x]) for x in range(n)])
    vertex_action = IntegerAction(tau, names)
    edge_action = IntegerAction(tau, names)
    system = System(E, GraphAction(Integers(), E, vertex_action, edge_action),
                    GeneratingCocycle(edge_action, Integers(), xi), "E_sigma")
    violations = []
    for x in range(n):
        period = len(edge_action.orbit(x))
        if not admissible_generating_value(xi[x], period):
            violations.append({"point": names[x], "xi": xi[x], "period": period})
    return system, ConstraintReport(not violations, violations)


def commuting_actions_system(h_action: SetAction, g_action: SetAction, phi0: Cocycle,
                             name: str = ""):
    """``E^1 = H x E^0`` with ``r(h, x) = h x``, ``s(h, x) = x``, G acting by
    ``g (h, x) = (h, g x)`` and ``phi(g, (h, x)) = phi0(g, h x)``.  H must be
    finite.  Returns ``(system, report)``; the report lists failures of
    commutation and of ``phi0(g, x) x = g x``."""
    H, G = h_action.group, g_action.group
    if not H.is_finite:
        raise ConstructionError("H must be finite so that E^1 is finite")
    if phi0.action is not g_action or phi0.target != G:
        raise ConstructionError("phi0 must be a G-valued cocycle over the G-action")
    n = g_action.size
    hs = H.elements()
    names = [str(x) for x in g_action.labels]
    edges = [(f"({H.format(h)},{names[x]})", names[h_action.act(h, x)], names[x])
             for h in hs for x in range(n)]
    E = Graph.from_edges(names, edges)
    violations = []
    sample = group_sample(G)
    for g in sample:
        for h in hs:
            for x in range(n):
                if g_action.act(g, h_action.act(h, x)) != h_action.act(h, g_action.act(g, x)):
                    violations.append({"kind": "commute", "g": G.format(g), "h": H.format(h),
                                       "point": names[x]})
        for x in range(n):
            if g_action.act(phi0.value(g, x), x) != g_action.act(g, x):
                violations.append({"kind": "constraint", "g": G.format(g), "point": names[x]})
    edge_action = action_from_function(G, len(edges), lambda g, e: (e // n) * n + g_action.act(g, e % n),
                                       [e[0] for e in edges])
    cocycle = materialize(edge_action, G,
                          lambda g, e: phi0.value(g, h_action.act(hs[e // n], e % n)))
    system = System(E, GraphAction(G, E, g_action, edge_action), cocycle, name or "commuting")
    return system, ConstraintReport(not violations, violations)


def rotation_commuting_system(p: int, k: int, h_order: int, h_step: int = 1):
    """Discrete circle example: ``E^0 = Z_p``, ``G = Z`` rotating by 1 (period
    p), ``H = Z_{h_order}`` rotating by ``h_step`` and ``phi0(m, z) = (1 + kp) m``."""
    from .group import Cyclic
    H = Cyclic(h_order)
    if (h_order * h_step) % p:
        raise ConstructionError("H-rotation must have order dividing |H|")
    h_action = FiniteAction(H, {h: [(z + h * h_step) % p for z in range(p)]
                                for h in H.elements()})
    g_action = IntegerAction([(z + 1) % p for z in range(p)])
    phi0 = GeneratingCocycle(g_action, Integers(), [1 + k * p] * p)
    return commuting_actions_system(h_action, g_action, phi0, f"rotation(p={p},k={k})")


def scan_commuting_cocycles(p: int, bound: int, h_order: int = 1, h_step: int = 0) -> list:
    """Exhaustive scan of generating functions ``Z_p -> [-bound, bound]`` for
    the rotation example, listing those that satisfy the constraint."""
    from .group import Cyclic
    H = Cyclic(h_order)
    h_action = FiniteAction(H, {h: [(z + h * h_step) % p for z in range(p)]
                                for h in H.elements()})
    g_action = IntegerAction([(z + 1) % p for z in range(p)])
    found = []
    for xi in itertools.product(range(-bound, bound + 1), repeat=p):
        phi0 = GeneratingCocycle(g_action, Integers(), xi)
        _, report = commuting_actions_system(h_action, g_action, phi0)
        if report.ok:
            found.append(xi)
    return found


# -- Zappa-Szep partial product -------------------------------------------------------

@dataclass
class ZappaSzepReport:
    elements: int
    defined_products: int
    associativity_checked: int
    associativity_failures: list
    right_cancellation_failures: list
    left_neutral_ok: bool

    def to_dict(self) -> dict:
        return {"elements": self.elements, "defined_products": self.defined_products,
                "associativity_checked": self.associativity_checked,
                "associativity_failures": self.associativity_failures[:20],
                "right_cancellation_failures": self.right_cancellation_failures[:20],
                "left_neutral_ok": self.left_neutral_ok}


def zs_product(system: System, x: tuple, y: tuple):
    """``(w, g)(w', g') = (w (g.w'), phi(g, w') g')`` when
    ``s(w) = r(g.w')``, else None."""
    (w, g), (w2, g2) = x, y
    E, G = system.graph, system.group
    gw2, k = act_on_path(system, g, w2)
    if w.source != E.r(gw2):
        return None
    return (Path(w.edges + gw2.edges, gw2.source), G.op(k, g2))


def zappa_szep_product(system: System, length: int, radius: int = 1) -> ZappaSzepReport:
    """Check the partial product on paths of length ``<= length`` times a
    ball of G: associativity on every defined triple, left neutrality of
    ``(v, 1)``, and right cancellation."""
    G = system.group
    elems = [(p, g) for p in paths_up_to(system.graph, length) for g in group_sample(G, radius)]
    table = {}
    for x in elems:
        for y in elems:
            z = zs_product(system, x, y)
            if z is not None:
                table[(x, y)] = z
    fails, checked = [], 0
    for (x, y), xy in table.items():
        for z in elems:
            yz = table.get((y, z))
            left = zs_product(system, xy, z)
            right = zs_product(system, x, yz) if yz is not None else None
            if left is None and right is None:
                continue
            checked += 1
            if left != right:
                fails.append([_fmt_zs(system, t) for t in (x, y, z)])
    neutral = all(table.get(((Path((), system.graph.r(p)), G.identity_value), (p, g))) == (p, g)
                  for p, g in elems)
    by_right: dict = {}
    for (x, y), xy in table.items():
        by_right.setdefault((y, xy), []).append(x)
    cancel = [[_fmt_zs(system, t) for t in (xs[0], xs[1], y)]
              for (y, _), xs in sorted(by_right.items(), key=lambda kv: repr(kv[0]))
              if len(xs) > 1]
    return ZappaSzepReport(len(elems), len(table), checked, fails, cancel, neutral)


def _fmt_zs(system: System, x) -> str:
    p, g = x
    return f"({system.graph.path_name(p)}, {system.group.format(g)})"


# -- named builders -----------------------------------------------------------------

def o21_system() -> System:
    """``EPK(2, 1)``, whose algebra is generated by ``u s_0 = s_1``, ``u s_1 = s_0 u``."""
    return epk_system(2, 1)


def z2_strings_system() -> System:
    """Strings graph over ``Z_2`` with translation and ``phi(g, x) = g``."""
    from .group import Cyclic
    return translation_strings_system(Cyclic(2))
