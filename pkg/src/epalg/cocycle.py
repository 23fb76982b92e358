"""Group actions on finite sets and graphs, cocycles, and their validation.

Points of a finite set are the indices ``0..n-1``; ``labels`` carries the
human-readable names (letters, words, paths).  Group elements are raw values
of the owning :class:`~epalg.group.Group`.

Three representations of an action/cocycle pair are supported:

* finite ``G``: full tables (``FiniteAction``, ``TableCocycle``);
* ``G = Z``: the permutation ``tau`` of the generator and the generating
  function ``xi(x) = phi(1, x)`` (``IntegerAction``, ``GeneratingCocycle``);
* any other group: Python callables checked on a finite ball
  (``FunctionAction``, ``FunctionCocycle``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

from .graph import Graph, Path, paths_up_to
from .group import Group, GroupElement, Integers

DEFAULT_RADIUS = 3


class ActionError(ValueError):
    pass


def group_sample(group: Group, radius: int = DEFAULT_RADIUS) -> list:
    return group.elements() if group.is_finite else group.ball(radius)


# -- set actions ---------------------------------------------------------------

class SetAction:
    group: Group
    size: int
    labels: tuple

    def act(self, g, x):
        raise NotImplementedError

    def points(self) -> Iterable:
        return range(self.size)

    def index_of(self, label) -> int:
        index = self.__dict__.get("_index")
        if index is None:
            index = self._index = {lab: i for i, lab in enumerate(self.labels)}
        try:
            return index[label]
        except KeyError:
            raise ActionError(f"{label!r} is not a point of this action") from None


def _default_labels(n: int) -> tuple:
    return tuple(range(n))


class FiniteAction(SetAction):
    """Action of a finite group stored as one permutation per element."""

    def __init__(self, group: Group, perms: dict, labels: Sequence | None = None):
        if not group.is_finite:
            raise ActionError("FiniteAction needs a finite group")
        self.group = group
        self.perms = {g: tuple(p) for g, p in perms.items()}
        sizes = {len(p) for p in self.perms.values()}
        if len(sizes) > 1:
            raise ActionError("permutations of different sizes")
        self.size = sizes.pop() if sizes else 0
        self.labels = tuple(labels) if labels is not None else _default_labels(self.size)
        missing = [g for g in group.elements() if g not in self.perms]
        if missing:
            raise ActionError(f"no permutation given for {group.format(missing[0])}")

    @classmethod
    def from_generators(cls, group: Group, size: int, images: dict,
                        labels: Sequence | None = None) -> "FiniteAction":
        """Extend permutations given for generating elements to the group."""
        perms = {group.identity_value: tuple(range(size))}
        frontier = [group.identity_value]
        while frontier:
            nxt = []
            for a in frontier:
                for g, pg in images.items():
                    c = group.op(g, a)
                    pc = tuple(pg[i] for i in perms[a])
                    if c in perms:
                        if perms[c] != pc:
                            raise ActionError("generator images do not define an action "
                                              f"(conflict at {group.format(c)})")
                    else:
                        perms[c] = pc
                        nxt.append(c)
            frontier = nxt
        if len(perms) != len(group.elements()):
            raise ActionError("the given elements do not generate the group")
        return cls(group, perms, labels)

    def act(self, g, x):
        return self.perms[g][x]


class IntegerAction(SetAction):
    """Action of Z generated by the permutation ``tau``."""

    def __init__(self, tau: Sequence[int], labels: Sequence | None = None):
        self.group = Integers()
        self.tau = tuple(tau)
        self.size = len(self.tau)
        self.labels = tuple(labels) if labels is not None else _default_labels(self.size)
        if sorted(self.tau) != list(range(self.size)):
            raise ActionError("the generator must act by a bijection")
        self.cycles: list[tuple] = []
        self.position: list[tuple[int, int]] = [(0, 0)] * self.size
        seen = [False] * self.size
        for start in range(self.size):
            if seen[start]:
                continue
            cyc = []
            x = start
            while not seen[x]:
                seen[x] = True
                self.position[x] = (len(self.cycles), len(cyc))
                cyc.append(x)
                x = self.tau[x]
            self.cycles.append(tuple(cyc))

    def act(self, n, x):
        cid, pos = self.position[x]
        cyc = self.cycles[cid]
        return cyc[(pos + n) % len(cyc)]

    def orbit(self, x) -> tuple:
        cid, pos = self.position[x]
        cyc = self.cycles[cid]
        return cyc[pos:] + cyc[:pos]


class FunctionAction(SetAction):
    """Action given by a callable, checked on a finite ball of the group."""

    def __init__(self, group: Group, size: int, fn: Callable, labels: Sequence | None = None):
        self.group = group
        self.size = size
        self.fn = fn
        self.labels = tuple(labels) if labels is not None else _default_labels(size)

    def act(self, g, x):
        return self.fn(g, x)


class InducedProductAction(SetAction):
    """``g.(x, t) = (g x, phi(g, x) t)`` on ``S x T``; points are pairs."""

    def __init__(self, cocycle: "Cocycle", target: Group | None = None,
                 radius: int = DEFAULT_RADIUS):
        self.cocycle = cocycle
        self.group = cocycle.action.group
        self.target = target or cocycle.target
        if self.target != cocycle.target:
            raise ActionError("target group does not match the cocycle")
        self.radius = radius
        self.labels = ()

    def act(self, g, p):
        x, t = p
        return (self.cocycle.action.act(g, x),
                self.target.op(self.cocycle.value(g, x), t))

    def points(self):
        ts = group_sample(self.target, self.radius)
        return [(x, t) for x in self.cocycle.action.points() for t in ts]


def action_from_function(group: Group, size: int, fn: Callable,
                         labels: Sequence | None = None) -> SetAction:
    """Pick the natural representation for an action given pointwise."""
    if group.is_finite:
        return FiniteAction(group, {g: [fn(g, x) for x in range(size)]
                                    for g in group.elements()}, labels)
    if isinstance(group, Integers):
        return IntegerAction([fn(1, x) for x in range(size)], labels)
    return FunctionAction(group, size, fn, labels)


def induced_product_action(cocycle: "Cocycle", target: Group | None = None,
                           radius: int = DEFAULT_RADIUS) -> InducedProductAction:
    return InducedProductAction(cocycle, target, radius)


def validate_action(action: SetAction, radius: int = DEFAULT_RADIUS) -> list[dict]:
    """Violations of the action axioms (exhaustive for finite groups, on a
    ball of the group otherwise; Z-actions are bijective by construction)."""
    G = action.group
    e = G.identity_value
    out = []
    pts = list(action.points())
    for x in pts:
        if action.act(e, x) != x:
            out.append({"kind": "identity", "point": x})
    if isinstance(action, IntegerAction):
        return out
    sample = group_sample(G, radius)
    finite_set = not isinstance(action, InducedProductAction)
    for g in sample:
        if finite_set and sorted(action.act(g, x) for x in pts) != pts:
            out.append({"kind": "bijective", "g": G.format(g)})
        for h in sample:
            gh = G.op(g, h)
            for x in pts:
                if action.act(gh, x) != action.act(g, action.act(h, x)):
                    out.append({"kind": "compatibility", "g": G.format(g),
                                "h": G.format(h), "point": _fmt_point(action, x)})
    return out


def _fmt_point(action: SetAction, x):
    if isinstance(action, InducedProductAction):
        return [str(x[0]), action.target.format(x[1])]
    return str(action.labels[x]) if action.labels else str(x)


# -- graph actions -------------------------------------------------------------

@dataclass(frozen=True)
class GraphAction:
    group: Group
    graph: Graph
    vertex_action: SetAction
    edge_action: SetAction

    def __post_init__(self):
        if self.vertex_action.group != self.group or self.edge_action.group != self.group:
            raise ActionError("vertex and edge actions must be by the same group")
        if self.vertex_action.size != self.graph.num_vertices:
            raise ActionError("vertex action has the wrong number of points")
        if self.edge_action.size != self.graph.num_edges:
            raise ActionError("edge action has the wrong number of points")

    def act_vertex(self, g, v):
        return self.vertex_action.act(g, v)

    def act_edge(self, g, e):
        return self.edge_action.act(g, e)

    def automorphism_violations(self, radius: int = DEFAULT_RADIUS) -> list[dict]:
        G, E = self.group, self.graph
        gens = _checked_elements(G, self.edge_action, radius)
        out = []
        for g in gens:
            for e in range(E.num_edges):
                ge = self.act_edge(g, e)
                if E.range[ge] != self.act_vertex(g, E.range[e]):
                    out.append({"kind": "range", "g": G.format(g), "edge": E.edges[e]})
                if E.source[ge] != self.act_vertex(g, E.source[e]):
                    out.append({"kind": "source", "g": G.format(g), "edge": E.edges[e]})
        return out


def _checked_elements(G: Group, action: SetAction, radius: int) -> list:
    # For Z it suffices to check the generator; the rest follows by induction.
    if isinstance(action, IntegerAction):
        return [1]
    return group_sample(G, radius)


def fixes_sources(action: GraphAction) -> bool:
    E = action.graph
    return all(action.act_vertex(g, E.source[e]) == E.source[e]
               for g in action.group.generators for e in range(E.num_edges))


# -- cocycles ------------------------------------------------------------------

class Cocycle:
    """``phi: G x S -> T`` over ``action`` (a SetAction on S)."""

    action: SetAction
    target: Group
    kind: str = "abstract"

    @property
    def group(self) -> Group:
        return self.action.group

    def value(self, g, x):
        raise NotImplementedError


class TableCocycle(Cocycle):
    kind = "table"

    def __init__(self, action: SetAction, target: Group, table: dict):
        if not action.group.is_finite:
            raise ActionError("full cocycle tables are only supported for finite groups")
        self.action = action
        self.target = target
        self.table = {g: tuple(vals) for g, vals in table.items()}
        for g in action.group.elements():
            if g not in self.table or len(self.table[g]) != action.size:
                raise ActionError(f"cocycle table incomplete at {action.group.format(g)}")

    @classmethod
    def from_function(cls, action: SetAction, target: Group, fn: Callable) -> "TableCocycle":
        return cls(action, target, {g: tuple(fn(g, x) for x in action.points())
                                    for g in action.group.elements()})

    @classmethod
    def from_generators(cls, action: SetAction, target: Group, images: dict) -> "TableCocycle":
        """Extend values on generating elements by the cocycle identity
        ``phi(gh, x) = phi(g, hx) phi(h, x)``."""
        G = action.group
        n = action.size
        table = {G.identity_value: (target.identity_value,) * n}
        frontier = [G.identity_value]
        while frontier:
            nxt = []
            for h in frontier:
                for g, vals in images.items():
                    c = G.op(g, h)
                    row = tuple(target.op(vals[action.act(h, x)], table[h][x]) for x in range(n))
                    if c in table:
                        if table[c] != row:
                            raise ActionError("generator values do not define a cocycle "
                                              f"(conflict at {G.format(c)})")
                    else:
                        table[c] = row
                        nxt.append(c)
            frontier = nxt
        return cls(action, target, table)

    def value(self, g, x):
        return self.table[g][x]


class GeneratingCocycle(Cocycle):
    """Cocycle for Z determined by ``xi(x) = phi(1, x)``.

    ``phi(n, x) = xi(tau^{n-1} x) ... xi(x)`` for ``n > 0``, ``phi(0, x) = 1``
    and ``phi(-n, x) = phi(n, tau^{-n} x)^{-1}``.  Evaluation uses one table
    of prefix products per cycle of ``tau``.
    """

    kind = "generating"

    def __init__(self, action: IntegerAction, target: Group, xi: Sequence):
        if not isinstance(action, IntegerAction):
            raise ActionError("generating functions need an action of Z")
        self.action = action
        self.target = target
        self.xi = tuple(xi)
        if len(self.xi) != action.size:
            raise ActionError("generating function must be defined on every point")
        for v in self.xi:
            if not target.contains(v):
                raise ActionError(f"{v!r} is not an element of {target.describe()}")
        self._prefix = []
        for cyc in action.cycles:
            P = [target.identity_value]
            for x in cyc:
                P.append(target.op(self.xi[x], P[-1]))
            self._prefix.append(P)

    def _from_base(self, cid: int, m: int):
        """``phi(m, b)`` for the base point ``b`` of cycle ``cid``, ``m >= 0``."""
        P = self._prefix[cid]
        q, j = divmod(m, len(P) - 1)
        return self.target.op(P[j], self.target.power(P[-1], q))

    def value(self, n, x):
        T = self.target
        if n < 0:
            return T.inv(self.value(-n, self.action.act(n, x)))
        cid, pos = self.action.position[x]
        return T.op(self._from_base(cid, n + pos), T.inv(self._prefix[cid][pos]))

    def cycle_product(self, x):
        """``phi(|orbit|, x)``, the product of ``xi`` around the orbit of x."""
        cid, pos = self.action.position[x]
        return self.value(len(self.action.cycles[cid]), x)


class FunctionCocycle(Cocycle):
    kind = "function"

    def __init__(self, action: SetAction, target: Group, fn: Callable):
        self.action = action
        self.target = target
        self.fn = fn

    def value(self, g, x):
        return self.fn(g, x)


def materialize(action: SetAction, target: Group, fn: Callable) -> Cocycle:
    """Pick the natural representation for a cocycle given pointwise."""
    if action.group.is_finite:
        return TableCocycle.from_function(action, target, fn)
    if isinstance(action, IntegerAction):
        return GeneratingCocycle(action, target, [fn(1, x) for x in action.points()])
    return FunctionCocycle(action, target, fn)


def evaluate(cocycle: Cocycle, g, x) -> GroupElement:
    """``phi(g, x)`` with ``g`` a GroupElement or raw value; ``x`` an index or
    label of the acted-on set."""
    gv = cocycle.group.coerce(g)
    if not (isinstance(x, int) and 0 <= x < cocycle.action.size):
        x = cocycle.action.index_of(x)
    return GroupElement(cocycle.target, cocycle.value(gv, x))


# -- validation ----------------------------------------------------------------

@dataclass
class ValidationReport:
    valid: bool
    scope: str
    violations: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"valid": self.valid, "scope": self.scope, "violations": self.violations}


@dataclass(frozen=True)
class System:
    """A validated-on-demand triple ``(E, G, phi)``."""

    graph: Graph
    action: GraphAction
    cocycle: Cocycle
    name: str = ""

    @property
    def group(self) -> Group:
        return self.action.group

    def __post_init__(self):
        if self.cocycle.action is not self.action.edge_action:
            raise ActionError("the cocycle must be defined over the edge action")
        if self.cocycle.target != self.action.group:
            raise ActionError("graph cocycles take values in the acting group")


def validate_cocycle(action, cocycle: Cocycle, strong: bool = False,
                     radius: int = DEFAULT_RADIUS) -> ValidationReport:
    """Check the action axioms, the cocycle identity and, for graph actions,
    the vertex condition ``phi(g, e) s(e) = g s(e)`` (all vertices when
    ``strong``)."""
    graph_action = action if isinstance(action, GraphAction) else None
    set_action = graph_action.edge_action if graph_action else action
    if cocycle.action is not set_action:
        raise ActionError("cocycle is defined over a different action")
    G, T = set_action.group, cocycle.target
    violations: list = []
    if graph_action:
        violations += validate_action(graph_action.vertex_action, radius)
        violations += graph_action.automorphism_violations(radius)
    violations += validate_action(set_action, radius)

    if isinstance(cocycle, GeneratingCocycle):
        scope = "structural (Z generating function)"
    else:
        sample = group_sample(G, radius)
        scope = "exhaustive" if G.is_finite else f"ball of radius {radius}"
        for g in sample:
            for h in sample:
                gh = G.op(g, h)
                for x in set_action.points():
                    lhs = cocycle.value(gh, x)
                    rhs = T.op(cocycle.value(g, set_action.act(h, x)), cocycle.value(h, x))
                    if lhs != rhs:
                        violations.append({"kind": "cocycle_identity", "g": G.format(g),
                                           "h": G.format(h),
                                           "point": _fmt_point(set_action, x)})

    if graph_action:
        if T != G:
            violations.append({"kind": "target", "detail": "graph cocycles take values in G"})
        else:
            violations += _vertex_violations(graph_action, cocycle, strong, radius)
    return ValidationReport(not violations, scope, violations)


def _vertex_violations(A: GraphAction, cocycle: Cocycle, strong: bool, radius: int) -> list:
    G, E = A.group, A.graph
    out = []
    for g in _checked_elements(G, A.edge_action, radius):
        for e in range(E.num_edges):
            k = cocycle.value(g, e)
            s = E.source[e]
            if A.act_vertex(k, s) != A.act_vertex(g, s):
                out.append({"kind": "vertex_condition", "g": G.format(g), "edge": E.edges[e]})
            if strong:
                for v in range(E.num_vertices):
                    if v != s and A.act_vertex(k, v) != A.act_vertex(g, v):
                        out.append({"kind": "strong_vertex_condition", "g": G.format(g),
                                    "edge": E.edges[e], "vertex": E.vertices[v]})
    return out


# -- self-similar extension ----------------------------------------------------

def ss1_step(action: SetAction, cocycle: Cocycle, g, word: Sequence):
    """Apply ``g`` to a word letter by letter:
    ``g.(x w) = (g.x)(phi(g, x).w)``; returns ``(g.word, phi(g, word))``."""
    out = []
    for x in word:
        out.append(action.act(g, x))
        g = cocycle.value(g, x)
    return tuple(out), g


def _require_self_action(cocycle: Cocycle) -> None:
    if cocycle.target != cocycle.action.group:
        raise ActionError("the self-similar extension needs a G-valued cocycle")


def _extend(group: Group, labels: list, act: Callable):
    """Materialize an extension given ``act(g, i) -> (j, phi)`` on indices."""
    action = action_from_function(group, len(labels), lambda g, i: act(g, i)[0], labels)
    return action, materialize(action, group, lambda g, i: act(g, i)[1])


def words_up_to(size: int, length: int) -> list[tuple]:
    words: list[tuple] = [()]
    layer: list[tuple] = [()]
    for _ in range(length):
        layer = [w + (x,) for w in layer for x in range(size)]
        words.extend(layer)
    return words


def extend_to_words(action: SetAction, cocycle: Cocycle, length: int = 6):
    """Extend ``(action, cocycle)`` from S to ``S^{<=length}`` by SS1.  The
    empty word is fixed and ``phi(g, ()) = g``.  Labels are letter-index
    tuples."""
    _require_self_action(cocycle)
    words = words_up_to(action.size, length)
    index = {w: i for i, w in enumerate(words)}

    def act(g, i):
        w, k = ss1_step(action, cocycle, g, words[i])
        return index[w], k

    return _extend(action.group, words, act)


def extend_to_paths(system: System, length: int = 6):
    """Extend a graph cocycle to the paths of length ``<= length`` (vertices
    included as length-0 paths, with ``phi(g, v) = g``).  Labels are Paths."""
    A, E, phi, G = system.action, system.graph, system.cocycle, system.group
    paths = paths_up_to(E, length)
    index = {p: i for i, p in enumerate(paths)}

    def act(g, i):
        p = paths[i]
        if not p.edges:
            return index[Path((), A.act_vertex(g, p.source))], g
        edges, k = ss1_step(A.edge_action, phi, g, p.edges)
        q = Path(edges, E.source[edges[-1]])
        if q not in index:
            raise ActionError(f"{G.format(g)} maps the path {E.path_name(p)} to a non-path; "
                              "the vertex condition fails")
        return index[q], k

    return _extend(A.group, paths, act)


def act_on_path(system: System, g, path: Path):
    """``(g.path, phi(g, path))`` computed letter by letter."""
    if not path.edges:
        return Path((), system.action.act_vertex(g, path.source)), g
    edges, k = ss1_step(system.action.edge_action, system.cocycle, g, path.edges)
    return Path(edges, system.graph.source[edges[-1]]), k


def path_extension_violations(system: System, length: int = 4,
                              radius: int = DEFAULT_RADIUS) -> list[dict]:
    """Check the path extension against SS1 letter by letter and the
    cocycle identity on every path of length ``<= length`` for ``g, h`` in
    the sample."""
    A, E, G = system.action, system.graph, system.group
    pa, pc = extend_to_paths(system, length)
    paths = list(pa.labels)
    index = {q: i for i, q in enumerate(paths)}
    sample = group_sample(G, radius)
    out = []
    for i, p in enumerate(paths):
        for g in sample:
            j, k = pa.act(g, i), pc.value(g, i)
            if p.edges:
                e, rest = p.edges[0], Path(p.edges[1:], p.source)
                ge, ke = A.act_edge(g, e), system.cocycle.value(g, e)
                r = index[rest]
                tail, kt = paths[pa.act(ke, r)], pc.value(ke, r)
                if paths[j] != Path((ge,) + tail.edges, tail.source) or k != kt:
                    out.append({"kind": "SS1", "g": G.format(g), "path": E.path_name(p)})
            for h in sample:
                lhs = pc.value(G.op(g, h), i)
                rhs = G.op(pc.value(g, pa.act(h, i)), pc.value(h, i))
                if lhs != rhs or pa.act(G.op(g, h), i) != pa.act(g, pa.act(h, i)):
                    out.append({"kind": "cocycle_identity", "g": G.format(g), "h": G.format(h),
                                "path": E.path_name(p)})
    return out
