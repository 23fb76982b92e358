"""Cohomology of cocycles: witnesses, signatures, the Zimmer correspondence for
transitive actions, canonical representatives over Z_a, and conjugacy
decisions for finite Z-systems.

A witness ``psi`` relates two cocycles by
``phi'(g, x) = psi(g x) phi(g, x) psi(x)^-1``.  For graph cocycles it must
also satisfy the cochain condition ``psi(e) s(e) = s(e)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .cocycle import (DEFAULT_RADIUS, Cocycle, FiniteAction, GeneratingCocycle,
                      GraphAction, IntegerAction, SetAction, fixes_sources, group_sample,
                      materialize)
from .group import Group, Integers, closure


class CohomologyError(ValueError):
    pass


class SearchLimitExceeded(CohomologyError):
    pass


@dataclass(frozen=True)
class CohomologyWitness:
    target: Group
    values: tuple
    domain: str = "set"  # or "graph-edges"

    def __call__(self, x):
        return self.values[x]

    def inverse(self) -> "CohomologyWitness":
        return CohomologyWitness(self.target, tuple(self.target.inv(v) for v in self.values),
                                 self.domain)

    def to_dict(self) -> dict:
        return {"domain": self.domain, "values": [self.target.format(v) for v in self.values]}


def trivial_witness(cocycle: Cocycle, domain: str = "set") -> CohomologyWitness:
    T = cocycle.target
    return CohomologyWitness(T, (T.identity_value,) * cocycle.action.size, domain)


def cochain_violations(action: GraphAction, psi: CohomologyWitness) -> list[str]:
    E = action.graph
    return [E.edges[e] for e in range(E.num_edges)
            if action.act_vertex(psi(e), E.source[e]) != E.source[e]]


def apply_witness(cocycle: Cocycle, psi: CohomologyWitness,
                  graph_action: GraphAction | None = None) -> Cocycle:
    """``phi'(g, x) = psi(g x) phi(g, x) psi(x)^-1`` over the same action."""
    A, T = cocycle.action, cocycle.target
    if psi.target != T or len(psi.values) != A.size:
        raise CohomologyError("witness does not match the cocycle")
    if graph_action is not None:
        bad = cochain_violations(graph_action, psi)
        if bad:
            raise CohomologyError(f"witness violates the cochain condition at edge {bad[0]}")
    elif psi.domain == "graph-edges":
        raise CohomologyError("graph witnesses need the graph action")

    def fn(g, x):
        return T.op(T.op(psi(A.act(g, x)), cocycle.value(g, x)), T.inv(psi(x)))

    return materialize(A, T, fn)


def _same_action(a: SetAction, b: SetAction, radius: int) -> bool:
    if a is b:
        return True
    if a.group != b.group or a.size != b.size:
        return False
    return all(a.act(g, x) == b.act(g, x)
               for g in group_sample(a.group, radius) for x in a.points())


def verify_cohomologous(phi: Cocycle, phi2: Cocycle, psi: CohomologyWitness,
                        graph_action: GraphAction | None = None,
                        radius: int = DEFAULT_RADIUS) -> bool:
    """Pointwise check of ``phi2 = psi . phi . psi^-1`` (and the cochain
    condition for graph actions).  For Z the generator suffices."""
    if not _same_action(phi.action, phi2.action, radius):
        return False
    T = phi.target
    if phi2.target != T or psi.target != T or len(psi.values) != phi.action.size:
        return False
    if graph_action is not None and cochain_violations(graph_action, psi):
        return False
    A = phi.action
    if isinstance(phi, GeneratingCocycle) and isinstance(phi2, GeneratingCocycle):
        sample = [1]
    else:
        sample = group_sample(A.group, radius)
    for g in sample:
        for x in A.points():
            rhs = T.op(T.op(psi(A.act(g, x)), phi.value(g, x)), T.inv(psi(x)))
            if phi2.value(g, x) != rhs:
                return False
    return True


def signature(cocycle: Cocycle):
    """Sum of the generating function (finite S, abelian T, G = Z)."""
    if not isinstance(cocycle, GeneratingCocycle):
        raise CohomologyError("the signature is defined for Z-actions given by a generating function")
    if not cocycle.target.is_abelian:
        raise CohomologyError(f"the signature needs an abelian target, not {cocycle.target!r}")
    return cocycle.target.product(cocycle.xi)


# -- Zimmer's correspondence -------------------------------------------------------

@dataclass(frozen=True)
class CosetSpace:
    """``G/H`` with its translation action and a cross-section ``eta``
    (``reps[i]`` represents coset ``i``; coset 0 is ``H`` and ``reps[0] = 1``).
    ``modulus`` is set for ``Z / aZ``; ``subgroup`` for finite ``G``."""

    group: Group
    action: SetAction
    reps: tuple
    subgroup: frozenset | None = None
    modulus: int | None = None

    def eta(self, x):
        return self.reps[x]

    def in_subgroup(self, h) -> bool:
        if self.modulus is not None:
            return h % self.modulus == 0
        return h in self.subgroup

    def subgroup_generators(self) -> list:
        if self.modulus is not None:
            return [self.modulus]
        gens: list = []
        span = {self.group.identity_value}
        for h in sorted(self.subgroup, key=repr):
            if h not in span:
                gens.append(h)
                span = closure(self.group, gens)
        return gens

    def subgroup_elements(self) -> list:
        if self.modulus is not None:
            raise CohomologyError("aZ is infinite")
        return sorted(self.subgroup, key=repr)


def coset_space(group: Group, subgroup, reps: Sequence | None = None) -> CosetSpace:
    """Left cosets ``gH`` of a subgroup of a finite group."""
    H = frozenset(subgroup)
    if group.identity_value not in H or frozenset(closure(group, H)) != H:
        raise CohomologyError("not a subgroup")
    cosets: list[frozenset] = []
    index: dict = {}
    default_reps = []
    for g in [group.identity_value] + group.elements():
        if g in index:
            continue
        c = frozenset(group.op(g, h) for h in H)
        for y in c:
            index[y] = len(cosets)
        cosets.append(c)
        default_reps.append(g)
    if reps is None:
        reps = default_reps
    reps = tuple(reps)
    if len(reps) != len(cosets) or reps[0] != group.identity_value:
        raise CohomologyError("the cross-section must pick one element per coset, with eta(H) = 1")
    for i, r in enumerate(reps):
        if index.get(r) != i:
            raise CohomologyError(f"eta(x) H != x for coset {i}")
    perms = {g: tuple(index[group.op(g, r)] for r in reps) for g in group.elements()}
    labels = tuple(group.format(r) + "H" for r in reps)
    return CosetSpace(group, FiniteAction(group, perms, labels), reps, subgroup=H)


def translation_action(a: int) -> IntegerAction:
    """The canonical action of Z on Z_a by ``x -> x + 1``."""
    if a < 1:
        raise CohomologyError("a must be positive")
    return IntegerAction([(k + 1) % a for k in range(a)])


def integer_coset_space(a: int, action: IntegerAction | None = None) -> CosetSpace:
    """``Z / aZ`` with ``eta(k + aZ) = k``."""
    return CosetSpace(Integers(), action or translation_action(a), tuple(range(a)), modulus=a)


def _hom_value(space: CosetSpace, pi, target: Group, h):
    if space.modulus is not None:
        c = pi[space.modulus] if isinstance(pi, dict) else pi
        return target.power(c, h // space.modulus)
    return pi[h]


def check_homomorphism(space: CosetSpace, pi, target: Group) -> bool:
    if space.modulus is not None:
        return True
    G = space.group
    return all(pi[G.op(h, k)] == target.op(pi[h], pi[k])
               for h in space.subgroup for k in space.subgroup)


def zimmer_cocycle(space: CosetSpace, pi, target: Group) -> Cocycle:
    """``phi = pi o phi0`` with ``phi0(g, x) = eta(g x)^-1 g eta(x)``.  For
    ``Z / aZ``, ``pi`` may be the single value ``pi(a)``."""
    if not check_homomorphism(space, pi, target):
        raise CohomologyError("pi is not a homomorphism")
    G, A = space.group, space.action

    def fn(g, x):
        h = G.op(G.op(G.inv(space.eta(A.act(g, x))), g), space.eta(x))
        return _hom_value(space, pi, target, h)

    return materialize(A, target, fn)


def zimmer_hom(cocycle: Cocycle, space: CosetSpace) -> dict:
    """``pi(h) = phi(h, H)``; for ``Z / aZ`` only the generator ``a`` is
    listed.  Raises if the result is not a homomorphism."""
    T = cocycle.target
    if space.modulus is not None:
        return {space.modulus: cocycle.value(space.modulus, 0)}
    pi = {h: cocycle.value(h, 0) for h in space.subgroup}
    if not check_homomorphism(space, pi, T):
        raise CohomologyError("phi(h, H) is not a homomorphism; phi is not a cocycle")
    return pi


def conjugating_element(pi: dict, pi2: dict, target: Group):
    """Some ``t`` with ``pi2 = t pi t^-1``, or None."""
    candidates = target.elements() if target.is_finite else [target.identity_value]
    if target.is_abelian:
        candidates = [target.identity_value]
    for t in candidates:
        if all(pi2[h] == target.conj(t, pi[h]) for h in pi):
            return t
    return None


def zimmer_witness(phi: Cocycle, phi2: Cocycle, space: CosetSpace, t=None) -> CohomologyWitness:
    """``psi(x) = phi2(eta(x), H) t phi(eta(x), H)^-1`` for
    ``pi_{phi2} = t pi_phi t^-1``.  ``t`` is ignored for abelian targets."""
    T = phi.target
    if T.is_abelian or t is None:
        t = T.identity_value
    pi, pi2 = zimmer_hom(phi, space), zimmer_hom(phi2, space)
    if any(pi2[h] != T.conj(t, pi[h]) for h in pi):
        raise CohomologyError("the homomorphisms are not conjugate by t")
    return CohomologyWitness(T, tuple(
        T.op(T.op(phi2.value(space.eta(x), 0), t), T.inv(phi.value(space.eta(x), 0)))
        for x in space.action.points()))


def zimmer_normal_witness(phi: Cocycle, space: CosetSpace) -> CohomologyWitness:
    """``tau(x) = phi(eta(x), H)^-1``, relating ``phi`` to ``pi_phi o phi0``."""
    T = phi.target
    return CohomologyWitness(T, tuple(T.inv(phi.value(space.eta(x), 0))
                                      for x in space.action.points()))


# -- Z acting on Z_a -------------------------------------------------------------

def canonical_cocycle(a: int, c: int, action: IntegerAction | None = None) -> GeneratingCocycle:
    """The cocycle with generating function 0 except ``c`` at ``a - 1``."""
    action = action or translation_action(a)
    return GeneratingCocycle(action, Integers(), [0] * (a - 1) + [c])


def _is_translation(action: SetAction) -> bool:
    n = action.size
    return isinstance(action, IntegerAction) and action.tau == tuple((k + 1) % n for k in range(n))


def canonical_form_Za(cocycle: Cocycle) -> tuple[int, CohomologyWitness]:
    """``(c, psi)`` with ``psi`` taking ``phi`` to the canonical cocycle
    ``phi_c``, c the signature."""
    if not _is_translation(cocycle.action):
        raise CohomologyError("canonical forms need the translation action of Z on Z_a")
    if not isinstance(cocycle.target, Integers):
        raise CohomologyError("canonical forms are for integer-valued cocycles")
    space = integer_coset_space(cocycle.action.size, cocycle.action)
    return signature(cocycle), zimmer_normal_witness(cocycle, space)


def transport(cocycle: Cocycle, theta: Sequence[int], action: SetAction) -> Cocycle:
    """The cocycle ``(g, y) -> phi(g, theta(y))`` on the domain of ``theta``."""
    return materialize(action, cocycle.target, lambda g, y: cocycle.value(g, theta[y]))


def _require_transitive(cocycle: Cocycle) -> IntegerAction:
    A = cocycle.action
    if not isinstance(A, IntegerAction) or not isinstance(cocycle, GeneratingCocycle):
        raise CohomologyError("conjugacy decisions need Z-systems with generating functions")
    if len(A.cycles) != 1:
        raise CohomologyError("the action is not transitive")
    return A


def transitive_conjugacy(phi: Cocycle, phi2: Cocycle, base: int = 0, base2: int = 0):
    """Decide cohomology conjugacy of transitive finite Z-systems.

    Returns None when the sizes or signatures differ.  Otherwise returns
    ``(theta, psi)``: ``theta`` maps the points of ``phi2`` to those of
    ``phi`` (``base2 -> base``) intertwining the actions, and ``psi``
    witnesses that ``transport(phi, theta)`` is cohomologous to ``phi2``.
    """
    A, A2 = _require_transitive(phi), _require_transitive(phi2)
    if A.size != A2.size or phi.target != phi2.target:
        return None
    T = phi.target
    if signature(phi) != signature(phi2):
        return None
    theta = [0] * A2.size
    psi = [T.identity_value] * A2.size
    x, y, acc = base, base2, T.identity_value
    for _ in range(A2.size):
        theta[y] = x
        psi[y] = acc
        acc = T.op(acc, T.op(phi2.xi[y], T.inv(phi.xi[x])))
        x, y = A.tau[x], A2.tau[y]
    return tuple(theta), CohomologyWitness(T, tuple(psi))


def _orbit_restriction(cocycle: GeneratingCocycle, orbit: Sequence[int]) -> GeneratingCocycle:
    index = {x: i for i, x in enumerate(orbit)}
    A = cocycle.action
    action = IntegerAction([index[A.tau[x]] for x in orbit], labels=list(orbit))
    return GeneratingCocycle(action, cocycle.target, [cocycle.xi[x] for x in orbit])


def orbit_invariants(cocycle: Cocycle) -> list[tuple[int, object]]:
    """``(size, signature)`` of each orbit of a finite Z-system."""
    if not isinstance(cocycle, GeneratingCocycle):
        raise CohomologyError("orbit invariants need Z-systems with generating functions")
    T = cocycle.target
    return [(len(c), T.product(cocycle.xi[x] for x in c)) for c in cocycle.action.cycles]


def z_conjugacy(phi: Cocycle, phi2: Cocycle):
    """Decide cohomology conjugacy of finite Z-systems with abelian target
    by matching orbits with equal size and signature.  Returns None if no
    matching exists, else ``(theta, psi)`` as in ``transitive_conjugacy``."""
    inv, inv2 = orbit_invariants(phi), orbit_invariants(phi2)
    if phi.target != phi2.target or sorted(map(repr, inv)) != sorted(map(repr, inv2)):
        return None
    T = phi.target
    free = list(range(len(inv)))
    theta = [0] * phi2.action.size
    psi = [T.identity_value] * phi2.action.size
    for j, key in enumerate(inv2):
        i = next(i for i in free if inv[i] == key)
        free.remove(i)
        orbit, orbit2 = phi.action.cycles[i], phi2.action.cycles[j]
        local = transitive_conjugacy(_orbit_restriction(phi, orbit),
                                     _orbit_restriction(phi2, orbit2))
        if local is None:
            raise CohomologyError("orbit invariants matched but conjugacy failed")
        th, w = local
        for k, y in enumerate(orbit2):
            theta[y] = orbit[th[k]]
            psi[y] = w(k)
    return tuple(theta), CohomologyWitness(T, tuple(psi))


# -- coboundaries and brute force -------------------------------------------------

def is_translation_coboundary(action: GraphAction) -> CohomologyWitness | None:
    """An equivariant ``psi: E^1 -> G`` (``psi(g e) = g psi(e)``) when the
    action on edges is free, else None.  Its pointwise inverse witnesses that
    ``(g, e) -> g`` is cohomologous to the constant cocycle 1."""
    if not fixes_sources(action):
        raise CohomologyError("the action does not fix sources")
    G, n = action.group, action.graph.num_edges
    if n and not G.is_finite:
        return None  # an infinite group cannot act freely on a finite set
    psi: list = [None] * n
    for rep in range(n):
        if psi[rep] is not None:
            continue
        for g in G.elements():
            y = action.act_edge(g, rep)
            if psi[y] is not None:
                return None  # nontrivial stabilizer
            psi[y] = g
    return CohomologyWitness(G, tuple(psi), "graph-edges")


def brute_force_cohomologous(phi: Cocycle, phi2: Cocycle, bound: int = 4,
                             graph_action: GraphAction | None = None,
                             cap: int = 10 ** 9) -> CohomologyWitness | None:
    """Lexicographically least witness ``psi`` with values in the target
    (finite T) or in ``[-bound, bound]`` (T = Z), or None if there is none
    in the box.  Raises SearchLimitExceeded if the box exceeds ``cap``."""
    A, T = phi.action, phi.target
    if phi2.target != T or not _same_action(A, phi2.action, DEFAULT_RADIUS):
        raise CohomologyError("cocycles must share the action and target")
    if T.is_finite:
        values = T.elements()
    elif isinstance(T, Integers):
        values = list(range(-bound, bound + 1))
    else:
        raise CohomologyError("brute force needs a finite or integer target")
    n = A.size
    if len(values) ** n > cap:
        raise SearchLimitExceeded(f"search box of size {len(values)}^{n} exceeds the cap {cap}")
    domain = "set"
    allowed = [values] * n
    if graph_action is not None:
        domain = "graph-edges"
        E = graph_action.graph
        allowed = [[t for t in values if graph_action.act_vertex(t, E.source[e]) == E.source[e]]
                   for e in range(n)]
    gens = list(A.group.generators)
    # constraints[x]: pairs (g, y) checked once both x and y = g.x (or x = g.y)
    # have values, i.e. as soon as max(x, y) is assigned.
    constraints: list[list] = [[] for _ in range(n)]
    for g in gens:
        for x in range(n):
            y = A.act(g, x)
            constraints[max(x, y)].append((x, y, phi2.value(g, x), phi.value(g, x)))
    psi: list = [None] * n
    op = T.op

    def ok(k: int) -> bool:
        for x, y, a, b in constraints[k]:
            if op(a, psi[x]) != op(psi[y], b):
                return False
        return True

    def search(k: int) -> bool:
        if k == n:
            return True
        for t in allowed[k]:
            psi[k] = t
            if ok(k) and search(k + 1):
                return True
        psi[k] = None
        return False

    if not search(0):
        return None
    witness = CohomologyWitness(T, tuple(psi), domain)
    if not verify_cohomologous(phi, phi2, witness, graph_action):
        raise CohomologyError("internal error: search produced an invalid witness")
    return witness
