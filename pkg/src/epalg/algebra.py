"""Exact formal *-algebra of the crossed product ``B`` spanned by
``delta(v, g)`` and the correspondence ``Y`` spanned by ``chi(e, g)``.

Basis rules (``v, w`` vertices, ``e, f`` edges, ``g, h`` group elements):

* ``delta(v', g) delta(v, h) = delta(g v, g h)`` if ``v' = g v``, else 0;
* ``delta(v, g)* = delta(g^-1 v, g^-1)``;
* ``delta(v, g) . chi(e, h) = chi(g e, phi(g, e) h)`` if ``v = r(g e)``;
* ``chi(e, h) . delta(v, g) = chi(e, h g)`` if ``s(e) = h v``;
* ``<chi(e, g), chi(f, h)> = [e = f] delta(g^-1 s(e), g^-1 h)``.

Coefficients are exact Gaussian rationals (sympy's ``QQ_I``).
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from sympy.polys.domains import QQ, QQ_I

from .cocycle import DEFAULT_RADIUS, System, group_sample
from .cohomology import CohomologyWitness, cochain_violations
from .graph import classify_vertices

ONE = QQ_I(1, 0)
ZERO = QQ_I(0, 0)


class AlgebraError(ValueError):
    pass


def coeff(value) -> "QQ_I.dtype":
    """Coerce ints, Fractions, ``(re, im)`` pairs, complex numbers with
    integral parts, and ``QQ_I`` elements."""
    if isinstance(value, QQ_I.dtype):
        return value
    if isinstance(value, tuple):
        re, im = value
        return QQ_I(_rational(re), _rational(im))
    if isinstance(value, complex):
        if value.real != int(value.real) or value.imag != int(value.imag):
            raise AlgebraError("complex coefficients must have integral parts; use (re, im)")
        return QQ_I(int(value.real), int(value.imag))
    return QQ_I(_rational(value), 0)


def _rational(x):
    if isinstance(x, Fraction):
        return QQ(x.numerator, x.denominator)
    if isinstance(x, str):
        f = Fraction(x)
        return QQ(f.numerator, f.denominator)
    return QQ(x) if isinstance(x, int) else x


def conj(c):
    return QQ_I(c.x, -c.y)


def coeff_str(c) -> str:
    re, im = c.x, c.y
    if not im:
        return str(re)
    if not re:
        return f"{im}i"
    sign = "-" if im < 0 else "+"
    return f"{re}{sign}{abs(im)}i"


# -- formal sums ---------------------------------------------------------------------

class FormalSum:
    """Finite map from basis symbols ``(index, group value)`` to nonzero
    coefficients.  Immutable by convention."""

    __slots__ = ("terms",)
    kind = "?"
    symbol = "?"

    def __init__(self, terms: dict | None = None):
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def from_items(cls, items: Iterable) -> "FormalSum":
        acc: dict = {}
        for k, c in items:
            acc[k] = acc.get(k, ZERO) + c
        return cls(acc)

    def _check(self, other):
        if type(other) is not type(self):
            raise AlgebraError(f"cannot combine {self.kind} and {getattr(other, 'kind', other)}")

    def __add__(self, other):
        self._check(other)
        return type(self).from_items(list(self.terms.items()) + list(other.terms.items()))

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return type(self)({k: -v for k, v in self.terms.items()})

    def scale(self, c):
        c = coeff(c)
        return type(self)({k: c * v for k, v in self.terms.items()})

    def __eq__(self, other):
        return type(other) is type(self) and self.terms == other.terms

    def __hash__(self):
        return hash((self.kind, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def __repr__(self):
        if not self.terms:
            return f"{self.kind}(0)"
        body = " + ".join(f"{coeff_str(c)}*{self.symbol}{k}" for k, c in sorted(
            self.terms.items(), key=lambda kv: repr(kv[0])))
        return f"{self.kind}({body})"

    def to_json(self, system: System) -> list:
        names = system.graph.vertices if self.kind == "B" else system.graph.edges
        G = system.group
        rows = [[names[i], G.format(g), coeff_str(c)] for (i, g), c in self.terms.items()]
        return sorted(rows)


class BElement(FormalSum):
    __slots__ = ()
    kind = "B"
    symbol = "delta"


class YElement(FormalSum):
    __slots__ = ()
    kind = "Y"
    symbol = "chi"


def delta(v: int, g, c=1) -> BElement:
    return BElement({(v, g): coeff(c)})


def chi(e: int, g, c=1) -> YElement:
    return YElement({(e, g): coeff(c)})


def unit_of(system: System, g=None) -> BElement:
    """``U_g = sum_v delta(v, g)``; the unit of B when ``g`` is the identity."""
    G = system.group
    g = G.identity_value if g is None else g
    return BElement({(v, g): ONE for v in range(system.graph.num_vertices)})


# -- structure constants ---------------------------------------------------------------

def b_multiply(system: System, x: BElement, y: BElement) -> BElement:
    G, A = system.group, system.action
    out = []
    for (v1, g), c1 in x:
        for (v, h), c2 in y:
            gv = A.act_vertex(g, v)
            if v1 == gv:
                out.append(((gv, G.op(g, h)), c1 * c2))
    return BElement.from_items(out)


def b_adjoint(system: System, x: BElement) -> BElement:
    G, A = system.group, system.action
    return BElement.from_items(((A.act_vertex(G.inv(g), v), G.inv(g)), conj(c)) for (v, g), c in x)


def left_action(system: System, b: BElement, xi: YElement) -> YElement:
    G, A, E, phi = system.group, system.action, system.graph, system.cocycle
    out = []
    for (v, g), c1 in b:
        for (e, h), c2 in xi:
            ge = A.act_edge(g, e)
            if v == E.range[ge]:
                out.append(((ge, G.op(phi.value(g, e), h)), c1 * c2))
    return YElement.from_items(out)


def right_action(system: System, xi: YElement, b: BElement) -> YElement:
    G, A, E = system.group, system.action, system.graph
    out = []
    for (e, h), c1 in xi:
        for (v, g), c2 in b:
            if E.source[e] == A.act_vertex(h, v):
                out.append(((e, G.op(h, g)), c1 * c2))
    return YElement.from_items(out)


def inner_product(system: System, xi: YElement, eta: YElement) -> BElement:
    """Conjugate-linear in ``xi``."""
    G, A, E = system.group, system.action, system.graph
    out = []
    for (e, g), c1 in xi:
        gi = G.inv(g)
        for (f, h), c2 in eta:
            if e == f:
                out.append(((A.act_vertex(gi, E.source[e]), G.op(gi, h)), conj(c1) * c2))
    return BElement.from_items(out)


@dataclass(frozen=True)
class RankOneOp:
    """``theta_{xi, eta}(zeta) = xi . <eta, zeta>``."""

    xi: YElement
    eta: YElement


def rank_one_apply(system: System, theta: RankOneOp, zeta: YElement) -> YElement:
    return right_action(system, theta.xi, inner_product(system, theta.eta, zeta))


def katsura_decomposition(system: System, v: int, g) -> list[RankOneOp]:
    """``delta(v, g)`` acting on Y as
    ``sum_{r(e) = v} theta_{chi(e, 1), chi(g^-1 e, phi(g^-1, e))}``.
    Empty for sources, where the left action vanishes."""
    G, A, E, phi = system.group, system.action, system.graph, system.cocycle
    gi = G.inv(g)
    return [RankOneOp(chi(e, G.identity_value), chi(A.act_edge(gi, e), phi.value(gi, e)))
            for e in E.edges_into(v)]


def katsura_check(system: System, v: int, g, basis: Iterable[YElement]) -> list:
    """Basis vectors on which the rank-one sum and the left action differ."""
    ops = katsura_decomposition(system, v, g)
    bad = []
    for zeta in basis:
        lhs = YElement()
        for op in ops:
            lhs = lhs + rank_one_apply(system, op, zeta)
        if lhs != left_action(system, delta(v, g), zeta):
            bad.append(zeta)
    return bad


def y_basis(system: System, radius: int = DEFAULT_RADIUS) -> list[YElement]:
    return [chi(e, h) for e in range(system.graph.num_edges)
            for h in group_sample(system.group, radius)]


def b_basis(system: System, radius: int = DEFAULT_RADIUS) -> list[BElement]:
    return [delta(v, h) for v in range(system.graph.num_vertices)
            for h in group_sample(system.group, radius)]


def katsura_ideal_report(system: System) -> dict:
    """Spanning symbols ``delta(v, g)`` (v regular) of the ideal that contains
    the Katsura ideal of Y, and whether it is all of B."""
    E = system.graph
    regular, sources = classify_vertices(E)
    return {
        "regular_vertices": [E.vertices[v] for v in sorted(regular)],
        "sources": [E.vertices[v] for v in sorted(sources)],
        "spanning_symbols": [f"delta({E.vertices[v]}, g)" for v in sorted(regular)],
        "ideal_is_B": not sources,
        "row_finite": True,
    }


# -- isomorphisms at generator level -------------------------------------------------

def cohomology_iso(system: System, psi: CohomologyWitness):
    """``chi(e, g) -> chi(e, psi(e) g)`` extended linearly, from ``Y^phi`` to
    ``Y^phi'`` where ``phi' = psi . phi . psi^-1``."""
    bad = cochain_violations(system.action, psi)
    if bad:
        raise AlgebraError(f"witness violates the cochain condition at edge {bad[0]}")
    G = system.group

    def Phi(xi: YElement) -> YElement:
        return YElement.from_items(((e, G.op(psi(e), g)), c) for (e, g), c in xi)

    return Phi


def ep_model_map(system: System, xi: YElement) -> dict:
    """``Psi chi(e, g)``: the E^1-indexed family of B-elements whose only
    nonzero entry is ``delta(s(e), g)`` at ``e``."""
    E = system.graph
    out: dict = {}
    for (e, g), c in xi:
        out[e] = out.get(e, BElement()) + delta(E.source[e], g, c)
    return {e: b for e, b in out.items() if b}


def model_inner_product(system: System, m1: dict, m2: dict) -> BElement:
    total = BElement()
    for e, b in m1.items():
        if e in m2:
            total = total + b_multiply(system, b_adjoint(system, b), m2[e])
    return total


def model_left_action(system: System, b: BElement, m: dict) -> dict:
    """``delta(v, g) = delta_v U_g`` acting on families:
    ``(U_g m)_e = delta(s(e), phi(g, g^-1 e)) m_{g^-1 e}`` and
    ``(delta_v m)_e = [v = r(e)] m_e``."""
    A, E, phi = system.action, system.graph, system.cocycle
    out: dict = {}
    for (v, g), c in b:
        for f, mf in m.items():
            e = A.act_edge(g, f)
            if E.range[e] != v:
                continue
            term = b_multiply(system, delta(E.source[e], phi.value(g, f), c), mf)
            out[e] = out.get(e, BElement()) + term
    return {e: x for e, x in out.items() if x}


def ep_isometry_check(system: System, radius: int = DEFAULT_RADIUS) -> list:
    """Pairs of basis vectors where the model inner product disagrees with
    ``<., .>`` (empty list means the map is isometric on the grid)."""
    basis = y_basis(system, radius)
    bad = []
    images = [ep_model_map(system, x) for x in basis]
    for x, mx in zip(basis, images):
        for y, my in zip(basis, images):
            if model_inner_product(system, mx, my) != inner_product(system, x, y):
                bad.append((x, y))
    return bad


# -- randomized identity suites -------------------------------------------------------

def random_coeff(rng) -> "QQ_I.dtype":
    return QQ_I(QQ(rng.randint(-3, 3), rng.randint(1, 3)), QQ(rng.randint(-2, 2), rng.randint(1, 2)))


def random_b(system: System, rng, radius: int, max_terms: int = 5) -> BElement:
    ball = group_sample(system.group, radius)
    n = system.graph.num_vertices
    return BElement.from_items(((rng.randrange(n), ball[rng.randrange(len(ball))]), random_coeff(rng))
                               for _ in range(rng.randint(1, max_terms)))


def random_y(system: System, rng, radius: int, max_terms: int = 5) -> YElement:
    ball = group_sample(system.group, radius)
    n = system.graph.num_edges
    return YElement.from_items(((rng.randrange(n), ball[rng.randrange(len(ball))]), random_coeff(rng))
                               for _ in range(rng.randint(1, max_terms)))


def axiom_failures(system: System, x: BElement, y: BElement, z: BElement,
                   xi: YElement, eta: YElement, c) -> list[str]:
    """Names of the *-algebra, bimodule and inner-product identities that
    fail on the given elements."""
    S = system
    mul, star = (lambda a, b: b_multiply(S, a, b)), (lambda a: b_adjoint(S, a))
    la, ra, ip = (lambda b, m: left_action(S, b, m)), (lambda m, b: right_action(S, m, b)), \
        (lambda m, n: inner_product(S, m, n))
    checks = {
        "associativity": mul(mul(x, y), z) == mul(x, mul(y, z)),
        "distributivity": mul(x, y + z) == mul(x, y) + mul(x, z),
        "involution_antimultiplicative": star(mul(x, y)) == mul(star(y), star(x)),
        "involution_involutive": star(star(x)) == x,
        "involution_conjugate_linear": star(x.scale(c)) == star(x).scale(conj(c)),
        "left_module": la(mul(x, y), xi) == la(x, la(y, xi)),
        "right_module": ra(xi, mul(x, y)) == ra(ra(xi, x), y),
        "bimodule": ra(la(x, xi), y) == la(x, ra(xi, y)),
        "inner_right_linear": ip(xi, ra(eta, x)) == mul(ip(xi, eta), x),
        "inner_scalar": ip(xi.scale(c), eta) == ip(xi, eta).scale(conj(c))
        and ip(xi, eta.scale(c)) == ip(xi, eta).scale(c),
        "inner_hermitian": star(ip(xi, eta)) == ip(eta, xi),
        "inner_adjointable": ip(la(x, xi), eta) == ip(xi, la(star(x), eta)),
    }
    return [k for k, ok in checks.items() if not ok]


def axiom_suite(system: System, trials: int, seed: int, radius: int = 4,
                max_terms: int = 5) -> dict:
    """Run ``axiom_failures`` on ``trials`` seeded random tuples."""
    import random
    rng = random.Random(seed)
    counts: dict = {}
    first: dict = {}
    for t in range(trials):
        x, y, z = (random_b(system, rng, radius, max_terms) for _ in range(3))
        xi, eta = random_y(system, rng, radius, max_terms), random_y(system, rng, radius, max_terms)
        for name in axiom_failures(system, x, y, z, xi, eta, random_coeff(rng)):
            counts[name] = counts.get(name, 0) + 1
            first.setdefault(name, t)
    return {"system": system.name, "trials": trials, "seed": seed, "radius": radius,
            "failures": dict(sorted(counts.items())), "first_failing_trial": first,
            "pass": not counts}


def cohomology_iso_failures(system: System, psi: CohomologyWitness,
                            radius: int = DEFAULT_RADIUS) -> list[str]:
    """Check that ``cohomology_iso`` preserves inner products and
    intertwines left actions on the basis grid of radius ``radius``."""
    from .cohomology import apply_witness
    phi2 = apply_witness(system.cocycle, psi, system.action)
    twisted = System(system.graph, system.action, phi2, system.name + "'")
    Phi = cohomology_iso(system, psi)
    ys, bs = y_basis(system, radius), b_basis(system, radius)
    images = [Phi(x) for x in ys]
    bad = []
    for x, px in zip(ys, images):
        for y, py in zip(ys, images):
            if inner_product(twisted, px, py) != inner_product(system, x, y):
                bad.append(f"inner {x!r} {y!r}")
        for b in bs:
            if Phi(left_action(system, b, x)) != left_action(twisted, b, px):
                bad.append(f"left {b!r} {x!r}")
            if Phi(right_action(system, x, b)) != right_action(twisted, px, b):
                bad.append(f"right {x!r} {b!r}")
    return bad
