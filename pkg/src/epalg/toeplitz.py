"""Words in the generators ``p(v)``, ``s(e)``, ``s*(e)``, ``u(g)``: normal
forms as combinations of monomials ``s_mu u_g s_nu*``, the Fock
representation used as an exact oracle, and a numerical relation checker
for concrete matrix families.

Rewriting rules (paths compose right to left, ``g.mu`` and ``phi(g, mu)``
are the path extensions of the action and cocycle)::

    (s_mu u_g s_nu*)(s_rho u_h s_sigma*) =
        s_{mu (g.rho')} u_{phi(g, rho') h} s_sigma*            if rho = nu rho'
        s_mu u_{g phi(h^-1, nu')^-1} s_{sigma (h^-1.nu')}*     if nu = rho nu'
        0                                                       otherwise
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from .cocycle import DEFAULT_RADIUS, System, act_on_path, group_sample
from .graph import Path, classify_vertices, paths_up_to
from .group import GroupError, Integers


class WordError(ValueError):
    pass


# -- tokens ----------------------------------------------------------------------------

Token = tuple  # ("p", v) | ("s", e) | ("s*", e) | ("u", g)

_TOKEN = re.compile(r"\s*(p|s\*|s|u)\(\s*([^()]*?)\s*\)\s*")


def parse_word(system: System, text: str) -> list[Token]:
    """Parse ``"u(1) s(0) s*(1) p(v)"`` into tokens; whitespace is product."""
    E, G = system.graph, system.group
    tokens, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise WordError(f"cannot parse {text[pos:]!r}")
        kind, arg = m.group(1), m.group(2)
        try:
            if kind == "p":
                tokens.append(("p", E.vertex_index(arg)))
            elif kind == "u":
                tokens.append(("u", G.parse(arg)))
            else:
                tokens.append((kind, E.edge_index(arg)))
        except (GroupError, ValueError) as exc:
            raise WordError(f"bad token {m.group(0).strip()!r}: {exc}") from None
        pos = m.end()
    return tokens


def format_word(system: System, tokens: Sequence[Token]) -> str:
    E, G = system.graph, system.group
    out = []
    for kind, x in tokens:
        if kind == "p":
            out.append(f"p({E.vertices[x]})")
        elif kind == "u":
            out.append(f"u({G.format(x)})")
        else:
            out.append(f"{kind}({E.edges[x]})")
    return " ".join(out)


def word_adjoint(system: System, tokens: Sequence[Token]) -> list[Token]:
    G = system.group
    flip = {"p": "p", "s": "s*", "s*": "s"}
    return [("u", G.inv(x)) if k == "u" else (flip[k], x) for k, x in reversed(tokens)]


# -- monomials ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Monomial:
    """``s_mu u_g s_nu*`` with ``s(mu) = g.s(nu)``; vertices are length-0
    paths."""

    mu: Path
    g: Any
    nu: Path


def make_monomial(system: System, mu: Path, g, nu: Path) -> Monomial:
    if mu.source != system.action.act_vertex(g, nu.source):
        raise WordError("source compatibility s(mu) = g.s(nu) fails")
    return Monomial(mu, g, nu)


def token_monomials(system: System, token: Token) -> dict:
    E, G = system.graph, system.group
    kind, x = token
    one = G.identity_value
    if kind == "p":
        v = Path((), x)
        return {Monomial(v, one, v): 1}
    if kind == "s":
        return {Monomial(Path((x,), E.source[x]), one, Path((), E.source[x])): 1}
    if kind == "s*":
        return {Monomial(Path((), E.source[x]), one, Path((x,), E.source[x])): 1}
    if kind == "u":
        return {Monomial(Path((), system.action.act_vertex(x, w)), x, Path((), w)): 1
                for w in range(E.num_vertices)}
    raise WordError(f"unknown token {token!r}")


def _strip_prefix(system: System, prefix: Path, path: Path):
    """``rest`` with ``path = prefix rest``, or None."""
    n = len(prefix.edges)
    if n == 0:
        return path if system.graph.r(path) == prefix.source else None
    if path.edges[:n] != prefix.edges:
        return None
    return Path(path.edges[n:], path.source)


def monomial_multiply(system: System, m1: Monomial, m2: Monomial) -> Monomial | None:
    G = system.group
    mu, g, nu = m1.mu, m1.g, m1.nu
    rho, h, sigma = m2.mu, m2.g, m2.nu
    if len(rho.edges) >= len(nu.edges):
        rest = _strip_prefix(system, nu, rho)
        if rest is None:
            return None
        grest, k = act_on_path(system, g, rest)
        return Monomial(Path(mu.edges + grest.edges, grest.source), G.op(k, h), sigma)
    rest = _strip_prefix(system, rho, nu)
    if rest is None:
        return None
    hi = G.inv(h)
    hrest, k = act_on_path(system, hi, rest)
    return Monomial(mu, G.op(g, G.inv(k)), Path(sigma.edges + hrest.edges, hrest.source))


def monomial_adjoint(system: System, m: Monomial) -> Monomial:
    return Monomial(m.nu, system.group.inv(m.g), m.mu)


def lc_add(a: dict, b: dict, scale: int = 1) -> dict:
    out = dict(a)
    for m, c in b.items():
        out[m] = out.get(m, 0) + scale * c
        if not out[m]:
            del out[m]
    return out


def lc_multiply(system: System, a: dict, b: dict) -> dict:
    out: dict = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            m = monomial_multiply(system, m1, m2)
            if m is not None:
                out[m] = out.get(m, 0) + c1 * c2
    return {m: c for m, c in out.items() if c}


def lc_adjoint(system: System, a: dict) -> dict:
    return {monomial_adjoint(system, m): c for m, c in a.items()}


def unit_combination(system: System) -> dict:
    one = system.group.identity_value
    return {Monomial(Path((), v), one, Path((), v)): 1 for v in range(system.graph.num_vertices)}


def normalize(system: System, tokens: Sequence[Token] | str) -> dict:
    """Normal form of a word as ``{Monomial: integer coefficient}``; the
    empty word is the unit ``sum_v p_v``."""
    if isinstance(tokens, str):
        tokens = parse_word(system, tokens)
    result = unit_combination(system)
    for t in tokens:
        result = lc_multiply(system, result, token_monomials(system, t))
    return result


def monomial_tokens(system: System, m: Monomial) -> list[Token]:
    """A word for ``m``: ``p(r mu) s(mu) u(g) s*(nu) p(r nu)``."""
    E = system.graph
    toks: list[Token] = [("p", E.r(m.mu))]
    toks += [("s", e) for e in m.mu.edges]
    toks.append(("u", m.g))
    toks += [("s*", e) for e in reversed(m.nu.edges)]
    toks.append(("p", E.r(m.nu)))
    return toks


def monomial_sort_key(system: System, m: Monomial):
    G = system.group
    return (len(m.mu.edges), m.mu.edges, m.mu.source, len(m.nu.edges), m.nu.edges,
            m.nu.source, G.format(m.g))


def format_monomial(system: System, m: Monomial) -> str:
    """Shortest readable word that parses back to exactly ``m``."""
    E, G = system.graph, system.group
    parts = [f"s({E.edges[e]})" for e in m.mu.edges]
    ident = G.is_identity(m.g)
    if not m.mu.edges and not m.nu.edges:
        if ident or E.num_vertices > 1:
            parts.append(f"p({E.vertices[m.mu.source]})")
    if not ident:
        parts.append(f"u({G.format(m.g)})")
    parts += [f"s*({E.edges[e]})" for e in reversed(m.nu.edges)]
    return " ".join(parts)


def format_combination(system: System, lc: dict) -> str:
    if not lc:
        return "0"
    out = []
    for m in sorted(lc, key=lambda m: monomial_sort_key(system, m)):
        c = lc[m]
        body = format_monomial(system, m)
        sign = "-" if c < 0 else "+"
        mag = "" if abs(c) == 1 else f"{abs(c)} "
        out.append((sign, f"{mag}{body}"))
    text = ("-" if out[0][0] == "-" else "") + out[0][1]
    for sign, term in out[1:]:
        text += f" {sign} {term}"
    return text


def combination_to_json(system: System, lc: dict) -> list:
    E, G = system.graph, system.group
    rows = []
    for m in sorted(lc, key=lambda m: monomial_sort_key(system, m)):
        rows.append({"mu": [E.edges[e] for e in m.mu.edges] or E.vertices[m.mu.source],
                     "g": G.format(m.g),
                     "nu": [E.edges[e] for e in m.nu.edges] or E.vertices[m.nu.source],
                     "coefficient": lc[m], "word": format_monomial(system, m)})
    return rows


# -- Fock representation (scalar reference) --------------------------------------------------

FockVector = tuple  # (Path, g)


def fock_apply_token(system: System, token: Token, vec: FockVector) -> FockVector | None:
    E, G = system.graph, system.group
    kind, x = token
    mu, g = vec
    if kind == "p":
        return vec if E.r(mu) == x else None
    if kind == "s":
        if E.source[x] != E.r(mu):
            return None
        return (Path((x,) + mu.edges, mu.source), g)
    if kind == "s*":
        if not mu.edges or mu.edges[0] != x:
            return None
        return (Path(mu.edges[1:], mu.source), g)
    if kind == "u":
        hmu, k = act_on_path(system, x, mu)
        return (hmu, G.op(k, g))
    raise WordError(f"unknown token {token!r}")


def fock_apply(system: System, tokens: Sequence[Token], vec: FockVector) -> dict:
    """Apply a word (rightmost token first) to a basis vector; the result is
    a combination ``{vector: coefficient}`` (at most one term)."""
    for t in reversed(tokens):
        vec = fock_apply_token(system, t, vec)
        if vec is None:
            return {}
    return {vec: 1}


def fock_apply_combination(system: System, lc: dict, vec: FockVector) -> dict:
    out: dict = {}
    for m, c in lc.items():
        for w, d in fock_apply(system, monomial_tokens(system, m), vec).items():
            out[w] = out.get(w, 0) + c * d
    return {w: c for w, c in out.items() if c}


def fock_basis(system: System, length: int, radius: int = DEFAULT_RADIUS) -> list[FockVector]:
    ball = group_sample(system.group, radius)
    return [(p, g) for p in paths_up_to(system.graph, length) for g in ball]


@dataclass
class FockCheck:
    ok: bool
    vectors: int
    normal_form: dict
    mismatches: list = field(default_factory=list)
    engine: str = "scalar"


def fock_check(system: System, tokens: Sequence[Token] | str, length: int = 8,
               radius: int = 4, engine: str = "auto", batch: "FockBatch | None" = None
               ) -> FockCheck:
    """Compare the word and its normal form on every Fock basis vector
    ``(mu, g)`` with ``|mu| <= length`` and ``g`` in the ball."""
    if isinstance(tokens, str):
        tokens = parse_word(system, tokens)
    nf = normalize(system, tokens)
    if engine == "auto":
        engine = "batch" if FockBatch.supports(system) else "scalar"
    if engine == "batch":
        batch = batch or FockBatch(system, length, radius)
        bad = batch.compare(tokens, nf)
        return FockCheck(not bad, batch.size, nf, bad[:10], "batch")
    bad = []
    basis = fock_basis(system, length, radius)
    for vec in basis:
        if fock_apply(system, tokens, vec) != fock_apply_combination(system, nf, vec):
            bad.append(vec)
            if len(bad) >= 10:
                break
    return FockCheck(not bad, len(basis), nf, bad, "scalar")


# -- Fock representation (vectorized) --------------------------------------------------------

class FockBatch:
    """The Fock basis ``{(mu, g) : |mu| <= length, g in ball}`` as numpy
    arrays, for systems over Z or a finite group.  Paths are stored
    reversed: column 0 holds the last edge, so prepending and stripping the
    first edge touch column ``len - 1``.  Rows stay sorted by path length
    (every token shifts all surviving lengths alike), so the rows carrying
    an edge in column ``j`` form a suffix.

    Group elements acting on edges go through lookup tables built from the
    scalar action and cocycle; for Z the tables cover ``[-R, R]`` and grow
    on demand."""

    @staticmethod
    def supports(system: System) -> bool:
        return isinstance(system.group, Integers) or system.group.is_finite

    def __init__(self, system: System, length: int = 8, radius: int = 4, extra: int = 8):
        if not self.supports(system):
            raise WordError("the batch Fock engine needs Z or a finite group")
        self.system = system
        E, G = system.graph, system.group
        self.integer = isinstance(G, Integers)
        self.rng = np.asarray(E.range, dtype=np.int64)
        self.src = np.asarray(E.source, dtype=np.int64)
        if self.integer:
            self.radius = 0
            self._tables(max(radius, 1))
        else:
            self._init_finite()
        paths = paths_up_to(E, length)
        ball = group_sample(G, radius)
        n = len(paths) * len(ball)
        self.size = n
        self.width = length + extra
        D = np.full((n, self.width), -1, dtype=np.int64)
        lens = np.zeros(n, dtype=np.int64)
        srcs = np.zeros(n, dtype=np.int64)
        gs = np.zeros(n, dtype=np.int64)
        i = 0
        for p in paths:
            rev = p.edges[::-1]
            for g in ball:
                D[i, :len(rev)] = rev
                lens[i] = len(rev)
                srcs[i] = p.source
                gs[i] = self._encode(g)
                i += 1
        self.basis = (np.arange(n, dtype=np.int64), lens, D, srcs, gs)
        self.paths, self.ball = paths, ball

    # group plumbing
    def _tables(self, R: int):
        """Edge and vertex tables for ``h`` in ``[-R, R]`` (Z only)."""
        A, phi, E = self.system.action, self.system.cocycle, self.system.graph
        hs = range(-R, R + 1)
        self.offset = R
        self.radius = R
        self.act_e = np.asarray([[A.act_edge(h, e) for e in range(E.num_edges)] for h in hs],
                                dtype=np.int64).reshape(len(hs), E.num_edges)
        self.phi_e = np.asarray([[phi.value(h, e) for e in range(E.num_edges)] for h in hs],
                                dtype=np.int64).reshape(len(hs), E.num_edges)
        self.act_v = np.asarray([[A.act_vertex(h, v) for v in range(E.num_vertices)] for h in hs],
                                dtype=np.int64)

    def _init_finite(self):
        G, A, phi = self.system.group, self.system.action, self.system.cocycle
        E = self.system.graph
        self.elements = G.elements()
        self.gindex = {g: i for i, g in enumerate(self.elements)}
        m = len(self.elements)
        self.offset = 0
        self.mult = np.asarray([[self.gindex[G.op(a, b)] for b in self.elements]
                                for a in self.elements], dtype=np.int64)
        self.act_e = np.asarray([[A.act_edge(g, e) for e in range(E.num_edges)]
                                 for g in self.elements], dtype=np.int64).reshape(m, E.num_edges)
        self.phi_e = np.asarray([[self.gindex[phi.value(g, e)] for e in range(E.num_edges)]
                                 for g in self.elements], dtype=np.int64).reshape(m, E.num_edges)
        self.act_v = np.asarray([[A.act_vertex(g, v) for v in range(E.num_vertices)]
                                 for g in self.elements], dtype=np.int64)

    def _cover(self, h: np.ndarray):
        if self.integer and len(h):
            need = int(np.abs(h).max())
            if need > self.radius:
                self._tables(max(need, 2 * self.radius))

    def _encode(self, g) -> int:
        return g if self.integer else self.gindex[g]

    def _decode(self, x: int):
        return int(x) if self.integer else self.elements[int(x)]

    def _op(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        return a + b if self.integer else self.mult[a, b]

    # token application
    def apply(self, tokens: Sequence[Token], state=None):
        ids, lens, D, srcs, gs = state if state is not None else self.basis
        owned = False
        for kind, x in reversed(tokens):
            n = len(ids)
            if n == 0:
                break
            if kind != "u":
                first = D[np.arange(n), np.maximum(lens - 1, 0)]
                if kind == "s*":
                    keep = (lens > 0) & (first == x)
                else:
                    r = np.where(lens > 0, self.rng[np.maximum(first, 0)], srcs)
                    keep = r == (x if kind == "p" else self.src[x])
                if not keep.all():
                    ids, lens, D, srcs, gs = ids[keep], lens[keep], D[keep], srcs[keep], gs[keep]
                    owned = True
                n = len(ids)
                if kind == "p" or n == 0:
                    continue
                if not owned:
                    D, owned = D.copy(), True
                if kind == "s":
                    if int(lens[-1]) >= D.shape[1]:
                        raise WordError("path grew past the batch width")
                    D[np.arange(n), lens] = x
                    lens = lens + 1
                else:
                    D[np.arange(n), lens - 1] = -1
                    lens = lens - 1
                continue
            code = self._encode(x)
            self._cover(np.asarray([code]))
            if not owned:
                D, owned = D.copy(), True
            h = np.full(n, code, dtype=np.int64)
            for j in range(int(lens[-1]) - 1, -1, -1):
                lo = int(np.searchsorted(lens, j, side="right"))
                hj = h[lo:]
                self._cover(hj)
                col = D[lo:, j]
                row = (hj + self.offset) * self.act_e.shape[1] + col
                D[lo:, j] = self.act_e.ravel()[row]
                h[lo:] = self.phi_e.ravel()[row]
            nv = int(np.searchsorted(lens, 0, side="right"))
            srcs = np.concatenate([self.act_v[code + self.offset, srcs[:nv]],
                                   self.src[D[nv:, 0]]])
            gs = self._op(h, gs)
        return ids, lens, D, srcs, gs

    def compare(self, tokens: Sequence[Token], nf: dict) -> list:
        """Basis vectors where the word and the combination ``nf`` differ."""
        word = self.apply(tokens)
        items = list(nf.items())
        if len(items) == 1 and items[0][1] == 1:
            other = self.apply(monomial_tokens(self.system, items[0][0]))
            if _same_state(word, other):
                return []
        if not items:
            return self._vectors(word[0])
        entries = [(word, 1)] + [(self.apply(monomial_tokens(self.system, m)), -c)
                                 for m, c in items]
        rows, weights = [], []
        for (ids, lens, D, srcs, gs), c in entries:
            if len(ids):
                rows.append(np.column_stack([ids, lens, srcs, gs, D]))
                weights.append(np.full(len(ids), c, dtype=np.int64))
        if not rows:
            return []
        table = np.concatenate(rows)
        w = np.concatenate(weights)
        uniq, inverse = np.unique(table, axis=0, return_inverse=True)
        sums = np.zeros(len(uniq), dtype=np.int64)
        np.add.at(sums, inverse.ravel(), w)
        bad_ids = np.unique(uniq[sums != 0, 0])
        return self._vectors(bad_ids)

    def _vectors(self, ids) -> list:
        out = []
        nb = len(self.ball)
        for i in list(ids)[:10]:
            p, g = self.paths[int(i) // nb], self.ball[int(i) % nb]
            out.append((p, g))
        return out

    def decode(self, state) -> dict:
        """``{basis id: (Path, g)}`` for the live rows of a state."""
        ids, lens, D, srcs, gs = state
        E = self.system.graph
        out = {}
        for i, ln, row, s, g in zip(ids, lens, D, srcs, gs):
            edges = tuple(int(e) for e in row[:ln][::-1])
            out[int(i)] = (Path(edges, int(s) if not ln else E.source[edges[-1]]),
                           self._decode(g))
        return out


def _same_state(a, b) -> bool:
    ida, la, Da, sa, ga = a
    idb, lb, Db, sb, gb = b
    return (len(ida) == len(idb) and np.array_equal(ida, idb) and np.array_equal(la, lb)
            and np.array_equal(sa, sb) and np.array_equal(ga, gb) and np.array_equal(Da, Db))


# -- random words -------------------------------------------------------------------------

def random_word(system: System, rng, max_length: int = 6, radius: int = 2) -> list[Token]:
    """Seeded random word over all generator tokens (group parts in a ball)."""
    E = system.graph
    ball = group_sample(system.group, radius)
    choices: list[Token] = [("p", v) for v in range(E.num_vertices)]
    choices += [("s", e) for e in range(E.num_edges)] + [("s*", e) for e in range(E.num_edges)]
    choices += [("u", g) for g in ball]
    n = rng.randint(1, max_length)
    return [choices[rng.randrange(len(choices))] for _ in range(n)]


def monomials_up_to(system: System, length: int, radius: int = 1) -> list[Monomial]:
    paths = paths_up_to(system.graph, length)
    ball = group_sample(system.group, radius)
    act = system.action.act_vertex
    return [Monomial(mu, g, nu) for mu in paths for nu in paths for g in ball
            if mu.source == act(g, nu.source)]


def _valid_path(system: System, p: Path) -> bool:
    E, e = system.graph, p.edges
    if any(E.source[a] != E.range[b] for a, b in zip(e, e[1:])):
        return False
    return not e or E.source[e[-1]] == p.source


def is_monomial(system: System, m, _paths: dict | None = None) -> bool:
    """Composable paths and ``s(mu) = g.s(nu)``."""
    if not isinstance(m, Monomial):
        return False
    for p in (m.mu, m.nu):
        ok = None if _paths is None else _paths.get(p)
        if ok is None:
            ok = _valid_path(system, p)
            if _paths is not None:
                _paths[p] = ok
        if not ok:
            return False
    return m.mu.source == system.action.act_vertex(m.g, m.nu.source)


def product_census(system: System, monomials: Sequence[Monomial]) -> dict:
    """Multiply every ordered pair; count zero and single products and
    collect pairs whose product is not a valid monomial.  Pairs whose
    inner paths are not prefix-comparable are zero without multiplying."""
    by_nu: dict = {}
    by_rho: dict = {}
    for m in monomials:
        by_nu.setdefault(m.nu, []).append(m)
        by_rho.setdefault(m.mu, []).append(m)
    single = invalid = 0
    bad = []
    seen: dict = {}
    for nu, left in by_nu.items():
        for rho, right in by_rho.items():
            if len(rho.edges) >= len(nu.edges):
                if _strip_prefix(system, nu, rho) is None:
                    continue
            elif _strip_prefix(system, rho, nu) is None:
                continue
            for m1 in left:
                for m2 in right:
                    m = monomial_multiply(system, m1, m2)
                    if m is None:
                        continue
                    if is_monomial(system, m, seen):
                        single += 1
                        continue
                    invalid += 1
                    if len(bad) < 10:
                        bad.append((m1, m2, m))
    pairs = len(monomials) ** 2
    return {"pairs": pairs, "zero": pairs - single - invalid, "single": single,
            "invalid": bad}


def check_product(system: System, m1: Monomial, m2: Monomial, batch: FockBatch) -> list:
    """Fock vectors where ``monomial_multiply(m1, m2)`` and the word
    ``m1 m2`` act differently."""
    m = monomial_multiply(system, m1, m2)
    nf = {} if m is None else {m: 1}
    return batch.compare(monomial_tokens(system, m1) + monomial_tokens(system, m2), nf)


# -- matrix families ----------------------------------------------------------------------

@dataclass
class MatrixFamily:
    P: dict      # vertex index -> (n, n) complex array
    S: dict      # edge index -> array
    U: dict      # group value (generators) -> array

    @property
    def dimension(self) -> int:
        for group in (self.P, self.S, self.U):
            for m in group.values():
                return m.shape[0]
        return 0


def family_from_json(system: System, data: dict) -> MatrixFamily:
    """``{"P": {v: rows}, "S": {e: rows}, "U": {g: rows}}`` with rows of
    ``[re, im]`` pairs."""
    E, G = system.graph, system.group

    def mat(rows):
        return np.asarray([[complex(re, im) for re, im in row] for row in rows], dtype=complex)

    try:
        P = {E.vertex_index(k): mat(v) for k, v in data.get("P", {}).items()}
        S = {E.edge_index(k): mat(v) for k, v in data.get("S", {}).items()}
        U = {G.parse(k): mat(v) for k, v in data.get("U", {}).items()}
    except (TypeError, ValueError) as exc:
        raise WordError(f"malformed matrix family: {exc}") from None
    return MatrixFamily(P, S, U)


def family_to_json(system: System, fam: MatrixFamily) -> dict:
    E, G = system.graph, system.group

    def rows(m):
        return [[[float(z.real), float(z.imag)] for z in row] for row in m]

    return {"P": {E.vertices[v]: rows(m) for v, m in sorted(fam.P.items())},
            "S": {E.edges[e]: rows(m) for e, m in sorted(fam.S.items())},
            "U": {G.format(g): rows(m) for g, m in fam.U.items()}}


def _unitary_table(system: System, fam: MatrixFamily, n: int, needed: Iterable) -> tuple[dict, list]:
    """Extend ``U`` from generators to the needed elements."""
    G = system.group
    problems = []
    if isinstance(G, Integers):
        if 1 not in fam.U:
            return {}, ["U(1) missing"]
        u = fam.U[1]
        table = {}
        for g in needed:
            table[g] = np.linalg.matrix_power(u if g >= 0 else u.conj().T, abs(g))
        return table, problems
    if not G.is_finite:
        missing = [g for g in needed if g not in fam.U]
        return dict(fam.U), [f"U({G.format(g)}) missing" for g in missing]
    table = {G.identity_value: np.eye(n, dtype=complex)}
    frontier = [G.identity_value]
    conflict = 0.0
    while frontier:
        nxt = []
        for a in frontier:
            for g, ug in fam.U.items():
                c = G.op(g, a)
                m = ug @ table[a]
                if c in table:
                    conflict = max(conflict, float(np.abs(table[c] - m).max()))
                else:
                    table[c] = m
                    nxt.append(c)
        frontier = nxt
    table["_conflict"] = conflict
    return table, problems


def check_relations(system: System, fam: MatrixFamily, mode: str = "toeplitz",
                    tol: float = 1e-9) -> dict:
    """Maximum deviation of each defining relation; passes iff all are at
    most ``tol``.  ``mode`` is ``"toeplitz"`` or ``"ck"`` (adds
    ``P_v = sum_{r(e) = v} S_e S_e*`` at regular vertices)."""
    if mode not in ("toeplitz", "ck"):
        raise WordError("mode must be toeplitz or ck")
    E, G, A, phi = system.graph, system.group, system.action, system.cocycle
    n = fam.dimension
    for m in list(fam.P.values()) + list(fam.S.values()) + list(fam.U.values()):
        if m.shape != (n, n):
            raise WordError("matrices have different dimensions")
    zero = np.zeros((n, n), dtype=complex)
    eye = np.eye(n, dtype=complex)
    P = {v: fam.P.get(v, zero) for v in range(E.num_vertices)}
    S = {e: fam.S.get(e, zero) for e in range(E.num_edges)}

    def dev(x) -> float:
        return float(np.abs(x).max()) if x.size else 0.0

    def adj(x):
        return x.conj().T

    rel: dict = {}

    def put(name, value):
        rel[name] = max(rel.get(name, 0.0), value)

    for v, p in P.items():
        put("projections", max(dev(p @ p - p), dev(p - adj(p))))
        for w, q in P.items():
            if w != v:
                put("orthogonal_projections", dev(p @ q))
    put("unit", dev(sum(P.values(), zero) - eye))
    for e, s in S.items():
        put("isometry", dev(adj(s) @ s - P[E.source[e]]))
        put("range", dev(P[E.range[e]] @ s - s))
        for f, t in S.items():
            if f != e:
                put("orthogonal_ranges", dev(adj(s) @ t))
    gens = list(G.generators)
    gens_and_inv = gens + [G.inv(g) for g in gens if G.inv(g) not in gens]
    needed = set(gens_and_inv) | {phi.value(g, e) for g in gens_and_inv for e in range(E.num_edges)}
    table, problems = _unitary_table(system, fam, n, needed)
    if "_conflict" in table:
        put("representation", table.pop("_conflict"))
    if not problems:
        for g in gens_and_inv:
            u = table[g]
            put("unitary", max(dev(adj(u) @ u - eye), dev(u @ adj(u) - eye)))
            for v in range(E.num_vertices):
                put("covariance_vertex", dev(u @ P[v] - P[A.act_vertex(g, v)] @ u))
            for e in range(E.num_edges):
                put("covariance_edge", dev(u @ S[e] - S[A.act_edge(g, e)] @ table[phi.value(g, e)]))
    if mode == "ck":
        regular, _ = classify_vertices(E)
        put("cuntz_krieger", 0.0)
        for v in regular:
            total = sum((S[e] @ adj(S[e]) for e in E.edges_into(v)), zero)
            put("cuntz_krieger", dev(P[v] - total))
    numeric = {k: v for k, v in rel.items() if isinstance(v, float)}
    ok = not problems and all(v <= tol for v in numeric.values())
    failed = sorted(k for k, v in numeric.items() if v > tol)
    return {"mode": mode, "tol": tol, "dimension": n, "pass": ok,
            "deviations": {k: numeric[k] for k in sorted(numeric)}, "failed": failed,
            "problems": problems}


def strings_m3_family(system: System) -> MatrixFamily:
    """For the strings graph over a 2-letter S with vertices ``(x0, x1,
    omega)``: ``S_x = E_{x, omega}``, ``P_v = E_{v, v}``, and every group
    element acting by the permutation matrix of its vertex action."""
    E, G, A = system.graph, system.group, system.action
    n = E.num_vertices
    omega = n - 1

    def unit(i, j):
        m = np.zeros((n, n), dtype=complex)
        m[i, j] = 1
        return m

    P = {v: unit(v, v) for v in range(n)}
    S = {e: unit(E.range[e], omega) for e in range(E.num_edges)}
    U = {}
    for g in G.generators:
        m = np.zeros((n, n), dtype=complex)
        for v in range(n):
            m[A.act_vertex(g, v), v] = 1
        U[g] = m
    return MatrixFamily(P, S, U)


def perturb_family(fam: MatrixFamily, eps: float, seed: int = 0) -> MatrixFamily:
    rng = np.random.default_rng(seed)

    def noisy(m):
        return m + eps * (rng.standard_normal(m.shape) + 1j * rng.standard_normal(m.shape))

    return MatrixFamily({k: noisy(m) for k, m in fam.P.items()},
                        {k: noisy(m) for k, m in fam.S.items()},
                        {k: noisy(m) for k, m in fam.U.items()})


def dimension_one_deviations(system: System, radii: np.ndarray, phases: np.ndarray,
                             u: np.ndarray, mode: str = "ck") -> np.ndarray:
    """Worst relation deviation of the 1x1 families ``P = 1``,
    ``S_e = radii[..., e] * phases[..., e]``, ``U(1) = u`` (broadcast over
    leading axes), for Z-systems on a bouquet."""
    E, A, phi = system.graph, system.action, system.cocycle
    S = radii * phases
    worst = np.zeros(np.broadcast_shapes(S.shape[:-1], u.shape))
    ne = E.num_edges
    for e in range(ne):
        worst = np.maximum(worst, np.abs(radii[..., e] ** 2 - 1))
        for f in range(ne):
            if f != e:
                worst = np.maximum(worst, radii[..., e] * radii[..., f])
    worst = np.maximum(worst, np.abs(np.abs(u) ** 2 - 1))
    for g in (1, -1):
        ug = u if g == 1 else np.conj(u)
        for e in range(ne):
            k = phi.value(g, e)
            uk = u ** k if k >= 0 else np.conj(u) ** (-k)
            worst = np.maximum(worst, np.abs(ug * S[..., e] - S[..., A.act_edge(g, e)] * uk))
    if mode == "ck":
        worst = np.maximum(worst, np.abs(1 - (radii ** 2).sum(axis=-1)))
    return worst


def scan_dimension_one(system: System, mode: str = "ck", steps: int = 12) -> dict:
    """Grid scan over all 1x1 families of a Z-system on a bouquet.  ``P = 1``
    is forced by the unit relation; ``S_e = r_e e^{i t_e}`` with ``r_e`` in
    ``[0, 1]`` and ``U(1) = e^{i s}``.  With two or more edges, isometry
    and orthogonal ranges alone force a deviation of at least ``d`` where
    ``1 - d <= |S_e|^2`` and ``|S_e| |S_f| <= d``, so ``d >= 1/2``."""
    E, G = system.graph, system.group
    if E.num_vertices != 1 or not isinstance(G, Integers):
        raise WordError("the dimension-one scan is for Z-systems on bouquets")
    ne = E.num_edges
    mags = np.linspace(0.0, 1.0, steps + 1)
    circle = np.exp(2j * np.pi * np.arange(steps) / steps)
    grids = np.meshgrid(*([mags] * ne + [circle] * ne + [circle]), indexing="ij")
    radii = np.stack(grids[:ne], axis=-1)
    phases = np.stack(grids[ne:2 * ne], axis=-1)
    worst = dimension_one_deviations(system, radii, phases, grids[-1], mode)
    flat = int(np.argmin(worst))
    idx = np.unravel_index(flat, worst.shape)
    best = float(worst[idx])
    return {"mode": mode, "grid": steps, "points": int(worst.size),
            "min_worst_deviation": best,
            "argmin": {"radii": [float(r) for r in radii[idx]],
                       "phase_steps": [int(i) for i in idx[ne:]]},
            "lower_bound": 0.5 if ne >= 2 else 0.0,
            "satisfiable_at_1e-9": best <= 1e-9}
