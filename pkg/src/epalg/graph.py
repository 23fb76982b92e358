"""Finite directed graphs and their paths.

Paths are read right to left: ``e1 e2 ... en`` is composable when
``s(e_i) == r(e_{i+1})``, its range is ``r(e1)`` and its source ``s(en)``.
Vertices and edges are addressed by dense indices; names are only for I/O.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Sequence


class GraphError(ValueError):
    pass


class Path(NamedTuple):
    """A path ``edges`` ending at the vertex ``source``.  Length-0 paths are
    vertices: ``Path((), v)``."""

    edges: tuple
    source: int

    @property
    def length(self) -> int:
        return len(self.edges)

    @property
    def is_vertex(self) -> bool:
        return not self.edges


@dataclass(frozen=True)
class Graph:
    vertices: tuple[str, ...]
    edges: tuple[str, ...]
    range: tuple[int, ...]
    source: tuple[int, ...]
    _vindex: dict = field(init=False, repr=False, compare=False, hash=False)
    _eindex: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        nv = len(self.vertices)
        if len(self.range) != len(self.edges) or len(self.source) != len(self.edges):
            raise GraphError("range and source must be defined on every edge")
        for v in self.range + self.source:
            if not 0 <= v < nv:
                raise GraphError(f"vertex index {v} out of range")
        if len(set(self.vertices)) != nv or len(set(self.edges)) != len(self.edges):
            raise GraphError("vertex and edge names must be unique")
        object.__setattr__(self, "_vindex", {n: i for i, n in enumerate(self.vertices)})
        object.__setattr__(self, "_eindex", {n: i for i, n in enumerate(self.edges)})

    @classmethod
    def from_edges(cls, vertices: Sequence, edges: Sequence[tuple]) -> "Graph":
        """``edges`` is a list of ``(name, range_name, source_name)``."""
        vertices = tuple(str(v) for v in vertices)
        vindex = {n: i for i, n in enumerate(vertices)}
        try:
            rng = tuple(vindex[str(r)] for _, r, _ in edges)
            src = tuple(vindex[str(s)] for _, _, s in edges)
        except KeyError as exc:
            raise GraphError(f"edge refers to unknown vertex {exc.args[0]!r}") from None
        return cls(vertices, tuple(str(n) for n, _, _ in edges), rng, src)

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def vertex_index(self, name: str) -> int:
        try:
            return self._vindex[str(name)]
        except KeyError:
            raise GraphError(f"unknown vertex {name!r}") from None

    def edge_index(self, name: str) -> int:
        try:
            return self._eindex[str(name)]
        except KeyError:
            raise GraphError(f"unknown edge {name!r}") from None

    # -- paths ---------------------------------------------------------------
    def path(self, edges: Sequence[int]) -> Path:
        edges = tuple(edges)
        if not edges:
            raise GraphError("use vertex_path for length-0 paths")
        for a, b in zip(edges, edges[1:]):
            if self.source[a] != self.range[b]:
                raise GraphError(f"edges {self.edges[a]} {self.edges[b]} are not composable")
        return Path(edges, self.source[edges[-1]])

    def vertex_path(self, v: int) -> Path:
        return Path((), v)

    def r(self, p: Path) -> int:
        return self.range[p.edges[0]] if p.edges else p.source

    def s(self, p: Path) -> int:
        return p.source

    def concat(self, p: Path, q: Path) -> Path:
        if p.source != self.r(q):
            raise GraphError("paths are not composable")
        return Path(p.edges + q.edges, q.source)

    def edges_into(self, v: int) -> list[int]:
        """``r^{-1}(v)``."""
        return [e for e in range(self.num_edges) if self.range[e] == v]

    def path_name(self, p: Path) -> str:
        if not p.edges:
            return self.vertices[p.source]
        return " ".join(self.edges[e] for e in p.edges)

    def to_spec(self) -> dict:
        return {
            "vertices": list(self.vertices),
            "edges": [{"name": n, "range": self.vertices[r], "source": self.vertices[s]}
                      for n, r, s in zip(self.edges, self.range, self.source)],
        }

    @classmethod
    def from_spec(cls, spec: dict) -> "Graph":
        try:
            vertices = spec["vertices"]
            edges = [(e["name"], e["range"], e["source"]) for e in spec.get("edges", [])]
        except (KeyError, TypeError) as exc:
            raise GraphError(f"malformed graph section: {exc}") from None
        return cls.from_edges(vertices, edges)


def paths_up_to(graph: Graph, length: int) -> list[Path]:
    """All composable paths of length ``<= length``, vertices first, then by
    length, then lexicographically by edge index."""
    if length < 0:
        raise GraphError("length must be non-negative")
    out = [Path((), v) for v in range(graph.num_vertices)]
    layer = [Path((e,), graph.source[e]) for e in range(graph.num_edges)]
    n = 1
    while n <= length and layer:
        out.extend(layer)
        if n == length:
            break
        layer = [Path(p.edges + (f,), graph.source[f])
                 for p in layer for f in range(graph.num_edges)
                 if graph.range[f] == p.source]
        n += 1
    return out


def classify_vertices(graph: Graph) -> tuple[frozenset, frozenset]:
    """``(regular, sources)`` where regular vertices are ``r(E^1)`` (they
    receive an edge) and sources are the rest."""
    regular = frozenset(graph.range)
    sources = frozenset(range(graph.num_vertices)) - regular
    return regular, sources


def is_row_finite(graph: Graph) -> bool:
    # Only finite graphs are represented, so r^{-1}(v) is always finite.
    return True
