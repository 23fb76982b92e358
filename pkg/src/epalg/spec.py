"""TOML system definitions, named builders, and content fingerprints.

A system file either spells out a system::

    schema_version = 1
    name = "epk(2,1)"

    [group]
    kind = "integers"

    [graph]
    vertices = ["v"]
    edges = [{name = "0", range = "v", source = "v"},
             {name = "1", range = "v", source = "v"}]

    [[action.generator]]
    element = "1"
    vertices = {v = "v"}
    edges = {"0" = "1", "1" = "0"}

    [cocycle]
    kind = "generating"          # Z only: values of phi(1, e)
    values = {"0" = "0", "1" = "1"}

or invokes a builder::

    schema_version = 1
    [construct]
    builder = "epk"
    a = 2
    b = 1

Finite groups list generator images under ``[[action.generator]]`` (any
generating set, or every element) and give the cocycle either as
``kind = "generators"`` with ``[[cocycle.generator]]`` entries or as
``kind = "table"`` with one ``[[cocycle.row]]`` per group element.
Group elements are strings in the group's text format.
"""
from __future__ import annotations

import hashlib
import json
import sys
from dataclasses import dataclass
from typing import Callable

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib
import tomli_w

from .cocycle import (ActionError, FiniteAction, GeneratingCocycle, GraphAction, IntegerAction,
                      System, TableCocycle)
from .constructions import (bouquet_system, dynamical_system_graph, epk_action, epk_cocycle,
                            epk_system, integer_endomorphism_system, katsura_system,
                            rotation_commuting_system, sink_free_system, strings_system,
                            translation_strings_system, tree_system)
from .graph import Graph, GraphError
from .group import Cyclic, GroupError, Integers, group_from_spec, group_to_spec

SCHEMA_VERSION = 1


class SpecError(ValueError):
    """Malformed or inconsistent system definition.  ``cocycle`` is set
    when the only problem is that cocycle data fail to extend."""

    def __init__(self, message: str, cocycle: bool = False):
        super().__init__(message)
        self.cocycle = cocycle


# -- builders -------------------------------------------------------------------------

@dataclass(frozen=True)
class Builder:
    fn: Callable[..., System]
    params: tuple
    doc: str


def _epk_strings(a: int, b: int) -> System:
    action = epk_action(a, b)
    return strings_system(action, epk_cocycle(a, b, action), f"epk_strings({a},{b})")


def _endomorphism(a: int, b: int) -> System:
    action, cocycle = integer_endomorphism_system(a, b)
    return bouquet_system(action, cocycle, f"endomorphism({a},{b})")


def _katsura(vertices: list, edges: list, B: list | None = None) -> System:
    graph = Graph.from_edges(vertices, [tuple(e) for e in edges])
    table = {(str(r), str(s)): int(b) for r, s, b in (B or [])}
    return katsura_system(graph, table)


def _dynamical(sigma: list, tau: list, xi: list) -> System:
    return dynamical_system_graph(sigma, tau, xi)[0]


def _rotation(p: int, k: int, h_order: int = 1, h_step: int = 0) -> System:
    return rotation_commuting_system(p, k, h_order, h_step)[0]


def _tree(a: int, b: int, length: int = 2) -> System:
    action = epk_action(a, b)
    return tree_system(action, epk_cocycle(a, b, action), length).system


def _sink_free(a: int, b: int, t_size: int = 1) -> System:
    action = epk_action(a, b)
    t_action = IntegerAction([(y + 1) % t_size for y in range(t_size)])
    return sink_free_system(action, epk_cocycle(a, b, action), t_action,
                            f"sink_free({a},{b},{t_size})")


BUILDERS: dict[str, Builder] = {
    "epk": Builder(epk_system, ("a", "b"), "bouquet on Z_a with sigma_{a,b}, phi_{a,b}"),
    "o21": Builder(lambda: epk_system(2, 1), (), "epk(2,1)"),
    "strings": Builder(lambda order=2: translation_strings_system(Cyclic(order)), ("order",),
                       "strings graph over Z_order acting on itself, phi(g, x) = g"),
    "epk_strings": Builder(_epk_strings, ("a", "b"), "strings graph over the EPK system"),
    "endomorphism": Builder(_endomorphism, ("a", "b"),
                            "bouquet for rho(m) = a m, tau(m) = b m on Z"),
    "katsura": Builder(_katsura, ("vertices", "edges", "B"),
                       "EPK blocks pasted into a graph; edges are [name, range, source], "
                       "B entries [range, source, b]"),
    "dynamical": Builder(_dynamical, ("sigma", "tau", "xi"),
                         "E^0 = E^1 = S, r = sigma, Z acting by tau, generating function xi"),
    "rotation": Builder(_rotation, ("p", "k", "h_order", "h_step"),
                        "commuting rotations on Z_p with phi0(m, z) = (1 + k p) m"),
    "tree": Builder(_tree, ("a", "b", "length"), "rooted tree lift of the EPK system"),
    "sink_free": Builder(_sink_free, ("a", "b", "t_size"), "sink-free graph K over EPK"),
}


def build(name: str, params: dict | None = None) -> System:
    params = dict(params or {})
    if name not in BUILDERS:
        raise SpecError(f"unknown builder {name!r}; known: {', '.join(sorted(BUILDERS))}")
    builder = BUILDERS[name]
    unknown = sorted(set(params) - set(builder.params))
    if unknown:
        raise SpecError(f"builder {name!r} takes {list(builder.params)}, got {unknown}")
    try:
        return builder.fn(**params)
    except TypeError as exc:
        raise SpecError(f"builder {name!r}: {exc}") from None
    except (ValueError, ZeroDivisionError) as exc:
        raise SpecError(f"builder {name!r}: {exc}") from None


def parse_params(items: list[str]) -> dict:
    """``["a=2", "b=1", "xi=[1,0]"]`` -> ``{"a": 2, "b": 1, "xi": [1, 0]}``;
    values are parsed as TOML."""
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or not key:
            raise SpecError(f"expected key=value, got {item!r}")
        try:
            out[key.strip()] = tomllib.loads(f"x = {value}")["x"]
        except tomllib.TOMLDecodeError:
            out[key.strip()] = value
    return out


# -- reading ----------------------------------------------------------------------------

def loads_system(text: str) -> System:
    try:
        doc = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        raise SpecError(f"TOML syntax error: {exc}") from None
    return system_from_spec(doc)


def load_system(path: str) -> System:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise SpecError(f"cannot read {path}: {exc.strerror}") from None
    return loads_system(text)


def _require(doc: dict, key: str, where: str, kind=dict):
    if key not in doc:
        raise SpecError(f"missing {where}{key}")
    value = doc[key]
    if not isinstance(value, kind):
        raise SpecError(f"{where}{key} must be a {kind.__name__}")
    return value


def system_from_spec(doc: dict) -> System:
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        raise SpecError(f"schema_version must be {SCHEMA_VERSION}, got {version!r}")
    if "construct" in doc:
        c = dict(_require(doc, "construct", ""))
        name = c.pop("builder", None)
        if not isinstance(name, str):
            raise SpecError("construct.builder must name a builder")
        return build(name, c)
    try:
        G = group_from_spec(_require(doc, "group", ""))
    except (GroupError, KeyError, TypeError, ValueError) as exc:
        raise SpecError(f"group: {exc}") from None
    try:
        E = Graph.from_spec(_require(doc, "graph", ""))
    except GraphError as exc:
        raise SpecError(f"graph: {exc}") from None
    action = _read_action(doc, G, E)
    cocycle = _read_cocycle(doc, G, E, action.edge_action)
    try:
        return System(E, action, cocycle, str(doc.get("name", "")))
    except ActionError as exc:
        raise SpecError(str(exc)) from None


def _element(G, text, where: str):
    try:
        return G.coerce(text)
    except GroupError as exc:
        raise SpecError(f"{where}: {exc}") from None


def _images(table, names: tuple, index: Callable, where: str) -> list[int]:
    if not isinstance(table, dict):
        raise SpecError(f"{where} must be a table of name = image")
    missing = [n for n in names if n not in table]
    if missing:
        raise SpecError(f"{where} has no image for {missing[0]!r}")
    extra = sorted(set(table) - set(names))
    if extra:
        raise SpecError(f"{where} names unknown point {extra[0]!r}")
    try:
        return [index(table[n]) for n in names]
    except GraphError as exc:
        raise SpecError(f"{where}: {exc}") from None


def _read_action(doc: dict, G, E: Graph) -> GraphAction:
    gens = _require(_require(doc, "action", ""), "generator", "action.", list)
    vimg, eimg = {}, {}
    for i, entry in enumerate(gens):
        where = f"action.generator[{i}]"
        if not isinstance(entry, dict):
            raise SpecError(f"{where} must be a table")
        g = _element(G, str(_require(entry, "element", where + ".", str)), where)
        vimg[g] = _images(entry.get("vertices", {v: v for v in E.vertices}), E.vertices,
                          E.vertex_index, where + ".vertices")
        eimg[g] = _images(entry.get("edges", {}), E.edges, E.edge_index, where + ".edges")
    try:
        if isinstance(G, Integers):
            if set(vimg) != {1} and set(vimg) != {-1}:
                raise SpecError("actions of Z are given by the image of 1 (or -1)")
            (g,) = vimg
            tau_v, tau_e = vimg[g], eimg[g]
            if g == -1:
                tau_v, tau_e = _invert(tau_v), _invert(tau_e)
            return GraphAction(G, E, IntegerAction(tau_v, E.vertices), IntegerAction(tau_e, E.edges))
        if not G.is_finite:
            raise SpecError(f"{G.describe()} is not supported in system files")
        return GraphAction(G, E, FiniteAction.from_generators(G, E.num_vertices, vimg, E.vertices),
                           FiniteAction.from_generators(G, E.num_edges, eimg, E.edges))
    except ActionError as exc:
        raise SpecError(f"action: {exc}") from None


def _invert(perm: list[int]) -> list[int]:
    out = [0] * len(perm)
    for i, p in enumerate(perm):
        out[p] = i
    return out


def _values(G, table, E: Graph, where: str) -> list:
    if not isinstance(table, dict):
        raise SpecError(f"{where} must be a table of edge = element")
    missing = [n for n in E.edges if n not in table]
    if missing:
        raise SpecError(f"{where} has no value for edge {missing[0]!r}")
    extra = sorted(set(table) - set(E.edges))
    if extra:
        raise SpecError(f"{where} names unknown edge {extra[0]!r}")
    return [_element(G, str(table[n]), f"{where}.{n}") for n in E.edges]


def _read_cocycle(doc: dict, G, E: Graph, edge_action):
    c = _require(doc, "cocycle", "")
    kind = c.get("kind")
    try:
        if kind == "generating":
            if not isinstance(G, Integers):
                raise SpecError("generating functions are for G = Z")
            return GeneratingCocycle(edge_action, G, _values(G, c.get("values"), E,
                                                             "cocycle.values"))
        if kind in ("generators", "table"):
            if not G.is_finite:
                raise SpecError(f"cocycle kind {kind!r} needs a finite group")
            key = "generator" if kind == "generators" else "row"
            rows = _require(c, key, "cocycle.", list)
            table = {}
            for i, entry in enumerate(rows):
                where = f"cocycle.{key}[{i}]"
                g = _element(G, str(_require(entry, "element", where + ".", str)), where)
                table[g] = tuple(_values(G, entry.get("values"), E, where + ".values"))
            if kind == "table":
                return TableCocycle(edge_action, G, table)
            try:
                return TableCocycle.from_generators(edge_action, G, table)
            except ActionError as exc:
                raise SpecError(f"cocycle: {exc}", cocycle=True) from None
    except ActionError as exc:
        raise SpecError(f"cocycle: {exc}") from None
    raise SpecError("cocycle.kind must be generating, generators or table")


# -- writing ----------------------------------------------------------------------------

def system_to_spec(system: System) -> dict:
    """Explicit (builder-free) description; round-trips through
    ``system_from_spec``."""
    E, G, A, phi = system.graph, system.group, system.action, system.cocycle
    if isinstance(G, Integers):
        gens = [1]
    elif G.is_finite:
        gens = list(G.generators)
    else:
        raise SpecError(f"{G.describe()} systems cannot be written as TOML")
    doc: dict = {"schema_version": SCHEMA_VERSION}
    if system.name:
        doc["name"] = system.name
    doc["group"] = group_to_spec(G)
    doc["graph"] = E.to_spec()
    doc["action"] = {"generator": [
        {"element": G.format(g),
         "vertices": {E.vertices[v]: E.vertices[A.act_vertex(g, v)] for v in range(E.num_vertices)},
         "edges": {E.edges[e]: E.edges[A.act_edge(g, e)] for e in range(E.num_edges)}}
        for g in gens]}
    if isinstance(G, Integers):
        doc["cocycle"] = {"kind": "generating",
                          "values": {E.edges[e]: G.format(phi.value(1, e))
                                     for e in range(E.num_edges)}}
    else:
        doc["cocycle"] = {"kind": "generators", "generator": [
            {"element": G.format(g),
             "values": {E.edges[e]: G.format(phi.value(g, e)) for e in range(E.num_edges)}}
            for g in gens]}
    return doc


def dumps_system(system: System) -> str:
    return tomli_w.dumps(system_to_spec(system))


def fingerprint(system: System) -> str:
    """sha256 of the canonical JSON of the explicit description."""
    try:
        doc = system_to_spec(system)
        doc.pop("name", None)
    except SpecError:
        doc = {"name": system.name}
    blob = json.dumps(doc, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()
