"""Concrete discrete groups: integers, cyclic groups, permutation groups and
direct products.

Group elements are plain hashable Python values (``int`` for the integers
and cyclic groups, tuples for permutations and products).  The hot paths in
the rest of the package work on these raw values through the owning
:class:`Group`.  :class:`GroupElement` wraps a raw value together with its
parent group for the public element-level API, where mixing elements of
different groups must be caught.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Hashable, Iterable, Sequence


class GroupError(ValueError):
    pass


class Group:
    """Base class.  Subclasses implement ``op``, ``inv``, ``identity_value``."""

    kind: str = "abstract"
    is_finite: bool = False
    is_abelian: bool = False

    # -- structural identity -------------------------------------------------
    @property
    def key(self) -> tuple:
        raise NotImplementedError

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Group) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        return self.describe()

    def describe(self) -> str:
        raise NotImplementedError

    # -- raw-value arithmetic ------------------------------------------------
    @property
    def identity_value(self) -> Hashable:
        raise NotImplementedError

    def op(self, a, b):
        raise NotImplementedError

    def inv(self, a):
        raise NotImplementedError

    def contains(self, a) -> bool:
        raise NotImplementedError

    def power(self, a, n: int):
        """``a**n`` by repeated squaring; negative ``n`` allowed."""
        if n < 0:
            a, n = self.inv(a), -n
        result = self.identity_value
        while n:
            if n & 1:
                result = self.op(result, a)
            a = self.op(a, a)
            n >>= 1
        return result

    def is_identity(self, a) -> bool:
        return a == self.identity_value

    def conj(self, t, a):
        """``t a t^-1``."""
        return self.op(self.op(t, a), self.inv(t))

    def product(self, values: Iterable):
        result = self.identity_value
        for v in values:
            result = self.op(result, v)
        return result

    @property
    def generators(self) -> tuple:
        raise NotImplementedError

    def elements(self) -> list:
        if not self.is_finite:
            raise GroupError(f"cannot enumerate the infinite group {self.describe()}")
        return list(closure(self, self.generators))

    def ball(self, radius: int) -> list:
        """Finite sample used by verification grids: all elements for finite
        groups, ``|n| <= radius`` coordinatewise for infinite ones."""
        if self.is_finite:
            return self.elements()
        raise NotImplementedError

    # -- text format ---------------------------------------------------------
    def format(self, a) -> str:
        return str(a)

    def parse(self, text: str):
        raise NotImplementedError

    def coerce(self, value):
        """Accept a raw value, a string, or a GroupElement of this group."""
        if isinstance(value, GroupElement):
            if value.group != self:
                raise GroupError(f"element of {value.group!r} used in {self!r}")
            return value.value
        if isinstance(value, str):
            return self.parse(value)
        if isinstance(value, list):
            value = tuple(value)
        if not self.contains(value):
            raise GroupError(f"{value!r} is not an element of {self.describe()}")
        return value

    # -- element wrappers ----------------------------------------------------
    def __call__(self, value) -> "GroupElement":
        return GroupElement(self, self.coerce(value))

    def identity(self) -> "GroupElement":
        return GroupElement(self, self.identity_value)


class Integers(Group):
    kind = "integers"
    is_finite = False
    is_abelian = True

    @property
    def key(self):
        return ("integers",)

    def describe(self):
        return "Z"

    @property
    def identity_value(self):
        return 0

    def op(self, a, b):
        return a + b

    def inv(self, a):
        return -a

    def power(self, a, n):
        return a * n

    def contains(self, a):
        return isinstance(a, int) and not isinstance(a, bool)

    @property
    def generators(self):
        return (1,)

    def ball(self, radius):
        return list(range(-radius, radius + 1))

    def parse(self, text):
        try:
            return int(text.strip())
        except ValueError:
            raise GroupError(f"not an integer: {text!r}") from None


class Cyclic(Group):
    kind = "cyclic"
    is_finite = True
    is_abelian = True

    def __init__(self, order: int):
        if order < 1:
            raise GroupError("cyclic group order must be positive")
        self.order = order

    @property
    def key(self):
        return ("cyclic", self.order)

    def describe(self):
        return f"Z_{self.order}"

    @property
    def identity_value(self):
        return 0

    def op(self, a, b):
        return (a + b) % self.order

    def inv(self, a):
        return (-a) % self.order

    def power(self, a, n):
        return (a * n) % self.order

    def contains(self, a):
        return isinstance(a, int) and not isinstance(a, bool) and 0 <= a < self.order

    @property
    def generators(self):
        return (1 % self.order,)

    def elements(self):
        return list(range(self.order))

    def parse(self, text):
        try:
            return int(text.strip()) % self.order
        except ValueError:
            raise GroupError(f"not a residue: {text!r}") from None


class Permutation(Group):
    """Permutation group on ``{0..degree-1}``; the full symmetric group unless
    ``generators`` is given.  ``(p*q)(x) = p(q(x))``."""

    kind = "permutation"
    is_finite = True

    def __init__(self, degree: int, generators: Sequence[Sequence[int]] | None = None):
        if degree < 1:
            raise GroupError("permutation degree must be positive")
        self.degree = degree
        if generators is None:
            self._gens = _symmetric_generators(degree)
            self._full = True
        else:
            gens = tuple(tuple(g) for g in generators)
            for g in gens:
                if sorted(g) != list(range(degree)):
                    raise GroupError(f"{g} is not a permutation of degree {degree}")
            self._gens = gens
            self._full = False
        self._elements: list | None = None
        self.is_abelian = all(self.op(a, b) == self.op(b, a)
                              for a in self._gens for b in self._gens)

    @property
    def key(self):
        if self._full:
            return ("permutation", self.degree)
        return ("permutation", self.degree, frozenset(self.elements()))

    def describe(self):
        if self._full:
            return f"S_{self.degree}"
        return f"<{', '.join(self.format(g) for g in self._gens)}> <= S_{self.degree}"

    @property
    def identity_value(self):
        return tuple(range(self.degree))

    def op(self, a, b):
        return tuple(a[i] for i in b)

    def inv(self, a):
        out = [0] * len(a)
        for i, ai in enumerate(a):
            out[ai] = i
        return tuple(out)

    def contains(self, a):
        if not (isinstance(a, tuple) and sorted(a) == list(range(self.degree))):
            return False
        return self._full or a in set(self.elements())

    @property
    def generators(self):
        return self._gens

    def elements(self):
        if self._elements is None:
            if self._full:
                self._elements = [tuple(p) for p in itertools.permutations(range(self.degree))]
            else:
                self._elements = sorted(closure(self, self._gens))
        return list(self._elements)

    def format(self, a):
        return ",".join(str(i) for i in a)

    def parse(self, text):
        text = text.strip().strip("[]()")
        try:
            value = tuple(int(t) for t in text.replace(" ", ",").split(",") if t)
        except ValueError:
            raise GroupError(f"not a permutation: {text!r}") from None
        if not self.contains(value):
            raise GroupError(f"{text!r} is not an element of {self.describe()}")
        return value


class DirectProduct(Group):
    kind = "product"

    def __init__(self, factors: Sequence[Group]):
        if not factors:
            raise GroupError("direct product needs at least one factor")
        self.factors = tuple(factors)
        self.is_finite = all(f.is_finite for f in self.factors)
        self.is_abelian = all(f.is_abelian for f in self.factors)

    @property
    def key(self):
        return ("product",) + tuple(f.key for f in self.factors)

    def describe(self):
        return " x ".join(f.describe() for f in self.factors)

    @property
    def identity_value(self):
        return tuple(f.identity_value for f in self.factors)

    def op(self, a, b):
        return tuple(f.op(x, y) for f, x, y in zip(self.factors, a, b))

    def inv(self, a):
        return tuple(f.inv(x) for f, x in zip(self.factors, a))

    def contains(self, a):
        return (isinstance(a, tuple) and len(a) == len(self.factors)
                and all(f.contains(x) for f, x in zip(self.factors, a)))

    @property
    def generators(self):
        gens = []
        for i, f in enumerate(self.factors):
            for g in f.generators:
                v = list(self.identity_value)
                v[i] = g
                gens.append(tuple(v))
        return tuple(gens)

    def elements(self):
        if not self.is_finite:
            raise GroupError(f"cannot enumerate the infinite group {self.describe()}")
        return [tuple(p) for p in itertools.product(*(f.elements() for f in self.factors))]

    def ball(self, radius):
        return [tuple(p) for p in itertools.product(*(f.ball(radius) for f in self.factors))]

    def format(self, a):
        return ";".join(f.format(x) for f, x in zip(self.factors, a))

    def parse(self, text):
        parts = text.strip().strip("()").split(";")
        if len(parts) != len(self.factors):
            raise GroupError(f"expected {len(self.factors)} ';'-separated components in {text!r}")
        return tuple(f.parse(p) for f, p in zip(self.factors, parts))


def _symmetric_generators(n: int) -> tuple:
    if n == 1:
        return ((0,),)
    swap = (1, 0) + tuple(range(2, n))
    cycle = tuple(range(1, n)) + (0,)
    return (swap, cycle) if n > 2 else (swap,)


def closure(group: Group, gens: Iterable) -> set:
    """Subgroup generated by ``gens`` (finite groups only)."""
    els = {group.identity_value}
    frontier = [group.identity_value]
    gens = list(gens)
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                c = group.op(g, a)
                if c not in els:
                    els.add(c)
                    nxt.append(c)
        frontier = nxt
    return els


def subgroups(group: Group) -> list[frozenset]:
    """All subgroups of a finite group, smallest first."""
    if not group.is_finite:
        raise GroupError("subgroup enumeration needs a finite group")
    elements = group.elements()
    found = {frozenset(closure(group, [g])) for g in elements}
    frontier = set(found)
    while frontier:
        new = set()
        for h in frontier:
            for k in found:
                j = frozenset(closure(group, list(h | k)))
                if j not in found and j not in new:
                    new.add(j)
        found |= new
        frontier = new
    return sorted(found, key=lambda s: (len(s), sorted(map(repr, s))))


def homomorphisms(source: Group, subgroup: Iterable, target: Group) -> list[dict]:
    """All homomorphisms from the finite subgroup ``subgroup`` of ``source``
    to the finite group ``target``, as full dictionaries."""
    elements = sorted(subgroup, key=repr)
    gens = _small_generating_set(source, elements)
    images = target.elements()
    homs = []
    for choice in itertools.product(images, repeat=len(gens)):
        hom = extend_hom(source, target, dict(zip(gens, choice)))
        if hom is not None:
            homs.append(hom)
    return homs


def _small_generating_set(group: Group, elements: list) -> list:
    gens: list = []
    span = {group.identity_value}
    for g in elements:
        if g not in span:
            gens.append(g)
            span = closure(group, gens)
    return gens


def extend_hom(source: Group, target: Group, on_gens: dict) -> dict | None:
    """Extend generator images to a homomorphism, or None if inconsistent."""
    hom = {source.identity_value: target.identity_value}
    frontier = [source.identity_value]
    while frontier:
        nxt = []
        for a in frontier:
            for g, tg in on_gens.items():
                c = source.op(g, a)
                tc = target.op(tg, hom[a])
                if c in hom:
                    if hom[c] != tc:
                        return None
                else:
                    hom[c] = tc
                    nxt.append(c)
        frontier = nxt
    return hom


# -- element-level API -------------------------------------------------------

@dataclass(frozen=True)
class GroupElement:
    group: Group
    value: Any

    def __mul__(self, other: "GroupElement") -> "GroupElement":
        return multiply(self, other)

    def inverse(self) -> "GroupElement":
        return inverse(self)

    def __str__(self):
        return self.group.format(self.value)


def _check_same(g: GroupElement, h: GroupElement) -> None:
    if g.group != h.group:
        raise GroupError(f"cannot combine elements of {g.group!r} and {h.group!r}")


def multiply(g: GroupElement, h: GroupElement) -> GroupElement:
    _check_same(g, h)
    return GroupElement(g.group, g.group.op(g.value, h.value))


def inverse(g: GroupElement) -> GroupElement:
    return GroupElement(g.group, g.group.inv(g.value))


def identity(group: Group) -> GroupElement:
    return group.identity()


def enumerate_group(group: Group) -> list[GroupElement]:
    return [GroupElement(group, v) for v in group.elements()]


def group_from_spec(spec: dict) -> Group:
    """Build a group from its TOML/JSON descriptor."""
    kind = spec.get("kind")
    if kind == "integers":
        return Integers()
    if kind == "cyclic":
        return Cyclic(int(spec["order"]))
    if kind == "permutation":
        gens = spec.get("generators")
        return Permutation(int(spec["degree"]), gens)
    if kind == "product":
        return DirectProduct([group_from_spec(f) for f in spec["factors"]])
    raise GroupError(f"unknown group kind {kind!r}")


def group_to_spec(group: Group) -> dict:
    if isinstance(group, Integers):
        return {"kind": "integers"}
    if isinstance(group, Cyclic):
        return {"kind": "cyclic", "order": group.order}
    if isinstance(group, Permutation):
        out: dict = {"kind": "permutation", "degree": group.degree}
        if not group._full:
            out["generators"] = [list(g) for g in group.generators]
        return out
    if isinstance(group, DirectProduct):
        return {"kind": "product", "factors": [group_to_spec(f) for f in group.factors]}
    raise GroupError(f"cannot serialize {group!r}")

