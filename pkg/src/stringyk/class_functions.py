"""Invariant functions on G (per conjugacy class) and on commuting pairs (per orbit).

Four products live here: pointwise, convolution on C(G), and on commuting
pairs the second-slot convolution over centralizers and the Pontryagin
(first-slot) convolution.
"""

from __future__ import annotations

import weakref
from functools import lru_cache
from typing import Callable, Iterable, Sequence

import numpy as np

from .cyclotomic import Cyclotomic, as_cyclotomic
from .groups import FiniteGroup, FiniteGSet, commuting_pairs

__all__ = [
    "ClassFunction",
    "PairClassFunction",
    "pair_set",
    "pointwise",
    "convolution",
    "pair_conv_second",
    "pair_pontryagin",
    "structure_constants",
    "count_table",
    "table_to_json",
    "PRODUCTS",
]

ZERO = Cyclotomic(0)

_PAIR_CACHE: "weakref.WeakKeyDictionary[FiniteGroup, FiniteGSet]" = weakref.WeakKeyDictionary()


def pair_set(group: FiniteGroup) -> FiniteGSet:
    """The commuting-pairs G-set, cached per group."""
    ps = _PAIR_CACHE.get(group)
    if ps is None:
        ps = commuting_pairs(group)
        ps.index = {p: i for i, p in enumerate(ps.labels)}
        _PAIR_CACHE[group] = ps
    return ps


class _Invariant:
    __slots__ = ("group", "values")

    def __init__(self, group: FiniteGroup, values: Iterable):
        self.group = group
        self.values = tuple(as_cyclotomic(v) for v in values)
        if len(self.values) != self._size():
            raise ValueError(f"expected {self._size()} values, got {len(self.values)}")

    def _size(self) -> int:
        raise NotImplementedError

    def _check(self, other) -> None:
        if type(other) is not type(self):
            raise TypeError("mixing class functions of different kinds")
        if other.group is not self.group and not other.group.same_table(self.group):
            raise ValueError("class functions live on different groups")

    def __add__(self, other):
        self._check(other)
        return type(self)(self.group, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other):
        self._check(other)
        return type(self)(self.group, [a - b for a, b in zip(self.values, other.values)])

    def __neg__(self):
        return type(self)(self.group, [-a for a in self.values])

    def scale(self, c) -> _Invariant:
        c = as_cyclotomic(c)
        return type(self)(self.group, [c * a for a in self.values])

    def __rmul__(self, c):
        return self.scale(c)

    def __eq__(self, other):
        return type(other) is type(self) and self.group.same_table(other.group) and self.values == other.values

    def __hash__(self):
        return hash((type(self).__name__, self.values))

    def is_zero(self) -> bool:
        return not any(self.values)

    def __repr__(self):
        return f"{type(self).__name__}({[str(v) for v in self.values]})"


class ClassFunction(_Invariant):
    """A function on G constant on conjugacy classes, stored per class."""

    __slots__ = ()

    def _size(self) -> int:
        return len(self.group.conjugacy)

    def __call__(self, g: int) -> Cyclotomic:
        return self.values[self.group.conjugacy.class_of[g]]

    @classmethod
    def from_function(cls, group: FiniteGroup, f: Callable[[int], object]) -> ClassFunction:
        return cls(group, [f(r) for r in group.conjugacy.representatives])

    @classmethod
    def constant(cls, group: FiniteGroup, c=1) -> ClassFunction:
        return cls(group, [c] * len(group.conjugacy))

    @classmethod
    def indicator(cls, group: FiniteGroup, class_index: int) -> ClassFunction:
        return cls(group, [int(i == class_index) for i in range(len(group.conjugacy))])

    @classmethod
    def delta_identity(cls, group: FiniteGroup) -> ClassFunction:
        return cls.indicator(group, group.conjugacy.class_of[group.identity])

    def conjugate(self) -> ClassFunction:
        return ClassFunction(self.group, [v.conjugate() for v in self.values])

    def inner(self, other: ClassFunction) -> Cyclotomic:
        """(1/|G|) sum_g f(g) conj(h(g))."""
        self._check(other)
        sizes = self.group.conjugacy.sizes
        s = ZERO
        for n, a, b in zip(sizes, self.values, other.values):
            s = s + a * b.conjugate() * n
        return s / self.group.order


class PairClassFunction(_Invariant):
    """A function on commuting pairs invariant under simultaneous conjugation."""

    __slots__ = ()

    def _size(self) -> int:
        return len(pair_set(self.group).orbits)

    def __call__(self, g: int, h: int) -> Cyclotomic:
        ps = pair_set(self.group)
        return self.values[ps.orbit_of[ps.index[(g, h)]]]

    @classmethod
    def from_function(cls, group: FiniteGroup, f: Callable[[int, int], object]) -> PairClassFunction:
        ps = pair_set(group)
        return cls(group, [f(*ps.labels[orb[0]]) for orb in ps.orbits])

    @classmethod
    def constant(cls, group: FiniteGroup, c=1) -> PairClassFunction:
        return cls(group, [c] * len(pair_set(group).orbits))

    @classmethod
    def indicator(cls, group: FiniteGroup, orbit_index: int) -> PairClassFunction:
        return cls(group, [int(i == orbit_index) for i in range(len(pair_set(group).orbits))])

    @classmethod
    def orbit_representatives(cls, group: FiniteGroup) -> list[tuple[int, int]]:
        ps = pair_set(group)
        return [ps.labels[orb[0]] for orb in ps.orbits]


def pointwise(f1: _Invariant, f2: _Invariant) -> _Invariant:
    f1._check(f2)
    return type(f1)(f1.group, [a * b for a, b in zip(f1.values, f2.values)])


def convolution(f1: ClassFunction, f2: ClassFunction) -> ClassFunction:
    """(f1 * f2)(g) = sum over g1 g2 = g of f1(g1) f2(g2)."""
    f1._check(f2)
    G = f1.group

    def value(g: int) -> Cyclotomic:
        s = ZERO
        for g1 in G.elements:
            a = f1(g1)
            if a:
                s = s + a * f2(G(G.inverse(g1), g))
        return s

    return ClassFunction.from_function(G, value)


def pair_conv_second(f1: PairClassFunction, f2: PairClassFunction) -> PairClassFunction:
    """(f1 *_2 f2)(g, h) = sum over h1 h2 = h inside Z(g) of f1(g, h1) f2(g, h2)."""
    f1._check(f2)
    G = f1.group

    def value(g: int, h: int) -> Cyclotomic:
        s = ZERO
        for h1 in G.centralizer(g):
            a = f1(g, h1)
            if a:
                s = s + a * f2(g, G(G.inverse(h1), h))
        return s

    return PairClassFunction.from_function(G, value)


def pair_pontryagin(f1: PairClassFunction, f2: PairClassFunction) -> PairClassFunction:
    """(f1 . f2)(g, h) = sum over g1 g2 = g with g1, g2 in Z(h) of f1(g1, h) f2(g2, h)."""
    f1._check(f2)
    G = f1.group

    def value(g: int, h: int) -> Cyclotomic:
        s = ZERO
        for g1 in G.centralizer(h):
            a = f1(g1, h)
            if a:
                s = s + a * f2(G(G.inverse(g1), g), h)
        return s

    return PairClassFunction.from_function(G, value)


PRODUCTS: dict[str, Callable] = {
    "pointwise": pointwise,
    "convolution": convolution,
    "conv_second": pair_conv_second,
    "pontryagin": pair_pontryagin,
}

_COUNTED = {
    (pointwise, ClassFunction),
    (convolution, ClassFunction),
    (pointwise, PairClassFunction),
    (pair_conv_second, PairClassFunction),
    (pair_pontryagin, PairClassFunction),
}


def structure_constants(
    group: FiniteGroup, product: Callable, kind: type = ClassFunction
) -> tuple[tuple[tuple[Cyclotomic, ...], ...], ...]:
    """table[i][j] = coordinates of product(b_i, b_j) in the orbit-indicator basis."""
    return _structure_constants(group, product, kind)


@lru_cache(maxsize=128)
def _structure_constants(group, product, kind):
    if (product, kind) in _COUNTED:
        counts = count_table(group, product, kind)
        return tuple(tuple(tuple(Cyclotomic(int(c)) for c in vec) for vec in row) for row in counts)
    n = len(kind.constant(group).values)
    basis = [kind.indicator(group, i) for i in range(n)]
    return tuple(tuple(product(a, b).values for b in basis) for a in basis)


def count_table(group: FiniteGroup, product: Callable, kind: type = ClassFunction) -> np.ndarray:
    """Integer structure constants of a built-in product, by counting factorizations.

    c[i, j, l] is the value of b_i * b_j at the representative of orbit l, so
    only triples whose product lands on a representative are enumerated.
    """
    G = group
    if kind is ClassFunction:
        orbit = G.conjugacy.class_of
        reps = set(G.conjugacy.representatives)
        n = len(G.conjugacy)
        out = np.zeros((n, n, n), dtype=np.int64)
        if product is pointwise:
            out[np.arange(n), np.arange(n), np.arange(n)] = 1
        elif product is convolution:
            for x in G.elements:
                for y in G.elements:
                    z = G(x, y)
                    if z in reps:
                        out[orbit[x], orbit[y], orbit[z]] += 1
        else:
            raise ValueError("no counting rule for this product")
        return out
    ps = pair_set(G)
    orbit_of = ps.orbit_of
    ix = ps.index
    reps = {ps.labels[o[0]] for o in ps.orbits}
    n = len(ps.orbits)
    out = np.zeros((n, n, n), dtype=np.int64)
    if product is pointwise:
        out[np.arange(n), np.arange(n), np.arange(n)] = 1
    elif product is pair_conv_second:
        for g in G.elements:
            cent = G.centralizer(g)
            for h1 in cent:
                for h2 in cent:
                    t = (g, G(h1, h2))
                    if t in reps:
                        out[orbit_of[ix[(g, h1)]], orbit_of[ix[(g, h2)]], orbit_of[ix[t]]] += 1
    elif product is pair_pontryagin:
        for h in G.elements:
            cent = G.centralizer(h)
            for g1 in cent:
                for g2 in cent:
                    t = (G(g1, g2), h)
                    if t in reps:
                        out[orbit_of[ix[(g1, h)]], orbit_of[ix[(g2, h)]], orbit_of[ix[t]]] += 1
    else:
        raise ValueError("no counting rule for this product")
    return out


def table_to_json(table: Sequence[Sequence[Sequence[Cyclotomic]]]) -> list:
    """Triples (i, j, coefficient vector) in canonical basis order."""
    return [
        [i, j, [c.to_json() for c in vec]]
        for i, row in enumerate(table)
        for j, vec in enumerate(row)
    ]
