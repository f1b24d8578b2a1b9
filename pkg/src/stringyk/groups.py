"""Finite groups as dense multiplication tables, and finite G-sets."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Callable, Hashable, Iterable, Sequence

import numpy as np

__all__ = [
    "DEFAULT_ORDER_CAP",
    "GroupError",
    "FiniteGroup",
    "ConjugacyData",
    "FiniteGSet",
    "InertiaSet",
    "GSetMap",
    "cyclic",
    "dihedral",
    "quaternion8",
    "symmetric",
    "alternating",
    "direct_product",
    "from_permutations",
    "from_table",
    "builtin",
    "commuting_pairs",
    "inertia_set",
    "point_set",
    "conjugation_set",
    "translation_set",
]

DEFAULT_ORDER_CAP = 64


class GroupError(ValueError):
    """Invalid group or G-set data."""


@dataclass(frozen=True)
class ConjugacyData:
    classes: tuple[tuple[int, ...], ...]
    class_of: tuple[int, ...]
    centralizers: tuple[tuple[int, ...], ...]

    @property
    def representatives(self) -> tuple[int, ...]:
        return tuple(c[0] for c in self.classes)

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(c) for c in self.classes)

    def __len__(self) -> int:
        return len(self.classes)


class FiniteGroup:
    """A group on the elements 0..order-1 given by its multiplication table."""

    def __init__(
        self,
        mul,
        names: Sequence[str] | None = None,
        name: str = "G",
        perms: Sequence[tuple[int, ...]] | None = None,
        validate: bool = True,
    ):
        mul = np.asarray(mul, dtype=np.int64)
        n = mul.shape[0]
        if mul.shape != (n, n) or n == 0:
            raise GroupError("multiplication table must be a nonempty square array")
        if mul.min() < 0 or mul.max() >= n:
            raise GroupError("multiplication table has out-of-range entries")
        self.mul = mul
        self.mul.setflags(write=False)
        self.order = n
        self.name = name
        self.names = list(names) if names is not None else [f"g{i}" for i in range(n)]
        self.perms = list(perms) if perms is not None else None
        self._subgroups: dict[tuple[int, ...], tuple[FiniteGroup, list[int]]] = {}
        ids = [e for e in range(n) if all(mul[e] == np.arange(n)) and all(mul[:, e] == np.arange(n))]
        if not ids:
            raise GroupError("multiplication table has no two-sided identity")
        self.identity = ids[0]
        inv = np.full(n, -1, dtype=np.int64)
        for a in range(n):
            hits = np.nonzero(mul[a] == self.identity)[0]
            if len(hits) != 1 or mul[hits[0], a] != self.identity:
                raise GroupError(f"element {a} has no two-sided inverse")
            inv[a] = hits[0]
        self.inv = inv
        self.inv.setflags(write=False)
        if validate:
            self.validate()

    def validate(self) -> None:
        m = self.mul
        lhs = m[m, :]  # (ab)c
        rhs = m[:, m]  # a(bc)
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            a, b, c = (int(x) for x in bad[0])
            raise GroupError(f"associativity fails for triple ({a}, {b}, {c})")

    def __len__(self) -> int:
        return self.order

    def __repr__(self) -> str:
        return f"FiniteGroup({self.name}, order={self.order})"

    @property
    def elements(self) -> range:
        return range(self.order)

    def __call__(self, a: int, b: int) -> int:
        return int(self.mul[a, b])

    def product(self, *elems: int) -> int:
        out = self.identity
        for g in elems:
            out = int(self.mul[out, g])
        return out

    def inverse(self, a: int) -> int:
        return int(self.inv[a])

    def conj(self, k: int, g: int) -> int:
        """k g k^{-1}."""
        return int(self.mul[self.mul[k, g], self.inv[k]])

    def power(self, g: int, k: int) -> int:
        if k < 0:
            g, k = self.inverse(g), -k
        return self._powers(g)[k % self.element_order(g)]

    def _powers(self, g: int) -> list[int]:
        return self._power_table[g]

    @cached_property
    def _power_table(self) -> list[list[int]]:
        table = []
        for g in range(self.order):
            seq = [self.identity]
            x = g
            while x != self.identity:
                seq.append(x)
                x = int(self.mul[x, g])
            table.append(seq)
        return table

    def element_order(self, g: int) -> int:
        return len(self._power_table[g])

    @cached_property
    def exponent(self) -> int:
        from math import lcm

        return lcm(*(self.element_order(g) for g in range(self.order)))

    def is_abelian(self) -> bool:
        return bool((self.mul == self.mul.T).all())

    def commute(self, a: int, b: int) -> bool:
        return self.mul[a, b] == self.mul[b, a]

    def generated(self, gens: Iterable[int]) -> tuple[int, ...]:
        """Sorted elements of the subgroup generated by gens."""
        seen = {self.identity}
        frontier = [self.identity]
        gens = list(gens)
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = int(self.mul[x, g])
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return tuple(sorted(seen))

    @cached_property
    def conjugacy(self) -> ConjugacyData:
        n = self.order
        class_id = [-1] * n
        raw = []
        for g in range(n):
            if class_id[g] >= 0:
                continue
            orbit = sorted({self.conj(k, g) for k in range(n)})
            for x in orbit:
                class_id[x] = len(raw)
            raw.append(tuple(orbit))
        order = sorted(range(len(raw)), key=lambda i: (len(raw[i]), raw[i][0]))
        classes = tuple(raw[i] for i in order)
        class_of = [0] * n
        for ci, c in enumerate(classes):
            for x in c:
                class_of[x] = ci
        cent = tuple(tuple(int(k) for k in np.nonzero(self.mul[g] == self.mul[:, g])[0]) for g in range(n))
        return ConjugacyData(classes, tuple(class_of), cent)

    def centralizer(self, g: int) -> tuple[int, ...]:
        return self.conjugacy.centralizers[g]

    def class_of(self, g: int) -> int:
        return self.conjugacy.class_of[g]

    def subgroup(self, elems: Sequence[int], name: str | None = None) -> tuple[FiniteGroup, list[int]]:
        """The subgroup on elems as a standalone group, with its embedding list (cached)."""
        elems = sorted(elems)
        key = tuple(elems)
        if key in self._subgroups:
            return self._subgroups[key]
        pos = {x: i for i, x in enumerate(elems)}
        try:
            table = [[pos[int(self.mul[a, b])] for b in elems] for a in elems]
        except KeyError as exc:
            raise GroupError("element list is not closed under multiplication") from exc
        names = [self.names[x] for x in elems]
        sub = FiniteGroup(table, names=names, name=name or f"sub({self.name})", validate=False)
        self._subgroups[key] = (sub, elems)
        return sub, elems

    def same_table(self, other: FiniteGroup) -> bool:
        return self.order == other.order and bool((self.mul == other.mul).all())

    @cached_property
    def regular_permutation(self) -> np.ndarray:
        """left[g, x] = g x."""
        return self.mul


def _perm_compose(p: tuple[int, ...], q: tuple[int, ...]) -> tuple[int, ...]:
    # (p q)(i) = p(q(i)): apply q first
    return tuple(p[i] for i in q)


def _from_elements(
    elems: Sequence[Hashable],
    op: Callable[[Hashable, Hashable], Hashable],
    names: Sequence[str],
    name: str,
    perms=None,
) -> FiniteGroup:
    pos = {x: i for i, x in enumerate(elems)}
    table = [[pos[op(a, b)] for b in elems] for a in elems]
    return FiniteGroup(table, names=names, name=name, perms=perms, validate=False)


def cyclic(n: int) -> FiniteGroup:
    if n < 1:
        raise GroupError("cyclic group order must be positive")
    table = [[(a + b) % n for b in range(n)] for a in range(n)]
    names = ["e"] + [f"g^{k}" if k > 1 else "g" for k in range(1, n)]
    return FiniteGroup(table, names=names, name=f"Z{n}", validate=False)


def dihedral(n: int) -> FiniteGroup:
    """Symmetries of the n-gon, order 2n: r^k at index k, s r^k at index n + k."""
    if n < 1:
        raise GroupError("dihedral parameter must be positive")

    def op(a, b):
        (fa, ka), (fb, kb) = a, b
        # s r^k s = r^{-k}
        return ((fa + fb) % 2, ((-ka if fb else ka) + kb) % n)

    elems = [(0, k) for k in range(n)] + [(1, k) for k in range(n)]
    names = [f"r^{k}" for k in range(n)] + [f"sr^{k}" for k in range(n)]
    names[0] = "e"
    return _from_elements(elems, op, names, f"D{n}")


def quaternion8() -> FiniteGroup:
    """Q8 with elements 1, -1, i, -i, j, -j, k, -k in that index order."""
    basic = {
        ("1", "1"): (1, "1"), ("1", "i"): (1, "i"), ("1", "j"): (1, "j"), ("1", "k"): (1, "k"),
        ("i", "1"): (1, "i"), ("i", "i"): (-1, "1"), ("i", "j"): (1, "k"), ("i", "k"): (-1, "j"),
        ("j", "1"): (1, "j"), ("j", "i"): (-1, "k"), ("j", "j"): (-1, "1"), ("j", "k"): (1, "i"),
        ("k", "1"): (1, "k"), ("k", "i"): (1, "j"), ("k", "j"): (-1, "i"), ("k", "k"): (-1, "1"),
    }
    elems = [(s, u) for u in "1ijk" for s in (1, -1)]

    def op(a, b):
        s, u = basic[(a[1], b[1])]
        return (a[0] * b[0] * s, u)

    names = [("" if s > 0 else "-") + u for s, u in elems]
    return _from_elements(elems, op, names, "Q8")


def symmetric(n: int) -> FiniteGroup:
    elems = sorted(itertools.permutations(range(n)))
    names = [_cycle_name(p) for p in elems]
    return _from_elements(elems, _perm_compose, names, f"S{n}", perms=elems)


def alternating(n: int) -> FiniteGroup:
    elems = [p for p in sorted(itertools.permutations(range(n))) if _parity(p) == 0]
    names = [_cycle_name(p) for p in elems]
    return _from_elements(elems, _perm_compose, names, f"A{n}", perms=elems)


def _parity(p: Sequence[int]) -> int:
    seen = [False] * len(p)
    par = 0
    for i in range(len(p)):
        if not seen[i]:
            j, length = i, 0
            while not seen[j]:
                seen[j] = True
                j = p[j]
                length += 1
            par ^= (length - 1) & 1
    return par


def _cycle_name(p: Sequence[int]) -> str:
    seen = [False] * len(p)
    cycles = []
    for i in range(len(p)):
        if seen[i] or p[i] == i:
            seen[i] = True
            continue
        cyc = []
        j = i
        while not seen[j]:
            seen[j] = True
            cyc.append(j + 1)
            j = p[j]
        cycles.append("(" + "".join(map(str, cyc)) + ")" if len(p) < 10 else "(" + " ".join(map(str, cyc)) + ")")
    return "".join(cycles) or "e"


def direct_product(g: FiniteGroup, h: FiniteGroup) -> FiniteGroup:
    """G x H with (a, b) at index a * |H| + b."""
    m = h.order
    table = [
        [int(g.mul[a // m, b // m]) * m + int(h.mul[a % m, b % m]) for b in range(g.order * m)]
        for a in range(g.order * m)
    ]
    names = [f"({x},{y})" for x in g.names for y in h.names]
    return FiniteGroup(table, names=names, name=f"{g.name}x{h.name}", validate=False)


def from_permutations(gens: Sequence[Sequence[int]], order_cap: int = DEFAULT_ORDER_CAP, name: str = "G") -> FiniteGroup:
    """Close permutation generators (arrays of images, 0-based) under composition."""
    gens = [tuple(int(x) for x in g) for g in gens]
    if not gens:
        gens = [()]
    degree = max(len(g) for g in gens)
    gens = [g + tuple(range(len(g), degree)) for g in gens]
    for g in gens:
        if sorted(g) != list(range(degree)):
            raise GroupError(f"generator {list(g)} is not a permutation of 0..{degree - 1}")
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = _perm_compose(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > order_cap:
                        raise GroupError(f"closure exceeds the order cap {order_cap}")
        frontier = nxt
    elems = sorted(seen)
    names = [_cycle_name(p) for p in elems]
    return _from_elements(elems, _perm_compose, names, name, perms=elems)


def from_table(table, names: Sequence[str] | None = None, order_cap: int = DEFAULT_ORDER_CAP, name: str = "G") -> FiniteGroup:
    table = np.asarray(table, dtype=np.int64)
    if table.ndim != 2 or table.shape[0] > order_cap:
        raise GroupError(f"table must be square with order at most {order_cap}")
    return FiniteGroup(table, names=names, name=name, validate=True)


def builtin(spec: str) -> FiniteGroup:
    """Parse family names such as Z6, S3, D4, Q8, A4, Z2xZ2."""
    spec = spec.strip()
    if "x" in spec[1:]:
        parts = spec.split("x")
        out = builtin(parts[0])
        for p in parts[1:]:
            out = direct_product(out, builtin(p))
        return out
    if spec == "Q8":
        return quaternion8()
    kind, rest = spec[:1], spec[1:]
    if not rest.isdigit():
        raise GroupError(f"unknown group family {spec!r}")
    n = int(rest)
    if kind == "Z" or kind == "C":
        return cyclic(n)
    if kind == "S":
        if not 1 <= n <= 5:
            raise GroupError("symmetric groups are supported for n <= 5")
        return symmetric(n)
    if kind == "A":
        if not 1 <= n <= 5:
            raise GroupError("alternating groups are supported for n <= 5")
        return alternating(n)
    if kind == "D":
        return dihedral(n)
    raise GroupError(f"unknown group family {spec!r}")


class FiniteGSet:
    """A finite set 0..size-1 with a left action table act[g, s] = g.s."""

    def __init__(self, group: FiniteGroup, action, labels: Sequence | None = None, validate: bool = True):
        act = np.asarray(action, dtype=np.int64)
        if act.ndim != 2 or act.shape[0] != group.order:
            raise GroupError("action table must have one row per group element")
        self.group = group
        self.act = act
        self.act.setflags(write=False)
        self.size = act.shape[1]
        self.labels = list(labels) if labels is not None else list(range(self.size))
        if validate:
            self.validate()

    def validate(self) -> None:
        g = self.group
        if self.size and (self.act.min() < 0 or self.act.max() >= self.size):
            raise GroupError("action table has out-of-range entries")
        if not (self.act[g.identity] == np.arange(self.size)).all():
            raise GroupError("identity does not act trivially")
        for a in range(g.order):
            if sorted(self.act[a]) != list(range(self.size)):
                raise GroupError(f"element {a} does not act bijectively")
        # act[a, act[b, s]] == act[ab, s]
        lhs = self.act[:, self.act]  # [a, b, s]
        rhs = self.act[g.mul]  # [a, b, s]
        bad = np.argwhere(lhs != rhs)
        if len(bad):
            a, b, s = (int(x) for x in bad[0])
            raise GroupError(f"action is not compatible with multiplication at (g={a}, h={b}, s={s})")

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        return f"{type(self).__name__}(size={self.size}, group={self.group.name})"

    def __call__(self, g: int, s: int) -> int:
        return int(self.act[g, s])

    @cached_property
    def orbits(self) -> tuple[tuple[int, ...], ...]:
        """Orbits sorted by their minimal point."""
        seen = [False] * self.size
        out = []
        for s in range(self.size):
            if seen[s]:
                continue
            orb = sorted(set(int(x) for x in self.act[:, s]))
            for x in orb:
                seen[x] = True
            out.append(tuple(orb))
        return tuple(out)

    @cached_property
    def orbit_of(self) -> tuple[int, ...]:
        idx = [0] * self.size
        for i, orb in enumerate(self.orbits):
            for s in orb:
                idx[s] = i
        return tuple(idx)

    def stabilizer(self, s: int) -> tuple[int, ...]:
        return tuple(int(g) for g in np.nonzero(self.act[:, s] == s)[0])

    def fixed_by(self, g: int) -> tuple[int, ...]:
        return tuple(int(s) for s in np.nonzero(self.act[g] == np.arange(self.size))[0])

    @cached_property
    def transversal(self) -> tuple[dict[int, int], ...]:
        """Per orbit: point -> a group element carrying the orbit's first point to it."""
        out = []
        for orb in self.orbits:
            s0 = orb[0]
            t: dict[int, int] = {}
            for g in range(self.group.order):
                y = int(self.act[g, s0])
                if y not in t:
                    t[y] = g
            out.append(t)
        return tuple(out)


class InertiaSet(FiniteGSet):
    """Lambda = {(s, g) : g.s = s} with action k.(s, g) = (k.s, k g k^{-1}).

    ``point[i]`` is the base point and ``sector[i]`` the stabilizing element of
    the i-th pair, so ``point`` is the evaluation map e: Lambda -> S.
    """

    def __init__(self, base: FiniteGSet):
        g = base.group
        pairs = [(s, x) for s in range(base.size) for x in range(g.order) if base.act[x, s] == s]
        index = {p: i for i, p in enumerate(pairs)}
        act = np.empty((g.order, len(pairs)), dtype=np.int64)
        for k in range(g.order):
            for i, (s, x) in enumerate(pairs):
                act[k, i] = index[(int(base.act[k, s]), g.conj(k, x))]
        super().__init__(g, act, labels=pairs, validate=False)
        self.base = base
        self.index = index
        self.point = tuple(p[0] for p in pairs)
        self.sector = tuple(p[1] for p in pairs)

    def evaluation(self) -> GSetMap:
        return GSetMap(self, self.base, self.point)


class GSetMap:
    """An equivariant map of G-sets given by its image list."""

    def __init__(self, src: FiniteGSet, dst: FiniteGSet, images: Sequence[int], validate: bool = True):
        if src.group is not dst.group and not src.group.same_table(dst.group):
            raise GroupError("maps must be between sets for the same group")
        self.src = src
        self.dst = dst
        self.images = tuple(int(x) for x in images)
        if len(self.images) != src.size:
            raise GroupError("image list has the wrong length")
        if validate:
            imgs = np.asarray(self.images, dtype=np.int64)
            if src.size and (imgs.min() < 0 or imgs.max() >= dst.size):
                raise GroupError("map images out of range")
            bad = np.argwhere(imgs[src.act] != dst.act[:, imgs]) if src.size else []
            if len(bad):
                g, s = (int(x) for x in bad[0])
                raise GroupError(f"map is not equivariant at (g={g}, s={s})")

    def __call__(self, s: int) -> int:
        return self.images[s]

    @cached_property
    def fibers(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.dst.size)]
        for s, t in enumerate(self.images):
            out[t].append(s)
        return tuple(tuple(f) for f in out)


def point_set(group: FiniteGroup) -> FiniteGSet:
    return FiniteGSet(group, np.zeros((group.order, 1), dtype=np.int64), labels=["pt"], validate=False)


def conjugation_set(group: FiniteGroup) -> FiniteGSet:
    """G acting on itself by conjugation."""
    act = [[group.conj(k, x) for x in group.elements] for k in group.elements]
    return FiniteGSet(group, act, labels=list(group.elements), validate=False)


def translation_set(group: FiniteGroup) -> FiniteGSet:
    """G acting on itself by left translation."""
    return FiniteGSet(group, group.mul, labels=list(group.elements), validate=False)


def inertia_set(base: FiniteGSet) -> InertiaSet:
    return InertiaSet(base)


def commuting_pairs(group: FiniteGroup) -> FiniteGSet:
    """{(g, h) : gh = hg} with simultaneous conjugation."""
    pairs = [(g, h) for g in group.elements for h in group.elements if group.commute(g, h)]
    index = {p: i for i, p in enumerate(pairs)}
    act = [[index[(group.conj(k, g), group.conj(k, h))] for g, h in pairs] for k in group.elements]
    return FiniteGSet(group, act, labels=pairs, validate=False)
