"""K-theory of finite global quotients [S/G] with explicit equivariant bundles.

Bundles are lazy: each construction (explicit, pullback, pushforward, tensor)
can materialize its matrices ``matrix(g, x): E_x -> E_{g.x}``, and also knows
its traces structurally so characters do not need the matrices.  Bundles over
an inertia set carry an automorphism Phi.  It is the canonical one,
Phi(s, g) = action of g, unless it was transported: pulling back along the
2-sector maps e1, e2 keeps the Phi of the source, tensor products tensor it
and pushforwards take the block sum.  The ARZ product of e^*a and e^*b then
has ch_Phi equal to the convolution of the two characters over each
stabilizer.

K-classes are delocalized characters on Lambda = inertia(S) with an optional
witness: a rational or cyclotomic combination of explicit bundles obtained
by inducing isotypic pieces of the stabilizers' regular representations.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import cached_property
from typing import Callable, Iterable, Sequence

import numpy as np

from . import linalg
from .characters import character_table, decompose, isotypic_projectors
from .class_functions import ClassFunction
from .cyclotomic import Cyclotomic, as_cyclotomic, csum, dot
from .errors import InvariantViolation
from .groups import (
    FiniteGroup,
    FiniteGSet,
    GroupError,
    GSetMap,
    InertiaSet,
    conjugation_set,
    point_set,
)

__all__ = [
    "Bundle",
    "ExplicitBundle",
    "PullbackBundle",
    "PushforwardBundle",
    "TensorBundle",
    "VirtualBundle",
    "DelocalizedCharacter",
    "KClass",
    "TwoSectorSet",
    "FiniteOrbifold",
    "inertia_of",
    "two_sectors_of",
    "trivial_bundle",
    "representation_bundle",
    "deloc_character",
    "pullback",
    "pushforward",
    "tensor",
    "canonical_automorphism",
    "ch_phi",
    "e_sharp",
    "arz_product",
    "stringy_product",
    "tensor_product",
    "pontryagin_product",
    "stringy_formula",
]

ZERO = Cyclotomic(0)
ONE = Cyclotomic(1)


# ----- G-sets attached to S -----------------------------------------------------


def inertia_of(S: FiniteGSet) -> InertiaSet:
    """The inertia set of S, cached on S."""
    lam = getattr(S, "_inertia", None)
    if lam is None:
        lam = InertiaSet(S)
        S._inertia = lam
    return lam


class TwoSectorSet(FiniteGSet):
    """Lambda^[2] = {(s, g1, g2) : g1.s = g2.s = s} with maps e1, e2, e12 to Lambda."""

    def __init__(self, lam: InertiaSet):
        S = lam.base
        G = S.group
        triples = []
        for s in range(S.size):
            stab = S.stabilizer(s)
            triples.extend((s, a, b) for a in stab for b in stab)
        index = {t: i for i, t in enumerate(triples)}
        act = np.empty((G.order, len(triples)), dtype=np.int64)
        for k in G.elements:
            for i, (s, a, b) in enumerate(triples):
                act[k, i] = index[(S(k, s), G.conj(k, a), G.conj(k, b))]
        super().__init__(G, act, labels=triples, validate=False)
        self.inertia = lam
        self.index = index
        L = lam.index
        self.e1 = GSetMap(self, lam, [L[(s, a)] for s, a, b in triples], validate=False)
        self.e2 = GSetMap(self, lam, [L[(s, b)] for s, a, b in triples], validate=False)
        self.e12 = GSetMap(self, lam, [L[(s, G(a, b))] for s, a, b in triples], validate=False)


def two_sectors_of(lam: InertiaSet) -> TwoSectorSet:
    t = getattr(lam, "_two_sectors", None)
    if t is None:
        t = TwoSectorSet(lam)
        lam._two_sectors = t
    return t


# ----- bundles ----------------------------------------------------------------


class Bundle:
    """An equivariant vector bundle over a finite G-set."""

    base: FiniteGSet
    carries_phi: bool = False

    def rank(self, x: int) -> int:
        raise NotImplementedError

    def rank_list(self) -> list[int]:
        r = getattr(self, "_ranks", None)
        return r if r is not None else [self.rank(x) for x in range(self.base.size)]

    def matrix(self, g: int, x: int) -> np.ndarray:
        raise NotImplementedError

    def trace(self, g: int, x: int) -> Cyclotomic:
        """Trace of the action of g on E_x, for g fixing x."""
        return linalg.trace(self.matrix(g, x))

    def _phi(self, x: int) -> np.ndarray:
        raise NotImplementedError

    def _phi_trace(self, x: int) -> Cyclotomic:
        return linalg.trace(self._phi(x))

    def phi(self, x: int) -> np.ndarray:
        if self.carries_phi:
            return self._phi(x)
        if isinstance(self.base, InertiaSet):
            return self.matrix(self.base.sector[x], x)
        raise GroupError("the automorphism Phi needs a base with sector labels")

    def phi_trace(self, x: int) -> Cyclotomic:
        if self.carries_phi:
            return self._phi_trace(x)
        if isinstance(self.base, InertiaSet):
            return self.trace(self.base.sector[x], x)
        raise GroupError("the automorphism Phi needs a base with sector labels")

    @property
    def group(self) -> FiniteGroup:
        return self.base.group

    def validate(self) -> None:
        """Check the cocycle identity, and Phi equivariance where Phi is defined."""
        G = self.group
        X = self.base
        for x in range(X.size):
            r = self.rank(x)
            if not linalg.equal(self.matrix(G.identity, x), linalg.identity(r)):
                raise InvariantViolation(f"identity acts nontrivially on the fiber over {x}")
        for g in G.elements:
            for h in G.elements:
                gh = G(g, h)
                for x in range(X.size):
                    lhs = self.matrix(gh, x)
                    rhs = linalg.matmul(self.matrix(g, X(h, x)), self.matrix(h, x))
                    if not linalg.equal(lhs, rhs):
                        raise InvariantViolation(f"cocycle fails at (g={g}, h={h}, x={x})")
        if self.carries_phi or isinstance(X, InertiaSet):
            for g in G.elements:
                for x in range(X.size):
                    m = self.matrix(g, x)
                    if not linalg.equal(linalg.matmul(m, self.phi(x)), linalg.matmul(self.phi(X(g, x)), m)):
                        raise InvariantViolation(f"Phi is not equivariant at (g={g}, x={x})")

    def total_rank(self) -> int:
        return sum(self.rank(x) for x in range(self.base.size))


class ExplicitBundle(Bundle):
    """Fibers and matrices given outright: maps[g][x] : E_x -> E_{g.x}."""

    def __init__(
        self,
        base: FiniteGSet,
        ranks: Sequence[int],
        maps: Sequence[Sequence[np.ndarray]],
        phis: Sequence[np.ndarray] | None = None,
        validate: bool = False,
    ):
        self.base = base
        self.ranks = tuple(int(r) for r in ranks)
        self._ranks = list(self.ranks)
        self.maps = maps
        self.phis = phis
        self.carries_phi = phis is not None
        self._traces: dict[tuple[int, int], Cyclotomic] = {}
        if len(self.ranks) != base.size:
            raise GroupError("one fiber dimension per point is required")
        if validate:
            self.validate()

    def rank(self, x: int) -> int:
        return self.ranks[x]

    def matrix(self, g: int, x: int) -> np.ndarray:
        return self.maps[g][x]

    def trace(self, g: int, x: int) -> Cyclotomic:
        key = (g, x)
        t = self._traces.get(key)
        if t is None:
            t = linalg.trace(self.maps[g][x])
            self._traces[key] = t
        return t

    def _phi(self, x: int) -> np.ndarray:
        return self.phis[x]


class PullbackBundle(Bundle):
    def __init__(self, f: GSetMap, E: Bundle, transport_phi: bool = False):
        if f.dst is not E.base:
            raise GroupError("pullback map does not land in the bundle's base")
        self.f = f
        self.E = E
        self.base = f.src
        self.carries_phi = transport_phi
        er = E.rank_list()
        self._ranks = [er[i] for i in f.images]

    def rank(self, x: int) -> int:
        return self._ranks[x]

    def matrix(self, g: int, x: int) -> np.ndarray:
        return self.E.matrix(g, self.f(x))

    def trace(self, g: int, x: int) -> Cyclotomic:
        return self.E.trace(g, self.f(x))

    def _phi(self, x: int) -> np.ndarray:
        return self.E.phi(self.f(x))

    def _phi_trace(self, x: int) -> Cyclotomic:
        return self.E.phi_trace(self.f(x))


class PushforwardBundle(Bundle):
    """Fiber at t is the direct sum of E_s over s in f^{-1}(t), in increasing s."""

    def __init__(self, f: GSetMap, E: Bundle):
        if f.src is not E.base:
            raise GroupError("pushforward map does not start at the bundle's base")
        self.f = f
        self.E = E
        self.base = f.dst
        self.carries_phi = E.carries_phi
        er = E.rank_list()
        self._ranks = [0] * self.base.size
        for s, t in enumerate(f.images):
            self._ranks[t] += er[s]

    def rank(self, t: int) -> int:
        return self._ranks[t]

    def _offsets(self, t: int) -> dict[int, int]:
        off, out = 0, {}
        for s in self.f.fibers[t]:
            out[s] = off
            off += self.E.rank(s)
        return out

    def matrix(self, g: int, t: int) -> np.ndarray:
        X = self.E.base
        gt = self.base(g, t)
        src, dst = self._offsets(t), self._offsets(gt)
        out = linalg.zeros(self.rank(gt), self.rank(t))
        for s, o in src.items():
            r = self.E.rank(s)
            if r:
                p = dst[X(g, s)]
                out[p : p + r, o : o + r] = self.E.matrix(g, s)
        return out

    def trace(self, g: int, t: int) -> Cyclotomic:
        X, E = self.E.base, self.E
        return csum(E.trace(g, s) for s in self.f.fibers[t] if E.rank(s) and X(g, s) == s)

    def _phi(self, t: int) -> np.ndarray:
        return linalg.block_diag([self.E.phi(s) for s in self.f.fibers[t]])

    def _phi_trace(self, t: int) -> Cyclotomic:
        E = self.E
        return csum(E.phi_trace(s) for s in self.f.fibers[t] if E.rank(s))


class TensorBundle(Bundle):
    def __init__(self, A: Bundle, B: Bundle):
        if A.base is not B.base:
            raise GroupError("tensor factors live over different bases")
        self.A, self.B = A, B
        self.base = A.base
        self.carries_phi = A.carries_phi or B.carries_phi
        self._ranks = [a * b for a, b in zip(A.rank_list(), B.rank_list())]

    def rank(self, x: int) -> int:
        return self._ranks[x]

    def matrix(self, g: int, x: int) -> np.ndarray:
        return linalg.kron(self.A.matrix(g, x), self.B.matrix(g, x))

    def trace(self, g: int, x: int) -> Cyclotomic:
        a = self.A.trace(g, x) if self.A.rank(x) else ZERO
        return a * self.B.trace(g, x) if a else ZERO

    def _phi(self, x: int) -> np.ndarray:
        return linalg.kron(self.A.phi(x), self.B.phi(x))

    def _phi_trace(self, x: int) -> Cyclotomic:
        a = self.A.phi_trace(x) if self.A.rank(x) else ZERO
        return a * self.B.phi_trace(x) if a else ZERO


class VirtualBundle:
    """A finite combination sum c_i E_i of bundles over one base."""

    def __init__(self, terms: Iterable[tuple[object, Bundle]]):
        self.terms = [(as_cyclotomic(c), E) for c, E in terms if as_cyclotomic(c)]

    @classmethod
    def of(cls, E: Bundle) -> VirtualBundle:
        return cls([(ONE, E)])

    def __add__(self, other: VirtualBundle) -> VirtualBundle:
        return VirtualBundle(self.terms + other.terms)

    def scale(self, c) -> VirtualBundle:
        c = as_cyclotomic(c)
        return VirtualBundle([(c * a, E) for a, E in self.terms])

    def __iter__(self):
        return iter(self.terms)

    def __len__(self):
        return len(self.terms)


def _as_virtual(E) -> VirtualBundle:
    return E if isinstance(E, VirtualBundle) else VirtualBundle.of(E)


def trivial_bundle(S: FiniteGSet, r: int = 1) -> ExplicitBundle:
    eye = linalg.identity(r)
    maps = [[eye] * S.size for _ in S.group.elements]
    return ExplicitBundle(S, [r] * S.size, maps)


def representation_bundle(S: FiniteGSet, matrices: Sequence[np.ndarray]) -> ExplicitBundle:
    """The bundle S x V with g acting by matrices[g] on every fiber."""
    r = matrices[0].shape[0]
    maps = [[matrices[g]] * S.size for g in S.group.elements]
    return ExplicitBundle(S, [r] * S.size, maps)


def pullback(f: GSetMap, E: Bundle, transport_phi: bool = False) -> PullbackBundle:
    return PullbackBundle(f, E, transport_phi)


def pushforward(f: GSetMap, E: Bundle) -> PushforwardBundle:
    return PushforwardBundle(f, E)


def tensor(A: Bundle, B: Bundle) -> TensorBundle:
    return TensorBundle(A, B)


def canonical_automorphism(E: Bundle) -> list[np.ndarray]:
    """Phi at (s, g) is the action of g on the fiber; needs an inertia-set base."""
    if not isinstance(E.base, InertiaSet):
        raise GroupError("the canonical automorphism needs a base with sector labels")
    return [E.matrix(E.base.sector[x], x) for x in range(E.base.size)]


# ----- characters ---------------------------------------------------------------


class DelocalizedCharacter:
    """A G-invariant function on an inertia set, stored per orbit."""

    __slots__ = ("inertia", "values")

    def __init__(self, inertia: InertiaSet, values: Iterable):
        self.inertia = inertia
        self.values = tuple(as_cyclotomic(v) for v in values)
        if len(self.values) != len(inertia.orbits):
            raise ValueError("one value per inertia orbit is required")

    @classmethod
    def from_function(cls, inertia: InertiaSet, f: Callable[[int], object]) -> DelocalizedCharacter:
        return cls(inertia, [f(orb[0]) for orb in inertia.orbits])

    @classmethod
    def zero(cls, inertia: InertiaSet) -> DelocalizedCharacter:
        return cls(inertia, [0] * len(inertia.orbits))

    @classmethod
    def indicator(cls, inertia: InertiaSet, orbit: int) -> DelocalizedCharacter:
        return cls(inertia, [int(i == orbit) for i in range(len(inertia.orbits))])

    def __call__(self, x: int) -> Cyclotomic:
        return self.values[self.inertia.orbit_of[x]]

    def at(self, s: int, g: int) -> Cyclotomic:
        return self(self.inertia.index[(s, g)])

    def _check(self, other: DelocalizedCharacter) -> None:
        if other.inertia is not self.inertia:
            raise GroupError("characters live on different inertia sets")

    def __add__(self, other):
        self._check(other)
        return DelocalizedCharacter(self.inertia, [a + b for a, b in zip(self.values, other.values)])

    def __sub__(self, other):
        self._check(other)
        return DelocalizedCharacter(self.inertia, [a - b for a, b in zip(self.values, other.values)])

    def scale(self, c) -> DelocalizedCharacter:
        c = as_cyclotomic(c)
        return DelocalizedCharacter(self.inertia, [c * a for a in self.values])

    def pointwise(self, other) -> DelocalizedCharacter:
        self._check(other)
        return DelocalizedCharacter(self.inertia, [a * b for a, b in zip(self.values, other.values)])

    def __eq__(self, other):
        return isinstance(other, DelocalizedCharacter) and other.inertia is self.inertia and other.values == self.values

    def __hash__(self):
        return hash(self.values)

    def is_zero(self) -> bool:
        return not any(self.values)

    def support(self) -> list[int]:
        return [i for i, v in enumerate(self.values) if v]

    def __repr__(self):
        return f"DelocalizedCharacter({[str(v) for v in self.values]})"

    def to_class_function(self) -> ClassFunction:
        """For S = {pt}: the class function g -> chi(pt, g)."""
        lam = self.inertia
        if lam.base.size != 1:
            raise GroupError("only characters over a point are class functions")
        return ClassFunction.from_function(lam.group, lambda g: self.at(0, g))

    @classmethod
    def from_class_function(cls, inertia: InertiaSet, f: ClassFunction) -> DelocalizedCharacter:
        if inertia.base.size != 1:
            raise GroupError("only characters over a point are class functions")
        return cls.from_function(inertia, lambda x: f(inertia.sector[x]))

    def to_json(self) -> list:
        return [v.to_json() for v in self.values]


def deloc_character(E, inertia: InertiaSet | None = None) -> DelocalizedCharacter:
    """(s, g) -> trace of g on E_s.  An empty virtual bundle needs ``inertia`` to know its base."""
    E = _as_virtual(E)
    if not E.terms:
        if inertia is None:
            raise ValueError("empty virtual bundle has no base")
        return DelocalizedCharacter.zero(inertia)
    lam = inertia_of(E.terms[0][1].base)
    vals = [ZERO] * len(lam.orbits)
    for c, B in E:
        if B.base is not lam.base:
            raise GroupError("virtual bundle terms live over different bases")
        for i, orb in enumerate(lam.orbits):
            x = orb[0]
            s, g = lam.point[x], lam.sector[x]
            if B.rank(s):
                vals[i] = vals[i] + c * B.trace(g, s)
    return DelocalizedCharacter(lam, vals)


def ch_phi(E) -> DelocalizedCharacter:
    """x -> trace of Phi on E_x, for bundles over an inertia set."""
    E = _as_virtual(E)
    lam = E.terms[0][1].base
    if not isinstance(lam, InertiaSet):
        raise GroupError("ch_Phi needs a bundle over an inertia set")
    vals = [ZERO] * len(lam.orbits)
    for c, B in E:
        for i, orb in enumerate(lam.orbits):
            if B.rank(orb[0]):
                vals[i] = vals[i] + c * B.phi_trace(orb[0])
    return DelocalizedCharacter(lam, vals)


# ----- K-classes and their witnesses ------------------------------------------------


class _OrbitLift:
    """Stabilizer data for one G-orbit of S, used to lift characters to bundles."""

    def __init__(self, S: FiniteGSet, orbit_index: int):
        G = S.group
        self.S = S
        self.orbit = S.orbits[orbit_index]
        self.s0 = self.orbit[0]
        self.transversal = S.transversal[orbit_index]
        self.H, self.emb = G.subgroup(S.stabilizer(self.s0))
        self.pos = {x: i for i, x in enumerate(self.emb)}
        self.table = character_table(self.H)

    def restrict(self, chi: DelocalizedCharacter) -> ClassFunction:
        return ClassFunction.from_function(self.H, lambda i: chi.at(self.s0, self.emb[i]))

    @cached_property
    def pieces(self) -> list[list[np.ndarray]]:
        """Per irreducible i: matrices of H on the image of the isotypic projector p_i."""
        H = self.H
        out = []
        for P in isotypic_projectors(self.table):
            B = linalg.column_basis(P)
            _, rows = linalg.rref(B.T)
            Binv = linalg.inverse(B[rows, :])
            mats = []
            for h in H.elements:
                hinv = H.inverse(h)
                # (rho(h) B)[y] = B[h^{-1} y]
                moved = B[[H(hinv, y) for y in rows], :]
                mats.append(linalg.matmul(Binv, moved))
            out.append(mats)
        return out

    def induced(self, i: int) -> ExplicitBundle:
        """Induce the i-th isotypic piece from the stabilizer to the orbit."""
        S, G = self.S, self.S.group
        R = self.pieces[i]
        r = R[0].shape[0]
        ranks = [0] * S.size
        for s in self.orbit:
            ranks[s] = r
        empty = linalg.zeros(0, 0)
        maps = []
        for g in G.elements:
            row = []
            for s in range(S.size):
                if ranks[s] == 0:
                    row.append(empty)
                    continue
                t_s = self.transversal[s]
                t_gs = self.transversal[S(g, s)]
                h = G.product(G.inverse(t_gs), g, t_s)
                row.append(R[self.pos[h]])
            maps.append(row)
        return ExplicitBundle(S, ranks, maps)


class FiniteOrbifold:
    """[S/G] for a finite G-set S, with cached inertia data and lifting bases."""

    def __init__(self, S: FiniteGSet, name: str = ""):
        self.S = S
        self.group = S.group
        self.name = name or f"[S/{self.group.name}]"
        self.inertia = inertia_of(S)
        self.two_sectors = two_sectors_of(self.inertia)
        self._lifts = [_OrbitLift(S, i) for i in range(len(S.orbits))]
        self._basis_cache: dict[tuple[int, int], ExplicitBundle] = {}
        self._arz_cache: dict[tuple, DelocalizedCharacter] = {}

    @classmethod
    def point(cls, G: FiniteGroup) -> FiniteOrbifold:
        return cls(point_set(G), name=f"[pt/{G.name}]")

    @classmethod
    def adjoint(cls, G: FiniteGroup) -> FiniteOrbifold:
        return cls(conjugation_set(G), name=f"[{G.name}/{G.name}]")

    def __repr__(self) -> str:
        return f"FiniteOrbifold({self.name})"

    # the bundle e: Lambda -> S and its pullback
    @cached_property
    def e(self) -> GSetMap:
        return self.inertia.evaluation()

    def e_star(self, E) -> VirtualBundle:
        return VirtualBundle([(c, pullback(self.e, B)) for c, B in _as_virtual(E)])

    # coordinates: basis bundles B_{O,i} = Ind(image of p_i), of character deg_i * Ind(chi_i)
    def basis_index(self) -> list[tuple[int, int]]:
        return [(o, i) for o, L in enumerate(self._lifts) for i in range(len(L.table))]

    def basis_bundle(self, o: int, i: int) -> ExplicitBundle:
        key = (o, i)
        B = self._basis_cache.get(key)
        if B is None:
            B = self._lifts[o].induced(i)
            self._basis_cache[key] = B
        return B

    def coordinates(self, chi: DelocalizedCharacter) -> dict[tuple[int, int], Cyclotomic]:
        """chi = sum coef * deloc(B_{O,i}) with coef = multiplicity / degree."""
        out = {}
        for o, L in enumerate(self._lifts):
            mult = decompose(L.restrict(chi), L.table).multiplicities
            for i, (m, d) in enumerate(zip(mult, L.table.degrees)):
                if m:
                    out[(o, i)] = m / d
        return out

    def lift(self, chi: DelocalizedCharacter) -> VirtualBundle:
        """An explicit virtual bundle on S with delocalized character chi."""
        if chi.inertia is not self.inertia:
            raise GroupError("character lives on a different inertia set")
        return VirtualBundle([(c, self.basis_bundle(o, i)) for (o, i), c in self.coordinates(chi).items()])

    def kclass(self, chi: DelocalizedCharacter, witness: bool = False) -> KClass:
        return KClass(chi, self.lift(chi) if witness else None)

    def kclass_of(self, E) -> KClass:
        E = _as_virtual(E)
        return KClass(deloc_character(E), E)

    def basis_classes(self, witness: bool = False) -> list[KClass]:
        """Orbit indicators of Lambda, the canonical basis."""
        return [
            self.kclass(DelocalizedCharacter.indicator(self.inertia, i), witness)
            for i in range(len(self.inertia.orbits))
        ]

    def unit_candidate(self) -> DelocalizedCharacter:
        """The character of the unit of the stringy product: 1 at (s, e), 0 elsewhere."""
        e = self.group.identity
        return DelocalizedCharacter.from_function(self.inertia, lambda x: int(self.inertia.sector[x] == e))

    # products
    def arz(self, A, B) -> VirtualBundle:
        """Bilinear extension of the ARZ product to virtual bundles over Lambda."""
        return VirtualBundle(
            [(a * b, arz_product(X, Y, self.two_sectors)) for a, X in _as_virtual(A) for b, Y in _as_virtual(B)]
        )

    def _arz_basis(self, p: tuple[int, int], q: tuple[int, int]) -> DelocalizedCharacter:
        key = (p, q)
        out = self._arz_cache.get(key)
        if out is None:
            A = pullback(self.e, self.basis_bundle(*p))
            B = pullback(self.e, self.basis_bundle(*q))
            out = ch_phi(arz_product(A, B, self.two_sectors))
            self._arz_cache[key] = out
        return out

    def basis_product(self, p: tuple[int, int], q: tuple[int, int]) -> DelocalizedCharacter:
        """ch_deloc of B_p o B_q, i.e. ch_Phi of the ARZ product of the pulled-back basis bundles."""
        return self._arz_basis(p, q)

    def basis_structure_constants(self) -> dict[tuple[tuple[int, int], tuple[int, int]], dict]:
        """Sparse table (p, q) -> coordinates of B_p o B_q in the bundle basis (same S-orbit only)."""
        out = {}
        for p in self.basis_index():
            for q in self.basis_index():
                if p[0] == q[0]:
                    out[(p, q)] = self.coordinates(self._arz_basis(p, q))
        return out

    def stringy(self, a: KClass, b: KClass, witness: bool = False) -> KClass:
        """e_#(e^* a  ARZ  e^* b), evaluated on the lifted witnesses."""
        ca = self.coordinates(a.character)
        cb = self.coordinates(b.character)
        out = DelocalizedCharacter.zero(self.inertia)
        for p, x in ca.items():
            for q, y in cb.items():
                if p[0] != q[0]:
                    continue  # different S-orbits share no 2-sector
                out = out + self._arz_basis(p, q).scale(x * y)
        return e_sharp_character(out, self, witness)

    def structure_constants(self, product: Callable[[KClass, KClass], KClass]) -> list[list[tuple[Cyclotomic, ...]]]:
        basis = self.basis_classes()
        return [[product(a, b).character.values for b in basis] for a in basis]


class KClass:
    """A class in K_G(S) (x) C: its delocalized character and optionally a witness."""

    __slots__ = ("character", "witness")

    def __init__(self, character: DelocalizedCharacter, witness: VirtualBundle | None = None):
        self.character = character
        self.witness = witness

    def check_witness(self) -> bool:
        return self.witness is None or deloc_character(self.witness, self.character.inertia) == self.character

    def __add__(self, other: KClass) -> KClass:
        w = self.witness + other.witness if self.witness is not None and other.witness is not None else None
        return KClass(self.character + other.character, w)

    def scale(self, c) -> KClass:
        return KClass(self.character.scale(c), self.witness.scale(c) if self.witness is not None else None)

    def __eq__(self, other):
        return isinstance(other, KClass) and self.character == other.character

    def __hash__(self):
        return hash(self.character)

    def __repr__(self):
        return f"KClass({self.character})"


def e_sharp_character(chi: DelocalizedCharacter, X: FiniteOrbifold, witness: bool = False) -> KClass:
    """The class on S whose delocalized character is chi (chi given on Lambda)."""
    return X.kclass(chi, witness)


def e_sharp(a, X: FiniteOrbifold, witness: bool = False) -> KClass:
    """Left inverse of e^*: the class with ch_deloc equal to ch_Phi(a)."""
    return e_sharp_character(ch_phi(a), X, witness)


def arz_product(A: Bundle, B: Bundle, two: TwoSectorSet | None = None) -> PushforwardBundle:
    """(e12)_*(e1^* A (x) e2^* B); the obstruction bundle of a finite model has rank 0."""
    lam = A.base
    if B.base is not lam or not isinstance(lam, InertiaSet):
        raise GroupError("ARZ factors must live over the same inertia set")
    two = two or two_sectors_of(lam)
    T = tensor(pullback(two.e1, A, transport_phi=True), pullback(two.e2, B, transport_phi=True))
    return pushforward(two.e12, T)


def stringy_product(a: KClass, b: KClass, X: FiniteOrbifold, witness: bool = False) -> KClass:
    """a o b = e_#(e^* a  ARZ  e^* b) through explicit bundles."""
    if a.witness is None or b.witness is None:
        return X.stringy(a, b, witness)
    prod = X.arz(X.e_star(a.witness), X.e_star(b.witness))
    if not prod.terms:
        return X.kclass(DelocalizedCharacter.zero(X.inertia), witness)
    return e_sharp(prod, X, witness)


def stringy_formula(a: DelocalizedCharacter, b: DelocalizedCharacter) -> DelocalizedCharacter:
    """Closed form: (s, g) -> sum over g1 g2 = g in G_s of a(s, g1) b(s, g2)."""
    lam = a.inertia
    G = lam.group
    # a(s, .) as a sparse list of (g1, value) per point s
    support: dict[int, list[tuple[int, Cyclotomic]]] = {}
    for y in range(len(lam.point)):
        v = a(y)
        if v:
            support.setdefault(lam.point[y], []).append((lam.sector[y], v))

    def value(x: int) -> Cyclotomic:
        s, g = lam.point[x], lam.sector[x]
        terms = support.get(s)
        if not terms:
            return ZERO
        return dot([v for _, v in terms], [b.at(s, G(G.inverse(g1), g)) for g1, _ in terms])

    return DelocalizedCharacter.from_function(lam, value)


def tensor_product(a: KClass, b: KClass, X: FiniteOrbifold) -> KClass:
    """The ordinary tensor product; ch_deloc is multiplicative."""
    if a.witness is not None and b.witness is not None:
        w = VirtualBundle([(x * y, tensor(A, B)) for x, A in a.witness for y, B in b.witness])
        return KClass(deloc_character(w) if w.terms else DelocalizedCharacter.zero(X.inertia), w)
    return KClass(a.character.pointwise(b.character))


class _ProductSet:
    """G x G with diagonal conjugation and the maps pi1, pi2, m to G (conjugation)."""

    def __init__(self, S: FiniteGSet):
        G = S.group
        n = G.order
        act = [[G.conj(k, a) * n + G.conj(k, b) for a in G.elements for b in G.elements] for k in G.elements]
        self.GG = FiniteGSet(G, act, labels=[(a, b) for a in G.elements for b in G.elements], validate=False)
        self.pi1 = GSetMap(self.GG, S, [a for a in G.elements for b in G.elements], validate=False)
        self.pi2 = GSetMap(self.GG, S, [b for a in G.elements for b in G.elements], validate=False)
        self.m = GSetMap(self.GG, S, [G(a, b) for a in G.elements for b in G.elements], validate=False)


def pontryagin_product(a: KClass, b: KClass, X: FiniteOrbifold) -> KClass:
    """m_*(pi1^* V (x) pi2^* W) for S = G with the conjugation action."""
    G = X.group
    S = X.S
    if S.size != G.order or any(S(k, x) != G.conj(k, x) for k in G.elements for x in G.elements):
        raise GroupError("the Pontryagin product needs S = G with conjugation")
    P = getattr(X, "_product_set", None)
    if P is None:
        P = _ProductSet(S)
        X._product_set = P
    va = a.witness if a.witness is not None else X.lift(a.character)
    vb = b.witness if b.witness is not None else X.lift(b.character)
    w = VirtualBundle(
        [(x * y, pushforward(P.m, tensor(pullback(P.pi1, A), pullback(P.pi2, B)))) for x, A in va for y, B in vb]
    )
    return KClass(deloc_character(w) if w.terms else DelocalizedCharacter.zero(X.inertia), w)
