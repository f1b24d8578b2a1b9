"""Linear charts [V/G] for a finite G acting unitarily on V.

Eigen-multiplicities come from power sums of the character,
mult(zeta_m^t on g) = (1/m) sum_j chi(g^j) zeta_m^{-tj}, so nothing leaves
Q(zeta_|G|).  The obstruction character on a 2-sector (g1, g2) is the
virtual character
    sum_i sum_theta theta * N_{g_i}(theta)  -  V/V^H,      H = <g1, g2>,
of K = Z(g1) n Z(g2), with g3 = (g1 g2)^{-1}.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

import numpy as np

from . import linalg
from .characters import VirtualCharacter, character_table, decompose
from .class_functions import ClassFunction
from .cyclotomic import Cyclotomic, angle_of, as_cyclotomic, dot, root_of_unity, sqrt_rational
from .errors import InvariantViolation
from .groups import FiniteGroup, GroupError

__all__ = [
    "UnitaryModel",
    "SectorDatum",
    "ObstructionComponent",
    "ObstructionDatum",
    "from_weights",
    "standard_model",
    "regular_model",
    "permutation_model",
    "sector_data",
    "fractional_normal",
    "obstruction_character",
    "sector_report",
    "pair_orbits",
]

ZERO = Cyclotomic(0)


class UnitaryModel:
    """A homomorphism G -> U(dim) with exact cyclotomic matrices."""

    def __init__(self, group: FiniteGroup, matrices: Sequence, name: str = "V", validate: bool = True):
        self.group = group
        self.matrices = [linalg.as_matrix(m) for m in matrices]
        self.name = name
        self._eigen_cache: dict[tuple[int, int], tuple[Cyclotomic, ...]] = {}
        self._restriction_cache: dict[tuple[int, ...], VirtualCharacter] = {}
        if len(self.matrices) != group.order:
            raise GroupError("one matrix per group element is required")
        self.dim = self.matrices[0].shape[0]
        if any(m.shape != (self.dim, self.dim) for m in self.matrices):
            raise GroupError("matrices must all be square of the same size")
        if validate:
            self.validate()

    def validate(self) -> None:
        G = self.group
        eye = linalg.identity(self.dim)
        for a in G.elements:
            ma = self.matrices[a]
            adj = np.vectorize(lambda x: x.conjugate(), otypes=[object])(ma.T) if self.dim else ma
            if not linalg.equal(linalg.matmul(adj, ma), eye):
                raise GroupError(f"matrix of element {a} is not unitary")
            for b in G.elements:
                if not linalg.equal(linalg.matmul(ma, self.matrices[b]), self.matrices[G(a, b)]):
                    raise GroupError(f"assignment is not a homomorphism at ({a}, {b})")

    @cached_property
    def chi(self) -> tuple[Cyclotomic, ...]:
        """Character value at every element."""
        return tuple(linalg.trace(m) for m in self.matrices)

    def character(self) -> ClassFunction:
        return ClassFunction.from_function(self.group, lambda g: self.chi[g])

    def __repr__(self) -> str:
        return f"UnitaryModel({self.group.name}, {self.name}, dim={self.dim})"


def _diag(vals) -> np.ndarray:
    out = linalg.zeros(len(vals))
    for i, v in enumerate(vals):
        out[i, i] = as_cyclotomic(v)
    return out


def from_weights(group: FiniteGroup, weights: Sequence[int]) -> UnitaryModel:
    """Z_n acting on C^d with the generator (element 1) by diag(zeta_n^w)."""
    n = group.order
    gen = 1 % n
    if group.name != f"Z{n}" and not (n == 1 or group.element_order(gen) == n):
        raise GroupError("weight representations need a cyclic group with generator at index 1")
    mats = [None] * n
    for k in range(n):
        mats[group.power(gen, k)] = _diag([root_of_unity(n, k * w) for w in weights])
    label = "weights:" + ",".join(str(w) for w in weights)
    return UnitaryModel(group, mats, name=label)


def regular_model(group: FiniteGroup) -> UnitaryModel:
    from .characters import regular_matrix

    return UnitaryModel(group, [regular_matrix(group, g) for g in group.elements], name="regular", validate=False)


def _perm_matrix(p: Sequence[int]) -> np.ndarray:
    out = linalg.zeros(len(p))
    for i, j in enumerate(p):
        out[j, i] = Cyclotomic(1)
    return out


def permutation_model(group: FiniteGroup) -> UnitaryModel:
    """Defining permutation representation (regular for groups without one)."""
    if group.perms is None:
        return regular_model(group)
    return UnitaryModel(group, [_perm_matrix(p) for p in group.perms], name="perm", validate=False)


def _helmert(n: int) -> np.ndarray:
    """Rows k=1..n-1: orthonormal basis of the sum-zero hyperplane of Q^n."""
    rows = []
    for k in range(1, n):
        c = sqrt_rational(Fraction(1, k * (k + 1)))
        rows.append([c] * k + [c * (-k)] + [ZERO] * (n - k - 1))
    return linalg.matrix(rows)


def standard_model(group: FiniteGroup) -> UnitaryModel:
    """The usual faithful low-dimensional representation of a builtin family."""
    name = group.name
    if name.startswith("Z"):
        return from_weights(group, [1])
    if name.startswith(("S", "A")) and group.perms is not None:
        n = len(group.perms[0])
        U = _helmert(n)
        Ut = U.T
        mats = [linalg.matmul(linalg.matmul(U, _perm_matrix(p)), Ut) for p in group.perms]
        return UnitaryModel(group, mats, name="standard")
    if name.startswith("D"):
        n = group.order // 2
        mats = []
        for g in group.elements:
            f, k = divmod(g, n)
            z, zi = root_of_unity(n, k), root_of_unity(n, -k)
            if f == 0:
                mats.append(_diag([z, zi]))
            else:
                # s r^k with s = swap and r = diag(zeta, zeta^-1)
                mats.append(linalg.matrix([[0, zi], [z, 0]]))
        return UnitaryModel(group, mats, name="standard")
    if name == "Q8":
        i = root_of_unity(4, 1)
        one = linalg.identity(2)
        qi = _diag([i, -i])
        qj = linalg.matrix([[0, -1], [1, 0]])
        qk = linalg.matmul(qi, qj)
        mats = []
        for m in (one, qi, qj, qk):
            mats.append(m)
            mats.append(-m)
        return UnitaryModel(group, mats, name="standard")
    raise GroupError(f"no standard representation known for {name}")


# ----- sectors --------------------------------------------------------------


@dataclass(frozen=True)
class SectorDatum:
    representative: int
    fixed_dim: int
    angles: tuple[tuple[Fraction, int], ...]
    age: Fraction

    def to_json(self, group: FiniteGroup | None = None) -> dict:
        return {
            "representative": self.representative if group is None else group.names[self.representative],
            "fixed_dim": self.fixed_dim,
            "angles": [[_q(t), m] for t, m in self.angles],
            "age": _q(self.age),
        }


def _q(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def _eigen_traces(M: UnitaryModel, g: int, k: int) -> tuple[Cyclotomic, ...]:
    """Traces of k on each zeta_m^t eigenspace of g (k commuting with g), m = ord(g)."""
    key = (g, k)
    hit = M._eigen_cache.get(key)
    if hit is not None:
        return hit
    G = M.group
    m = G.element_order(g)
    vals = [M.chi[G(k, G.power(g, j))] for j in range(m)]
    inv_m = Fraction(1, m)
    out = tuple(
        dot(vals, [root_of_unity(m, -t * j) * inv_m for j in range(m)]) for t in range(m)
    )
    M._eigen_cache[key] = out
    return out


def _eigen_trace(M: UnitaryModel, g: int, t: int, k: int) -> Cyclotomic:
    return _eigen_traces(M, g, k)[t]


def eigen_multiplicities(M: UnitaryModel, g: int) -> dict[Fraction, int]:
    """theta -> multiplicity of exp(2 pi i theta) as an eigenvalue of g."""
    G = M.group
    m = G.element_order(g)
    out = {}
    for t in range(m):
        mu = _eigen_trace(M, g, t, G.identity)
        if not mu.is_integer() or mu.as_fraction() < 0:
            raise InvariantViolation(f"eigenvalue multiplicity {mu} is not a natural number")
        if mu:
            out[Fraction(t, m)] = int(mu.as_fraction())
    return out


def sector_data(M: UnitaryModel, g: int) -> SectorDatum:
    mult = eigen_multiplicities(M, g)
    fixed = mult.pop(Fraction(0), 0)
    angles = tuple(sorted(mult.items()))
    age = sum((t * m for t, m in angles), Fraction(0))
    return SectorDatum(g, fixed, angles, age)


def _centralizer_group(G: FiniteGroup, elems: Sequence[int]):
    return G.subgroup(elems)


def fractional_normal(M: UnitaryModel, g: int, direction: str = "phi") -> VirtualCharacter:
    """N_{g,Phi} = sum theta N(theta) or N_{g,Phi^-1} = sum (1-theta) N(theta), over Z(g)."""
    if direction not in ("phi", "phi_inv"):
        raise ValueError("direction must be 'phi' or 'phi_inv'")
    G = M.group
    Z, emb = _centralizer_group(G, G.centralizer(g))
    m = G.element_order(g)
    weights = {}
    for t in range(1, m):
        th = Fraction(t, m)
        weights[t] = th if direction == "phi" else 1 - th

    def value(i: int) -> Cyclotomic:
        k = emb[i]
        s = ZERO
        for t, w in weights.items():
            s = s + _eigen_trace(M, g, t, k) * w
        return s

    f = ClassFunction.from_function(Z, value)
    return decompose(f, character_table(Z))


# ----- obstruction ------------------------------------------------------------


@dataclass(frozen=True)
class ObstructionComponent:
    theta1: Fraction
    theta2: Fraction
    theta12: Fraction
    dim: int
    character: VirtualCharacter

    @property
    def angle_sum(self) -> Fraction:
        return self.theta1 + self.theta2 + self.theta12

    @property
    def rank(self) -> int:
        return int((self.angle_sum - 1) * self.dim)

    def to_json(self) -> dict:
        return {
            "theta": [_q(self.theta1), _q(self.theta2), _q(self.theta12)],
            "sum": _q(self.angle_sum),
            "dim": self.dim,
            "rank": self.rank,
            "character": self.character.to_json(),
        }


@dataclass(frozen=True)
class ObstructionDatum:
    g1: int
    g2: int
    commuting: bool
    components: tuple[ObstructionComponent, ...]
    total: VirtualCharacter
    rank: int

    def to_json(self, group: FiniteGroup | None = None) -> dict:
        name = (lambda x: x) if group is None else (lambda x: group.names[x])
        return {
            "pair": [name(self.g1), name(self.g2)],
            "commuting": self.commuting,
            "components": [c.to_json() for c in self.components],
            "total": self.total.to_json(),
            "rank": self.rank,
        }


def obstruction_character(M: UnitaryModel, g1: int, g2: int) -> ObstructionDatum:
    G = M.group
    g3 = G.inverse(G(g1, g2))
    H = G.generated([g1, g2])
    K_elems = sorted(set(G.centralizer(g1)) & set(G.centralizer(g2)))
    K, emb = G.subgroup(K_elems)
    table = character_table(K)
    trip = [(g, G.element_order(g)) for g in (g1, g2, g3)]

    def total_value(i: int) -> Cyclotomic:
        k = emb[i]
        terms, weights = [], []
        for g, m in trip:
            for t, tr in enumerate(_eigen_traces(M, g, k)):
                if t and tr:
                    terms.append(tr)
                    weights.append(Fraction(t, m))
        # W = V / V^H
        inv_h = Fraction(1, len(H))
        terms += [M.chi[G(k, h)] for h in H]
        weights += [inv_h] * len(H)
        terms.append(M.chi[k])
        weights.append(-1)
        return dot(terms, weights)

    total = decompose(ClassFunction.from_function(K, total_value), table)
    if not total.is_genuine():
        raise InvariantViolation(f"obstruction character at ({g1}, {g2}) is not genuine: {total}")
    rank = int(total.dimension().as_fraction())

    components: list[ObstructionComponent] = []
    commuting = bool(G.commute(g1, g2))
    if commuting:
        # g1, g2 lie in K and are central there, so each irreducible psi of K sits in
        # the joint eigenspace (psi(g1)/psi(1), psi(g2)/psi(1)) of the pair
        pos = {x: i for i, x in enumerate(emb)}
        key = tuple(K_elems)
        vk = M._restriction_cache.get(key)
        if vk is None:
            vk = decompose(ClassFunction.from_function(K, lambda i: M.chi[emb[i]]), table)
            M._restriction_cache[key] = vk
        groups: dict[tuple[Fraction, Fraction], list[Cyclotomic]] = {}
        for idx, (n_psi, psi, d) in enumerate(zip(vk.multiplicities, table, table.degrees)):
            if not n_psi:
                continue
            th1 = angle_of(psi(pos[g1]) / d)
            th2 = angle_of(psi(pos[g2]) / d)
            if th1 == 0 and th2 == 0:
                continue  # V^H
            mults = groups.setdefault((th1, th2), [ZERO] * len(table))
            mults[idx] = n_psi
        for (th1, th2), mults in sorted(groups.items()):
            chi = VirtualCharacter(table, mults)
            th12 = (-(th1 + th2)) % 1
            comp = ObstructionComponent(th1, th2, th12, int(chi.dimension().as_fraction()), chi)
            if comp.angle_sum not in (1, 2):
                raise InvariantViolation(f"angle sum {comp.angle_sum} at ({g1}, {g2}) is not 1 or 2")
            components.append(comp)
        assembled = VirtualCharacter(table, [0] * len(table))
        for c in components:
            assembled = assembled + c.character.scale(c.angle_sum - 1)
        if assembled != total:
            raise InvariantViolation(f"joint components at ({g1}, {g2}) do not reassemble the total")
    return ObstructionDatum(g1, g2, commuting, tuple(components), total, rank)


def pair_orbits(G: FiniteGroup) -> list[tuple[int, int]]:
    """Representatives of all pairs (g1, g2) up to simultaneous conjugation."""
    seen = set()
    reps = []
    for g1 in G.elements:
        for g2 in G.elements:
            if (g1, g2) in seen:
                continue
            reps.append((g1, g2))
            for k in G.elements:
                seen.add((G.conj(k, g1), G.conj(k, g2)))
    return reps


def sector_report(M: UnitaryModel, pairs: bool = True) -> dict:
    G = M.group
    cd = G.conjugacy
    sectors = [sector_data(M, r) for r in cd.representatives]
    out = {
        "group": G.name,
        "rep": M.name,
        "dim": M.dim,
        "sectors": [s.to_json(G) for s in sectors],
    }
    if pairs:
        out["obstructions"] = [obstruction_character(M, a, b).to_json(G) for a, b in pair_orbits(G)]
    return out
