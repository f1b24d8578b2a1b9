"""The weighted projective line WP(p, q) from its two cyclic charts.

Basis of the Chen-Ruan (and, through the ring isomorphism, the stringy K)
ring: 1, the point class t, twisted sectors alpha_k (k = 1..p-1) at the
Z_p point and beta_l (l = 1..q-1) at the Z_q point.  alpha_k is the sector
of the k-th power of the chart generator, which acts with weight q, so its
age is frac(k q / p).

Multiplication of twisted classes at one point uses the obstruction rank of
the local chart: rank 0 and product nontrivial gives the sector of the
product, rank 0 with trivial product closes up to c * t, rank 1 gives 0 (the
Euler class of a line over a point).  The constant c is fixed by the
twisted pairing <alpha_k, alpha_{p-k}> = c * tau, tau = integral of t.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Sequence

from .cyclotomic import Cyclotomic, as_cyclotomic
from .groups import cyclic
from .local_model import from_weights, obstruction_character, sector_data

__all__ = [
    "OrbisphereModel",
    "StringyRingElement",
    "build_model",
    "cr_structure_constants",
    "stringy_k_ring",
    "PINNED_TAU",
]

ZERO = Cyclotomic(0)
ONE = Cyclotomic(1)

# point-class normalization: the value of tau making alpha_2^2 = 1 - u on WP(2, 3)
PINNED_TAU = Fraction(1, 2)


def _frac(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


@dataclass(frozen=True)
class Sector:
    label: str
    point: str  # "x" (Z_p chart), "y" (Z_q chart) or "untwisted"
    k: int
    age: Fraction


class OrbisphereModel:
    def __init__(self, p: int, q: int, tau: Fraction = PINNED_TAU, twisted_pairing: str = "orbifold"):
        if p < 1 or q < 1:
            raise ValueError("weights must be positive")
        if gcd(p, q) != 1:
            raise ValueError(f"weights {p} and {q} are not coprime")
        if twisted_pairing not in ("orbifold", "unit"):
            raise ValueError("twisted_pairing must be 'orbifold' or 'unit'")
        self.p, self.q = p, q
        self.tau = Fraction(tau)
        self.twisted_pairing = twisted_pairing
        sectors = [Sector("1", "untwisted", 0, Fraction(0)), Sector("t", "untwisted", 0, Fraction(0))]
        for k in range(1, p):
            sectors.append(Sector(f"alpha_{k}", "x", k, self._local_age(p, q, k)))
        for l in range(1, q):
            sectors.append(Sector(f"beta_{l}", "y", l, self._local_age(q, p, l)))
        self.sectors = tuple(sectors)
        self.labels = [s.label for s in sectors]
        self.index = {s.label: i for i, s in enumerate(sectors)}

    @staticmethod
    def _local_age(n: int, w: int, k: int) -> Fraction:
        return sector_data(_chart(n, w), k).age

    def __len__(self) -> int:
        return len(self.sectors)

    def __repr__(self) -> str:
        return f"OrbisphereModel(WP({self.p},{self.q}))"

    def ages(self, point: str) -> list[Fraction]:
        return [s.age for s in self.sectors if s.point == point]

    def degree(self, i: int) -> Fraction:
        s = self.sectors[i]
        if s.label == "1":
            return Fraction(0)
        if s.label == "t":
            return Fraction(2)
        return 2 * s.age

    def pairing_weight(self, n: int) -> Fraction:
        """<alpha_k, alpha_{n-k}> at a Z_n point."""
        return Fraction(1, n) if self.twisted_pairing == "orbifold" else Fraction(1)

    def closing_constant(self, n: int) -> Fraction:
        return self.pairing_weight(n) / self.tau

    @property
    def alpha_generator(self) -> int | None:
        """Index of the age-1/p sector at x."""
        if self.p < 2:
            return None
        return self.index[f"alpha_{pow(self.q, -1, self.p)}"]

    @property
    def beta_generator(self) -> int | None:
        if self.q < 2:
            return None
        return self.index[f"beta_{pow(self.p, -1, self.q)}"]

    def element(self, coeffs) -> StringyRingElement:
        return StringyRingElement(self, coeffs)

    def basis(self, label: str) -> StringyRingElement:
        v = [0] * len(self)
        v[self.index[label]] = 1
        return StringyRingElement(self, v)

    @property
    def one(self) -> StringyRingElement:
        return self.basis("1")

    @property
    def point_class(self) -> StringyRingElement:
        """1 - u in the K-ring corresponds to the normalized point class t."""
        return self.basis("t")

    @cached_property
    def table(self) -> list[list[tuple[Cyclotomic, ...]]]:
        return cr_structure_constants(self)


_CHARTS: dict[tuple[int, int], object] = {}


def _chart(n: int, w: int):
    key = (n, w % n)
    if key not in _CHARTS:
        _CHARTS[key] = from_weights(cyclic(n), [w % n])
    return _CHARTS[key]


def _local_product(n: int, w: int, k1: int, k2: int) -> tuple[str, int]:
    """('sector', k) or ('closing', 0) or ('zero', 0) from the local obstruction rank."""
    M = _chart(n, w)
    rank = obstruction_character(M, k1, k2).rank
    k = (k1 + k2) % n
    if rank == 1:
        return ("zero", 0)
    if rank != 0:
        raise ArithmeticError(f"unexpected obstruction rank {rank}")
    return ("closing", 0) if k == 0 else ("sector", k)


def cr_structure_constants(M: OrbisphereModel) -> list[list[tuple[Cyclotomic, ...]]]:
    n = len(M)
    zero = (ZERO,) * n

    def vec(i: int, c=ONE) -> tuple[Cyclotomic, ...]:
        v = [ZERO] * n
        v[i] = as_cyclotomic(c)
        return tuple(v)

    t = M.index["t"]
    out = [[zero] * n for _ in range(n)]
    for i, a in enumerate(M.sectors):
        for j, b in enumerate(M.sectors):
            if a.label == "1":
                out[i][j] = vec(j)
            elif b.label == "1":
                out[i][j] = vec(i)
            elif a.point == "untwisted" or b.point == "untwisted":
                out[i][j] = zero  # t * t = 0 and t * twisted = 0
            elif a.point != b.point:
                out[i][j] = zero  # the two orbifold points share no 2-sector
            else:
                order, weight = (M.p, M.q) if a.point == "x" else (M.q, M.p)
                kind, k = _local_product(order, weight, a.k, b.k)
                if kind == "sector":
                    out[i][j] = vec(M.index[f"{'alpha' if a.point == 'x' else 'beta'}_{k}"])
                elif kind == "closing":
                    out[i][j] = vec(t, M.closing_constant(order))
                else:
                    out[i][j] = zero
    return out


class StringyRingElement:
    __slots__ = ("model", "coeffs")

    def __init__(self, model: OrbisphereModel, coeffs: Sequence):
        self.model = model
        self.coeffs = tuple(as_cyclotomic(c) for c in coeffs)
        if len(self.coeffs) != len(model):
            raise ValueError("coefficient vector has the wrong length")

    def __add__(self, other: StringyRingElement) -> StringyRingElement:
        return StringyRingElement(self.model, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other: StringyRingElement) -> StringyRingElement:
        return StringyRingElement(self.model, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def scale(self, c) -> StringyRingElement:
        c = as_cyclotomic(c)
        return StringyRingElement(self.model, [c * a for a in self.coeffs])

    def __mul__(self, other: StringyRingElement) -> StringyRingElement:
        table = self.model.table
        out = [ZERO] * len(self.model)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(other.coeffs):
                if not b:
                    continue
                ab = a * b
                for k, c in enumerate(table[i][j]):
                    if c:
                        out[k] = out[k] + ab * c
        return StringyRingElement(self.model, out)

    def __pow__(self, e: int) -> StringyRingElement:
        out = self.model.one
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        return isinstance(other, StringyRingElement) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __repr__(self):
        terms = [f"{c}*{l}" for c, l in zip(self.coeffs, self.model.labels) if c]
        return " + ".join(terms) or "0"

    def to_json(self) -> dict:
        return {l: c.to_json() for c, l in zip(self.coeffs, self.model.labels) if c}


@dataclass
class RingReport:
    model: OrbisphereModel
    checks: dict[str, bool | None] = field(default_factory=dict)
    values: dict[str, StringyRingElement] = field(default_factory=dict)
    residual: dict[str, object] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return all(v is not False for v in self.checks.values())


def _associative(M: OrbisphereModel) -> bool:
    basis = [M.basis(l) for l in M.labels]
    return all((a * b) * c == a * (b * c) for a, b, c in itertools.product(basis, repeat=3))


def _commutative(M: OrbisphereModel) -> bool:
    return all(M.table[i][j] == M.table[j][i] for i in range(len(M)) for j in range(len(M)))


def _degree_additive(M: OrbisphereModel) -> bool:
    for i, j in itertools.product(range(len(M)), repeat=2):
        d = M.degree(i) + M.degree(j)
        for k, c in enumerate(M.table[i][j]):
            if c and M.degree(k) != d:
                return False
    return True


def pairing_matrix(M: OrbisphereModel) -> list[list[Cyclotomic]]:
    """<a, b> = coefficient of t in a * b, times tau."""
    t = M.index["t"]
    return [[M.table[i][j][t] * M.tau for j in range(len(M))] for i in range(len(M))]


def _nondegenerate(M: OrbisphereModel) -> bool:
    from . import linalg

    P = linalg.matrix(pairing_matrix(M))
    return linalg.rank(P) == len(M)


def stringy_k_ring(M: OrbisphereModel) -> RingReport:
    """Check the presentation by u, alpha_p, beta_q."""
    rep = RingReport(M)
    pt = M.point_class  # 1 - u
    rep.values["1-u"] = pt
    rep.checks["one_minus_u_squared_zero"] = (pt * pt).is_zero()
    for name, gen, n in (("alpha", M.alpha_generator, M.p), ("beta", M.beta_generator, M.q)):
        if gen is None:
            rep.checks[f"{name}_power_is_1-u"] = None
            rep.checks[f"{name}_next_power_zero"] = None
            continue
        x = M.basis(M.labels[gen])
        xn = x**n
        rep.values[f"{name}^{n}"] = xn
        rep.checks[f"{name}_power_is_1-u"] = xn == pt
        rep.checks[f"{name}_next_power_zero"] = (xn * x).is_zero()
        # value of tau that would make this relation hold
        rep.residual[f"{name}_requires_tau"] = M.pairing_weight(n)
    rep.checks["associative"] = _associative(M)
    rep.checks["commutative"] = _commutative(M)
    rep.checks["degree_additive"] = _degree_additive(M)
    rep.checks["pairing_nondegenerate"] = _nondegenerate(M)
    need = {v for k, v in rep.residual.items() if k.endswith("requires_tau")}
    rep.residual["tau"] = M.tau
    rep.residual["single_tau_suffices"] = len(need) <= 1
    return rep


def build_model(p: int, q: int, **kw) -> OrbisphereModel:
    return OrbisphereModel(p, q, **kw)


def report_json(M: OrbisphereModel, verify: bool = True) -> dict:
    def q_(x: Fraction) -> str:
        return f"{x.numerator}/{x.denominator}"

    out = {
        "p": M.p,
        "q": M.q,
        "convention": {"tau": q_(M.tau), "twisted_pairing": M.twisted_pairing},
        "basis": M.labels,
        "sectors": [
            {"label": s.label, "point": s.point, "age": q_(s.age)} for s in M.sectors if s.point != "untwisted"
        ],
        "structure_constants": [
            [i, j, [c.to_json() for c in M.table[i][j]]] for i in range(len(M)) for j in range(len(M))
        ],
    }
    if verify:
        rep = stringy_k_ring(M)
        out["checks"] = rep.checks
        out["values"] = {k: v.to_json() for k, v in rep.values.items()}
        out["residual"] = {
            k: (q_(v) if isinstance(v, Fraction) else v) for k, v in rep.residual.items()
        }
    return out
