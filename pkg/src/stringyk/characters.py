"""Character tables, virtual characters and isotypic projectors.

``character_table`` runs Dixon's modular method: split the class algebra over
F_p for a prime p = 1 mod exp(G), read off characters mod p, then lift every
value to Q(zeta_exp) through its eigenvalue multiplicities.  ``oracle_table``
is an independent exact path for small groups that diagonalizes the class
matrices directly over the cyclotomic field.
"""

from __future__ import annotations

import itertools
import weakref
from functools import cached_property
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

import numpy as np

from . import linalg
from .class_functions import ClassFunction
from .cyclotomic import Cyclotomic, _factor, as_cyclotomic, dot, root_of_unity
from .groups import FiniteGroup

__all__ = [
    "CharacterTable",
    "VirtualCharacter",
    "character_table",
    "oracle_table",
    "class_matrices",
    "decompose",
    "isotypic_projectors",
    "character_of",
    "regular_matrix",
]

ZERO = Cyclotomic(0)


# ----- class algebra -------------------------------------------------------


def class_matrices(G: FiniteGroup) -> list[list[list[int]]]:
    """M[i][j][k] = #{x in C_i : x^{-1} z_k in C_j} for a fixed z_k in C_k."""
    cd = G.conjugacy
    r = len(cd)
    M = [[[0] * r for _ in range(r)] for _ in range(r)]
    for k, z in enumerate(cd.representatives):
        for i, cls in enumerate(cd.classes):
            for x in cls:
                M[i][cd.class_of[G(G.inverse(x), z)]][k] += 1
    return M


def _inverse_class(G: FiniteGroup) -> list[int]:
    cd = G.conjugacy
    return [cd.class_of[G.inverse(r)] for r in cd.representatives]


# ----- arithmetic mod p ----------------------------------------------------


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, isqrt(n) + 1))


def _dixon_prime(G: FiniteGroup) -> int:
    e = G.exponent
    p = e + 1
    while not (_is_prime(p) and p > max(G.order, 2)):
        p += e
    return p


def _primitive_root(p: int) -> int:
    fs = [q for q, _ in _factor(p - 1)]
    for a in range(2, p):
        if all(pow(a, (p - 1) // q, p) != 1 for q in fs):
            return a
    return 1


def _rref_mod(A: list[list[int]], p: int) -> tuple[list[list[int]], list[int]]:
    m = [[x % p for x in row] for row in A]
    rows = len(m)
    cols = len(m[0]) if m else 0
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = pow(m[r][c], -1, p)
        m[r] = [x * inv % p for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [(x - f * y) % p for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def _nullspace_mod(A: list[list[int]], p: int) -> list[list[int]]:
    cols = len(A[0])
    m, pivots = _rref_mod(A, p)
    out = []
    for f in (c for c in range(cols) if c not in pivots):
        v = [0] * cols
        v[f] = 1
        for i, pc in enumerate(pivots):
            v[pc] = -m[i][f] % p
        out.append(v)
    return out


def _restrict_mod(M: list[list[int]], B: list[list[int]], p: int) -> list[list[int]]:
    """Matrix A with M B = B A, for B an invariant basis given as a list of columns."""
    r, s = len(M), len(B)
    MB = [[sum(M[i][k] * b[k] for k in range(r)) % p for i in range(r)] for b in B]
    # solve B A = MB column by column: augment [B | MB] row-wise
    aug = [[B[c][i] for c in range(s)] + [MB[c][i] for c in range(s)] for i in range(r)]
    m, pivots = _rref_mod(aug, p)
    if pivots[:s] != list(range(s)):
        raise ArithmeticError("subspace basis is degenerate")
    return [[m[i][s + c] for c in range(s)] for i in range(s)]


def _split_mod(mats: Sequence[list[list[int]]], r: int, p: int) -> list[list[int]]:
    """Common eigenvectors (as length-r vectors mod p) of commuting matrices."""
    spaces = [[[int(i == j) for i in range(r)] for j in range(r)]]
    for M in mats:
        nxt = []
        for B in spaces:
            if len(B) == 1:
                nxt.append(B)
                continue
            A = _restrict_mod(M, B, p)
            s = len(B)
            found = 0
            for lam in range(p):
                A_l = [[(A[i][j] - (lam if i == j else 0)) % p for j in range(s)] for i in range(s)]
                ker = _nullspace_mod(A_l, p)
                if ker:
                    # express kernel vectors in ambient coordinates
                    nxt.append([[sum(B[c][i] * v[c] for c in range(s)) % p for i in range(r)] for v in ker])
                    found += len(ker)
                if found == s:
                    break
            if found != s:
                raise ArithmeticError("class matrix is not diagonalizable mod p")
        spaces = nxt
        if all(len(B) == 1 for B in spaces):
            break
    if any(len(B) != 1 for B in spaces):
        raise ArithmeticError("class algebra did not split")
    return [B[0] for B in spaces]


# ----- tables -------------------------------------------------------------


def _row_key(degree: int, values: Sequence[Cyclotomic]):
    return (degree, tuple((v.conductor, tuple(-c for c in v.coeffs)) for v in values))


class CharacterTable:
    """Irreducible characters of G, rows sorted by (degree, values)."""

    def __init__(self, group: FiniteGroup, rows: Iterable[Sequence[Cyclotomic]]):
        self.group = group
        built = []
        for vals in rows:
            vals = tuple(as_cyclotomic(v) for v in vals)
            built.append((_row_key(int(vals[0].as_fraction()), vals), vals))
        built.sort(key=lambda kv: kv[0])
        self.irreducibles = [ClassFunction(group, vals) for _, vals in built]
        self.degrees = [int(chi.values[group.conjugacy.class_of[group.identity]].as_fraction()) for chi in self.irreducibles]

    def __len__(self) -> int:
        return len(self.irreducibles)

    @cached_property
    def _inner_weights(self) -> list[list[Cyclotomic]]:
        # <f, chi_i> = sum_k w[i][k] f(C_k),  w[i][k] = |C_k| conj(chi_i(C_k)) / |G|
        n = self.group.order
        sizes = self.group.conjugacy.sizes
        return [[v.conjugate() * Fraction(c, n) for c, v in zip(sizes, chi.values)] for chi in self.irreducibles]

    def multiplicities(self, f: ClassFunction) -> list[Cyclotomic]:
        return [dot(w, f.values) for w in self._inner_weights]

    def __getitem__(self, i: int) -> ClassFunction:
        return self.irreducibles[i]

    def __iter__(self):
        return iter(self.irreducibles)

    @property
    def trivial_index(self) -> int:
        return next(i for i, chi in enumerate(self.irreducibles) if all(v == 1 for v in chi.values))

    def values(self) -> list[list[Cyclotomic]]:
        return [list(chi.values) for chi in self.irreducibles]

    def same_as(self, other: CharacterTable) -> bool:
        return self.group.same_table(other.group) and self.values() == other.values()

    def row_orthogonality_ok(self) -> bool:
        for i, a in enumerate(self.irreducibles):
            for j, b in enumerate(self.irreducibles):
                if a.inner(b) != int(i == j):
                    return False
        return True

    def column_orthogonality_ok(self) -> bool:
        G = self.group
        cd = G.conjugacy
        for a, ga in enumerate(cd.representatives):
            for b in range(len(cd)):
                s = ZERO
                for chi in self.irreducibles:
                    s = s + chi.values[a] * chi.values[b].conjugate()
                if s != (len(G.centralizer(ga)) if a == b else 0):
                    return False
        return True

    def degree_sum_ok(self) -> bool:
        return sum(d * d for d in self.degrees) == self.group.order

    def values_in_exponent_field(self) -> bool:
        e = self.group.exponent
        return all(e % v.conductor == 0 for chi in self for v in chi.values)

    def to_json(self) -> dict:
        G = self.group
        cd = G.conjugacy
        return {
            "group": G.name,
            "order": G.order,
            "classes": [
                {"representative": G.names[c[0]], "size": len(c), "elements": [G.names[x] for x in c]} for c in cd.classes
            ],
            "degrees": list(self.degrees),
            "rows": [[v.to_json() for v in chi.values] for chi in self.irreducibles],
        }


_TABLES: "weakref.WeakKeyDictionary[FiniteGroup, CharacterTable]" = weakref.WeakKeyDictionary()


def character_table(G: FiniteGroup) -> CharacterTable:
    """Exact irreducible characters by Dixon's modular method (cached per group)."""
    t = _TABLES.get(G)
    if t is None:
        t = _dixon(G)
        _TABLES[G] = t
    return t


def _dixon(G: FiniteGroup) -> CharacterTable:
    cd = G.conjugacy
    r = len(cd)
    sizes = cd.sizes
    e = G.exponent
    p = _dixon_prime(G)
    z_e = pow(_primitive_root(p), (p - 1) // e, p)
    inv_cls = _inverse_class(G)
    id_cls = cd.class_of[G.identity]
    M = class_matrices(G)
    # column vectors w with M_i w = omega_i w; M_i as an r x r matrix indexed [j][k]
    vecs = _split_mod([M[i] for i in range(r) if i != id_cls], r, p)
    rows = []
    for w in vecs:
        c = pow(w[id_cls], -1, p)
        w = [x * c % p for x in w]
        s = sum(w[k] * w[inv_cls[k]] * pow(sizes[k], -1, p) for k in range(r)) % p
        d2 = G.order * pow(s, -1, p) % p
        d = next((d for d in range(1, isqrt(G.order) + 1) if d * d % p == d2), None)
        if d is None:
            raise ArithmeticError("no admissible degree for a modular character")
        chi_mod = [w[k] * d * pow(sizes[k], -1, p) % p for k in range(r)]
        rows.append(_lift_row(G, chi_mod, d, p, z_e))
    return CharacterTable(G, rows)


def _lift_row(G: FiniteGroup, chi_mod: list[int], d: int, p: int, z_e: int) -> list[Cyclotomic]:
    cd = G.conjugacy
    e = G.exponent
    out = []
    for g in cd.representatives:
        m = G.element_order(g)
        z = pow(z_e, e // m, p)
        vals = [chi_mod[cd.class_of[G.power(g, j)]] for j in range(m)]
        minv = pow(m, -1, p)
        val = ZERO
        for t in range(m):
            mu = minv * sum(vals[j] * pow(z, (-t * j) % m, p) for j in range(m)) % p
            if mu > d:
                raise ArithmeticError("eigenvalue multiplicity does not lift")
            if mu:
                val = val + root_of_unity(m, t) * mu
        out.append(val)
    return out


# ----- exact oracle -------------------------------------------------------


def _charpoly(M: list[list[int]]) -> list[Fraction]:
    """Faddeev-LeVerrier: coefficients c_0..c_n of det(xI - M), lowest first."""
    n = len(M)
    A = [[Fraction(x) for x in row] for row in M]
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    Mk = [[Fraction(0)] * n for _ in range(n)]
    for k in range(1, n + 1):
        # Mk = A (M_{k-1} + c_{n-k+1} I)
        prev = [[Mk[i][j] + (coeffs[n - k + 1] if i == j else 0) for j in range(n)] for i in range(n)]
        Mk = [[sum(A[i][t] * prev[t][j] for t in range(n)) for j in range(n)] for i in range(n)]
        coeffs[n - k] = -sum(Mk[i][i] for i in range(n)) / k
    return coeffs


def _eval_poly(coeffs: Sequence[Fraction], x: Cyclotomic) -> Cyclotomic:
    acc = ZERO
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _eigen_candidates(G: FiniteGroup, cls: int) -> set[Cyclotomic]:
    cd = G.conjugacy
    g = cd.representatives[cls]
    m = G.element_order(g)
    size = cd.sizes[cls]
    roots = [root_of_unity(m, t) for t in range(m)]
    out = set()
    for d in range(1, isqrt(G.order) + 1):
        for combo in itertools.combinations_with_replacement(range(m), d):
            s = ZERO
            for t in combo:
                s = s + roots[t]
            out.add(s * Fraction(size, d))
    return out


def oracle_table(G: FiniteGroup) -> CharacterTable:
    """Character table from simultaneous eigenvectors of class matrices over Q(zeta)."""
    cd = G.conjugacy
    r = len(cd)
    sizes = cd.sizes
    inv_cls = _inverse_class(G)
    id_cls = cd.class_of[G.identity]
    M = class_matrices(G)
    spaces = [linalg.identity(r)]
    for i in range(r):
        if i == id_cls or all(B.shape[1] == 1 for B in spaces):
            continue
        Mi = linalg.matrix(M[i])
        poly = _charpoly(M[i])
        eig = [x for x in _eigen_candidates(G, i) if not _eval_poly(poly, x)]
        nxt = []
        for B in spaces:
            if B.shape[1] == 1:
                nxt.append(B)
                continue
            found = 0
            for lam in eig:
                ker = linalg.nullspace(linalg.matmul(Mi - linalg.identity(r) * lam, B))
                if ker:
                    nxt.append(linalg.matmul(B, np.stack(ker, axis=1)))
                    found += len(ker)
            if found != B.shape[1]:
                raise ArithmeticError("class matrix eigenvalues missing from candidate set")
        spaces = nxt
    rows = []
    for B in spaces:
        w = B[:, 0] / B[id_cls, 0]
        s = ZERO
        for k in range(r):
            s = s + w[k] * w[inv_cls[k]] / sizes[k]
        d2 = (Cyclotomic(G.order) / s).as_fraction()
        d = isqrt(int(d2))
        if d * d != d2:
            raise ArithmeticError("degree is not an integer")
        rows.append([w[k] * d / sizes[k] for k in range(r)])
    return CharacterTable(G, rows)


# ----- virtual characters --------------------------------------------------


class VirtualCharacter:
    """A combination sum m_i chi_i of irreducibles with cyclotomic multiplicities."""

    __slots__ = ("table", "multiplicities")

    def __init__(self, table: CharacterTable, multiplicities: Iterable):
        self.table = table
        self.multiplicities = tuple(as_cyclotomic(m) for m in multiplicities)
        if len(self.multiplicities) != len(table):
            raise ValueError("one multiplicity per irreducible character is required")

    def character(self) -> ClassFunction:
        G = self.table.group
        vals = [ZERO] * len(G.conjugacy)
        for m, chi in zip(self.multiplicities, self.table):
            if m:
                vals = [v + m * x for v, x in zip(vals, chi.values)]
        return ClassFunction(G, vals)

    def is_rational(self) -> bool:
        return all(m.is_rational() for m in self.multiplicities)

    def is_genuine(self) -> bool:
        """Nonnegative integer multiplicities."""
        return all(m.is_integer() and m.as_fraction() >= 0 for m in self.multiplicities)

    def is_virtual(self) -> bool:
        return all(m.is_integer() for m in self.multiplicities)

    def dimension(self) -> Cyclotomic:
        s = ZERO
        for m, d in zip(self.multiplicities, self.table.degrees):
            s = s + m * d
        return s

    def __add__(self, other: VirtualCharacter) -> VirtualCharacter:
        return VirtualCharacter(self.table, [a + b for a, b in zip(self.multiplicities, other.multiplicities)])

    def __sub__(self, other: VirtualCharacter) -> VirtualCharacter:
        return VirtualCharacter(self.table, [a - b for a, b in zip(self.multiplicities, other.multiplicities)])

    def scale(self, c) -> VirtualCharacter:
        c = as_cyclotomic(c)
        return VirtualCharacter(self.table, [c * m for m in self.multiplicities])

    def __eq__(self, other):
        return isinstance(other, VirtualCharacter) and self.multiplicities == other.multiplicities

    def __hash__(self):
        return hash(self.multiplicities)

    def __repr__(self):
        return f"VirtualCharacter({[str(m) for m in self.multiplicities]})"

    def to_json(self) -> dict:
        return {"multiplicities": [m.to_json() for m in self.multiplicities], "genuine": self.is_genuine()}


def decompose(f: ClassFunction, table: CharacterTable | None = None) -> VirtualCharacter:
    """Multiplicities m_i = <f, chi_i>."""
    table = table or character_table(f.group)
    return VirtualCharacter(table, table.multiplicities(f))


def character_of(G: FiniteGroup, matrices: Sequence[np.ndarray]) -> ClassFunction:
    """Trace character of a representation given by one matrix per element."""
    return ClassFunction.from_function(G, lambda g: linalg.trace(matrices[g]))


def regular_matrix(G: FiniteGroup, g: int) -> np.ndarray:
    """Permutation matrix of left translation by g on the basis e_x."""
    n = G.order
    out = linalg.zeros(n)
    for x in range(n):
        out[G(g, x), x] = Cyclotomic(1)
    return out


def isotypic_projectors(table: CharacterTable) -> list[np.ndarray]:
    """p_i = (deg_i/|G|) sum_g conj(chi_i(g)) rho_reg(g), as |G| x |G| matrices."""
    G = table.group
    n = G.order
    # (p_i)_{y,x} = (deg_i/|G|) conj(chi_i(y x^{-1}))
    out = []
    for chi, d in zip(table, table.degrees):
        c = Fraction(d, n)
        conj_vals = [v.conjugate() * c for v in chi.values]
        P = np.empty((n, n), dtype=object)
        for y in range(n):
            for x in range(n):
                P[y, x] = conj_vals[G.conjugacy.class_of[G(y, G.inverse(x))]]
        out.append(P)
    return out
