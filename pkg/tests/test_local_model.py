from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stringyk import groups, linalg
from stringyk.characters import character_table, decompose
from stringyk.class_functions import ClassFunction
from stringyk.cyclotomic import root_of_unity
from stringyk.errors import InvariantViolation
from stringyk.groups import GroupError
from stringyk.local_model import (
    UnitaryModel,
    fractional_normal,
    from_weights,
    obstruction_character,
    pair_orbits,
    permutation_model,
    regular_model,
    sector_data,
    sector_report,
    standard_model,
)


def frac(x: Fraction) -> Fraction:
    return x - (x.numerator // x.denominator)


def weight_index(T, G, w):
    # index of the character k -> zeta_n^(w k) of Z_n
    n = G.order
    return next(i for i, chi in enumerate(T) if chi(1 % n) == root_of_unity(n, w))


def kernel_multiplicities(M: UnitaryModel, g: int) -> dict[Fraction, int]:
    """Eigenvalue multiplicities of rho(g) from exact kernels of rho(g) - zeta I."""
    m = M.group.element_order(g)
    out = {}
    for t in range(m):
        A = M.matrices[g] - linalg.identity(M.dim) * root_of_unity(m, t)
        k = len(linalg.nullspace(A))
        if k:
            out[Fraction(t, m)] = k
    return out


# ----- examples -------------------------------------------------------------------


def test_sector_examples(S3):
    Z3 = groups.cyclic(3)
    s = sector_data(from_weights(Z3, [1]), 1)
    assert (s.fixed_dim, s.angles, s.age) == (0, ((Fraction(1, 3), 1),), Fraction(1, 3))

    Z2 = groups.cyclic(2)
    s = sector_data(from_weights(Z2, [1, 1]), 1)
    assert (s.fixed_dim, s.angles, s.age) == (0, ((Fraction(1, 2), 2),), 1)

    c = next(g for g in S3.elements if S3.element_order(g) == 3)
    s = sector_data(standard_model(S3), c)
    assert s.angles == ((Fraction(1, 3), 1), (Fraction(2, 3), 1)) and s.age == 1


def test_fractional_normal_examples():
    Z3 = groups.cyclic(3)
    M = from_weights(Z3, [1])
    T = character_table(Z3)
    w1 = weight_index(T, Z3, 1)
    phi = fractional_normal(M, 1, "phi")
    inv = fractional_normal(M, 1, "phi_inv")
    assert phi.multiplicities[w1] == Fraction(1, 3) and sum(phi.multiplicities) == Fraction(1, 3)
    assert inv.multiplicities[w1] == Fraction(2, 3) and sum(inv.multiplicities) == Fraction(2, 3)
    trivial = from_weights(Z3, [0, 0])
    assert all(m == 0 for m in fractional_normal(trivial, 1).multiplicities)
    assert all(m == 0 for m in fractional_normal(M, 0).multiplicities)
    with pytest.raises(ValueError):
        fractional_normal(M, 1, "sideways")


def test_report_examples():
    Z2 = groups.cyclic(2)
    rep = sector_report(from_weights(Z2, [1]))
    assert [s["age"] for s in rep["sectors"]] == ["0/1", "1/2"]
    assert len(rep["obstructions"]) == 4


def test_z5_wrap_rule():
    Z5 = groups.cyclic(5)
    M = from_weights(Z5, [1])
    for a in range(5):
        for b in range(5):
            ob = obstruction_character(M, a, b)
            # the line is obstructed exactly when a/5 + b/5 passes 1
            assert ob.rank == int(a + b > 5), (a, b)
            for c in ob.components:
                assert c.angle_sum == (2 if a + b > 5 else 1)


def test_model_validation():
    Z2 = groups.cyclic(2)
    with pytest.raises(GroupError):
        UnitaryModel(Z2, [linalg.identity(1)])
    # not a homomorphism
    with pytest.raises(GroupError):
        UnitaryModel(Z2, [linalg.identity(1), linalg.matrix([[root_of_unity(4, 1)]])])
    # not unitary
    with pytest.raises(GroupError):
        UnitaryModel(groups.cyclic(1), [linalg.matrix([[2]])])
    with pytest.raises(GroupError):
        from_weights(groups.symmetric(3), [1])


def test_noncommuting_pairs_have_totals_only(S3):
    M = standard_model(S3)
    t1, t2 = [g for g in S3.elements if S3.element_order(g) == 2][:2]
    ob = obstruction_character(M, t1, t2)
    assert not ob.commuting and ob.components == ()
    assert ob.total.is_genuine()


# ----- oracles ---------------------------------------------------------------------


MODELS = [
    ("Z4", lambda G: from_weights(G, [1, 2, 3])),
    ("Z6", lambda G: from_weights(G, [1, 5, 2, 3])),
    ("Z8", lambda G: from_weights(G, [3, 1])),
    ("S3", standard_model),
    ("S3", permutation_model),
    ("D4", standard_model),
    ("Q8", standard_model),
    ("A4", permutation_model),
    ("Z2xZ2", regular_model),
    ("Z4", regular_model),
]


@pytest.mark.parametrize("name,build", MODELS, ids=[f"{n}-{i}" for i, (n, _) in enumerate(MODELS)])
def test_multiplicities_match_kernels(name, build):
    M = build(groups.builtin(name))
    assert M.dim <= 4
    for g in M.group.elements:
        s = sector_data(M, g)
        expect = kernel_multiplicities(M, g)
        assert s.fixed_dim == expect.pop(Fraction(0), 0)
        assert dict(s.angles) == expect


def cyclic_oracle(n: int, weights, a: int, b: int):
    """Rank and obstructed weights from the per-line angles theta = frac(w k / n)."""
    rank, obstructed = 0, []
    for w in weights:
        t1, t2 = frac(Fraction(w * a, n)), frac(Fraction(w * b, n))
        t12 = frac(Fraction(-w * (a + b), n))
        if t1 or t2:
            s = t1 + t2 + t12
            assert s in (1, 2)
            if s == 2:
                rank += 1
                obstructed.append(w)
    return rank, obstructed


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 8), st.lists(st.integers(0, 7), min_size=1, max_size=3), st.data())
def test_cyclic_obstruction_oracle(n, weights, data):
    G = groups.cyclic(n)
    M = from_weights(G, weights)
    T = character_table(G)
    a = data.draw(st.integers(0, n - 1))
    b = data.draw(st.integers(0, n - 1))
    ob = obstruction_character(M, a, b)
    rank, obstructed = cyclic_oracle(n, weights, a, b)
    assert ob.rank == rank
    mults = [0] * len(T)
    for w in obstructed:
        mults[weight_index(T, G, w % n)] += 1
    assert list(ob.total.multiplicities) == mults
    assert obstruction_character(M, b, a).total == ob.total


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 8), st.lists(st.integers(0, 8), min_size=1, max_size=3))
def test_age_pairing(n, weights):
    G = groups.cyclic(n)
    M = from_weights(G, weights)
    for g in G.elements:
        s, si = sector_data(M, g), sector_data(M, G.inverse(g))
        assert s.fixed_dim + sum(m for _, m in s.angles) == M.dim
        assert s.age == sum((t * m for t, m in s.angles), Fraction(0))
        assert s.age + si.age == M.dim - s.fixed_dim


@pytest.mark.parametrize("name,build", MODELS[3:], ids=[f"{n}-{i}" for i, (n, _) in enumerate(MODELS[3:])])
def test_nonabelian_obstructions(name, build):
    M = build(groups.builtin(name))
    G = M.group
    for a, b in pair_orbits(G):
        ob = obstruction_character(M, a, b)
        assert ob.total.is_genuine()
        assert obstruction_character(M, b, a).total == ob.total
        if ob.commuting:
            assert sum(c.rank for c in ob.components) == ob.rank
            assert all(c.angle_sum in (1, 2) for c in ob.components)


def test_fractional_normals_sum_to_normal_space(S3):
    # N_Phi + N_Phi^-1 is the whole normal space as a Z(g)-representation
    for M in (standard_model(S3), permutation_model(S3), from_weights(groups.cyclic(6), [1, 2, 5])):
        G = M.group
        for g in G.elements:
            Z, emb = G.subgroup(G.centralizer(g))
            both = fractional_normal(M, g, "phi") + fractional_normal(M, g, "phi_inv")
            fixed = sector_data(M, g).fixed_dim
            assert both.is_genuine()
            assert both.dimension() == M.dim - fixed
            restricted = decompose(ClassFunction.from_function(Z, lambda i: M.chi[emb[i]]))
            assert all(x.as_fraction() <= y.as_fraction() for x, y in zip(both.multiplicities, restricted.multiplicities))


def test_invariant_violation_is_arithmetic():
    assert issubclass(InvariantViolation, ArithmeticError)
