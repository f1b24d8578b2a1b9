from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stringyk import groups, linalg
from stringyk.acceptance import small_groups
from stringyk.characters import (
    VirtualCharacter,
    character_of,
    character_table,
    decompose,
    isotypic_projectors,
    oracle_table,
    regular_matrix,
)
from stringyk.class_functions import ClassFunction
from stringyk.cyclotomic import Cyclotomic, root_of_unity

SMALL = small_groups(12)


def regular_character(G):
    return ClassFunction.from_function(G, lambda g: G.order if g == G.identity else 0)


def test_cyclic_two():
    T = character_table(groups.cyclic(2))
    assert T.values() == [[1, 1], [1, -1]]


def test_symmetric_three(S3):
    T = character_table(S3)
    assert T.degrees == [1, 1, 2]
    t = next(g for g in S3.elements if S3.element_order(g) == 2)
    c = next(g for g in S3.elements if S3.element_order(g) == 3)
    std = T[2]
    assert (std(S3.identity), std(t), std(c)) == (2, 0, -1)
    sign = T[0] if T[0](t) == -1 else T[1]
    assert (sign(t), sign(c)) == (-1, 1)


def test_quaternion(Q8):
    T = character_table(Q8)
    assert T.degrees == [1, 1, 1, 1, 2]
    two = T[4]
    # -1 is the unique central element of order 2
    minus = next(g for g in Q8.elements if Q8.element_order(g) == 2)
    assert two(minus) == -2
    assert all(two(g) == 0 for g in Q8.elements if Q8.element_order(g) == 4)


def test_cyclic_values():
    G = groups.cyclic(5)
    T = character_table(G)
    rows = {tuple(chi(g) for g in G.elements) for chi in T}
    expect = {tuple(root_of_unity(5, j * g) for g in G.elements) for j in range(5)}
    assert rows == expect


def test_row_order_is_by_degree():
    for G in SMALL:
        T = character_table(G)
        assert T.degrees == sorted(T.degrees)
        assert T.trivial_index == 0


def test_decompose_examples(S3):
    for G in SMALL[:12]:
        T = character_table(G)
        assert list(decompose(regular_character(G)).multiplicities) == T.degrees
        delta = ClassFunction.delta_identity(G)
        assert list(decompose(delta).multiplicities) == [Fraction(d, G.order) for d in T.degrees]
    T = character_table(S3)
    assert list(decompose(T[2]).multiplicities) == [0, 0, 1]


def test_virtual_flags(S3):
    T = character_table(S3)
    assert VirtualCharacter(T, [1, 0, 2]).is_genuine()
    assert not VirtualCharacter(T, [1, -1, 0]).is_genuine()
    assert VirtualCharacter(T, [1, -1, 0]).is_virtual()
    half = VirtualCharacter(T, [Fraction(1, 2), 0, 0])
    assert half.is_rational() and not half.is_virtual()
    assert VirtualCharacter(T, [1, 1, 1]).dimension() == 4
    with pytest.raises(ValueError):
        VirtualCharacter(T, [1, 2])


def test_projector_examples(S3):
    Z3 = groups.cyclic(3)
    T3 = character_table(Z3)
    P3 = isotypic_projectors(T3)
    assert linalg.rank(P3[T3.trivial_index]) == 1
    # the trivial projector has constant columns
    assert len({P3[0][y, x] for y in range(3) for x in range(3)}) == 1
    weight_one = next(i for i, chi in enumerate(T3) if chi(1) == root_of_unity(3, 1))
    assert linalg.rank(P3[weight_one]) == 1 and linalg.trace(P3[weight_one]) == 1

    T = character_table(S3)
    P = isotypic_projectors(T)
    assert [linalg.rank(p) for p in P] == [1, 1, 4]
    assert [linalg.trace(p) for p in P] == [1, 1, 4]


@pytest.mark.parametrize("name", ["Z4", "S3", "D4", "Q8", "Z2xZ2", "A4"])
def test_projectors_are_complete_idempotents(name):
    G = groups.builtin(name)
    T = character_table(G)
    P = isotypic_projectors(T)
    n = G.order
    total = linalg.zeros(n)
    for i, p in enumerate(P):
        total = total + p
        for j, q in enumerate(P):
            expect = p if i == j else linalg.zeros(n)
            assert linalg.equal(linalg.matmul(p, q), expect)
    assert linalg.equal(total, linalg.identity(n))
    # the image of p_i carries deg_i chi_i: trace of rho(g) p_i
    for p, chi, d in zip(P, T, T.degrees):
        for g in G.conjugacy.representatives:
            assert linalg.trace(linalg.matmul(regular_matrix(G, g), p)) == chi(g) * d


def test_regular_matrix_character(S3):
    mats = [regular_matrix(S3, g) for g in S3.elements]
    assert character_of(S3, mats) == regular_character(S3)


@pytest.mark.parametrize("G", SMALL, ids=lambda G: f"{G.name}_{G.order}")
def test_table_invariants(G):
    T = character_table(G)
    assert T.row_orthogonality_ok()
    assert T.column_orthogonality_ok()
    assert T.degree_sum_ok()
    assert T.values_in_exponent_field()
    assert len(T) == len(G.conjugacy)


@pytest.mark.parametrize("G", SMALL, ids=lambda G: f"{G.name}_{G.order}")
def test_dixon_matches_oracle(G):
    assert character_table(G).same_as(oracle_table(G))


def test_larger_builtins():
    for name in ("S4", "A5", "S5", "D6", "Z2xZ2xZ2"):
        T = character_table(groups.builtin(name))
        assert T.row_orthogonality_ok() and T.degree_sum_ok()
    assert sorted(character_table(groups.builtin("A5")).degrees) == [1, 3, 3, 4, 5]
    assert sorted(character_table(groups.builtin("S5")).degrees) == [1, 1, 4, 4, 5, 5, 6]


coeff_lists = st.lists(st.integers(-5, 5), min_size=12, max_size=12)


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(SMALL), coeff_lists, st.integers(1, 4))
def test_decompose_roundtrip(G, raw, den):
    T = character_table(G)
    m = [Cyclotomic(Fraction(c, den)) for c in raw[: len(T)]]
    v = VirtualCharacter(T, m)
    assert decompose(v.character(), T) == v
