from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from stringyk.cyclotomic import (
    Cyclotomic,
    angle_of,
    as_cyclotomic,
    csum,
    dot,
    rational_angle,
    root_of_unity,
    sqrt_rational,
)

z = root_of_unity

# ----- an independent exact oracle: dense vectors in Q(zeta_N) modulo Phi_N ---------

N = 24


def _phi_poly(n: int) -> list[int]:
    # Phi_n by exact division of x^n - 1 by Phi_d for proper divisors d
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            den = _phi_poly(d)
            out = [0] * (len(num) - len(den) + 1)
            rem = num[:]
            for i in range(len(out) - 1, -1, -1):
                c = rem[i + len(den) - 1]
                out[i] = c
                for j, b in enumerate(den):
                    rem[i + j] -= c * b
            num = out
    return num


PHI_N = _phi_poly(N)
DEG = len(PHI_N) - 1


def _reduce(poly: list[Fraction]) -> tuple[Fraction, ...]:
    poly = list(poly) + [Fraction(0)] * max(0, DEG - len(poly))
    for i in range(len(poly) - 1, DEG - 1, -1):
        c = poly[i]
        if c:
            for j, b in enumerate(PHI_N):
                poly[i - DEG + j] -= c * b
    return tuple(poly[:DEG])


def oracle_root(k: int) -> tuple[Fraction, ...]:
    p = [Fraction(0)] * N
    p[k % N] = Fraction(1)
    return _reduce(p)


def oracle_mul(a, b):
    out = [Fraction(0)] * (2 * DEG)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _reduce(out)


def oracle_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def to_oracle(x: Cyclotomic) -> tuple[Fraction, ...]:
    n = x.conductor
    assert N % n == 0
    acc = tuple([Fraction(0)] * DEG)
    for k, c in enumerate(x.coeffs):
        acc = oracle_add(acc, tuple(c * v for v in oracle_root(k * (N // n))))
    return acc


# elements of Q(zeta_24) as small sums of roots of unity
terms = st.lists(
    st.tuples(st.integers(-4, 4), st.integers(1, 3), st.sampled_from([1, 2, 3, 4, 6, 8, 12, 24]), st.integers(0, 23)),
    min_size=0,
    max_size=4,
)


def build(ts) -> Cyclotomic:
    return csum(Cyclotomic(Fraction(a, b)) * z(n, k) for a, b, n, k in ts)


def build_oracle(ts):
    acc = tuple([Fraction(0)] * DEG)
    for a, b, n, k in ts:
        acc = oracle_add(acc, tuple(Fraction(a, b) * v for v in oracle_root(k * (N // n))))
    return acc


# ----- examples -----------------------------------------------------------------------


def test_root_of_unity_examples():
    assert z(1, 0) == 1
    assert z(4, 2) == -1
    assert z(3, 1) + z(3, 2) == -1


def test_field_ops_examples():
    assert z(5).conjugate() == z(5, 4)
    assert z(6) * z(6, 2) * z(6, 3) == 1
    assert (1 + z(3)) * (1 + z(3, 2)) == 1


def test_angle_of_examples():
    assert angle_of(1) == 0
    assert angle_of(-1) == Fraction(1, 2)
    assert angle_of(z(3, 2)) == Fraction(2, 3)
    # 1 + zeta_3 = -zeta_3^2 is itself a root of unity
    assert angle_of(1 + z(3)) == Fraction(1, 6)


def test_angle_of_rejects_non_roots():
    with pytest.raises(ValueError):
        angle_of(2)
    with pytest.raises(ValueError):
        angle_of(1 + z(4))


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        z(3) / 0
    with pytest.raises(ZeroDivisionError):
        Cyclotomic(0).inverse()


def test_order_of_roots():
    for n in range(1, 13):
        for k in range(n):
            x = z(n, k)
            order = n // __import__("math").gcd(n, k)
            powers = [x**j for j in range(1, order + 1)]
            assert powers[-1] == 1
            assert all(p != 1 for p in powers[:-1])


def test_minimal_conductor():
    assert z(4, 2).conductor == 1
    assert z(6).conductor == 3  # zeta_6 = -zeta_3^2
    assert (z(8) + z(8, 7)).conductor == 8  # sqrt 2
    assert (z(8) + z(8, 3)).conductor == 8  # i sqrt 2
    assert (z(3) - z(3, 2)).conductor == 3  # i sqrt 3
    assert (z(12) + z(12, 11)).conductor == 12  # sqrt 3
    assert (z(5) + z(5, 4) - z(5) - z(5, 4)).conductor == 1


def test_sqrt_rational():
    for q in (2, 3, 5, 7, Fraction(1, 2), Fraction(3, 4), 12, Fraction(27, 8)):
        r = sqrt_rational(q)
        assert r * r == q
    assert sqrt_rational(4) == 2
    assert sqrt_rational(0) == 0
    with pytest.raises(ValueError):
        sqrt_rational(-1)


def test_json_shape():
    assert z(12).to_json() == {"conductor": 12, "coeffs": ["0/1", "1/1", "0/1", "0/1"]}
    assert Cyclotomic(Fraction(-2, 4)).to_json() == {"conductor": 1, "coeffs": ["-1/2"]}
    assert Cyclotomic(0).to_json() == {"conductor": 1, "coeffs": ["0/1"]}


def test_rational_interop():
    assert Cyclotomic(Fraction(1, 3)) == Fraction(1, 3)
    assert hash(Cyclotomic(Fraction(1, 3))) == hash(Fraction(1, 3))
    assert Cyclotomic(3).as_fraction() == 3
    assert isinstance(Cyclotomic(3).as_fraction(), Fraction)
    assert Cyclotomic(5).is_integer() and not Cyclotomic(Fraction(5, 2)).is_integer()
    assert rational_angle(Fraction(-1, 3)) == Fraction(2, 3)


def test_galois():
    x = z(7) + 2 * z(7, 3)
    assert x.galois(6) == x.conjugate()
    assert x.galois(1) == x
    with pytest.raises(ValueError):
        x.galois(7)


# ----- properties -------------------------------------------------------------------------


@settings(max_examples=150, deadline=None)
@given(terms, terms)
def test_arithmetic_matches_oracle(ta, tb):
    a, b = build(ta), build(tb)
    assert to_oracle(a) == build_oracle(ta)
    assert to_oracle(a + b) == oracle_add(build_oracle(ta), build_oracle(tb))
    assert to_oracle(a * b) == oracle_mul(build_oracle(ta), build_oracle(tb))
    if b:
        assert (a / b) * b == a


@settings(max_examples=150, deadline=None)
@given(terms)
def test_canonical_form(ts):
    x = build(ts)
    # rebuilding from the power basis of the minimal field gives identical data
    y = Cyclotomic.from_power_basis(x.conductor, x.coeffs)
    assert (y.conductor, y.zumbroich) == (x.conductor, x.zumbroich)
    assert Cyclotomic.from_json(x.to_json()) == x
    # an element equal to x but written over a bigger conductor normalizes to the same data
    w = csum([x, z(24, 5), -z(24, 5)])
    assert (w.conductor, w.zumbroich, hash(w)) == (x.conductor, x.zumbroich, hash(x))


@settings(max_examples=150, deadline=None)
@given(terms, terms)
def test_conjugation(ta, tb):
    a, b = build(ta), build(tb)
    assert a.conjugate().conjugate() == a
    assert (a * b).conjugate() == a.conjugate() * b.conjugate()
    assert (a + b).conjugate() == a.conjugate() + b.conjugate()


@given(st.integers(1, 30), st.integers(-60, 60), st.integers(1, 30), st.integers(-60, 60))
def test_angle_additive(n, j, m, k):
    x, y = z(n, j), z(m, k)
    assert angle_of(x * y) == (angle_of(x) + angle_of(y)) % 1
    assert angle_of(x) == rational_angle(Fraction(j, n))


@settings(max_examples=80, deadline=None)
@given(st.lists(terms, min_size=0, max_size=5), st.lists(terms, min_size=0, max_size=5))
def test_csum_and_dot(xs, ys):
    a = [build(t) for t in xs]
    b = [build(t) for t in ys]
    total = Cyclotomic(0)
    for x in a:
        total = total + x
    assert csum(a) == total
    expect = Cyclotomic(0)
    for x, y in zip(a, b):
        expect = expect + x * y
    assert dot(a, b) == expect


def test_as_cyclotomic():
    assert as_cyclotomic(3) == 3
    assert as_cyclotomic("2/6") == Fraction(1, 3)
    with pytest.raises(TypeError):
        as_cyclotomic(1.5)
