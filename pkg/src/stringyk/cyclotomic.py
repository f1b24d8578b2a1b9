"""Exact arithmetic in cyclotomic fields Q(zeta_n).

Elements are stored in the Zumbroich basis of their minimal field.  That
basis is nested under the embeddings Q(zeta_m) -> Q(zeta_n), which makes the
descent to the minimal conductor a coefficient inspection, so equality of two
numbers is equality of (conductor, coefficients).  The power basis
{zeta_n^k : 0 <= k < phi(n)} is used at the interface (``coeffs``, JSON).
"""

from __future__ import annotations

import cmath
from fractions import Fraction
from functools import lru_cache
from math import floor, gcd
from numbers import Rational
from typing import Iterable, Union

from gmpy2 import mpq

__all__ = [
    "Cyclotomic",
    "root_of_unity",
    "angle_of",
    "rational_angle",
    "sqrt_rational",
    "as_cyclotomic",
    "csum",
    "dot",
    "lcm",
]

Number = Union[int, Fraction, "Cyclotomic"]


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b


def _factor(n: int) -> list[tuple[int, int]]:
    out = []
    p = 2
    while p * p <= n:
        if n % p == 0:
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out.append((p, e))
        p += 1
    if n > 1:
        out.append((n, 1))
    return out


def euler_phi(n: int) -> int:
    r = n
    for p, _ in _factor(n):
        r = r // p * (p - 1)
    return r


@lru_cache(maxsize=None)
def _prime_data(n: int) -> tuple[tuple[int, int, int, int], ...]:
    """Per prime power q = p^e exactly dividing n: (p, e, q, inverse of n/q mod q)."""
    data = []
    for p, e in _factor(n):
        q = p**e
        inv = pow(n // q, -1, q) if q > 1 else 0
        data.append((p, e, q, inv))
    return tuple(data)


def _forbidden(k: int, p: int, q: int, inv: int) -> bool:
    # leading base-p digit of the q-component of the exponent k
    b = ((k * inv) % q) // (q // p)
    return b == 0 if p != 2 else b == 1


def _reduce(n: int, dense: dict[int, Fraction]) -> dict[int, Fraction]:
    """Rewrite sum c_k zeta_n^k (k mod n arbitrary) in the Zumbroich basis of Q(zeta_n)."""
    d = {k % n: c for k, c in dense.items() if c}
    for p, _, q, inv in _prime_data(n):
        step = n // p
        for k in [k for k in d if _forbidden(k, p, q, inv)]:
            c = d.pop(k, 0)
            if not c:
                continue
            if p == 2:
                kk = (k + step) % n
                d[kk] = d.get(kk, 0) - c
            else:
                for b in range(1, p):
                    kk = (k + b * step) % n
                    d[kk] = d.get(kk, 0) - c
    return {k: c for k, c in d.items() if c}


def _descend_once(n: int, d: dict[int, Fraction]) -> tuple[int, dict[int, Fraction]] | None:
    for p, e, q, inv in _prime_data(n):
        if p == 2 and e == 2:
            # Q(zeta_{4m}) -> Q(zeta_m) for odd m; Q(zeta_{2m}) is never a conductor
            if all(((k * inv) % q) == 0 for k in d):
                return n // 4, {k // 4: c for k, c in d.items()}
        elif e >= 2:
            if all(((k * inv) % q) % p == 0 for k in d):
                return n // p, {k // p: c for k, c in d.items()}
        else:
            # p odd, p exactly divides n: equal coefficients along each p-fibre
            step = n // p
            out = {}
            seen = set()
            ok = True
            for k, c in d.items():
                if k in seen:
                    continue
                base = next(kk for kk in ((k + b * step) % n for b in range(p)) if kk % p == 0)
                fibre = [(base + b * step) % n for b in range(1, p)]
                if any(d.get(kk) != c for kk in fibre):
                    ok = False
                    break
                seen.update(fibre)
                out[base // p] = -c
            if ok:
                return n // p, out
    return None


def _normalize(n: int, d: dict[int, Fraction]) -> tuple[int, dict[int, Fraction]]:
    if not d:
        return 1, {}
    while n > 1:
        nxt = _descend_once(n, d)
        if nxt is None:
            break
        n, d = nxt
    return n, d


def _lift(src: int, dst: int, items: Iterable[tuple[int, Fraction]]) -> dict[int, Fraction]:
    s = dst // src
    out: dict[int, Fraction] = {}
    for k, c in items:
        kk = (k * s) % dst
        out[kk] = out.get(kk, 0) + c
    return out if src == dst else _reduce(dst, out)


_MPQ = type(mpq(0))


def _to_q(x):
    """Coerce to the internal rational type (gmpy2.mpq)."""
    t = type(x)
    if t is _MPQ:
        return x
    if t is int:
        return mpq(x)
    if t is Fraction:
        return mpq(x.numerator, x.denominator)
    if isinstance(x, bool):
        raise TypeError("booleans are not numbers here")
    if isinstance(x, (int, Rational)):
        return mpq(int(x.numerator), int(x.denominator))
    if isinstance(x, str):
        f = Fraction(x)
        return mpq(f.numerator, f.denominator)
    raise TypeError(f"cannot interpret {x!r} as a rational number")


def _to_fraction(x) -> Fraction:
    q = _to_q(x)
    return Fraction(int(q.numerator), int(q.denominator))


class Cyclotomic:
    """An element of Q(zeta_n), always held in its minimal field."""

    __slots__ = ("conductor", "_items", "_hash")

    def __init__(self, value: int | Fraction | str = 0):
        q = _to_q(value)
        self.conductor = 1
        self._items = ((0, q),) if q else ()
        self._hash = None

    @classmethod
    def _rational(cls, q: Fraction) -> Cyclotomic:
        obj = object.__new__(cls)
        obj.conductor = 1
        obj._items = ((0, q),) if q else ()
        obj._hash = None
        return obj

    @classmethod
    def _from_dict(cls, n: int, d: dict[int, Fraction], reduced: bool = False) -> Cyclotomic:
        if not reduced:
            d = _reduce(n, d)
        n, d = _normalize(n, d)
        obj = object.__new__(cls)
        obj.conductor = n
        obj._items = tuple(sorted((k, _to_q(c)) for k, c in d.items()))
        obj._hash = None
        return obj

    @classmethod
    def from_power_basis(cls, n: int, coeffs: Iterable) -> Cyclotomic:
        """Build sum_k coeffs[k] * zeta_n^k.  Any conductor n >= 1 is accepted."""
        total = cls(0)
        for k, c in enumerate(coeffs):
            c = _to_q(c)
            if c:
                total = total + root_of_unity(n, k) * c
        return total

    # --- inspection -----------------------------------------------------
    @property
    def zumbroich(self) -> tuple[tuple[int, Fraction], ...]:
        """(exponent, coefficient) pairs over the Zumbroich basis of Q(zeta_conductor)."""
        return tuple((k, Fraction(int(c.numerator), int(c.denominator))) for k, c in self._items)

    @property
    def coeffs(self) -> list[Fraction]:
        """Coefficients in the power basis zeta^0 .. zeta^(phi(n)-1) of the minimal field."""
        n = self.conductor
        table = _power_reduction_table(n)
        out = [mpq(0)] * euler_phi(n)
        for k, c in self._items:
            for i, a in enumerate(table[k]):
                if a:
                    out[i] += a * c
        return [Fraction(int(c.numerator), int(c.denominator)) for c in out]

    def is_rational(self) -> bool:
        return self.conductor == 1

    def is_zero(self) -> bool:
        return not self._items

    def as_fraction(self) -> Fraction:
        if self.conductor != 1:
            raise ValueError(f"{self} is not rational")
        if not self._items:
            return _FZERO
        q = self._items[0][1]
        return Fraction(int(q.numerator), int(q.denominator))

    def is_integer(self) -> bool:
        return self.conductor == 1 and (not self._items or self._items[0][1].denominator == 1)

    def sign(self) -> int:
        """Sign of a rational element."""
        if self.conductor != 1:
            raise ValueError(f"{self} is not rational")
        return 0 if not self._items else (1 if self._items[0][1] > 0 else -1)

    # --- arithmetic -----------------------------------------------------
    def _binary(self, other):
        if type(other) is Cyclotomic:
            return other
        try:
            return Cyclotomic._rational(_to_q(other))
        except TypeError:
            return None

    def __add__(self, other):
        o = self._binary(other)
        if o is None:
            return NotImplemented
        if self.conductor == 1 and o.conductor == 1:
            if not o._items:
                return self
            if not self._items:
                return o
            return Cyclotomic._rational(self._items[0][1] + o._items[0][1])
        if not o._items:
            return self
        if not self._items:
            return o
        n = lcm(self.conductor, o.conductor)
        d = _lift(self.conductor, n, self._items)
        for k, c in _lift(o.conductor, n, o._items).items():
            d[k] = d.get(k, 0) + c
        return Cyclotomic._from_dict(n, {k: c for k, c in d.items() if c}, reduced=True)

    __radd__ = __add__

    def __neg__(self):
        obj = object.__new__(Cyclotomic)
        obj.conductor = self.conductor
        obj._items = tuple((k, -c) for k, c in self._items)
        obj._hash = None
        return obj

    def __pos__(self):
        return self

    def __sub__(self, other):
        o = self._binary(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._binary(other)
        if o is None:
            return NotImplemented
        return o + (-self)

    def __mul__(self, other):
        o = self._binary(other)
        if o is None:
            return NotImplemented
        if not self._items or not o._items:
            return _ZERO
        if o.conductor == 1:
            q = o._items[0][1]
            if q == 1:
                return self
            if self.conductor == 1:
                return Cyclotomic._rational(self._items[0][1] * q)
            obj = object.__new__(Cyclotomic)
            obj.conductor = self.conductor
            obj._items = tuple((k, c * q) for k, c in self._items)
            obj._hash = None
            return obj
        if self.conductor == 1:
            return o * self
        n = lcm(self.conductor, o.conductor)
        a = _lift(self.conductor, n, self._items)
        b = _lift(o.conductor, n, o._items)
        d: dict[int, Fraction] = {}
        for i, x in a.items():
            for j, y in b.items():
                k = (i + j) % n
                d[k] = d.get(k, 0) + x * y
        return Cyclotomic._from_dict(n, d)

    __rmul__ = __mul__

    def galois(self, a: int) -> Cyclotomic:
        """Apply the automorphism zeta_n -> zeta_n^a (a coprime to the conductor)."""
        n = self.conductor
        if gcd(a, n) != 1:
            raise ValueError(f"{a} is not a unit modulo {n}")
        if n == 1:
            return self
        return Cyclotomic._from_dict(n, {(k * a) % n: c for k, c in self._items})

    def conjugate(self) -> Cyclotomic:
        return self.galois(-1 % max(self.conductor, 1)) if self.conductor > 1 else self

    conj = conjugate

    def inverse(self) -> Cyclotomic:
        if not self._items:
            raise ZeroDivisionError("division by zero in Q(zeta_n)")
        if self.conductor == 1:
            return Cyclotomic._rational(1 / self._items[0][1])
        n = self.conductor
        y = Cyclotomic(1)
        for a in range(2, n):
            if gcd(a, n) == 1:
                y = y * self.galois(a)
        norm = (self * y)._items[0][1]
        return y * Cyclotomic._rational(1 / norm)

    def __truediv__(self, other):
        o = self._binary(other)
        if o is None:
            return NotImplemented
        return self * o.inverse()

    def __rtruediv__(self, other):
        o = self._binary(other)
        if o is None:
            return NotImplemented
        return o * self.inverse()

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        result, base = Cyclotomic(1), self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # --- comparison -----------------------------------------------------
    def __eq__(self, other):
        if type(other) is int:
            if self.conductor != 1:
                return False
            return self._items[0][1] == other if self._items else other == 0
        if isinstance(other, Cyclotomic):
            return self.conductor == other.conductor and self._items == other._items
        try:
            q = _to_q(other)
        except TypeError:
            return NotImplemented
        if self.conductor != 1:
            return False
        return self._items[0][1] == q if self._items else q == 0

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self._items[0][1] if self._items else 0) if self.conductor == 1 else hash((self.conductor, self._items))
        return self._hash

    def __bool__(self):
        return bool(self._items)

    # --- rendering ------------------------------------------------------
    def __complex__(self):
        n = self.conductor
        return sum((complex(c) * cmath.exp(2j * cmath.pi * k / n) for k, c in self._items), 0j)

    def __repr__(self):
        if self.conductor == 1:
            return f"Cyclotomic({str(self.as_fraction())!r})"
        return f"Cyclotomic<{self}>"

    def __str__(self):
        if self.conductor == 1:
            return str(self.as_fraction())
        n = self.conductor
        terms = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "1" if k == 0 else (f"z{n}" if k == 1 else f"z{n}^{k}")
            if c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append(f"-{mono}")
            else:
                terms.append(f"{c}*{mono}" if k else str(c))
        return " + ".join(terms).replace("+ -", "- ")

    def to_json(self) -> dict:
        return {"conductor": self.conductor, "coeffs": [f"{c.numerator}/{c.denominator}" for c in self.coeffs]}

    @classmethod
    def from_json(cls, obj) -> Cyclotomic:
        if isinstance(obj, (int, str)):
            return cls(obj)
        return cls.from_power_basis(int(obj["conductor"]), obj["coeffs"])


_FZERO = Fraction(0)
_ZERO = Cyclotomic(0)


def as_cyclotomic(x: Number) -> Cyclotomic:
    return x if type(x) is Cyclotomic else Cyclotomic._rational(_to_q(x))


def _accumulate(terms) -> Cyclotomic:
    # terms: (conductor, exponent, coefficient) over unreduced exponents;
    # everything is lifted to one conductor and normalized once at the end
    terms = list(terms)
    if not terms:
        return _ZERO
    n = 1
    for m, _, _ in terms:
        if n % m:
            n = lcm(n, m)
    d: dict = {}
    for m, k, c in terms:
        kk = (k * (n // m)) % n
        d[kk] = d.get(kk, 0) + c
    if n == 1:
        return Cyclotomic._rational(d.get(0, mpq(0)))
    return Cyclotomic._from_dict(n, d)


def csum(values: Iterable[Number]) -> Cyclotomic:
    """Sum of many cyclotomics with a single normalization."""
    return _accumulate(
        (x.conductor, k, c) for x in map(as_cyclotomic, values) for k, c in x._items
    )


def dot(xs: Iterable[Number], ys: Iterable[Number]) -> Cyclotomic:
    """sum_i xs[i] * ys[i], normalized once."""

    def terms():
        for x, y in zip(xs, ys):
            x = as_cyclotomic(x)
            if type(y) is not Cyclotomic:
                q = _to_q(y)
                if q:
                    m = x.conductor
                    for i, a in x._items:
                        yield m, i, a * q
                continue
            if not x._items or not y._items:
                continue
            n = x.conductor if y.conductor == 1 else y.conductor if x.conductor == 1 else lcm(x.conductor, y.conductor)
            sx, sy = n // x.conductor, n // y.conductor
            for i, a in x._items:
                for j, b in y._items:
                    yield n, i * sx + j * sy, a * b

    return _accumulate(terms())


@lru_cache(maxsize=None)
def _cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, lowest degree first."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _polydiv_exact(num, list(_cyclotomic_polynomial(d)))
    return tuple(num)


def _polydiv_exact(num: list[int], den: list[int]) -> list[int]:
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        c = num[i + len(den) - 1] // den[-1]
        out[i] = c
        for j, b in enumerate(den):
            num[i + j] -= c * b
    assert not any(num[: len(den) - 1]), "inexact cyclotomic division"
    return out


@lru_cache(maxsize=None)
def _power_reduction_table(n: int) -> tuple[tuple[int, ...], ...]:
    """Row k: coefficients of x^k mod Phi_n(x) for 0 <= k < n."""
    phi = list(_cyclotomic_polynomial(n))
    deg = len(phi) - 1
    rows = []
    cur = [1] + [0] * (deg - 1) if deg else []
    for _ in range(n):
        rows.append(tuple(cur) if deg else (1,))
        if not deg:
            continue
        # multiply by x and reduce using the monic Phi_n
        top = cur[-1]
        cur = [0] + cur[:-1]
        for i in range(deg):
            cur[i] -= top * phi[i]
    return tuple(rows)


@lru_cache(maxsize=4096)
def root_of_unity(n: int, k: int = 1) -> Cyclotomic:
    """zeta_n^k with zeta_n = exp(2 pi i / n)."""
    if n < 1:
        raise ValueError("conductor must be positive")
    k %= n
    if n % 4 == 2:
        # zeta_{2m} = -zeta_m^((m+1)/2) for odd m
        m = n // 2
        z = root_of_unity(m, (k * (m + 1) // 2) % m) if m > 1 else Cyclotomic(1)
        return -z if k % 2 else z
    return Cyclotomic._from_dict(n, {k: mpq(1)})


def rational_angle(x) -> Fraction:
    """Reduce a rational number into the half-open interval [0, 1)."""
    q = _to_fraction(x)
    return q - floor(q)


def angle_of(x: Number) -> Fraction:
    """The unique theta in [0,1) with x = exp(2 pi i theta); x must be a root of unity."""
    x = as_cyclotomic(x)
    if x * x.conjugate() != 1:
        raise ValueError(f"{x} is not a root of unity")
    n = x.conductor
    big = n if n % 2 == 0 else 2 * n
    for j in range(big):
        if root_of_unity(big, j) == x:
            return Fraction(j, big)
    raise ValueError(f"{x} is not a root of unity")


def _legendre(a: int, p: int) -> int:
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


@lru_cache(maxsize=None)
def _sqrt_prime(p: int) -> Cyclotomic:
    if p == 2:
        return root_of_unity(8, 1) + root_of_unity(8, 7)
    g = Cyclotomic(0)
    for k in range(1, p):
        g = g + root_of_unity(p, k) * _legendre(k, p)
    # g^2 = (-1)^((p-1)/2) p
    return g if p % 4 == 1 else -root_of_unity(4, 1) * g


def sqrt_rational(q: int | Fraction) -> Cyclotomic:
    """Positive square root of a nonnegative rational, realised by Gauss sums."""
    q = _to_fraction(q)
    if q < 0:
        raise ValueError("negative radicand")
    if q == 0:
        return Cyclotomic(0)
    num, den = int(q.numerator * q.denominator), int(q.denominator)
    out = Cyclotomic(Fraction(1, den))
    for p, e in _factor(num):
        out = out * (p ** (e // 2))
        if e % 2:
            out = out * _sqrt_prime(p)
    return out
