"""Exact arithmetic in F_p and F_{p^2}, multiplicative characters, Gauss sums.

Everything here is deterministic in p: the quadratic non-residue tau, the
generator of F_p^* and the generator of F_{p^2}^* are canonical choices, so
all downstream labels and character indices are stable across runs.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

import numpy as np

from .errors import NotInvertibleError


def is_prime(n: int) -> bool:
    """Trial-division primality test (desk scale)."""
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def require_odd_prime(p: int) -> None:
    if p < 3 or not is_prime(p):
        raise ValueError(f"modulus must be an odd prime, got {p}")


def factorize(n: int) -> list[tuple[int, int]]:
    """Prime factorization [(prime, exponent), ...] by trial division."""
    if n < 1:
        raise ValueError("factorize requires n >= 1")
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            e = 0
            while n % f == 0:
                n //= f
                e += 1
            out.append((f, e))
        f += 1 if f == 2 else 2
    if n > 1:
        out.append((n, 1))
    return out


def divisors(n: int) -> list[int]:
    """Sorted list of positive divisors of n."""
    divs = [1]
    for q, e in factorize(n):
        divs = [d * q**j for d in divs for j in range(e + 1)]
    return sorted(divs)


def mobius(n: int) -> int:
    m = 1
    for _, e in factorize(n):
        if e > 1:
            return 0
        m = -m
    return m


def totient(n: int) -> int:
    t = n
    for q, _ in factorize(n):
        t -= t // q
    return t


def arith_functions(n: int) -> tuple[list[int], int, int, int]:
    """(divisors, mobius, totient, number of divisors) for n >= 1."""
    divs = divisors(n)
    return divs, mobius(n), totient(n), len(divs)


def e_frac(num: int, den: int) -> complex:
    """exp(2*pi*i*num/den) with the argument reduced mod den first."""
    return cmath.exp(2j * math.pi * (num % den) / den)


def e_p(p: int, t: int) -> complex:
    return e_frac(t, p)


def legendre_symbol(a: int, p: int) -> int:
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


@lru_cache(maxsize=None)
def smallest_nonresidue(p: int) -> int:
    """Smallest positive quadratic non-residue mod p."""
    require_odd_prime(p)
    for t in range(2, p):
        if legendre_symbol(t, p) == -1:
            return t
    raise AssertionError("no non-residue found")  # unreachable for odd prime


@lru_cache(maxsize=None)
def smallest_primitive_root(p: int) -> int:
    require_odd_prime(p)
    prime_factors = [q for q, _ in factorize(p - 1)]
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in prime_factors):
            return g
    raise AssertionError("no primitive root found")


@dataclass(frozen=True)
class FieldElement:
    """A residue in F_p; the modulus is checked prime at construction."""

    value: int
    p: int

    def __post_init__(self):
        require_odd_prime(self.p)
        object.__setattr__(self, "value", self.value % self.p)

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, FieldElement):
            if other.p != self.p:
                raise ValueError(f"modulus mismatch: {self.p} vs {other.p}")
            return other
        return FieldElement(int(other), self.p)

    def __add__(self, other):
        o = self._coerce(other)
        return FieldElement(self.value + o.value, self.p)

    def __sub__(self, other):
        o = self._coerce(other)
        return FieldElement(self.value - o.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return FieldElement(self.value * o.value, self.p)

    def __neg__(self):
        return FieldElement(-self.value, self.p)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return FieldElement(pow(self.value, n, self.p), self.p)

    def inverse(self) -> "FieldElement":
        if self.value == 0:
            raise NotInvertibleError("not invertible")
        return FieldElement(pow(self.value, self.p - 2, self.p), self.p)

    def is_zero(self) -> bool:
        return self.value == 0

    def __int__(self) -> int:
        return self.value


@lru_cache(maxsize=None)
def _check_nonresidue(tau: int, p: int) -> None:
    if legendre_symbol(tau, p) != -1:
        raise ValueError(f"tau={tau} is not a quadratic non-residue mod {p}")


@dataclass(frozen=True)
class QuadExtElement:
    """x + tau'*y in F_{p^2} = F_p(tau') with tau'^2 = tau a fixed non-residue."""

    x: int
    y: int
    tau: int
    p: int

    def __post_init__(self):
        require_odd_prime(self.p)
        _check_nonresidue(self.tau % self.p, self.p)
        object.__setattr__(self, "x", self.x % self.p)
        object.__setattr__(self, "y", self.y % self.p)
        object.__setattr__(self, "tau", self.tau % self.p)

    def _coerce(self, other) -> "QuadExtElement":
        if not isinstance(other, QuadExtElement):
            raise TypeError("expected QuadExtElement")
        if (other.p, other.tau) != (self.p, self.tau):
            raise ValueError("field mismatch")
        return other

    def __mul__(self, other):
        o = self._coerce(other)
        p, tau = self.p, self.tau
        return QuadExtElement(
            (self.x * o.x + tau * self.y * o.y) % p,
            (self.x * o.y + self.y * o.x) % p,
            tau,
            p,
        )

    def __pow__(self, n: int) -> "QuadExtElement":
        if n < 0:
            return self.inverse() ** (-n)
        result = QuadExtElement(1, 0, self.tau, self.p)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "QuadExtElement":
        nrm = (self.x * self.x - self.tau * self.y * self.y) % self.p
        if nrm == 0:
            raise NotInvertibleError("not invertible")
        ninv = pow(nrm, self.p - 2, self.p)
        return QuadExtElement(self.x * ninv, -self.y * ninv, self.tau, self.p)

    def conjugate(self) -> "QuadExtElement":
        """The Frobenius image x - tau'*y (equals self**p)."""
        return QuadExtElement(self.x, -self.y, self.tau, self.p)

    def is_zero(self) -> bool:
        return self.x == 0 and self.y == 0


def quad_ext_norm(z: QuadExtElement) -> FieldElement:
    """Norm down to F_p: x^2 - tau*y^2 (= z**(p+1) for units)."""
    return FieldElement(z.x * z.x - z.tau * z.y * z.y, z.p)


class UnitGroupTables(NamedTuple):
    """Discrete-log tables for F_p^* against the canonical generator."""

    p: int
    generator: int
    dlog: np.ndarray  # int64[p], dlog[0] = -1
    order: int


class QuadUnitTables(NamedTuple):
    """Discrete-log tables for F_{p^2}^*; elements indexed flat as x*p + y."""

    p: int
    tau: int
    generator: tuple[int, int]
    dlog: np.ndarray  # int64[p*p], dlog[0] = -1
    order: int


@lru_cache(maxsize=None)
def unit_group(p: int) -> UnitGroupTables:
    require_odd_prime(p)
    g = smallest_primitive_root(p)
    dlog = np.full(p, -1, dtype=np.int64)
    acc = 1
    for j in range(p - 1):
        dlog[acc] = j
        acc = acc * g % p
    return UnitGroupTables(p, g, dlog, p - 1)


def _quad_order(z: QuadExtElement, order_divisors: list[int]) -> int:
    one = QuadExtElement(1, 0, z.tau, z.p)
    for d in order_divisors:
        if z**d == one:
            return d
    raise NotInvertibleError("not invertible")


@lru_cache(maxsize=None)
def quad_unit_group(p: int) -> QuadUnitTables:
    """Canonical generator of F_{p^2}^*: first (x, y) in lexicographic order
    with multiplicative order exactly p^2 - 1."""
    require_odd_prime(p)
    tau = smallest_nonresidue(p)
    n = p * p - 1
    divs = divisors(n)
    gen = None
    for x in range(p):
        for y in range(p):
            if x == 0 and y == 0:
                continue
            z = QuadExtElement(x, y, tau, p)
            if _quad_order(z, divs) == n:
                gen = (x, y)
                break
        if gen is not None:
            break
    assert gen is not None
    dlog = np.full(p * p, -1, dtype=np.int64)
    acc = QuadExtElement(1, 0, tau, p)
    gz = QuadExtElement(gen[0], gen[1], tau, p)
    for j in range(n):
        dlog[acc.x * p + acc.y] = j
        acc = acc * gz
    return QuadUnitTables(p, tau, gen, dlog, n)


@dataclass(frozen=True)
class MulCharacter:
    """Multiplicative character indexed by its exponent against the canonical
    generator: chi_k(g^j) = e(k*j/ord)."""

    p: int
    k: int
    group: str = "fp"  # "fp" for F_p^*, "fp2" for F_{p^2}^*

    def __post_init__(self):
        require_odd_prime(self.p)
        if self.group not in ("fp", "fp2"):
            raise ValueError(f"unknown group {self.group!r}")
        object.__setattr__(self, "k", self.k % self.order)

    @property
    def order(self) -> int:
        return self.p - 1 if self.group == "fp" else self.p * self.p - 1

    def is_trivial(self) -> bool:
        return self.k == 0

    def character_order(self) -> int:
        """Order of this character in the dual group."""
        return self.order // math.gcd(self.k, self.order)

    def value(self, u) -> complex:
        return mul_char_value(self, u)


def _dlog_of(chi: MulCharacter, u) -> int:
    if chi.group == "fp":
        if isinstance(u, FieldElement):
            if u.p != chi.p:
                raise ValueError("modulus mismatch")
            u = u.value
        j = int(unit_group(chi.p).dlog[int(u) % chi.p])
    else:
        if isinstance(u, QuadExtElement):
            if u.p != chi.p:
                raise ValueError("modulus mismatch")
            xy = (u.x, u.y)
        else:
            xy = (int(u[0]) % chi.p, int(u[1]) % chi.p)
        j = int(quad_unit_group(chi.p).dlog[xy[0] * chi.p + xy[1]])
    if j < 0:
        raise NotInvertibleError("not invertible")
    return j


def mul_char_value(chi: MulCharacter, u) -> complex:
    """chi(u) via the discrete-log table; raises on non-units."""
    return e_frac(chi.k * _dlog_of(chi, u), chi.order)


def classical_gauss_sum(p: int, chi) -> complex:
    """sum over a in F_p^* of chi(a) * e_p(a)."""
    if isinstance(chi, int):
        chi = MulCharacter(p, chi)
    if chi.group != "fp" or chi.p != p:
        raise ValueError("character must live on F_p^*")
    dlog = unit_group(p).dlog
    total = 0j
    for a in range(1, p):
        total += e_frac(chi.k * int(dlog[a]), p - 1) * e_p(p, a)
    return total
