"""Exact arithmetic substrate.

Residues in Q/Z (additive stand-ins for roots of unity), congruence
classes and a two-congruence CRT solver, and the handful of
multiplicative number theory helpers the rest of the library leans on.
Everything is immutable after construction and safe to share between
threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

__all__ = [
    "QmodZ",
    "Congruence",
    "crt_pair",
    "prime_to_part",
    "discrete_log",
    "kronecker_symbol",
    "bernoulli",
    "xgcd",
    "inv_mod",
    "is_prime",
    "factorize",
    "euler_phi",
    "valuation",
    "primitive_root",
]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Extended gcd: returns (g, x, y) with a*x + b*y = g = gcd(a, b), g >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def inv_mod(a: int, m: int) -> int:
    g, x, _ = xgcd(a % m, m)
    if g != 1:
        raise ValueError(f"{a} is not invertible modulo {m}")
    return x % m


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of n >= 1 as {prime: exponent}."""
    if n < 1:
        raise ValueError("can only factor positive integers")
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def euler_phi(n: int) -> int:
    phi = 1
    for p, e in factorize(n).items():
        phi *= (p - 1) * p ** (e - 1)
    return phi


def valuation(n: int, p: int) -> int:
    if n == 0:
        raise ValueError("valuation of 0 is undefined")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def prime_to_part(n: int, ell: int) -> int:
    """Strip every factor of the prime ell from n >= 1."""
    if n < 1:
        raise ValueError("n must be a positive integer")
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    while n % ell == 0:
        n //= ell
    return n


@lru_cache(maxsize=1 << 18)
def _primary_split(num: int, den: int, ell: int) -> tuple[int, int]:
    # ell-primary component of num/den in Q/Z, returned as (num', ell^v)
    v = 0
    m = 1
    rest = den
    while rest % ell == 0:
        rest //= ell
        m *= ell
        v += 1
    if v == 0:
        return 0, 1
    # num/den = num*(u*m + w*rest)/den with u*m + w*rest = 1
    _, _, w = xgcd(m, rest)
    n2 = (num * w) % m
    g = math.gcd(n2, m)
    return n2 // g, m // g


class QmodZ:
    """A residue in Q/Z kept in canonical form: 0 <= num < den, gcd = 1.

    Written additively; x stands for the root of unity exp(2*pi*i*x), so
    adding residues multiplies the corresponding roots of unity and the
    order of x is its denominator.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: int, den: int = 1):
        if den <= 0:
            raise ValueError("denominator must be positive")
        num %= den
        g = math.gcd(num, den)
        object.__setattr__(self, "num", num // g)
        object.__setattr__(self, "den", den // g)

    def __setattr__(self, name, value):
        raise AttributeError("QmodZ is immutable")

    @classmethod
    def from_str(cls, text: str) -> "QmodZ":
        num, _, den = text.partition("/")
        return cls(int(num), int(den) if den else 1)

    def order(self) -> int:
        return self.den

    def is_zero(self) -> bool:
        return self.num == 0

    def __add__(self, other: "QmodZ") -> "QmodZ":
        return QmodZ(self.num * other.den + other.num * self.den, self.den * other.den)

    def __sub__(self, other: "QmodZ") -> "QmodZ":
        return QmodZ(self.num * other.den - other.num * self.den, self.den * other.den)

    def __neg__(self) -> "QmodZ":
        return QmodZ(-self.num, self.den)

    def __mul__(self, k: int) -> "QmodZ":
        if not isinstance(k, int):
            return NotImplemented
        return QmodZ(self.num * k, self.den)

    __rmul__ = __mul__

    def part_at(self, ell: int) -> "QmodZ":
        """The ell-primary component (the unique part of ell-power order)."""
        n, d = _primary_split(self.num, self.den, ell)
        return QmodZ(n, d)

    def part_prime_to(self, ell: int) -> "QmodZ":
        return self - self.part_at(ell)

    def part_prime_to_all(self, primes) -> "QmodZ":
        x = self
        for ell in primes:
            x = x.part_prime_to(ell)
        return x

    def as_fraction(self) -> Fraction:
        return Fraction(self.num, self.den)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, QmodZ)
            and self.num == other.num
            and self.den == other.den
        )

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __str__(self) -> str:
        return f"{self.num}/{self.den}"

    def __repr__(self) -> str:
        return f"QmodZ({self.num}, {self.den})"


@dataclass(frozen=True)
class Congruence:
    """A congruence class: residue modulo modulus, smallest representative kept."""

    residue: int
    modulus: int

    def __post_init__(self):
        if self.modulus < 1:
            raise ValueError("modulus must be positive")
        object.__setattr__(self, "residue", self.residue % self.modulus)

    def contains(self, k: int) -> bool:
        return k % self.modulus == self.residue

    def __str__(self) -> str:
        return f"{self.residue} (mod {self.modulus})"


def crt_pair(c1: Congruence, c2: Congruence) -> Congruence | None:
    """Solve the two-congruence system, allowing non-coprime moduli.

    Returns the unique class modulo lcm of the moduli, or None when the
    residues disagree modulo the gcd (no solution).
    """
    m1, m2 = c1.modulus, c2.modulus
    g, u, _ = xgcd(m1, m2)
    if (c2.residue - c1.residue) % g != 0:
        return None
    lcm = m1 // g * m2
    step = (c2.residue - c1.residue) // g
    x = (c1.residue + m1 * (step * u % (m2 // g))) % lcm
    return Congruence(x, lcm)


def discrete_log(target: QmodZ, base: QmodZ) -> int | None:
    """Least e >= 0 with e*base = target in Q/Z, or None if target is not
    in the cyclic subgroup generated by base."""
    m = base.den
    if m == 1:
        return 0 if target.is_zero() else None
    if m % target.den != 0:
        return None
    t = target.num * (m // target.den)
    return t * inv_mod(base.num, m) % m


def kronecker_symbol(D: int, p: int) -> int:
    """Kronecker symbol (D|p) for an odd prime p (Euler's criterion)."""
    if p % 2 == 0 or not is_prime(p):
        raise ValueError(f"{p} must be an odd prime")
    a = D % p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


@lru_cache(maxsize=None)
def _bernoulli_even(m: int) -> Fraction:
    # B_{2m} by the binomial recurrence sum_{r<=n} C(n+1,r) B_r = 0, skipping
    # the vanishing odd indices (B_1 = -1/2 enters once)
    if m == 0:
        return Fraction(1)
    n = 2 * m
    s = Fraction(n + 1, -2)
    for j in range(m):
        s += math.comb(n + 1, 2 * j) * _bernoulli_even(j)
    return -s / (n + 1)


def bernoulli(k: int, max_index: int = 100) -> Fraction:
    """The k-th Bernoulli number for even k >= 2, as an exact rational."""
    if k % 2 != 0 or k < 2:
        raise ValueError("only even k >= 2 are supported")
    if k > max_index:
        raise ValueError(f"k = {k} exceeds the configured bound {max_index}")
    return _bernoulli_even(k // 2)


def primitive_root(m: int) -> int:
    """Smallest primitive root modulo an odd prime power m."""
    fac = factorize(m)
    if len(fac) != 1 or 2 in fac:
        raise ValueError(f"{m} is not an odd prime power")
    phi = euler_phi(m)
    prime_divs = list(factorize(phi))
    for g in range(2, m):
        if math.gcd(g, m) != 1:
            continue
        if all(pow(g, phi // r, m) != 1 for r in prime_divs):
            return g
    raise AssertionError(f"no primitive root found modulo {m}")
