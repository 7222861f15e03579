"""Characters of finite abelian groups valued in Q/Z.

A group is presented as a direct product of cyclic factors, optionally
labelled (unit groups carry a label recording the prime power and the
canonical generator).  A mod-ell character is stored through its
canonical complex representative: the unique representative whose order
is prime to ell.  With that convention, reduction mod ell is exact group
theory: it kills the ell-primary part of every generator image.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterator

from .exactnum import (
    QmodZ,
    euler_phi,
    is_prime,
    primitive_root,
    valuation,
    xgcd,
)

__all__ = [
    "FinAbGroup",
    "GroupCharacter",
    "ModCharacter",
    "UnitLabel",
    "unit_group",
    "reduce_mod",
    "simultaneous_artin_lift",
    "bezout_combine",
    "character_conductor",
    "enumerate_characters",
    "raise_unit_level",
    "unit_dlog",
]

CHARACTER_ENUM_BOUND = 10**6


@dataclass(frozen=True)
class UnitLabel:
    """Marks a generator of the cyclic group (Z/prime^exponent)^*."""

    prime: int
    exponent: int
    generator: int

    def __str__(self) -> str:
        return f"(Z/{self.prime}^{self.exponent})* gen {self.generator}"


@dataclass(frozen=True)
class FinAbGroup:
    """Finite abelian group as a product of cyclic factors of the given orders.

    Labels are optional per-generator annotations; unit-group presentations
    use UnitLabel so that conductor bookkeeping can recover the prime power.
    """

    orders: tuple[int, ...]
    labels: tuple[object, ...] = field(default=())

    def __post_init__(self):
        if any(d < 2 for d in self.orders):
            raise ValueError("cyclic factor orders must be >= 2")
        if self.labels and len(self.labels) != len(self.orders):
            raise ValueError("one label per generator required")
        if not self.labels:
            object.__setattr__(self, "labels", (None,) * len(self.orders))

    @classmethod
    def trivial(cls) -> "FinAbGroup":
        return cls(())

    @property
    def rank(self) -> int:
        return len(self.orders)

    def num_characters(self) -> int:
        return math.prod(self.orders)

    def __str__(self) -> str:
        if not self.orders:
            return "1"
        return " x ".join(f"Z/{d}" for d in self.orders)


@dataclass(frozen=True)
class GroupCharacter:
    """Homomorphism from a FinAbGroup to Q/Z, given by generator images."""

    group: FinAbGroup
    images: tuple[QmodZ, ...]

    def __post_init__(self):
        if len(self.images) != self.group.rank:
            raise ValueError("one image per generator required")
        for d, x in zip(self.group.orders, self.images):
            if not (d * x).is_zero():
                raise ValueError(f"image {x} is not killed by generator order {d}")

    @classmethod
    def trivial(cls, group: FinAbGroup) -> "GroupCharacter":
        return cls(group, tuple(QmodZ(0, 1) for _ in group.orders))

    def order(self) -> int:
        return math.lcm(1, *(x.den for x in self.images))

    def is_trivial(self) -> bool:
        return all(x.is_zero() for x in self.images)

    def __mul__(self, other: "GroupCharacter") -> "GroupCharacter":
        self._require_same_group(other)
        return GroupCharacter(
            self.group, tuple(a + b for a, b in zip(self.images, other.images))
        )

    def inverse(self) -> "GroupCharacter":
        return GroupCharacter(self.group, tuple(-a for a in self.images))

    def __pow__(self, k: int) -> "GroupCharacter":
        return GroupCharacter(self.group, tuple(k * a for a in self.images))

    def evaluate(self, exponents: tuple[int, ...]) -> QmodZ:
        if len(exponents) != self.group.rank:
            raise ValueError("one exponent per generator required")
        out = QmodZ(0, 1)
        for e, x in zip(exponents, self.images):
            out = out + e * x
        return out

    def part_prime_to(self, ell: int) -> "GroupCharacter":
        return GroupCharacter(
            self.group, tuple(x.part_prime_to(ell) for x in self.images)
        )

    def part_at(self, ell: int) -> "GroupCharacter":
        return GroupCharacter(self.group, tuple(x.part_at(ell) for x in self.images))

    def _require_same_group(self, other: "GroupCharacter") -> None:
        if self.group != other.group:
            raise ValueError("characters live on different groups")


@dataclass(frozen=True)
class ModCharacter:
    """A mod-ell character via its canonical prime-to-ell representative."""

    base: GroupCharacter
    residue_char: int

    def __post_init__(self):
        if not is_prime(self.residue_char):
            raise ValueError(f"{self.residue_char} is not prime")
        if self.base.order() % self.residue_char == 0:
            raise ValueError(
                f"canonical representative must have order prime to {self.residue_char}"
            )

    @property
    def group(self) -> FinAbGroup:
        return self.base.group

    def order(self) -> int:
        return self.base.order()

    def is_trivial(self) -> bool:
        return self.base.is_trivial()


def reduce_mod(eps: GroupCharacter, ell: int) -> ModCharacter:
    """Reduction of a finite-order character modulo the prime ell.

    Roots of unity of ell-power order reduce to 1, so the reduction is the
    prime-to-ell part of each generator image.  Idempotent by construction.
    """
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    return ModCharacter(eps.part_prime_to(ell), ell)


def simultaneous_artin_lift(
    tau: ModCharacter, tau_prime: ModCharacter
) -> GroupCharacter | None:
    """The unique finite-order character reducing to tau mod p and to
    tau_prime mod q, or None when no such character exists.

    Existence needs the canonical representatives to agree away from p and
    q: the quotient of the two stored characters must have order dividing
    a power of p*q.  The witness glues the p-part of tau_prime, the q-part
    of tau and their common prime-to-pq part.
    """
    p = tau.residue_char
    q = tau_prime.residue_char
    if p == q:
        raise ValueError("the two residue characteristics must differ")
    if tau.group != tau_prime.group:
        raise ValueError("characters live on different groups")
    images = []
    for t, t2 in zip(tau.base.images, tau_prime.base.images):
        t_q = t.part_at(q)
        t_rest = t - t_q
        t2_p = t2.part_at(p)
        t2_rest = t2 - t2_p
        if t_rest != t2_rest:
            return None
        images.append(t2_p + t_q + t_rest)
    return GroupCharacter(tau.group, tuple(images))


def bezout_combine(
    eps_p_power: GroupCharacter,
    eps_q_power: GroupCharacter,
    p: int,
    alpha: int,
    q: int,
    beta: int,
) -> GroupCharacter:
    """Recover eps from eps^(p^alpha) and eps^(q^beta) via a Bezout relation
    a*p^alpha + b*q^beta = 1."""
    m1, m2 = p**alpha, q**beta
    g, a, b = xgcd(m1, m2)
    if g != 1:
        raise ValueError(f"p^alpha = {m1} and q^beta = {m2} are not coprime")
    return (eps_p_power**a) * (eps_q_power**b)


def character_conductor(eps: GroupCharacter) -> int:
    """Least prime power ell^c such that eps factors through (Z/ell^c)^*.

    The group must be a unit-group presentation: zero generators (trivial
    conductor) or a single UnitLabel-marked cyclic factor.
    """
    if eps.group.rank == 0:
        return 1
    if eps.group.rank != 1 or not isinstance(eps.group.labels[0], UnitLabel):
        raise ValueError("conductor needs a labelled (Z/ell^a)^* presentation")
    label = eps.group.labels[0]
    n = eps.order()
    if n == 1:
        return 1
    return label.prime ** (1 + valuation(n, label.prime))


def enumerate_characters(
    group: FinAbGroup, bound: int = CHARACTER_ENUM_BOUND
) -> Iterator[GroupCharacter]:
    """Every character of the group exactly once, in lexicographic order of
    the generator images (as multiples of 1/d_i)."""
    if group.num_characters() > bound:
        raise ValueError(
            f"character group of size {group.num_characters()} exceeds bound {bound}"
        )
    for ks in itertools.product(*(range(d) for d in group.orders)):
        yield GroupCharacter(
            group, tuple(QmodZ(k, d) for k, d in zip(ks, group.orders))
        )


# ---------------------------------------------------------------------------
# Unit-group presentations


def unit_group(ell: int, exponent: int) -> FinAbGroup:
    """(Z/ell^exponent)^* for an odd prime ell, as a labelled cyclic group.

    exponent 0 gives the trivial group (used for unramified restrictions).
    """
    if not is_prime(ell) or ell == 2:
        raise ValueError(f"{ell} must be an odd prime")
    if exponent < 0:
        raise ValueError("exponent must be >= 0")
    if exponent == 0:
        return FinAbGroup(())
    modulus = ell**exponent
    g = primitive_root(modulus)
    return FinAbGroup((euler_phi(modulus),), (UnitLabel(ell, exponent, g),))


def unit_dlog(generator: int, target: int, modulus: int) -> int:
    """Discrete log of target to the base generator in (Z/modulus)^*."""
    x = 1 % modulus
    target %= modulus
    for e in range(euler_phi(modulus)):
        if x == target:
            return e
        x = x * generator % modulus
    raise ValueError(f"{target} is not a power of {generator} modulo {modulus}")


def raise_unit_level(eps: GroupCharacter, exponent: int) -> GroupCharacter:
    """Pull a character of (Z/ell^c)^* back to (Z/ell^a)^*, a = exponent >= c."""
    if eps.group.rank == 0:
        raise ValueError("cannot raise a character on the trivial group without a prime")
    label = eps.group.labels[0]
    if eps.group.rank != 1 or not isinstance(label, UnitLabel):
        raise ValueError("level raising needs a labelled (Z/ell^a)^* presentation")
    if exponent < label.exponent:
        raise ValueError("target exponent must not be smaller")
    if exponent == label.exponent:
        return eps
    big = unit_group(label.prime, exponent)
    big_label: UnitLabel = big.labels[0]  # type: ignore[assignment]
    small_mod = label.prime**label.exponent
    e = unit_dlog(label.generator, big_label.generator % small_mod, small_mod)
    return GroupCharacter(big, (e * eps.images[0],))
