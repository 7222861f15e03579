"""Lifting criterion over imaginary quadratic fields with unit group {+-1}.

The decision consumes purely local data: for each place above p the tame
exponent of rho, the tame exponent of rho' (well defined modulo the
prime-to-q part of the residue field order minus one) and the wild
p-power-order character of rho'; symmetrically above q.  Three checks
decide existence of a lift up to unramified twist:

  (1)  k_i - a_i = xi_i  mod A_i at each place above p,
  (1') k'_j - b_j = xi'_j mod B_j at each place above q,
  (2)  a parity condition at the unit -1.

The xi values translate the infinity type through the residue embeddings:
xi = -sum of n_sigma * p^kappa(sigma) over the embeddings inducing the
place.  Condition (2) reduces to a parity check because -1 is its own
Teichmueller representative (contributing the order-2 element of Q/Z) and
odd-order wild characters vanish on it.

Class groups of imaginary quadratic fields are computed through reduced
binary quadratic forms under Gauss composition; they feed the counting
bound that exhibits non-liftable unramified pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .abchar import FinAbGroup, GroupCharacter
from .exactnum import (
    QmodZ,
    factorize,
    is_prime,
    kronecker_symbol,
    prime_to_part,
    valuation,
    xgcd,
)
from .heckeq import HeckeCertificate

__all__ = [
    "ImagQuadField",
    "PlaceData",
    "Place",
    "QuadLocalData",
    "PlaceLocal",
    "IdealClassGroup",
    "CriterionReport",
    "CountingReport",
    "splitting_data",
    "xi_values",
    "criterion_decide",
    "class_group",
    "counting_bound",
]

CLASS_GROUP_BOUND = 10**7

SIGMA = "sigma"
SIGMA_BAR = "sigmabar"


@dataclass(frozen=True)
class ImagQuadField:
    """Imaginary quadratic field of fundamental discriminant D < -4.

    D < -4 keeps the unit group at {+-1} (the two smaller discriminants
    carry extra roots of unity and are out of scope).
    """

    D: int

    def __post_init__(self):
        D = self.D
        if D >= 0:
            raise ValueError("discriminant must be negative")
        if D >= -4:
            raise ValueError("fields with extra roots of unity are not supported")
        r = D % 4
        if r == 1:
            if not _is_squarefree(D):
                raise ValueError(f"{D} is not a fundamental discriminant")
        elif r == 0:
            m = D // 4
            if m % 4 in (0, 1) or not _is_squarefree(m):
                raise ValueError(f"{D} is not a fundamental discriminant")
        else:
            raise ValueError(f"{D} is not a discriminant (must be 0 or 1 mod 4)")

    def splitting(self, ell: int) -> int:
        """Kronecker symbol: +1 split, -1 inert, 0 ramified."""
        return kronecker_symbol(self.D, ell)

    def __str__(self) -> str:
        return f"Q(sqrt({self.D}))"


def _is_squarefree(n: int) -> bool:
    return all(e == 1 for e in factorize(abs(n)).values())


@dataclass(frozen=True)
class Place:
    """One place above a rational prime: residue size, the congruence modulus
    it contributes, and the embedding-to-exponent map kappa."""

    name: str
    residue_size: int
    modulus: int                       # prime-to-other-prime part of residue_size - 1
    kappa: tuple[tuple[str, int], ...]  # embeddings inducing this place

    def embeddings(self) -> tuple[str, ...]:
        return tuple(tag for tag, _ in self.kappa)


@dataclass(frozen=True)
class PlaceData:
    prime: int
    kind: str  # "split" | "inert"
    places: tuple[Place, ...]


def splitting_data(K: ImagQuadField, p: int, q: int) -> tuple[PlaceData, PlaceData]:
    """Places above p and q with residue data and the kappa convention.

    Split places pair one embedding each (kappa = 0); an inert place carries
    both embeddings, the first-listed one getting kappa = 0.  Ramified
    primes are rejected.
    """
    if p == q:
        raise ValueError("p and q must be distinct")
    for ell in (p, q):
        if ell == 2 or not is_prime(ell):
            raise ValueError(f"{ell} must be an odd prime")
    out = []
    for ell, other in ((p, q), (q, p)):
        sym = K.splitting(ell)
        if sym == 0:
            raise ValueError(f"{ell} is ramified in {K}")
        if sym == 1:
            a = prime_to_part(ell - 1, other)
            places = (
                Place(f"v1@{ell}", ell, a, ((SIGMA, 0),)),
                Place(f"v2@{ell}", ell, a, ((SIGMA_BAR, 0),)),
            )
            out.append(PlaceData(ell, "split", places))
        else:
            size = ell * ell
            a = prime_to_part(size - 1, other)
            places = (Place(f"v1@{ell}", size, a, ((SIGMA, 0), (SIGMA_BAR, 1))),)
            out.append(PlaceData(ell, "inert", places))
    return out[0], out[1]


def xi_values(
    data: PlaceData, infinity_type: tuple[int, int]
) -> tuple[int, ...]:
    """xi for each place: minus the kappa-weighted sum of the infinity type
    over the embeddings inducing the place."""
    n = {SIGMA: infinity_type[0], SIGMA_BAR: infinity_type[1]}
    return tuple(
        -sum(n[tag] * data.prime**kap for tag, kap in place.kappa)
        for place in data.places
    )


@dataclass(frozen=True)
class PlaceLocal:
    """Local data of the pair at one place: tame exponent of the character in
    its own characteristic, tame exponent of the other character, and the
    other character's wild part."""

    k: int
    a: int
    psi: GroupCharacter | None = None


@dataclass(frozen=True)
class QuadLocalData:
    above_p: tuple[PlaceLocal, ...]
    above_q: tuple[PlaceLocal, ...]

    @classmethod
    def trivial(cls, data_p: PlaceData, data_q: PlaceData) -> "QuadLocalData":
        return cls(
            tuple(PlaceLocal(0, 0) for _ in data_p.places),
            tuple(PlaceLocal(0, 0) for _ in data_q.places),
        )


def _validate_local(
    local: QuadLocalData, data_p: PlaceData, data_q: PlaceData
) -> None:
    for entries, data in ((local.above_p, data_p), (local.above_q, data_q)):
        if len(entries) != len(data.places):
            raise ValueError(
                f"expected data for {len(data.places)} places above {data.prime}"
            )
        for entry, place in zip(entries, data.places):
            if not 0 <= entry.a < place.modulus:
                raise ValueError(
                    f"tame exponent {entry.a} out of range mod {place.modulus} at {place.name}"
                )
            if entry.psi is not None and entry.psi.order() != 1:
                if set(factorize(entry.psi.order())) != {data.prime}:
                    raise ValueError(
                        f"wild character at {place.name} must have {data.prime}-power order"
                    )


@dataclass(frozen=True)
class ConditionCheck:
    place: str
    lhs: int
    rhs: int
    modulus: int
    ok: bool


@dataclass(frozen=True)
class CriterionReport:
    condition_1: tuple[ConditionCheck, ...]
    condition_1_prime: tuple[ConditionCheck, ...]
    condition_2: tuple[int, int, bool]  # (parity sum, target parity, ok)
    certificate: HeckeCertificate | None

    @property
    def ok(self) -> bool:
        return self.certificate is not None


def _place_label(place: Place) -> str:
    return place.name


def _certificate_local_char(
    place: Place, tame_power: int, psi: GroupCharacter | None
) -> GroupCharacter:
    tame_order = place.residue_size - 1
    orders: tuple[int, ...] = (tame_order,)
    labels: tuple[object, ...] = (f"k({place.name})^* tame",)
    images: tuple[QmodZ, ...] = (QmodZ(tame_power, tame_order),)
    if psi is not None and not psi.is_trivial():
        orders += psi.group.orders
        labels += tuple(f"{place.name} wild {i}" for i in range(psi.group.rank))
        images += psi.images
    return GroupCharacter(FinAbGroup(orders, labels), images)


def criterion_decide(
    K: ImagQuadField,
    p: int,
    q: int,
    local: QuadLocalData,
    infinity_type: tuple[int, int],
    kappa_first: str = SIGMA,
) -> CriterionReport:
    """Decide liftability (up to unramified twist) of local data with the
    given infinity type; on success the certificate carries one unit-group
    character per place.

    kappa_first chooses which embedding gets exponent 0 at an inert place;
    the verdict provably does not depend on it when the infinity type is
    relabelled accordingly.
    """
    data_p, data_q = splitting_data(K, p, q)
    if kappa_first not in (SIGMA, SIGMA_BAR):
        raise ValueError("kappa_first must name one of the two embeddings")
    if kappa_first == SIGMA_BAR:
        data_p, data_q = _swap_kappa(data_p), _swap_kappa(data_q)
    _validate_local(local, data_p, data_q)

    xis_p = xi_values(data_p, infinity_type)
    xis_q = xi_values(data_q, infinity_type)

    def check(entries, places, xis):
        checks = []
        for entry, place, xi in zip(entries, places, xis):
            lhs = entry.k - entry.a
            checks.append(
                ConditionCheck(
                    place.name, lhs, xi, place.modulus, (lhs - xi) % place.modulus == 0
                )
            )
        return tuple(checks)

    cond1 = check(local.above_p, data_p.places, xis_p)
    cond1p = check(local.above_q, data_q.places, xis_q)

    # condition at the unit -1: the tame characters contribute the order-2
    # element of Q/Z to the power (k - xi); odd-order wild parts vanish
    parity_sum = sum(
        e.k - xi for e, xi in zip(local.above_p, xis_p)
    ) + sum(e.k - xi for e, xi in zip(local.above_q, xis_q))
    target = infinity_type[0] + infinity_type[1]
    cond2 = (parity_sum % 2, target % 2, parity_sum % 2 == target % 2)

    ok = all(c.ok for c in cond1) and all(c.ok for c in cond1p) and cond2[2]
    certificate = None
    if ok:
        local_chars = []
        norm = 1
        norm_known = True
        for entries, places, xis in (
            (local.above_p, data_p.places, xis_p),
            (local.above_q, data_q.places, xis_q),
        ):
            for entry, place, xi in zip(entries, places, xis):
                eps = _certificate_local_char(place, entry.k - xi, entry.psi)
                if not eps.is_trivial():
                    local_chars.append((_place_label(place), eps))
                wild_order = entry.psi.order() if entry.psi is not None else 1
                tame_nontrivial = (entry.k - xi) % (place.residue_size - 1) != 0
                if wild_order > 1:
                    if place.residue_size == data_p.prime or place.residue_size == data_q.prime:
                        # split place: wild inertia is cyclic, conductor
                        # exponent is one more than the order's valuation
                        ell = data_p.prime if place.residue_size == data_p.prime else data_q.prime
                        m = valuation(wild_order, ell)
                        norm *= place.residue_size ** (m + 1)
                    else:
                        # inert place: the wild filtration level is not
                        # determined by the order alone
                        norm_known = False
                elif tame_nontrivial:
                    norm *= place.residue_size
        certificate = HeckeCertificate(
            infinity_type=((SIGMA, infinity_type[0]), (SIGMA_BAR, infinity_type[1])),
            local_chars=tuple(local_chars),
            conductor=norm if norm_known else None,
        )
    return CriterionReport(cond1, cond1p, cond2, certificate)


def _swap_kappa(data: PlaceData) -> PlaceData:
    places = tuple(
        Place(
            pl.name,
            pl.residue_size,
            pl.modulus,
            tuple((tag, 1 - k if len(pl.kappa) == 2 else k) for tag, k in pl.kappa),
        )
        for pl in data.places
    )
    return PlaceData(data.prime, data.kind, places)


# ---------------------------------------------------------------------------
# Class groups via reduced binary quadratic forms


@dataclass(frozen=True)
class IdealClassGroup:
    D: int
    forms: tuple[tuple[int, int, int], ...]
    h: int
    exponent: int
    invariant_factors: tuple[int, ...]

    def identity(self) -> tuple[int, int, int]:
        return _principal_form(self.D)


def _principal_form(D: int) -> tuple[int, int, int]:
    k = D % 2
    return (1, k, (k * k - D) // 4)


def _reduce_form(a: int, b: int, c: int) -> tuple[int, int, int]:
    while True:
        if c < a or (c == a and b < 0):
            a, b, c = c, -b, a
            continue
        if b > a or b <= -a:
            r = (a - b) // (2 * a)
            b2 = b + 2 * r * a
            c2 = a * r * r + b * r + c
            b, c = b2, c2
            continue
        if a == c and b < 0:
            b = -b
            continue
        return (a, b, c)


def _transform_leading_coprime(
    form: tuple[int, int, int], n: int
) -> tuple[int, int, int]:
    """Equivalent form whose leading coefficient is coprime to n."""
    a, b, c = form
    if math.gcd(a, n) == 1:
        return form
    bound = 1
    while True:
        bound += 1
        for x in range(-bound, bound + 1):
            for y in range(-bound, bound + 1):
                if max(abs(x), abs(y)) != bound and bound > 2:
                    continue
                if math.gcd(x, y) != 1:
                    continue
                v = a * x * x + b * x * y + c * y * y
                if v != 0 and math.gcd(v, n) == 1:
                    g, u, w = xgcd(x, y)
                    assert g == 1
                    # unimodular [[x, -w], [y, u]]
                    A = v
                    B = 2 * a * x * (-w) + b * (x * u - w * y) + 2 * c * y * u
                    C = a * w * w - b * w * u + c * u * u
                    return (A, B, C)
        if bound > 64:
            raise AssertionError("no representative coprime to n found")


def _compose(
    f1: tuple[int, int, int], f2: tuple[int, int, int], D: int
) -> tuple[int, int, int]:
    """Gauss composition via concordant forms, followed by reduction."""
    a1, b1, c1 = f1
    f2 = _transform_leading_coprime(f2, a1)
    a2, b2, c2 = f2
    # common middle coefficient: B = b1 mod 2a1, B = b2 mod 2a2
    g, u, _ = xgcd(2 * a1, 2 * a2)
    assert (b2 - b1) % g == 0
    lcm = 2 * a1 * a2 * 2 // g
    B = (b1 + 2 * a1 * ((b2 - b1) // g * u % (2 * a2 // g))) % lcm
    a3 = a1 * a2
    c3 = (B * B - D) // (4 * a3)
    assert B * B - 4 * a3 * c3 == D
    return _reduce_form(a3, B, c3)


def class_group(D: int, bound: int = CLASS_GROUP_BOUND) -> IdealClassGroup:
    """Ideal class group of the fundamental discriminant D < 0: reduced forms,
    class number, exponent and invariant factors."""
    K = ImagQuadField(D)  # validates fundamental and D < -4
    if -D > bound:
        raise ValueError(f"|D| exceeds the configured bound {bound}")

    forms = []
    amax = math.isqrt(-D // 3)
    for a in range(1, amax + 1):
        for b in range(-a + 1, a + 1):
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a:
                continue
            if a == c and b < 0:
                continue
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            forms.append((a, b, c))
    forms.sort()
    h = len(forms)

    # orders by repeated composition
    identity = _principal_form(D)
    orders = {}
    for f in forms:
        e, acc = 1, f
        while acc != identity:
            acc = _compose(acc, f, D)
            e += 1
        orders[f] = e
    exponent = math.lcm(*orders.values()) if orders else 1

    # primary type per prime: counting solutions of x^(ell^k) = 1 recovers the
    # multiset of exponents, since log_ell of the count ratio at level k is
    # the number of primary factors of exponent >= k
    primary: dict[int, list[int]] = {}
    for ell in factorize(h):
        counts = [1]
        while True:
            k = len(counts)
            counts.append(sum(1 for f in forms if (ell**k) % orders[f] == 0))
            if counts[-1] == counts[-2]:
                counts.pop()
                break
        rs = [
            valuation(counts[k] // counts[k - 1], ell) if counts[k] > counts[k - 1] else 0
            for k in range(1, len(counts))
        ]
        type_exponents = []
        for k, r in enumerate(rs, start=1):
            nxt = rs[k] if k < len(rs) else 0
            type_exponents.extend([k] * (r - nxt))
        primary[ell] = sorted(type_exponents, reverse=True)

    # merge primary types into invariant factors d_1 | d_2 | ... | d_r
    width = max((len(v) for v in primary.values()), default=0)
    factors = []
    for i in range(width):
        d = 1
        for ell, exps in primary.items():
            if i < len(exps):
                d *= ell ** exps[i]
        factors.append(d)
    factors = tuple(sorted(factors))
    assert math.prod(factors) == h

    return IdealClassGroup(D, tuple(forms), h, exponent, factors)


@dataclass(frozen=True)
class CountingReport:
    D: int
    p: int
    q: int
    alpha: int
    h: int
    lift_bound: int      # alpha^2 * h
    pair_count: int      # h^2
    gap_exists: bool     # h > alpha^2

    @property
    def verdict(self) -> str:
        return (
            "non-liftable pair exists" if self.gap_exists else "no forced gap"
        )


def counting_bound(K: ImagQuadField, p: int, q: int) -> CountingReport:
    """Count unramified pairs against the lifting bound alpha^2 * h.

    Requires p and q split in K and coprime to the class number; when
    h > alpha^2 some unramified pair admits no exact lift.
    """
    data_p, data_q = splitting_data(K, p, q)
    if data_p.kind != "split":
        raise ValueError(f"{p} is not split in {K}")
    if data_q.kind != "split":
        raise ValueError(f"{q} is not split in {K}")
    grp = class_group(K.D)
    if grp.h % p == 0:
        raise ValueError(f"{p} divides the class number {grp.h}")
    if grp.h % q == 0:
        raise ValueError(f"{q} divides the class number {grp.h}")
    alpha = grp.exponent
    return CountingReport(
        D=K.D, p=p, q=q,
        alpha=alpha, h=grp.h,
        lift_bound=alpha * alpha * grp.h,
        pair_count=grp.h * grp.h,
        gap_exists=grp.h > alpha * alpha,
    )
