"""Decision pipeline over Q.

A character of the absolute Galois group of Q unramified outside a given
modulus N is identified with a character of (Z/N)^*, one labelled cyclic
component per odd prime power.  The restriction to inertia at ell is the
ell-component.  The cyclotomic character mod p is normalised to be the
identity character of (Z/p)^*: under the fixed Q/Z identification it sends
the canonical generator to 1/(p-1), and its prime-to-p lift is the same
character read in Q/Z.

The pipeline: extract the local exponents of a pair (rho mod p, rho' mod q),
solve one congruence system, and assemble the witness character
eps * eps' * Nm^k together with an internal re-verification.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .abchar import (
    GroupCharacter,
    ModCharacter,
    character_conductor,
    enumerate_characters,
    raise_unit_level,
    simultaneous_artin_lift,
    unit_dlog,
    unit_group,
)
from .exactnum import (
    Congruence,
    QmodZ,
    crt_pair,
    discrete_log,
    factorize,
    is_prime,
    prime_to_part,
    valuation,
)

__all__ = [
    "GlobalCharQ",
    "LocalInvariantsQ",
    "HeckeCertificate",
    "NecessityReport",
    "TwistResult",
    "PropQResult",
    "restrict_to_inertia",
    "extract_invariants",
    "check_necessary",
    "twist_to_unramified",
    "conductor_bound",
    "decide_prop_q",
    "brute_force_oracle_q",
    "hecke_reductions",
    "theta_power",
]

ORACLE_BOUND = 10**7


def _validate_odd_modulus(modulus: int) -> dict[int, int]:
    if modulus < 1:
        raise ValueError("modulus must be positive")
    if modulus % 2 == 0:
        raise ValueError("only odd moduli are supported (2 never ramifies here)")
    return factorize(modulus)


@dataclass(frozen=True, eq=False)
class GlobalCharQ:
    """A mod-ell character of G_Q with ramification support dividing modulus.

    images maps each prime of the modulus to the Q/Z image of the canonical
    generator (least primitive root) of its (Z/ell'^a)^* component; primes
    with trivial component are omitted.
    """

    residue_char: int
    modulus: int
    images: tuple[tuple[int, QmodZ], ...]

    def __post_init__(self):
        if not is_prime(self.residue_char) or self.residue_char == 2:
            raise ValueError("residue characteristic must be an odd prime")
        fac = _validate_odd_modulus(self.modulus)
        seen: dict[int, QmodZ] = {}
        for ell, img in self.images:
            if ell not in fac:
                raise ValueError(f"prime {ell} does not divide the modulus")
            if ell in seen:
                raise ValueError(f"duplicate image for prime {ell}")
            grp = unit_group(ell, fac[ell])
            if not (grp.orders[0] * img).is_zero():
                raise ValueError(f"image at {ell} is not killed by the unit group order")
            if img.den % self.residue_char == 0:
                raise ValueError(
                    f"image at {ell} has order divisible by {self.residue_char}; "
                    "a mod-ell character takes values of prime-to-ell order"
                )
            if not img.is_zero():
                seen[ell] = img
        object.__setattr__(self, "images", tuple(sorted(seen.items())))

    @classmethod
    def from_images(
        cls, residue_char: int, modulus: int, images: dict[int, QmodZ]
    ) -> "GlobalCharQ":
        return cls(residue_char, modulus, tuple(sorted(images.items())))

    @classmethod
    def trivial(cls, residue_char: int, modulus: int = 1) -> "GlobalCharQ":
        return cls(residue_char, modulus, ())

    def prime_exponent(self, ell: int) -> int:
        return valuation(self.modulus, ell) if self.modulus % ell == 0 else 0

    def image_at(self, ell: int) -> QmodZ:
        for p, img in self.images:
            if p == ell:
                return img
        return QmodZ(0, 1)

    def support(self) -> tuple[int, ...]:
        return tuple(sorted(factorize(self.modulus)))

    def ramified_primes(self) -> tuple[int, ...]:
        return tuple(ell for ell, _ in self.images)

    def component(self, ell: int) -> ModCharacter:
        """Restriction to inertia at ell as a character of (Z/ell^a)^*."""
        a = self.prime_exponent(ell)
        grp = unit_group(ell, a)
        if a == 0:
            return ModCharacter(GroupCharacter.trivial(grp), self.residue_char)
        return ModCharacter(
            GroupCharacter(grp, (self.image_at(ell),)), self.residue_char
        )

    def with_modulus(self, modulus: int) -> "GlobalCharQ":
        """Re-present relative to another modulus.  Raising a level pulls the
        component back; lowering is legal only below the conductor."""
        fac = _validate_odd_modulus(modulus)
        images: dict[int, QmodZ] = {}
        for ell, img in self.images:
            a_old = self.prime_exponent(ell)
            a_new = fac.get(ell, 0)
            if a_new > a_old:
                images[ell] = raise_unit_level(
                    GroupCharacter(unit_group(ell, a_old), (img,)), a_new
                ).images[0]
            elif a_new < a_old:
                old = GroupCharacter(unit_group(ell, a_old), (img,))
                if character_conductor(old) > ell**a_new:
                    raise ValueError(f"modulus {modulus} too small at {ell}")
                g_old = unit_group(ell, a_old).labels[0].generator
                g_new = unit_group(ell, a_new).labels[0].generator
                e = unit_dlog(g_old, g_new % ell**a_old, ell**a_old)
                images[ell] = e * img
            else:
                images[ell] = img
        return GlobalCharQ.from_images(self.residue_char, modulus, images)

    def __mul__(self, other: "GlobalCharQ") -> "GlobalCharQ":
        if other.residue_char != self.residue_char:
            raise ValueError("mismatched residue characteristics")
        modulus = math.lcm(self.modulus, other.modulus)
        a = self.with_modulus(modulus)
        b = other.with_modulus(modulus)
        images = {ell: a.image_at(ell) + b.image_at(ell) for ell in factorize(modulus)}
        return GlobalCharQ.from_images(self.residue_char, modulus, images)

    def inverse(self) -> "GlobalCharQ":
        return GlobalCharQ(
            self.residue_char,
            self.modulus,
            tuple((ell, -img) for ell, img in self.images),
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, GlobalCharQ):
            return NotImplemented
        if self.residue_char != other.residue_char:
            return False
        modulus = math.lcm(self.modulus, other.modulus)
        return self.with_modulus(modulus).images == other.with_modulus(modulus).images

    def __hash__(self):
        # level-invariant: raising preserves prime set and image orders
        return hash(
            (self.residue_char, tuple((ell, img.den) for ell, img in self.images))
        )


def theta_power(residue_char: int, k: int, exponent: int = 1) -> GlobalCharQ:
    """The k-th power of the cyclotomic character mod residue_char, presented
    on (Z/residue_char^exponent)^*."""
    p = residue_char
    return GlobalCharQ.from_images(p, p**exponent, {p: QmodZ(k, p - 1)})


def restrict_to_inertia(rho: GlobalCharQ, ell: int) -> ModCharacter:
    return rho.component(ell)


@dataclass(frozen=True)
class LocalInvariantsQ:
    """The congruence data carried by a pair (rho mod p, rho' mod q) at p and q."""

    p: int
    q: int
    k_p: Congruence              # tame exponent of rho at p, mod p-1
    a_p: Congruence              # tame exponent of rho' at p, mod A_p
    A_p: int                     # prime-to-q part of p-1
    psi_prime_p: GroupCharacter  # p-power-order (wild) part of rho' at p
    k_q: Congruence
    b_q: Congruence
    B_q: int
    psi_q: GroupCharacter

    def __post_init__(self):
        assert self.A_p == prime_to_part(self.p - 1, self.q)
        assert self.B_q == prime_to_part(self.q - 1, self.p)
        assert self.a_p.modulus == self.A_p and self.b_q.modulus == self.B_q
        if self.psi_prime_p.order() != 1:
            assert set(factorize(self.psi_prime_p.order())) == {self.p}
        if self.psi_q.order() != 1:
            assert set(factorize(self.psi_q.order())) == {self.q}


@dataclass(frozen=True)
class HeckeCertificate:
    """Witness data for a lift: infinity type, the finitely many nontrivial
    local unit-group characters, and the conductor they generate."""

    infinity_type: tuple[tuple[str, int], ...]
    local_chars: tuple[tuple[str, GroupCharacter], ...]
    conductor: int | None

    def local_char(self, key: str) -> GroupCharacter | None:
        for k, eps in self.local_chars:
            if k == key:
                return eps
        return None


def _require_pair(rho: GlobalCharQ, rho_prime: GlobalCharQ) -> tuple[int, int]:
    p, q = rho.residue_char, rho_prime.residue_char
    if p == q:
        raise ValueError("the two characters must have distinct residue characteristics")
    return p, q


def _require_support_pq(rho: GlobalCharQ, rho_prime: GlobalCharQ) -> tuple[int, int]:
    p, q = _require_pair(rho, rho_prime)
    for chi in (rho, rho_prime):
        bad = [ell for ell in chi.ramified_primes() if ell not in (p, q)]
        if bad:
            raise ValueError(
                f"character mod {chi.residue_char} is ramified outside {{{p}, {q}}}: {bad}"
            )
    return p, q


def _tame_exponent(t: QmodZ, p: int, other: int) -> Congruence:
    """Write the prime-to-other tame value t (denominator dividing p-1) as the
    mod-other reduction of a power of the standard tame character; the power
    is well defined modulo the prime-to-other part of p-1."""
    pm1 = p - 1
    A = prime_to_part(pm1, other)
    if A % t.den != 0:
        raise ValueError(f"tame value {t} is incompatible with modulus {A}")
    c = t.num * (A // t.den)
    return Congruence(c * (pm1 // A) % A, A)


def extract_invariants(rho: GlobalCharQ, rho_prime: GlobalCharQ) -> LocalInvariantsQ:
    """Read off the four congruence invariants of the pair at p and at q."""
    p, q = _require_support_pq(rho, rho_prime)

    # rho at its own prime is tame: a power of the cyclotomic character
    k_p_val = discrete_log(rho.image_at(p), QmodZ(1, p - 1))
    assert k_p_val is not None, "mod-p character is automatically tame at p"

    # rho' at p: the p-primary component is the wild part, the rest gives a_p
    y = rho_prime.image_at(p)
    alpha = max(1, rho_prime.prime_exponent(p))
    psi_prime_p = GroupCharacter(unit_group(p, alpha), (y.part_at(p),))
    a_p = _tame_exponent(y.part_prime_to(p), p, q)

    k_q_val = discrete_log(rho_prime.image_at(q), QmodZ(1, q - 1))
    assert k_q_val is not None

    y2 = rho.image_at(q)
    beta = max(1, rho.prime_exponent(q))
    psi_q = GroupCharacter(unit_group(q, beta), (y2.part_at(q),))
    b_q = _tame_exponent(y2.part_prime_to(q), q, p)

    return LocalInvariantsQ(
        p=p, q=q,
        k_p=Congruence(k_p_val, p - 1), a_p=a_p,
        A_p=prime_to_part(p - 1, q), psi_prime_p=psi_prime_p,
        k_q=Congruence(k_q_val, q - 1), b_q=b_q,
        B_q=prime_to_part(q - 1, p), psi_q=psi_q,
    )


@dataclass(frozen=True)
class NecessityReport:
    per_prime: tuple[tuple[int, bool], ...]
    ok: bool

    def failing_primes(self) -> tuple[int, ...]:
        return tuple(ell for ell, ok in self.per_prime if not ok)


def _component_at_level(chi: GlobalCharQ, ell: int, a: int) -> ModCharacter:
    comp = chi.component(ell)
    if comp.group.rank == 0 and a > 0:
        return ModCharacter(GroupCharacter.trivial(unit_group(ell, a)), chi.residue_char)
    if a > chi.prime_exponent(ell):
        return ModCharacter(raise_unit_level(comp.base, a), chi.residue_char)
    return comp


def check_necessary(rho: GlobalCharQ, rho_prime: GlobalCharQ) -> NecessityReport:
    """At every prime away from p and q, the two inertia restrictions must
    simultaneously lift; reports the verdict prime by prime."""
    p, q = _require_pair(rho, rho_prime)
    results = []
    for ell in sorted(set(rho.support()) | set(rho_prime.support())):
        if ell in (p, q):
            continue
        a = max(rho.prime_exponent(ell), rho_prime.prime_exponent(ell))
        tau = _component_at_level(rho, ell, a)
        tau2 = _component_at_level(rho_prime, ell, a)
        results.append((ell, simultaneous_artin_lift(tau, tau2) is not None))
    return NecessityReport(tuple(results), all(ok for _, ok in results))


@dataclass(frozen=True)
class TwistResult:
    eps: tuple[tuple[int, GroupCharacter], ...]  # per prime away from p and q
    twisted: GlobalCharQ
    twisted_prime: GlobalCharQ


def twist_to_unramified(rho: GlobalCharQ, rho_prime: GlobalCharQ) -> TwistResult:
    """Produce the finite-order character supported away from p and q whose
    mod-p and mod-q reductions absorb all outside ramification of the pair."""
    p, q = _require_pair(rho, rho_prime)
    eps_parts: dict[int, GroupCharacter] = {}
    for ell in sorted(set(rho.support()) | set(rho_prime.support())):
        if ell in (p, q):
            continue
        a = max(rho.prime_exponent(ell), rho_prime.prime_exponent(ell))
        tau = _component_at_level(rho, ell, a)
        tau2 = _component_at_level(rho_prime, ell, a)
        lifted = simultaneous_artin_lift(tau, tau2)
        if lifted is None:
            raise ValueError(f"pair admits no simultaneous lift at the prime {ell}")
        if not lifted.is_trivial():
            eps_parts[ell] = lifted
            assert lifted.part_prime_to(p).images == tau.base.images
            assert lifted.part_prime_to(q).images == tau2.base.images

    def strip(chi: GlobalCharQ) -> GlobalCharQ:
        modulus = 1
        images = {}
        for ell in (p, q):
            a = chi.prime_exponent(ell)
            if a:
                modulus *= ell**a
                images[ell] = chi.image_at(ell)
        return GlobalCharQ.from_images(chi.residue_char, modulus, images)

    return TwistResult(tuple(sorted(eps_parts.items())), strip(rho), strip(rho_prime))


def conductor_bound(rho: GlobalCharQ, rho_prime: GlobalCharQ) -> int:
    """lcm(p, conductor of rho' at p) * lcm(q, conductor of rho at q) for a
    pair that is unramified outside p and q."""
    p, q = _require_support_pq(rho, rho_prime)
    cond_at_p = character_conductor(rho_prime.component(p).base)
    cond_at_q = character_conductor(rho.component(q).base)
    return math.lcm(p, cond_at_p) * math.lcm(q, cond_at_q)


@dataclass(frozen=True)
class PropQResult:
    k_class: Congruence
    certificate: HeckeCertificate
    invariants: LocalInvariantsQ


def _certificate_char(
    ell: int, exponent: int, tame_power: int, wild: GroupCharacter
) -> GroupCharacter:
    """tame-character^tame_power times the wild character on (Z/ell^exponent)^*."""
    grp = unit_group(ell, exponent)
    wild_img = wild.images[0] if wild.group.rank else QmodZ(0, 1)
    return GroupCharacter(grp, (QmodZ(tame_power, ell - 1) + wild_img,))


def hecke_reductions(
    eps: GroupCharacter, eps_prime: GroupCharacter, k: int, p: int, q: int
) -> tuple[GlobalCharQ, GlobalCharQ]:
    """Mod-p and mod-q reductions of the character eps * eps' * Nm^k, where
    eps lives on (Z/p^alpha)^* and eps' on (Z/q^beta)^*.

    The norm contributes the k-th cyclotomic power at the residue prime and
    nothing at the other prime; reduction keeps the prime-to-ell part.
    """
    alpha = eps.group.labels[0].exponent if eps.group.rank else 1
    beta = eps_prime.group.labels[0].exponent if eps_prime.group.rank else 1
    modulus = p**alpha * q**beta
    e_img = eps.images[0] if eps.group.rank else QmodZ(0, 1)
    e2_img = eps_prime.images[0] if eps_prime.group.rank else QmodZ(0, 1)
    mod_p = GlobalCharQ.from_images(
        p, modulus,
        {p: (e_img + QmodZ(k, p - 1)).part_prime_to(p), q: e2_img.part_prime_to(p)},
    )
    mod_q = GlobalCharQ.from_images(
        q, modulus,
        {p: e_img.part_prime_to(q), q: (e2_img + QmodZ(k, q - 1)).part_prime_to(q)},
    )
    return mod_p, mod_q


def decide_prop_q(rho: GlobalCharQ, rho_prime: GlobalCharQ) -> PropQResult | None:
    """Decide whether the pair arises from a single character eps * eps' * Nm^k.

    The pair must already be unramified outside p and q (twist first
    otherwise).  Returns the full solution class for k and a re-verified
    certificate at the least representative, or None when the congruence
    system is insoluble.
    """
    inv = extract_invariants(rho, rho_prime)
    p, q = inv.p, inv.q
    c1 = Congruence(inv.k_p.residue - inv.a_p.residue, inv.A_p)
    c2 = Congruence(inv.k_q.residue - inv.b_q.residue, inv.B_q)
    k_class = crt_pair(c1, c2)
    if k_class is None:
        return None
    k0 = k_class.residue

    alpha = max(1, rho_prime.prime_exponent(p))
    beta = max(1, rho.prime_exponent(q))
    eps = _certificate_char(p, alpha, inv.k_p.residue - k0, inv.psi_prime_p)
    eps_prime = _certificate_char(q, beta, inv.k_q.residue - k0, inv.psi_q)

    red_p, red_q = hecke_reductions(eps, eps_prime, k0, p, q)
    assert red_p == rho and red_q == rho_prime, "certificate failed re-verification"

    cert = HeckeCertificate(
        infinity_type=(("id", k0),),
        local_chars=tuple(
            (str(ell), chi)
            for ell, chi in ((p, eps), (q, eps_prime))
            if not chi.is_trivial()
        ),
        conductor=character_conductor(eps) * character_conductor(eps_prime),
    )
    return PropQResult(k_class, cert, inv)


def brute_force_oracle_q(
    rho: GlobalCharQ,
    rho_prime: GlobalCharQ,
    alpha_max: int,
    beta_max: int,
    k_range,
) -> tuple[GroupCharacter, GroupCharacter, int] | None:
    """Exhaustive search for (eps, eps', k) whose reductions equal the pair.

    A test-support oracle: dumb enumeration over the stated region, first
    witness in enumeration order, None if the region contains none.
    """
    p, q = _require_support_pq(rho, rho_prime)
    if alpha_max < 1 or beta_max < 1:
        raise ValueError("search exponents must be >= 1")
    ks = list(k_range)
    grp_p = unit_group(p, alpha_max)
    grp_q = unit_group(q, beta_max)
    total = grp_p.num_characters() * grp_q.num_characters() * len(ks)
    if total > ORACLE_BOUND:
        raise ValueError(f"search region of size {total} exceeds {ORACLE_BOUND}")

    # compare everything at the level of the search region
    lvl_p = max(alpha_max, rho.prime_exponent(p), rho_prime.prime_exponent(p))
    lvl_q = max(beta_max, rho.prime_exponent(q), rho_prime.prime_exponent(q))
    big = p**lvl_p * q**lvl_q
    r1 = rho.with_modulus(math.lcm(rho.modulus, big))
    r2 = rho_prime.with_modulus(math.lcm(rho_prime.modulus, big))
    target = (r1.image_at(p), r1.image_at(q), r2.image_at(p), r2.image_at(q))

    thetas_p = [QmodZ(k, p - 1) for k in ks]
    thetas_q = [QmodZ(k, q - 1) for k in ks]
    for eps in enumerate_characters(grp_p):
        e = (
            raise_unit_level(eps, lvl_p).images[0]
            if lvl_p > alpha_max
            else eps.images[0]
        )
        e_mod_q = e.part_prime_to(q)
        if e_mod_q != target[2]:
            continue
        for eps_prime in enumerate_characters(grp_q):
            e2 = (
                raise_unit_level(eps_prime, lvl_q).images[0]
                if lvl_q > beta_max
                else eps_prime.images[0]
            )
            if e2.part_prime_to(p) != target[1]:
                continue
            for i, k in enumerate(ks):
                if (
                    (e + thetas_p[i]).part_prime_to(p) == target[0]
                    and (e2 + thetas_q[i]).part_prime_to(q) == target[3]
                ):
                    return eps, eps_prime, k
    return None
