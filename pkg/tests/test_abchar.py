import itertools

import pytest

from heckelift.abchar import (
    FinAbGroup,
    GroupCharacter,
    ModCharacter,
    UnitLabel,
    bezout_combine,
    character_conductor,
    enumerate_characters,
    raise_unit_level,
    reduce_mod,
    simultaneous_artin_lift,
    unit_dlog,
    unit_group,
)
from heckelift.exactnum import QmodZ, prime_to_part


def char(group, *pairs):
    return GroupCharacter(group, tuple(QmodZ(n, d) for n, d in pairs))


def all_abelian_groups(max_order):
    """Every isomorphism type of abelian group of order 2..max_order, as a
    tuple of primary cyclic orders."""

    def partitions(n):
        if n == 0:
            yield ()
            return
        for first in range(n, 0, -1):
            for rest in partitions(n - first):
                if not rest or first >= rest[0]:
                    yield (first,) + rest

    from heckelift.exactnum import factorize

    for n in range(2, max_order + 1):
        fac = factorize(n)
        per_prime = []
        for p, e in sorted(fac.items()):
            per_prime.append([tuple(p**k for k in part) for part in partitions(e)])
        for combo in itertools.product(*per_prime):
            orders = tuple(sorted(itertools.chain.from_iterable(combo)))
            yield orders


class TestGroupCharacter:
    def test_image_must_be_killed(self):
        g = FinAbGroup((4,))
        with pytest.raises(ValueError):
            char(g, (1, 3))

    def test_order_is_lcm(self):
        g = FinAbGroup((6, 4))
        assert char(g, (1, 6), (1, 4)).order() == 12
        assert GroupCharacter.trivial(g).order() == 1

    def test_group_law(self):
        g = FinAbGroup((5,))
        a = char(g, (1, 5))
        b = char(g, (2, 5))
        assert a * b == char(g, (3, 5))
        assert (a * a.inverse()).is_trivial()
        assert a**7 == char(g, (2, 5))

    def test_evaluate(self):
        g = FinAbGroup((4, 6))
        x = char(g, (1, 4), (1, 6))
        assert x.evaluate((2, 3)) == QmodZ(0, 1)
        assert x.evaluate((1, 2)) == QmodZ(1, 4) + QmodZ(2, 6)


class TestReduceMod:
    def test_crt_split_example(self):
        g = FinAbGroup((15,))
        eps = char(g, (1, 15))
        red = reduce_mod(eps, 5)
        assert red.base.images[0] == QmodZ(2, 3)

    def test_trivial_cases(self):
        g = FinAbGroup((15,))
        assert reduce_mod(GroupCharacter.trivial(g), 5).is_trivial()
        g25 = FinAbGroup((25,))
        assert reduce_mod(char(g25, (1, 25)), 5).is_trivial()

    def test_idempotent_and_fixed_points(self):
        for orders in [(6,), (12,), (4, 10)]:
            g = FinAbGroup(orders)
            for eps in enumerate_characters(g):
                for ell in (2, 3, 5):
                    red = reduce_mod(eps, ell)
                    again = reduce_mod(red.base, ell)
                    assert again.base == red.base
                    if eps.order() % ell != 0:
                        assert red.base == eps

    def test_order_multiplicativity(self):
        # killed ell-part times surviving order recovers the full order,
        # exhaustively over all groups of order <= 200
        for orders in all_abelian_groups(200):
            g = FinAbGroup(orders)
            n = g.num_characters()
            # sample the character group when it is large
            step = max(1, n // 64)
            for i, eps in enumerate(enumerate_characters(g)):
                if i % step:
                    continue
                for ell in (3, 5):
                    red = reduce_mod(eps, ell)
                    killed = eps.part_at(ell).order()
                    assert red.order() * killed == eps.order()


class TestSimultaneousArtinLift:
    def test_trivial(self):
        g = FinAbGroup((3,))
        t = ModCharacter(GroupCharacter.trivial(g), 5)
        t2 = ModCharacter(GroupCharacter.trivial(g), 7)
        got = simultaneous_artin_lift(t, t2)
        assert got is not None and got.is_trivial()

    def test_order_three_obstruction(self):
        g = FinAbGroup((3,))
        tau = ModCharacter(char(g, (1, 3)), 5)
        tau2 = ModCharacter(GroupCharacter.trivial(g), 7)
        assert simultaneous_artin_lift(tau, tau2) is None

    def test_z21_example(self):
        g = FinAbGroup((21,))
        tau_base = char(g, (1, 21))  # order 21, prime to 5
        tau = ModCharacter(tau_base, 5)
        tau2 = reduce_mod(tau_base, 3)  # the order-7 part, as a mod-3 character
        got = simultaneous_artin_lift(tau, tau2)
        assert got == tau_base

    def test_rejects_mismatched_groups(self):
        t = ModCharacter(GroupCharacter.trivial(FinAbGroup((3,))), 5)
        t2 = ModCharacter(GroupCharacter.trivial(FinAbGroup((4,))), 7)
        with pytest.raises(ValueError):
            simultaneous_artin_lift(t, t2)

    def test_exhaustive_agreement_3_7(self):
        # remaining (p, q) pair; (3,5) and (5,7) run in the acceptance suite
        p, q = 3, 7
        for orders in all_abelian_groups(200):
            g = FinAbGroup(orders)
            table = {}
            for eps in enumerate_characters(g):
                key = (eps.part_prime_to(p).images, eps.part_prime_to(q).images)
                assert key not in table, "lift must be unique"
                table[key] = eps
            taus = [
                ModCharacter(GroupCharacter(g, imgs), p)
                for imgs in itertools.product(
                    *(
                        [QmodZ(k, prime_to_part(d, p)) for k in range(prime_to_part(d, p))]
                        for d in orders
                    )
                )
            ]
            tau2s = [
                ModCharacter(GroupCharacter(g, imgs), q)
                for imgs in itertools.product(
                    *(
                        [QmodZ(k, prime_to_part(d, q)) for k in range(prime_to_part(d, q))]
                        for d in orders
                    )
                )
            ]
            for tau in taus:
                for tau2 in tau2s:
                    expected = table.get((tau.base.images, tau2.base.images))
                    got = simultaneous_artin_lift(tau, tau2)
                    assert got == expected


class TestBezoutCombine:
    def test_order_six_example(self):
        g = FinAbGroup((6,))
        eps = char(g, (1, 6))
        got = bezout_combine(eps**5, eps**7, 5, 1, 7, 1)
        assert got == eps

    def test_trivial(self):
        g = FinAbGroup((6,))
        t = GroupCharacter.trivial(g)
        assert bezout_combine(t, t, 5, 1, 7, 1).is_trivial()

    def test_order_35(self):
        g = FinAbGroup((35,))
        eps = char(g, (2, 35))
        assert bezout_combine(eps**5, eps**7, 5, 1, 7, 1) == eps

    def test_guards_common_factor(self):
        g = FinAbGroup((6,))
        t = GroupCharacter.trivial(g)
        with pytest.raises(ValueError):
            bezout_combine(t, t, 5, 1, 5, 2)

    def test_round_trip_all_small_groups(self):
        p, alpha, q, beta = 3, 1, 5, 1
        for orders in all_abelian_groups(200):
            g = FinAbGroup(orders)
            n = g.num_characters()
            step = max(1, n // 32)
            for i, eps in enumerate(enumerate_characters(g)):
                if i % step:
                    continue
                assert bezout_combine(eps**p, eps**q, p, alpha, q, beta) == eps


class TestCharacterConductor:
    def test_examples(self):
        g = unit_group(5, 2)
        assert character_conductor(GroupCharacter.trivial(g)) == 1
        assert character_conductor(char(g, (5, 20))) == 5  # order 4
        assert character_conductor(char(g, (4, 20))) == 25  # order 5

    def test_rejects_unlabelled(self):
        with pytest.raises(ValueError):
            character_conductor(char(FinAbGroup((20,)), (1, 20)))

    def test_factorization_criterion(self):
        # conductor ell^c is minimal: the character's order divides phi(ell^c)
        from heckelift.exactnum import euler_phi

        g = unit_group(7, 2)
        for eps in enumerate_characters(g):
            f = character_conductor(eps)
            assert euler_phi(f) % eps.order() == 0
            if f > 1:
                assert euler_phi(f // 7) % eps.order() != 0


class TestEnumerateCharacters:
    def test_counts(self):
        assert len(list(enumerate_characters(FinAbGroup.trivial()))) == 1
        assert len(list(enumerate_characters(FinAbGroup((2, 4))))) == 8

    def test_z6_order_multiset(self):
        orders = sorted(c.order() for c in enumerate_characters(FinAbGroup((6,))))
        assert orders == [1, 2, 3, 3, 6, 6]

    def test_deterministic_and_distinct(self):
        g = FinAbGroup((3, 4))
        first = [c.images for c in enumerate_characters(g)]
        second = [c.images for c in enumerate_characters(g)]
        assert first == second
        assert len(set(first)) == 12

    def test_bound(self):
        with pytest.raises(ValueError):
            list(enumerate_characters(FinAbGroup((1009, 1013)), bound=10**4))


class TestUnitGroups:
    def test_unit_group_shape(self):
        g = unit_group(5, 2)
        assert g.orders == (20,)
        assert g.labels[0] == UnitLabel(5, 2, 2)
        assert unit_group(5, 0).rank == 0

    def test_unit_dlog(self):
        assert unit_dlog(2, 8, 25) == 3
        assert unit_dlog(3, 1, 7) == 0
        with pytest.raises(ValueError):
            unit_dlog(4, 3, 5)  # 4 has order 2 mod 5

    def test_raise_unit_level(self):
        small = unit_group(5, 1)
        eps = char(small, (1, 4))
        big = raise_unit_level(eps, 2)
        assert big.group == unit_group(5, 2)
        # restriction back: evaluating the big character on elements that
        # reduce to the small generator agrees with the small character
        lab_small: UnitLabel = small.labels[0]
        lab_big: UnitLabel = big.group.labels[0]
        e = unit_dlog(lab_big.generator, lab_small.generator, 25)
        assert e * big.images[0] != QmodZ(0, 1)
        # the pullback kills the kernel of (Z/25)^* -> (Z/5)^*
        kernel_exp = 4  # index of the order-5 kernel element g^4
        assert (5 * (kernel_exp * big.images[0])).is_zero()
