import math

import pytest

from heckelift.abchar import FinAbGroup, GroupCharacter
from heckelift.exactnum import QmodZ
from heckelift.heckequad import (
    SIGMA,
    SIGMA_BAR,
    ImagQuadField,
    PlaceLocal,
    QuadLocalData,
    class_group,
    counting_bound,
    criterion_decide,
    splitting_data,
    xi_values,
)
from heckelift.heckequad import _compose, _principal_form, _reduce_form


K1155 = ImagQuadField(-1155)


class TestImagQuadField:
    def test_valid_discriminants(self):
        ImagQuadField(-7)
        ImagQuadField(-20)
        ImagQuadField(-1155)

    def test_rejects_non_fundamental(self):
        for D in [-12, -9, -25, -18]:
            with pytest.raises(ValueError):
                ImagQuadField(D)

    def test_rejects_positive_and_small(self):
        for D in [5, -3, -4]:
            with pytest.raises(ValueError):
                ImagQuadField(D)


class TestSplittingData:
    def test_split_at_17(self):
        data_p, _ = splitting_data(K1155, 17, 19)
        assert data_p.kind == "split"
        assert len(data_p.places) == 2
        for place in data_p.places:
            assert place.residue_size == 17
            assert place.modulus == 16  # prime-to-19 part of 16
            assert len(place.kappa) == 1 and place.kappa[0][1] == 0

    def test_inert_at_13(self):
        data_p, _ = splitting_data(K1155, 13, 17)
        assert data_p.kind == "inert"
        (place,) = data_p.places
        assert place.residue_size == 169
        assert place.modulus == 168  # prime-to-17 part of 168
        assert dict(place.kappa) == {SIGMA: 0, SIGMA_BAR: 1}

    def test_ramified_rejected(self):
        with pytest.raises(ValueError):
            splitting_data(K1155, 3, 17)  # 3 divides 1155

    def test_modulus_strips_other_prime(self):
        # 5 inert in Q(sqrt(-7))? kronecker(-7,5) = (3|5) = -1: inert
        K = ImagQuadField(-7)
        data_p, data_q = splitting_data(K, 5, 3)
        assert data_p.kind == "inert"
        assert data_p.places[0].modulus == 8  # prime-to-3 part of 24


class TestXiValues:
    def test_split_singletons(self):
        data_p, _ = splitting_data(K1155, 17, 19)
        assert xi_values(data_p, (3, 4)) == (-3, -4)

    def test_inert_weighting(self):
        data_p, _ = splitting_data(K1155, 13, 17)
        assert xi_values(data_p, (2, 5)) == (-(2 + 5 * 13),)

    def test_zero_type(self):
        data_p, _ = splitting_data(K1155, 17, 19)
        assert xi_values(data_p, (0, 0)) == (0, 0)


class TestCriterionDecide:
    def setup_method(self):
        self.data_p, self.data_q = splitting_data(K1155, 17, 19)
        self.trivial = QuadLocalData.trivial(self.data_p, self.data_q)
        self.A, self.B = 16, 18
        self.C = math.lcm(self.A, self.B)

    def test_trivial_pair_accepts_lcm_type(self):
        rep = criterion_decide(K1155, 17, 19, self.trivial, (self.C, self.C))
        assert rep.ok
        # all local characters are trivial: tame exponents are multiples of
        # residue-size - 1
        assert rep.certificate.local_chars == ()
        assert rep.certificate.conductor == 1

    def test_trivial_pair_accepts_one_sided_type(self):
        rep = criterion_decide(K1155, 17, 19, self.trivial, (self.C, 0))
        assert rep.ok

    def test_trivial_pair_rejects_unit_type(self):
        rep = criterion_decide(K1155, 17, 19, self.trivial, (1, 0))
        assert not rep.ok
        assert not rep.condition_1[0].ok  # 0 - 0 != -1 mod 16

    def test_all_zero_data_zero_type(self):
        rep = criterion_decide(K1155, 17, 19, self.trivial, (0, 0))
        assert rep.ok
        assert rep.certificate.local_chars == ()

    def test_parity_condition_can_fail_alone(self):
        # k - a = 0 = xi mod 16 holds, but k - xi = 1 makes the unit-value
        # parity odd against an even infinity type
        local = QuadLocalData(
            (PlaceLocal(1, 1), PlaceLocal(0, 0)),
            (PlaceLocal(0, 0), PlaceLocal(0, 0)),
        )
        rep = criterion_decide(K1155, 17, 19, local, (0, 0))
        assert all(c.ok for c in rep.condition_1)
        assert all(c.ok for c in rep.condition_1_prime)
        assert not rep.condition_2[2]
        assert not rep.ok

    def test_nontrivial_certificate_chars(self):
        local = QuadLocalData(
            (PlaceLocal(8, 8), PlaceLocal(8, 8)),
            (PlaceLocal(0, 0), PlaceLocal(0, 0)),
        )
        rep = criterion_decide(K1155, 17, 19, local, (0, 0))
        assert rep.ok
        assert len(rep.certificate.local_chars) == 2
        assert rep.certificate.conductor == 17 * 17

    def test_symmetry_under_pq_swap(self):
        local = QuadLocalData(
            (PlaceLocal(3, 1), PlaceLocal(0, 0)),
            (PlaceLocal(5, 2), PlaceLocal(1, 1)),
        )
        mirrored = QuadLocalData(local.above_q, local.above_p)
        for inf in [(0, 0), (2, 2), (self.C, 0), (1, 3)]:
            a = criterion_decide(K1155, 17, 19, local, inf)
            b = criterion_decide(K1155, 19, 17, mirrored, inf)
            assert a.ok == b.ok

    def test_kappa_convention_invariance(self):
        # inert place at 13: swapping the kappa labelling and the infinity
        # type simultaneously leaves the verdict unchanged
        data_p, data_q = splitting_data(K1155, 13, 17)
        for k, a in [(0, 0), (5, 3), (7, 100)]:
            local = QuadLocalData(
                (PlaceLocal(k, a),),
                (PlaceLocal(0, 0), PlaceLocal(0, 0)),
            )
            for m, n in [(0, 0), (2, 0), (14, 3), (168, 12)]:
                one = criterion_decide(K1155, 13, 17, local, (m, n), kappa_first=SIGMA)
                two = criterion_decide(
                    K1155, 13, 17, local, (n, m), kappa_first=SIGMA_BAR
                )
                assert one.ok == two.ok
                assert [c.rhs for c in one.condition_1] == [
                    c.rhs for c in two.condition_1
                ]

    def test_split_condition_matches_rational_congruence_shape(self):
        # At a split place, condition (1) reads k - a = -n_sigma mod A.
        # Setting k0 := -n_sigma gives exactly the rational congruence shape
        # k0 = k_p - a_p mod A_p, for every k0 in a full period.
        for k_p, a_p in [(5, 2), (0, 0), (7, 11)]:
            local = QuadLocalData(
                (PlaceLocal(k_p, a_p), PlaceLocal(k_p, a_p)),
                (PlaceLocal(0, 0), PlaceLocal(0, 0)),
            )
            for k0 in range(16):
                rep = criterion_decide(K1155, 17, 19, local, (-k0, -k0))
                check = rep.condition_1[0]
                assert check.modulus == 16
                assert check.ok == ((k0 - (k_p - a_p)) % 16 == 0)

    def test_wild_data_validation(self):
        wild_bad = GroupCharacter(FinAbGroup((19,)), (QmodZ(1, 19),))
        local = QuadLocalData(
            (PlaceLocal(0, 0, wild_bad), PlaceLocal(0, 0)),
            (PlaceLocal(0, 0), PlaceLocal(0, 0)),
        )
        with pytest.raises(ValueError):
            criterion_decide(K1155, 17, 19, local, (0, 0))

    def test_unramified_twist_invariance(self):
        # the verdict is a function of the stated local data only: re-running
        # with identical data always gives identical reports
        local = QuadLocalData(
            (PlaceLocal(4, 2), PlaceLocal(1, 1)),
            (PlaceLocal(0, 0), PlaceLocal(3, 3)),
        )
        a = criterion_decide(K1155, 17, 19, local, (2, 2))
        b = criterion_decide(K1155, 17, 19, local, (2, 2))
        assert a == b


class TestClassGroup:
    def test_minus_7(self):
        grp = class_group(-7)
        assert grp.h == 1
        assert grp.forms == ((1, 1, 2),)
        assert grp.invariant_factors == ()
        assert grp.exponent == 1

    def test_minus_20(self):
        grp = class_group(-20)
        assert grp.h == 2
        assert set(grp.forms) == {(1, 0, 5), (2, 2, 3)}
        assert grp.invariant_factors == (2,)

    def test_minus_1155(self):
        grp = class_group(-1155)
        assert grp.h == 8
        assert grp.invariant_factors == (2, 2, 2)
        assert grp.exponent == 2

    def test_cyclic_example(self):
        # h(-23) = 3, cyclic
        grp = class_group(-23)
        assert grp.h == 3
        assert grp.invariant_factors == (3,)
        assert grp.exponent == 3

    def test_mixed_structure(self):
        # D = -84: genus theory gives (2, 2); D = -39: h = 4 cyclic
        assert class_group(-84).invariant_factors == (2, 2)
        assert class_group(-39).invariant_factors == (4,)

    def test_composition_group_axioms(self):
        for D in (-1155, -84, -23, -47):
            grp = class_group(D)
            forms = grp.forms
            identity = grp.identity()
            assert identity in forms
            table = {
                (f, g): _compose(f, g, D) for f in forms for g in forms
            }
            for f in forms:
                assert table[(f, identity)] == f
            for f in forms:
                for g in forms:
                    assert table[(f, g)] == table[(g, f)]
                    assert table[(f, g)] in forms
            # associativity on a sample
            for f in forms[:3]:
                for g in forms[:3]:
                    for k in forms[:3]:
                        assert _compose(table[(f, g)], k, D) == _compose(
                            f, table[(g, k)], D
                        )
            # every square is in the principal genus: for exponent-2 groups
            # all squares are the identity
            if grp.exponent == 2:
                for f in forms:
                    assert table[(f, f)] == identity

    def test_rejects_bad_input(self):
        with pytest.raises(ValueError):
            class_group(-12)
        with pytest.raises(ValueError):
            class_group(20)
        with pytest.raises(ValueError):
            class_group(-100003, bound=10**4)

    def test_reduction_is_canonical(self):
        # disc(12, 11, 3) = -23: composing with the identity reduces in place
        assert _compose((12, 11, 3), _principal_form(-23), -23) == _reduce_form(
            12, 11, 3
        )


class TestCountingBound:
    def test_paper_numbers(self):
        rep = counting_bound(K1155, 17, 19)
        assert rep.alpha == 2 and rep.h == 8
        assert rep.lift_bound == 32 and rep.pair_count == 64
        assert rep.gap_exists
        assert rep.verdict == "non-liftable pair exists"

    def test_trivial_class_group(self):
        # need split primes in Q(sqrt(-7)): kronecker(-7, ell) = 1
        K = ImagQuadField(-7)
        rep = counting_bound(K, 11, 23)
        assert rep.h == 1 and rep.alpha == 1
        assert rep.lift_bound == 1 and rep.pair_count == 1
        assert not rep.gap_exists

    def test_guards(self):
        with pytest.raises(ValueError, match="not split"):
            counting_bound(K1155, 13, 17)
        # h(-1155) = 8: p = 2 is even, pick a field with odd h divisible case:
        # h(-23) = 3 and 3 splits? kronecker(-23, 3) = 1 since -23 = 1 mod 3
        K23 = ImagQuadField(-23)
        with pytest.raises(ValueError, match="divides the class number"):
            counting_bound(K23, 3, 13)
