import random
from fractions import Fraction

import pytest

from heckelift.qseries import (
    QExpansion,
    QuadElem,
    SplitPrimeIdeal,
    delta,
    eisenstein,
    hasse_invariant_check,
    split_roots,
    sturm_congruence,
    to_quadratic,
    weight24_example,
)


def naive_delta(precision):
    """Independent oracle: multiply the factors (1 - q^n) one at a time and
    then take the 24th power by repeated multiplication."""
    P = [Fraction(1)] + [Fraction(0)] * (precision - 1)
    for n in range(1, precision):
        new = list(P)
        for i in range(precision - n):
            new[i + n] -= P[i]
        P = new
    out = [Fraction(1)] + [Fraction(0)] * (precision - 1)
    for _ in range(24):
        acc = [Fraction(0)] * precision
        for i in range(precision):
            if out[i] == 0:
                continue
            for j in range(precision - i):
                acc[i + j] += out[i] * P[j]
        out = acc
    return [Fraction(0)] + out[: precision - 1]


class TestQExpansionArithmetic:
    def test_product_truncates(self):
        one_plus = QExpansion([1, 1, 0])
        one_minus = QExpansion([1, -1, 0])
        prod = one_plus * one_minus
        assert prod.coeffs == (Fraction(1), Fraction(0), Fraction(-1))

    def test_identity(self):
        d = delta(16)
        one = QExpansion([1] + [0] * 15, weight=0)
        assert (d * one).coeffs == d.coeffs

    def test_weight_tags_add(self):
        e4 = eisenstein(4, 8)
        assert (e4 * e4).weight == 8
        assert (e4**3).weight == 12
        assert (e4**3)[1] == 720

    def test_domain_mismatch_rejected(self):
        rational = QExpansion([1, 2])
        quad = QExpansion([QuadElem(1, 1, 5), QuadElem(0, 0, 5)])
        with pytest.raises(ValueError):
            rational + quad
        with pytest.raises(ValueError):
            QExpansion([Fraction(1), QuadElem(0, 0, 5)])
        with pytest.raises(ValueError):
            QExpansion([QuadElem(1, 0, 5), QuadElem(1, 0, 7)])

    def test_promotion(self):
        series = to_quadratic(QExpansion([1, 2, 3]), 5)
        assert series.disc == 5
        assert series[1] == QuadElem(2, 0, 5)
        scaled = series.scale(QuadElem(0, 1, 5))
        assert scaled[1] == QuadElem(0, 2, 5)

    def test_power_matches_repeated_product(self):
        e6 = eisenstein(6, 10)
        assert (e6**3).coeffs == (e6 * e6 * e6).coeffs


class TestEisenstein:
    def test_first_coefficients(self):
        assert eisenstein(4, 4)[1] == 240
        assert eisenstein(6, 4)[1] == -504
        assert eisenstein(12, 4)[1] == Fraction(65520, 691)

    def test_constant_term(self):
        for k in (2, 4, 6, 8, 10, 12, 14):
            assert eisenstein(k, 3)[0] == 1

    def test_rejects_odd_weight(self):
        with pytest.raises(ValueError):
            eisenstein(3, 10)

    def test_denominators_clear_uniformly(self):
        for k in (2, 4, 6, 8, 10, 12, 14, 16):
            series = eisenstein(k, 40)
            from heckelift.exactnum import bernoulli

            factor = Fraction(-2 * k) / bernoulli(k)
            for n in range(1, 40):
                assert factor.denominator % series[n].denominator == 0


class TestDelta:
    def test_leading_terms(self):
        d = delta(8)
        assert d[0] == 0 and d[1] == 1
        assert d[2] == -24 and d[3] == 252

    def test_against_naive_product_oracle(self):
        got = delta(40)
        expect = naive_delta(40)
        assert list(got.coeffs) == expect

    def test_weight(self):
        assert delta(4).weight == 12


class TestDiscriminantIdentity:
    def test_e4_cubed_minus_e6_squared(self):
        prec = 60
        e4, e6, d = eisenstein(4, prec), eisenstein(6, prec), delta(prec)
        lhs = e4**3 - e6**2
        rhs = d.scale(1728)
        assert lhs.coeffs == rhs.coeffs


class TestSplitPrimeIdeal:
    def test_roots(self):
        assert split_roots(144169, 5) == (2, 3)
        assert split_roots(144169, 7) == (2, 5)
        with pytest.raises(ValueError):
            split_roots(5, 7)  # 5 is not a square mod 7

    def test_reduction_map(self):
        ideal = SplitPrimeIdeal(5, 2, 144169)
        x = QuadElem(Fraction(1, 2), Fraction(3), 144169)
        assert ideal.reduce(x) == (Fraction(1, 2) + 6).numerator * pow(2, -1, 5) % 5

    def test_conjugation_consistency(self):
        rng = random.Random(99)
        ideal = SplitPrimeIdeal(7, 2, 144169)
        conj = ideal.conjugate()
        for _ in range(50):
            x = QuadElem(
                Fraction(rng.randrange(-50, 50), rng.choice([1, 2, 3, 4])),
                Fraction(rng.randrange(-50, 50), rng.choice([1, 2, 3])),
                144169,
            )
            assert ideal.reduce(x) == conj.reduce(x.conjugate())

    def test_denominator_guard(self):
        ideal = SplitPrimeIdeal(5, 2, 144169)
        with pytest.raises(ValueError):
            ideal.reduce(QuadElem(Fraction(1, 5), 0, 144169))


class TestSturmCongruence:
    def test_reflexive(self):
        d = delta(12)
        rep = sturm_congruence(d, d, 691, 10)
        assert rep.congruent and rep.theoretical_bound == 1

    def test_negative_control(self):
        e4 = eisenstein(4, 12)
        one = QExpansion([1] + [0] * 11, weight=4)
        rep = sturm_congruence(e4, one, 7, 10)
        assert not rep.congruent and rep.first_mismatch == 1

    def test_weight_compatibility_enforced(self):
        d = delta(12)
        e4 = eisenstein(4, 12)
        with pytest.raises(ValueError):
            sturm_congruence(d, e4, 7, 10)  # 12 - 4 = 8 not divisible by 6

    def test_cross_weight_allowed_when_compatible(self):
        # weights 12 and 24 are congruent mod 4 and mod 6
        d = to_quadratic(delta(12), 144169)
        f = to_quadratic(delta(12) * delta(12), 144169)
        rep = sturm_congruence(d, f, SplitPrimeIdeal(5, 2, 144169), 10)
        assert rep.theoretical_bound == 2

    def test_precision_guard(self):
        d = delta(8)
        with pytest.raises(ValueError):
            sturm_congruence(d, d, 5, 20)


class TestHasseInvariant:
    def test_5_7(self):
        rep = hasse_invariant_check(5, 7, 50)
        assert rep.ok and rep.weight == 12

    def test_3_5(self):
        rep = hasse_invariant_check(3, 5, 50)
        assert rep.ok and rep.weight == 4

    def test_wrong_weight_fails(self):
        rep = hasse_invariant_check(5, 7, 50, weight=14)
        assert not rep.ok and rep.first_offending == 1

    def test_guards(self):
        with pytest.raises(ValueError):
            hasse_invariant_check(2, 7)
        with pytest.raises(ValueError):
            hasse_invariant_check(5, 5)


@pytest.fixture(scope="module")
def report():
    return weight24_example(24)


class TestWeight24Example:

    def test_all_congruences_pass(self, report):
        assert report.ok
        assert len(report.congruences) == 5
        assert all(r.congruent for _, r in report.congruences)

    def test_alpha_product(self, report):
        assert report.alpha_product == Fraction(-36000)
        assert report.alpha_product % 5 == 0
        assert report.alpha_product % 7 != 0

    def test_roots_and_conventions(self, report):
        assert report.p7.root == 2  # smaller root fixed at 7
        assert report.p5.root in (2, 3)
        assert report.q_is_one_mod_5

    def test_labelling_is_determined(self, report):
        # the labelling convention pins alpha: with p7 = (7, root 2) the
        # matching form carries the positive square root
        assert report.alpha.b == Fraction(1, 2)
        assert "+" in report.labelling

    def test_eigenform_multiplicativity(self):
        # independent structural check that the closed formulas give Hecke
        # eigenforms: a(2)a(3) = a(6) and a(4) = a(2)^2 - 2^23 for both forms
        prec = 12
        d = delta(prec)
        e4 = eisenstein(4, prec)
        base = to_quadratic((e4**3) * d, 144169)
        d2 = to_quadratic(d * d, 144169)
        for sign in (1, -1):
            alpha = QuadElem(Fraction(-13, 2), Fraction(sign, 2), 144169)
            f = d2.scale(24 * alpha) + base
            assert f[2] * f[3] == f[6]
            two23 = QuadElem(2**23, 0, 144169)
            assert f[4] == f[2] * f[2] - two23

    def test_delta_vs_conjugate_form_fails_at_p7(self, report):
        # negative control: Delta matches f, not f', at the chosen prime
        # above 7
        prec = 14
        d = to_quadratic(delta(prec), 144169)
        e4 = eisenstein(4, prec)
        base = to_quadratic((e4**3) * delta(prec), 144169)
        d2 = to_quadratic(delta(prec) * delta(prec), 144169)
        f_prime = d2.scale(24 * report.alpha_prime) + base
        rep = sturm_congruence(d, f_prime, report.p7, 10)
        assert not rep.congruent

    def test_stability_under_precision_increase(self, report):
        for prec in (10, 61):
            again = weight24_example(prec)
            assert again.ok
            assert again.p5.root == report.p5.root
            assert again.labelling == report.labelling

    def test_precision_guard(self):
        with pytest.raises(ValueError):
            weight24_example(8)
