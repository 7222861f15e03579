# Exact q-expansions: the Eisenstein series of weight lcm(p-1, q-1) is
# congruent to 1 modulo p*q, which lets weights be shifted by multiples of
# that lcm in congruence questions.  The weight-24 level-one eigenforms
# then show how congruences with the discriminant form depend on which
# prime above 5 and 7 reduces the coefficients.

from heckelift import delta, eisenstein, hasse_invariant_check, weight24_example

# --- E_12 = 1 mod 35 --------------------------------------------------------

report = hasse_invariant_check(5, 7, precision=100)
print(report)
e12 = eisenstein(12, 8)
print("E_12 coefficients:", [str(e12[n]) for n in range(4)])
print("numerator of the q-coefficient:", e12[1].numerator, "= 35 *", e12[1].numerator // 35)

# a wrong weight fails immediately
print(hasse_invariant_check(5, 7, precision=20, weight=14))

# --- the discriminant form and its defining identity -----------------------

prec = 30
d = delta(prec)
print("\nDelta coefficients:", [int(d[n]) for n in range(1, 8)])
lhs = eisenstein(4, prec) ** 3 - eisenstein(6, prec) ** 2
assert lhs.coeffs == d.scale(1728).coeffs
print("E4^3 - E6^2 = 1728 Delta holds exactly to q^29")

# --- the two weight-24 eigenforms against Delta -----------------------------

w24 = weight24_example(precision=40)
print(f"\ncoefficient field: Q(sqrt({w24.disc}))")
print(f"alpha = {w24.alpha}")
print(f"alpha * alpha' = {w24.alpha_product} (divisible by 5, prime to 7)")
print(f"labelling: {w24.labelling}")
print(f"chosen primes: p7 has root {w24.p7.root}, p5 has root {w24.p5.root}")
for name, check in w24.congruences:
    print(f"  {name}: {check}")
for name, residues in w24.residues:
    print(f"  {name}: {' '.join(str(r) for r in residues)}")

# Both f and f' reduce to Delta mod 5 -- through conjugate primes.  Under a
# single embedding they stay distinct: their difference is 24*sqrt(144169)
# times Delta^2, a unit multiple at 5 and at 7.
