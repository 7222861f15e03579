# Over an imaginary quadratic field, unramified character pairs need not
# lift exactly: a counting argument already forces failures whenever the
# class number beats the squared exponent of the class group.  This script
# computes the class group of Q(sqrt(-1155)) through reduced binary
# quadratic forms and reproduces the bound.

from heckelift import ImagQuadField, class_group, counting_bound

# --- the class group of discriminant -1155 --------------------------------

grp = class_group(-1155)
print(f"discriminant {grp.D}: h = {grp.h}, exponent {grp.exponent}")
print("invariant factors:", " x ".join(f"Z/{d}" for d in grp.invariant_factors))
print("reduced forms:")
for a, b, c in grp.forms:
    print(f"  {a}x^2 + {b}xy + {c}y^2")

# every class has order <= 2 here: eight genera, one form per genus

# --- the counting bound at two split primes -------------------------------

K = ImagQuadField(-1155)
report = counting_bound(K, 17, 19)
print(
    f"\nsplit primes (17, 19): liftable pairs <= alpha^2 h = {report.lift_bound}, "
    f"unramified pairs >= h^2 = {report.pair_count}"
)
print(f"verdict: {report.verdict}")

# --- smaller fields for contrast -------------------------------------------

for D in (-7, -20, -23, -47):
    g = class_group(D)
    print(f"D = {D}: h = {g.h}, structure {g.invariant_factors or 'trivial'}")

# with h = 1 the bound is vacuous: every unramified pair lifts
trivial = counting_bound(ImagQuadField(-7), 11, 23)
print(f"D = -7 at (11, 23): {trivial.verdict}")
