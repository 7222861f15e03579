# When do a mod-p character and a mod-q character of the absolute Galois
# group of Q come from one algebraic Hecke character at the same time?
# Over Q every Hecke character is eps * Nm^k, so the answer is a single
# congruence system on tame exponents.  This script walks through the
# decision on a few pairs and cross-checks it against blind enumeration.

import math

from heckelift import (
    GlobalCharQ,
    QmodZ,
    brute_force_oracle_q,
    check_necessary,
    decide_prop_q,
    extract_invariants,
    twist_to_unramified,
)
from heckelift.heckeq import theta_power

# --- a pair that lifts: both sides are reductions of Nm^3 -----------------

p, q = 5, 7
rho = theta_power(p, 3)        # cyclotomic cubed mod 5
rho_prime = theta_power(q, 3)  # cyclotomic cubed mod 7

inv = extract_invariants(rho, rho_prime)
print(f"invariants at p = {p}: k_p = {inv.k_p}, a_p = {inv.a_p} (A_p = {inv.A_p})")
print(f"invariants at q = {q}: k_q = {inv.k_q}, b_q = {inv.b_q} (B_q = {inv.B_q})")

result = decide_prop_q(rho, rho_prime)
print(f"liftable: {result is not None}; exponent class k = {result.k_class}")
print(f"certificate conductor: {result.certificate.conductor}")

# the dumb search agrees, and finds a representative in the same class
witness = brute_force_oracle_q(rho, rho_prime, 1, 1, range(math.lcm(p - 1, q - 1)))
eps, eps_prime, k = witness
print(f"enumeration finds k = {k}, trivial twists: {eps.is_trivial()}, {eps_prime.is_trivial()}")
assert result.k_class.contains(k)

# --- a pair that cannot lift: the two tame exponents clash mod 2 ----------

bad = decide_prop_q(theta_power(5, 1), theta_power(7, 2))
print(f"\ncyclotomic mod 5 against cyclotomic^2 mod 7 liftable: {bad is not None}")
print("reason: 1 mod 4 and 2 mod 6 have no common solution (parity clash)")

# --- ramification away from p and q gets absorbed by a twist first --------

rho = GlobalCharQ.from_images(5, 55, {5: QmodZ(3, 4), 11: QmodZ(1, 2)})
rho_prime = GlobalCharQ.from_images(7, 77, {7: QmodZ(1, 2), 11: QmodZ(1, 2)})

necessity = check_necessary(rho, rho_prime)
print(f"\norder condition at outside primes: {dict(necessity.per_prime)}")

twist = twist_to_unramified(rho, rho_prime)
for ell, char in twist.eps:
    print(f"twist at {ell}: finite-order character of order {char.order()}")
result = decide_prop_q(twist.twisted, twist.twisted_prime)
print(f"twisted pair liftable: {result is not None}, k = {result.k_class}")
