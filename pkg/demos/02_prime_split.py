"""
Splitting a lattice along the fixed vectors of Z/p
==================================================

For each prime p dividing m, the subgroup of order p fixes a saturated
sublattice F. The quotient Z^l carries an action with no fixed vectors, and
its class group Z^l/(1 - tau) has order p^(l/(p-1)).
"""

from zn_ktheory import coker_presentation, prime_split, validate_action
from zn_ktheory.exact_linalg import IntMatrix

swap = validate_action(2, 2, [[0, 1], [1, 0]], name="swap")
split = prime_split(swap, 2)
print("swap: F =", split.F_basis.to_rows(), " quotient action =", split.A_quot.to_rows())

hexagonal = validate_action(2, 6, [[1, -1], [1, 0]], name="hexagonal")
for p in hexagonal.primes:
    split = prime_split(hexagonal, p)
    classes, _, _ = coker_presentation(IntMatrix.identity(split.l) - split.tau_quot)
    print(f"hexagonal p={p}: l={split.l}, class group divisors {classes.divisors}, "
          f"k_l={split.k_l_value}")

# k_l need not be an integer: here it is 2 (2 - 1) / 6
from zn_ktheory.families import cyclotomic, direct_sum
split = prime_split(direct_sum(cyclotomic(2), cyclotomic(3)), 2)
print("diag(-1, Phi_3):", split.flags)
