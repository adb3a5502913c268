"""
Approximating a disjunction on one Hamming slice
================================================

A clause on the slice of weight r only depends on how many of its literals
are set, so the approximation is a low-degree polynomial in that count.
"""

from fractions import Fraction

from symdis.cube import Disjunction, WeightProfile, exact_l1_error
from symdis.polyapprox import approximate_disjunction_on_layer, layer_poly_error

n, r = 40, 6
clause = Disjunction(n, pos=range(1, 21))
eps = Fraction(1, 4)

p = approximate_disjunction_on_layer(clause, r, eps)
for plan in p.plans:
    print("strategy", plan.strategy, "t =", plan.t)

# exact rationals, no sampling involved
l1, l2sq = layer_poly_error(p, clause)
print("l1 error", l1, "=", float(l1))
print("l2^2 error", l2sq)

# at large n and moderate r the interpolant branch kicks in; its error is
# the tail sum over weights above t, computed in closed form
n, k = 7000, 100
for r in (60, 90, 120, 150):
    p = approximate_disjunction_on_layer(Disjunction.monotone(n, k), r, eps)
    plan = p.plans[0]
    print(f"r={r:3d}  {plan.strategy:12s} t={plan.t:3d}  error {float(layer_poly_error(p, Disjunction.monotone(n, k))[0]):.3e}")

# a mixed clause is split into its positive and negated blocks
mixed = Disjunction(12, pos={1, 2, 3, 4, 5}, neg={6, 7})
q = approximate_disjunction_on_layer(mixed, 6, Fraction(1, 10))
err = layer_poly_error(q, mixed)[0]
print("mixed clause degree", q.degree, "error", err)

# brute force agrees at this size
assert exact_l1_error(mixed, q, WeightProfile.layer(12, 6)) == err
