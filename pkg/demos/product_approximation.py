"""
Disjunctions under a product distribution
=========================================

Negated literals are flipped so the clause becomes a plain OR of independent
bits with biases nu_i, and the weight of those bits is approximated.
"""

from fractions import Fraction

import numpy as np

from symdis.cube import Disjunction, ProductDistribution
from symdis.polyapprox import approximate_disjunction_product, flipped_biases, product_error, product_poly_error

rng = np.random.default_rng(3)
k = 12
mu = tuple(Fraction(int(a), 20) for a in rng.integers(0, 5, size=k))
D = ProductDistribution(k, mu)
clause = Disjunction(k, pos=range(1, 9), neg={11, 12})

pp = approximate_disjunction_product(clause, D, Fraction(1, 10))
print("plan", pp.plan.strategy, "degree", pp.plan.t, "error", product_poly_error(pp, D))

# truncating the interpolant below k trades degree for error
nu = flipped_biases(clause, D)
for t in range(1, 6):
    print(f"t={t}  error {float(product_error(nu, t)):.3e}")
