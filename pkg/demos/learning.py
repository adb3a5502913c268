"""
Agnostically learning a noisy disjunction
=========================================

Uniform inputs on n = 10 bits, labels from x1 v x2 v x3 flipped with
probability 1/10.  The learner fits an l1 regression over layered features
and the exact population error comes out at the noise rate.
"""

from fractions import Fraction

from symdis.cube import Disjunction, WeightProfile
from symdis.learner import (
    agnostic_learn,
    default_sample_size,
    disjunction_sample_table,
    learner_basis,
    population_error,
    round_threshold,
)

n, eps, eta = 10, Fraction(1, 20), Fraction(1, 10)
D = WeightProfile.uniform_cube(n)
clause = Disjunction.monotone(n, 3)

basis = learner_basis(D.kind, n, eps)
count = default_sample_size(len(basis), eps)
print(f"{len(basis)} features, {count} samples")

table = disjunction_sample_table(D, clause, eta, count, seed=7)
h = round_threshold(agnostic_learn(table, D.kind, eps), table)

print("training l1 per sample", float(h.train_deviation / count))
print("population l1 error   ", population_error(h, D, clause, eta))
print("0/1 error vs the clause", population_error(h, D, clause, 0, boolean=True))
