"""
Disjunctions correlate with parities
====================================

With OR mapped to +-1 the correlation with the parity on the same set is
2^-(s-1).  Sampled noisy parity data shows the same signal.
"""

from fractions import Fraction

from symdis.parity import ParitySpec, correlation_certificate, noisy_parity_samples, or_parity_correlation

for s in range(1, 7):
    print(s, or_parity_correlation(s))

spec = ParitySpec(20, {3, 8, 15}, Fraction(1, 8))
samples = noisy_parity_samples(spec, 50000, seed=1)
print("empirical:", float(correlation_certificate(samples, spec.S)), "expected magnitude 0.25")
