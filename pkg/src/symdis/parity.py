"""Disjunction/parity correlation and noisy sparse-parity examples.

Encodings: the disjunction is mapped to +-1 as 2*OR - 1 and the parity of the
coordinates in S as (-1)^(sum of x_i, i in S).  Under this convention
|E_U[(2 OR_S - 1) chi_S]| = 2^-(|S|-1) exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from symdis._rational import as_fraction
from symdis.learner import LabeledSample, tabulate


@dataclass(frozen=True)
class ParitySpec:
    n: int
    S: frozenset
    eta: Fraction

    def __post_init__(self):
        object.__setattr__(self, "S", frozenset(int(i) for i in self.S))
        object.__setattr__(self, "eta", as_fraction(self.eta))
        if not self.S:
            raise ValueError("parity support must be nonempty")
        if any(not 1 <= i <= self.n for i in self.S):
            raise ValueError(f"parity support must lie in 1..{self.n}")
        if not 0 <= self.eta < Fraction(1, 2):
            raise ValueError("noise rate must lie in [0, 1/2)")


def _signed_product(x, S) -> int:
    """(2 OR_S(x) - 1) * (-1)^(parity of x on S)."""
    ones = sum(x[i - 1] for i in S)
    return (1 if ones else -1) * (-1 if ones % 2 else 1)


def or_parity_correlation(s: int) -> Fraction:
    """|E_{x~U}[(2 OR_S - 1) chi_S]| for |S| = s, by enumerating 2^s points."""
    if s < 1:
        raise ValueError("parity support size must be >= 1")
    S = range(1, s + 1)
    total = sum(_signed_product(x, S) for x in itertools.product((0, 1), repeat=s))
    return abs(Fraction(total, 2**s))


def noisy_parity_samples(spec: ParitySpec, count: int, seed, clean: bool = False):
    """Uniform x with y = parity_S(x) xor Bernoulli(eta) noise.

    With ``clean=True`` the noiseless labels are returned alongside.
    """
    rng = np.random.default_rng(seed)
    xs = rng.integers(0, 2, size=(count, spec.n), dtype=np.uint8)
    idx = np.array(sorted(spec.S)) - 1
    parity = xs[:, idx].sum(axis=1) % 2
    flips = rng.random(count) < float(spec.eta)
    ys = parity ^ flips
    samples = [LabeledSample(tuple(int(b) for b in x), int(y)) for x, y in zip(xs, ys)]
    if clean:
        return samples, [int(p) for p in parity]
    return samples


def correlation_certificate(samples, S) -> Fraction:
    """Empirical mean of (2 OR_S(x) - 1) * (-1)^(parity of x on S)."""
    S = sorted(int(i) for i in S)
    if not S:
        raise ValueError("parity support must be nonempty")
    if isinstance(samples, dict):
        weighted = [(x, c[0] + c[1]) for x, c in tabulate(samples).items()]
    else:
        weighted = [(s.x if isinstance(s, LabeledSample) else tuple(s), 1) for s in samples]
    total = sum(w for _, w in weighted)
    if total == 0:
        raise ValueError("empty sample")
    return Fraction(sum(w * _signed_product(x, S) for x, w in weighted), total)
