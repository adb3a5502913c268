"""Exact combinatorics and distributions on small Boolean cubes.

Everything here is exact rational arithmetic (``fractions.Fraction``); this
module supplies the brute-force oracles the rest of the package is checked
against.  Index sets use origin 1 (``pos={1, 2}`` means x_1 or x_2), while a
point ``x`` is a plain sequence of bits with ``x[0]`` holding x_1.
"""

from __future__ import annotations

import itertools
import json
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterator, Sequence, Union

import numpy as np

from symdis._rational import as_fraction, from_strs, to_strs

DEFAULT_ENUM_CAP = 20
ENUM_CAP_ENV = "SYMDIS_ENUM_CAP"


class EnumerationCapError(ValueError):
    """Raised when an exact enumeration would exceed the dimension cap."""


def enum_cap() -> int:
    raw = os.environ.get(ENUM_CAP_ENV)
    return int(raw) if raw else DEFAULT_ENUM_CAP


def _check_cap(n: int, cap: int | None) -> None:
    cap = enum_cap() if cap is None else cap
    if n > cap:
        raise EnumerationCapError(f"n={n} exceeds enumeration cap {cap}")


def binomial(n: int, k: int) -> int:
    if n < 0:
        raise ValueError("binomial needs n >= 0")
    if k < 0 or k > n:
        return 0
    return math.comb(n, k)


@dataclass(frozen=True)
class Disjunction:
    """OR of positive literals ``pos`` and negated literals ``neg`` over n bits."""

    n: int
    pos: frozenset = frozenset()
    neg: frozenset = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "pos", frozenset(int(i) for i in self.pos))
        object.__setattr__(self, "neg", frozenset(int(i) for i in self.neg))
        if self.n < 1:
            raise ValueError("dimension must be positive")
        if self.pos & self.neg:
            raise ValueError("pos and neg must be disjoint")
        for i in self.pos | self.neg:
            if not 1 <= i <= self.n:
                raise ValueError(f"index {i} outside 1..{self.n}")

    @classmethod
    def monotone(cls, n: int, k: int) -> "Disjunction":
        return cls(n, frozenset(range(1, k + 1)))

    @property
    def k(self) -> int:
        return len(self.pos) + len(self.neg)

    def __call__(self, x: Sequence[int]) -> int:
        return eval_disjunction(self, x)

    def to_json(self) -> dict:
        return {"n": self.n, "pos": sorted(self.pos), "neg": sorted(self.neg)}

    @classmethod
    def from_json(cls, obj: dict) -> "Disjunction":
        return cls(obj["n"], frozenset(obj.get("pos", ())), frozenset(obj.get("neg", ())))


def eval_disjunction(c: Disjunction, x: Sequence[int]) -> int:
    if len(x) != c.n:
        raise ValueError(f"point has length {len(x)}, clause has n={c.n}")
    for i in c.pos:
        if x[i - 1]:
            return 1
    for i in c.neg:
        if not x[i - 1]:
            return 1
    return 0


def weight(x: Sequence[int]) -> int:
    return int(sum(x))


@dataclass(frozen=True)
class WeightProfile:
    """Symmetric distribution on {0,1}^n given by its Hamming-weight PMF.

    A point x has probability ``rho[w(x)] / C(n, w(x))``.
    """

    n: int
    rho: tuple

    def __post_init__(self):
        rho = tuple(as_fraction(v) for v in self.rho)
        object.__setattr__(self, "rho", rho)
        if self.n < 1:
            raise ValueError("dimension must be positive")
        if len(rho) != self.n + 1:
            raise ValueError(f"rho needs {self.n + 1} entries, got {len(rho)}")
        if any(v < 0 for v in rho):
            raise ValueError("rho entries must be nonnegative")
        if sum(rho) != 1:
            raise ValueError(f"rho sums to {sum(rho)}, not 1")

    kind = "symmetric"

    @classmethod
    def uniform_cube(cls, n: int) -> "WeightProfile":
        return cls(n, tuple(Fraction(binomial(n, m), 2**n) for m in range(n + 1)))

    @classmethod
    def layer(cls, n: int, r: int) -> "WeightProfile":
        """Point mass on weight r, i.e. the uniform distribution on the slice S_r."""
        if not 0 <= r <= n:
            raise ValueError(f"layer {r} outside 0..{n}")
        return cls(n, tuple(Fraction(int(m == r)) for m in range(n + 1)))

    def prob(self, x: Sequence[int]) -> Fraction:
        w = weight(x)
        return self.rho[w] / binomial(self.n, w)

    @property
    def values(self) -> tuple:
        return self.rho


@dataclass(frozen=True)
class ProductDistribution:
    """Independent bits with ``Pr[x_i = 1] = mu[i-1]``."""

    n: int
    mu: tuple

    def __post_init__(self):
        mu = tuple(as_fraction(v) for v in self.mu)
        object.__setattr__(self, "mu", mu)
        if self.n < 1:
            raise ValueError("dimension must be positive")
        if len(mu) != self.n:
            raise ValueError(f"mu needs {self.n} entries, got {len(mu)}")
        if any(not 0 <= v <= 1 for v in mu):
            raise ValueError("mu entries must lie in [0, 1]")

    kind = "product"

    @classmethod
    def uniform_cube(cls, n: int) -> "ProductDistribution":
        return cls(n, (Fraction(1, 2),) * n)

    def prob(self, x: Sequence[int]) -> Fraction:
        p = Fraction(1)
        for m, b in zip(self.mu, x):
            p *= m if b else 1 - m
        return p

    @property
    def values(self) -> tuple:
        return self.mu


Distribution = Union[WeightProfile, ProductDistribution]


def dist_to_json(D: Distribution) -> dict:
    return {"kind": D.kind, "n": D.n, "values": to_strs(D.values)}


def dist_from_json(obj: dict) -> Distribution:
    kind = obj.get("kind")
    values = from_strs(obj["values"])
    if kind == "symmetric":
        return WeightProfile(int(obj["n"]), tuple(values))
    if kind == "product":
        return ProductDistribution(int(obj["n"]), tuple(values))
    raise ValueError(f"unknown distribution kind {kind!r}")


def save_dist(D: Distribution, path) -> None:
    with open(path, "w") as fh:
        json.dump(dist_to_json(D), fh, indent=2)
        fh.write("\n")


def load_dist(path) -> Distribution:
    with open(path) as fh:
        return dist_from_json(json.load(fh))


def layer_points(n: int, r: int) -> Iterator[tuple]:
    """All points of weight r, in lexicographic order of their supports."""
    for ones in itertools.combinations(range(n), r):
        x = [0] * n
        for i in ones:
            x[i] = 1
        yield tuple(x)


def cube_points(n: int) -> Iterator[tuple]:
    return itertools.product((0, 1), repeat=n)


def layer_block_pmf(n: int, r: int, k1: int, k2: int = 0) -> dict:
    """Joint law of (ones in block 1, ones in block 2) under the slice S_r.

    Block 1 is any fixed set of k1 coordinates, block 2 a disjoint set of k2.
    Returns ``{(a, b): probability}`` over the entries with nonzero mass.
    """
    if not 0 <= r <= n:
        raise ValueError(f"layer {r} outside 0..{n}")
    if k1 < 0 or k2 < 0 or k1 + k2 > n:
        raise ValueError(f"invalid block sizes k1={k1}, k2={k2} for n={n}")
    total = binomial(n, r)
    rest = n - k1 - k2
    table = {}
    for a in range(min(k1, r) + 1):
        for b in range(min(k2, r - a) + 1):
            count = binomial(k1, a) * binomial(k2, b) * binomial(rest, r - a - b)
            if count:
                table[(a, b)] = Fraction(count, total)
    return table


def product_weight_pmf(mu: Sequence) -> list:
    """PMF of the number of ones among independent Bernoulli(mu_i) bits.

    Sequential convolution, O(k^2) rational operations.
    """
    pmf = [Fraction(1)]
    for m in mu:
        m = as_fraction(m)
        if not 0 <= m <= 1:
            raise ValueError("mu entries must lie in [0, 1]")
        q = 1 - m
        nxt = [Fraction(0)] * (len(pmf) + 1)
        for j, p in enumerate(pmf):
            if p:
                nxt[j] += p * q
                nxt[j + 1] += p * m
        pmf = nxt
    return pmf


def support(D: Distribution, cap: int | None = None) -> Iterator[tuple]:
    """Yield ``(x, Pr[x])`` for every point with positive mass, exactly."""
    _check_cap(D.n, cap)
    if isinstance(D, WeightProfile):
        for m, p in enumerate(D.rho):
            if p:
                each = p / binomial(D.n, m)
                for x in layer_points(D.n, m):
                    yield x, each
        return
    # Probabilities of all 2^n points by doubling; index bit i-1 holds x_i.
    probs = [Fraction(1)]
    for m in D.mu:
        q = 1 - m
        probs = [p * q for p in probs] + [p * m for p in probs]
    for idx, p in enumerate(probs):
        if p:
            yield tuple((idx >> i) & 1 for i in range(D.n)), p


def exact_l1_error(f: Callable, g: Callable, D: Distribution, cap: int | None = None) -> Fraction:
    """E_{x~D} |f(x) - g(x)| by full enumeration of the support of D."""
    total = Fraction(0)
    for x, p in support(D, cap):
        total += p * abs(as_fraction(f(x)) - as_fraction(g(x)))
    return total


def exact_l2sq_error(f: Callable, g: Callable, D: Distribution, cap: int | None = None) -> Fraction:
    total = Fraction(0)
    for x, p in support(D, cap):
        diff = as_fraction(f(x)) - as_fraction(g(x))
        total += p * diff * diff
    return total


def sample(D: Distribution, seed, count: int) -> np.ndarray:
    """Draw ``count`` i.i.d. points; returns a (count, n) uint8 array.

    Symmetric profiles draw a weight m ~ rho, then a uniform weight-m point.
    Sampling uses float64 probabilities; only the oracles are exact.
    """
    rng = np.random.default_rng(seed)
    n = D.n
    if isinstance(D, WeightProfile):
        rho = np.array([float(v) for v in D.rho])
        weights = rng.choice(n + 1, size=count, p=rho / rho.sum())
        order = np.argsort(rng.random((count, n)), axis=1)
        ranks = np.argsort(order, axis=1)
        return (ranks < weights[:, None]).astype(np.uint8)
    mu = np.array([float(v) for v in D.mu])
    return (rng.random((count, n)) < mu).astype(np.uint8)


def sample_counts(D: Distribution, seed, count: int, cap: int | None = None) -> dict:
    """Multiplicity of each point in ``count`` i.i.d. draws from D.

    Draws the multinomial histogram directly, which has the same law as
    tallying ``sample(D, seed, count)`` but costs O(support) instead of
    O(count).  Keys are bit tuples in enumeration order; zero counts omitted.
    """
    rng = np.random.default_rng(seed)
    points = []
    counts = []
    if isinstance(D, WeightProfile):
        _check_cap(D.n, cap)
        rho = np.array([float(v) for v in D.rho])
        per_layer = rng.multinomial(count, rho / rho.sum())
        for m, c in enumerate(per_layer):
            if c == 0:
                continue
            pts = list(layer_points(D.n, m))
            points.extend(pts)
            counts.extend(rng.multinomial(c, np.full(len(pts), 1.0 / len(pts))))
    else:
        pts = list(support(D, cap))
        p = np.array([float(q) for _, q in pts])
        points = [x for x, _ in pts]
        counts = rng.multinomial(count, p / p.sum())
    return {x: int(c) for x, c in zip(points, counts) if c}
