"""l1-regression (least absolute error) agnostic learner for disjunctions.

Hypotheses are linear combinations of a fixed feature basis, fitted by an
exact LAE linear program and clipped to [0, 1].  Two bases are provided:

* ``monomial(n, t)``: all monomials prod_{i in T} x_i with |T| <= t;
* ``layered(n, t)``: IND(w(x) = r) * prod_{i in T} x_i for every weight r.

Samples are handled as a table ``{x: [count of label 0, count of label 1]}``,
which is all the LAE objective depends on.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from symdis._rational import as_fraction, from_strs, to_str, to_strs
from symdis.cube import (
    Disjunction,
    Distribution,
    binomial,
    eval_disjunction,
    sample,
    sample_counts,
    support,
)
from symdis.lpcore import EQ, OPTIMAL, LinearProgram, SolverDefect, solve_lp
from symdis.polyapprox import _ceil_int, _e_squared, _log_inv

LAYERED = "layered"
MONOMIAL = "monomial"

SAMPLE_CONSTANT = 8
TABLEAU_CAP = 10**6


@dataclass(frozen=True)
class LabeledSample:
    x: tuple
    y: int

    def __post_init__(self):
        object.__setattr__(self, "x", tuple(int(b) for b in self.x))
        if self.y not in (0, 1):
            raise ValueError("labels must be bits")


def _subsets(n: int, t: int):
    """Index sets (1-based) of size <= t in graded lexicographic order."""
    for d in range(t + 1):
        yield from itertools.combinations(range(1, n + 1), d)


def _mask(T: Iterable[int]) -> int:
    m = 0
    for i in T:
        m |= 1 << (i - 1)
    return m


def _xmask(x: Sequence[int]) -> int:
    m = 0
    for i, b in enumerate(x):
        if b:
            m |= 1 << i
    return m


@dataclass(frozen=True)
class FeatureBasis:
    kind: str
    n: int
    t: int

    @cached_property
    def features(self) -> tuple:
        """``(layer, T)`` descriptors; layer is None for the monomial basis."""
        subsets = list(_subsets(self.n, self.t))
        if self.kind == MONOMIAL:
            return tuple((None, T) for T in subsets)
        return tuple((r, T) for r in range(self.n + 1) for T in subsets)

    @cached_property
    def index(self) -> dict:
        return {f: j for j, f in enumerate(self.features)}

    def __len__(self) -> int:
        return len(self.features)

    def evaluate(self, j: int, x: Sequence[int]) -> int:
        r, T = self.features[j]
        if r is not None and sum(x) != r:
            return 0
        return int(all(x[i - 1] for i in T))

    def to_json(self) -> dict:
        return {"kind": self.kind, "n": self.n, "t": self.t}


def build_basis(kind: str, n: int, t: int) -> FeatureBasis:
    if kind not in (LAYERED, MONOMIAL):
        raise ValueError(f"unknown basis kind {kind!r}")
    if n < 1:
        raise ValueError("dimension must be positive")
    if not 0 <= t <= n:
        raise ValueError(f"degree {t} outside 0..{n}")
    return FeatureBasis(kind, n, t)


def basis_size(kind: str, n: int, t: int) -> int:
    per = sum(binomial(n, d) for d in range(t + 1))
    return per * (n + 1) if kind == LAYERED else per


@dataclass(frozen=True)
class Hypothesis:
    """h(x) = clip(sum_j alpha_j phi_j(x), 0, 1); Boolean output [h(x) >= theta]."""

    basis: FeatureBasis
    alpha: tuple
    theta: Fraction | None = None
    train_deviation: Fraction | None = field(default=None, compare=False)

    @cached_property
    def _terms(self) -> dict:
        # layer (or None) -> [(mask of T, alpha)] over nonzero coefficients
        terms = {}
        for j, a in enumerate(self.alpha):
            if a:
                r, T = self.basis.features[j]
                terms.setdefault(r, []).append((_mask(T), a))
        return terms

    def raw(self, x: Sequence[int]) -> Fraction:
        xm = _xmask(x)
        key = None if self.basis.kind == MONOMIAL else sum(x)
        return sum((a for m, a in self._terms.get(key, ()) if m & xm == m), Fraction(0))

    def __call__(self, x: Sequence[int]) -> Fraction:
        return min(max(self.raw(x), Fraction(0)), Fraction(1))

    def predict(self, x: Sequence[int]) -> int:
        if self.theta is None:
            raise ValueError("hypothesis has no threshold; call round_threshold first")
        return int(self(x) >= self.theta)

    def to_json(self) -> dict:
        return {
            "type": "hypothesis",
            "basis": self.basis.to_json(),
            "alpha": to_strs(self.alpha),
            "theta": None if self.theta is None else to_str(self.theta),
            "train_deviation": None if self.train_deviation is None else to_str(self.train_deviation),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "Hypothesis":
        b = obj["basis"]
        theta = obj.get("theta")
        dev = obj.get("train_deviation")
        return cls(
            build_basis(b["kind"], int(b["n"]), int(b["t"])),
            tuple(from_strs(obj["alpha"])),
            None if theta is None else Fraction(theta),
            None if dev is None else Fraction(dev),
        )


def tabulate(samples) -> dict:
    """``{x: [#label 0, #label 1]}`` from LabeledSamples, (x, y) pairs or a table."""
    if isinstance(samples, dict):
        return {tuple(x): [int(c[0]), int(c[1])] for x, c in samples.items() if c[0] or c[1]}
    table = {}
    for s in samples:
        x, y = (s.x, s.y) if isinstance(s, LabeledSample) else (tuple(int(b) for b in s[0]), int(s[1]))
        if y not in (0, 1):
            raise ValueError("labels must be bits")
        table.setdefault(tuple(x), [0, 0])[y] += 1
    return table


def _point_indicator(basis: FeatureBasis, x: tuple) -> list:
    """Coefficients (feature index, +-1) of a basis combination equal to [z == x].

    Only valid when the relevant block is saturated (see ``_saturated``).
    """
    t = basis.t
    ones = tuple(i + 1 for i, b in enumerate(x) if b)
    zeros = tuple(i + 1 for i, b in enumerate(x) if not b)
    if basis.kind == LAYERED:
        r = len(ones)
        if r <= t:
            # On the slice, prod_{i in supp x} z_i = 1 only at z = x.
            return [(basis.index[(r, ones)], 1)]
        # prod_{i notin supp x} (1 - z_i), expanded.
        return [
            (basis.index[(r, tuple(sorted(U)))], (-1) ** len(U))
            for d in range(len(zeros) + 1)
            for U in itertools.combinations(zeros, d)
        ]
    return [
        (basis.index[(None, tuple(sorted(ones + U)))], (-1) ** len(U))
        for d in range(len(zeros) + 1)
        for U in itertools.combinations(zeros, d)
    ]


def _saturated(basis: FeatureBasis, block) -> bool:
    """Whether the basis spans every function on the block's points."""
    if basis.kind == MONOMIAL:
        return basis.t >= basis.n
    return basis.t >= min(block, basis.n - block)


def _fit_block_lp(basis: FeatureBasis, cols: list, rows: list, cap: int) -> tuple:
    """Solve the LAE LP on one block; rows are (x, y, weight) with weight > 0."""
    k, s = len(cols), len(rows)
    if (2 * k + 2 * s) * s > cap:
        raise ValueError(f"LAE tableau of {(2 * k + 2 * s) * s} cells exceeds cap {cap}")
    matrix = []
    for idx, (x, y, w) in enumerate(rows):
        phi = [basis.evaluate(j, x) for j in cols]
        dev = [0] * (2 * s)
        dev[2 * idx] = -1
        dev[2 * idx + 1] = 1
        matrix.append(tuple(phi + dev))
    objective = (0,) * k + tuple(w for _, _, w in rows for _ in (0, 1))
    lp = LinearProgram(
        objective=objective,
        matrix=tuple(matrix),
        senses=(EQ,) * s,
        rhs=tuple(y for _, y, _ in rows),
        free=(True,) * k + (False,) * (2 * s),
    )
    sol = solve_lp(lp)
    if sol.status != OPTIMAL:
        raise SolverDefect(f"LAE LP reported {sol.status}")
    return sol.x[:k], sol.value


def _fit_values(basis: FeatureBasis, targets: dict, cap: int = TABLEAU_CAP) -> tuple:
    """Minimise sum w |h(x) - y| over span(basis).

    ``targets`` maps x -> list of (y, weight) with rational y.  The objective
    splits over blocks of disjoint feature support (one block per layer for
    the layered basis).  A block whose features span every function on its
    points separates per point, and its exact optimum is a weighted median
    (lower median on ties); other blocks go through the exact simplex.
    Returns (alpha, total deviation).
    """
    n = basis.n
    alpha = [Fraction(0)] * len(basis)
    total = Fraction(0)
    blocks = {}
    for x in sorted(targets):
        if len(x) != n:
            raise ValueError(f"sample of length {len(x)} for basis with n={n}")
        key = sum(x) if basis.kind == LAYERED else None
        blocks.setdefault(key, []).append(x)

    for key in sorted(blocks, key=lambda b: -1 if b is None else b):
        points = blocks[key]
        if _saturated(basis, key):
            for x in points:
                value, dev = _weighted_median(targets[x])
                total += dev
                if value:
                    for j, sgn in _point_indicator(basis, x):
                        alpha[j] += sgn * value
            continue
        if basis.kind == LAYERED:
            cols = [j for j, (r, T) in enumerate(basis.features) if r == key and len(T) <= key]
        else:
            cols = list(range(len(basis)))
        rows = [(x, y, w) for x in points for y, w in targets[x] if w]
        coef, value = _fit_block_lp(basis, cols, rows, cap)
        for j, a in zip(cols, coef):
            alpha[j] = a
        total += value
    return tuple(alpha), total


def _weighted_median(pairs) -> tuple:
    """Smallest minimiser of sum w |v - y| and its value."""
    pairs = sorted((as_fraction(y), as_fraction(w)) for y, w in pairs if w)
    half = sum(w for _, w in pairs) / 2
    acc = Fraction(0)
    for y, w in pairs:
        acc += w
        if acc >= half:
            return y, sum((w2 * abs(y - y2) for y2, w2 in pairs), Fraction(0))
    raise ValueError("no positive weights")


def fit_lae(samples, basis: FeatureBasis, cap: int = TABLEAU_CAP) -> Hypothesis:
    """Exact least-absolute-error fit of 0/1-labelled samples."""
    table = tabulate(samples)
    if not table:
        raise ValueError("cannot fit an empty sample")
    targets = {x: [(0, c[0]), (1, c[1])] for x, c in table.items()}
    alpha, dev = _fit_values(basis, targets, cap)
    return Hypothesis(basis, alpha, None, dev)


def fit_values(points: Sequence, values: Sequence, basis: FeatureBasis, cap: int = TABLEAU_CAP) -> Hypothesis:
    """Fit arbitrary rational targets (one per point, unit weight)."""
    targets = {}
    for x, v in zip(points, values):
        targets.setdefault(tuple(x), []).append((as_fraction(v), 1))
    alpha, dev = _fit_values(basis, targets, cap)
    return Hypothesis(basis, alpha, None, dev)


def training_deviation(h: Hypothesis, samples, clip: bool = False) -> Fraction:
    table = tabulate(samples)
    f = h if clip else h.raw
    total = Fraction(0)
    for x, (c0, c1) in table.items():
        v = f(x)
        total += c0 * abs(v) + c1 * abs(1 - v)
    return total


def disagreement(h: Hypothesis, samples, theta=None) -> int:
    theta = h.theta if theta is None else as_fraction(theta)
    table = tabulate(samples)
    return sum(c[0] if h(x) >= theta else c[1] for x, c in table.items())


def round_threshold(h: Hypothesis, samples) -> Hypothesis:
    """Pick theta from {h(x_i)} u {0, 1} minimising empirical disagreement."""
    table = tabulate(samples)
    values = {x: h(x) for x in table}
    candidates = sorted(set(values.values()) | {Fraction(0), Fraction(1)})
    best = None
    for theta in candidates:
        errs = sum(c[0] if values[x] >= theta else c[1] for x, c in table.items())
        if best is None or errs < best[0]:
            best = (errs, theta)
    return Hypothesis(h.basis, h.alpha, best[1], h.train_deviation)


def learner_degree(kind: str, epsilon) -> int:
    """Uncapped basis degree: ceil(8e^2 ln(3/eps)) layered, ceil(4e^2 ln(3/eps)) monomial."""
    eps = as_fraction(epsilon)
    if not 0 < eps < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {eps}")
    factor = 8 if kind == LAYERED else 4
    return _ceil_int(factor * _e_squared() * _log_inv(eps / 3))


def default_sample_size(m: int, epsilon) -> int:
    """ceil(SAMPLE_CONSTANT * m / eps^2) for a basis of m features."""
    eps = as_fraction(epsilon)
    return math.ceil(SAMPLE_CONSTANT * m / (eps * eps))


def learner_basis(dist_kind: str, n: int, epsilon, degree: int | None = None) -> FeatureBasis:
    kind = {"symmetric": LAYERED, "product": MONOMIAL}.get(dist_kind)
    if kind is None:
        raise ValueError(f"unknown distribution kind {dist_kind!r}")
    t = learner_degree(kind, epsilon) if degree is None else degree
    return build_basis(kind, n, min(t, n))


def agnostic_learn(samples, dist_kind: str, epsilon, degree: int | None = None) -> Hypothesis:
    """Layered basis for symmetric, monomial basis for product distributions.

    The degree is capped at n, where both bases already span every function.
    """
    table = tabulate(samples)
    if not table:
        raise ValueError("cannot learn from an empty sample")
    n = len(next(iter(table)))
    return fit_lae(table, learner_basis(dist_kind, n, epsilon, degree))


def _split_seed(seed, k: int) -> list:
    return np.random.SeedSequence(seed).spawn(k)


def disjunction_samples(D: Distribution, clause: Disjunction, eta, count: int, seed) -> list:
    """i.i.d. labelled samples: y = c(x), flipped with probability eta."""
    s_points, s_noise = _split_seed(seed, 2)
    xs = sample(D, s_points, count)
    flips = np.random.default_rng(s_noise).random(count) < float(as_fraction(eta))
    return [
        LabeledSample(tuple(int(b) for b in x), eval_disjunction(clause, x) ^ int(f))
        for x, f in zip(xs, flips)
    ]


def disjunction_sample_table(D: Distribution, clause: Disjunction, eta, count: int, seed) -> dict:
    """Tabulated form of ``count`` noisy samples, drawn as a histogram.

    Same law as tabulating ``disjunction_samples`` but O(support) work, which
    makes the large default sample budgets affordable.
    """
    s_points, s_noise = _split_seed(seed, 2)
    counts = sample_counts(D, s_points, count)
    rng = np.random.default_rng(s_noise)
    eta_f = float(as_fraction(eta))
    table = {}
    for x in sorted(counts):
        c = counts[x]
        flipped = int(rng.binomial(c, eta_f)) if eta_f else 0
        label = eval_disjunction(clause, x)
        row = [0, 0]
        row[label] = c - flipped
        row[1 - label] = flipped
        table[x] = row
    return table


def population_error(h: Hypothesis, D: Distribution, clause: Disjunction, eta, boolean: bool = False) -> Fraction:
    """Exact E_{(x,y)~P} |h(x) - y| where y = c(x) flipped w.p. eta.

    With ``boolean=True`` the thresholded hypothesis is scored instead.
    """
    eta = as_fraction(eta)
    total = Fraction(0)
    for x, p in support(D):
        v = Fraction(h.predict(x)) if boolean else h(x)
        c = eval_disjunction(clause, x)
        total += p * ((1 - eta) * abs(v - c) + eta * abs(v - (1 - c)))
    return total


def write_samples(samples, path) -> None:
    with open(path, "w") as fh:
        for s in samples:
            fh.write("".join(str(b) for b in s.x) + f",{s.y}\n")


def read_samples(path) -> list:
    out = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            try:
                bits, label = line.split(",")
                if set(bits) - {"0", "1"}:
                    raise ValueError
                out.append(LabeledSample(tuple(int(b) for b in bits), int(label)))
            except ValueError:
                raise ValueError(f"{path}:{lineno}: malformed sample record {line!r}") from None
    return out
