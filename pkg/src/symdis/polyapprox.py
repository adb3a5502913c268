"""Low-degree polynomial approximations of disjunctions.

Two settings are covered.  On a single slice S_r (points of Hamming weight r)
a clause is approximated by a polynomial in the block weights
``u = #ones among positive literals`` and ``v = #ones among negated literals``;
stitching one such polynomial per slice handles any symmetric distribution.
On a product distribution a single univariate polynomial of the (flipped)
clause weight suffices.

The univariate building block is the degree-t interpolant of the OR predicate
d(0)=0, d(w)=1 for w>0 on {0..t}:

    f(w) = 1 - (1/t!) * prod_{i=1..t} (i - w)

Beyond t it deviates from 1 by exactly C(w-1, t), and every error here is
computed with that exact deviation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from decimal import ROUND_CEILING, Context, Decimal
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from symdis._rational import as_fraction, from_strs, to_str, to_strs
from symdis.cube import (
    Disjunction,
    ProductDistribution,
    WeightProfile,
    binomial,
    layer_block_pmf,
    product_weight_pmf,
    weight,
)

MONOMIAL = "monomial"
CHEBYSHEV = "chebyshev-scaled"

EXACT = "exact_interpolation"
CONSTANT_ONE = "constant_one"
INTERPOLANT = "interpolant"

# Size threshold below which the product construction interpolates exactly.
PRODUCT_K0 = 64

# Slack for float-ish comparisons in the degree case analysis.
_TIE = Decimal(2) ** -40
_CTX = Context(prec=60)


@dataclass(frozen=True)
class UnivariatePoly:
    """Exact-coefficient polynomial, either in monomials or in Chebyshev
    polynomials T_i(2w/scale - 1) rescaled to [0, scale]."""

    coeffs: tuple
    basis: str = MONOMIAL
    scale: int | None = None

    def __post_init__(self):
        coeffs = tuple(as_fraction(c) for c in self.coeffs) or (Fraction(0),)
        object.__setattr__(self, "coeffs", coeffs)
        if self.basis not in (MONOMIAL, CHEBYSHEV):
            raise ValueError(f"unknown basis {self.basis!r}")
        if self.basis == CHEBYSHEV and not self.scale:
            raise ValueError("chebyshev-scaled basis needs a positive scale")

    @property
    def degree(self) -> int:
        for i in range(len(self.coeffs) - 1, -1, -1):
            if self.coeffs[i]:
                return i
        return 0

    def __call__(self, w) -> Fraction:
        w = as_fraction(w)
        if self.basis == MONOMIAL:
            acc = Fraction(0)
            for c in reversed(self.coeffs):
                acc = acc * w + c
            return acc
        # Clenshaw recurrence for sum c_i T_i(s).
        s = 2 * w / self.scale - 1
        b1 = b2 = Fraction(0)
        for c in reversed(self.coeffs[1:]):
            b1, b2 = 2 * s * b1 - b2 + c, b1
        return s * b1 - b2 + self.coeffs[0]

    def to_monomial(self) -> "UnivariatePoly":
        if self.basis == MONOMIAL:
            return self
        out = [Fraction(0)] * len(self.coeffs)
        # T_i(a*w + b) in monomials of w, with a = 2/scale, b = -1.
        a, b = Fraction(2, self.scale), Fraction(-1)
        t_prev, t_cur = [Fraction(1)], [b, a]
        for i, c in enumerate(self.coeffs):
            if i == 0:
                term = t_prev
            elif i == 1:
                term = t_cur
            else:
                nxt = [Fraction(0)] * (len(t_cur) + 1)
                for j, v in enumerate(t_cur):
                    nxt[j] += 2 * b * v
                    nxt[j + 1] += 2 * a * v
                for j, v in enumerate(t_prev):
                    nxt[j] -= v
                t_prev, t_cur = t_cur, nxt
                term = t_cur
            for j, v in enumerate(term):
                out[j] += c * v
        return UnivariatePoly(tuple(out))

    def to_json(self) -> dict:
        obj = {"type": "univariate_poly", "basis": self.basis, "coeffs": to_strs(self.coeffs)}
        if self.basis == CHEBYSHEV:
            obj["scale"] = self.scale
        return obj

    @classmethod
    def from_json(cls, obj: dict) -> "UnivariatePoly":
        return cls(tuple(from_strs(obj["coeffs"])), obj.get("basis", MONOMIAL), obj.get("scale"))


def _poly_mul(p: Sequence, q: Sequence) -> list:
    out = [Fraction(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return out


def predicate_interpolant(t: int) -> UnivariatePoly:
    """Monomial expansion of 1 - (1/t!) prod_{i=1..t} (i - w)."""
    if t < 1:
        raise ValueError("interpolant degree must be >= 1")
    prod = [Fraction(1)]
    for i in range(1, t + 1):
        prod = _poly_mul(prod, [Fraction(i), Fraction(-1)])
    scale = math.factorial(t)
    coeffs = [-c / scale for c in prod]
    coeffs[0] += 1
    return UnivariatePoly(tuple(coeffs))


def interpolant_deviation(w: int, t: int) -> int:
    """|1 - f(w)| for the degree-t interpolant at a point w >= 1."""
    return binomial(w - 1, t) if w > t else 0


@dataclass(frozen=True)
class DegreePlan:
    strategy: str
    t: int
    epsilon: Fraction

    @property
    def degree_bound(self) -> int:
        return 0 if self.strategy == CONSTANT_ONE else self.t

    def to_json(self) -> dict:
        return {"strategy": self.strategy, "t": self.t, "epsilon": to_str(self.epsilon)}


def _log_inv(eps: Fraction) -> Decimal:
    """ln(1/eps) to 60 significant digits."""
    return _CTX.subtract(Decimal(eps.denominator).ln(_CTX), Decimal(eps.numerator).ln(_CTX))


def _ceil_int(x: Decimal) -> int:
    return int(x.to_integral_value(rounding=ROUND_CEILING))


def _e_squared() -> Decimal:
    return Decimal(2).exp(_CTX)


def _check_eps(epsilon) -> Fraction:
    eps = as_fraction(epsilon)
    if not 0 < eps < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {eps}")
    return eps


def choose_degree_layer(n: int, r: int, k: int, epsilon) -> DegreePlan:
    """Case analysis for a monotone k-clause on the slice S_r.

    Near-ties (within 2^-40) resolve towards the branch with the stronger
    guarantee: exact interpolation, or the interpolant over constant 1.
    """
    eps = _check_eps(epsilon)
    if not 0 <= r <= n:
        raise ValueError(f"layer {r} outside 0..{n}")
    if not 1 <= k <= n:
        raise ValueError(f"clause size {k} outside 1..{n}")
    log_inv = _log_inv(eps)
    if Decimal(k) <= 2 * log_inv + _TIE:
        return DegreePlan(EXACT, k, eps)
    if r > n - k:
        return DegreePlan(CONSTANT_ONE, 0, eps)
    if Decimal(r) - _CTX.divide(Decimal(n), Decimal(k)) * log_inv >= _TIE:
        return DegreePlan(CONSTANT_ONE, 0, eps)
    return DegreePlan(INTERPOLANT, _ceil_int(8 * _e_squared() * log_inv), eps)


def choose_degree_product(k: int, epsilon, zero_mass=None) -> DegreePlan:
    """Degree plan for a monotone k-clause on a product distribution.

    ``zero_mass`` is Pr[all k clause bits are 0]; when it is at most epsilon
    the constant 1 already suffices.
    """
    eps = _check_eps(epsilon)
    if zero_mass is not None and as_fraction(zero_mass) <= eps:
        return DegreePlan(CONSTANT_ONE, 0, eps)
    if k < PRODUCT_K0:
        return DegreePlan(EXACT, k, eps)
    return DegreePlan(INTERPOLANT, _ceil_int(4 * _e_squared() * _log_inv(eps)), eps)


def layer_error(n: int, r: int, k: int, t: int) -> tuple:
    """Exact (l1, l2^2) error of the degree-t interpolant of a monotone
    k-clause on S_r.  ``t = 0`` stands for the zero polynomial."""
    delta = layer_block_pmf(n, r, k, 0)
    l1 = l2sq = Fraction(0)
    for (j, _), p in delta.items():
        dev = interpolant_deviation(j, t) if j else 0
        l1 += p * dev
        l2sq += p * dev * dev
    return l1, l2sq


def product_error(mu: Sequence, t: int) -> Fraction:
    """Exact l1 error of the degree-t interpolant of OR over bits with biases mu."""
    pmf = product_weight_pmf(mu)
    return sum((p * interpolant_deviation(j, t) for j, p in enumerate(pmf) if j > t), Fraction(0))


def _plan_poly(plan: DegreePlan, k: int) -> list:
    """Univariate coefficients realising a plan on {0..k}.

    Interpolant degrees are capped at k: on {0..k} the capped interpolant
    takes the same values, so errors are unchanged and degrees only shrink.
    """
    if k == 0:
        return [Fraction(0)]
    if plan.strategy == CONSTANT_ONE:
        return [Fraction(1)]
    return list(predicate_interpolant(min(plan.t, k)).coeffs)


def _reflect(coeffs: Sequence, k: int) -> list:
    """Coefficients of g(v) = f(k - v) given those of f."""
    out = [Fraction(0)] * len(coeffs)
    for i, c in enumerate(coeffs):
        if not c:
            continue
        # (k - v)^i = sum_j C(i, j) k^(i-j) (-v)^j
        for j in range(i + 1):
            out[j] += c * binomial(i, j) * k ** (i - j) * (-1) ** j
    return out


@dataclass(frozen=True)
class LayerPolynomial:
    """Polynomial ``sum coeffs[a][b] u^a v^b`` approximating a clause on S_r."""

    n: int
    r: int
    pos: frozenset
    neg: frozenset
    coeffs: tuple
    combined: bool = False
    plans: tuple = field(default=(), compare=False)

    def __post_init__(self):
        object.__setattr__(self, "pos", frozenset(self.pos))
        object.__setattr__(self, "neg", frozenset(self.neg))
        object.__setattr__(
            self, "coeffs", tuple(tuple(as_fraction(c) for c in row) for row in self.coeffs)
        )

    @property
    def degree(self) -> int:
        deg = 0
        for a, row in enumerate(self.coeffs):
            for b, c in enumerate(row):
                if c:
                    deg = max(deg, a + b)
        return deg

    def value(self, a: int, b: int) -> Fraction:
        return self._table[(a, b)]

    @cached_property
    def _table(self) -> dict:
        table = {}
        for a in range(len(self.pos) + 1):
            for b in range(len(self.neg) + 1):
                acc = Fraction(0)
                for i, row in enumerate(self.coeffs):
                    for j, c in enumerate(row):
                        if c:
                            acc += c * a**i * b**j
                table[(a, b)] = acc
        return table

    def block_weights(self, x: Sequence[int]) -> tuple:
        if len(x) != self.n:
            raise ValueError(f"point has length {len(x)}, polynomial has n={self.n}")
        return sum(x[i - 1] for i in self.pos), sum(x[i - 1] for i in self.neg)

    def __call__(self, x: Sequence[int]) -> Fraction:
        return self.value(*self.block_weights(x))

    def to_json(self) -> dict:
        return {
            "type": "layer_polynomial",
            "n": self.n,
            "r": self.r,
            "pos": sorted(self.pos),
            "neg": sorted(self.neg),
            "combined": self.combined,
            "coeffs": [to_strs(row) for row in self.coeffs],
            "plans": [p.to_json() for p in self.plans],
        }

    @classmethod
    def from_json(cls, obj: dict) -> "LayerPolynomial":
        plans = tuple(
            DegreePlan(p["strategy"], int(p["t"]), Fraction(p["epsilon"])) for p in obj.get("plans", ())
        )
        return cls(
            obj["n"],
            obj["r"],
            frozenset(obj["pos"]),
            frozenset(obj["neg"]),
            tuple(tuple(from_strs(row)) for row in obj["coeffs"]),
            bool(obj.get("combined", False)),
            plans,
        )


def _monotone_plan(n: int, r: int, k: int, eps: Fraction) -> DegreePlan:
    if k == 0:
        return DegreePlan(EXACT, 0, eps)
    return choose_degree_layer(n, r, k, eps)


def approximate_disjunction_on_layer(c: Disjunction, r: int, epsilon) -> LayerPolynomial:
    """Polynomial with l1 error at most epsilon against c on the slice S_r.

    Monotone clauses use the degree plan directly.  With negated literals the
    clause splits as c = c1 + c2 - c1*c2; c1 (positive part) is handled on S_r
    and the negated part, after swapping 0 and 1, as a monotone clause on
    S_{n-r}, each with budget epsilon/3.
    """
    eps = _check_eps(epsilon)
    n = c.n
    if not 0 <= r <= n:
        raise ValueError(f"layer {r} outside 0..{n}")
    k1, k2 = len(c.pos), len(c.neg)
    if k2 == 0:
        plan = _monotone_plan(n, r, k1, eps)
        f = _plan_poly(plan, k1)
        return LayerPolynomial(n, r, c.pos, c.neg, tuple((v,) for v in f), False, (plan,))

    plan1 = _monotone_plan(n, r, k1, eps / 3)
    plan2 = _monotone_plan(n, n - r, k2, eps / 3)
    f1 = _plan_poly(plan1, k1)
    f2 = _reflect(_plan_poly(plan2, k2), k2)
    rows, cols = len(f1), len(f2)
    coeffs = [[Fraction(0)] * cols for _ in range(rows)]
    for a in range(rows):
        coeffs[a][0] += f1[a]
        for b in range(cols):
            coeffs[a][b] -= f1[a] * f2[b]
    for b in range(cols):
        coeffs[0][b] += f2[b]
    return LayerPolynomial(
        n, r, c.pos, c.neg, tuple(tuple(row) for row in coeffs), True, (plan1, plan2)
    )


def layer_poly_error(p: LayerPolynomial, c: Disjunction) -> tuple:
    """Exact (l1, l2^2) error of p against c under the uniform law on S_r."""
    if (p.n, p.pos, p.neg) != (c.n, c.pos, c.neg):
        raise ValueError("polynomial and clause use different blocks")
    k1, k2 = len(c.pos), len(c.neg)
    l1 = l2sq = Fraction(0)
    for (a, b), prob in layer_block_pmf(p.n, p.r, k1, k2).items():
        target = 0 if (a == 0 and b == k2) else 1
        diff = target - p.value(a, b)
        l1 += prob * abs(diff)
        l2sq += prob * diff * diff
    return l1, l2sq


def symmetric_basis_approximation(c: Disjunction, D: WeightProfile, epsilon) -> list:
    """One layer polynomial per slice carrying mass under D."""
    eps = _check_eps(epsilon)
    if D.n != c.n:
        raise ValueError("distribution and clause dimensions differ")
    return [(r, approximate_disjunction_on_layer(c, r, eps)) for r, m in enumerate(D.rho) if m]


def symmetric_approximation_error(pieces: list, c: Disjunction, D: WeightProfile) -> Fraction:
    """Total exact l1 error of a per-layer approximation under D."""
    return sum((D.rho[r] * layer_poly_error(p, c)[0] for r, p in pieces), Fraction(0))


def piecewise_function(pieces: list):
    """Cube function x -> p_{w(x)}(x) assembled from per-layer polynomials."""
    by_layer = dict(pieces)

    def h(x):
        p = by_layer.get(weight(x))
        return p(x) if p is not None else Fraction(0)

    return h


@dataclass(frozen=True)
class ProductPolynomial:
    """f(w') where w' counts satisfied literals of the clause (negations flipped)."""

    clause: Disjunction
    plan: DegreePlan
    poly: UnivariatePoly
    interp_degree: int

    @property
    def degree(self) -> int:
        return self.poly.degree

    def literal_weight(self, x: Sequence[int]) -> int:
        c = self.clause
        return sum(x[i - 1] for i in c.pos) + sum(1 - x[i - 1] for i in c.neg)

    def __call__(self, x: Sequence[int]) -> Fraction:
        return self.poly(self.literal_weight(x))


def flipped_biases(c: Disjunction, D: ProductDistribution) -> list:
    """Pr[literal true] for each literal of c, positive literals first."""
    if D.n != c.n:
        raise ValueError("distribution and clause dimensions differ")
    return [D.mu[i - 1] for i in sorted(c.pos)] + [1 - D.mu[i - 1] for i in sorted(c.neg)]


def approximate_disjunction_product(c: Disjunction, D: ProductDistribution, epsilon) -> ProductPolynomial:
    eps = _check_eps(epsilon)
    mu = flipped_biases(c, D)
    k = len(mu)
    if k == 0:
        return ProductPolynomial(c, DegreePlan(EXACT, 0, eps), UnivariatePoly((0,)), 0)
    zero_mass = Fraction(1)
    for m in mu:
        zero_mass *= 1 - m
    plan = choose_degree_product(k, eps, zero_mass)
    coeffs = _plan_poly(plan, k)
    interp = 0 if plan.strategy == CONSTANT_ONE else min(plan.t, k)
    return ProductPolynomial(c, plan, UnivariatePoly(tuple(coeffs)), interp)


def product_poly_error(pp: ProductPolynomial, D: ProductDistribution) -> Fraction:
    """Exact l1 error of a product-distribution approximation (closed form)."""
    mu = flipped_biases(pp.clause, D)
    if not mu:
        return Fraction(0)
    if pp.plan.strategy == CONSTANT_ONE:
        return product_weight_pmf(mu)[0]
    return product_error(mu, pp.interp_degree)
