"""Exact self-check suites at desk scale.

Each suite returns a list of :class:`Check` results; nothing here raises on a
failed check, so callers decide how to report.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from symdis import cube, lpcore, parity, polyapprox
from symdis.cube import Disjunction, WeightProfile, binomial, layer_points


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    detail: str = ""


def piecewise_interpolant(t: int, w: int) -> Fraction:
    """0 at w=0, 1 on 1..t, 1 - (-1)^t C(w-1, t) beyond t."""
    if w == 0:
        return Fraction(0)
    if w <= t:
        return Fraction(1)
    return Fraction(1 - (-1) ** t * binomial(w - 1, t))


def suite_interpolant(max_t: int = 20, max_w: int = 40) -> list:
    checks = []
    for t in range(1, max_t + 1):
        f = polyapprox.predicate_interpolant(t)
        bad = [w for w in range(max_w + 1) if f(w) != piecewise_interpolant(t, w)]
        checks.append(Check(f"interpolant t={t}", not bad, f"mismatch at w={bad[:3]}" if bad else ""))
    return checks


def enumerate_block_pmf(n: int, r: int, k1: int, k2: int = 0) -> dict:
    counts = {}
    for x in layer_points(n, r):
        key = (sum(x[:k1]), sum(x[k1 : k1 + k2]))
        counts[key] = counts.get(key, 0) + 1
    total = binomial(n, r)
    return {key: Fraction(c, total) for key, c in counts.items()}


def delta_formula(n: int, r: int, k: int, j: int) -> Fraction:
    """C(n-k, r-j) C(k, j) / C(n, r)."""
    return Fraction(binomial(n - k, r - j) * binomial(k, j), binomial(n, r))


def enumerate_layer_error(n: int, r: int, k: int, t: int) -> Fraction:
    """l1 error of the degree-t interpolant of x_1 v ... v x_k on S_r, by brute force."""
    c = Disjunction.monotone(n, k)
    if t == 0:
        f = lambda w: Fraction(0)
    else:
        poly = polyapprox.predicate_interpolant(t)
        cache = {}

        def f(w):
            if w not in cache:
                cache[w] = poly(w)
            return cache[w]

    return cube.exact_l1_error(c, lambda x: f(sum(x[:k])), WeightProfile.layer(n, r))


def suite_delta(max_n: int = 12) -> list:
    checks = []
    for n in range(1, max_n + 1):
        pmf_ok = formula_ok = err_ok = True
        for r in range(n + 1):
            for k1 in range(n + 1):
                for k2 in range(n - k1 + 1):
                    if cube.layer_block_pmf(n, r, k1, k2) != enumerate_block_pmf(n, r, k1, k2):
                        pmf_ok = False
                marg = cube.layer_block_pmf(n, r, k1, 0)
                for j in range(k1 + 1):
                    if marg.get((j, 0), Fraction(0)) != delta_formula(n, r, k1, j):
                        formula_ok = False
            for k in range(1, n + 1):
                for t in range(k + 1):
                    if polyapprox.layer_error(n, r, k, t)[0] != enumerate_layer_error(n, r, k, t):
                        err_ok = False
        checks.append(Check(f"delta n={n} block pmf", pmf_ok))
        checks.append(Check(f"delta n={n} formula", formula_ok))
        checks.append(Check(f"delta n={n} layer_error", err_ok))
    return checks


def suite_correlation(max_s: int = 16) -> list:
    checks = []
    for s in range(1, max_s + 1):
        got = parity.or_parity_correlation(s)
        want = Fraction(1, 2 ** (s - 1))
        checks.append(Check(f"correlation s={s}", got == want, f"{got} vs {want}"))
    return checks


def duality_check(n: int, r: int, res: lpcore.UniformApproxResult | None = None) -> Check:
    """Certificate and duality identity for the OR predicate at (n, r)."""
    d = lpcore.or_predicate(n)
    res = res or lpcore.best_uniform_approx(d, r)
    name = f"duality n={n} r={r}"
    if any(m != 0 for m in lpcore.dual_moments(res)):
        return Check(name, False, "dual moments nonzero")
    if max(abs(d[m] - res.poly(m)) for m in range(n + 1)) != res.eps_star:
        return Check(name, False, "minimax polynomial does not attain eps*")
    if r == n:
        return Check(name, res.eps_star == 0, f"eps*={res.eps_star}")
    if sum(abs(b) for b in res.dual) != 1:
        return Check(name, False, "dual not normalised")
    value, _ = lpcore.best_l1_approx(d, lpcore.hard_distribution_from_dual(res), r)
    return Check(name, value == res.eps_star, f"l1={value} eps*={res.eps_star}")


def suite_duality(max_n: int = 30, max_r: int = 12) -> list:
    checks = []
    for n in range(1, max_n + 1):
        prev = None
        monotone = True
        for r in range(min(n, max_r) + 1):
            res = lpcore.best_uniform_approx(lpcore.or_predicate(n), r)
            checks.append(duality_check(n, r, res))
            if prev is not None and res.eps_star > prev:
                monotone = False
            prev = res.eps_star
        checks.append(Check(f"duality n={n} nonincreasing", monotone))
    return checks


SUITES = {
    "interpolant": suite_interpolant,
    "delta": suite_delta,
    "correlation": suite_correlation,
    "duality": suite_duality,
}


def run_suite(name: str) -> list:
    try:
        suite = SUITES[name]
    except KeyError:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}") from None
    return suite()
