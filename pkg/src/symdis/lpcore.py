"""Exact rational linear programming and the minimax / l1 approximation LPs.

``solve_lp`` is a dense two-phase simplex over ``Fraction`` with Bland's
anticycling rule.  The dual vector is read off the final basis, and every
optimal answer is certified (primal feasibility, dual feasibility, equal
objectives) before it is returned.

On top of it sit the programs for symmetric targets on {0..n}: the best
uniform (sup-norm) polynomial approximation with its dual certificate, the
"hard" symmetric distribution built from that certificate, and the best
weighted-l1 approximation.  Polynomials in these programs use Chebyshev
polynomials rescaled to [0, n]; they span the same space as monomials, so
optimal values and duals are unchanged, but the rationals stay far smaller.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from symdis._rational import as_fraction, from_strs, to_str, to_strs
from symdis.cube import WeightProfile, binomial, layer_points
from symdis.polyapprox import CHEBYSHEV, UnivariatePoly

OPTIMAL = "optimal"
INFEASIBLE = "infeasible"
UNBOUNDED = "unbounded"

LE, EQ, GE = "<=", "==", ">="


class SolverDefect(RuntimeError):
    """An optimal basis failed its own certificate; indicates a bug."""


@dataclass(frozen=True)
class LinearProgram:
    """``min/max c.x`` subject to ``A x (<=|==|>=) b``; variables are
    nonnegative unless flagged free."""

    objective: tuple
    matrix: tuple
    senses: tuple
    rhs: tuple
    free: tuple = ()
    maximize: bool = False

    def __post_init__(self):
        c = tuple(as_fraction(v) for v in self.objective)
        A = tuple(tuple(as_fraction(v) for v in row) for row in self.matrix)
        b = tuple(as_fraction(v) for v in self.rhs)
        free = tuple(bool(f) for f in self.free) or (False,) * len(c)
        object.__setattr__(self, "objective", c)
        object.__setattr__(self, "matrix", A)
        object.__setattr__(self, "rhs", b)
        object.__setattr__(self, "senses", tuple(self.senses))
        object.__setattr__(self, "free", free)
        if len(free) != len(c):
            raise ValueError("free flags must match the number of variables")
        if not (len(A) == len(b) == len(self.senses)):
            raise ValueError("matrix, rhs and senses must have one entry per row")
        for row in A:
            if len(row) != len(c):
                raise ValueError("every constraint row needs one coefficient per variable")
        for s in self.senses:
            if s not in (LE, EQ, GE):
                raise ValueError(f"unknown constraint sense {s!r}")

    @property
    def shape(self) -> tuple:
        return len(self.matrix), len(self.objective)


@dataclass(frozen=True)
class LPSolution:
    """Solver result.  For an optimal status ``x`` is a primal optimum, ``y`` a
    dual optimum with ``b.y == value``.  Dual sign convention: for a min
    problem y <= 0 on <= rows and y >= 0 on >= rows; reversed for max."""

    status: str
    x: tuple = ()
    y: tuple = ()
    value: Fraction | None = None


def _pivot(T: list, red: list, row: int, col: int) -> None:
    prow = T[row]
    piv = prow[col]
    if piv != 1:
        inv = 1 / piv
        prow[:] = [v * inv if v else v for v in prow]
    nz = [j for j, v in enumerate(prow) if v]
    for i, other in enumerate(T):
        if i != row:
            f = other[col]
            if f:
                for j in nz:
                    other[j] -= f * prow[j]
    f = red[col]
    if f:
        for j in nz:
            red[j] -= f * prow[j]


def _reduced_costs(T: list, basis: list, cost: list) -> list:
    width = len(T[0]) if T else len(cost) + 1
    red = list(cost) + [Fraction(0)]
    for i, bi in enumerate(basis):
        cb = cost[bi]
        if cb:
            for j, v in enumerate(T[i]):
                if v:
                    red[j] -= cb * v
    return red[:width]


def _run(T: list, basis: list, cost: list, allowed: Sequence[bool]) -> str:
    """Bland's-rule simplex on tableau T (last column = rhs)."""
    red = _reduced_costs(T, basis, cost)
    ncols = len(cost)
    while True:
        enter = next((j for j in range(ncols) if allowed[j] and red[j] < 0), None)
        if enter is None:
            return OPTIMAL
        best = None
        for i, row in enumerate(T):
            a = row[enter]
            if a > 0:
                ratio = row[-1] / a
                if best is None or ratio < best[0] or (ratio == best[0] and basis[i] < basis[best[1]]):
                    best = (ratio, i)
        if best is None:
            return UNBOUNDED
        leave = best[1]
        _pivot(T, red, leave, enter)
        basis[leave] = enter


def solve_lp(lp: LinearProgram) -> LPSolution:
    nrows, nvars = lp.shape
    sign = 1 if not lp.maximize else -1

    # Standard form columns: x+ (and x- for free vars), then slacks, then artificials.
    col_of = []
    cost = []
    for j in range(nvars):
        c = sign * lp.objective[j]
        pos = len(cost)
        cost.append(c)
        neg = None
        if lp.free[j]:
            neg = len(cost)
            cost.append(-c)
        col_of.append((pos, neg))
    n_struct = len(cost)

    rows = []
    row_sign = []
    slack_col = []
    for i in range(nrows):
        row = [Fraction(0)] * n_struct
        for j, a in enumerate(lp.matrix[i]):
            if a:
                pos, neg = col_of[j]
                row[pos] = a
                if neg is not None:
                    row[neg] = -a
        rows.append(row)
        s = -1 if lp.rhs[i] < 0 else 1
        row_sign.append(s)
        slack_col.append(None)

    ncols = n_struct
    slack_entries = []
    for i, sense in enumerate(lp.senses):
        if sense != EQ:
            slack_entries.append((i, ncols, Fraction(1 if sense == LE else -1)))
            slack_col[i] = ncols
            ncols += 1
            cost.append(Fraction(0))

    init_col = [None] * nrows
    for i, col, coef in slack_entries:
        if coef * row_sign[i] == 1:
            init_col[i] = col
    artificial = []
    for i in range(nrows):
        if init_col[i] is None:
            init_col[i] = ncols
            artificial.append(ncols)
            ncols += 1
            cost.append(Fraction(0))
    is_art = [False] * ncols
    for col in artificial:
        is_art[col] = True

    T = []
    for i in range(nrows):
        full = rows[i] + [Fraction(0)] * (ncols - n_struct)
        for r, col, coef in slack_entries:
            if r == i:
                full[col] = coef
        if is_art[init_col[i]]:
            full[init_col[i]] = Fraction(row_sign[i])
        s = row_sign[i]
        T.append([s * v if v else v for v in full] + [s * lp.rhs[i]])
    basis = list(init_col)

    if artificial:
        phase1 = [Fraction(int(a)) for a in is_art]
        _run(T, basis, phase1, [True] * ncols)
        if sum((T[i][-1] for i in range(nrows) if is_art[basis[i]]), Fraction(0)) > 0:
            return LPSolution(INFEASIBLE)
        for i in range(nrows):
            if is_art[basis[i]]:
                col = next((j for j in range(ncols) if not is_art[j] and T[i][j]), None)
                if col is not None:
                    _pivot(T, [Fraction(0)] * (ncols + 1), i, col)
                    basis[i] = col

    status = _run(T, basis, cost, [not a for a in is_art])
    if status != OPTIMAL:
        return LPSolution(status)

    std = [Fraction(0)] * ncols
    for i, bi in enumerate(basis):
        std[bi] = T[i][-1]
    x = tuple(std[pos] - (std[neg] if neg is not None else 0) for pos, neg in col_of)

    y = []
    for i in range(nrows):
        col = init_col[i]
        yi = sum((cost[basis[k]] * T[k][col] for k in range(nrows) if T[k][col]), Fraction(0))
        y.append(sign * row_sign[i] * yi)
    value = sum((c * v for c, v in zip(lp.objective, x)), Fraction(0))
    sol = LPSolution(OPTIMAL, x, tuple(y), value)
    certify(lp, sol)
    return sol


def certify(lp: LinearProgram, sol: LPSolution) -> None:
    """Check primal/dual feasibility and objective equality exactly."""
    A, b, x, y = lp.matrix, lp.rhs, sol.x, sol.y
    for j, v in enumerate(x):
        if not lp.free[j] and v < 0:
            raise SolverDefect(f"primal variable {j} negative")
    for i, row in enumerate(A):
        lhs = sum((a * v for a, v in zip(row, x) if a), Fraction(0))
        sense = lp.senses[i]
        if (sense == LE and lhs > b[i]) or (sense == GE and lhs < b[i]) or (sense == EQ and lhs != b[i]):
            raise SolverDefect(f"primal row {i} violated")
    # Normalise to the min convention: y <= 0 on <=, y >= 0 on >=, A^T y <= c.
    sgn = -1 if lp.maximize else 1
    for i, sense in enumerate(lp.senses):
        yi = sgn * y[i]
        if (sense == LE and yi > 0) or (sense == GE and yi < 0):
            raise SolverDefect(f"dual variable {i} has the wrong sign")
    for j in range(len(x)):
        aty = sum((A[i][j] * y[i] for i in range(len(A)) if A[i][j]), Fraction(0))
        slack = sgn * (lp.objective[j] - aty)
        if (lp.free[j] and slack != 0) or slack < 0:
            raise SolverDefect(f"dual constraint {j} violated")
    dual_value = sum((bi * yi for bi, yi in zip(b, y)), Fraction(0))
    if dual_value != sol.value:
        raise SolverDefect(f"primal {sol.value} != dual {dual_value}")


def chebyshev_values(n: int, degree: int) -> list:
    """``rows[m][i] = T_i(2m/n - 1)`` for m = 0..n, i = 0..degree."""
    if n < 1:
        raise ValueError("need n >= 1")
    out = []
    for m in range(n + 1):
        s = Fraction(2 * m - n, n)
        vals = [Fraction(1), s][: degree + 1]
        while len(vals) <= degree:
            vals.append(2 * s * vals[-1] - vals[-2])
        out.append(vals)
    return out


def or_predicate(n: int) -> tuple:
    """d(0) = 0, d(m) = 1 for m >= 1: the OR of all n variables by weight."""
    return (0,) + (1,) * n


@dataclass(frozen=True)
class UniformApproxResult:
    predicate: tuple
    degree: int
    eps_star: Fraction
    poly: UnivariatePoly
    dual: tuple

    @property
    def n(self) -> int:
        return len(self.predicate) - 1

    def to_json(self) -> dict:
        return {
            "type": "uniform_approx",
            "n": self.n,
            "degree": self.degree,
            "predicate": list(self.predicate),
            "eps_star": to_str(self.eps_star),
            "poly": self.poly.to_json(),
            "dual": to_strs(self.dual),
        }

    @classmethod
    def from_json(cls, obj: dict) -> "UniformApproxResult":
        return cls(
            tuple(obj["predicate"]),
            int(obj["degree"]),
            Fraction(obj["eps_star"]),
            UnivariatePoly.from_json(obj["poly"]),
            tuple(from_strs(obj["dual"])),
        )


def _check_predicate(d: Sequence[int], r: int) -> int:
    n = len(d) - 1
    if n < 1:
        raise ValueError("predicate needs at least two points")
    if any(v not in (0, 1) for v in d):
        raise ValueError("predicate values must be 0 or 1")
    if not 0 <= r <= n:
        raise ValueError(f"degree {r} outside 0..{n}")
    return n


def best_uniform_approx(d: Sequence[int], r: int) -> UniformApproxResult:
    """Minimax degree-r approximation of d on {0..n} with its dual certificate.

    Variables: Chebyshev coefficients (free) and the error level eps.  Each
    point m contributes ``eps + f(m) >= d(m)`` and ``eps - f(m) >= -d(m)``;
    the certificate is beta_m = y_plus_m - y_minus_m.
    """
    n = _check_predicate(d, r)
    B = chebyshev_values(n, r)
    k = r + 1
    matrix, rhs = [], []
    for m in range(n + 1):
        matrix.append([1] + B[m])
        rhs.append(d[m])
        matrix.append([1] + [-v for v in B[m]])
        rhs.append(-d[m])
    lp = LinearProgram(
        objective=(1,) + (0,) * k,
        matrix=tuple(tuple(row) for row in matrix),
        senses=(GE,) * len(matrix),
        rhs=tuple(rhs),
        free=(False,) + (True,) * k,
    )
    sol = solve_lp(lp)
    if sol.status != OPTIMAL:
        raise SolverDefect(f"uniform approximation LP reported {sol.status}")
    beta = tuple(sol.y[2 * m] - sol.y[2 * m + 1] for m in range(n + 1))
    poly = UnivariatePoly(sol.x[1:], CHEBYSHEV, n)
    return UniformApproxResult(tuple(int(v) for v in d), r, sol.value, poly, beta)


def dual_moments(res: UniformApproxResult) -> list:
    """sum_m beta_m * T_i(m) for every basis polynomial of degree <= r."""
    B = chebyshev_values(res.n, res.degree)
    return [sum((b * B[m][i] for m, b in enumerate(res.dual)), Fraction(0)) for i in range(res.degree + 1)]


def hard_distribution_from_dual(res: UniformApproxResult) -> WeightProfile:
    """Symmetric distribution with rho(m) = |beta_m|."""
    rho = tuple(abs(b) for b in res.dual)
    if sum(rho) != 1:
        raise ValueError(
            f"dual certificate has total mass {sum(rho)}, expected 1 "
            "(eps* = 0 admits no normalised certificate)"
        )
    return WeightProfile(res.n, rho)


def best_l1_approx(d: Sequence[int], profile: WeightProfile, r: int) -> tuple:
    """min over degree-<=r f of sum_m rho(m) |d(m) - f(m)|; returns (value, f).

    Points with rho(m) = 0 do not affect the objective and are left out.
    """
    n = _check_predicate(d, r)
    if profile.n != n:
        raise ValueError("profile and predicate dimensions differ")
    B = chebyshev_values(n, r)
    support = [m for m in range(n + 1) if profile.rho[m]]
    k = r + 1
    s = len(support)
    matrix, rhs = [], []
    for idx, m in enumerate(support):
        dev = [0] * s
        dev[idx] = 1
        matrix.append(B[m] + dev)
        rhs.append(d[m])
        matrix.append([-v for v in B[m]] + dev)
        rhs.append(-d[m])
    lp = LinearProgram(
        objective=(0,) * k + tuple(profile.rho[m] for m in support),
        matrix=tuple(tuple(row) for row in matrix),
        senses=(GE,) * len(matrix),
        rhs=tuple(rhs),
        free=(True,) * k + (False,) * s,
    )
    sol = solve_lp(lp)
    if sol.status != OPTIMAL:
        raise SolverDefect(f"l1 approximation LP reported {sol.status}")
    return sol.value, UnivariatePoly(sol.x[:k], CHEBYSHEV, n)


def averaged_polynomial_error(fp: Sequence, d: Sequence[int], profile: WeightProfile) -> Fraction:
    """E_{m~rho} |d(m) - f_p(m)| for a polynomial given by its layer averages."""
    if len(fp) != profile.n + 1 or len(d) != profile.n + 1:
        raise ValueError("layer vectors must have n + 1 entries")
    return sum(
        (rho * abs(d[m] - as_fraction(fp[m])) for m, rho in enumerate(profile.rho) if rho),
        Fraction(0),
    )


def layer_averages(p: Callable, n: int) -> list:
    """f_p(m) = average of p over the slice of weight m, by enumeration."""
    out = []
    for m in range(n + 1):
        total = sum((as_fraction(p(x)) for x in layer_points(n, m)), Fraction(0))
        out.append(total / binomial(n, m))
    return out
