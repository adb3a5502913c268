"""
A symmetric distribution that defeats low-degree polynomials
============================================================

The best uniform approximation of OR on {0..n} is a small LP.  Its dual
certificate, normalised, is a distribution over Hamming weights under which
no degree-r polynomial gets l1 error below the minimax error.
"""

from symdis.lpcore import (
    best_l1_approx,
    best_uniform_approx,
    hard_distribution_from_dual,
    or_predicate,
)

n = 16
d = or_predicate(n)
print(" r   eps*")
for r in range(9):
    res = best_uniform_approx(d, r)
    print(f"{r:2d}   {float(res.eps_star):.6f}   {res.eps_star}")

res = best_uniform_approx(d, 3)
D = hard_distribution_from_dual(res)
print("weights carrying mass:", [m for m, p in enumerate(D.rho) if p])

value, poly = best_l1_approx(d, D, 3)
print("best degree-3 l1 error under D:", value, "(equals eps*:", value == res.eps_star, ")")
