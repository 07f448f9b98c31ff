"""Spectral moments three ways.

For a code small enough to list every map s: [1, p] -> C, the exact mean
of A_l = tr(G^l)/p can be computed by brute force, by the sum over path
classes, and estimated by Monte Carlo.  The MP moment is the large-n limit.
"""
import warnings

from codespectra import exhaustive_moment, gold_code, monte_carlo_moments

code = gold_code(3)  # [7, 6], 64 codewords
p = 3

with warnings.catch_warnings():
    warnings.simplefilter("ignore")  # l >= sqrt(p) here, which is fine for a demo
    reports = monte_carlo_moments(code, p, 5, trials=4000, seed=1, exact=True)

print(f"{code.name}, p={p}, y={p / code.n:.3f}")
print(" l   brute force   path sum    Monte Carlo        MP limit   bound")
for r in reports:
    brute = exhaustive_moment(code, p, r.l)
    print(f"{r.l:>2}   {brute:11.6f}   {r.exact_expectation:9.6f}   "
          f"{r.empirical_mean:8.4f}+-{r.std_error:.4f}   {r.main_term:8.4f}   {r.error_bound:.1f}")

# A bigger code: only Monte Carlo is feasible, and l < sqrt(p) holds.
big = gold_code(9)
for r in monte_carlo_moments(big, 256, 4, trials=200, seed=2):
    print(f"{big.name} l={r.l}: {r.empirical_mean:.4f} vs MP {r.main_term:.4f}")
