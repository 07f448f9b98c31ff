"""How close do code-based Gram spectra get to Marchenko-Pastur?

Gold codes (dual distance 5) against simplex codes (dual distance 3) of the
same length, at aspect ratio y = 1/2.  The Gold column should shrink as m
grows; the simplex column should not.
"""
import numpy as np

from codespectra import MPLaw, eigenvalues, gold_code, gram, sample_matrix, simplex_code, sup_distance, trial_seed

TRIALS = 50
SEED = 7


def mean_sup(code, y=0.5):
    p = round(y * code.n)
    law = MPLaw(p / code.n)
    dists = []
    for t in range(TRIALS):
        G = gram(sample_matrix(code, p, trial_seed(SEED, t)))
        dists.append(sup_distance(eigenvalues(G), law))
    return np.mean(dists), np.std(dists, ddof=1)


print(f"{'m':>2} {'n':>5}   {'gold':>15}   {'simplex':>15}")
for m in (5, 7, 9, 11):
    g, gs = mean_sup(gold_code(m))
    s, ss = mean_sup(simplex_code(m))
    print(f"{m:>2} {2**m - 1:>5}   {g:.4f} +- {gs:.4f}   {s:.4f} +- {ss:.4f}")

# The simplex code has only m information bits, so its rank is at most m and
# most eigenvalues sit at zero.  That alone keeps the distance near 1 - m/p.
