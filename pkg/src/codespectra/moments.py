"""Spectral moments: Monte Carlo estimates, the MP main term and its error bound."""
from __future__ import annotations

import math
import warnings
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from .codes import ENUM_BUDGET, LinearCode, _index_digits
from .ensemble import GramMatrix, embed, gram, sample_matrix, trial_seed
from .errors import BudgetExceededError
from .spectra import SpectralSample, eigenvalues, mp_moment, mp_moment_exact

MAX_ORDER = 64
EXHAUSTIVE_BUDGET = 2**20


@dataclass
class MomentReport:
    l: int
    empirical_mean: float
    std_error: float | None
    trials: int
    main_term: float
    error_bound: float
    exact_expectation: float | None = None

    def to_dict(self) -> dict:
        return asdict(self)


def power_sums(sample: SpectralSample, l_max: int) -> np.ndarray:
    """(1/p) sum lambda**l for l = 0..l_max; order 1 uses the exact trace."""
    if l_max > MAX_ORDER:
        raise OverflowError(f"moment order {l_max} exceeds the guard {MAX_ORDER}")
    lam = sample.eigenvalues
    powers = np.vander(lam, l_max + 1, increasing=True)
    out = powers.mean(axis=0)
    if not np.all(np.isfinite(out)):
        raise OverflowError("moment overflowed double precision")
    out[0] = 1.0
    if l_max >= 1:
        # diagonal of G is exactly one, so A_1 = tr(G)/p = 1
        out[1] = 1.0
    return out


def empirical_moment(G: GramMatrix, l: int) -> float:
    if l < 0:
        raise ValueError("moment order must be nonnegative")
    if l == 0:
        return 1.0
    if l == 1:
        return float(np.trace(G.entries).real / G.p)
    return float(power_sums(eigenvalues(G), l)[l])


def moment_main_term(y: float, l: int) -> float:
    if l < 2:
        raise ValueError("the main term is stated for l >= 2")
    return mp_moment(y, l)


def c_A(A: int, q: int) -> float:
    """3 + 2 sqrt(2A/(q-1) + 1/4)."""
    if q < 2 or A < 0:
        raise ValueError("need q >= 2 and A >= 0")
    return 3 + 2 * math.sqrt(2 * A / (q - 1) + 0.25)


def el_bound(l: int, n: int, A: int, q: int = 2) -> float:
    """(c_A + 1) l**(l+1) / n, the bound on |E A_l - main term|."""
    if l < 2 or n < 1:
        raise ValueError("need l >= 2 and n >= 1")
    return (c_A(A, q) + 1) * l ** (l + 1) / n


def mp_centered_moment_exact(y, l: int) -> Fraction:
    return sum(
        (math.comb(l, t) * (-1) ** (l - t) * mp_moment_exact(y, t) for t in range(l + 1)),
        Fraction(0),
    )


def mp_centered_moment(y: float, l: int) -> float:
    """E (x - 1)**l for x ~ MP(y)."""
    if l < 0:
        raise ValueError("moment order must be nonnegative")
    return float(mp_centered_moment_exact(y, l))


def centered_moment_bound(y: float, l: int) -> float:
    """l**3 (8 e**2)**l y / (8 pi)."""
    return l**3 * (8 * math.e**2) ** l * y / (8 * math.pi)


def _trial_moments(code: LinearCode, p: int, l_max: int, seed: int) -> np.ndarray:
    return power_sums(eigenvalues(gram(sample_matrix(code, p, seed))), l_max)


def monte_carlo_moments(
    code: LinearCode,
    p: int,
    l_max: int,
    trials: int,
    seed: int,
    *,
    A: int | None = None,
    exact: bool = False,
    workers: int = 1,
) -> list[MomentReport]:
    """Mean and standard error of A_l(s), l = 2..l_max, over ``trials`` samples.

    ``A`` (weight-4 dual codewords) is taken from the dual enumerator when not
    given.  With ``exact=True`` each report also carries E A_l from the
    path-class sum.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if l_max < 2:
        raise ValueError("l_max must be >= 2")
    if l_max >= math.sqrt(p):
        warnings.warn(f"l_max={l_max} >= sqrt(p)={math.sqrt(p):.3f}: outside 2 <= l < sqrt(p)")
    if A is None:
        A = code.A4_dual
    seeds = [trial_seed(seed, t) for t in range(trials)]
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(workers) as pool:
            rows = list(
                pool.map(_trial_moments, [code] * trials, [p] * trials, [l_max] * trials, seeds)
            )
    else:
        rows = [_trial_moments(code, p, l_max, s) for s in seeds]
    data = np.array(rows)
    y = p / code.n
    reports = []
    for l in range(2, l_max + 1):
        col = data[:, l]
        se = float(col.std(ddof=1) / math.sqrt(trials)) if trials > 1 else None
        ex = None
        if exact:
            from .paths import exact_expected_moment

            ex = exact_expected_moment(code, p, l)
        reports.append(
            MomentReport(
                l=l,
                empirical_mean=float(col.mean()),
                std_error=se,
                trials=trials,
                main_term=moment_main_term(y, l),
                error_bound=el_bound(l, code.n, A, code.q),
                exact_expectation=ex,
            )
        )
    return reports


def exhaustive_moment(code: LinearCode, p: int, l: int, budget: int = EXHAUSTIVE_BUDGET) -> float:
    """E A_l averaged over every map s: [1, p] -> codewords (N**p terms)."""
    N = code.size
    if N**p > budget:
        raise BudgetExceededError(f"N**p = {N}**{p} exceeds the exhaustive budget {budget}")
    if N > ENUM_BUDGET:
        raise BudgetExceededError("too many codewords")
    if l == 0:
        return 1.0
    words = code.encode(_index_digits(np.arange(N, dtype=np.int64), code.q, code.k))
    emb = embed(words, code.ctx)
    ip = emb @ emb.conj().T  # <c_a, c_b> for all codeword pairs
    binary = code.q == 2
    chunk = max(1, 2**16 // (p * p))
    if binary:
        ip = np.rint(ip.real).astype(np.int64)
        if (p * code.n) ** l * chunk >= 2**62:
            ip = ip.astype(object)
    total = 0 if binary else 0.0
    count = N**p
    for start in range(0, count, chunk):
        block = _index_digits(np.arange(start, min(start + chunk, count), dtype=np.int64), N, p)
        M = ip[block[:, :, None], block[:, None, :]]
        P = M
        for _ in range(l - 1):
            P = P @ M
        tr = np.trace(P, axis1=1, axis2=2)
        total += int(tr.sum()) if binary else complex(tr.sum()).real
    if binary:
        return float(Fraction(total, p * code.n**l * count))
    return total / (p * code.n**l * count)
