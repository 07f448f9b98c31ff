"""Linear block codes over GF(q).

A code is described by an ``n x k`` generator matrix ``H`` whose entries are
field element codes (see :mod:`codespectra.gf`); codewords are ``H @ x`` for
``x`` in GF(q)^k.  Weight enumerators are exact Python integers.
"""
from __future__ import annotations

import math
import warnings
from fractions import Fraction
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import BudgetExceededError, CodeConstructionError
from .gf import FieldCtx

ENUM_BUDGET = 2**24
_CHUNK = 2**14
_BINARY_TABLE_BITS = 16


# -- linear algebra over GF(q) ---------------------------------------------

def rref(ctx: FieldCtx, M) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of ``M`` over ``ctx``; returns (R, pivot columns)."""
    R = np.array(M, dtype=np.int64, copy=True)
    if R.ndim != 2:
        raise ValueError("expected a 2-d matrix")
    rows, cols = R.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + nz[0]
        if piv != r:
            R[[r, piv]] = R[[piv, r]]
        R[r] = ctx.mul_arr(R[r], ctx.inv(int(R[r, c])))
        others = np.nonzero(R[:, c])[0]
        others = others[others != r]
        if others.size:
            factors = ctx.neg_arr(R[others, c])
            R[others] = ctx.add_arr(R[others], ctx.mul_arr(factors[:, None], R[r][None, :]))
        pivots.append(c)
        r += 1
    return R, pivots


def rank(ctx: FieldCtx, M) -> int:
    return len(rref(ctx, M)[1])


def null_space(ctx: FieldCtx, M) -> np.ndarray:
    """Basis of {y : M @ y = 0}, one basis vector per column."""
    R, pivots = rref(ctx, M)
    cols = R.shape[1]
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((cols, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        basis[f, j] = 1
        for i, pc in enumerate(pivots):
            basis[pc, j] = ctx.neg(int(R[i, f]))
    return basis


def encode(ctx: FieldCtx, gen: np.ndarray, X: np.ndarray) -> np.ndarray:
    """Codewords ``gen @ x`` for each row ``x`` of ``X``; returns shape (len(X), n)."""
    X = np.atleast_2d(np.asarray(X, dtype=np.int64))
    if ctx.m == 1:
        # exact in float64: entries stay below k * l**2
        prod = X.astype(np.float64) @ gen.T.astype(np.float64)
        return prod.astype(np.int64) % ctx.l
    out = np.zeros((X.shape[0], gen.shape[0]), dtype=np.int64)
    for j in range(gen.shape[1]):
        out = ctx.add_arr(out, ctx.mul_arr(X[:, j][:, None], gen[:, j][None, :]))
    return out


def _index_digits(idx: np.ndarray, q: int, k: int) -> np.ndarray:
    """Rows x with x[0] most significant, so that index order is lexicographic."""
    out = np.empty((idx.size, k), dtype=np.int64)
    rem = idx.copy()
    for j in range(k - 1, -1, -1):
        out[:, j] = rem % q
        rem //= q
    return out


# -- MacWilliams -----------------------------------------------------------------

def krawtchouk_column(n: int, q: int, i: int) -> list[int]:
    """K_j(i) for j = 0..n via the three-term recurrence in j."""
    K = [1]
    if n >= 1:
        K.append((q - 1) * n - q * i)
    for j in range(1, n):
        num = (j + (q - 1) * (n - j) - q * i) * K[j] - (q - 1) * (n - j + 1) * K[j - 1]
        if num % (j + 1):
            raise AssertionError("Krawtchouk recurrence lost integrality")
        K.append(num // (j + 1))
    return K


def macwilliams_transform(weights, n: int, k: int, q: int) -> list[int]:
    """Weight distribution of the dual of a ``[n, k]`` code over GF(q)."""
    weights = [int(w) for w in weights]
    if len(weights) != n + 1:
        raise ValueError(f"expected {n + 1} weight counts, got {len(weights)}")
    if any(w < 0 for w in weights) or sum(weights) != q**k:
        raise ValueError("weights must be nonnegative and sum to q**k")
    total = [0] * (n + 1)
    for i, A in enumerate(weights):
        if A:
            for j, K in enumerate(krawtchouk_column(n, q, i)):
                total[j] += A * K
    size = q**k
    out = []
    for t in total:
        b = Fraction(t, size)
        if b.denominator != 1 or b < 0:
            raise ValueError("input is not the weight enumerator of a linear code")
        out.append(int(b))
    return out


# -- codes ---------------------------------------------------------------------------

class LinearCode:
    """An ``[n, k]`` linear code over GF(q) given by its ``n x k`` generator matrix."""

    def __init__(self, ctx: FieldCtx, gen, name: str = "custom"):
        gen = np.array(gen, dtype=np.int64)
        if gen.ndim != 2:
            raise CodeConstructionError("generator must be a 2-d matrix")
        n, k = gen.shape
        if k < 1:
            raise CodeConstructionError("dimension k must be >= 1")
        if n <= k:
            raise CodeConstructionError(f"need n > k, got n={n}, k={k}")
        if gen.min() < 0 or gen.max() >= ctx.q:
            raise CodeConstructionError(f"entries must be element codes of GF({ctx.q})")
        if rank(ctx, gen) != k:
            raise CodeConstructionError("generator matrix is rank deficient")
        gen.setflags(write=False)
        self.ctx = ctx
        self.gen = gen
        self.n = n
        self.k = k
        self.name = name
        self.distinct_rows = len({tuple(r) for r in gen}) == n and not np.any(
            ~gen.any(axis=1)
        )
        if not self.distinct_rows:
            warnings.warn(
                f"{name}: generator rows are not pairwise distinct and nonzero",
                stacklevel=2,
            )

    def __repr__(self):
        return f"LinearCode({self.name}, n={self.n}, k={self.k}, q={self.ctx.q})"

    @property
    def q(self) -> int:
        return self.ctx.q

    @property
    def size(self) -> int:
        return self.ctx.q**self.k

    def encode(self, X) -> np.ndarray:
        return encode(self.ctx, self.gen, X)

    @cached_property
    def dual(self) -> "LinearCode":
        basis = null_space(self.ctx, self.gen.T)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            return LinearCode(self.ctx, basis, name=f"dual({self.name})")

    @cached_property
    def weight_enumerator(self) -> list[int]:
        return weight_distribution(self)

    @cached_property
    def dual_weight_enumerator(self) -> list[int]:
        return macwilliams_transform(self.weight_enumerator, self.n, self.k, self.q)

    @property
    def d(self) -> int:
        return min(w for w, a in enumerate(self.weight_enumerator) if w and a)

    @property
    def d_dual(self) -> int:
        return dual_distance(self)

    @property
    def A4_dual(self) -> int:
        return count_weight4_dual(self)


def code_from_matrix(ctx: FieldCtx, rows, name: str = "custom") -> LinearCode:
    rows = [list(r) for r in rows]
    if not rows:
        raise CodeConstructionError("empty generator matrix")
    k = len(rows[0])
    if any(len(r) != k for r in rows):
        raise CodeConstructionError("all generator rows must have length k")
    return LinearCode(ctx, rows, name=name)


def read_generator_file(path) -> LinearCode:
    """Parse ``q n k`` then ``n`` rows of ``k`` entries.

    Entries are single digits when ``q <= 10`` and may be glued together
    (``0110``); otherwise they must be whitespace separated.  Only prime ``q``
    or ``q = 2**m`` (pinned modulus) are accepted.
    """
    lines = [
        ln.split("#", 1)[0].strip()
        for ln in Path(path).read_text().splitlines()
    ]
    lines = [ln for ln in lines if ln]
    if not lines:
        raise CodeConstructionError(f"{path}: empty file")
    try:
        q, n, k = (int(t) for t in lines[0].split())
    except ValueError as exc:
        raise CodeConstructionError(f"{path}: bad header {lines[0]!r}") from exc
    ctx = _ctx_for_size(q)
    body = lines[1:]
    if len(body) != n:
        raise CodeConstructionError(f"{path}: expected {n} rows, found {len(body)}")
    rows = []
    for ln in body:
        toks = ln.split()
        if len(toks) == 1 and q <= 10 and len(toks[0]) == k:
            toks = list(toks[0])
        if len(toks) != k:
            raise CodeConstructionError(f"{path}: row {ln!r} does not have {k} entries")
        rows.append([int(t) for t in toks])
    return code_from_matrix(ctx, rows, name=Path(path).name)


def write_generator_file(code: LinearCode, path) -> None:
    sep = "" if code.q <= 10 else " "
    lines = [f"{code.q} {code.n} {code.k}"]
    lines += [sep.join(str(int(v)) for v in row) for row in code.gen]
    Path(path).write_text("\n".join(lines) + "\n")


def _ctx_for_size(q: int) -> FieldCtx:
    for l in range(2, q + 1):
        if q % l == 0:
            m = round(math.log(q, l))
            if l**m != q:
                break
            return FieldCtx(l, m)
    raise CodeConstructionError(f"{q} is not a prime power")


# -- enumeration ---------------------------------------------------------------

def enumerate_codewords(code: LinearCode, budget: int = ENUM_BUDGET):
    """Yield every codeword ``H @ x`` with ``x`` in lexicographic order."""
    if code.size > budget:
        raise BudgetExceededError(
            f"{code.name}: q**k = {code.size} codewords exceed the enumeration budget "
            f"{budget}; use ensemble.sample_matrix instead"
        )
    for start in range(0, code.size, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, code.size), dtype=np.int64)
        yield from code.encode(_index_digits(idx, code.q, code.k))


def _binary_weight_counts(code: LinearCode) -> list[int]:
    # codewords are XORs of the k basis words; split x into a low table and high prefixes
    basis = np.ascontiguousarray(code.gen.T, dtype=np.uint8)
    packed = np.packbits(basis, axis=1)
    pad = (-packed.shape[1]) % 8
    packed = np.ascontiguousarray(np.pad(packed, ((0, 0), (0, pad)))).view(np.uint64)
    low = min(code.k, _BINARY_TABLE_BITS)
    table = np.zeros((1, packed.shape[1]), dtype=np.uint64)
    for j in range(low):
        table = np.concatenate([table, table ^ packed[j]])
    counts = np.zeros(code.n + 1, dtype=np.int64)
    for hi in range(2 ** (code.k - low)):
        prefix = np.zeros(packed.shape[1], dtype=np.uint64)
        for j in range(code.k - low):
            if hi >> j & 1:
                prefix ^= packed[low + j]
        w = np.bitwise_count(table ^ prefix).sum(axis=1)
        counts += np.bincount(w, minlength=code.n + 1)
    return [int(c) for c in counts]


def _enumerated_weights(code: LinearCode) -> list[int]:
    if code.q == 2:
        return _binary_weight_counts(code)
    counts = np.zeros(code.n + 1, dtype=np.int64)
    for start in range(0, code.size, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, code.size), dtype=np.int64)
        words = code.encode(_index_digits(idx, code.q, code.k))
        counts += np.bincount(np.count_nonzero(words, axis=1), minlength=code.n + 1)
    return [int(c) for c in counts]


def weight_distribution(code: LinearCode, budget: int = ENUM_BUDGET) -> list[int]:
    """A_0..A_n, enumerating whichever of the code and its dual is smaller."""
    dual_size = code.q ** (code.n - code.k)
    if code.size <= budget and (code.k <= code.n - code.k or dual_size > budget):
        weights = _enumerated_weights(code)
    elif dual_size <= budget:
        dual_weights = _enumerated_weights(code.dual)
        weights = macwilliams_transform(dual_weights, code.n, code.n - code.k, code.q)
    else:
        raise BudgetExceededError(
            f"{code.name}: both q**k and q**(n-k) exceed the enumeration budget {budget}"
        )
    if weights[0] != 1 or sum(weights) != code.size:
        raise AssertionError("weight enumeration is inconsistent")
    return weights


def dual_distance(code: LinearCode) -> int:
    return min(w for w, b in enumerate(code.dual_weight_enumerator) if w and b)


def count_weight4_dual(code: LinearCode) -> int:
    B = code.dual_weight_enumerator
    return B[4] if len(B) > 4 else 0


def binary_dual_distance_at_least_5(gen) -> bool:
    """True iff no 1, 2, 3 or 4 rows of a binary generator sum to zero.

    Works without enumerating codewords: rows must be nonzero and distinct and
    the pairwise sums ``h_a + h_b`` (a < b) must avoid each other and the rows.
    """
    gen = np.asarray(gen)
    if gen.shape[1] > 63:
        raise ValueError("row packing supports k <= 63")
    weights = 1 << np.arange(gen.shape[1], dtype=np.int64)
    rows = (gen.astype(np.int64) * weights).sum(axis=1)
    if np.any(rows == 0) or np.unique(rows).size != rows.size:
        return False
    n = rows.size
    sums = np.empty(n * (n - 1) // 2, dtype=np.int64)
    pos = 0
    for a in range(n - 1):
        sums[pos : pos + n - 1 - a] = rows[a] ^ rows[a + 1 :]
        pos += n - 1 - a
    sums.sort()
    if np.any(sums[1:] == sums[:-1]):
        return False
    return not np.isin(rows, sums).any()


# -- built-in codes ------------------------------------------------------------

def repetition_code(n: int) -> LinearCode:
    if n < 2:
        raise ValueError("repetition code needs n >= 2")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        return LinearCode(FieldCtx(2), np.ones((n, 1), dtype=np.int64), name=f"repetition[{n},1]")


def simplex_code(m: int) -> LinearCode:
    """The binary ``[2**m - 1, m]`` code whose generator rows are all nonzero vectors."""
    if not 2 <= m <= 16:
        raise ValueError(f"simplex_code needs 2 <= m <= 16, got {m}")
    vals = np.arange(1, 2**m, dtype=np.int64)
    gen = (vals[:, None] >> np.arange(m)) & 1
    return LinearCode(FieldCtx(2), gen, name=f"simplex(m={m})")


def hamming_code(m: int) -> LinearCode:
    """The binary ``[2**m - 1, 2**m - 1 - m]`` Hamming code (dual of the simplex code)."""
    code = simplex_code(m).dual
    code.name = f"hamming(m={m})"
    return code


def gold_code(m: int) -> LinearCode:
    """The binary ``[2**m - 1, 2m]`` code spanned by the preferred pair (u, u[3]).

    Row ``t`` of the generator holds the GF(2) coordinates of
    ``(a, b) -> tr(a * alpha**t) + tr(b * alpha**(3t))`` in the polynomial
    basis, ``alpha`` being the root of the pinned primitive polynomial.  The
    dual distance is checked to be at least 5 before returning.
    """
    if m % 2 == 0:
        raise ValueError(f"Gold codes need odd m (preferred pair u, u[3]); got {m}")
    if not 3 <= m <= 13:
        raise ValueError(f"gold_code supports 3 <= m <= 13, got {m}")
    ctx = FieldCtx(2, m)
    n = 2**m - 1
    t = np.arange(n, dtype=np.int64)
    alpha_t = ctx.exp_table[t % n]
    alpha_3t = ctx.exp_table[(3 * t) % n]
    basis = 1 << np.arange(m, dtype=np.int64)
    tr = ctx.trace_table
    gen = np.concatenate(
        [
            tr[ctx.mul_arr(alpha_t[:, None], basis[None, :])],
            tr[ctx.mul_arr(alpha_3t[:, None], basis[None, :])],
        ],
        axis=1,
    )
    try:
        code = LinearCode(FieldCtx(2), gen, name=f"gold(m={m})")
    except CodeConstructionError as exc:
        raise CodeConstructionError(f"gold(m={m}): {exc}") from exc
    if code.size <= ENUM_BUDGET:
        ok = dual_distance(code) >= 5
    else:
        ok = binary_dual_distance_at_least_5(code.gen)
    if not ok:
        raise CodeConstructionError(f"gold(m={m}) has dual distance < 5; check the modulus")
    return code


def bch_dual_code() -> LinearCode:
    """The binary [15, 8] code whose dual is the [15, 7, 5] BCH code.

    Its dual distance is 5 with ``n = 15``, which makes it a second small test
    code for the W dichotomy next to ``gold_code(3)``.
    """
    g = [1, 0, 0, 0, 1, 0, 1, 1, 1]  # x^8 + x^7 + x^6 + x^4 + 1, low degree first
    bch = np.zeros((15, 7), dtype=np.int64)
    for j in range(7):
        bch[j : j + 9, j] = g
    ctx = FieldCtx(2)
    basis = null_space(ctx, bch.T)
    return LinearCode(ctx, basis, name="dual-bch[15,8]")


BUILTIN_CODES = {
    "gold": gold_code,
    "simplex": simplex_code,
    "hamming": hamming_code,
    "repetition": repetition_code,
}


def builtin_code(name: str, m: int | None = None) -> LinearCode:
    """Build a named code; ``m`` is the length parameter (repetition: ``n``)."""
    if name == "bch-dual":
        return bch_dual_code()
    if name not in BUILTIN_CODES:
        raise ValueError(f"unknown code {name!r}; choose from {sorted(BUILTIN_CODES) + ['bch-dual']}")
    if m is None:
        raise ValueError(f"code {name!r} needs the parameter m")
    return BUILTIN_CODES[name](m)
