"""Closed-path classes, their reduction, and the solution counts W.

A class of closed paths of length ``l`` (up to relabelling the visited
vertices) is a set partition of the cyclic index set {0, ..., l-1}; it is
stored as a restricted-growth string ``labels`` with ``labels[u]`` the block
of index ``u``.  Index arithmetic is always mod ``l``, so ``l-1`` and ``0``
are neighbours.

For a code with generator rows ``h_1..h_n``, ``W`` counts the tuples
``(t_0, ..., t_{l-1})`` in [1, n]^l with
``sum_{u in I_a} (h_{t_u} - h_{t_{u-1}}) = 0`` for every block ``I_a``.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .codes import LinearCode
from .errors import BudgetExceededError
from .moments import c_A

MAX_PATH_LENGTH = 10
W_BUDGET = 10**8
_STATE_CHUNK = 2**15


def canonical_labels(labels) -> tuple[int, ...]:
    """Relabel blocks in order of first occurrence."""
    seen: dict[int, int] = {}
    return tuple(seen.setdefault(x, len(seen)) for x in labels)


@dataclass(frozen=True)
class PathClass:
    labels: tuple[int, ...]

    def __post_init__(self):
        if canonical_labels(self.labels) != tuple(self.labels):
            raise ValueError(f"labels {self.labels} are not a restricted-growth string")

    @classmethod
    def from_labels(cls, labels) -> "PathClass":
        return cls(canonical_labels(labels))

    @classmethod
    def from_blocks(cls, blocks) -> "PathClass":
        l = sum(len(b) for b in blocks)
        labels = [-1] * l
        for a, block in enumerate(blocks):
            for u in block:
                if not 0 <= u < l or labels[u] != -1:
                    raise ValueError(f"blocks {blocks} do not partition range({l})")
                labels[u] = a
        if -1 in labels:
            raise ValueError(f"blocks {blocks} do not partition range({l})")
        return cls.from_labels(labels)

    @property
    def l(self) -> int:
        return len(self.labels)

    @property
    def v(self) -> int:
        return max(self.labels) + 1

    @property
    def blocks(self) -> tuple[tuple[int, ...], ...]:
        out: list[list[int]] = [[] for _ in range(self.v)]
        for u, a in enumerate(self.labels):
            out[a].append(u)
        return tuple(tuple(b) for b in out)

    def __str__(self):
        return "{" + ", ".join("{" + ",".join(map(str, b)) + "}" for b in self.blocks) + "}"


def enumerate_path_classes(l: int):
    """Every set partition of {0..l-1}, as restricted-growth strings in lexicographic order."""
    if not 1 <= l <= MAX_PATH_LENGTH:
        raise BudgetExceededError(f"path length must lie in [1, {MAX_PATH_LENGTH}], got {l}")

    def grow(prefix, top):
        if len(prefix) == l:
            yield PathClass(tuple(prefix))
            return
        for a in range(top + 2):
            prefix.append(a)
            yield from grow(prefix, max(top, a))
            prefix.pop()

    yield from grow([0], 0)


def bell_number(l: int) -> int:
    row = [1]
    for _ in range(l):
        nxt = [row[-1]]
        for x in row:
            nxt.append(nxt[-1] + x)
        row = nxt
    return row[0]


def is_reduced(path: PathClass) -> bool:
    l, v, lab = path.l, path.v, path.labels
    if l == 1:
        return True
    if v < 2:
        return False
    sizes = [0] * v
    for a in lab:
        sizes[a] += 1
    if min(sizes) < 2:
        return False
    return all(lab[u] != lab[(u + 1) % l] for u in range(l))


# -- reduction -------------------------------------------------------------------

@dataclass
class ReductionTrace:
    """Steps ``(case, index)`` taken, in order, and the resulting path.

    ``final`` is ``None`` for the empty path left when a leaf is removed from
    a path of length 2; by convention it has ``final_l == 0``, ``final_v == 1``
    and ``W == 1``.
    """

    start: PathClass
    steps: list[tuple[int, int]] = field(default_factory=list)
    final: PathClass | None = None

    @property
    def case_counts(self) -> tuple[int, int, int]:
        return tuple(sum(1 for c, _ in self.steps if c == k) for k in (1, 2, 3))

    @property
    def final_l(self) -> int:
        return 0 if self.final is None else self.final.l

    @property
    def final_v(self) -> int:
        return 1 if self.final is None else self.final.v

    @property
    def n_exponent(self) -> int:
        """W(start) = n**n_exponent * W(final)."""
        u, v, _ = self.case_counts
        return u + v

    @property
    def in_gamma(self) -> bool:
        return self.final_l <= 1


def _moves(lab: tuple[int, ...]) -> list[tuple[int, int]]:
    l = len(lab)
    if l <= 1:
        return []
    moves = [(1, u) for u in range(l) if lab[u] == lab[(u + 1) % l]]
    counts: dict[int, int] = {}
    for a in lab:
        counts[a] = counts.get(a, 0) + 1
    for u in range(l):
        if counts[lab[u]] != 1:
            continue
        left, right = lab[(u - 1) % l], lab[(u + 1) % l]
        if left == right:
            moves.append((2, u))
        elif l >= 3:
            moves.append((3, u))
    moves.sort()
    return moves


def _apply(lab: tuple[int, ...], case: int, u: int) -> tuple[int, ...]:
    l = len(lab)
    if case == 2:
        drop = {u, (u + 1) % l}
    else:
        drop = {u}
    return canonical_labels(x for i, x in enumerate(lab) if i not in drop)


def reduce(path: PathClass, rng: random.Random | None = None) -> ReductionTrace:
    """Apply Cases 1-3 until none applies.

    Without ``rng`` the first applicable move is taken (Case 1 before 2
    before 3, lowest index first); with ``rng`` a random applicable move is
    chosen at each step.
    """
    trace = ReductionTrace(path)
    lab = path.labels
    while True:
        moves = _moves(lab)
        if not moves:
            break
        case, u = rng.choice(moves) if rng is not None else moves[0]
        trace.steps.append((case, u))
        lab = _apply(lab, case, u)
        if not lab:
            break
    trace.final = PathClass(lab) if lab else None
    return trace


def in_gamma(path: PathClass) -> bool:
    return reduce(path).in_gamma


def count_gamma(l: int, v: int) -> int:
    """Narayana number (1/v) C(l, v-1) C(l-1, v-1)."""
    if not 1 <= v <= l:
        raise ValueError(f"need 1 <= v <= l, got l={l}, v={v}")
    num = math.comb(l, v - 1) * math.comb(l - 1, v - 1)
    if num % v:
        raise AssertionError("Narayana number is not integral")
    return num // v


def count_gamma_exhaustive(l: int) -> dict[int, int]:
    """Number of classes in Gamma for each v, by enumerating all classes."""
    out = {v: 0 for v in range(1, l + 1)}
    for path in enumerate_path_classes(l):
        if in_gamma(path):
            out[path.v] += 1
    return out


# -- W -------------------------------------------------------------------------------

def _row_vectors(code: LinearCode) -> np.ndarray:
    """Generator rows over the prime field, shape (n, k*m)."""
    return code.ctx.to_prime_digits(code.gen).reshape(code.n, -1)


def brute_force_W(path: PathClass, code: LinearCode, budget: int = W_BUDGET) -> int:
    """Exact count of the tuples solving the block equations.

    The tuples are enumerated one coordinate at a time.  Choosing ``t_j``
    adds ``h_{t_j}`` to the block of ``j`` and subtracts it from the block of
    ``j+1``; partial tuples are pruned as soon as a block's equation is
    complete and nonzero, and partial tuples with identical block sums are
    merged with multiplicities.
    """
    l, lab, n = path.l, path.labels, code.n
    if n**l > budget:
        raise BudgetExceededError(f"n**l = {n}**{l} exceeds the W budget {budget}")
    H = _row_vectors(code)
    char = code.ctx.l
    v = path.v
    done_at = [-1] * v
    for u in range(l):
        done_at[lab[u]] = max(done_at[lab[u]], u, (u - 1) % l)

    binary = char == 2 and H.shape[1] <= 62
    if binary:
        rows = (H.astype(np.int64) << np.arange(H.shape[1], dtype=np.int64)).sum(axis=1)
        states = np.zeros((1, v), dtype=np.int64)
    else:
        rows = H.astype(np.int64)
        states = np.zeros((1, v, H.shape[1]), dtype=np.int64)
    counts = np.ones(1, dtype=np.int64)

    for j in range(l):
        a, b = lab[j], lab[(j + 1) % l]
        closing = [c for c in range(v) if done_at[c] == j]
        new_states, new_counts = [], []
        for s in range(0, len(states), _STATE_CHUNK):
            st = states[s : s + _STATE_CHUNK]
            cnt = counts[s : s + _STATE_CHUNK]
            ext = np.repeat(st, n, axis=0)
            tile = np.tile(rows, (len(st),) + (1,) * (rows.ndim - 1))
            if binary:
                ext[:, a] ^= tile
                ext[:, b] ^= tile
                keep = np.all(ext[:, closing] == 0, axis=1) if closing else slice(None)
            else:
                ext[:, a] = (ext[:, a] + tile) % char
                ext[:, b] = (ext[:, b] - tile) % char
                keep = np.all(ext[:, closing] == 0, axis=(1, 2)) if closing else slice(None)
            new_states.append(ext[keep])
            new_counts.append(np.repeat(cnt, n)[keep])
        states = np.concatenate(new_states)
        counts = np.concatenate(new_counts)
        if len(states) == 0:
            return 0
        flat = states.reshape(len(states), -1)
        uniq, inverse = np.unique(flat, axis=0, return_inverse=True)
        merged = np.zeros(len(uniq), dtype=np.int64)
        np.add.at(merged, inverse.ravel(), counts)
        states = uniq.reshape((len(uniq),) + states.shape[1:])
        counts = merged
    return int(counts.sum())


def naive_W(path: PathClass, code: LinearCode) -> int:
    """Reference count by plain enumeration of [1, n]^l; tiny cases only."""
    from itertools import product

    H = _row_vectors(code)
    char = code.ctx.l
    l, lab = path.l, path.labels
    total = 0
    for t in product(range(code.n), repeat=l):
        sums = np.zeros((path.v, H.shape[1]), dtype=np.int64)
        for u in range(l):
            sums[lab[u]] += H[t[u]] - H[t[(u - 1) % l]]
        total += not np.any(sums % char)
    return total


def _rotation_key(labels: tuple[int, ...]) -> tuple[int, ...]:
    l = len(labels)
    return min(canonical_labels(labels[r:] + labels[:r]) for r in range(l))


def exact_expected_moment(code: LinearCode, p: int, l: int, budget: int = W_BUDGET) -> float:
    """E A_l = (1/(p n^l)) sum over classes of p!/(p-v)! * W, evaluated exactly."""
    if l == 0:
        return 1.0
    n = code.n
    cache: dict[tuple[int, ...], int] = {}
    total = Fraction(0)
    for path in enumerate_path_classes(l):
        if path.v > p:
            continue
        key = _rotation_key(path.labels)  # W is invariant under cyclic shifts
        if key not in cache:
            cache[key] = brute_force_W(path, code, budget)
        total += math.perm(p, path.v) * cache[key]
    return float(total / (p * n**l))


def verify_class(path: PathClass, code: LinearCode | None = None, A: int | None = None,
                 budget: int = W_BUDGET) -> dict:
    """One record of the per-class report: reduction, Gamma membership, W check."""
    tr = reduce(path)
    rec = {
        "l": path.l,
        "v": path.v,
        "blocks": [list(b) for b in path.blocks],
        "reduced": is_reduced(path),
        "trace": [[c, u] for c, u in tr.steps],
        "case_counts": list(tr.case_counts),
        "final_l": tr.final_l,
        "final_v": tr.final_v,
        "in_gamma": tr.in_gamma,
    }
    if code is None:
        return rec
    n = code.n
    if A is None:
        A = code.A4_dual
    if n**path.l > budget:
        rec.update(W=None, predicted=None, bound=None, ok=None)
        return rec
    W = brute_force_W(path, code, budget)
    rec["W"] = W
    if tr.in_gamma:
        rec["predicted"] = n ** (path.l - path.v + 1)
        rec["bound"] = None
        rec["ok"] = W == rec["predicted"]
    else:
        rec["predicted"] = None
        rec["bound"] = c_A(A, code.q) * n ** (path.l - path.v)
        rec["ok"] = W <= rec["bound"]
    return rec
