"""Random matrices built from codewords, and their normalized Gram matrices.

Rows are drawn with replacement: each of the ``p`` rows is an independent,
uniformly random codeword ``H @ x``.

Seeding rule: row ``i`` of ``sample_matrix(code, p, seed)`` draws its message
``x`` from a Philox generator keyed by ``SeedSequence(seed, spawn_key=(i,))``.
Trial ``t`` of an experiment with master seed ``s`` uses the 64-bit seed
``trial_seed(s, t)``.  Both rules are independent of scheduling.
"""
from __future__ import annotations

import csv
from dataclasses import dataclass, field

import numpy as np

from .codes import LinearCode
from .gf import FieldCtx


@dataclass(frozen=True)
class SampledMatrix:
    rows: np.ndarray  # p x n; float64 (+-1) when l == 2, complex128 otherwise
    codewords: np.ndarray  # p x n field element codes
    seed: int
    code_id: str = "custom"

    @property
    def p(self) -> int:
        return self.rows.shape[0]

    @property
    def n(self) -> int:
        return self.rows.shape[1]

    @property
    def y(self) -> float:
        return self.p / self.n


@dataclass(frozen=True)
class GramMatrix:
    entries: np.ndarray
    n: int
    seed: int | None = None
    code_id: str = "custom"
    hermitian: bool = field(default=True)

    @property
    def p(self) -> int:
        return self.entries.shape[0]


def embed(codeword, ctx: FieldCtx) -> np.ndarray:
    """Apply the additive character to each coordinate of a codeword."""
    return ctx.character_arr(np.asarray(codeword, dtype=np.int64))


def trial_seed(master_seed: int, trial: int) -> int:
    ss = np.random.SeedSequence(master_seed, spawn_key=(trial,))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def _row_rng(seed: int, row: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed, spawn_key=(row,))))


def sample_messages(code: LinearCode, p: int, seed: int) -> np.ndarray:
    return np.stack([_row_rng(seed, i).integers(0, code.q, size=code.k) for i in range(p)])


def sample_matrix(code: LinearCode, p: int, seed: int) -> SampledMatrix:
    if not 1 <= p < code.n:
        raise ValueError(f"need 1 <= p < n = {code.n}, got p={p}")
    if not 0 <= seed < 2**64:
        raise ValueError("seed must be a 64-bit unsigned integer")
    words = code.encode(sample_messages(code, p, seed))
    return SampledMatrix(embed(words, code.ctx), words, seed, code.name)


def gram(mat: SampledMatrix) -> GramMatrix:
    """G = Phi Phi^* / n with an exactly unit diagonal."""
    rows = mat.rows
    if np.iscomplexobj(rows):
        G = rows @ rows.conj().T / mat.n
        G = (G + G.conj().T) / 2
    else:
        G = rows @ rows.T / mat.n
    np.fill_diagonal(G, 1.0)
    return GramMatrix(G, mat.n, mat.seed, mat.code_id)


def write_matrix_csv(mat: SampledMatrix, path) -> None:
    """Row-major CSV; complex entries are written as ``re,im`` pairs."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        for row in mat.rows:
            if np.iscomplexobj(row):
                w.writerow([v for z in row for v in (repr(float(z.real)), repr(float(z.imag)))])
            else:
                w.writerow([repr(float(v)) for v in row])
