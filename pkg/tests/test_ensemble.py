import cmath

import numpy as np
import pytest
from scipy import stats

from codespectra.codes import gold_code, repetition_code, simplex_code, code_from_matrix
from codespectra.ensemble import (
    SampledMatrix,
    embed,
    gram,
    sample_matrix,
    sample_messages,
    trial_seed,
    write_matrix_csv,
)
from codespectra.gf import FieldCtx


def test_embed_examples():
    assert embed([0, 0, 0], FieldCtx(2)).tolist() == [1, 1, 1]
    assert embed([1, 0, 1], FieldCtx(2)).tolist() == [-1, 1, -1]
    w = cmath.exp(2j * cmath.pi / 3)
    out = embed([1, 2], FieldCtx(3))
    assert np.allclose(out, [w, w * w], atol=1e-15)


def test_same_seed_same_matrix():
    code = gold_code(5)
    a, b = sample_matrix(code, 15, 99), sample_matrix(code, 15, 99)
    assert np.array_equal(a.rows, b.rows)
    assert not np.array_equal(a.rows, sample_matrix(code, 15, 100).rows)


def test_rows_do_not_depend_on_p():
    code = gold_code(5)
    short, long = sample_matrix(code, 5, 7), sample_matrix(code, 20, 7)
    assert np.array_equal(short.rows, long.rows[:5])


def test_gold_shape_and_entries():
    mat = sample_matrix(gold_code(5), 15, 3)
    assert mat.rows.shape == (15, 31)
    assert set(np.unique(mat.rows)) <= {-1.0, 1.0}
    assert mat.y == 15 / 31


def test_p_must_be_below_n():
    with pytest.raises(ValueError):
        sample_matrix(gold_code(3), 7, 0)
    with pytest.raises(ValueError):
        sample_matrix(gold_code(3), 2, -1)


def test_repetition_rows_are_fair_coin():
    code = repetition_code(3)
    first = []
    for s in range(5000):
        rows = sample_matrix(code, 2, s).rows
        assert np.all(rows == rows[:, :1])
        first.extend(rows[:, 0])
    counts = [first.count(1.0), first.count(-1.0)]
    assert sum(counts) == 10**4
    assert stats.chisquare(counts).pvalue > 0.001


def test_codeword_frequencies_are_uniform():
    code = gold_code(3)  # 64 codewords
    msgs = sample_messages(code, 10**5, 2024)
    idx = msgs @ (code.q ** np.arange(code.k)[::-1])
    freq = np.bincount(idx, minlength=code.size) / msgs.shape[0]
    pi = 1 / code.size
    sd = np.sqrt(pi * (1 - pi) / msgs.shape[0])
    assert np.all(np.abs(freq - pi) < 4 * sd)


def test_trial_seeds_distinct_and_stable():
    seeds = [trial_seed(5, t) for t in range(100)]
    assert len(set(seeds)) == 100
    assert seeds == [trial_seed(5, t) for t in range(100)]
    assert all(0 <= s < 2**64 for s in seeds)


def _mat(rows):
    rows = np.asarray(rows, dtype=float)
    return SampledMatrix(rows, (rows < 0).astype(int), 0)


def test_gram_examples():
    assert gram(_mat([[1, -1, 1]])).entries.tolist() == [[1.0]]
    G = gram(_mat([[1, -1, 1, 1], [1, -1, 1, 1]])).entries
    assert np.array_equal(G, np.ones((2, 2)))
    assert np.allclose(np.linalg.eigvalsh(G), [0, 2])
    G = gram(_mat([[1, 1, 1, 1], [1, -1, 1, -1]])).entries
    assert np.array_equal(G, np.eye(2))


@pytest.mark.parametrize("code", [gold_code(5), simplex_code(5)], ids=lambda c: c.name)
def test_gram_trace_and_psd(code):
    for s in range(20):
        G = gram(sample_matrix(code, 12, s)).entries
        assert np.trace(G) == 12
        assert np.all(np.diag(G) == 1)
        assert np.linalg.eigvalsh(G)[0] >= -1e-10


def test_complex_gram_is_hermitian():
    ctx = FieldCtx(3)
    code = code_from_matrix(ctx, [[1, 0], [0, 1], [1, 1], [1, 2], [2, 1]])
    G = gram(sample_matrix(code, 3, 11)).entries
    assert np.iscomplexobj(G)
    assert np.array_equal(G, G.conj().T)
    assert np.all(np.diag(G) == 1)
    assert np.linalg.eigvalsh(G)[0] >= -1e-10


def test_gram_matches_row_blocks():
    mat = sample_matrix(gold_code(7), 60, 4)
    G = gram(mat).entries
    R = mat.rows
    blocks = np.vstack([R[i:i + 16] @ R.T for i in range(0, 60, 16)]) / mat.n
    np.fill_diagonal(blocks, 1.0)
    assert np.array_equal(G, blocks)


def test_matrix_csv(tmp_path):
    mat = sample_matrix(gold_code(3), 4, 1)
    path = tmp_path / "m.csv"
    write_matrix_csv(mat, path)
    data = path.read_bytes()
    assert b"\r" not in data
    back = np.loadtxt(path, delimiter=",")
    assert np.array_equal(back, mat.rows)
    ctx = FieldCtx(3)
    code = code_from_matrix(ctx, [[1, 0], [0, 1], [1, 1], [1, 2]])
    cm = sample_matrix(code, 2, 5)
    write_matrix_csv(cm, path)
    back = np.loadtxt(path, delimiter=",")
    assert np.array_equal(back[:, 0::2] + 1j * back[:, 1::2], cm.rows)
