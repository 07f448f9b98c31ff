import csv
import hashlib
import json

import pytest

from codespectra.cli import main
from codespectra.codes import gold_code, write_generator_file
from codespectra.spectra import theorem_bound


def run(*argv):
    return main([str(a) for a in argv])


def read_csv(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def test_spectra_run_outputs(tmp_path):
    out = tmp_path / "s"
    assert run("spectra", "run", "--code", "gold", "--m", 5, "--y", 0.5, "--trials", 50,
               "--seed", 1, "--out", out) == 0
    summary = json.loads((out / "summary.json").read_text())
    assert len(summary["sup_distances"]) == 50
    assert summary["p"] == 16
    assert summary["theorem_bound"] == theorem_bound(31, 16 / 31)
    eig = read_csv(out / "eigenvalues.csv")
    assert len(eig) == 50 * 16
    assert list(eig[0]) == ["trial", "index", "lambda"]
    table = read_csv(out / "esd_vs_mp.csv")
    assert list(table[0]) == ["z", "esd", "mp_cdf"]
    assert float(table[-1]["esd"]) == 1.0 and float(table[-1]["mp_cdf"]) == 1.0


def test_manifest_lists_every_file(tmp_path):
    out = tmp_path / "s"
    run("spectra", "run", "--code", "gold", "--m", 5, "--trials", 3, "--out", out)
    manifest = json.loads((out / "manifest.json").read_text())
    written = {p.name for p in out.iterdir()} - {"manifest.json"}
    assert {f["name"] for f in manifest["files"]} == written
    for f in manifest["files"]:
        assert hashlib.sha256((out / f["name"]).read_bytes()).hexdigest() == f["sha256"]
    assert len(manifest["trial_seeds"]) == 3
    assert {"codespectra", "numpy", "scipy", "python"} <= set(manifest["versions"])
    assert manifest["config"]["code"] == "gold"


def test_csv_is_plain(tmp_path):
    out = tmp_path / "s"
    run("spectra", "run", "--code", "gold", "--m", 5, "--trials", 2, "--out", out)
    for name in ("eigenvalues.csv", "esd_vs_mp.csv"):
        data = (out / name).read_bytes()
        assert b"\r" not in data and b";" not in data
        assert data.endswith(b"\n")


@pytest.mark.parametrize("argv", [
    ["spectra", "run", "--code", "golay", "--m", 3],
    ["spectra", "run", "--code", "gold", "--m", 5, "--trials", 0],
    ["spectra", "run", "--code", "gold", "--m", 5, "--p", 10, "--y", 0.5],
    ["spectra", "run", "--code", "gold", "--m", 5, "--p", 31],
    ["spectra", "run", "--code", "gold", "--m", 4],
    ["spectra", "run", "--code", "gold", "--m", 5, "--format", "xml"],
    ["moments", "run", "--trials", 2],
])
def test_config_errors_exit_1(tmp_path, argv):
    assert run(*argv, "--out", tmp_path / "x") == 1


def test_io_errors_exit_2(tmp_path):
    assert run("code", "info", "--matrix-file", tmp_path / "missing.txt") == 2
    blocker = tmp_path / "file"
    blocker.write_text("")
    assert run("spectra", "run", "--code", "gold", "--m", 5, "--trials", 1,
               "--out", blocker / "sub") == 2


def test_paths_budget_exits_3(tmp_path):
    assert run("paths", "verify", "--lmax", 11, "--out", tmp_path) == 3
    assert run("paths", "count", "--lmax", 11, "--out", tmp_path) == 3


def test_code_info(capsys, tmp_path):
    assert run("code", "info", "--code", "hamming", "--m", 3) == 0
    info = json.loads(capsys.readouterr().out)
    assert (info["n"], info["k"], info["d"], info["d_dual"], info["A4_dual"]) == (7, 4, 3, 4, 7)
    assert info["weight_enumerator"] == [1, 0, 0, 7, 7, 0, 0, 1]
    path = tmp_path / "g.txt"
    write_generator_file(gold_code(5), path)
    assert run("code", "info", "--matrix-file", path) == 0
    info = json.loads(capsys.readouterr().out)
    assert (info["n"], info["k"], info["d_dual"]) == (31, 10, 5)


def test_code_info_reports_unavailable_enumerators(capsys):
    assert run("code", "info", "--code", "gold", "--m", 13) == 0
    info = json.loads(capsys.readouterr().out)
    assert info["weight_enumerator"] is None and info["d_dual"] is None


def test_moments_repetition_with_exact(tmp_path):
    out = tmp_path / "m"
    assert run("moments", "run", "--code", "repetition", "--m", 3, "--p", 2, "--lmax", 2,
               "--trials", 20, "--exact", "--out", out) == 0
    (row,) = read_csv(out / "moments.csv")
    assert float(row["exact"]) == 2.0
    assert float(row["empirical"]) == pytest.approx(2.0)
    assert float(row["main_term"]) == pytest.approx(1 + 2 / 3)
    manifest = json.loads((out / "manifest.json").read_text())
    assert any("sqrt(p)" in w for w in manifest["warnings"])


def test_moments_gold_defaults(tmp_path):
    out = tmp_path / "m"
    assert run("moments", "run", "--code", "gold", "--m", 5, "--trials", 10, "--out", out) == 0
    doc = json.loads((out / "moments.json").read_text())
    assert doc["A4_dual"] == 0
    rows = read_csv(out / "moments.csv")
    assert [int(r["l"]) for r in rows] == [2, 3, 4]
    assert all(float(r["bound"]) > 0 for r in rows)
    assert all(r["exact"] == "" for r in rows)


def test_paths_verify_gold3(tmp_path):
    out = tmp_path / "p"
    assert run("paths", "verify", "--code", "gold", "--m", 3, "--lmax", 5, "--out", out) == 0
    doc = json.loads((out / "paths.json").read_text())
    assert doc["classes"] == 1 + 2 + 5 + 15 + 52 and doc["failures"] == 0
    assert all(r["ok"] for r in doc["records"])
    keys = {"blocks", "v", "trace", "in_gamma", "W", "predicted", "bound"}
    assert keys <= set(doc["records"][0])


def test_paths_verify_ncap(tmp_path):
    out = tmp_path / "p"
    assert run("paths", "verify", "--code", "gold", "--m", 5, "--lmax", 3, "--ncap", 16,
               "--out", out) == 0
    doc = json.loads((out / "paths.json").read_text())
    assert all("W" not in r for r in doc["records"])


def test_paths_count_table(tmp_path):
    out = tmp_path / "c"
    assert run("paths", "count", "--lmax", 8, "--out", out) == 0
    rows = read_csv(out / "gamma_counts.csv")
    assert len(rows) == sum(range(1, 9))
    assert all(r["exhaustive"] == r["formula"] for r in rows)
    doc = json.loads((out / "gamma_counts.json").read_text())
    assert doc["row_sums"] == doc["catalan"]


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# sweep point\ncode = gold\nm = 5\ntrials = 4\nseed = 9\nformat = json\n")
    out = tmp_path / "a"
    assert run("spectra", "run", "--config", cfg, "--out", out) == 0
    assert (out / "summary.json").exists() and not (out / "eigenvalues.csv").exists()
    summary = json.loads((out / "summary.json").read_text())
    assert summary["trials"] == 4
    out2 = tmp_path / "b"
    assert run("spectra", "run", "--config", cfg, "--trials", 2, "--out", out2) == 0
    summary2 = json.loads((out2 / "summary.json").read_text())
    assert summary2["trials"] == 2
    assert summary2["sup_distances"] == summary["sup_distances"][:2]


def test_bad_config_file(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    assert run("spectra", "run", "--config", cfg, "--out", tmp_path / "x") == 1


def test_workers_do_not_change_outputs(tmp_path):
    args = ["spectra", "run", "--code", "gold", "--m", 7, "--trials", 6, "--seed", 4]
    run(*args, "--out", tmp_path / "one")
    run(*args, "--workers", 2, "--out", tmp_path / "two")
    for name in ("eigenvalues.csv", "esd_vs_mp.csv", "summary.json"):
        assert (tmp_path / "one" / name).read_bytes() == (tmp_path / "two" / name).read_bytes()
