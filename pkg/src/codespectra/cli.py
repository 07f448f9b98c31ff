"""Command-line experiment runner.

Subcommands: ``code info``, ``spectra run``, ``moments run``, ``paths verify``,
``paths count``.  Settings come from an optional ``--config`` file of
``key = value`` lines (keys as the long flag names); flags override it.

Exit codes: 0 ok, 1 configuration error, 2 I/O error, 3 budget exceeded,
4 a verification check failed.
"""
from __future__ import annotations

import argparse
import csv
import hashlib
import json
import math
import platform
import sys
import time
import warnings
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .codes import LinearCode, builtin_code, read_generator_file
from .ensemble import gram, sample_matrix, trial_seed
from .errors import BudgetExceededError, CodeConstructionError
from .moments import monte_carlo_moments
from .paths import (
    MAX_PATH_LENGTH,
    count_gamma,
    count_gamma_exhaustive,
    enumerate_path_classes,
    verify_class,
)
from .spectra import MPLaw, eigenvalues, mp_cdf, sup_distance, theorem_bound

EXIT_CONFIG, EXIT_IO, EXIT_BUDGET = 1, 2, 3
ESD_GRID_POINTS = 201
DEFAULT_Y = 0.5


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    code: str | None = None
    m: int | None = None
    matrix_file: str | None = None
    p: int | None = None
    y: float | None = None
    trials: int = 50
    lmax: int = 4
    seed: int = 0
    out: str = "out"
    format: list[str] = field(default_factory=lambda: ["csv", "json"])
    workers: int = 1
    exact: bool = False
    ncap: int = 16

    def build_code(self) -> LinearCode:
        if self.matrix_file:
            return read_generator_file(self.matrix_file)
        if not self.code:
            raise ConfigError("give --code (with --m) or --matrix-file")
        try:
            return builtin_code(self.code, self.m)
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc

    def resolve_p(self, n: int) -> int:
        if self.p is not None and self.y is not None:
            raise ConfigError("give exactly one of --p and --y")
        if self.p is None and self.y is None:
            self.y = DEFAULT_Y
        p = self.p if self.p is not None else round(self.y * n)
        if not 1 <= p < n:
            raise ConfigError(f"p = {p} must satisfy 1 <= p < n = {n}")
        return p

    def validate(self):
        if self.trials < 1:
            raise ConfigError("trials must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        bad = set(self.format) - {"csv", "json"}
        if bad or not self.format:
            raise ConfigError(f"format must be a nonempty subset of csv,json; got {self.format}")


_FIELD_TYPES = {
    "code": str, "m": int, "matrix_file": str, "p": int, "y": float, "trials": int,
    "lmax": int, "seed": int, "out": str, "workers": int, "ncap": int,
}


def _parse_format(text: str) -> list[str]:
    return [t.strip() for t in text.split(",") if t.strip()]


def _parse_bool(text: str) -> bool:
    if text.lower() in ("1", "true", "yes", "on"):
        return True
    if text.lower() in ("0", "false", "no", "off"):
        return False
    raise ConfigError(f"not a boolean: {text!r}")


def load_config_file(path) -> dict:
    values = {}
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"{path}:{lineno}: expected 'key = value'")
        key, val = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        try:
            if key == "format":
                values[key] = _parse_format(val)
            elif key == "exact":
                values[key] = _parse_bool(val)
            elif key in _FIELD_TYPES:
                values[key] = _FIELD_TYPES[key](val)
            else:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        except ValueError as exc:
            raise ConfigError(f"{path}:{lineno}: {exc}") from exc
    return values


def build_config(args: argparse.Namespace) -> ExperimentConfig:
    values = {}
    if getattr(args, "config", None):
        values.update(load_config_file(args.config))
    for key in list(_FIELD_TYPES) + ["format", "exact"]:
        val = getattr(args, key, None)
        if val is not None:
            values[key] = val
    cfg = ExperimentConfig(**values)
    cfg.validate()
    return cfg


# -- manifest and writers ------------------------------------------------------------

class RunWriter:
    """Collects output files for the run manifest."""

    def __init__(self, out: str, cfg: ExperimentConfig, command: str):
        self.dir = Path(out)
        self.dir.mkdir(parents=True, exist_ok=True)
        self.cfg = cfg
        self.command = command
        self.files: list[dict] = []
        self.warnings: list[str] = []
        self.trial_seeds: list[int] = []
        self.started = time.time()

    def _record(self, path: Path, float_tol: float | None):
        data = path.read_bytes()
        self.files.append({
            "name": path.name,
            "sha256": hashlib.sha256(data).hexdigest(),
            "bytes": len(data),
            "float_tolerance": float_tol,
        })

    def write_csv(self, name: str, header, rows, float_tol: float | None = 1e-10):
        path = self.dir / name
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([_fmt(v) for v in row])
        self._record(path, float_tol)

    def write_json(self, name: str, obj, float_tol: float | None = 1e-10):
        path = self.dir / name
        path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n")
        self._record(path, float_tol)

    def finish(self) -> dict:
        manifest = {
            "command": self.command,
            "config": asdict(self.cfg),
            "versions": {
                "codespectra": __version__,
                "numpy": np.__version__,
                "scipy": scipy.__version__,
                "python": platform.python_version(),
            },
            "trial_seeds": self.trial_seeds,
            "warnings": self.warnings,
            "wall_clock_seconds": time.time() - self.started,
            "files": self.files,
        }
        (self.dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")
        return manifest


def _fmt(v):
    if v is None:
        return ""
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def code_summary(code: LinearCode) -> dict:
    info = {"name": code.name, "q": code.q, "n": code.n, "k": code.k,
            "distinct_rows": code.distinct_rows}
    try:
        A = code.weight_enumerator
        B = code.dual_weight_enumerator
    except BudgetExceededError:
        A = B = None
    info["weight_enumerator"] = A
    info["dual_weight_enumerator"] = B
    info["d"] = code.d if A else None
    info["d_dual"] = code.d_dual if B else None
    info["A4_dual"] = code.A4_dual if B else None
    return info


# -- subcommands ---------------------------------------------------------------

def cmd_code_info(cfg: ExperimentConfig, args) -> int:
    info = code_summary(cfg.build_code())
    print(json.dumps(info))
    if args.out is not None:
        w = RunWriter(cfg.out, cfg, "code info")
        w.write_json("code_info.json", info, float_tol=None)
        w.finish()
    return 0


def _spectra_trial(code: LinearCode, p: int, seed: int):
    sample = eigenvalues(gram(sample_matrix(code, p, seed)))
    return sample, sup_distance(sample, MPLaw(p / code.n))


def _map(fn, workers: int, *iterables):
    if workers > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(workers) as pool:
            return list(pool.map(fn, *iterables))
    return list(map(fn, *iterables))


def cmd_spectra_run(cfg: ExperimentConfig, args) -> int:
    code = cfg.build_code()
    p = cfg.resolve_p(code.n)
    y = p / code.n
    w = RunWriter(cfg.out, cfg, "spectra run")
    seeds = [trial_seed(cfg.seed, t) for t in range(cfg.trials)]
    w.trial_seeds = seeds
    results = _map(_spectra_trial, cfg.workers, [code] * cfg.trials, [p] * cfg.trials, seeds)
    samples = [s for s, _ in results]
    dists = [d for _, d in results]
    law = MPLaw(y)
    pooled = np.sort(np.concatenate([s.eigenvalues for s in samples]))
    z = np.linspace(0.0, 1.05 * max(law.b, float(pooled[-1])), ESD_GRID_POINTS)
    pooled_esd = np.searchsorted(pooled, z, side="right") / pooled.size
    try:
        bound = theorem_bound(code.n, y)
    except ValueError as exc:
        bound = None
        w.warnings.append(str(exc))
    summary = {
        "code": code.name, "n": code.n, "k": code.k, "p": p, "y": y,
        "trials": cfg.trials, "sup_distances": dists,
        "mean_sup_distance": float(np.mean(dists)),
        "std_sup_distance": float(np.std(dists, ddof=1)) if cfg.trials > 1 else None,
        "theorem_bound": bound,
        "mp_support": [law.a, law.b],
        "clamped_eigenvalues": sum(s.clamped for s in samples),
    }
    if "csv" in cfg.format:
        w.write_csv("eigenvalues.csv", ["trial", "index", "lambda"],
                    ((t, i, lam) for t, s in enumerate(samples) for i, lam in enumerate(s.eigenvalues)))
        w.write_csv("esd_vs_mp.csv", ["z", "esd", "mp_cdf"],
                    zip(z, pooled_esd, mp_cdf(law, z)))
    if "json" in cfg.format:
        w.write_json("summary.json", summary)
    w.finish()
    print(f"{code.name}: p={p} n={code.n} trials={cfg.trials} "
          f"mean sup distance {summary['mean_sup_distance']:.4f}")
    return 0


def cmd_moments_run(cfg: ExperimentConfig, args) -> int:
    code = cfg.build_code()
    p = cfg.resolve_p(code.n)
    w = RunWriter(cfg.out, cfg, "moments run")
    w.trial_seeds = [trial_seed(cfg.seed, t) for t in range(cfg.trials)]
    try:
        A = code.A4_dual
    except BudgetExceededError:
        raise ConfigError(f"{code.name}: weight-4 dual count unavailable (enumeration budget)")
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always")
        reports = monte_carlo_moments(code, p, cfg.lmax, cfg.trials, cfg.seed, A=A,
                                      exact=cfg.exact, workers=cfg.workers)
    w.warnings.extend(str(c.message) for c in caught)
    if "csv" in cfg.format:
        w.write_csv("moments.csv", ["l", "empirical", "stderr", "main_term", "bound", "exact"],
                    ((r.l, r.empirical_mean, r.std_error, r.main_term, r.error_bound,
                      r.exact_expectation) for r in reports))
    if "json" in cfg.format:
        w.write_json("moments.json", {
            "code": code.name, "n": code.n, "k": code.k, "p": p, "y": p / code.n,
            "A4_dual": A, "warnings": w.warnings,
            "reports": [r.to_dict() for r in reports],
        })
    w.finish()
    for r in reports:
        print(f"l={r.l} empirical={r.empirical_mean:.6f} main={r.main_term:.6f} "
              f"bound={r.error_bound:.4f}")
    return 0


def cmd_paths_verify(cfg: ExperimentConfig, args) -> int:
    if not 1 <= cfg.lmax <= MAX_PATH_LENGTH:
        raise BudgetExceededError(f"lmax must lie in [1, {MAX_PATH_LENGTH}], got {cfg.lmax}")
    code = cfg.build_code()
    if code.n > cfg.ncap:
        w_code, A = None, None
        note = f"n = {code.n} exceeds ncap = {cfg.ncap}; W not computed"
    else:
        w_code, A, note = code, code.A4_dual, None
    w = RunWriter(cfg.out, cfg, "paths verify")
    if note:
        w.warnings.append(note)
    classes = [path for l in range(1, cfg.lmax + 1) for path in enumerate_path_classes(l)]
    records = _map(verify_class, cfg.workers, classes, [w_code] * len(classes), [A] * len(classes))
    failures = sum(1 for r in records if r.get("ok") is False)
    w.write_json("paths.json", {
        "code": code.name, "n": code.n, "A4_dual": A, "lmax": cfg.lmax,
        "classes": len(records), "failures": failures, "records": records,
    }, float_tol=None)
    w.finish()
    print(f"{code.name}: {len(records)} classes, {failures} dichotomy failures")
    return 0 if failures == 0 else 4


def cmd_paths_count(cfg: ExperimentConfig, args) -> int:
    if not 1 <= cfg.lmax <= MAX_PATH_LENGTH:
        raise BudgetExceededError(f"lmax must lie in [1, {MAX_PATH_LENGTH}], got {cfg.lmax}")
    rows = []
    for l in range(1, cfg.lmax + 1):
        counts = count_gamma_exhaustive(l)
        for v in range(1, l + 1):
            rows.append({"l": l, "v": v, "exhaustive": counts[v], "formula": count_gamma(l, v)})
    w = RunWriter(cfg.out, cfg, "paths count")
    if "csv" in cfg.format:
        w.write_csv("gamma_counts.csv", ["l", "v", "exhaustive", "formula"],
                    ([r["l"], r["v"], r["exhaustive"], r["formula"]] for r in rows),
                    float_tol=None)
    if "json" in cfg.format:
        totals = {l: sum(r["exhaustive"] for r in rows if r["l"] == l)
                  for l in range(1, cfg.lmax + 1)}
        w.write_json("gamma_counts.json", {
            "rows": rows,
            "row_sums": totals,
            "catalan": {l: math.comb(2 * l, l) // (l + 1) for l in totals},
        }, float_tol=None)
    w.finish()
    mismatches = sum(r["exhaustive"] != r["formula"] for r in rows)
    print(f"{len(rows)} (l, v) pairs, {mismatches} mismatches")
    return 0 if mismatches == 0 else 4


# -- argument parsing ----------------------------------------------------------

def _common(p: argparse.ArgumentParser, *, sampling: bool = True):
    p.add_argument("--config", help="key = value file; flags override it")
    p.add_argument("--code", help="builtin code: gold, simplex, hamming, repetition, bch-dual")
    p.add_argument("--m", type=int, help="code parameter (repetition: length n)")
    p.add_argument("--matrix-file", dest="matrix_file", help="generator matrix file")
    p.add_argument("--out", help="output directory")
    p.add_argument("--format", type=_parse_format, help="comma list from csv,json")
    if sampling:
        p.add_argument("--p", type=int, help="number of rows")
        p.add_argument("--y", type=float, help="aspect ratio p/n")
        p.add_argument("--trials", type=int)
        p.add_argument("--seed", type=int, help="master seed")
        p.add_argument("--workers", type=int)
    p.add_argument("--lmax", type=int)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="codespectra", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="group", required=True)

    code = sub.add_parser("code").add_subparsers(dest="action", required=True)
    p = code.add_parser("info", help="parameters and weight enumerators as JSON")
    _common(p, sampling=False)
    p.set_defaults(func=cmd_code_info)

    spectra = sub.add_parser("spectra").add_subparsers(dest="action", required=True)
    p = spectra.add_parser("run", help="sup distance between ESD and the MP law")
    _common(p)
    p.set_defaults(func=cmd_spectra_run)

    moments = sub.add_parser("moments").add_subparsers(dest="action", required=True)
    p = moments.add_parser("run", help="Monte Carlo moments vs main term and bound")
    _common(p)
    p.add_argument("--exact", action="store_const", const=True,
                   help="add the exact expectation from the path-class sum")
    p.set_defaults(func=cmd_moments_run)

    paths = sub.add_parser("paths").add_subparsers(dest="action", required=True)
    p = paths.add_parser("verify", help="per-class reduction and W dichotomy report")
    _common(p, sampling=False)
    p.add_argument("--ncap", type=int, help="compute W only when n <= ncap")
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_paths_verify)
    p = paths.add_parser("count", help="Gamma class counts vs Narayana numbers")
    _common(p, sampling=False)
    p.set_defaults(func=cmd_paths_count)
    return parser


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    try:
        cfg = build_config(args)
        return args.func(cfg, args)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (ConfigError, CodeConstructionError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
