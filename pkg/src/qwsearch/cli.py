"""
Command-line front end.

Usage::

    qwsearch [--config FILE] COMMAND [options]

Commands: ``run``, ``sigma-sweep``, ``lambda-sweep``, ``thresholds``,
``compare-models``, ``field-dump``. Options given on the command line
override values from the config file.

Config files are plain ``key = value`` lines; ``#`` starts a comment.
Keys are the long option names without the leading dashes (``grid``,
``sigma``, ``lambda-c``, ``rho``, ``mu-x``, ``mu-y``, ``model``,
``potential``, ``phi``, ``steps``, ``window``, ``target``, ``format``,
``out``, ``jobs``, ``epsilon``, ``grid-sizes``, ``criterion``).
Underscores and dashes are interchangeable.

Exit status: 0 on success, 1 for usage/config errors, 2 for runtime
failures.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import os
import sys
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from . import experiments as ex
from .engine import EvolutionConfig, run
from .operators import model_from_label
from .potentials import (
    GaussianParams,
    OracleSpec,
    ackley_field,
    bivariate_gaussian_field,
    delta_oracle_field,
    format_field_text,
    linear_field,
    load_field_text,
    rastrigin_field,
)
from .state import GridGeometry

log = logging.getLogger("qwsearch")

COMMANDS = ("run", "sigma-sweep", "lambda-sweep", "thresholds", "compare-models", "field-dump")
POTENTIALS = ("gaussian", "delta", "linear", "ackley", "rastrigin")

EXIT_OK, EXIT_USAGE, EXIT_RUNTIME = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# experiment spec and config parsing

@dataclass
class ExperimentSpec:
    command: str
    grid: int = 100
    sigma: list[float] | None = None
    lambda_c: list[float] = field(default_factory=lambda: [1.0])
    rho: float = 0.0
    mu_x: float | None = None
    mu_y: float | None = None
    model: int = 1
    potential: str = "gaussian"
    phi: float = 0.0
    steps: int | None = None
    window: tuple[int, int] | None = None
    target: tuple[int, int] | None = None
    format: str = "csv"
    out: str = "."
    jobs: int = 1
    epsilon: list[float] | None = None
    grid_sizes: list[int] | None = None
    criterion: str = "both"

    @property
    def geometry(self) -> GridGeometry:
        return model_from_label(self.model).geometry(self.grid)


_KEYS = {f.name for f in fields(ExperimentSpec)} - {"command"}


def _float_list(text: str) -> list[float]:
    """``a,b,c`` | ``log:LO:HI:PER_DECADE`` | ``lin:LO:HI:COUNT``."""
    text = text.strip()
    if text.startswith(("log:", "lin:")):
        kind, *parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"expected {kind}:LO:HI:N, got {text!r}")
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
        if kind == "log":
            if lo <= 0 or hi <= lo or n < 1:
                raise ValueError(f"bad log range {text!r}")
            d0, d1 = math.log10(lo), math.log10(hi)
            count = int(round((d1 - d0) * n)) + 1
            return [float(v) for v in np.logspace(d0, d1, count)]
        if n < 1:
            raise ValueError(f"bad linear range {text!r}")
        return [float(v) for v in np.linspace(lo, hi, n)]
    return [float(v) for v in text.split(",") if v.strip()]


def _int_pair(text: str, sep: str) -> tuple[int, int]:
    parts = text.split(sep)
    if len(parts) != 2:
        raise ValueError(f"expected two integers separated by {sep!r}, got {text!r}")
    return int(parts[0]), int(parts[1])


_CONVERTERS = {
    "grid": int,
    "sigma": _float_list,
    "lambda_c": _float_list,
    "rho": float,
    "mu_x": float,
    "mu_y": float,
    "model": int,
    "potential": str,
    "phi": float,
    "steps": int,
    "window": lambda s: _int_pair(s, ":"),
    "target": lambda s: _int_pair(s, ","),
    "format": str,
    "out": str,
    "jobs": int,
    "epsilon": _float_list,
    "grid_sizes": lambda s: [int(v) for v in _float_list(s)],
    "criterion": str,
}


def read_config_text(text: str, source: str = "<config>") -> dict:
    """Parse ``key = value`` lines into ``{key: (raw_value, line_number)}``."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{source}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in _KEYS:
            raise UsageError(f"{source}:{lineno}: unknown key {key!r}")
        if key in out:
            raise UsageError(f"{source}:{lineno}: key {key!r} already set on line {out[key][1]}")
        out[key] = (value, lineno)
    return out


def parse_config(command: str, config_text: str | None = None, flags: dict | None = None,
                 source: str = "<config>") -> ExperimentSpec:
    """
    Merge a config document and command-line flags into a validated,
    fully defaulted :class:`ExperimentSpec`. Flags win over the file.
    """
    if command not in COMMANDS:
        raise UsageError(f"unknown command {command!r}")
    values = {}
    where = {}
    if config_text:
        for key, (raw, lineno) in read_config_text(config_text, source).items():
            try:
                values[key] = _CONVERTERS[key](raw)
            except ValueError as exc:
                raise UsageError(f"{source}:{lineno}: bad value for {key!r}: {exc}") from None
            where[key] = f"{source}:{lineno}"
    for key, raw in (flags or {}).items():
        if raw is None:
            continue
        key = key.replace("-", "_")
        if key not in _KEYS:
            raise UsageError(f"unknown option {key!r}")
        try:
            values[key] = _CONVERTERS[key](raw) if isinstance(raw, str) else raw
        except ValueError as exc:
            raise UsageError(f"--{key.replace('_', '-')}: {exc}") from None
        where[key] = f"--{key.replace('_', '-')}"
    spec = ExperimentSpec(command, **values)
    _validate(spec, where)
    return spec


def _validate(spec: ExperimentSpec, where: dict):
    def fail(key, msg):
        loc = where.get(key, key)
        raise UsageError(f"{loc}: {msg}")

    if spec.grid < 2:
        fail("grid", f"grid must be >= 2 (got {spec.grid})")
    if spec.model not in (1, 2):
        fail("model", f"model must be 1 or 2 (got {spec.model})")
    if spec.format not in ("csv", "json"):
        fail("format", f"format must be csv or json (got {spec.format!r})")
    if spec.jobs < 1:
        fail("jobs", f"jobs must be >= 1 (got {spec.jobs})")
    pot = spec.potential
    if not (pot in POTENTIALS or pot.startswith("file:")):
        fail("potential", f"unknown potential {pot!r}")
    if spec.sigma is not None:
        if not spec.sigma:
            fail("sigma", "sigma list is empty")
        if any(not s > 0 for s in spec.sigma):
            fail("sigma", "sigma must be > 0")
    if any(c < 0 for c in spec.lambda_c):
        fail("lambda_c", "lambda-c must be >= 0")
    if not abs(spec.rho) < 1:
        fail("rho", f"|rho| must be < 1 (got {spec.rho})")
    if spec.steps is not None and spec.steps < 0:
        fail("steps", "steps must be >= 0")
    if spec.epsilon is not None and any(not 0 <= e < 1 for e in spec.epsilon):
        fail("epsilon", "epsilon values must lie in [0, 1)")
    if spec.criterion not in ("both", "below-akr", "near-uniform"):
        fail("criterion", f"criterion must be both, below-akr or near-uniform (got {spec.criterion!r})")

    if spec.command in ("run", "field-dump"):
        if pot == "gaussian" and spec.sigma is None:
            fail("sigma", "the gaussian potential needs an explicit sigma")
        if pot != "gaussian" and spec.sigma is not None:
            fail("sigma", f"sigma conflicts with potential {pot!r}")
        if spec.sigma is not None and len(spec.sigma) != 1:
            fail("sigma", f"{spec.command} takes a single sigma")
        if len(spec.lambda_c) != 1:
            fail("lambda_c", f"{spec.command} takes a single lambda-c")
        if pot != "linear" and "phi" in where:
            fail("phi", f"phi only applies to the linear potential, not {pot!r}")
    elif spec.command in ("sigma-sweep", "lambda-sweep", "compare-models"):
        if pot != "gaussian":
            fail("potential", f"{spec.command} sweeps the gaussian potential only")
        if spec.command == "sigma-sweep" and spec.sigma is None:
            spec.sigma = [float(v) for v in ex.default_sigma_scan()]
        if spec.command == "lambda-sweep" and spec.sigma is None:
            fail("sigma", "lambda-sweep needs at least one sigma")
        if spec.command == "compare-models":
            if spec.sigma is None:
                spec.sigma = [float(v) for v in ex.default_sigma_scan(per_decade=5)]
            if "model" in where:
                fail("model", "compare-models always runs both models")
    elif spec.command == "thresholds":
        if pot != "gaussian":
            fail("potential", "thresholds are defined for the gaussian potential only")
        if spec.grid_sizes is None:
            spec.grid_sizes = list(ex.SCALING_GRID_SIZES)
        if any(L < 2 for L in spec.grid_sizes):
            fail("grid_sizes", "every grid size must be >= 2")
        if spec.epsilon is None:
            spec.epsilon = [0.5]

    geom = spec.geometry
    if spec.target is not None and not geom.contains(spec.target):
        fail("target", f"target {spec.target} outside the {spec.grid}x{spec.grid} grid")
    if spec.window is not None:
        lo, hi = spec.window
        if lo < 0 or hi < lo:
            fail("window", f"invalid window {lo}:{hi}")
        if spec.steps is not None and hi > spec.steps:
            fail("window", f"window end {hi} exceeds steps={spec.steps}")


def build_field(spec: ExperimentSpec, sigma: float | None = None, c: float | None = None):
    geom = spec.geometry
    c = spec.lambda_c[0] if c is None else c
    lam = c * math.pi
    pot = spec.potential
    if pot == "gaussian":
        sigma = spec.sigma[0] if sigma is None else sigma
        cx, cy = geom.center
        mu_x = cx if spec.mu_x is None else spec.mu_x
        mu_y = cy if spec.mu_y is None else spec.mu_y
        return bivariate_gaussian_field(geom, GaussianParams(mu_x, mu_y, sigma, sigma, spec.rho, lam))
    if pot == "delta":
        return delta_oracle_field(geom, OracleSpec({spec.target or geom.center}, lam))
    if pot == "linear":
        return linear_field(geom, spec.phi)
    if pot == "ackley":
        return ackley_field(geom, lam)
    if pot == "rastrigin":
        return rastrigin_field(geom, lam)
    fld = load_field_text(pot[len("file:"):], geom.boundary)
    if fld.geometry.side_length != spec.grid:
        raise UsageError(f"{pot}: field is {fld.geometry.side_length}x{fld.geometry.side_length}, grid is {spec.grid}")
    return fld


# ---------------------------------------------------------------------------
# emitters

def format_number(v) -> str:
    """Shortest round-trip text for floats; plain text otherwise."""
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    return str(v)


def csv_text(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([format_number(v) for v in row])
    return buf.getvalue()


def json_text(obj) -> str:
    return json.dumps(_jsonable(obj), sort_keys=True, indent=2) + "\n"


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_jsonable(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def _write(path: Path, text: str):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror or exc}") from exc
    log.info("wrote %s", path)
    return path


def emit_series(series, fmt: str, path, extra: dict | None = None) -> Path:
    """Success series: CSV ``t,success_probability`` or JSON object."""
    path = Path(path)
    if fmt == "csv":
        return _write(path, csv_text(("t", "success_probability"), enumerate(np.asarray(series).tolist())))
    doc = dict(extra or {})
    doc["success_probability"] = np.asarray(series).tolist()
    return _write(path, json_text(doc))


def emit_table(table: ex.SweepTable, fmt: str, path) -> Path:
    path = Path(path)
    if fmt == "csv":
        rows = ([getattr(r, c) for c in ex.SweepTable.COLUMNS] for r in table.rows)
        return _write(path, csv_text(ex.SweepTable.COLUMNS, rows))
    return _write(path, json_text({"metadata": table.metadata, "rows": table.records()}))


def emit_field(fld, path) -> Path:
    return _write(Path(path), format_field_text(fld.values))


THRESHOLD_COLUMNS = ("L", "N", "criterion", "epsilon", "sigma_star", "bracket_lo", "bracket_hi",
                     "reference", "nonmonotone")
FIT_COLUMNS = ("criterion", "epsilon", "exponent", "prefactor", "residual", "n_points")


def _threshold_row(r: ex.ThresholdResult):
    return [r.L, r.N, r.criterion.value, r.epsilon, r.sigma_star, r.bracket[0], r.bracket[1],
            r.reference, r.nonmonotone]


def emit_thresholds(results: list[tuple[str, float, ex.ScalingResult]], fmt: str, out: Path) -> list[Path]:
    thr_rows, fit_rows = [], []
    for crit, eps, res in results:
        thr_rows.extend(_threshold_row(r) for r in res.thresholds)
        f = res.fit
        fit_rows.append([crit, eps] + ([f.exponent, f.prefactor, f.residual, f.n_points] if f else [None] * 4))
    if fmt == "csv":
        return [
            _write(out / "thresholds.csv", csv_text(THRESHOLD_COLUMNS, thr_rows)),
            _write(out / "scaling_fit.csv", csv_text(FIT_COLUMNS, fit_rows)),
        ]
    doc = {
        "thresholds": [dict(zip(THRESHOLD_COLUMNS, r)) for r in thr_rows],
        "fits": [dict(zip(FIT_COLUMNS, r)) for r in fit_rows],
    }
    return [_write(out / "thresholds.json", json_text(doc))]


def read_csv(path) -> tuple[list[str], list[list[str]]]:
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], rows[1:]


# ---------------------------------------------------------------------------
# commands

def _cmd_run(spec: ExperimentSpec):
    model = model_from_label(spec.model)
    fld = build_field(spec)
    L = spec.grid
    window = spec.window
    steps = spec.steps
    if steps is None:
        steps = window[1] if window else 3 * L
    rec = run(EvolutionConfig(model, fld, steps, target=spec.target, window=window))
    out = Path(spec.out)
    extra = {"grid": L, "model": spec.model, "potential": spec.potential, "steps": steps,
             "window": list(rec.window), "t_peak": rec.t_peak, "p_max": rec.p_max}
    if spec.sigma:
        extra["sigma"] = spec.sigma[0]
    emit_series(rec.success_series, spec.format, out / f"series.{spec.format}", extra)
    print(f"peak p_max={rec.p_max!r} at t={rec.t_peak} (window {rec.window[0]}:{rec.window[1]})")


def _cmd_sweep(spec: ExperimentSpec):
    if spec.command == "compare-models":
        table = ex.compare_models(spec.grid, spec.sigma, spec.lambda_c,
                                  window=spec.window or ex.COMPARE_WINDOW, jobs=spec.jobs)
    else:
        sweep = ex.sigma_sweep if spec.command == "sigma-sweep" else ex.lambda_sweep
        table = sweep(ex.SweepSpec([spec.grid], spec.sigma, spec.lambda_c,
                                   [model_from_label(spec.model)], spec.window), jobs=spec.jobs)
    path = Path(spec.out) / f"{spec.command}.{spec.format}"
    emit_table(table, spec.format, path)
    failed = [r for r in table if r.error]
    print(f"{len(table)} rows -> {path}" + (f" ({len(failed)} failed)" if failed else ""))
    return EXIT_RUNTIME if failed else EXIT_OK


def _cmd_thresholds(spec: ExperimentSpec):
    wanted = {"both": ("below-akr", "near-uniform")}.get(spec.criterion, (spec.criterion,))
    crit_of = {"below-akr": ex.Criterion.BELOW_FRACTION_OF_AKR, "near-uniform": ex.Criterion.CLOSE_TO_UNIFORM}
    sigmas = spec.sigma
    results = []
    for name in wanted:
        for eps in spec.epsilon:
            res = ex.threshold_scaling(crit_of[name], eps, spec.grid_sizes, sigmas=sigmas, jobs=spec.jobs)
            results.append((name, eps, res))
            print(f"{name} eps={eps}: exponent={res.exponent!r}")
    emit_thresholds(results, spec.format, Path(spec.out))


def _cmd_field_dump(spec: ExperimentSpec):
    path = Path(spec.out) / "field.txt"
    emit_field(build_field(spec), path)
    print(f"field -> {path}")


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="qwsearch", description="Quantum walk search on 2-D grids with phase potentials.")
    p.add_argument("--config", help="key = value config file")
    p.add_argument("-v", "--verbose", action="store_true")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--grid", help="side length L (default 100)")
    p.add_argument("--sigma", help="width(s): value, a,b,c, or log:LO:HI:PER_DECADE")
    p.add_argument("--lambda-c", dest="lambda_c", help="height lambda = c*pi; value, list or lin:LO:HI:N")
    p.add_argument("--rho")
    p.add_argument("--mu-x", dest="mu_x")
    p.add_argument("--mu-y", dest="mu_y")
    p.add_argument("--model", choices=("1", "2"))
    p.add_argument("--potential", help=f"{', '.join(POTENTIALS)} or file:PATH")
    p.add_argument("--phi", help="slope of the linear potential")
    p.add_argument("--steps")
    p.add_argument("--window", help="A:B, inclusive")
    p.add_argument("--target", help="X,Y")
    p.add_argument("--format", choices=("csv", "json"))
    p.add_argument("--out", help="output directory")
    p.add_argument("--jobs")
    p.add_argument("--epsilon", help="threshold epsilon(s)")
    p.add_argument("--grid-sizes", dest="grid_sizes", help="grid sizes for thresholds")
    p.add_argument("--criterion", help="both, below-akr or near-uniform")
    return p


def main(argv=None) -> int:
    try:
        args = make_parser().parse_args(argv)
        logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                            format="%(levelname)s %(name)s: %(message)s")
        text = None
        if args.config:
            try:
                text = Path(args.config).read_text()
            except OSError as exc:
                raise UsageError(f"cannot read config {args.config}: {exc.strerror}") from None
        flags = {k: v for k, v in vars(args).items() if k not in ("config", "verbose", "command")}
        spec = parse_config(args.command, text, flags, source=args.config or "<config>")
        if spec.potential.startswith("file:") and not os.path.exists(spec.potential[5:]):
            raise UsageError(f"--potential: no such file {spec.potential[5:]}")
    except UsageError as exc:
        print(f"qwsearch: error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    try:
        handler = {
            "run": _cmd_run,
            "sigma-sweep": _cmd_sweep,
            "lambda-sweep": _cmd_sweep,
            "compare-models": _cmd_sweep,
            "thresholds": _cmd_thresholds,
            "field-dump": _cmd_field_dump,
        }[spec.command]
        return handler(spec) or EXIT_OK
    except UsageError as exc:
        print(f"qwsearch: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:
        print(f"qwsearch: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
