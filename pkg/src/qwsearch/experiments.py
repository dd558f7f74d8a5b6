"""
Parameter sweeps over the Gaussian potential and regime-threshold search.

Every sweep row is one deterministic engine run reduced to its peak
success probability at the grid centre. Peaks are memoised per process,
keyed by ``(L, sigma, c, model, window)``, so threshold scans and
bisections never repeat a run.
"""

from __future__ import annotations

import datetime
import enum
import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .engine import EvolutionConfig, default_window, run
from .operators import WalkModel, model1, model2
from .potentials import GaussianParams, OracleSpec, bivariate_gaussian_field, delta_oracle_field
from .state import GridGeometry

__all__ = [
    "SweepSpec",
    "SweepRow",
    "SweepTable",
    "Criterion",
    "ThresholdResult",
    "PowerLawFit",
    "ScalingResult",
    "default_sigma_scan",
    "model_name",
    "peak_probability",
    "akr_peak",
    "sigma_sweep",
    "lambda_sweep",
    "compare_models",
    "below_akr_criterion",
    "near_uniform_criterion",
    "find_sigma_below_akr",
    "find_sigma_near_uniform",
    "fit_power_law",
    "threshold_scaling",
    "clear_cache",
]

log = logging.getLogger(__name__)

SCALING_GRID_SIZES = tuple(range(20, 201, 20))
DEFAULT_EPSILONS = (0.9, 0.5, 0.1)
COMPARE_WINDOW = (0, 300)


def default_sigma_scan(lo_decade=-2, hi_decade=4, per_decade=40) -> np.ndarray:
    """Log-spaced sigma grid, ``per_decade`` points per decade, ends included."""
    n = (hi_decade - lo_decade) * per_decade + 1
    return np.logspace(lo_decade, hi_decade, n)


def model_name(model: WalkModel) -> str:
    return model.label.value


# ---------------------------------------------------------------------------
# single-run peaks (memoised)

_PEAK_CACHE: dict = {}


def clear_cache():
    _PEAK_CACHE.clear()


def _resolve_window(L, window):
    return default_window(L) if window is None else (int(window[0]), int(window[1]))


def _gaussian_peak(L, sigma, c, model, window):
    geom = GridGeometry(L)
    fld = bivariate_gaussian_field(geom, GaussianParams.isotropic(geom, sigma, c * math.pi))
    rec = run(EvolutionConfig(model, fld, steps=window[1], window=window))
    return rec.peak


def _akr_peak(L, window):
    geom = GridGeometry(L)
    fld = delta_oracle_field(geom, OracleSpec({geom.center}, math.pi))
    rec = run(EvolutionConfig(model1(), fld, steps=window[1], window=window))
    return rec.peak


def _key(L, sigma, c, model, window):
    return ("gauss", int(L), float(sigma), float(c), model, window)


def peak_probability(L, sigma, c=1.0, model=None, window=None) -> tuple[int, float]:
    """
    Peak ``(t*, p_max)`` of the centre-vertex success probability for a
    Gaussian potential of width ``sigma`` and height ``c*pi``.
    """
    model = model1() if model is None else model
    window = _resolve_window(L, window)
    key = _key(L, sigma, c, model, window)
    if key not in _PEAK_CACHE:
        _PEAK_CACHE[key] = _gaussian_peak(int(L), float(sigma), float(c), model, window)
    return _PEAK_CACHE[key]


def akr_peak(L, window=None) -> tuple[int, float]:
    """Peak of the ideal delta-oracle search (Model 1, phase pi at the centre)."""
    window = _resolve_window(L, window)
    key = ("akr", int(L), window)
    if key not in _PEAK_CACHE:
        _PEAK_CACHE[key] = _akr_peak(int(L), window)
    return _PEAK_CACHE[key]


def _peak_job(args):
    L, sigma, c, model, window = args
    try:
        return args, _gaussian_peak(L, sigma, c, model, window), None
    except Exception as exc:  # reported per row, the sweep continues
        return args, None, f"{type(exc).__name__}: {exc}"


def _evaluate(jobs: Sequence[tuple], workers: int = 1) -> dict:
    """Fill the cache for every ``(L, sigma, c, model, window)`` job; returns errors."""
    todo = []
    for job in jobs:
        if _key(*job) not in _PEAK_CACHE and job not in todo:
            todo.append(job)
    errors = {}
    if workers > 1 and len(todo) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_peak_job, todo, chunksize=1))
    else:
        results = map(_peak_job, todo)
    for args, peak, err in results:
        if err is None:
            _PEAK_CACHE[_key(*args)] = peak
        else:
            log.warning("run %s failed: %s", args, err)
            errors[args] = err
    return errors


# ---------------------------------------------------------------------------
# sweep tables

@dataclass
class SweepSpec:
    grid_sizes: Sequence[int] = (100,)
    sigmas: Sequence[float] = (1.0,)
    c_values: Sequence[float] = (1.0,)
    models: Sequence[WalkModel] = field(default_factory=lambda: [model1()])
    window: tuple[int, int] | None = None
    with_akr: bool = True

    def __post_init__(self):
        for name in ("grid_sizes", "sigmas", "c_values", "models"):
            if len(getattr(self, name)) == 0:
                raise ValueError(f"{name} must be nonempty")
        if any(not s > 0 for s in self.sigmas):
            raise ValueError("every sigma must be > 0")


@dataclass(frozen=True)
class SweepRow:
    L: int
    sigma: float
    c: float
    model: str
    t_peak: int
    p_max: float
    p_uniform: float
    p_akr: float | None = None
    error: str | None = None

    def sort_key(self):
        return (self.L, self.sigma, self.c, self.model)


@dataclass
class SweepTable:
    rows: list[SweepRow]
    metadata: dict = field(default_factory=dict)

    COLUMNS = ("L", "sigma", "c", "model", "t_peak", "p_max", "p_uniform", "p_akr", "error")

    def __post_init__(self):
        self.rows = sorted(self.rows, key=SweepRow.sort_key)

    def __len__(self):
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    def select(self, **conds) -> list[SweepRow]:
        return [r for r in self.rows if all(getattr(r, k) == v for k, v in conds.items())]

    def column(self, name, **conds) -> np.ndarray:
        return np.array([getattr(r, name) for r in self.select(**conds)])

    def records(self) -> list[dict]:
        return [asdict(r) for r in self.rows]


def _metadata(kind, **extra):
    meta = {
        "experiment": kind,
        "created": datetime.datetime.now(datetime.timezone.utc).isoformat(timespec="seconds"),
        "version": __version__,
    }
    meta.update(extra)
    return meta


def _table(spec: SweepSpec, jobs: int, kind: str) -> SweepTable:
    runs = []
    for L in spec.grid_sizes:
        win = _resolve_window(L, spec.window)
        for model in spec.models:
            for sigma in spec.sigmas:
                for c in spec.c_values:
                    runs.append((int(L), float(sigma), float(c), model, win))
    errors = _evaluate(runs, jobs)

    rows = []
    for L, sigma, c, model, win in runs:
        p_akr = akr_peak(L, win)[1] if spec.with_akr else None
        err = errors.get((L, sigma, c, model, win))
        if err is None:
            t, p = peak_probability(L, sigma, c, model, win)
        else:
            t, p = -1, math.nan
        rows.append(SweepRow(L, sigma, c, model_name(model), t, p, 1.0 / (L * L), p_akr, err))
    return SweepTable(rows, _metadata(kind, window=spec.window))


def sigma_sweep(spec: SweepSpec, jobs: int = 1) -> SweepTable:
    """Peak success probability for every ``(L, sigma)`` in the spec."""
    return _table(spec, jobs, "sigma-sweep")


def lambda_sweep(spec: SweepSpec, jobs: int = 1) -> SweepTable:
    """Peak success probability versus ``c`` (height ``c*pi``) for each sigma."""
    return _table(spec, jobs, "lambda-sweep")


def compare_models(
    L: int = 100,
    sigmas: Sequence[float] = (1.0,),
    c_values: Sequence[float] = (1.0,),
    window=COMPARE_WINDOW,
    jobs: int = 1,
) -> SweepTable:
    """
    Paired Model 1 / Model 2 peaks on identical fields.

    Every ``(sigma, c)`` combination is run for both models over the
    given window (``[0, 300]`` unless overridden).
    """
    spec = SweepSpec([L], list(sigmas), list(c_values), [model1(), model2()], window, with_akr=True)
    table = _table(spec, jobs, "compare-models")
    return table


# ---------------------------------------------------------------------------
# thresholds

class Criterion(enum.Enum):
    BELOW_FRACTION_OF_AKR = "below_fraction_of_akr"
    CLOSE_TO_UNIFORM = "close_to_uniform"


def below_akr_criterion(p_max: float, p_akr: float, epsilon: float) -> bool:
    """``p_max <= epsilon * p_akr``."""
    return p_max <= epsilon * p_akr


def near_uniform_criterion(p_max: float, p_uniform: float, epsilon: float) -> bool:
    """``1 - p_uniform / p_max <= epsilon`` (inclusive)."""
    return 1.0 - p_uniform / p_max <= epsilon


@dataclass
class ThresholdResult:
    """
    Smallest scanned sigma satisfying a regime criterion on an L x L grid.

    ``bracket`` holds the last failing and first passing sigma after
    bisection; ``certificate`` maps each checked sigma to
    ``(p_max, criterion_holds)`` and always includes ``sigma_star / 1.05``
    and ``sigma_star``. ``nonmonotone`` is set when a larger scanned sigma
    fails the criterion again.
    """

    L: int
    epsilon: float
    criterion: Criterion
    sigma_star: float | None
    reference: float
    bracket: tuple[float | None, float | None] = (None, None)
    certificate: dict = field(default_factory=dict)
    nonmonotone: bool = False
    scan_range: tuple[float, float] = (math.nan, math.nan)

    @property
    def found(self) -> bool:
        return self.sigma_star is not None

    @property
    def N(self) -> int:
        return self.L * self.L


def _find_threshold(
    L, epsilon, holds: Callable[[float], bool], criterion, reference, sigmas, window, jobs, rel_width,
    check_monotone,
):
    sigmas = np.asarray(sigmas if sigmas is not None else default_sigma_scan(), dtype=float)
    if sigmas.ndim != 1 or len(sigmas) == 0 or np.any(sigmas <= 0) or np.any(np.diff(sigmas) <= 0):
        raise ValueError("sigma scan must be a nonempty increasing sequence of positive values")
    window = _resolve_window(L, window)
    model = model1()
    result = ThresholdResult(
        L, epsilon, criterion, None, reference, scan_range=(float(sigmas[0]), float(sigmas[-1]))
    )

    def check(s):
        p = peak_probability(L, s, 1.0, model, window)[1]
        ok = holds(p)
        result.certificate[float(s)] = (p, ok)
        return ok

    if check_monotone:
        _evaluate([(L, float(s), 1.0, model, window) for s in sigmas], jobs)

    first = None
    for i, s in enumerate(sigmas):
        if check(s):
            first = i
            break
    if first is None:
        log.info("L=%d eps=%g: %s never met in [%g, %g]", L, epsilon, criterion.value, sigmas[0], sigmas[-1])
        return result

    hi = float(sigmas[first])
    lo = float(sigmas[first - 1]) if first > 0 else None
    if lo is not None:
        while hi / lo > 1.0 + rel_width:
            mid = math.sqrt(lo * hi)
            if check(mid):
                hi = mid
            else:
                lo = mid
    result.sigma_star = hi
    result.bracket = (lo, hi)
    check(hi / 1.05)

    if check_monotone:
        result.nonmonotone = any(not check(s) for s in sigmas[first + 1:])
        if result.nonmonotone:
            log.warning("L=%d eps=%g: %s is not monotone in sigma", L, epsilon, criterion.value)
    return result


def find_sigma_below_akr(
    L, epsilon=0.5, sigmas=None, window=None, jobs=1, rel_width=1e-2, check_monotone=True,
) -> ThresholdResult:
    """Smallest sigma with ``p_max(sigma) <= epsilon * p_akr``; needs ``0 < epsilon < 1``."""
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1) (got {epsilon}); epsilon >= 1 is met trivially")
    p_akr = akr_peak(L, window)[1]
    return _find_threshold(
        L, epsilon, lambda p: below_akr_criterion(p, p_akr, epsilon), Criterion.BELOW_FRACTION_OF_AKR,
        p_akr, sigmas, window, jobs, rel_width, check_monotone,
    )


def find_sigma_near_uniform(
    L, epsilon=0.5, sigmas=None, window=None, jobs=1, rel_width=1e-2, check_monotone=True,
) -> ThresholdResult:
    """Smallest sigma with ``1 - p_u / p_max(sigma) <= epsilon``, ``p_u = 1/L**2``."""
    if not 0 <= epsilon < 1:
        raise ValueError(f"epsilon must lie in [0, 1) (got {epsilon})")
    p_u = 1.0 / (L * L)
    return _find_threshold(
        L, epsilon, lambda p: near_uniform_criterion(p, p_u, epsilon), Criterion.CLOSE_TO_UNIFORM,
        p_u, sigmas, window, jobs, rel_width, check_monotone,
    )


@dataclass(frozen=True)
class PowerLawFit:
    """``y = prefactor * x**exponent`` fitted by least squares in log-log space."""

    exponent: float
    prefactor: float
    residual: float
    n_points: int

    def __call__(self, x):
        return self.prefactor * np.asarray(x, dtype=float) ** self.exponent


def fit_power_law(points) -> PowerLawFit:
    """
    Ordinary least squares on ``(log N, log sigma*)``.

    Parameters
    ----------
    points : sequence of (N, sigma_star)
        At least three pairs, all strictly positive.

    Returns
    -------
    PowerLawFit
        Slope, ``exp(intercept)`` and the RMS residual of the log fit.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError("points must be a sequence of (N, sigma_star) pairs")
    if len(pts) < 3:
        raise ValueError(f"need at least 3 points, got {len(pts)}")
    if np.any(~np.isfinite(pts)) or np.any(pts <= 0):
        raise ValueError("power-law fit needs finite, strictly positive data")
    lx, ly = np.log(pts[:, 0]), np.log(pts[:, 1])
    A = np.column_stack([lx, np.ones_like(lx)])
    (slope, intercept), *_ = np.linalg.lstsq(A, ly, rcond=None)
    resid = ly - (slope * lx + intercept)
    return PowerLawFit(float(slope), float(math.exp(intercept)), float(np.sqrt(np.mean(resid ** 2))), len(pts))


@dataclass
class ScalingResult:
    thresholds: list[ThresholdResult]
    fit: PowerLawFit | None

    @property
    def exponent(self) -> float:
        return math.nan if self.fit is None else self.fit.exponent


def threshold_scaling(
    criterion: Criterion | str,
    epsilon: float = 0.5,
    grid_sizes: Sequence[int] = SCALING_GRID_SIZES,
    sigmas=None,
    jobs: int = 1,
    check_monotone: bool = True,
) -> ScalingResult:
    """Threshold sigma for each grid size and its power-law fit against ``N = L**2``."""
    finder = {
        Criterion.BELOW_FRACTION_OF_AKR: find_sigma_below_akr,
        Criterion.CLOSE_TO_UNIFORM: find_sigma_near_uniform,
    }[Criterion(criterion)]
    results = [finder(L, epsilon, sigmas=sigmas, jobs=jobs, check_monotone=check_monotone) for L in grid_sizes]
    pts = [(r.N, r.sigma_star) for r in results if r.found]
    fit = fit_power_law(pts) if len(pts) >= 3 else None
    return ScalingResult(results, fit)
