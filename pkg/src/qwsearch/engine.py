"""
Evolution loop ``psi <- exp(i f) S (C x I) psi`` with per-step recording.

The hot path is a fused numba kernel that applies coin, shift and phase
in a single pass over the grid. The composable numpy operators in
:mod:`qwsearch.operators` and :mod:`qwsearch.potentials` compute the
same map and serve as the reference for it.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

import numba
import numpy as np
from numpy.typing import NDArray

from .operators import CoinKind, ShiftKind, WalkModel
from .potentials import PotentialField
from .state import GridGeometry, PositionDistribution, WalkerState, uniform_state

__all__ = [
    "EvolutionConfig",
    "RunRecord",
    "default_window",
    "step",
    "run",
    "success_series",
    "peak_in_window",
]


@numba.njit(cache=True)
def _grover_flip_flop(psi, ph, out):
    L = psi.shape[2]
    for x in range(L):
        xp = x + 1 if x + 1 < L else 0
        xm = x - 1 if x > 0 else L - 1
        for y in range(L):
            a = psi[0, 0, x, y]
            b = psi[0, 1, x, y]
            c = psi[1, 0, x, y]
            d = psi[1, 1, x, y]
            s = 0.5 * (a + b + c + d)
            yp = y + 1 if y + 1 < L else 0
            ym = y - 1 if y > 0 else L - 1
            out[0, 1, x, yp] = (s - a) * ph[x, yp]
            out[0, 0, x, ym] = (s - b) * ph[x, ym]
            out[1, 1, xp, y] = (s - c) * ph[xp, y]
            out[1, 0, xm, y] = (s - d) * ph[xm, y]


@numba.njit(cache=True)
def _coin_flip_flop(psi, coin, ph, out):
    L = psi.shape[2]
    for x in range(L):
        xp = x + 1 if x + 1 < L else 0
        xm = x - 1 if x > 0 else L - 1
        for y in range(L):
            a = psi[0, 0, x, y]
            b = psi[0, 1, x, y]
            c = psi[1, 0, x, y]
            d = psi[1, 1, x, y]
            yp = y + 1 if y + 1 < L else 0
            ym = y - 1 if y > 0 else L - 1
            out[0, 1, x, yp] = (coin[0, 0] * a + coin[0, 1] * b + coin[0, 2] * c + coin[0, 3] * d) * ph[x, yp]
            out[0, 0, x, ym] = (coin[1, 0] * a + coin[1, 1] * b + coin[1, 2] * c + coin[1, 3] * d) * ph[x, ym]
            out[1, 1, xp, y] = (coin[2, 0] * a + coin[2, 1] * b + coin[2, 2] * c + coin[2, 3] * d) * ph[xp, y]
            out[1, 0, xm, y] = (coin[3, 0] * a + coin[3, 1] * b + coin[3, 2] * c + coin[3, 3] * d) * ph[xm, y]


@numba.njit(cache=True)
def _coin_reflective(psi, coin, ph, out):
    L = psi.shape[2]
    for x in range(L):
        for y in range(L):
            a = psi[0, 0, x, y]
            b = psi[0, 1, x, y]
            c = psi[1, 0, x, y]
            d = psi[1, 1, x, y]
            c00 = coin[0, 0] * a + coin[0, 1] * b + coin[0, 2] * c + coin[0, 3] * d
            c01 = coin[1, 0] * a + coin[1, 1] * b + coin[1, 2] * c + coin[1, 3] * d
            c10 = coin[2, 0] * a + coin[2, 1] * b + coin[2, 2] * c + coin[2, 3] * d
            c11 = coin[3, 0] * a + coin[3, 1] * b + coin[3, 2] * c + coin[3, 3] * d
            # a blocked move stays put with its sign bit flipped
            if y + 1 < L:
                out[0, 0, x, y + 1] = c00 * ph[x, y + 1]
            else:
                out[0, 1, x, y] = c00 * ph[x, y]
            if y > 0:
                out[0, 1, x, y - 1] = c01 * ph[x, y - 1]
            else:
                out[0, 0, x, y] = c01 * ph[x, y]
            if x + 1 < L:
                out[1, 0, x + 1, y] = c10 * ph[x + 1, y]
            else:
                out[1, 1, x, y] = c10 * ph[x, y]
            if x > 0:
                out[1, 1, x - 1, y] = c11 * ph[x - 1, y]
            else:
                out[1, 0, x, y] = c11 * ph[x, y]


def _fused_step(psi, model: WalkModel, phase_factors, out):
    if model.shift.kind is ShiftKind.FLIP_FLOP_PERIODIC:
        if model.coin.kind is CoinKind.GROVER:
            _grover_flip_flop(psi, phase_factors, out)
        else:
            _coin_flip_flop(psi, model.coin.matrix, phase_factors, out)
    else:
        _coin_reflective(psi, model.coin.matrix, phase_factors, out)
    return out


def default_window(side_length: int) -> tuple[int, int]:
    """``[0, 3 sqrt(N)]`` with both ends inclusive."""
    return (0, 3 * side_length)


@dataclass
class EvolutionConfig:
    """
    Everything needed for one deterministic run.

    ``geometry`` defaults to an L x L grid (L from the field) whose
    boundary matches the model's shift. ``window`` defaults to
    ``[0, min(3L, steps)]``; ``target`` defaults to ``(L//2, L//2)``.
    """

    model: WalkModel
    field: PotentialField
    steps: int
    target: tuple[int, int] | None = None
    window: tuple[int, int] | None = None
    snapshot_steps: tuple[int, ...] = ()
    keep_final_state: bool = False
    geometry: GridGeometry | None = None

    def __post_init__(self):
        L = self.field.geometry.side_length
        if self.geometry is None:
            self.geometry = self.model.geometry(L)
        if self.geometry.side_length != L:
            raise ValueError(f"field is {L}x{L} but geometry has L={self.geometry.side_length}")
        if self.geometry.boundary is not self.model.boundary:
            raise ValueError(
                f"model needs {self.model.boundary.value} boundaries, geometry is {self.geometry.boundary.value}"
            )
        if self.steps < 0:
            raise ValueError(f"steps must be >= 0 (got {self.steps})")
        self.target = self.geometry.check_vertex(self.geometry.center if self.target is None else self.target)
        if self.window is None:
            lo, hi = default_window(L)
            self.window = (lo, min(hi, self.steps))
        self.window = _check_window(self.window, self.steps + 1)
        bad = [s for s in self.snapshot_steps if not 0 <= s <= self.steps]
        if bad:
            raise ValueError(f"snapshot steps {bad} outside [0, {self.steps}]")


@dataclass
class RunRecord:
    success_series: NDArray[np.float64]
    peak: tuple[int, float]
    window: tuple[int, int]
    snapshots: list[tuple[int, PositionDistribution]] = dc_field(default_factory=list)
    final_state: WalkerState | None = None

    @property
    def t_peak(self) -> int:
        return self.peak[0]

    @property
    def p_max(self) -> float:
        return self.peak[1]


def _check_window(window, length):
    lo, hi = int(window[0]), int(window[1])
    if hi < lo:
        raise ValueError(f"empty window [{lo}, {hi}]")
    if lo < 0 or hi >= length:
        raise ValueError(f"window [{lo}, {hi}] outside series of length {length}")
    return lo, hi


def peak_in_window(series, window=None) -> tuple[int, float]:
    """
    Argmax and max of ``series[lo:hi+1]``; ties go to the earliest step.

    Returns
    -------
    (t_peak, p_max)
    """
    series = np.asarray(series)
    if window is None:
        window = (0, len(series) - 1)
    lo, hi = _check_window(window, len(series))
    seg = series[lo:hi + 1]
    i = int(np.argmax(seg))
    return lo + i, float(seg[i])


def step(state: WalkerState, config: EvolutionConfig) -> WalkerState:
    """One step: coin, then shift, then the phase field."""
    if state.geometry != config.geometry:
        raise ValueError(f"state geometry {state.geometry} != config geometry {config.geometry}")
    out = np.empty_like(state.amplitudes)
    _fused_step(state.amplitudes, config.model, config.field.phase_factors, out)
    return WalkerState(out, state.geometry)


def _target_prob(psi, x, y):
    a = psi[:, :, x, y]
    return float((a.real ** 2 + a.imag ** 2).sum())


def run(config: EvolutionConfig, initial_state: WalkerState | None = None) -> RunRecord:
    """
    Evolve from the uniform state (or ``initial_state``) for
    ``config.steps`` steps, recording the target probability at every
    step including t=0.
    """
    geom = config.geometry
    state = uniform_state(geom) if initial_state is None else initial_state
    if state.geometry != geom:
        raise ValueError(f"initial state geometry {state.geometry} != config geometry {geom}")
    psi = np.array(state.amplitudes, dtype=np.complex128, order="C")
    buf = np.empty_like(psi)
    ph = np.ascontiguousarray(config.field.phase_factors)
    tx, ty = config.target
    snaps = set(config.snapshot_steps)
    snapshots = []

    series = np.empty(config.steps + 1)
    series[0] = _target_prob(psi, tx, ty)
    if 0 in snaps:
        snapshots.append((0, _distribution(psi, 0)))
    for t in range(1, config.steps + 1):
        _fused_step(psi, config.model, ph, buf)
        psi, buf = buf, psi
        series[t] = _target_prob(psi, tx, ty)
        if t in snaps:
            snapshots.append((t, _distribution(psi, t)))

    return RunRecord(
        success_series=series,
        peak=peak_in_window(series, config.window),
        window=config.window,
        snapshots=snapshots,
        final_state=WalkerState(psi, geom) if config.keep_final_state else None,
    )


def _distribution(psi, t):
    return PositionDistribution((psi.real ** 2 + psi.imag ** 2).sum(axis=(0, 1)), t)


def success_series(model: WalkModel, field: PotentialField, steps: int, target=None) -> NDArray[np.float64]:
    """Shorthand for ``run(EvolutionConfig(...)).success_series``."""
    return run(EvolutionConfig(model, field, steps, target=target)).success_series
