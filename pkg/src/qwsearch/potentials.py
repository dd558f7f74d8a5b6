"""
Scalar phase fields on the grid and the diagonal phase operator.

A :class:`PotentialField` holds real values ``f(x, y)`` in radians and
the precomputed unimodular factors ``exp(i f(x, y))`` that the walk
multiplies into every coin component at each step.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .state import GridGeometry, WalkerState

__all__ = [
    "FieldKind",
    "GaussianParams",
    "PotentialField",
    "OracleSpec",
    "bivariate_gaussian_field",
    "delta_oracle_field",
    "linear_field",
    "ackley_field",
    "rastrigin_field",
    "constant_field",
    "custom_field",
    "apply_phase",
    "load_field_text",
    "save_field_text",
    "format_field_text",
]


class FieldKind(enum.Enum):
    BIVARIATE_GAUSSIAN = "gaussian"
    DELTA_ORACLE = "delta"
    LINEAR = "linear"
    ACKLEY = "ackley"
    RASTRIGIN = "rastrigin"
    CUSTOM = "custom"


@dataclass(frozen=True)
class GaussianParams:
    mu_x: float
    mu_y: float
    sigma_x: float
    sigma_y: float
    rho: float = 0.0
    lam: float = math.pi

    def __post_init__(self):
        for name in ("sigma_x", "sigma_y"):
            s = getattr(self, name)
            if not (np.isfinite(s) and s > 0):
                raise ValueError(f"{name} must be positive and finite (got {s})")
        if not abs(self.rho) < 1:
            raise ValueError(f"|rho| must be < 1 (got {self.rho})")
        if not (np.isfinite(self.lam) and self.lam >= 0):
            raise ValueError(f"lambda must be nonnegative (got {self.lam})")

    @classmethod
    def isotropic(cls, geometry: GridGeometry, sigma: float, lam: float = math.pi) -> "GaussianParams":
        """Uncorrelated, equal-width Gaussian centred at ``(L//2, L//2)``."""
        cx, cy = geometry.center
        return cls(cx, cy, sigma, sigma, 0.0, lam)


@dataclass(frozen=True, eq=False)
class PotentialField:
    """Immutable real field on the grid; ``values[x, y]`` in radians."""

    values: NDArray[np.float64]
    geometry: GridGeometry
    kind: FieldKind = FieldKind.CUSTOM

    def __post_init__(self):
        L = self.geometry.side_length
        v = np.array(self.values, dtype=np.float64)
        if v.shape != (L, L):
            raise ValueError(f"field must have shape ({L}, {L}), got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("field values must be finite")
        v.setflags(write=False)
        ph = np.exp(1j * v)
        ph.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "phase_factors", ph)

    def shifted(self, offset: float) -> "PotentialField":
        """Same field plus a uniform phase ``offset``."""
        return PotentialField(self.values + offset, self.geometry, self.kind)


@dataclass(frozen=True)
class OracleSpec:
    marked: frozenset
    phase: float = math.pi

    def __post_init__(self):
        marked = frozenset(tuple(int(c) for c in v) for v in self.marked)
        if not marked:
            raise ValueError("oracle needs at least one marked vertex")
        object.__setattr__(self, "marked", marked)


def _coords(geometry: GridGeometry):
    r = np.arange(geometry.side_length, dtype=np.float64)
    return r[:, None], r[None, :]


def bivariate_gaussian_field(geometry: GridGeometry, params: GaussianParams) -> PotentialField:
    """
    Bivariate normal density evaluated on grid points, rescaled so its
    maximum over the grid equals ``params.lam``.

    The density is handled in log space: after dividing by the grid
    maximum the normalisation constant cancels, which keeps tiny widths
    (sigma ~ 1e-3) free of underflow at the peak.
    """
    x, y = _coords(geometry)
    u = (x - params.mu_x) / params.sigma_x
    v = (y - params.mu_y) / params.sigma_y
    z = u * u + v * v - 2.0 * params.rho * u * v
    q = z / (2.0 * (1.0 - params.rho ** 2))
    values = params.lam * np.exp(-(q - q.min()))
    return PotentialField(values, geometry, FieldKind.BIVARIATE_GAUSSIAN)


def delta_oracle_field(geometry: GridGeometry, spec: OracleSpec) -> PotentialField:
    L = geometry.side_length
    values = np.zeros((L, L))
    for vertex in spec.marked:
        x, y = geometry.check_vertex(vertex)
        values[x, y] = spec.phase
    return PotentialField(values, geometry, FieldKind.DELTA_ORACLE)


def linear_field(geometry: GridGeometry, phi: float) -> PotentialField:
    """Electric-walk phase ``phi * x``."""
    x, _ = _coords(geometry)
    values = np.broadcast_to(phi * x, (geometry.side_length,) * 2)
    return PotentialField(values, geometry, FieldKind.LINEAR)


def constant_field(geometry: GridGeometry, value: float) -> PotentialField:
    L = geometry.side_length
    return PotentialField(np.full((L, L), float(value)), geometry, FieldKind.CUSTOM)


def custom_field(values, geometry: GridGeometry | None = None) -> PotentialField:
    values = np.asarray(values, dtype=np.float64)
    if geometry is None:
        if values.ndim != 2 or values.shape[0] != values.shape[1]:
            raise ValueError(f"custom field must be square, got shape {values.shape}")
        geometry = GridGeometry(values.shape[0])
    return PotentialField(values, geometry, FieldKind.CUSTOM)


def _benchmark_domain(geometry: GridGeometry, half_width: float):
    # grid center -> 0, edges -> +/- half_width
    L = geometry.side_length
    c = L // 2
    scale = half_width / (L / 2)
    x, y = _coords(geometry)
    return (x - c) * scale, (y - c) * scale


def _peak_normalize(cost, lam):
    # global minimum of the cost becomes the field maximum lam
    span = cost.max() - cost.min()
    if span == 0:
        return np.full_like(cost, lam)
    return lam * (cost.max() - cost) / span


def ackley_field(geometry: GridGeometry, lam: float = math.pi) -> PotentialField:
    """Ackley (a=20, b=0.2, c=2pi) on [-5, 5]^2, inverted and scaled to peak ``lam``."""
    u, v = _benchmark_domain(geometry, 5.0)
    a, b, c = 20.0, 0.2, 2.0 * np.pi
    cost = (
        -a * np.exp(-b * np.sqrt(0.5 * (u * u + v * v)))
        - np.exp(0.5 * (np.cos(c * u) + np.cos(c * v)))
        + a
        + np.e
    )
    return PotentialField(_peak_normalize(cost, lam), geometry, FieldKind.ACKLEY)


def rastrigin_field(geometry: GridGeometry, lam: float = math.pi) -> PotentialField:
    """Rastrigin (A=10) on [-5.12, 5.12]^2, inverted and scaled to peak ``lam``."""
    u, v = _benchmark_domain(geometry, 5.12)
    A = 10.0
    cost = 2 * A + (u * u - A * np.cos(2 * np.pi * u)) + (v * v - A * np.cos(2 * np.pi * v))
    return PotentialField(_peak_normalize(cost, lam), geometry, FieldKind.RASTRIGIN)


def apply_phase(state: WalkerState, field: PotentialField) -> WalkerState:
    """Multiply every amplitude at ``(x, y)`` by ``exp(i f(x, y))``."""
    if state.geometry.side_length != field.geometry.side_length:
        raise ValueError(
            f"field is {field.geometry.side_length}x{field.geometry.side_length}, "
            f"state is {state.geometry.side_length}x{state.geometry.side_length}"
        )
    return WalkerState(state.amplitudes * field.phase_factors, state.geometry)


# Plain-text grid format: L lines of L space-separated reals, line y=0 first.

def format_field_text(values) -> str:
    values = np.asarray(values, dtype=np.float64)
    rows = (" ".join(repr(float(v)) for v in values[:, y]) for y in range(values.shape[1]))
    return "\n".join(rows) + "\n"


def save_field_text(field: PotentialField | np.ndarray, path) -> None:
    values = field.values if isinstance(field, PotentialField) else field
    try:
        with open(path, "w", newline="\n") as fh:
            fh.write(format_field_text(values))
    except OSError as exc:
        raise OSError(f"cannot write field file {os.fspath(path)}: {exc.strerror}") from exc


def load_field_text(path, boundary=None) -> PotentialField:
    rows = []
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                rows.append([float(tok) for tok in line.split()])
            except ValueError as exc:
                raise ValueError(f"{path}:{lineno}: {exc}") from None
    L = len(rows)
    if L < 2 or any(len(r) != L for r in rows):
        raise ValueError(f"{path}: expected a square grid of at least 2x2 values")
    values = np.array(rows).T  # rows are indexed by y
    geometry = GridGeometry(L) if boundary is None else GridGeometry(L, boundary)
    return PotentialField(values, geometry, FieldKind.CUSTOM)
