"""
Walker state on an L x L grid with a four-dimensional coin register.

Amplitudes are stored as a complex128 array of shape ``(2, 2, L, L)``
indexed by ``(j, k, x, y)``. The flat addressing used by :func:`encode`
and :func:`decode` is the C-order ravel of that array.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

__all__ = [
    "Boundary",
    "GridGeometry",
    "WalkerState",
    "PositionDistribution",
    "encode",
    "decode",
    "uniform_state",
    "basis_state",
    "position_distribution",
    "success_probability",
    "norm",
    "inner_product",
]

NORM_TOL = 1e-9


class Boundary(enum.Enum):
    PERIODIC = "periodic"
    REFLECTIVE = "reflective"


@dataclass(frozen=True)
class GridGeometry:
    """Square L x L grid; ``N = L**2`` vertices."""

    side_length: int
    boundary: Boundary = Boundary.PERIODIC

    def __post_init__(self):
        if isinstance(self.side_length, bool) or not isinstance(self.side_length, (int, np.integer)):
            raise TypeError(f"side_length must be int, got {type(self.side_length).__name__}")
        if self.side_length < 2:
            raise ValueError(f"side_length must be >= 2 (got {self.side_length})")
        object.__setattr__(self, "side_length", int(self.side_length))
        object.__setattr__(self, "boundary", Boundary(self.boundary))

    @property
    def L(self) -> int:
        return self.side_length

    @property
    def num_vertices(self) -> int:
        return self.side_length * self.side_length

    @property
    def dim(self) -> int:
        """Dimension of the full coin x position space."""
        return 4 * self.num_vertices

    @property
    def center(self) -> tuple[int, int]:
        return (self.side_length // 2, self.side_length // 2)

    def contains(self, vertex) -> bool:
        x, y = vertex
        return 0 <= x < self.side_length and 0 <= y < self.side_length

    def check_vertex(self, vertex) -> tuple[int, int]:
        if len(vertex) != 2 or not self.contains(vertex):
            raise ValueError(f"vertex {tuple(vertex)} outside {self.side_length}x{self.side_length} grid")
        return int(vertex[0]), int(vertex[1])


def encode(j: int, k: int, x: int, y: int, L: int) -> int:
    """Flat index of basis state ``|j,k>|x,y>``."""
    return ((2 * j + k) * L + x) * L + y


def decode(index: int, L: int) -> tuple[int, int, int, int]:
    """Inverse of :func:`encode`."""
    rest, y = divmod(index, L)
    coin, x = divmod(rest, L)
    j, k = divmod(coin, 2)
    return j, k, x, y


@dataclass
class WalkerState:
    """
    Pure state of the walker.

    Parameters
    ----------
    amplitudes : ndarray, complex, shape (2, 2, L, L)
        ``amplitudes[j, k, x, y]`` is the amplitude of ``|j,k>|x,y>``.
        A flat array of length ``4 L**2`` is also accepted.
    geometry : GridGeometry
    """

    amplitudes: NDArray[np.complex128]
    geometry: GridGeometry

    def __post_init__(self):
        L = self.geometry.side_length
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.size != 4 * L * L:
            raise ValueError(f"expected {4 * L * L} amplitudes for L={L}, got {amps.size}")
        self.amplitudes = amps.reshape(2, 2, L, L)

    @property
    def flat(self) -> NDArray[np.complex128]:
        return self.amplitudes.reshape(-1)

    def copy(self) -> "WalkerState":
        return WalkerState(self.amplitudes.copy(), self.geometry)

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(norm(self) - 1.0) <= tol


@dataclass
class PositionDistribution:
    """Born-rule probabilities ``p_t(x, y)``, stored with shape (L, L)."""

    probabilities: NDArray[np.float64]
    time_step: int = 0

    def __getitem__(self, vertex):
        return self.probabilities[vertex]

    def total(self) -> float:
        return float(self.probabilities.sum())


def uniform_state(geometry: GridGeometry) -> WalkerState:
    """Equal superposition over every coin and position basis state."""
    amp = 1.0 / np.sqrt(geometry.dim)
    L = geometry.side_length
    return WalkerState(np.full((2, 2, L, L), amp, dtype=np.complex128), geometry)


def basis_state(geometry: GridGeometry, j: int, k: int, x: int, y: int) -> WalkerState:
    if j not in (0, 1) or k not in (0, 1):
        raise ValueError(f"coin indices must be bits, got ({j}, {k})")
    geometry.check_vertex((x, y))
    L = geometry.side_length
    amps = np.zeros((2, 2, L, L), dtype=np.complex128)
    amps[j, k, x, y] = 1.0
    return WalkerState(amps, geometry)


def position_distribution(state: WalkerState, time_step: int = 0) -> PositionDistribution:
    a = state.amplitudes
    probs = (a.real ** 2 + a.imag ** 2).sum(axis=(0, 1))
    return PositionDistribution(probs, time_step)


def success_probability(state: WalkerState, target) -> float:
    x, y = state.geometry.check_vertex(target)
    a = state.amplitudes[:, :, x, y]
    return float((a.real ** 2 + a.imag ** 2).sum())


def norm(state: WalkerState) -> float:
    return float(np.linalg.norm(state.flat))


def inner_product(a: WalkerState, b: WalkerState) -> complex:
    """Hermitian inner product ``<a|b>``."""
    if a.geometry != b.geometry:
        raise ValueError(f"geometry mismatch: {a.geometry} vs {b.geometry}")
    return complex(np.vdot(a.flat, b.flat))
