"""
Coin operators, shift rules and the walk substep ``U = S (C x I)``.

Coin basis ordering is ``|j,k>`` -> row ``2*j + k``. Axis is chosen by
``j`` (1 -> x, 0 -> y) and sign by ``(-1)**k``, so the four move
directions are::

    (0,0): y+1    (0,1): y-1    (1,0): x+1    (1,1): x-1
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np
from numpy.typing import NDArray

from .state import Boundary, GridGeometry, WalkerState

__all__ = [
    "CoinKind",
    "CoinOperator",
    "ShiftKind",
    "ShiftRule",
    "ModelLabel",
    "WalkModel",
    "grover_coin",
    "hadamard_coin",
    "custom_coin",
    "flip_flop_shift",
    "standard_reflective_shift",
    "model1",
    "model2",
    "model_from_label",
    "apply_coin",
    "apply_shift",
    "walk_substep",
]

UNITARY_TOL = 1e-12


class CoinKind(enum.Enum):
    GROVER = "grover"
    HADAMARD_TENSOR = "hadamard_tensor"
    CUSTOM = "custom"


@dataclass(frozen=True, eq=False)
class CoinOperator:
    """
    4x4 unitary acting on the coin register.

    The matrix is validated for unitarity (entrywise, 1e-12) at
    construction and then frozen.
    """

    matrix: NDArray[np.complex128]
    kind: CoinKind = CoinKind.CUSTOM

    def __post_init__(self):
        m = np.array(self.matrix, dtype=np.complex128)
        if m.shape != (4, 4):
            raise ValueError(f"coin must be 4x4, got shape {m.shape}")
        err = np.abs(m @ m.conj().T - np.eye(4)).max()
        if err > UNITARY_TOL:
            raise ValueError(f"coin matrix is not unitary (max |MM^+ - I| = {err:.3e})")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    def __eq__(self, other):
        if not isinstance(other, CoinOperator):
            return NotImplemented
        return self.kind == other.kind and np.array_equal(self.matrix, other.matrix)

    def __hash__(self):
        return hash((self.kind, self.matrix.tobytes()))


def grover_coin() -> CoinOperator:
    """``2|d><d| - I`` with ``|d> = H⊗H|00>``."""
    d = np.full(4, 0.5, dtype=np.complex128)
    return CoinOperator(2.0 * np.outer(d, d.conj()) - np.eye(4), CoinKind.GROVER)


def hadamard_coin() -> CoinOperator:
    h = np.array([[1.0, 1.0], [1.0, -1.0]]) / np.sqrt(2.0)
    return CoinOperator(np.kron(h, h), CoinKind.HADAMARD_TENSOR)


def custom_coin(matrix) -> CoinOperator:
    return CoinOperator(matrix, CoinKind.CUSTOM)


class ShiftKind(enum.Enum):
    FLIP_FLOP_PERIODIC = "flip_flop_periodic"
    STANDARD_REFLECTIVE = "standard_reflective"


# (dx, dy) per coin index (j, k)
_MOVES = {(0, 0): (0, 1), (0, 1): (0, -1), (1, 0): (1, 0), (1, 1): (-1, 0)}


@dataclass(frozen=True)
class ShiftRule:
    """Basis-state permutation on the full coin x position space."""

    kind: ShiftKind

    @property
    def boundary(self) -> Boundary:
        if self.kind is ShiftKind.FLIP_FLOP_PERIODIC:
            return Boundary.PERIODIC
        return Boundary.REFLECTIVE

    def destination(self, j, k, x, y, L):
        """
        Image of ``|j,k>|x,y>`` under the shift, evaluated element-wise.

        Works on scalars or integer arrays; returns ``(j', k', x', y')``.
        """
        j, k, x, y = (np.asarray(v) for v in (j, k, x, y))
        sign = 1 - 2 * k
        dx = j * sign
        dy = (1 - j) * sign
        if self.kind is ShiftKind.FLIP_FLOP_PERIODIC:
            return j, 1 - k, (x + dx) % L, (y + dy) % L
        nx, ny = x + dx, y + dy
        inside = (nx >= 0) & (nx < L) & (ny >= 0) & (ny < L)
        return (
            j,
            np.where(inside, k, 1 - k),
            np.where(inside, nx, x),
            np.where(inside, ny, y),
        )

    def index_map(self, geometry: GridGeometry) -> NDArray[np.intp]:
        """
        Permutation ``dest`` such that the shift sends flat index ``i``
        to flat index ``dest[i]``.
        """
        L = geometry.side_length
        j, k, x, y = np.unravel_index(np.arange(geometry.dim), (2, 2, L, L))
        return np.ravel_multi_index(self.destination(j, k, x, y, L), (2, 2, L, L))


def flip_flop_shift() -> ShiftRule:
    return ShiftRule(ShiftKind.FLIP_FLOP_PERIODIC)


def standard_reflective_shift() -> ShiftRule:
    return ShiftRule(ShiftKind.STANDARD_REFLECTIVE)


class ModelLabel(enum.Enum):
    MODEL1 = "model1"
    MODEL2 = "model2"
    CUSTOM = "custom"


@dataclass(frozen=True)
class WalkModel:
    coin: CoinOperator
    shift: ShiftRule
    label: ModelLabel = ModelLabel.CUSTOM

    def __post_init__(self):
        if self.label is ModelLabel.MODEL1 and (
            self.coin.kind is not CoinKind.GROVER or self.shift.kind is not ShiftKind.FLIP_FLOP_PERIODIC
        ):
            raise ValueError("Model1 requires the Grover coin and the periodic flip-flop shift")
        if self.label is ModelLabel.MODEL2 and (
            self.coin.kind is not CoinKind.HADAMARD_TENSOR or self.shift.kind is not ShiftKind.STANDARD_REFLECTIVE
        ):
            raise ValueError("Model2 requires the Hadamard coin and the reflective standard shift")

    @property
    def boundary(self) -> Boundary:
        return self.shift.boundary

    def geometry(self, side_length: int) -> GridGeometry:
        """Grid geometry whose boundary matches this model's shift."""
        return GridGeometry(side_length, self.boundary)


def model1() -> WalkModel:
    """AKR configuration: Grover coin, flip-flop shift, periodic grid."""
    return WalkModel(grover_coin(), flip_flop_shift(), ModelLabel.MODEL1)


def model2() -> WalkModel:
    """Hadamard coin, standard shift, reflective walls."""
    return WalkModel(hadamard_coin(), standard_reflective_shift(), ModelLabel.MODEL2)


def model_from_label(label) -> WalkModel:
    label = {1: "model1", 2: "model2", "1": "model1", "2": "model2"}.get(label, label)
    label = ModelLabel(label)
    if label is ModelLabel.MODEL1:
        return model1()
    if label is ModelLabel.MODEL2:
        return model2()
    raise ValueError("custom models must be built explicitly from a coin and a shift")


def apply_coin(state: WalkerState, coin: CoinOperator) -> WalkerState:
    """Multiply the coin 4-vector at every vertex by ``coin.matrix``."""
    L = state.geometry.side_length
    a = state.amplitudes.reshape(4, L * L)
    return WalkerState((coin.matrix @ a).reshape(2, 2, L, L), state.geometry)


def _shift_flip_flop(a, out):
    # |0,0> y+1 -> |0,1>;  |0,1> y-1 -> |0,0>;  |1,0> x+1 -> |1,1>;  |1,1> x-1 -> |1,0>
    out[0, 1] = np.roll(a[0, 0], 1, axis=1)
    out[0, 0] = np.roll(a[0, 1], -1, axis=1)
    out[1, 1] = np.roll(a[1, 0], 1, axis=0)
    out[1, 0] = np.roll(a[1, 1], -1, axis=0)


def _shift_standard_reflective(a, out):
    # interior moves keep the coin; the walker bounces in place with k flipped at walls
    out[0, 0, :, 1:] = a[0, 0, :, :-1]
    out[0, 1, :, -1] = a[0, 0, :, -1]
    out[0, 1, :, :-1] = a[0, 1, :, 1:]
    out[0, 0, :, 0] = a[0, 1, :, 0]
    out[1, 0, 1:, :] = a[1, 0, :-1, :]
    out[1, 1, -1, :] = a[1, 0, -1, :]
    out[1, 1, :-1, :] = a[1, 1, 1:, :]
    out[1, 0, 0, :] = a[1, 1, 0, :]


def apply_shift(state: WalkerState, shift: ShiftRule) -> WalkerState:
    if state.geometry.boundary is not shift.boundary:
        raise ValueError(
            f"{shift.kind.value} shift needs a {shift.boundary.value} grid, "
            f"state has {state.geometry.boundary.value}"
        )
    out = np.empty_like(state.amplitudes)
    if shift.kind is ShiftKind.FLIP_FLOP_PERIODIC:
        _shift_flip_flop(state.amplitudes, out)
    else:
        _shift_standard_reflective(state.amplitudes, out)
    return WalkerState(out, state.geometry)


def walk_substep(state: WalkerState, model: WalkModel) -> WalkerState:
    """One application of ``S (C x I)``."""
    return apply_shift(apply_coin(state, model.coin), model.shift)
