import numpy as np
import pytest

from qwsearch.operators import (
    CoinKind,
    ModelLabel,
    ShiftKind,
    WalkModel,
    apply_coin,
    apply_shift,
    custom_coin,
    flip_flop_shift,
    grover_coin,
    hadamard_coin,
    model1,
    model2,
    model_from_label,
    standard_reflective_shift,
    walk_substep,
)
from qwsearch.state import Boundary, GridGeometry, WalkerState, basis_state, norm, uniform_state

from conftest import GROVER4, HADAMARD4, dense_flip_flop, dense_standard_reflective, random_unit_vector

# --- coins -----------------------------------------------------------------


def test_grover_entries():
    G = grover_coin().matrix
    assert np.allclose(np.diag(G), -0.5, atol=0)
    assert np.allclose(G[~np.eye(4, dtype=bool)], 0.5, atol=0)
    assert np.allclose(G, GROVER4)


def test_hadamard_matches_sylvester():
    assert np.allclose(hadamard_coin().matrix, HADAMARD4, atol=1e-15)


@pytest.mark.parametrize("coin", [grover_coin(), hadamard_coin()])
def test_coins_unitary(coin):
    M = coin.matrix
    assert np.abs(M @ M.conj().T - np.eye(4)).max() <= 1e-12


def test_custom_coin_validation():
    with pytest.raises(ValueError):
        custom_coin(np.ones((4, 4)))
    with pytest.raises(ValueError):
        custom_coin(np.eye(3))
    c = custom_coin(np.diag([1, 1j, -1, -1j]))
    assert c.kind is CoinKind.CUSTOM


def test_coin_matrix_frozen():
    with pytest.raises(ValueError):
        grover_coin().matrix[0, 0] = 1


def _coin_vector_at(state, x, y):
    return state.amplitudes[:, :, x, y].reshape(4)


def test_grover_on_basis_coin():
    g = GridGeometry(4)
    out = apply_coin(basis_state(g, 0, 0, 1, 2), grover_coin())
    assert np.allclose(_coin_vector_at(out, 1, 2), [-0.5, 0.5, 0.5, 0.5], atol=1e-15)
    others = out.amplitudes.copy()
    others[:, :, 1, 2] = 0
    assert not others.any()


def test_grover_fixes_d():
    g = GridGeometry(3)
    amps = np.zeros((2, 2, 3, 3), complex)
    amps[:, :, 1, 1] = 0.5
    out = apply_coin(WalkerState(amps, g), grover_coin())
    assert np.allclose(out.amplitudes, amps, atol=1e-15)


def test_hadamard_on_basis_coin():
    out = apply_coin(basis_state(GridGeometry(3), 0, 0, 0, 0), hadamard_coin())
    assert np.allclose(_coin_vector_at(out, 0, 0), [0.5] * 4, atol=1e-15)


def test_coin_preserves_norm_random(rng):
    g = GridGeometry(6)
    for coin in (grover_coin(), hadamard_coin()):
        for _ in range(100):
            s = WalkerState(random_unit_vector(rng, g.dim), g)
            assert abs(norm(apply_coin(s, coin)) - norm(s)) <= 1e-12


# --- shifts ----------------------------------------------------------------


def _image(state):
    idx = np.flatnonzero(state.flat)
    assert len(idx) == 1
    return np.unravel_index(idx[0], state.amplitudes.shape)


def test_flip_flop_examples():
    g = GridGeometry(5)
    out = apply_shift(basis_state(g, 0, 0, 2, 4), flip_flop_shift())
    assert _image(out) == (0, 1, 2, 0)
    g4 = GridGeometry(4)
    out = apply_shift(basis_state(g4, 1, 1, 0, 0), flip_flop_shift())
    assert _image(out) == (1, 0, 3, 0)


def test_reflective_bounce():
    L = 6
    g = GridGeometry(L, Boundary.REFLECTIVE)
    s = standard_reflective_shift()
    assert _image(apply_shift(basis_state(g, 0, 0, 3, L - 1), s)) == (0, 1, 3, L - 1)
    assert _image(apply_shift(basis_state(g, 0, 0, 3, 2), s)) == (0, 0, 3, 3)
    assert _image(apply_shift(basis_state(g, 1, 1, 0, 2), s)) == (1, 0, 0, 2)
    assert _image(apply_shift(basis_state(g, 1, 0, L - 1, 2), s)) == (1, 1, L - 1, 2)


def test_shift_boundary_mismatch():
    with pytest.raises(ValueError):
        apply_shift(uniform_state(GridGeometry(4)), standard_reflective_shift())
    with pytest.raises(ValueError):
        apply_shift(uniform_state(GridGeometry(4, Boundary.REFLECTIVE)), flip_flop_shift())


@pytest.mark.parametrize("L", range(2, 9))
@pytest.mark.parametrize("shift", [flip_flop_shift(), standard_reflective_shift()])
def test_shift_is_bijection(L, shift):
    dest = shift.index_map(GridGeometry(L, shift.boundary))
    assert np.array_equal(np.sort(dest), np.arange(4 * L * L))


@pytest.mark.parametrize("L", [2, 3, 4, 5])
def test_flip_flop_involution(L):
    dest = flip_flop_shift().index_map(GridGeometry(L))
    assert np.array_equal(dest[dest], np.arange(4 * L * L))


@pytest.mark.parametrize("L", [2, 3, 4, 7])
@pytest.mark.parametrize(
    "shift, dense",
    [(flip_flop_shift(), dense_flip_flop), (standard_reflective_shift(), dense_standard_reflective)],
)
def test_shift_matches_dense_oracle(L, shift, dense, rng):
    g = GridGeometry(L, shift.boundary)
    S = dense(L)
    # brute force over all basis states, and one random superposition
    for i in range(g.dim):
        e = np.zeros(g.dim, complex)
        e[i] = 1
        assert np.array_equal(apply_shift(WalkerState(e, g), shift).flat, S @ e)
    v = random_unit_vector(rng, g.dim)
    assert np.allclose(apply_shift(WalkerState(v, g), shift).flat, S @ v, atol=1e-15)


def test_index_map_agrees_with_apply_shift():
    for shift in (flip_flop_shift(), standard_reflective_shift()):
        g = GridGeometry(5, shift.boundary)
        dest = shift.index_map(g)
        v = np.arange(g.dim, dtype=complex)
        expected = np.empty_like(v)
        expected[dest] = v
        assert np.array_equal(apply_shift(WalkerState(v, g), shift).flat, expected)


# --- models and substep ----------------------------------------------------


def test_model_labels():
    assert model1().coin.kind is CoinKind.GROVER
    assert model1().shift.kind is ShiftKind.FLIP_FLOP_PERIODIC
    assert model2().coin.kind is CoinKind.HADAMARD_TENSOR
    assert model2().shift.kind is ShiftKind.STANDARD_REFLECTIVE
    assert model_from_label(2) == model2()
    with pytest.raises(ValueError):
        WalkModel(hadamard_coin(), flip_flop_shift(), ModelLabel.MODEL1)
    with pytest.raises(ValueError):
        WalkModel(grover_coin(), standard_reflective_shift(), ModelLabel.MODEL2)


@pytest.mark.parametrize("L", [2, 5, 100])
def test_akr_uniform_fixed_point(L):
    u = uniform_state(GridGeometry(L))
    out = walk_substep(u, model1())
    assert np.abs(out.amplitudes - u.amplitudes).max() <= 1e-12


def test_substep_inverse_on_basis_states():
    g = GridGeometry(4)
    m = model1()
    inverse_coin = custom_coin(m.coin.matrix.conj().T)
    for j, k, x, y in [(0, 0, 0, 0), (1, 1, 3, 2), (0, 1, 2, 3)]:
        s = basis_state(g, j, k, x, y)
        back = apply_coin(apply_shift(walk_substep(s, m), m.shift), inverse_coin)
        assert np.allclose(back.amplitudes, s.amplitudes, atol=1e-15)


def test_substep_norm_long_run():
    g = GridGeometry(100)
    s = basis_state(g, 0, 1, 10, 20)
    for model in (model1(), model2()):
        st = WalkerState(s.amplitudes, model.geometry(100))
        for _ in range(1000):
            st = walk_substep(st, model)
        assert abs(norm(st) - 1) <= 1e-9
