import math

import numpy as np
import pytest

# ---------------------------------------------------------------------------
# Independent dense-matrix oracle.
#
# Written from the textbook definitions with explicit loops over basis
# states; shares nothing with the package except the (j, k, x, y) flat
# ordering, which is part of the public addressing contract.


def flat(j, k, x, y, L):
    return ((2 * j + k) * L + x) * L + y


def dense_coin(coin4, L):
    return np.kron(np.asarray(coin4, dtype=complex), np.eye(L * L))


def dense_flip_flop(L):
    S = np.zeros((4 * L * L, 4 * L * L))
    for j in (0, 1):
        for k in (0, 1):
            for x in range(L):
                for y in range(L):
                    nx = (x + j * (-1) ** k) % L
                    ny = (y + (1 - j) * (-1) ** k) % L
                    S[flat(j, 1 - k, nx, ny, L), flat(j, k, x, y, L)] = 1
    return S


def dense_standard_reflective(L):
    S = np.zeros((4 * L * L, 4 * L * L))
    for j in (0, 1):
        for k in (0, 1):
            for x in range(L):
                for y in range(L):
                    nx = x + j * (-1) ** k
                    ny = y + (1 - j) * (-1) ** k
                    if 0 <= nx < L and 0 <= ny < L:
                        S[flat(j, k, nx, ny, L), flat(j, k, x, y, L)] = 1
                    else:
                        S[flat(j, 1 - k, x, y, L), flat(j, k, x, y, L)] = 1
    return S


def dense_phase(values):
    values = np.asarray(values)
    return np.diag(np.tile(np.exp(1j * values.reshape(-1)), 4))


GROVER4 = np.full((4, 4), 0.5) - np.eye(4)
HADAMARD4 = np.kron([[1, 1], [1, -1]], [[1, 1], [1, -1]]) / 2.0


def random_unit_vector(rng, n):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


# ---------------------------------------------------------------------------
# Acceptance report: one pass/fail line per criterion in the terminal summary.

_ACCEPTANCE = []


def record_acceptance(name, passed, detail):
    _ACCEPTANCE.append((name, bool(passed), detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}")


PI = math.pi
