import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qwsearch import experiments as ex
from qwsearch.operators import model1, model2


@pytest.fixture(autouse=True)
def fresh_cache():
    ex.clear_cache()
    yield
    ex.clear_cache()


# --- power-law fits --------------------------------------------------------


def test_fit_exact_square_root():
    fit = ex.fit_power_law([(N, N**0.5) for N in (100, 400, 900)])
    assert abs(fit.exponent - 0.5) <= 1e-12
    assert fit.prefactor == pytest.approx(1.0, rel=1e-12)
    assert fit.residual <= 1e-12


def test_fit_constant():
    fit = ex.fit_power_law([(N, 3.0) for N in (100, 400, 900, 1600)])
    assert abs(fit.exponent) <= 1e-12
    assert fit.prefactor == pytest.approx(3.0, rel=1e-12)


def test_fit_noisy_recovery():
    rng = np.random.default_rng(7)
    N = np.array([L * L for L in range(20, 201, 20)], dtype=float)
    y = 2 * N**-0.05 * (1 + 0.01 * rng.standard_normal(N.size))
    fit = ex.fit_power_law(np.column_stack([N, y]))
    assert abs(fit.exponent + 0.05) <= 0.01
    assert fit.residual < 0.02


@settings(max_examples=100, deadline=None)
@given(a=st.floats(-3, 3), pre=st.floats(1e-3, 1e3))
def test_fit_planted_exponent(a, pre):
    N = np.array([400.0, 1600.0, 3600.0, 6400.0, 10000.0, 40000.0])
    fit = ex.fit_power_law(np.column_stack([N, pre * N**a]))
    assert abs(fit.exponent - a) <= 1e-12
    assert fit.prefactor == pytest.approx(pre, rel=1e-9)


@pytest.mark.parametrize("pts", [[(1, 1), (2, 2)], [(1, 1), (2, 0), (3, 3)], [(1, 1), (-2, 2), (3, 3)]])
def test_fit_rejects_bad_input(pts):
    with pytest.raises(ValueError):
        ex.fit_power_law(pts)


def test_fit_callable():
    fit = ex.fit_power_law([(N, 2 * N**0.74) for N in (400, 1600, 6400)])
    assert fit(10_000) == pytest.approx(2 * 10_000**0.74, rel=1e-9)


# --- criteria --------------------------------------------------------------


def test_near_uniform_criterion_examples():
    pu = 1e-4
    assert ex.near_uniform_criterion(pu, pu, 0.0)
    assert ex.near_uniform_criterion(2 * pu, pu, 0.5)
    assert not ex.near_uniform_criterion(2.01 * pu, pu, 0.5)


def test_below_akr_criterion_examples():
    assert ex.below_akr_criterion(0.05, 0.1, 0.5)
    assert not ex.below_akr_criterion(0.0501, 0.1, 0.5)


def test_epsilon_guards():
    with pytest.raises(ValueError):
        ex.find_sigma_below_akr(10, 1.0)
    with pytest.raises(ValueError):
        ex.find_sigma_below_akr(10, 0.0)
    with pytest.raises(ValueError):
        ex.find_sigma_near_uniform(10, 1.0)


# --- peaks and AKR reference ----------------------------------------------


@pytest.mark.parametrize("L", [20, 50])
def test_akr_reference_matches_tiny_sigma(L):
    assert abs(ex.akr_peak(L)[1] - ex.peak_probability(L, 0.001)[1]) <= 1e-6


def test_peak_cache_returns_same_value():
    a = ex.peak_probability(16, 0.4)
    b = ex.peak_probability(16, 0.4)
    assert a == b
    ex.clear_cache()
    assert ex.peak_probability(16, 0.4) == a


# --- thresholds ------------------------------------------------------------

SMALL_SCAN = ex.default_sigma_scan(-2, 3, 10)


@pytest.mark.parametrize(
    "finder, eps", [(ex.find_sigma_below_akr, 0.5), (ex.find_sigma_below_akr, 0.1), (ex.find_sigma_near_uniform, 0.5)]
)
def test_threshold_certificate(finder, eps):
    L = 20
    res = finder(L, eps, sigmas=SMALL_SCAN)
    assert res.found
    lo, hi = res.bracket
    assert hi == res.sigma_star
    assert lo < hi <= lo * 1.01 + 1e-15
    assert SMALL_SCAN[0] <= res.sigma_star <= SMALL_SCAN[-1]
    p_star, ok_star = res.certificate[res.sigma_star]
    p_below, ok_below = res.certificate[res.sigma_star / 1.05]
    assert ok_star and not ok_below
    assert res.certificate[lo][1] is False


def test_threshold_at_bottom_of_scan():
    # every sigma in [1e3, 1e4] is flat enough to be close to uniform
    res = ex.find_sigma_near_uniform(20, 0.5, sigmas=np.logspace(3, 4, 5))
    assert res.sigma_star == 1e3
    assert res.bracket == (None, 1e3)


def test_threshold_not_found():
    res = ex.find_sigma_below_akr(20, 0.5, sigmas=[0.01, 0.02, 0.05])
    assert not res.found
    assert res.sigma_star is None


def test_threshold_flags_nonmonotone(monkeypatch):
    # planted peak profile: crosses at sigma=1, un-crosses at sigma=10
    profile = {0.1: 0.9, 1.0: 0.1, 10.0: 0.9, 100.0: 0.1}

    def fake(L, sigma, c, model, window):
        if sigma in profile:
            return (0, profile[sigma])
        return (0, 0.9 if sigma < 1.0 else 0.1)

    monkeypatch.setattr(ex, "_gaussian_peak", fake)
    monkeypatch.setattr(ex, "_akr_peak", lambda L, window: (0, 1.0))
    res = ex.find_sigma_below_akr(10, 0.5, sigmas=[0.1, 1.0, 10.0, 100.0])
    assert res.sigma_star == pytest.approx(1.0, rel=0.011)
    assert res.nonmonotone


def test_threshold_scaling_small():
    res = ex.threshold_scaling(ex.Criterion.BELOW_FRACTION_OF_AKR, 0.5, grid_sizes=(10, 14, 20), sigmas=SMALL_SCAN)
    assert len(res.thresholds) == 3
    assert res.fit is not None and res.fit.n_points == 3
    assert math.isfinite(res.exponent)


def test_bad_scan_rejected():
    with pytest.raises(ValueError):
        ex.find_sigma_below_akr(10, 0.5, sigmas=[1.0, 0.5])
    with pytest.raises(ValueError):
        ex.find_sigma_below_akr(10, 0.5, sigmas=[])


# --- sweeps ----------------------------------------------------------------


def test_sweep_spec_validation():
    with pytest.raises(ValueError):
        ex.SweepSpec(grid_sizes=[])
    with pytest.raises(ValueError):
        ex.SweepSpec(sigmas=[0.0])


def test_sigma_sweep_sorted_and_reproducible():
    spec = ex.SweepSpec([16, 12], [2.0, 0.3, 0.05], window=(0, 40))
    t1 = ex.sigma_sweep(spec)
    keys = [r.sort_key() for r in t1]
    assert keys == sorted(keys)
    assert len(t1) == 6
    for r in t1:
        assert 0 <= r.p_max <= 1
        assert r.p_uniform == 1 / r.L**2
        assert r.p_akr == ex.akr_peak(r.L, (0, 40))[1]
    ex.clear_cache()
    t2 = ex.sigma_sweep(spec)
    assert [r.p_max for r in t1] == [r.p_max for r in t2]


def test_sweep_parallel_matches_serial():
    spec = ex.SweepSpec([12], [0.2, 0.5, 3.0], window=(0, 36))
    serial = ex.sigma_sweep(spec, jobs=1)
    ex.clear_cache()
    parallel = ex.sigma_sweep(spec, jobs=2)
    assert [(r.sort_key(), r.p_max, r.t_peak) for r in serial] == [(r.sort_key(), r.p_max, r.t_peak) for r in parallel]


def test_sweep_row_errors_do_not_abort(monkeypatch):
    real = ex._gaussian_peak

    def flaky(L, sigma, c, model, window):
        if sigma == 0.5:
            raise RuntimeError("boom")
        return real(L, sigma, c, model, window)

    monkeypatch.setattr(ex, "_gaussian_peak", flaky)
    table = ex.sigma_sweep(ex.SweepSpec([10], [0.1, 0.5, 1.0]))
    bad = table.select(sigma=0.5)[0]
    assert "boom" in bad.error and math.isnan(bad.p_max)
    assert all(r.error is None for r in table.select(sigma=1.0))


def test_lambda_sweep_zero_height_is_uniform():
    table = ex.lambda_sweep(ex.SweepSpec([20], [0.1, 1.0, 10.0], [0.0, 1.0]))
    for r in table.select(c=0.0):
        assert abs(r.p_max - 1 / 400) <= 1e-12
    assert len(table.column("p_max", c=1.0)) == 3


def test_compare_models_pairs_rows():
    table = ex.compare_models(12, sigmas=[0.1, 2.0], c_values=[1.0], window=(0, 30))
    assert len(table) == 4
    assert set(r.model for r in table) == {"model1", "model2"}
    m1 = table.column("p_max", model="model1")
    m2 = table.column("p_max", model="model2")
    assert m1.shape == m2.shape == (2,)


def test_model2_sweep_uses_reflective_walls():
    a = ex.peak_probability(12, 1.0, 1.0, model2(), (0, 30))
    b = ex.peak_probability(12, 1.0, 1.0, model1(), (0, 30))
    assert a != b
