import numpy as np
import pytest
from scipy import stats

import wienerquad as wq
from wienerquad.spectral import Spectrum


def _series(rho, bc="neumann", **kw):
    spec = wq.find_full_atomic_spectrum(rho, bc)
    return wq.series_from_spectrum(spec, rho, **kw)


def test_series_weights_uniform(rho_one):
    spec = wq.find_eigenvalues(rho_one, "neumann", 64, np.pi**2 * 64.7**2)
    ser = wq.series_from_spectrum(spec, rho_one)
    m = np.arange(len(ser.weights))
    assert np.allclose(ser.weights, 1.0 / (np.pi**2 * (m + 0.5) ** 2), rtol=1e-9)
    # the cut is mean-exact: shift mops up the remaining trace
    assert np.sum(ser.weights) + ser.tail_shift == pytest.approx(0.5, abs=1e-13)


def test_series_weights_atoms(rho_pair):
    assert _series(wq.atom(0.3)).weights == pytest.approx([0.3], abs=1e-10)
    ser = _series(rho_pair)
    assert ser.weights == pytest.approx([-0.5, 0.25], abs=1e-10)
    assert ser.tail_shift == pytest.approx(0.0, abs=1e-10)


def test_series_errors(rho_pair, rho_zero):
    empty = Spectrum(np.array([]), np.array([]), "neumann", "shooting", 10.0)
    with pytest.raises(ValueError, match="empty"):
        wq.series_from_spectrum(empty, rho_zero)
    flagged = Spectrum(np.array([1.0]), np.array([]), "neumann", "shooting", 10.0,
                       multiplicity_suspected=True)
    with pytest.raises(ValueError, match="multiple"):
        wq.series_from_spectrum(flagged, rho_pair)
    zero_eig = Spectrum(np.array([0.0, 1.0]), np.array([]), "neumann", "shooting", 10.0)
    with pytest.raises(ValueError, match="zero"):
        wq.series_from_spectrum(zero_eig, rho_pair)


def test_series_truncation_policy(rho_one):
    spec = wq.find_eigenvalues(rho_one, "neumann", 200, np.pi**2 * 200.7**2)
    ser = wq.series_from_spectrum(spec, rho_one, weight_floor_rel=1e-3)
    # cut where |w| < 1e-3 * |w0|: (2m+1)^2 > 1000 -> m >= 15
    assert ser.truncation == 16
    assert ser.tail_shift > 0
    assert ser.var_deficit_bound <= 2.0 * abs(ser.weights[-1]) * abs(ser.tail_shift) + 1e-15
    am = wq.analytic_moments(ser)
    assert am.mean == pytest.approx(0.5, abs=1e-12)


def test_moment_routes_agree(rho_one, rho_pair, rho_zero):
    mm = wq.measure_moments(rho_pair)
    assert (mm.mean, mm.second_moment) == (pytest.approx(-0.25), pytest.approx(11.0 / 16.0))
    am = wq.analytic_moments(_series(rho_pair))
    assert am.mean == pytest.approx(mm.mean, abs=1e-10)
    assert am.second_moment == pytest.approx(mm.second_moment, abs=1e-10)
    z = wq.measure_moments(rho_zero)
    assert z.mean == z.variance == z.second_moment == 0.0
    spec = wq.find_eigenvalues(rho_one, "neumann", 256, np.pi**2 * 256.7**2)
    am1 = wq.analytic_moments(wq.series_from_spectrum(spec, rho_one))
    assert am1.mean == pytest.approx(0.5, abs=1e-12)
    assert am1.second_moment == pytest.approx(7.0 / 12.0, abs=1e-9)
    assert am1.variance == pytest.approx(1.0 / 3.0, abs=1e-9)


def test_sample_series_single_weight():
    ser = wq.ChiSquareSeries(np.array([0.7]), 0.0, 0.7, 0.0)
    vals = wq.sample_series(ser, 100000, seed=17)
    assert np.all(vals >= 0)
    sm = wq.sample_moments(vals)
    assert abs(sm.mean - 0.7) <= 3.0 * sm.se_mean
    # second moment of a * chi2_1 is 3 a^2
    assert abs(sm.second_moment - 3 * 0.7**2) <= 3.0 * sm.se_second
    again = wq.sample_series(ser, 100000, seed=17)
    assert np.array_equal(vals, again)


def test_sample_series_pair_moments(rho_pair):
    ser = _series(rho_pair)
    vals = wq.sample_series(ser, 100000, seed=23)
    sm = wq.sample_moments(vals)
    assert abs(sm.mean + 0.25) <= 3.0 * sm.se_mean
    assert abs(sm.second_moment - 11.0 / 16.0) <= 3.0 * sm.se_second


def test_compare_laws_basics():
    rng = np.random.default_rng(0)
    a = rng.standard_normal(500)
    res = wq.compare_laws(a, a)
    assert res.statistic == 0.0 and res.passed
    b = wq.sample_series(wq.ChiSquareSeries(np.array([1.0]), 0.0, 1.0, 0.0), 10000, seed=1)
    c = wq.sample_series(wq.ChiSquareSeries(np.array([1.0]), 0.0, 1.0, 0.0), 10000, seed=2)
    res = wq.compare_laws(b, c)
    assert res.passed
    # threshold value at alpha = 0.01, equal sizes 1e4
    assert res.threshold == pytest.approx(np.sqrt(-np.log(0.005) / 2) * np.sqrt(2e4 / 1e8), rel=1e-12)
    shifted = c + 0.5
    assert not wq.compare_laws(b, shifted).passed
    with pytest.raises(ValueError):
        wq.compare_laws(b, np.array([]))


def test_ks_path_vs_series_pair(rho_pair):
    ens = wq.sample_normals(11, 10000, 512)
    tau = wq.tau_truncated(rho_pair, ens, 511)
    sv = wq.sample_series(_series(rho_pair), 10000, seed=11)
    assert wq.compare_laws(tau, sv).passed


def test_nuclear_bound_cases():
    rep = wq.nuclear_bound_check(np.diag([1.0]))
    assert rep["lhs"] == pytest.approx(np.sqrt(3.0), abs=1e-14)
    assert rep["bound"] == pytest.approx(np.sqrt(3.0) + np.sqrt(2.0), abs=1e-12)
    assert rep["holds"]
    # zero diagonal: lhs = sqrt(2)||R||_F <= (sqrt3+sqrt2)||R||_1
    R = np.array([[0.0, 0.7], [0.7, 0.0]])
    rep = wq.nuclear_bound_check(R)
    assert rep["lhs"] == pytest.approx(np.sqrt(2.0) * np.sqrt(np.sum(R**2)), rel=1e-12)
    assert rep["holds"]
    rng = np.random.default_rng(42)
    for _ in range(200):
        n = int(rng.integers(1, 11))
        B = rng.standard_normal((n, n))
        assert wq.nuclear_bound_check((B + B.T) / 2.0)["holds"]


def test_hs_identity():
    rep = wq.hs_identity_check(np.array([[0.0, 1.0], [1.0, 0.0]]), draws=100000, seed=3)
    assert rep["analytic_second_moment"] == 4.0
    assert rep["within_3se"]
    assert wq.hs_identity_check(np.zeros((3, 3)))["analytic_second_moment"] == 0.0
    rng = np.random.default_rng(5)
    B = rng.standard_normal((8, 8))
    R = (B + B.T) / 2.0
    np.fill_diagonal(R, 0.0)
    rep = wq.hs_identity_check(R, draws=100000, seed=6)
    assert rep["analytic_second_moment"] == pytest.approx(2.0 * np.sum(R**2), abs=1e-12)
    assert rep["within_3se"]
    with pytest.raises(ValueError):
        wq.hs_identity_check(np.eye(2))


def test_cdf_single_weight_erf_oracle():
    ser = wq.ChiSquareSeries(np.array([1.0]), 0.0, 1.0, 0.0)
    assert wq.cdf(ser, 1.0) == pytest.approx(0.6826895, abs=1e-7)
    assert wq.cdf(ser, 1.0) == pytest.approx(stats.chi2.cdf(1.0, 1), abs=1e-9)
    assert wq.cdf(ser, 3.0) == pytest.approx(stats.chi2.cdf(3.0, 1), abs=1e-9)


def test_cdf_scaling():
    a = 0.25
    sa = wq.ChiSquareSeries(np.array([a]), 0.0, a, 0.0)
    s1 = wq.ChiSquareSeries(np.array([1.0]), 0.0, 1.0, 0.0)
    for x in (0.1, 0.5, 2.0):
        assert wq.cdf(sa, x) == pytest.approx(wq.cdf(s1, x / a), abs=1e-8)


def test_cdf_pair_against_monte_carlo(rho_pair):
    ser = _series(rho_pair)
    vals = wq.sample_series(ser, 100000, seed=29)
    p0 = wq.cdf(ser, 0.0)
    frac = np.mean(vals <= 0.0)
    se = np.sqrt(p0 * (1 - p0) / len(vals))
    assert abs(frac - p0) <= 3.0 * se


def test_cdf_monotone_and_limits(rho_pair, rho_one):
    spec = wq.find_eigenvalues(rho_one, "neumann", 64, np.pi**2 * 64.7**2)
    for ser in (_series(rho_pair), wq.series_from_spectrum(spec, rho_one)):
        am = wq.analytic_moments(ser)
        sd = np.sqrt(am.variance)
        xs = np.linspace(am.mean - 6 * sd, am.mean + 6 * sd, 200)
        ps, used_mc = wq.cdf_grid(ser, xs)
        assert not used_mc
        assert np.all(np.diff(ps) >= -1e-6)
        # the law has exponential tails, so the 0/1 limits need a wider reach
        lims, _ = wq.cdf_grid(ser, [am.mean - 12 * sd, am.mean + 12 * sd])
        assert lims[0] <= 1e-4
        assert lims[1] >= 1.0 - 1e-4
    with pytest.raises(ValueError):
        wq.cdf(wq.ChiSquareSeries(np.array([0.0]), 0.0, 0.0, 0.0), 1.0)


def test_cdf_zero_point_of_positive_series(rho_one):
    spec = wq.find_eigenvalues(rho_one, "neumann", 64, np.pi**2 * 64.7**2)
    ser = wq.series_from_spectrum(spec, rho_one)
    assert wq.cdf(ser, 0.0) <= 1e-6
