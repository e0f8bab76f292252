"""The law of the quadratic Wiener functional as a weighted chi-square series.

For a weight rho whose multiplier is trace class, the functional
integral rho * xi^2 dt is distributed as sum_n w_n * zeta_n^2 with
w_n = 1/lambda_n over the signed eigenvalues of the boundary problem with
y(0) = y'(1) = 0 and i.i.d. standard normals zeta_n.  This module builds
the series from a computed spectrum, gives its exact moments, samples it
reproducibly, inverts its characteristic function for the CDF, and carries
the second-moment bound / identity checks for quadratic forms in normals:

    E[(sum_ij R_ij z_i z_j)^2] = (tr R)^2 + 2 ||R||_F^2,

bounded by (sqrt(3)+sqrt(2))^2 ||R||_1^2 for symmetric trace-class R, with
equality to 2 ||R||_F^2 when the diagonal vanishes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .klbasis import STREAM_MC_CDF, STREAM_SERIES, counter_normals
from .measure import SignedMeasure, integral_t, m_norm_sq
from .spectral import Spectrum, jacobi_eigenvalues

__all__ = [
    "ChiSquareSeries",
    "MomentSummary",
    "series_from_spectrum",
    "analytic_moments",
    "measure_moments",
    "sample_moments",
    "sample_series",
    "KSResult",
    "compare_laws",
    "nuclear_bound_check",
    "hs_identity_check",
    "cdf",
    "cdf_grid",
]


@dataclass(frozen=True)
class ChiSquareSeries:
    """Finite truncation of the weighted chi-square series.

    weights      -- w_n = 1/lambda_n, sorted by |w| descending
    tail_shift   -- trace target minus sum of kept weights, added to every
                    sample as a deterministic constant (mean-exact cut)
    trace_target -- integral t drho(t)
    var_deficit_bound -- heuristic bound 2*|w_cut|*|tail_shift| on the
                    variance lost by the cut (exact for single-signed tails)
    """

    weights: np.ndarray
    tail_shift: float
    trace_target: float
    var_deficit_bound: float

    @property
    def truncation(self) -> int:
        return len(self.weights)


@dataclass(frozen=True)
class MomentSummary:
    """Mean / variance / second moment, analytic (sample_size 0) or empirical."""

    mean: float
    variance: float
    second_moment: float
    sample_size: int = 0
    se_mean: float | None = None
    se_second: float | None = None


def series_from_spectrum(spec: Spectrum, rho: SignedMeasure,
                         weight_floor_rel: float = 1e-8,
                         max_terms: int = 5000) -> ChiSquareSeries:
    """Reciprocal-eigenvalue weights with a trace-matching tail shift.

    The series is cut where |w| drops below weight_floor_rel * |w_0| or at
    max_terms; the remaining trace is assigned as a deterministic shift.
    Spectra flagged for suspected multiple roots are refused (the weight
    multiplicity would be guessed), as are spectra containing zero.
    """
    if spec.count == 0:
        raise ValueError("empty spectrum: no eigenvalues to build the series from")
    if spec.multiplicity_suspected:
        raise ValueError("spectrum has suspected multiple roots; refusing to build series")
    lams = spec.all_eigenvalues()
    if np.any(lams == 0.0):
        raise ValueError("zero eigenvalue in spectrum")
    w = 1.0 / lams
    w = w[np.argsort(-np.abs(w))]
    keep = len(w)
    if keep > max_terms:
        keep = max_terms
    floor = weight_floor_rel * np.abs(w[0])
    below = np.nonzero(np.abs(w) < floor)[0]
    if len(below):
        keep = min(keep, int(below[0]))
    keep = max(keep, 1)
    kept = w[:keep]
    trace = integral_t(rho)
    shift = trace - float(np.sum(kept))
    w_cut = float(np.abs(kept[-1]))
    return ChiSquareSeries(weights=kept, tail_shift=shift, trace_target=trace,
                           var_deficit_bound=2.0 * w_cut * abs(shift))


def analytic_moments(series: ChiSquareSeries) -> MomentSummary:
    """Exact moments of the truncated series (shift included)."""
    mean = float(np.sum(series.weights)) + series.tail_shift
    var = float(2.0 * np.sum(series.weights**2))
    return MomentSummary(mean=mean, variance=var, second_moment=var + mean**2)


def measure_moments(rho: SignedMeasure) -> MomentSummary:
    """Moments straight from the weight: mean integral t drho, second moment
    the squared second-chaos norm.  Agrees with analytic_moments when the
    spectrum is complete."""
    mean = integral_t(rho)
    second = m_norm_sq(rho)
    return MomentSummary(mean=mean, variance=second - mean**2, second_moment=second)


def sample_moments(values: np.ndarray) -> MomentSummary:
    """Empirical summary with standard errors for mean and second moment."""
    v = np.asarray(values, dtype=float)
    n = len(v)
    mean = float(np.mean(v))
    second = float(np.mean(v**2))
    var = second - mean**2
    se_mean = float(np.std(v, ddof=1) / np.sqrt(n)) if n > 1 else None
    se_second = float(np.std(v**2, ddof=1) / np.sqrt(n)) if n > 1 else None
    return MomentSummary(mean=mean, variance=var, second_moment=second,
                         sample_size=n, se_mean=se_mean, se_second=se_second)


def sample_series(series: ChiSquareSeries, draws: int, seed: int, threads: int = 1) -> np.ndarray:
    """Per-draw values sum_n w_n zeta_n^2 + shift; deterministic per (seed, draw)."""
    if draws < 1:
        raise ValueError("draws must be >= 1")
    if series.truncation == 0:
        return np.full(draws, series.tail_shift)
    z = counter_normals(seed, draws, series.truncation, stream=STREAM_SERIES, threads=threads)
    return (z**2) @ series.weights + series.tail_shift


@dataclass(frozen=True)
class KSResult:
    statistic: float
    threshold: float
    alpha: float
    n_a: int
    n_b: int
    passed: bool


def compare_laws(sample_a: np.ndarray, sample_b: np.ndarray, alpha: float = 0.01) -> KSResult:
    """Two-sample Kolmogorov-Smirnov distance with the asymptotic threshold
    c(alpha) * sqrt((m+n)/(m*n)), c(alpha) = sqrt(-log(alpha/2)/2)."""
    a = np.sort(np.asarray(sample_a, dtype=float))
    b = np.sort(np.asarray(sample_b, dtype=float))
    if len(a) == 0 or len(b) == 0:
        raise ValueError("both samples must be nonempty")
    allv = np.concatenate([a, b])
    cdf_a = np.searchsorted(a, allv, side="right") / len(a)
    cdf_b = np.searchsorted(b, allv, side="right") / len(b)
    d = float(np.max(np.abs(cdf_a - cdf_b)))
    c = np.sqrt(-np.log(alpha / 2.0) / 2.0)
    thr = float(c * np.sqrt((len(a) + len(b)) / (len(a) * len(b))))
    return KSResult(statistic=d, threshold=thr, alpha=alpha,
                    n_a=len(a), n_b=len(b), passed=d <= thr)


def nuclear_bound_check(R: np.ndarray) -> dict:
    """Second-moment norm of the full quadratic form against the nuclear bound.

    The norm of sum_ij R_ij z_i z_j in L2(Omega) is
    sqrt((tr R)^2 + 2 ||R||_F^2); for symmetric R it never exceeds
    (sqrt(3) + sqrt(2)) * sum |eigenvalues|.
    """
    R = np.asarray(R, dtype=float)
    tr = float(np.trace(R))
    fro2 = float(np.sum(R**2))
    lhs = float(np.sqrt(tr**2 + 2.0 * fro2))
    nuclear = float(np.sum(np.abs(jacobi_eigenvalues(R))))
    bound = (np.sqrt(3.0) + np.sqrt(2.0)) * nuclear
    return {"lhs": lhs, "nuclear_norm": nuclear, "bound": bound,
            "holds": bool(lhs <= bound * (1.0 + 1e-12))}


def hs_identity_check(R: np.ndarray, draws: int = 0, seed: int = 0) -> dict:
    """For zero-diagonal symmetric R the squared norm equals 2 ||R||_F^2.

    With draws > 0 the identity is also checked empirically from sampled
    quadratic forms; the report carries the sample second moment and its
    standard error.
    """
    R = np.asarray(R, dtype=float)
    if np.any(np.diagonal(R) != 0.0):
        raise ValueError("matrix has a nonzero diagonal entry")
    analytic = float(2.0 * np.sum(R**2))
    report = {"analytic_second_moment": analytic}
    if draws > 0:
        z = counter_normals(seed, draws, R.shape[0], stream=STREAM_SERIES)
        vals = np.einsum("pi,pi->p", z @ R, z)
        ms = sample_moments(vals)
        report["empirical_second_moment"] = ms.second_moment
        report["se_second_moment"] = ms.se_second
        report["within_3se"] = bool(abs(ms.second_moment - analytic) <= 3.0 * (ms.se_second or np.inf))
    return report


# --- CDF via characteristic function inversion ------------------------------
#
# phi(t) = prod_n (1 - 2 i w_n t)^{-1/2} = e^{i Theta(t)} / Rmod(t) with
#   Theta(t) = (1/2) sum arctan(2 w_n t),
#   Rmod(t)  = prod (1 + 4 w_n^2 t^2)^{1/4},
# and the inversion F(x) = 1/2 - (1/pi) int_0^inf sin(Theta - t x)/(t Rmod) dt.
# The head [0, a] is regular (the integrand tends to sum(w) - x at 0); the
# tail is a pair of Fourier integrals handled by quadrature with cos/sin
# weight and extrapolation, which converges for any number of weights.


def _theta(ws, t):
    return 0.5 * np.sum(np.arctan(2.0 * ws * t))


def _log_rmod(ws, t):
    return 0.25 * np.sum(np.log1p(4.0 * ws * ws * t * t))


def _cdf_quad(ws: np.ndarray, x: float) -> tuple[float, float]:
    scale = float(np.sum(np.abs(ws)))
    a = 1.0 / scale

    def head(t):
        if t == 0.0:
            return float(np.sum(ws) - x)
        return np.sin(_theta(ws, t) - t * x) * np.exp(-_log_rmod(ws, t)) / t

    i_head, e_head = quad(head, 0.0, a, limit=200)
    if abs(x) * scale > 1e-8:
        g_cos = lambda t: np.exp(-_log_rmod(ws, t)) / t * np.sin(_theta(ws, t))
        g_sin = lambda t: np.exp(-_log_rmod(ws, t)) / t * np.cos(_theta(ws, t))
        i_c, e_c = quad(g_cos, a, np.inf, weight="cos", wvar=x, limit=400)
        i_s, e_s = quad(g_sin, a, np.inf, weight="sin", wvar=x, limit=400)
        i_tail = i_c - i_s
        e_tail = abs(e_c) + abs(e_s)
    else:
        tail = lambda t: np.sin(_theta(ws, t) - t * x) * np.exp(-_log_rmod(ws, t)) / t
        i_tail, e_tail = quad(tail, a, np.inf, limit=400)
    val = 0.5 - (i_head + i_tail) / np.pi
    return float(min(max(val, 0.0), 1.0)), (abs(e_head) + e_tail) / np.pi


def cdf(series: ChiSquareSeries, x: float) -> float:
    """P(sum w_n zeta_n^2 + shift <= x) by characteristic function inversion."""
    ws = series.weights
    if series.truncation == 0 or np.all(ws == 0.0):
        raise ValueError("series has no nonzero weight; the law is degenerate")
    val, _ = _cdf_quad(ws, float(x) - series.tail_shift)
    return val


def cdf_grid(series: ChiSquareSeries, xs, err_tol: float = 1e-6,
             mc_draws: int = 200000, seed: int = 0) -> tuple[np.ndarray, bool]:
    """CDF on a grid; falls back to a Monte Carlo CDF (flagged) at points
    where the quadrature error estimate exceeds err_tol."""
    ws = series.weights
    if series.truncation == 0 or np.all(ws == 0.0):
        raise ValueError("series has no nonzero weight; the law is degenerate")
    xs = np.asarray(xs, dtype=float)
    vals = np.empty_like(xs)
    bad = np.zeros(len(xs), dtype=bool)
    for i, x in enumerate(xs):
        v, err = _cdf_quad(ws, float(x) - series.tail_shift)
        vals[i] = v
        bad[i] = not np.isfinite(v) or err > err_tol
    used_mc = bool(np.any(bad))
    if used_mc:
        z = counter_normals(seed, mc_draws, series.truncation, stream=STREAM_MC_CDF)
        sample = np.sort((z**2) @ ws + series.tail_shift)
        for i in np.nonzero(bad)[0]:
            vals[i] = np.searchsorted(sample, xs[i], side="right") / mc_draws
    return vals, used_mc
