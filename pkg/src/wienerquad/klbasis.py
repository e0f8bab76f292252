"""Closed-form Karhunen-Loeve basis of the Wiener process and its quadratic forms.

The basis functions

    f_k(x) = sqrt(8) * sin(pi*(k+1/2)*x) / (pi*(2k+1)),   k = 0, 1, ...

are orthonormal in the energy space {y : y(0)=0} with norm ||y'||_L2, and
the path expansion xi(t) = sum_k f_k(t) xi_k over i.i.d. standard normals
xi_k reproduces the Wiener covariance min(t,s).  Coefficient matrices
r_ij(rho) = integral rho * f_i f_j are evaluated in closed form (products
of sines integrate to cosine differences), so identity tests are free of
quadrature error.

Monte Carlo draws use a counter-based generator: the normals for draw p
are produced by a Philox stream whose counter block is indexed by p alone,
so ensembles are reproducible, extend without reshuffling when the draw
count grows, and are independent of how generation is chunked over threads.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .measure import SignedMeasure, primitive

__all__ = [
    "basis_eval",
    "basis_deriv",
    "kernel_partial_sum",
    "coeff_matrix",
    "coeff_diag",
    "diag_coeff_via_primitive",
    "SampleEnsemble",
    "sample_normals",
    "counter_normals",
    "path_values",
    "tau_truncated",
    "tau_split",
    "write_values_csv",
    "write_paths_csv",
]

_SQRT8 = np.sqrt(8.0)

# Philox stream ids; the second key word keeps the ensemble, series-sampling
# and fallback streams disjoint for a common seed.
STREAM_ENSEMBLE = 0
STREAM_SERIES = 1
STREAM_MC_CDF = 2


def _alphas(count: int) -> np.ndarray:
    """Frequencies pi*(k+1/2) for k < count."""
    return np.pi * (np.arange(count) + 0.5)


def basis_eval(k, x):
    """f_k(x); vectorizes over k and x together (broadcasting)."""
    k = np.asarray(k)
    x = np.asarray(x, dtype=float)
    return _SQRT8 * np.sin(np.pi * (k + 0.5) * x) / (np.pi * (2 * k + 1))


def basis_deriv(k, x):
    """f_k'(x) = sqrt(2) * cos(pi*(k+1/2)*x)."""
    k = np.asarray(k)
    x = np.asarray(x, dtype=float)
    return np.sqrt(2.0) * np.cos(np.pi * (k + 0.5) * x)


def kernel_partial_sum(count: int, t, s):
    """sum_{k<count} f_k(t) f_k(s); converges to min(t,s) uniformly."""
    k = np.arange(count)
    t = np.asarray(t, dtype=float)
    s = np.asarray(s, dtype=float)
    ft = basis_eval(k, t[..., None])
    fs = basis_eval(k, s[..., None])
    return np.sum(ft * fs, axis=-1)


def _cos_integral(beta: np.ndarray, u: float, v: float) -> np.ndarray:
    """integral_u^v cos(beta x) dx, with the beta -> 0 limit v - u."""
    out = np.empty_like(beta)
    small = np.abs(beta) < 1e-300
    b = np.where(small, 1.0, beta)
    out = (np.sin(b * v) - np.sin(b * u)) / b
    return np.where(small, v - u, out)


def coeff_matrix(rho: SignedMeasure, count: int) -> np.ndarray:
    """Symmetric matrix r_ij(rho) = integral rho * f_i f_j, i,j < count.

    Atoms contribute rank-one terms w * f(a) f(a)^T; density pieces are
    integrated in closed form.  For rho >= 0 the matrix is positive
    semidefinite.
    """
    al = _alphas(count)
    norm = _SQRT8 / (np.pi * (2 * np.arange(count) + 1))
    R = np.zeros((count, count))
    for a, w in rho.atoms:
        f = norm * np.sin(al * a)
        R += w * np.outer(f, f)
    diff = al[:, None] - al[None, :]
    summ = al[:, None] + al[None, :]
    pref = np.outer(norm, norm) / 2.0
    b = np.asarray(rho.breakpoints)
    for u, v, c in zip(b[:-1], b[1:], rho.values):
        if c == 0.0:
            continue
        R += c * pref * (_cos_integral(diff, u, v) - _cos_integral(summ, u, v))
    return (R + R.T) / 2.0


def coeff_diag(rho: SignedMeasure, count: int) -> np.ndarray:
    """Diagonal r_kk(rho) for k < count, without forming the full matrix."""
    al = _alphas(count)
    norm2 = 8.0 / (np.pi * (2 * np.arange(count) + 1)) ** 2
    d = np.zeros(count)
    for a, w in rho.atoms:
        d += w * norm2 * np.sin(al * a) ** 2
    b = np.asarray(rho.breakpoints)
    for u, v, c in zip(b[:-1], b[1:], rho.values):
        if c == 0.0:
            continue
        d += c * norm2 / 2.0 * ((v - u) - _cos_integral(2 * al, u, v))
    return d


def diag_coeff_via_primitive(rho: SignedMeasure, k: int) -> float:
    """r_kk(rho) evaluated through the primitive P of rho.

    Uses the identity r_kk = -4/(pi*(2k+1)) * integral_0^1 P(x) sin(pi*(2k+1)x) dx
    with the integral over each affine piece of P done in closed form.  Must
    agree with coeff_diag to rounding error; exposed as a built-in cross-check.
    """
    P = primitive(rho)
    beta = np.pi * (2 * k + 1)
    x0, x1 = P.xs[:-1], P.xs[1:]
    a, s = P.starts, P.slopes
    # piece is c0 + c1*x with c0 = a - s*x0, c1 = s
    c0 = a - s * x0
    c1 = s

    def anti(x):
        return -(c0 + c1 * x) * np.cos(beta * x) / beta + c1 * np.sin(beta * x) / beta**2

    integral = float(np.sum(anti(x1) - anti(x0)))
    return -4.0 / (np.pi * (2 * k + 1)) * integral


@dataclass(frozen=True)
class SampleEnsemble:
    """Reproducible matrix of standard normal mode coefficients.

    xi[p, k] is the k-th coefficient of draw p.  Fully determined by
    (seed, draws, modes); row p depends only on (seed, p), so enlarging the
    draw count extends the ensemble without reshuffling existing rows.
    """

    seed: int
    draws: int
    modes: int
    xi: np.ndarray


def _philox_row(seed: int, stream: int, row: int, count: int) -> np.ndarray:
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, stream], dtype=np.uint64)
    counter = np.array([0, 0, row, 0], dtype=np.uint64)
    bg = np.random.Philox(key=key, counter=counter)
    return np.random.Generator(bg).standard_normal(count)


def counter_normals(seed: int, draws: int, count: int, stream: int = STREAM_ENSEMBLE,
                    threads: int = 1) -> np.ndarray:
    """draws x count standard normals from per-draw counter-keyed streams.

    Row p is a pure function of (seed, stream, p); the threads argument only
    chunks the work and cannot change the result.
    """
    out = np.empty((draws, count))

    def fill(lo: int, hi: int):
        for p in range(lo, hi):
            out[p] = _philox_row(seed, stream, p, count)

    if threads <= 1 or draws < 256:
        fill(0, draws)
    else:
        chunk = (draws + threads - 1) // threads
        spans = [(i, min(i + chunk, draws)) for i in range(0, draws, chunk)]
        with ThreadPoolExecutor(max_workers=threads) as ex:
            list(ex.map(lambda s: fill(*s), spans))
    return out


def sample_normals(seed: int, draws: int, modes: int, threads: int = 1) -> SampleEnsemble:
    """Build a reproducible ensemble of standard-normal mode coefficients."""
    if draws < 1 or modes < 1:
        raise ValueError("draws and modes must be >= 1")
    xi = counter_normals(seed, draws, modes, stream=STREAM_ENSEMBLE, threads=threads)
    return SampleEnsemble(seed=seed, draws=draws, modes=modes, xi=xi)


def path_values(ens: SampleEnsemble, grid) -> np.ndarray:
    """Truncated path sums xi(t) = sum_k f_k(t) xi_k on the grid.

    Returns a draws x len(grid) matrix.
    """
    grid = np.asarray(grid, dtype=float)
    k = np.arange(ens.modes)
    F = basis_eval(k[None, :], grid[:, None])  # len(grid) x modes
    return ens.xi @ F.T


def tau_truncated(rho: SignedMeasure, ens: SampleEnsemble, n: int) -> np.ndarray:
    """Per-draw truncated quadratic form sum_{k,l<=n} r_kl(rho) xi_k xi_l."""
    if n + 1 > ens.modes:
        raise ValueError(f"cutoff n={n} exceeds ensemble modes {ens.modes}")
    R = coeff_matrix(rho, n + 1)
    xi = ens.xi[:, : n + 1]
    return np.einsum("pi,pi->p", xi @ R, xi)


def tau_split(rho: SignedMeasure, ens: SampleEnsemble, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Diagonal / off-diagonal split (tau_d, tau_n) with tau_d + tau_n == tau.

    tau_d sums r_kk xi_k^2; tau_n collects the mixed terms.  The sum equals
    tau_truncated exactly (the off-diagonal part is formed by subtraction).
    """
    if n + 1 > ens.modes:
        raise ValueError(f"cutoff n={n} exceeds ensemble modes {ens.modes}")
    R = coeff_matrix(rho, n + 1)
    xi = ens.xi[:, : n + 1]
    tau = np.einsum("pi,pi->p", xi @ R, xi)
    tau_d = (xi**2) @ np.diag(R).copy()
    return tau_d, tau - tau_d


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def write_values_csv(path, values) -> None:
    """Per-draw functional values; columns: draw,value."""
    with open(path, "w") as fh:
        fh.write("draw,value\n")
        for p, v in enumerate(np.asarray(values)):
            fh.write(f"{p},{_fmt(v)}\n")


def write_paths_csv(path, grid, paths) -> None:
    """Path dump; columns: draw,t,value (draw-major row order)."""
    grid = np.asarray(grid)
    paths = np.asarray(paths)
    with open(path, "w") as fh:
        fh.write("draw,t,value\n")
        for p in range(paths.shape[0]):
            for t, v in zip(grid, paths[p]):
                fh.write(f"{p},{_fmt(t)},{_fmt(v)}\n")
