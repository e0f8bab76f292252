"""Comb weights whose multiplier is Hilbert-Schmidt but not trace class.

The basic comb rho_n places alternating unit atoms at (k-1/2)/n (weight +1)
and k/n (weight -1), k = 1..n.  Its Dirichlet shooting value converges to
omega(lambda) = 2*sin(lambda/2)/lambda, so the m-th positive eigenvalue
approaches 2*pi*m from below as the tooth count grows.

Scaled copies rho_{N,n} live on (2^-N, 2^-{N+1}]... precisely on
(2^-N, 2^-N+1] with atoms at (n+k-1/2)/(2^N n) and (n+k)/(2^N n); their
squared dual norm is exactly 2^(-N-1), so stacking one copy per dyadic level
converges in the dual space while each level keeps contributing order
log(n)/2^N to the sum of absolute reciprocal eigenvalues.  Choosing the
tooth counts level by level makes the m-th eigenvalue of the stacked
problem beat the schedule 2*pi*m*log(m), which is incompatible with a
summable reciprocal series: the multiplier cannot be trace class.

Comb spectra are handled through the per-cell transfer matrix: every cell
[k/n, (k+1)/n] applies the same unimodular matrix M(lambda), so the
shooting value is a Chebyshev evaluation of M^n -- an exact rewriting of
the matrix product that costs O(1) per lambda and stays honest as a root
bracketing target (cross-checked against the generic propagator in tests).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .measure import SignedMeasure, atoms_measure, combine
from .spectral import DIRICHLET, NEUMANN, find_eigenvalues, limit_omega, shooting_function

__all__ = [
    "rho_comb",
    "rho_scaled",
    "rho_nu",
    "comb_shooting",
    "comb_eigenvalue",
    "comb_eigenvalues",
    "comb_eigenvalue_table",
    "omega_convergence_report",
    "sub_problem_eigenvalues",
    "MajorizationReport",
    "majorization_check",
    "NuEvidence",
    "choose_nu",
]


def rho_comb(n: int) -> SignedMeasure:
    """Alternating comb: +1 at (k-1/2)/n, -1 at k/n, k = 1..n."""
    if n < 1:
        raise ValueError("n must be >= 1")
    pairs = []
    for k in range(1, n + 1):
        pairs.append(((k - 0.5) / n, 1.0))
        pairs.append((k / n, -1.0))
    return atoms_measure(pairs)


def rho_scaled(N: int, n: int) -> SignedMeasure:
    """Dyadic-level copy: +1 at (n+k-1/2)/(2^N n), -1 at (n+k)/(2^N n)."""
    if N < 1 or n < 1:
        raise ValueError("N and n must be >= 1")
    den = float(2**N * n)
    pairs = []
    for k in range(1, n + 1):
        pairs.append(((n + k - 0.5) / den, 1.0))
        pairs.append(((n + k) / den, -1.0))
    return atoms_measure(pairs)


def rho_nu(nu: list[int]) -> SignedMeasure:
    """Finite stack sum_N rho_{N, nu[N-1]} over levels N = 1..len(nu)."""
    return combine((1.0, rho_scaled(N, n)) for N, n in enumerate(nu, start=1))


# --- fast comb shooting -------------------------------------------------------
#
# One cell of rho_n composes (free half-cell, +1 atom, free half-cell, -1 atom)
# into M(lambda) with trace 2 - (lambda*h)^2, h = 1/(2n), det 1.  Hence
# M^n = U_{n-1}(x) M - U_{n-2}(x) I with x = 1 - (lambda*h)^2 / 2 and the
# Dirichlet shooting value from (y,y')=(0,1) is U_{n-1}(x) * (2h - lambda h^2).


def _cheb_u(x: np.ndarray, n: int) -> np.ndarray:
    """U_n(x) for scalar order n, vectorized in x, stable on both branches."""
    x = np.asarray(x, dtype=float)
    out = np.empty_like(x)
    inside = np.abs(x) <= 1.0
    th = np.arccos(np.clip(x, -1.0, 1.0))
    s = np.sin(th)
    tiny = s < 1e-9
    with np.errstate(divide="ignore", invalid="ignore"):
        val = np.sin((n + 1) * th) / s
    # limits U_n(1) = n+1, U_n(-1) = (n+1)(-1)^n
    lim = np.where(x > 0, n + 1.0, (n + 1.0) * (-1.0) ** n)
    out[inside] = np.where(tiny, lim, val)[inside]
    big = ~inside
    if np.any(big):
        xa = np.abs(x[big])
        phi = np.arccosh(xa)
        sg = np.sign(x[big]) ** n
        with np.errstate(over="ignore"):
            out[big] = sg * np.sinh((n + 1) * phi) / np.sinh(phi)
    return out


def comb_shooting(n: int, lam) -> np.ndarray:
    """Dirichlet shooting value y(1) for rho_n, via the per-cell matrix power."""
    lam = np.asarray(lam, dtype=float)
    h = 1.0 / (2.0 * n)
    x = 1.0 - (lam * h) ** 2 / 2.0
    return _cheb_u(x, n - 1) * (2.0 * h - lam * h**2)


def comb_eigenvalue(n: int, m: int, sign: int = 1, rtol: float = 1e-12) -> float:
    """m-th eigenvalue (from zero, by |lambda|) of the Dirichlet comb problem.

    The comb has n positive eigenvalues and n-1 negative ones; the bracket
    comes from the phase of the cell matrix and the root is pinned by
    bisection on the actual shooting value.
    """
    if n < 1 or m < 1:
        raise ValueError("n and m must be >= 1")
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    if (sign == 1 and m > n) or (sign == -1 and m > n - 1):
        raise ValueError(f"comb with n={n} has no eigenvalue of index m={m}, sign {sign}")
    top = 4.0 * n
    if sign == 1 and m == n:
        lo = top * np.sin((n - 0.5) * np.pi / (2 * n))
        hi = top * 1.05
    else:
        lo = top * np.sin((m - 0.5) * np.pi / (2 * n))
        hi = top * np.sin((m + 0.5) * np.pi / (2 * n)) if m + 1 <= n else top * (1.0 - 1e-12)
        # the m = n-1 bracket must stop short of the top root at 4n
        if m == n - 1:
            hi = 0.5 * (top * np.sin((n - 0.5) * np.pi / (2 * n)) + top)
    lo, hi = sign * lo, sign * hi
    flo = float(comb_shooting(n, lo))
    fhi = float(comb_shooting(n, hi))
    if flo == 0.0:
        return float(lo)
    if fhi == 0.0:
        return float(hi)
    if flo * fhi > 0:
        raise RuntimeError(f"comb bracket failed for n={n}, m={m}, sign={sign}")
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if abs(hi - lo) <= rtol * abs(mid):
            break
        fm = float(comb_shooting(n, mid))
        if flo * fm <= 0:
            hi = mid
        else:
            lo, flo = mid, fm
    return float(0.5 * (lo + hi))


def comb_eigenvalues(n: int, m_max: int, sign: int = 1) -> np.ndarray:
    limit = n if sign == 1 else n - 1
    return np.array([comb_eigenvalue(n, m, sign) for m in range(1, min(m_max, limit) + 1)])


def comb_eigenvalue_table(n_list, m_max: int) -> list[dict]:
    """Rows (n, m, lambda, gap_to_2pim) for the Dirichlet comb problems."""
    rows = []
    for n in n_list:
        for m in range(1, m_max + 1):
            lam = comb_eigenvalue(n, m)
            rows.append({"n": int(n), "m": m, "lambda": lam, "gap_to_2pim": lam - 2 * np.pi * m})
    return rows


def omega_convergence_report(n_list, lam_grid=None) -> list[dict]:
    """sup |shooting(rho_n, ., dirichlet) - omega| per n over the grid.

    Uses the generic propagator (not the comb fast path); default grid is
    401 points on [-20, 20].
    """
    if lam_grid is None:
        lam_grid = np.linspace(-20.0, 20.0, 401)
    lam_grid = np.asarray(lam_grid, dtype=float)
    target = limit_omega(lam_grid)
    out = []
    for n in n_list:
        vals = shooting_function(rho_comb(n), lam_grid, DIRICHLET)
        out.append({"n": int(n), "sup_gap": float(np.max(np.abs(vals - target)))})
    return out


def sub_problem_eigenvalues(N: int, n: int, m_max: int) -> np.ndarray:
    """Positive eigenvalues of the level-N comb pinned at both dyadic ends.

    Direct shooting on [2^-N, 2^(-N+1)] with y = 0 at both endpoints; equals
    2^N times the unit-interval comb eigenvalues by the scaling x -> 2^-N(1+u).
    """
    guess = 2.0**N * 4.0 * n
    spec = find_eigenvalues(rho_scaled(N, n), DIRICHLET, m_max=m_max,
                            lam_max=guess * 1.1, interval=(2.0**-N, 2.0 ** (-N + 1)))
    return spec.positive


@dataclass(frozen=True)
class MajorizationReport:
    N: int
    n: int
    rows: list
    rescale_max_rel_err: float

    @property
    def all_hold(self) -> bool:
        return all(r["holds"] for r in self.rows)

    def to_json_dict(self) -> dict:
        return {"N": self.N, "n": self.n, "rows": self.rows,
                "rescale_max_rel_err": self.rescale_max_rel_err,
                "all_hold": self.all_hold}


def majorization_check(N: int, n: int, m_max: int) -> MajorizationReport:
    """Full-problem positive eigenvalues against the dyadic sub-problem.

    The m-th positive eigenvalue of -y'' = lambda rho_{N,n} y with
    y(0) = y'(1) = 0 on [0,1] must not exceed the m-th positive eigenvalue
    of the same weight pinned at 2^-N and 2^(-N+1) (zero extension of the
    pinned eigenfunctions is admissible for the full form).
    """
    sub_direct = sub_problem_eigenvalues(N, n, m_max)
    sub_scaled = 2.0**N * comb_eigenvalues(n, m_max)
    k = min(len(sub_direct), len(sub_scaled))
    rescale_err = float(np.max(np.abs(sub_direct[:k] - sub_scaled[:k]) / sub_scaled[:k])) if k else np.inf
    window = float(sub_direct[-1]) * 1.05 + 1.0
    full = find_eigenvalues(rho_scaled(N, n), NEUMANN, m_max=m_max, lam_max=window).positive
    rows = []
    for m in range(1, min(m_max, len(full), len(sub_direct)) + 1):
        rows.append({
            "m": m,
            "lambda_full": float(full[m - 1]),
            "lambda_sub": float(sub_direct[m - 1]),
            "holds": bool(full[m - 1] <= sub_direct[m - 1] * (1.0 + 1e-9)),
        })
    return MajorizationReport(N=N, n=n, rows=rows, rescale_max_rel_err=rescale_err)


@dataclass(frozen=True)
class NuEvidence:
    """Constructive tooth counts with the per-eigenvalue schedule table.

    rows hold the checked indices: for each level N and index m the scaled
    sub-problem eigenvalue 2^N * lambda_{m, nu_N} bounds the m-th positive
    eigenvalue of the stacked problem from above, and the constrained rows
    (m >= 10) must sit below the schedule 2*pi*m*log(m) by the margin.
    partial_sums[K] accumulates sum |1/lambda| over the scaled spectra of
    levels 1..K (capped at sum_cap indices per level and sign); by the same
    majorization these are lower bounds for the stacked problem's absolute
    reciprocal sums, so their growth is non-nuclearity evidence.
    """

    nu: list
    margin: float
    rows: list
    partial_sums: list
    sum_cap: int
    failed: bool

    def to_json_dict(self) -> dict:
        return {"nu": list(self.nu), "margin": self.margin, "rows": self.rows,
                "partial_sums": self.partial_sums, "sum_cap": self.sum_cap,
                "failed": self.failed}


def _schedule(m: int) -> float:
    return 2.0 * np.pi * m * math.log(m)


def _window_start(N: int, margin: float, window_size: int, slack: float = 0.03) -> int:
    """Smallest index m >= 10 whose window can beat the schedule at level N.

    The scaled eigenvalue 2^N * lambda_{m,n} grows with n toward
    2^N * 2*pi*m, so the schedule is easiest to beat right where the m-th
    eigenvalue comes into existence (n barely above m); the start index is
    located with the band-edge bound 4n*sin(m*pi/(2n)) and a small extra
    slack so the honest check passes comfortably.
    """

    def feasible(m_lo: int) -> bool:
        n = m_lo + window_size
        return all(
            2.0**N * 4.0 * n * math.sin(m * math.pi / (2 * n))
            <= (1.0 - margin) * (1.0 - slack) * _schedule(m)
            for m in range(m_lo, m_lo + window_size)
        )

    lo = 10
    if feasible(lo):
        return lo
    hi = 2 * lo
    while not feasible(hi):
        lo, hi = hi, 2 * hi
    while hi - lo > 1:
        mid = (lo + hi) // 2
        lo, hi = (mid, hi) if not feasible(mid) else (lo, mid)
    return hi


def choose_nu(N_max: int, margin: float = 0.05, window_size: int = 3,
              sum_cap: int = 100, iter_cap: int = 64) -> NuEvidence:
    """Search tooth counts nu_N making the checked eigenvalues beat the schedule.

    Each level checks a window of indices starting at the smallest m >= 10
    where the schedule 2*pi*m*log(m) is beatable (log(m) must clear roughly
    0.65 * 2^N, so the start index grows doubly exponentially in the level).
    The tooth count is grown one at a time from the window start until every
    checked eigenvalue of the pinned level problem sits below the schedule
    with the margin; eigenvalues only approach 2^N * 2*pi*m from below as n
    grows, so the search accepts the first count where all window indices
    exist and pass.  Indices m in {1,2,3} are reported for context but not
    constrained.
    """
    if N_max < 1:
        raise ValueError("N_max must be >= 1")
    if not 0.0 < margin < 1.0:
        raise ValueError("margin must be in (0,1)")
    nu = []
    rows = []
    failed = False
    for N in range(1, N_max + 1):
        m_lo = _window_start(N, margin, window_size)
        window = list(range(m_lo, m_lo + window_size))
        n = m_lo
        chosen = None
        for _ in range(iter_cap):
            if n >= window[-1]:
                lams = [comb_eigenvalue(n, m) for m in window]
                if all(2.0**N * lam <= (1.0 - margin) * _schedule(m)
                       for lam, m in zip(lams, window)):
                    chosen = n
                    break
            n += 1
        if chosen is None:
            failed = True
            chosen = n
        nu.append(chosen)
        for m in (1, 2, 3):
            if m <= chosen:
                lam = comb_eigenvalue(chosen, m)
                rows.append({"N": N, "m": m, "n": chosen,
                             "lambda_scaled": 2.0**N * lam,
                             "target": _schedule(m) if m > 1 else 0.0,
                             "constrained": False, "ok": None})
        for m in window:
            lam = comb_eigenvalue(chosen, m)
            scaled = 2.0**N * lam
            rows.append({"N": N, "m": m, "n": chosen, "lambda_scaled": scaled,
                         "target": _schedule(m),
                         "ratio": scaled / _schedule(m),
                         "constrained": True,
                         "ok": bool(scaled <= (1.0 - margin) * _schedule(m))})
    sums = []
    total = 0.0
    for N, n in enumerate(nu, start=1):
        level = sum(1.0 / (2.0**N * comb_eigenvalue(n, m)) for m in range(1, min(n, sum_cap) + 1))
        level += sum(1.0 / (2.0**N * abs(comb_eigenvalue(n, m, sign=-1)))
                     for m in range(1, min(n - 1, sum_cap) + 1))
        total += level
        sums.append({"levels": N, "abs_partial_sum": total})
    return NuEvidence(nu=nu, margin=margin, rows=rows, partial_sums=sums,
                      sum_cap=sum_cap, failed=failed)
