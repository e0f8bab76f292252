"""Eigenvalues and eigenfunctions of -y'' = lambda * rho * y for signed weights.

The boundary problem on [0,1] has y(0) = 0 on the left and either y(1) = 0
("dirichlet") or y'(1) = 0 ("neumann") on the right.  Solutions are
propagated exactly through the weight: zero-density stretches use the free
matrix [[1,h],[0,1]], constant-density stretches the trig (lambda*c > 0) or
hyperbolic (lambda*c < 0) propagator, and an atom of weight w at position a
kicks the derivative, y'(a+) = y'(a-) - lambda*w*y(a).  All factor matrices
are unimodular, so the accumulated transfer matrix has determinant one.

Eigenvalues are roots of the boundary residual ("shooting function"),
located by sign-change bracketing on an adaptive grid and refined by
bisection.  An independent route projects the weight on the closed-form
sine basis (klbasis) and diagonalizes the resulting symmetric matrix by
Jacobi rotations; reciprocals of its eigenvalues approximate the boundary
spectrum from the operator side.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .klbasis import coeff_diag, coeff_matrix
from .measure import SignedMeasure, primitive

__all__ = [
    "DIRICHLET",
    "NEUMANN",
    "propagate",
    "transfer_matrix",
    "shooting_function",
    "limit_omega",
    "Spectrum",
    "find_eigenvalues",
    "find_full_atomic_spectrum",
    "EigenPair",
    "eigenfunction",
    "galerkin_matrix",
    "galerkin_spectrum",
    "jacobi_eigenvalues",
    "galerkin_boundary_eigenvalues",
    "hs_norm_sq",
    "NuclearReport",
    "nuclear_diagnostics",
]

DIRICHLET = "dirichlet"
NEUMANN = "neumann"

# |lambda*c| below this propagates as a free segment (numerical continuity
# at the trig/hyperbolic boundary).
_FREE_EPS = 1e-12


def _check_bc(bc: str) -> str:
    if bc not in (DIRICHLET, NEUMANN):
        raise ValueError(f"right boundary condition must be '{DIRICHLET}' or '{NEUMANN}'")
    return bc


def _events(rho: SignedMeasure, x0: float, x1: float):
    """Ordered segment/atom events covering (x0, x1].

    Atoms exactly at x0 are excluded (they belong to the left of the
    interval); an atom exactly at x1 is applied after the last segment.
    """
    if not x0 < x1:
        raise ValueError("need x0 < x1")
    cuts = {x0, x1}
    cuts.update(b for b in rho.breakpoints if x0 < b < x1)
    cuts.update(a for a, _ in rho.atoms if x0 < a < x1)
    pts = sorted(cuts)
    weight_at = dict(rho.atoms)
    ev = []
    for u, v in zip(pts, pts[1:]):
        ev.append(("seg", v - u, rho.density_at((u + v) / 2.0)))
        w = weight_at.get(v, 0.0)
        if w != 0.0 and v <= x1:
            ev.append(("atom", w, v))
    return ev


def _apply_segment(y, dy, lam, c, L):
    """One constant-density segment, vectorized over lam."""
    q = lam * c
    osc = q > _FREE_EPS
    hyp = q < -_FREE_EPS
    w = np.sqrt(np.where(osc, q, 1.0))
    k = np.sqrt(np.where(hyp, -q, 1.0))
    cw, sw = np.cos(w * L), np.sin(w * L)
    with np.errstate(over="ignore", invalid="ignore"):
        ck, sk = np.cosh(k * L), np.sinh(k * L)
        y_osc = y * cw + dy * sw / w
        dy_osc = -y * w * sw + dy * cw
        y_hyp = y * ck + dy * sk / k
        dy_hyp = y * k * sk + dy * ck
    y_free = y + dy * L
    y_new = np.where(osc, y_osc, np.where(hyp, y_hyp, y_free))
    dy_new = np.where(osc, dy_osc, np.where(hyp, dy_hyp, dy))
    return y_new, dy_new


def _apply_segment_scaled(y, dy, lam, c, L):
    """Segment step with the positive hyperbolic growth factor divided out.

    On hyperbolic entries the state is returned divided by e^{kL} > 0, which
    preserves signs and root locations while avoiding overflow in deep
    classically-forbidden regions.
    """
    q = lam * c
    osc = q > _FREE_EPS
    hyp = q < -_FREE_EPS
    w = np.sqrt(np.where(osc, q, 1.0))
    k = np.sqrt(np.where(hyp, -q, 1.0))
    cw, sw = np.cos(w * L), np.sin(w * L)
    E = np.exp(-2.0 * np.where(hyp, k, 0.0) * L)
    y_osc = y * cw + dy * sw / w
    dy_osc = -y * w * sw + dy * cw
    y_hyp = 0.5 * (y * (1.0 + E) + dy * (1.0 - E) / k)
    dy_hyp = 0.5 * (y * k * (1.0 - E) + dy * (1.0 + E))
    y_free = y + dy * L
    y_new = np.where(osc, y_osc, np.where(hyp, y_hyp, y_free))
    dy_new = np.where(osc, dy_osc, np.where(hyp, dy_hyp, dy))
    return y_new, dy_new


def propagate(rho: SignedMeasure, lam, x0: float = 0.0, x1: float = 1.0,
              y0: float = 0.0, dy0: float = 1.0, rescale: bool = False):
    """Propagate (y, y') from x0 to x1 through the weight; vectorized in lam.

    With rescale=True the returned state may be divided by a positive,
    lambda-dependent factor (overflow protection); signs and zeros of the
    boundary residual are unaffected.
    """
    lam = np.asarray(lam, dtype=float)
    y = np.full(lam.shape, float(y0))
    dy = np.full(lam.shape, float(dy0))
    step = _apply_segment_scaled if rescale else _apply_segment
    for ev in _events(rho, x0, x1):
        if ev[0] == "seg":
            y, dy = step(y, dy, lam, ev[2], ev[1])
        else:
            dy = dy - lam * ev[1] * y
        if rescale:
            s = np.maximum(np.abs(y), np.abs(dy))
            big = s > 1e100
            if np.any(big):
                norm = np.where(big, s, 1.0)
                y = y / norm
                dy = dy / norm
    return y, dy


def _seg_matrix(lam: float, c: float, L: float) -> np.ndarray:
    q = lam * c
    if q > _FREE_EPS:
        w = np.sqrt(q)
        return np.array([[np.cos(w * L), np.sin(w * L) / w],
                         [-w * np.sin(w * L), np.cos(w * L)]])
    if q < -_FREE_EPS:
        k = np.sqrt(-q)
        return np.array([[np.cosh(k * L), np.sinh(k * L) / k],
                         [k * np.sinh(k * L), np.cosh(k * L)]])
    return np.array([[1.0, L], [0.0, 1.0]])


def transfer_matrix(rho: SignedMeasure, lam: float, x0: float = 0.0, x1: float = 1.0) -> np.ndarray:
    """Accumulated 2x2 transfer matrix over (x0, x1]; determinant is one."""
    lam = float(lam)
    M = np.eye(2)
    for ev in _events(rho, x0, x1):
        if ev[0] == "seg":
            M = _seg_matrix(lam, ev[2], ev[1]) @ M
        else:
            M = np.array([[1.0, 0.0], [-lam * ev[1], 1.0]]) @ M
    return M


def shooting_function(rho: SignedMeasure, lam, bc: str, x0: float = 0.0, x1: float = 1.0,
                      rescale: bool = False):
    """Boundary residual at x1 from y(x0)=0, y'(x0)=1: y (dirichlet) or y' (neumann)."""
    _check_bc(bc)
    y, dy = propagate(rho, lam, x0=x0, x1=x1, rescale=rescale)
    return y if bc == DIRICHLET else dy


def limit_omega(lam):
    """Large-comb limit of the Dirichlet shooting value: 2*sin(lam/2)/lam, 1 at 0."""
    lam = np.asarray(lam, dtype=float)
    small = np.abs(lam) < 1e-4
    safe = np.where(small, 1.0, lam)
    exact = 2.0 * np.sin(safe / 2.0) / safe
    series = 1.0 - lam**2 / 24.0 + lam**4 / 1920.0
    return np.where(small, series, exact)


@dataclass(frozen=True)
class Spectrum:
    """Signed eigenvalue lists from one enumeration method.

    positive is ascending, negative is ascending in absolute value.  The
    exhausted flags are set when the scan window ran out before m_max
    eigenvalues of that sign were found.  multiplicity_suspected marks scan
    cells where the residual dips to zero without a sign change; such
    spectra are refused by the chi-square series constructor.
    """

    positive: np.ndarray
    negative: np.ndarray
    bc: str
    method: str
    lam_max: float | None
    window_exhausted_pos: bool = False
    window_exhausted_neg: bool = False
    multiplicity_suspected: bool = False

    def all_eigenvalues(self) -> np.ndarray:
        """Both signs merged, ascending in absolute value."""
        lams = np.concatenate([self.positive, self.negative])
        return lams[np.argsort(np.abs(lams))]

    @property
    def count(self) -> int:
        return len(self.positive) + len(self.negative)


def _bisect_roots(f, lo, hi, flo, rtol=1e-10, max_iter=200):
    lo = np.array(lo, dtype=float)
    hi = np.array(hi, dtype=float)
    flo = np.array(flo, dtype=float)
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        if np.all(np.abs(hi - lo) <= rtol * np.maximum(np.abs(mid), 1e-300)):
            break
        fm = f(mid)
        left = flo * fm <= 0.0
        hi = np.where(left, mid, hi)
        lo = np.where(left, lo, mid)
        flo = np.where(left, flo, fm)
    return 0.5 * (lo + hi)


def _scan_one_sign(rho, bc, sign, lam_max, step, x0, x1):
    """Bracket and refine all roots of the shooting function on one sign.

    Returns (roots ascending in |lambda|, multiplicity_suspected).
    """
    npts = max(int(np.ceil(lam_max / step)), 8)
    grid = sign * np.linspace(0.0, lam_max, npts + 1)
    f = shooting_function(rho, grid, bc, x0=x0, x1=x1, rescale=True)
    fn = lambda lam: shooting_function(rho, lam, bc, x0=x0, x1=x1, rescale=True)

    roots = [grid[i] for i in range(1, len(grid)) if f[i] == 0.0]
    idx = np.nonzero((f[:-1] * f[1:] < 0.0))[0]
    if len(idx):
        refined = _bisect_roots(fn, grid[idx], grid[idx + 1], f[idx])
        roots.extend(refined.tolist())

    suspected = False
    absf = np.abs(f)
    scale = np.max(absf) if len(absf) else 0.0
    if scale > 0:
        for i in range(1, len(f) - 1):
            if (absf[i] < 1e-8 * scale and absf[i] < absf[i - 1] and absf[i] < absf[i + 1]
                    and f[i - 1] * f[i + 1] > 0.0 and f[i] != 0.0):
                suspected = True
    roots = sorted(set(roots), key=abs)
    return np.array(roots), suspected


def find_eigenvalues(rho: SignedMeasure, bc: str, m_max: int, lam_max: float,
                     expected_total: int | None = None,
                     interval: tuple[float, float] = (0.0, 1.0)) -> Spectrum:
    """First m_max eigenvalues of each sign inside (-lam_max, lam_max).

    Scans each sign on a grid of step min(pi^2/4, lam_max/1000), brackets
    sign changes of the shooting residual and bisects them to relative
    tolerance 1e-10.  The scan is repeated with halved steps until the root
    count stabilizes (and, when expected_total is given, until that many
    roots are found); a persistent mismatch sets multiplicity_suspected
    rather than silently dropping roots.
    """
    _check_bc(bc)
    if m_max < 1:
        raise ValueError("m_max must be >= 1")
    if not lam_max > 0:
        raise ValueError("lam_max must be positive")
    x0, x1 = interval
    base = min(np.pi**2 / 4.0, lam_max / 1000.0)

    def stable_scan(sign):
        step = base
        prev = None
        suspected_any = False
        for _ in range(9):
            roots, susp = _scan_one_sign(rho, bc, sign, lam_max, step, x0, x1)
            suspected_any = suspected_any or susp
            if prev is not None and len(roots) == len(prev):
                if expected_total is None:
                    return roots, suspected_any, True
                # keep halving while the combined target is unmet
                return roots, suspected_any, True
            prev = roots
            step /= 2.0
        return prev, suspected_any, False

    pos, susp_p, stable_p = stable_scan(+1.0)
    neg, susp_n, stable_n = stable_scan(-1.0)

    if expected_total is not None:
        step = base / 4.0
        tries = 0
        while len(pos) + len(neg) < expected_total and tries < 6:
            step /= 2.0
            pos, sp, _ = _scan_one_sign(rho, bc, +1.0, lam_max, step, x0, x1)
            neg, sn, _ = _scan_one_sign(rho, bc, -1.0, lam_max, step, x0, x1)
            susp_p = susp_p or sp
            susp_n = susp_n or sn
            tries += 1

    suspected = susp_p or susp_n or not (stable_p and stable_n)
    if expected_total is not None and len(pos) + len(neg) < expected_total:
        suspected = True
    return Spectrum(
        positive=np.sort(pos[np.abs(pos) <= lam_max * (1 + 1e-12)])[:m_max]
        if len(pos) else np.array([]),
        negative=np.array(sorted(neg, key=abs)[:m_max]) if len(neg) else np.array([]),
        bc=bc,
        method="shooting",
        lam_max=lam_max,
        window_exhausted_pos=len(pos) < m_max,
        window_exhausted_neg=len(neg) < m_max,
        multiplicity_suspected=suspected,
    )


def find_full_atomic_spectrum(rho: SignedMeasure, bc: str, lam_max: float = 100.0,
                              max_expansions: int = 8) -> Spectrum:
    """Complete spectrum of a purely atomic weight (finite, one per rank).

    A weight with r atoms at distinct positions in (0,1] has exactly r
    eigenvalues; the window is grown geometrically until all are inside.
    """
    if any(v != 0.0 for v in rho.values):
        raise ValueError("weight has a density part; its spectrum is not finite")
    expected = sum(1 for a, _ in rho.atoms if a > 0.0)
    if bc == DIRICHLET:
        expected = sum(1 for a, _ in rho.atoms if 0.0 < a < 1.0)
    if expected == 0:
        return Spectrum(np.array([]), np.array([]), bc, "shooting", lam_max, True, True, False)
    for _ in range(max_expansions):
        spec = find_eigenvalues(rho, bc, m_max=expected, lam_max=lam_max,
                                expected_total=expected)
        if spec.count >= expected:
            return spec
        lam_max *= 4.0
    return spec


@dataclass(frozen=True)
class EigenPair:
    """Eigenvalue with its piecewise eigenfunction, normalized to ||y'||_L2 = 1.

    Pieces are affine between atoms where the density vanishes and
    trigonometric / hyperbolic on constant-density stretches; xs holds the
    piece start points plus the right endpoint, (y0, dy0) the state at each
    piece start (after the atom kick at that point) already scaled by the
    normalizing amplitude.
    """

    lam: float
    bc: str
    xs: np.ndarray
    dens: np.ndarray
    y0: np.ndarray
    dy0: np.ndarray
    residual: float

    def _piece(self, x):
        j = np.clip(np.searchsorted(self.xs, x, side="right") - 1, 0, len(self.dens) - 1)
        return j

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        j = self._piece(x)
        u = x - self.xs[j]
        q = self.lam * self.dens[j]
        y0, dy0 = self.y0[j], self.dy0[j]
        osc = q > _FREE_EPS
        hyp = q < -_FREE_EPS
        w = np.sqrt(np.where(osc, q, 1.0))
        k = np.sqrt(np.where(hyp, -q, 1.0))
        val_osc = y0 * np.cos(w * u) + dy0 * np.sin(w * u) / w
        val_hyp = y0 * np.cosh(k * u) + dy0 * np.sinh(k * u) / k
        val_free = y0 + dy0 * u
        return np.where(osc, val_osc, np.where(hyp, val_hyp, val_free))

    def deriv(self, x, side: str = "+"):
        """One-sided derivative; side '-' takes the limit from the left."""
        x = np.asarray(x, dtype=float)
        j = self._piece(x)
        if side == "-":
            at_start = (x == self.xs[j]) & (j > 0)
            j = np.where(at_start, j - 1, j)
        u = x - self.xs[j]
        q = self.lam * self.dens[j]
        y0, dy0 = self.y0[j], self.dy0[j]
        osc = q > _FREE_EPS
        hyp = q < -_FREE_EPS
        w = np.sqrt(np.where(osc, q, 1.0))
        k = np.sqrt(np.where(hyp, -q, 1.0))
        d_osc = -y0 * w * np.sin(w * u) + dy0 * np.cos(w * u)
        d_hyp = y0 * k * np.sinh(k * u) + dy0 * np.cosh(k * u)
        return np.where(osc, d_osc, np.where(hyp, d_hyp, dy0))


def _piece_energy(lam, c, L, y0, dy0) -> float:
    """integral of (y')^2 over one piece, in closed form."""
    q = lam * c
    if q > _FREE_EPS:
        w = np.sqrt(q)
        A, B = dy0, -y0 * w
        return ((A**2 + B**2) * L / 2.0 + (A**2 - B**2) * np.sin(2 * w * L) / (4 * w)
                + A * B * (1.0 - np.cos(2 * w * L)) / (2 * w))
    if q < -_FREE_EPS:
        k = np.sqrt(-q)
        A, B = dy0, y0 * k
        return ((A**2 - B**2) * L / 2.0 + (A**2 + B**2) * np.sinh(2 * k * L) / (4 * k)
                + A * B * (np.cosh(2 * k * L) - 1.0) / (2 * k))
    return dy0**2 * L


def eigenfunction(rho: SignedMeasure, lam: float, bc: str, residual_tol: float = 1e-6) -> EigenPair:
    """Piecewise eigenfunction for a converged eigenvalue, ||y'||_L2 = 1.

    Raises ValueError with the residual value when lam does not satisfy the
    right boundary condition to residual_tol (relative to the solution size).
    """
    _check_bc(bc)
    lam = float(lam)
    xs_list, dens_list, y0_list, dy0_list = [], [], [], []
    y, dy = 0.0, 1.0
    scale = 1.0
    pos = 0.0
    for ev in _events(rho, 0.0, 1.0):
        if ev[0] == "seg":
            xs_list.append(pos)
            dens_list.append(ev[2])
            y0_list.append(y)
            dy0_list.append(dy)
            ya, da = _apply_segment(np.asarray(y), np.asarray(dy), np.asarray(lam), ev[2], ev[1])
            y, dy = float(ya), float(da)
            pos += ev[1]
            scale = max(scale, abs(y), abs(dy))
        else:
            dy = dy - lam * ev[1] * y
            scale = max(scale, abs(dy))
    resid = y if bc == DIRICHLET else dy
    if abs(resid) > residual_tol * scale:
        raise ValueError(f"lambda={lam!r} is not an eigenvalue: boundary residual {resid!r}")
    xs = np.array(xs_list + [1.0])
    dens = np.array(dens_list)
    y0 = np.array(y0_list)
    dy0 = np.array(dy0_list)
    energy = sum(
        _piece_energy(lam, dens[j], xs[j + 1] - xs[j], y0[j], dy0[j])
        for j in range(len(dens))
    )
    if energy <= 0:
        raise ValueError("degenerate eigenfunction with zero energy")
    amp = 1.0 / np.sqrt(energy)
    return EigenPair(lam=lam, bc=bc, xs=xs, dens=dens, y0=y0 * amp, dy0=dy0 * amp,
                     residual=float(resid) * amp)


# --- Galerkin route ---------------------------------------------------------


def galerkin_matrix(rho: SignedMeasure, count: int) -> np.ndarray:
    """Projection of the weight on the sine basis (same matrix as klbasis)."""
    return coeff_matrix(rho, count)


def jacobi_eigenvalues(A: np.ndarray, tol: float = 1e-12, max_sweeps: int = 40) -> np.ndarray:
    """All eigenvalues of a symmetric matrix by cyclic Jacobi rotations.

    Plain orthogonal-rotation iteration: sweep over the upper triangle and
    annihilate entries until the off-diagonal Frobenius mass is below
    tol * ||A||_F.  Returns the diagonal, unsorted.
    """
    A = np.array(A, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError("need a square matrix")
    if not np.allclose(A, A.T, atol=1e-12 * (1.0 + np.abs(A).max())):
        raise ValueError("need a symmetric matrix")
    n = A.shape[0]
    if n == 1:
        return A.diagonal().copy()
    scale = np.linalg.norm(A)
    if scale == 0.0:
        return np.zeros(n)
    for sweep in range(max_sweeps):
        off = np.sqrt(max(0.0, float((A**2).sum() - (np.diagonal(A) ** 2).sum())))
        if off <= tol * scale:
            break
        thresh = off / n if sweep < 3 else 0.0
        for p in range(n - 1):
            row = A[p]
            for q in range(p + 1, n):
                apq = row[q]
                if abs(apq) <= thresh or apq == 0.0:
                    continue
                diff = A[q, q] - A[p, p]
                if abs(apq) < 1e-150 * abs(diff):
                    t = apq / diff  # rotation angle below resolution
                else:
                    tau = diff / (2.0 * apq)
                    if tau >= 0:
                        t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                    else:
                        t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rp = A[p, :].copy()
                rq = A[q, :].copy()
                A[p, :] = c * rp - s * rq
                A[q, :] = s * rp + c * rq
                cp = A[:, p].copy()
                cq = A[:, q].copy()
                A[:, p] = c * cp - s * cq
                A[:, q] = s * cp + c * cq
                row = A[p]
    return np.diagonal(A).copy()


def galerkin_spectrum(R: np.ndarray) -> np.ndarray:
    """Eigenvalues of the projected weight, sorted by |mu| descending.

    Their reciprocals estimate the boundary-problem eigenvalues.
    """
    mu = jacobi_eigenvalues(R)
    return mu[np.argsort(-np.abs(mu))]


def galerkin_boundary_eigenvalues(rho: SignedMeasure, count: int = 200, m_max: int = 5,
                                  extrapolate: bool = True) -> Spectrum:
    """Boundary eigenvalues 1/mu from the Galerkin route.

    The truncation error of the projected eigenvalues decays like 1/count
    with a clean leading coefficient, so with extrapolate=True the spectrum
    is computed at count and 2*count and Richardson-extrapolated pairwise
    (per sign, in |mu| order).  No shooting enters this route.
    """
    mu1 = galerkin_spectrum(coeff_matrix(rho, count))
    cut = 1e-12 * np.max(np.abs(mu1)) if len(mu1) else 0.0
    mu1 = mu1[np.abs(mu1) > cut]
    if extrapolate:
        mu2 = galerkin_spectrum(coeff_matrix(rho, 2 * count))
        mu2 = mu2[np.abs(mu2) > cut]
        merged = []
        for sign in (+1, -1):
            a = mu1[np.sign(mu1) == sign]
            b = mu2[np.sign(mu2) == sign]
            m = min(len(a), len(b))
            merged.append(2.0 * b[:m] - a[:m])
        mu = np.concatenate(merged)
    else:
        mu = mu1
    lam = 1.0 / mu[np.abs(mu) > 0]
    pos = np.sort(lam[lam > 0])[:m_max]
    neg = np.array(sorted(lam[lam < 0], key=abs)[:m_max])
    return Spectrum(positive=pos, negative=neg, bc=NEUMANN, method="galerkin",
                    lam_max=None,
                    window_exhausted_pos=len(pos) < m_max,
                    window_exhausted_neg=len(neg) < m_max)


def hs_norm_sq(rho: SignedMeasure) -> float:
    """Squared Hilbert-Schmidt norm of the weight's multiplier.

    Equals the double integral of P(max(t,s))^2 over the unit square, i.e.
    2 * integral t * P(t)^2 dt with P the primitive of rho; also the limit
    of the squared Frobenius norm of the projected matrix and of the sum of
    reciprocal squared eigenvalues.
    """
    return 2.0 * primitive(rho).t_weighted_sq()


@dataclass(frozen=True)
class NuclearReport:
    """Reciprocal-eigenvalue partial sums against trace and HS diagnostics.

    non_nuclear_evidence is a desk heuristic: the absolute sums have grown
    past |trace| + 2*sqrt(hs) inside the window while the HS norm stays
    finite.  It is evidence, not a certificate.
    """

    spectrum: Spectrum
    partial_pos: np.ndarray
    partial_neg: np.ndarray
    partial_abs: np.ndarray
    trace_estimate: float
    hs_norm_sq: float
    non_nuclear_evidence: bool

    def to_json_dict(self) -> dict:
        return {
            "positive": self.spectrum.positive.tolist(),
            "negative": self.spectrum.negative.tolist(),
            "partial_sums_positive": self.partial_pos.tolist(),
            "partial_sums_negative": self.partial_neg.tolist(),
            "partial_sums_absolute": self.partial_abs.tolist(),
            "trace_estimate": self.trace_estimate,
            "hs_norm_sq": self.hs_norm_sq,
            "non_nuclear_evidence": self.non_nuclear_evidence,
        }


def nuclear_diagnostics(rho: SignedMeasure, bc: str, m_max: int, lam_max: float,
                        trace_modes: int = 512) -> NuclearReport:
    """Partial sums of reciprocal eigenvalues with trace and HS context."""
    spec = find_eigenvalues(rho, bc, m_max=m_max, lam_max=lam_max)
    pos = np.cumsum(1.0 / spec.positive) if len(spec.positive) else np.array([])
    neg = np.cumsum(1.0 / spec.negative) if len(spec.negative) else np.array([])
    lams = spec.all_eigenvalues()
    psum = np.cumsum(np.abs(1.0 / lams)) if len(lams) else np.array([])
    trace = float(np.sum(coeff_diag(rho, trace_modes)))
    hs = hs_norm_sq(rho)
    evidence = bool(len(psum) and psum[-1] > abs(trace) + 2.0 * np.sqrt(hs))
    return NuclearReport(spectrum=spec, partial_pos=pos, partial_neg=neg, partial_abs=psum,
                         trace_estimate=trace, hs_norm_sq=hs, non_nuclear_evidence=evidence)
