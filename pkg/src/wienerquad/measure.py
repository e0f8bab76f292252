"""Signed measures on [0,1] and the norms carried by their primitives.

A weight is a finite signed measure rho = (atoms) + (piecewise-constant
density) on [0,1].  Everything of interest -- the dual-space norm, the
second-chaos norm, inner products, Hilbert-Schmidt quantities -- is a
closed-form integral of the primitive

    Y(x) = -integral_x^1 drho,

which is piecewise affine with jumps at atom positions.  All integrals of
Y and t*Y^2 are evaluated exactly (pieces are polynomials of degree <= 3);
no quadrature is used anywhere in this module.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "SignedMeasure",
    "Primitive",
    "atom",
    "atoms_measure",
    "density_measure",
    "zero_measure",
    "combine",
    "primitive",
    "dstar_norm",
    "m_norm_sq",
    "dstar_inner",
    "integral_t",
    "from_json_dict",
    "to_json_dict",
    "loads",
    "dumps",
]


@dataclass(frozen=True)
class SignedMeasure:
    """Finite signed measure on [0,1].

    atoms        -- tuple of (position, weight), positions strictly increasing
    breakpoints  -- density breakpoints, 0 = b0 < b1 < ... < bK = 1
    values       -- density value on [b_{i-1}, b_i), length K

    Construction canonicalizes: duplicate atom positions are merged by
    summing weights (exact float equality), zero-weight atoms are dropped.
    Instances are immutable; all operations on them are pure functions.
    """

    atoms: tuple[tuple[float, float], ...] = ()
    breakpoints: tuple[float, ...] = (0.0, 1.0)
    values: tuple[float, ...] = (0.0,)

    def __post_init__(self):
        merged: dict[float, float] = {}
        for x, w in self.atoms:
            x = float(x)
            w = float(w)
            if not 0.0 <= x <= 1.0:
                raise ValueError(f"atom position {x} outside [0,1]")
            merged[x] = merged.get(x, 0.0) + w
        atoms = tuple(sorted((x, w) for x, w in merged.items() if w != 0.0))
        bks = tuple(float(b) for b in self.breakpoints)
        vals = tuple(float(v) for v in self.values)
        if len(bks) < 2 or bks[0] != 0.0 or bks[-1] != 1.0:
            raise ValueError("density breakpoints must run from 0.0 to 1.0")
        if any(b1 >= b2 for b1, b2 in zip(bks, bks[1:])):
            raise ValueError("density breakpoints must be strictly increasing")
        if len(vals) != len(bks) - 1:
            raise ValueError("need one density value per breakpoint interval")
        object.__setattr__(self, "atoms", atoms)
        object.__setattr__(self, "breakpoints", bks)
        object.__setattr__(self, "values", vals)

    @property
    def is_zero(self) -> bool:
        return not self.atoms and all(v == 0.0 for v in self.values)

    def density_at(self, x: float) -> float:
        """Density value at x (right-continuous; value on [b_{i-1}, b_i))."""
        i = np.searchsorted(self.breakpoints, x, side="right") - 1
        i = min(max(int(i), 0), len(self.values) - 1)
        return self.values[i]


def atom(x: float, w: float = 1.0) -> SignedMeasure:
    """Single atom of weight w at position x."""
    return SignedMeasure(atoms=((x, w),))


def atoms_measure(pairs: Iterable[tuple[float, float]]) -> SignedMeasure:
    """Purely atomic measure from (position, weight) pairs."""
    return SignedMeasure(atoms=tuple(pairs))


def density_measure(breakpoints: Sequence[float], values: Sequence[float]) -> SignedMeasure:
    """Purely absolutely-continuous measure with piecewise-constant density."""
    return SignedMeasure(breakpoints=tuple(breakpoints), values=tuple(values))


def zero_measure() -> SignedMeasure:
    return SignedMeasure()


def combine(terms: Iterable[tuple[float, SignedMeasure]]) -> SignedMeasure:
    """Linear combination sum_i c_i * rho_i; merges atoms and breakpoints."""
    atoms: list[tuple[float, float]] = []
    bk_union: set[float] = {0.0, 1.0}
    terms = list(terms)
    for c, rho in terms:
        atoms.extend((x, c * w) for x, w in rho.atoms)
        bk_union.update(rho.breakpoints)
    bks = sorted(bk_union)
    mids = [(a + b) / 2.0 for a, b in zip(bks, bks[1:])]
    vals = [sum(c * rho.density_at(m) for c, rho in terms) for m in mids]
    return SignedMeasure(atoms=tuple(atoms), breakpoints=tuple(bks), values=tuple(vals))


@dataclass(frozen=True)
class Primitive:
    """Piecewise-affine representation of Y(x) = -integral_x^1 drho.

    Y is right-continuous with Y(1) = 0.  An atom at position a enters the
    integral over (x, 1] iff a > x, so Y jumps up by the atom weight at a;
    an atom at x = 0 never contributes, an atom at x = 1 contributes on
    all of [0,1).  On atom-free segments Y is affine with slope equal to
    the local density value.

    xs      -- breakpoints x0=0 < ... < xm=1 (atom positions merged in)
    slopes  -- slope on [x_{j-1}, x_j), length m
    starts  -- Y(x_{j-1}) (right-continuous value at segment start), length m
    jumps   -- atom weight sitting at each xs entry (0 where none)
    """

    xs: np.ndarray
    slopes: np.ndarray
    starts: np.ndarray
    jumps: np.ndarray

    def __call__(self, x) -> np.ndarray:
        """Evaluate Y at x (scalar or array), right-continuous, Y(1)=0."""
        x = np.asarray(x, dtype=float)
        j = np.clip(np.searchsorted(self.xs, x, side="right") - 1, 0, len(self.slopes) - 1)
        y = self.starts[j] + self.slopes[j] * (x - self.xs[j])
        return np.where(x >= 1.0, 0.0, y)

    @property
    def lengths(self) -> np.ndarray:
        return np.diff(self.xs)

    def integral(self) -> float:
        """integral_0^1 Y dt, exact."""
        L = self.lengths
        return float(np.sum(self.starts * L + self.slopes * L**2 / 2.0))

    def l2_norm_sq(self) -> float:
        """integral_0^1 Y^2 dt, exact."""
        a, s, L = self.starts, self.slopes, self.lengths
        return float(np.sum(a**2 * L + a * s * L**2 + s**2 * L**3 / 3.0))

    def t_weighted_sq(self) -> float:
        """integral_0^1 t * Y(t)^2 dt, exact."""
        a, s, L = self.starts, self.slopes, self.lengths
        x0 = self.xs[:-1]
        inner = a**2 * L + a * s * L**2 + s**2 * L**3 / 3.0
        shifted = a**2 * L**2 / 2.0 + 2.0 * a * s * L**3 / 3.0 + s**2 * L**4 / 4.0
        return float(np.sum(x0 * inner + shifted))


def primitive(rho: SignedMeasure) -> Primitive:
    """Exact piecewise-affine primitive Y of rho (no quadrature)."""
    xs = sorted({0.0, 1.0} | {b for b in rho.breakpoints} | {x for x, _ in rho.atoms})
    xs = np.array(xs)
    m = len(xs) - 1
    jumps = np.zeros(len(xs))
    weight_at = dict(rho.atoms)
    for i, x in enumerate(xs):
        jumps[i] = weight_at.get(float(x), 0.0)
    mids = (xs[:-1] + xs[1:]) / 2.0
    slopes = np.array([rho.density_at(t) for t in mids])
    L = np.diff(xs)
    # Y(x_{j-1}) = Y(x_j) - w_j - s_j * L_j, accumulated from Y(1) = 0
    d = jumps[1:] + slopes * L
    ybk = np.zeros(len(xs))
    ybk[:-1] = -np.cumsum(d[::-1])[::-1]
    return Primitive(xs=xs, slopes=slopes, starts=ybk[:-1].copy(), jumps=jumps)


def dstar_norm(rho: SignedMeasure) -> float:
    """Dual-space norm of rho: the L2 norm of its primitive Y."""
    return float(np.sqrt(primitive(rho).l2_norm_sq()))


def m_norm_sq(rho: SignedMeasure) -> float:
    """Squared second-chaos norm: (integral Y)^2 + 4 integral t Y^2 dt.

    Equals the second moment of the quadratic Wiener functional with
    weight rho; see quadform.measure_moments.
    """
    Y = primitive(rho)
    return Y.integral() ** 2 + 4.0 * Y.t_weighted_sq()


def dstar_inner(rho1: SignedMeasure, rho2: SignedMeasure) -> float:
    """Bilinear pairing integral_0^1 Y1 Y2 dt (polarization of dstar_norm)."""
    p1, p2 = primitive(rho1), primitive(rho2)
    xs = np.array(sorted(set(p1.xs.tolist()) | set(p2.xs.tolist())))
    x0, L = xs[:-1], np.diff(xs)
    a1 = p1(x0)
    a2 = p2(x0)
    j1 = np.clip(np.searchsorted(p1.xs, x0, side="right") - 1, 0, len(p1.slopes) - 1)
    j2 = np.clip(np.searchsorted(p2.xs, x0, side="right") - 1, 0, len(p2.slopes) - 1)
    s1, s2 = p1.slopes[j1], p2.slopes[j2]
    return float(np.sum(a1 * a2 * L + (a1 * s2 + a2 * s1) * L**2 / 2.0 + s1 * s2 * L**3 / 3.0))


def integral_t(rho: SignedMeasure) -> float:
    """integral_0^1 t drho(t), exact.

    This is the mean of the quadratic functional and the trace target for
    its eigenvalue series.
    """
    tot = sum(w * x for x, w in rho.atoms)
    b = np.asarray(rho.breakpoints)
    v = np.asarray(rho.values)
    tot += float(np.sum(v * (b[1:] ** 2 - b[:-1] ** 2) / 2.0))
    return float(tot)


# --- JSON wire format -------------------------------------------------------
#
# {"atoms": [{"x": 0.5, "w": 1.0}, ...],
#  "density": {"breakpoints": [0.0, 1.0], "values": [1.0]}}
#
# Both fields optional; absent means empty / zero.


def from_json_dict(d: dict) -> SignedMeasure:
    atoms = tuple((float(a["x"]), float(a["w"])) for a in d.get("atoms", []))
    dens = d.get("density")
    if dens is None:
        return SignedMeasure(atoms=atoms)
    return SignedMeasure(
        atoms=atoms,
        breakpoints=tuple(float(b) for b in dens["breakpoints"]),
        values=tuple(float(v) for v in dens["values"]),
    )


def to_json_dict(rho: SignedMeasure) -> dict:
    d: dict = {}
    if rho.atoms:
        d["atoms"] = [{"x": x, "w": w} for x, w in rho.atoms]
    if any(v != 0.0 for v in rho.values):
        d["density"] = {"breakpoints": list(rho.breakpoints), "values": list(rho.values)}
    return d


def loads(text: str) -> SignedMeasure:
    return from_json_dict(json.loads(text))


def dumps(rho: SignedMeasure) -> str:
    return json.dumps(to_json_dict(rho))
