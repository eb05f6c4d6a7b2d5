"""Stationary measures: exact transfer operator on step densities, orbit histograms,
the Lebesgue criterion and local dimension estimates."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import AmSystem, SystemType, classify_type, lyapunov_exponents
from .dynamics import orbit_samples
from .errors import (InsufficientMass, NonconvergenceWarning, ParameterOutOfRange)
from .rng import SplitMix64

MERGE_TOL = 1e-14
COALESCE_TOL = 1e-12
MAX_PIECES = 1 << 20
DIRAC_WIDTH = 1e-9


@dataclass(frozen=True)
class PiecewiseDensity:
    """Step density on [0, 1]: value[i] on (breakpoints[i], breakpoints[i+1])."""

    breakpoints: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        b = np.asarray(self.breakpoints, dtype=float)
        v = np.asarray(self.values, dtype=float)
        if b.ndim != 1 or len(b) != len(v) + 1 or len(v) == 0:
            raise ValueError("need len(breakpoints) == len(values) + 1 >= 2")
        if b[0] != 0.0 or b[-1] != 1.0 or np.any(np.diff(b) <= 0):
            raise ValueError("breakpoints must increase strictly from 0 to 1")
        if np.any(v < 0):
            raise ValueError("density values must be non-negative")
        mass = float(np.dot(v, np.diff(b)))
        if abs(mass - 1) > 1e-10:
            raise ValueError(f"total mass {mass} differs from 1")
        object.__setattr__(self, "breakpoints", b)
        object.__setattr__(self, "values", v)

    @classmethod
    def uniform(cls) -> "PiecewiseDensity":
        return cls(np.array([0.0, 1.0]), np.array([1.0]))

    @classmethod
    def block(cls, center: float, width: float) -> "PiecewiseDensity":
        lo = max(0.0, center - width / 2)
        hi = min(1.0, lo + width)
        lo = hi - width
        b = [0.0, lo, hi, 1.0]
        v = [0.0, 1.0 / width, 0.0]
        if lo <= 0.0:
            b, v = b[1:], v[1:]
            b[0] = 0.0
        if hi >= 1.0:
            b, v = b[:-1], v[:-1]
            b[-1] = 1.0
        return cls(np.array(b), np.array(v))

    @classmethod
    def dirac(cls, x: float) -> "PiecewiseDensity":
        return cls.block(x, DIRAC_WIDTH)

    @property
    def pieces(self) -> int:
        return len(self.values)

    def masses(self) -> np.ndarray:
        return self.values * np.diff(self.breakpoints)

    def cdf_knots(self) -> np.ndarray:
        return np.concatenate(([0.0], np.cumsum(self.masses())))

    def cdf(self, x):
        return np.interp(x, self.breakpoints, self.cdf_knots())

    def mass(self, lo: float, hi: float) -> float:
        return float(self.cdf(hi) - self.cdf(lo))

    def value_at(self, x):
        idx = np.searchsorted(self.breakpoints, x, side="right") - 1
        return self.values[np.clip(idx, 0, self.pieces - 1)]


@dataclass(frozen=True)
class EmpiricalMeasure:
    """Histogram of samples on a uniform grid of [0, 1]."""

    masses: np.ndarray
    samples: np.ndarray | None = None

    @property
    def bin_count(self) -> int:
        return len(self.masses)

    bins = bin_count

    @property
    def edges(self) -> np.ndarray:
        return np.linspace(0.0, 1.0, self.bins + 1)

    def to_density(self) -> PiecewiseDensity:
        m = np.asarray(self.masses, dtype=float)
        m = m / m.sum()
        return PiecewiseDensity(self.edges, m * self.bins)

    def cdf(self, x):
        return self.to_density().cdf(x)


def _as_density(m) -> PiecewiseDensity:
    if isinstance(m, PiecewiseDensity):
        return m
    if isinstance(m, EmpiricalMeasure):
        return m.to_density()
    if isinstance(m, StationaryEstimate):
        return m.density
    raise TypeError(f"cannot treat {type(m).__name__} as a measure")


def _ks_samples(density: PiecewiseDensity, samples: np.ndarray) -> float:
    xs = np.sort(samples)
    n = len(xs)
    f = density.cdf(xs)
    upper = np.arange(1, n + 1) / n
    return float(max(np.max(np.abs(f - upper)), np.max(np.abs(f - upper + 1.0 / n))))


def kolmogorov_distance(m1, m2) -> float:
    """sup |F1 - F2|.

    Step densities have piecewise linear CDFs, so the sup sits on a breakpoint.
    An empirical measure that kept its samples is compared through its exact
    empirical CDF rather than its histogram.
    """
    for a, b in ((m1, m2), (m2, m1)):
        if (isinstance(a, EmpiricalMeasure) and a.samples is not None
                and not isinstance(b, EmpiricalMeasure)):
            return _ks_samples(_as_density(b), a.samples)
    d1, d2 = _as_density(m1), _as_density(m2)
    grid = np.union1d(d1.breakpoints, d2.breakpoints)
    return float(np.max(np.abs(d1.cdf(grid) - d2.cdf(grid))))


# ---------------------------------------------------------------- transfer operator

def _clean(breaks: np.ndarray, cdf: np.ndarray) -> PiecewiseDensity:
    """Build a density from CDF knots, coalescing close breakpoints and merging equal steps."""
    keep = np.concatenate(([True], np.diff(breaks) > COALESCE_TOL))
    keep[-1] = True
    breaks, cdf = breaks[keep], cdf[keep]
    if len(breaks) > 2 and breaks[-1] - breaks[-2] <= COALESCE_TOL:
        breaks = np.delete(breaks, -2)
        cdf = np.delete(cdf, -2)
    cdf = np.maximum.accumulate(cdf)
    cdf = cdf / cdf[-1]
    widths = np.diff(breaks)
    vals = np.diff(cdf) / widths
    # merge runs of nearly equal values
    change = np.concatenate(([True], np.abs(np.diff(vals)) >= MERGE_TOL))
    starts = np.flatnonzero(change)
    nb = np.concatenate((breaks[starts], [1.0]))
    nc = np.concatenate((cdf[starts], [1.0]))
    nb[0], nc[0] = 0.0, 0.0
    return PiecewiseDensity(nb, np.diff(nc) / np.diff(nb))


def _aggregate(breaks: np.ndarray, cdf: np.ndarray, cells: int):
    """Mass-preserving coarsening: exact CDF values on a fixed grid that is uniform in
    the bulk and geometric toward both endpoints, where stationary measures of
    AM-systems carry power-law mass."""
    half = cells // 2
    tail = np.geomspace(1e-300, 0.5, cells // 4)
    grid = np.unique(np.concatenate((np.linspace(0.0, 1.0, half + 1), tail, 1.0 - tail)))
    return grid, np.interp(grid, breaks, cdf)


def transfer_step(system: AmSystem, p_minus: float, density: PiecewiseDensity,
                  max_pieces: int = MAX_PIECES) -> PiecewiseDensity:
    """One step of the transfer operator T g = sum_i p_i (g o f_i^{-1}) (f_i^{-1})'.

    Computed through the CDF: (T g) CDF at y is p_- G(f_-^{-1} y) + p_+ G(f_+^{-1} y),
    which is piecewise linear with knots at the images of g's breakpoints and
    at the images of the two kinks.
    """
    if not 0 < p_minus < 1:
        raise ParameterOutOfRange("p_minus must lie in (0, 1)")
    b = density.breakpoints
    am, bm = float(system.a_minus), float(system.b_minus)
    ap, bp = float(system.a_plus), float(system.b_plus)
    xm, xp = float(system.x_minus), float(system.x_plus)

    def fwd_minus(x):
        return np.where(x <= xm, am * x, 1.0 - bm * (1.0 - x))

    def fwd_plus(x):
        return np.where(x <= xp, bp * x, 1.0 - ap * (1.0 - x))

    def inv_minus(y):
        return np.where(y <= am * xm, y / am, 1.0 - (1.0 - y) / bm)

    def inv_plus(y):
        return np.where(y <= bp * xp, y / bp, 1.0 - (1.0 - y) / ap)

    new_b = np.union1d(fwd_minus(np.append(b, xm)), fwd_plus(np.append(b, xp)))
    new_b = np.clip(new_b, 0.0, 1.0)
    new_b = np.union1d(new_b, [0.0, 1.0])
    knots = density.cdf_knots()
    cdf = (p_minus * np.interp(np.clip(inv_minus(new_b), 0, 1), b, knots)
           + (1 - p_minus) * np.interp(np.clip(inv_plus(new_b), 0, 1), b, knots))
    cdf[0], cdf[-1] = 0.0, 1.0
    if len(new_b) - 1 > max_pieces:
        new_b, cdf = _aggregate(new_b, cdf, max_pieces // 2)
    return _clean(new_b, cdf)


def _average(d1: PiecewiseDensity, w1: float, d2: PiecewiseDensity, w2: float,
             max_pieces: int) -> PiecewiseDensity:
    grid = np.union1d(d1.breakpoints, d2.breakpoints)
    cdf = (w1 * d1.cdf(grid) + w2 * d2.cdf(grid)) / (w1 + w2)
    if len(grid) - 1 > max_pieces:
        grid, cdf = _aggregate(grid, cdf, max_pieces // 2)
    return _clean(grid, cdf)


@dataclass(frozen=True)
class StationaryEstimate:
    density: PiecewiseDensity
    converged: bool
    iterations: int
    distance: float
    mode: str


def iterate_to_stationary(system: AmSystem, p_minus: float, init: PiecewiseDensity | None = None,
                          max_iter: int = 200, tol: float = 1e-10, mode: str = "direct",
                          max_pieces: int = MAX_PIECES) -> StationaryEstimate:
    """Iterate T (mode 'direct') or the Cesaro averages (mode 'cesaro') until successive
    Kolmogorov distances drop below tol, reporting the last distance either way."""
    if mode not in ("direct", "cesaro"):
        raise ParameterOutOfRange(f"unknown mode {mode!r}")
    if not all(v > 0 for v in lyapunov_exponents(system, p_minus)):
        warnings.warn("Lyapunov exponents are not both positive; iterates may not converge",
                      RuntimeWarning, stacklevel=2)
    current = init if init is not None else PiecewiseDensity.uniform()
    power = current
    dist = math.inf
    for n in range(max_iter):
        power = transfer_step(system, p_minus, power, max_pieces)
        if mode == "direct":
            nxt = power
        else:
            nxt = _average(current, n + 1, power, 1, max_pieces)
        dist = kolmogorov_distance(current, nxt)
        if dist < tol:
            return StationaryEstimate(current, True, n, dist, mode)
        current = nxt
    warnings.warn(NonconvergenceWarning(
        f"no convergence after {max_iter} iterations (distance {dist:.3g})", dist))
    return StationaryEstimate(current, False, max_iter, dist, mode)


def empirical_stationary(system: AmSystem, p_minus: float, burn_in: int = 1000,
                         samples: int = 100_000, bins: int = 100, seed: int = 0, x0: float = 0.5,
                         keep_samples: bool = True) -> EmpiricalMeasure:
    """Histogram of one long random orbit after burn-in."""
    if samples < 1 or bins < 1 or burn_in < 0:
        raise ParameterOutOfRange("samples and bins must be positive")
    xs = orbit_samples(system, x0, p_minus, samples, burn_in, seed)
    counts, _ = np.histogram(xs, bins=bins, range=(0.0, 1.0))
    return EmpiricalMeasure(counts / samples, xs if keep_samples else None)


@dataclass(frozen=True)
class LebesgueVerdict:
    lebesgue: bool
    residual1: float
    residual2: float
    system_type: SystemType
    positive_exponents: bool

    def to_dict(self) -> dict:
        return {"lebesgue": self.lebesgue, "residual1": self.residual1,
                "residual2": self.residual2}


def lebesgue_check(system: AmSystem, p_minus: float, tol: float = 1e-10) -> LebesgueVerdict:
    """The stationary measure is Lebesgue iff the system is border type and
    p_-/a_- + p_+/b_+ = 1 (then p_-/b_- + p_+/a_+ = 1 follows)."""
    p_plus = 1 - p_minus
    r1 = float(p_minus / system.a_minus + p_plus / system.b_plus - 1)
    r2 = float(p_minus / system.b_minus + p_plus / system.a_plus - 1)
    kind = classify_type(system)
    positive = all(v > 0 for v in lyapunov_exponents(system, p_minus))
    verdict = kind is SystemType.BORDER and abs(r1) < tol and positive
    return LebesgueVerdict(verdict, r1, r2, kind, positive)


# ---------------------------------------------------------------- local dimension

def default_radii(n: int = 12, r_max: float = 1e-2, r_min: float = 1e-4) -> np.ndarray:
    return np.geomspace(r_max, r_min, n)


def local_dimension_estimate(samples, radii=None, centers: int = 2000, seed: int = 0,
                             return_details: bool = False):
    """Least-squares slope of the mean log ball mass against log r.

    `samples` is a point cloud or an EmpiricalMeasure that kept its samples.
    Ball masses are computed for `centers` sample points drawn from the cloud,
    excluding the center itself.
    """
    if isinstance(samples, EmpiricalMeasure):
        if samples.samples is None:
            raise InsufficientMass("empirical measure kept no samples")
        samples = samples.samples
    xs = np.sort(np.asarray(samples, dtype=float))
    n = len(xs)
    if n < 2:
        raise InsufficientMass("need at least two samples")
    radii = default_radii() if radii is None else np.asarray(radii, dtype=float)
    pick = SplitMix64(seed).integers(n, min(centers, n))
    c = xs[pick]
    logm = np.empty((len(c), len(radii)))
    for i, r in enumerate(radii):
        cnt = np.searchsorted(xs, c + r, side="right") - np.searchsorted(xs, c - r, side="left") - 1
        if np.any(cnt <= 0):
            raise InsufficientMass(f"a ball of radius {r:g} holds no other sample")
        logm[:, i] = np.log(cnt / (n - 1))
    slope, _ = np.polyfit(np.log(radii), logm.mean(axis=0), 1)
    if return_details:
        return float(slope), logm
    return float(slope)
