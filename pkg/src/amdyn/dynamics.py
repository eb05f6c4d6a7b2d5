"""Random orbits of AM-systems driven by i.i.d. sign words."""
from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .core import AmSystem, SystemType, _check_unit, classify_type
from .errors import NotDisjointType, ParameterOutOfRange
from .rng import derive_seed, uniform_block


def sample_word(seed: int, length: int, p_minus: float = 0.5) -> np.ndarray:
    """Word of +-1 signs, -1 with probability p_minus. Same seed, same word."""
    if not 0 < p_minus < 1:
        raise ParameterOutOfRange("p_minus must lie in (0, 1)")
    if length < 0:
        raise ParameterOutOfRange("length must be non-negative")
    u = uniform_block(seed, 0, length)
    return np.where(u < p_minus, -1, 1).astype(np.int8)


@dataclass(frozen=True)
class Orbit:
    points: np.ndarray
    word: np.ndarray

    @property
    def x0(self) -> float:
        return float(self.points[0])


def _iterate(system, x, word, out):
    """Run the word from x, writing points into out; returns the final point.

    The state is kept as the distance to the nearer endpoint (x below 1/2,
    1 - x above), so orbits that come within 1e-16 of 1 are not rounded onto
    the fixed point 1.
    """
    am, bm = float(system.a_minus), float(system.b_minus)
    ap, bp = float(system.a_plus), float(system.b_plus)
    xm, xp = float(system.x_minus), float(system.x_plus)
    low = x <= 0.5
    v = x if low else 1.0 - x
    for i, s in enumerate(word.tolist()):
        # left: slope near 0 (x -> left * x), right: slope near 1 (1 - x -> right * (1 - x))
        if s < 0:
            left, right, kink = am, bm, xm
        else:
            left, right, kink = bp, ap, xp
        on_left = v <= kink if low else v >= 1.0 - kink
        if on_left:
            y = left * v if low else left * (1.0 - v)
            if y <= 0.5:
                v, low = y, True
            elif low:
                v, low = 1.0 - y, False
            else:
                v = (1.0 - left) + left * v
        else:
            u = right * v if not low else right * (1.0 - v)
            if u < 0.5:
                v, low = u, False
            else:
                v, low = 1.0 - u, True
        out[i] = v if low else 1.0 - v
    return v if low else 1.0 - v


def orbit(system: AmSystem, x0: float, word) -> Orbit:
    """Points x0, f_{w1}(x0), f_{w2}f_{w1}(x0), ...; length len(word) + 1."""
    _check_unit(x0)
    word = np.asarray(word, dtype=np.int8)
    points = np.empty(len(word) + 1)
    points[0] = x0
    _iterate(system, float(x0), word, points[1:])
    return Orbit(points, word)


def orbit_samples(system: AmSystem, x0: float, p_minus: float, n: int,
                  burn_in: int = 0, seed: int = 0, block: int = 1 << 20) -> np.ndarray:
    """n points of one long orbit after discarding burn_in steps, drawn blockwise."""
    out = np.empty(n)
    x = float(x0)
    total = burn_in + n
    pos = 0
    scratch = np.empty(block)
    while pos < total:
        m = min(block, total - pos)
        signs = np.where(uniform_block(seed, pos, m) < p_minus, -1, 1).astype(np.int8)
        x = _iterate(system, x, signs, scratch)
        lo, hi = max(pos, burn_in), pos + m
        if hi > lo:
            out[lo - burn_in:hi - burn_in] = scratch[lo - pos:hi - pos]
        pos += m
    return out


def _sides(system, points):
    side = np.zeros(len(points), dtype=np.int8)
    side[points <= system.fm_xm] = -1
    side[points >= system.fp_xp] = 1
    return side


def detect_jumps(system: AmSystem, orbit: Orbit) -> list[int]:
    """Times s where points s and s+1 sit in opposite components of the central split.

    Points strictly inside the central gap belong to neither component.
    """
    if classify_type(system) is not SystemType.DISJOINT:
        raise NotDisjointType("jumps are only defined for disjoint-type systems")
    side = _sides(system, np.asarray(orbit.points))
    a, b = side[:-1], side[1:]
    return np.flatnonzero((a != 0) & (b != 0) & (a != b)).tolist()


def synchronization_gap(system: AmSystem, x0: float, y0: float, word) -> np.ndarray:
    """|f^n(x0) - f^n(y0)| along the shared word, n = 0..len(word).

    The gaps need not shrink step by step; for positive exponents they go
    to 0 almost surely.
    """
    ox = orbit(system, x0, word)
    oy = orbit(system, y0, word)
    return np.abs(ox.points - oy.points)


def _tail_of(system, x0, length, min_jumps, tail, p_minus, seed):
    word = sample_word(seed, length, p_minus)
    o = orbit(system, x0, word)
    if len(detect_jumps(system, o)) < min_jumps:
        return None
    return o.points[-tail:]


def omega_limit_sample(system: AmSystem, x0: float, n_orbits: int, length: int,
                       min_jumps: int, tail: int, p_minus: float = 0.5, seed: int = 0,
                       threads: int = 1) -> np.ndarray:
    """Pooled last `tail` points of those orbits that jumped at least min_jumps times.

    Orbit i uses its own stream derived from (seed, i), so the result does not
    depend on the thread count.
    """
    if classify_type(system) is not SystemType.DISJOINT:
        raise NotDisjointType("omega-limit sampling needs a disjoint-type system")
    if tail < 1 or tail > length + 1:
        raise ParameterOutOfRange("tail must lie in 1..length+1")

    def run(i):
        return _tail_of(system, x0, length, min_jumps, tail, p_minus, derive_seed(seed, i))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run, range(n_orbits)))
    else:
        parts = [run(i) for i in range(n_orbits)]
    kept = [p for p in parts if p is not None]
    if not kept:
        return np.empty(0)
    return np.concatenate(kept)
