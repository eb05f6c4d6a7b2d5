from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from amdyn import (apply, cantor_approx, detect_jumps, from_resonance, new_system,
                   omega_limit_sample, orbit, sample_word, synchronization_gap)
from amdyn.dynamics import Orbit, orbit_samples
from amdyn.errors import DomainError, NotDisjointType, ParameterOutOfRange
from amdyn.resonant import ResonantStructure

GOLD = new_system(0.5, 4, 0.5, 4)


def test_sample_word_examples():
    assert len(sample_word(7, 0, 0.5)) == 0
    w = sample_word(7, 10**6, 0.5)
    assert abs((w == -1).sum() - 500_000) <= 5 * 500
    w = sample_word(7, 10**6, 0.25)
    sigma = np.sqrt(10**6 * 0.25 * 0.75)
    assert abs((w == -1).sum() - 250_000) <= 5 * sigma
    assert set(np.unique(w)) <= {-1, 1}


def test_sample_word_errors():
    with pytest.raises(ParameterOutOfRange):
        sample_word(1, 10, 0.0)
    with pytest.raises(ParameterOutOfRange):
        sample_word(1, -1, 0.5)


def test_word_determinism():
    assert np.array_equal(sample_word(11, 5000, 0.3), sample_word(11, 5000, 0.3))
    assert not np.array_equal(sample_word(11, 5000, 0.3), sample_word(12, 5000, 0.3))


def test_orbit_examples():
    o = orbit(GOLD, 2 / 7, [1])
    assert o.points == pytest.approx([2 / 7, 9 / 14], abs=1e-15)
    o = orbit(GOLD, 2 / 7, [-1, -1])
    assert o.points == pytest.approx([2 / 7, 1 / 7, 1 / 14], abs=1e-15)
    assert np.all(orbit(GOLD, 0.0, sample_word(3, 100)).points == 0)
    assert o.x0 == 2 / 7
    with pytest.raises(DomainError):
        orbit(GOLD, 1.5, [1])


def test_orbit_matches_apply():
    rng = np.random.default_rng(0)
    for _ in range(50):
        s = new_system(rng.uniform(0.05, 0.95), rng.uniform(1.05, 30),
                       rng.uniform(0.05, 0.95), rng.uniform(1.05, 30))
        w = sample_word(int(rng.integers(1000)), 200, 0.5)
        x = rng.uniform()
        o = orbit(s, x, w)
        for n, sign in enumerate(w):
            assert o.points[n + 1] == pytest.approx(apply(s, int(sign), float(o.points[n])), abs=1e-12)
            x = apply(s, int(sign), x)


def test_orbit_is_not_absorbed_near_one():
    # orbits that pass within 1e-16 of 1 must come back
    s = new_system(0.25, 8, 0.25, 8)
    xs = orbit_samples(s, 0.5, 0.5, 20000, 100, seed=1)
    assert np.mean(xs == 1.0) < 0.01 and np.mean(xs == 0.0) < 0.01


def test_jumps_examples():
    assert detect_jumps(GOLD, Orbit(np.array([2 / 7, 9 / 14]), np.array([1]))) == [0]
    assert detect_jumps(GOLD, Orbit(np.array([2 / 7, 1 / 7]), np.array([-1]))) == []
    with pytest.raises(NotDisjointType):
        detect_jumps(new_system(F(2, 3), 2, F(2, 3), 2), orbit(GOLD, 0.3, [1]))


def test_jumps_skip_central_points():
    # a point inside the central gap neither ends nor starts a jump
    pts = np.array([0.2, 0.5, 0.8, 0.5, 0.3])
    assert detect_jumps(GOLD, Orbit(pts, np.zeros(4, dtype=np.int8))) == []
    # endpoints of the gap belong to the closed components
    assert detect_jumps(GOLD, Orbit(np.array([3 / 7, 4 / 7]), np.array([1]))) == [0]


def test_synchronization_examples():
    w = sample_word(1, 1000, 0.5)
    assert np.all(synchronization_gap(GOLD, 0.3, 0.3, w) == 0)
    g = synchronization_gap(GOLD, 0.2, 0.9, -np.ones(200, dtype=np.int8))
    assert g[-1] < 1e-12
    good = sum(synchronization_gap(GOLD, 0.3, 0.7, sample_word(seed, 10**4, 0.5))[-1] < 1e-6
               for seed in range(100))
    assert good >= 99


def test_omega_limit_examples():
    s = from_resonance(0.5, 2, 1)
    pts = omega_limit_sample(s, 0.3, 1000, 1000, 10, 10, seed=2)
    assert len(pts) > 0
    approx = cantor_approx(0.5, 2, 1, 8, 60)
    interior = (pts > 0) & (pts < 1)
    inside = approx.contains(pts[interior], inflate=1e-3)
    # points very close to 0 or 1 sit in levels |j| > 60, whose cover is below 1e-3 anyway
    near_ends = np.minimum(pts[interior], 1 - pts[interior]) < 0.5**60
    assert np.mean(inside | near_ends) >= 0.99
    central = (pts > 3 / 7) & (pts < 4 / 7)
    assert central.mean() < 0.005
    assert len(omega_limit_sample(s, 0.3, 20, 50, 1000, 10)) == 0


def test_omega_limit_thread_invariance():
    s = from_resonance(0.5, 2, 1)
    a = omega_limit_sample(s, 0.3, 40, 300, 3, 5, seed=9, threads=1)
    b = omega_limit_sample(s, 0.3, 40, 300, 3, 5, seed=9, threads=4)
    assert np.array_equal(a, b)


def test_omega_limit_errors():
    with pytest.raises(NotDisjointType):
        omega_limit_sample(from_resonance(0.65, 2, 1), 0.3, 1, 10, 1, 2)


@given(st.integers(0, 2**32), st.integers(0, 300), st.floats(0.05, 0.95))
def test_determinism(seed, n, p):
    a = orbit(GOLD, 0.3, sample_word(seed, n, p)).points
    b = orbit(GOLD, 0.3, sample_word(seed, n, p)).points
    assert np.array_equal(a, b)


@given(st.tuples(st.floats(0.05, 0.95), st.floats(1.05, 30), st.floats(0.05, 0.95),
                 st.floats(1.05, 30)), st.floats(0, 1), st.integers(0, 10**6))
def test_confinement(slopes, x0, seed):
    pts = orbit(new_system(*slopes), x0, sample_word(seed, 500, 0.5)).points
    assert np.all((pts >= 0) & (pts <= 1))


@given(st.sampled_from([(0.5, 2, 1), (0.45, 3, 1), (0.4, 5, 2)]),
       st.integers(-6, 6).filter(bool), st.integers(0, 10**6), st.floats(1e-6, 1 - 1e-6),
       st.floats(1e-6, 1 - 1e-6))
def test_jump_consistency(params, j, seed, u, v):
    # two points of the same I_j under the same word jump at the same times;
    # endpoints are avoided since their images land exactly on the gap ends,
    # where rounding decides the side
    rho, k, l = params
    st_ = ResonantStructure(rho, k, l)
    s = from_resonance(rho, k, l)
    m = st_.level_map(j)
    lo, hi = m.image(*st_.I)
    w = sample_word(seed, 60, 0.5)
    x, y = lo + u * (hi - lo), lo + v * (hi - lo)
    assert detect_jumps(s, orbit(s, x, w)) == detect_jumps(s, orbit(s, y, w))
