import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from amdyn import (ResonantSystem, SystemType, apply, apply_inverse, classify_type,
                   detect_resonance, from_resonance, lyapunov_exponents, new_system,
                   positivity_window, reflect)
from amdyn.errors import DomainError, ParameterOutOfRange

F = Fraction


def test_breakpoints_exact():
    s = new_system(F(2, 3), 2, F(2, 3), 2)
    assert (s.x_minus, s.x_plus, s.fm_xm, s.fp_xp) == (F(3, 4), F(1, 4), F(1, 2), F(1, 2))
    s = new_system(F(1, 2), 4, F(1, 2), 4)
    assert (s.x_minus, s.x_plus, s.fm_xm, s.fp_xp) == (F(6, 7), F(1, 7), F(3, 7), F(4, 7))


def test_float_breakpoints():
    s = new_system(0.5, 4.0, 0.5, 4.0)
    assert s.x_minus == pytest.approx(6 / 7, abs=1e-15)
    assert s.fp_xp == pytest.approx(4 / 7, abs=1e-15)


@pytest.mark.parametrize("slopes", [(1.2, 2, 0.5, 4), (0.5, 0.9, 0.5, 4), (0.5, 4, 0, 4),
                                    (0.5, 4, 0.5, 1), (math.nan, 4, 0.5, 4)])
def test_slope_constraints(slopes):
    with pytest.raises(ParameterOutOfRange):
        new_system(*slopes)


def test_apply_examples():
    s = new_system(F(1, 2), 4, F(1, 2), 4)
    assert apply(s, "-", F(2, 7)) == F(1, 7)
    assert apply(s, "+", F(2, 7)) == F(9, 14)
    assert apply(s, "-", 1) == 1
    assert apply_inverse(s, "-", F(1, 7)) == F(2, 7)
    assert apply_inverse(s, "+", 0) == 0
    assert apply_inverse(s, "+", F(9, 14)) == F(2, 7)
    with pytest.raises(DomainError):
        apply(s, "+", 1.5)
    with pytest.raises(DomainError):
        apply_inverse(s, "-", -0.1)


def test_lyapunov_examples():
    l0, l1 = lyapunov_exponents(new_system(0.5, 4, 0.5, 4), 0.5)
    assert l0 == pytest.approx(0.346574, abs=1e-6) and l1 == pytest.approx(0.5 * math.log(2))
    assert lyapunov_exponents(new_system(0.5, 2, 0.5, 2), 0.5) == (0.0, 0.0)
    l0, l1 = lyapunov_exponents(new_system(2 / 3, 2, 2 / 3, 2), 0.5)
    assert l0 == pytest.approx(0.5 * math.log(4 / 3), abs=1e-12)
    assert l0 == pytest.approx(0.143841, abs=1e-6) and l1 == pytest.approx(l0)
    with pytest.raises(ParameterOutOfRange):
        lyapunov_exponents(new_system(0.5, 4, 0.5, 4), 1.0)


def test_classify_examples():
    assert classify_type(new_system(F(2, 3), 2, F(2, 3), 2)) is SystemType.BORDER
    assert classify_type(new_system(2 / 3, 2, 2 / 3, 2)) is SystemType.BORDER
    assert classify_type(new_system(0.5, 4, 0.5, 4)) is SystemType.DISJOINT
    assert classify_type(from_resonance(0.65, 2, 1)) is SystemType.OVERLAPPING
    assert 0.65**3 - 2 * 0.65 + 1 == pytest.approx(-0.025375, abs=1e-9)


def test_detect_resonance_examples():
    assert detect_resonance(new_system(0.5, 4, 0.5, 4)) == (2, 1)
    assert detect_resonance(new_system(0.25, 32, 0.25, 32)) == (5, 2)
    assert detect_resonance(new_system(0.5, 3, 0.5, 3), 0, 50, 1e-9) is None
    # endpoint 1 uses a_plus and b_minus
    assert detect_resonance(new_system(0.5, 32, 0.25, 4), 1) == (5, 2)


def test_from_resonance_examples():
    assert from_resonance(0.5, 2, 1) == new_system(0.5, 4.0, 0.5, 4.0)
    s = from_resonance(ResonantSystem(0.5, 5, 2))
    assert (s.a_minus, s.b_minus) == (0.25, 32.0) and s.is_symmetric
    for bad in [(0.5, 4, 2), (1.0, 2, 1), (0.5, 1, 2), (0.5, 2, 2)]:
        with pytest.raises(ParameterOutOfRange):
            from_resonance(*bad)


def test_positivity_window_examples():
    assert positivity_window(2, 1) == pytest.approx((1 / 3, 2 / 3))
    assert positivity_window(5, 2) == pytest.approx((2 / 7, 5 / 7))
    assert positivity_window(3, 2) == pytest.approx((2 / 5, 3 / 5))


slopes = st.tuples(st.floats(0.05, 0.95), st.floats(1.05, 20), st.floats(0.05, 0.95),
                   st.floats(1.05, 20)).map(lambda t: new_system(*t))
unit = st.floats(0, 1)


@given(slopes, unit, unit, st.sampled_from("-+"))
def test_monotone(s, x, y, sign):
    if x < y:
        assert apply(s, sign, x) <= apply(s, sign, y)
    if y - x > 1e-9:
        assert apply(s, sign, x) < apply(s, sign, y)


@given(slopes, unit, st.sampled_from("-+"))
def test_round_trip(s, x, sign):
    assert apply_inverse(s, sign, apply(s, sign, x)) == pytest.approx(x, abs=1e-12)
    assert apply(s, sign, apply_inverse(s, sign, x)) == pytest.approx(x, abs=1e-12)


@given(slopes, st.floats(1e-6, 1 - 1e-6))
def test_displacement(s, x):
    assert apply(s, "-", x) < x < apply(s, "+", x)


@given(slopes)
def test_breakpoint_order_lemma(s):
    if all(v > 0 for v in lyapunov_exponents(s, 0.5)):
        assert s.x_plus < s.x_minus


@given(st.sampled_from([(2, 1), (3, 1), (5, 2), (3, 2), (7, 3)]),
       st.fractions(F(1, 20), F(19, 20), max_denominator=50),
       st.fractions(0, 1, max_denominator=10**6))
def test_symmetry_exact(kl, rho, x):
    s = from_resonance(rho, *kl)
    assert isinstance(s.a_minus, Fraction)
    assert apply(s, "-", reflect(x)) == reflect(apply(s, "+", x))


@given(st.sampled_from([(2, 1), (3, 1), (5, 2), (3, 2), (7, 3)]), st.floats(0.05, 0.95), unit)
def test_symmetry_float(kl, rho, x):
    # 1 - x rounds to a multiple of 2**-53, and the expanding branch scales that by b
    s = from_resonance(rho, *kl)
    tol = 4 * s.b_minus * 2.0**-53
    assert apply(s, "-", reflect(x)) == pytest.approx(reflect(apply(s, "+", x)), abs=tol)


@given(st.floats(0.01, 0.99), st.floats(1.01, 50))
def test_exact_rational_border(a, b):
    # rational slopes take the exact path
    s = new_system(F(a).limit_denominator(1000), F(b).limit_denominator(1000),
                   F(a).limit_denominator(1000), F(b).limit_denominator(1000))
    diff = s.fm_xm - s.fp_xp
    expected = (SystemType.BORDER if diff == 0 else
                SystemType.DISJOINT if diff < 0 else SystemType.OVERLAPPING)
    assert classify_type(s) is expected
