"""AM-systems: pairs of piecewise linear interval maps with one fixed-point pair each.

The minus map contracts near 0 and expands near 1; the plus map does the
opposite. Both are increasing homeomorphisms of [0, 1].
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from numbers import Rational

from .errors import DomainError, NotResonant, ParameterOutOfRange

BORDER_TOL = 1e-12


class SystemType(str, Enum):
    DISJOINT = "Disjoint"
    BORDER = "Border"
    OVERLAPPING = "Overlapping"


def _sign(s) -> int:
    if s in ("-", -1, "minus"):
        return -1
    if s in ("+", 1, "plus"):
        return 1
    raise ValueError(f"sign must be '-' or '+', got {s!r}")


@dataclass(frozen=True)
class AmSystem:
    """Slopes of the two maps; build it with :func:`new_system`."""

    a_minus: float
    b_minus: float
    a_plus: float
    b_plus: float

    @property
    def x_minus(self):
        return (self.b_minus - 1) / (self.b_minus - self.a_minus)

    @property
    def x_plus(self):
        return (1 - self.a_plus) / (self.b_plus - self.a_plus)

    @property
    def fm_xm(self):
        """f_minus(x_minus): upper end of the left component of the central split."""
        return self.a_minus * self.x_minus

    @property
    def fp_xp(self):
        """f_plus(x_plus): lower end of the right component of the central split."""
        return 1 - self.a_plus * (1 - self.x_plus)

    @property
    def is_symmetric(self) -> bool:
        return self.a_minus == self.a_plus and self.b_minus == self.b_plus

    def apply(self, sign, x):
        return apply(self, sign, x)

    def to_dict(self) -> dict:
        return {k: float(getattr(self, k)) for k in ("a_minus", "b_minus", "a_plus", "b_plus")}


def new_system(a_minus, b_minus, a_plus, b_plus) -> AmSystem:
    slopes = (a_minus, b_minus, a_plus, b_plus)
    for name, v in zip(("a_minus", "b_minus", "a_plus", "b_plus"), slopes):
        if not isinstance(v, Rational):
            v = float(v)
            if not math.isfinite(v):
                raise ParameterOutOfRange(f"{name} must be finite")
    if not (0 < a_minus < 1 and 0 < a_plus < 1):
        raise ParameterOutOfRange("contracting slopes a_minus, a_plus must lie in (0, 1)")
    if not (b_minus > 1 and b_plus > 1):
        raise ParameterOutOfRange("expanding slopes b_minus, b_plus must exceed 1")
    if all(isinstance(v, Rational) for v in slopes):
        return AmSystem(*(Fraction(v) for v in slopes))
    return AmSystem(*(float(v) for v in slopes))


@dataclass(frozen=True)
class ResonantSystem:
    """Descriptor of the symmetric (k:l)-resonant system with ratio rho."""

    rho: float
    k: int
    l: int
    p_minus: float = 0.5

    def to_dict(self) -> dict:
        return {"rho": self.rho, "k": self.k, "l": self.l, "p_minus": self.p_minus}


def reflect(x):
    """The symmetry x -> 1 - x."""
    return 1 - x


def from_resonance(rho, k: int | None = None, l: int | None = None) -> AmSystem:
    """Symmetric (k:l)-resonant system with a = rho**l and b = rho**-k.

    Accepts a ResonantSystem or the three numbers.
    """
    if isinstance(rho, ResonantSystem):
        rho, k, l = rho.rho, rho.k, rho.l
    if not (isinstance(k, int) and isinstance(l, int)) or k < 1 or l < 1:
        raise ParameterOutOfRange("k and l must be positive integers")
    if k <= l:
        raise ParameterOutOfRange("need k > l")
    if math.gcd(k, l) != 1:
        raise ParameterOutOfRange(f"k={k} and l={l} are not coprime")
    if not 0 < rho < 1:
        raise ParameterOutOfRange("rho must lie in (0, 1)")
    a = rho**l
    b = rho**-k
    return new_system(a, b, a, b)


def _check_unit(x):
    if not 0 <= x <= 1:
        raise DomainError(f"point {x} outside [0, 1]")


def apply(system: AmSystem, sign, x):
    _check_unit(x)
    if _sign(sign) < 0:
        if x <= system.x_minus:
            return system.a_minus * x
        return 1 - system.b_minus * (1 - x)
    if x <= system.x_plus:
        return system.b_plus * x
    return 1 - system.a_plus * (1 - x)


def apply_inverse(system: AmSystem, sign, y):
    _check_unit(y)
    if _sign(sign) < 0:
        if y <= system.fm_xm:
            return y / system.a_minus
        return 1 - (1 - y) / system.b_minus
    if y <= system.b_plus * system.x_plus:
        return y / system.b_plus
    return 1 - (1 - y) / system.a_plus


def lyapunov_exponents(system: AmSystem, p_minus: float) -> tuple[float, float]:
    """Exponents at the endpoints 0 and 1 for the Bernoulli(p_minus, 1 - p_minus) choice of maps."""
    if not 0 < p_minus < 1:
        raise ParameterOutOfRange("p_minus must lie in (0, 1)")
    p_plus = 1 - p_minus
    at0 = p_minus * math.log(system.a_minus) + p_plus * math.log(system.b_plus)
    at1 = p_minus * math.log(system.b_minus) + p_plus * math.log(system.a_plus)
    return at0, at1


def classify_type(system: AmSystem, tol: float = BORDER_TOL) -> SystemType:
    left, right = system.fm_xm, system.fp_xp
    if isinstance(left, Fraction) and isinstance(right, Fraction):
        diff = left - right
        if diff == 0:
            return SystemType.BORDER
        return SystemType.DISJOINT if diff < 0 else SystemType.OVERLAPPING
    diff = float(left) - float(right)
    if abs(diff) <= tol:
        return SystemType.BORDER
    return SystemType.DISJOINT if diff < 0 else SystemType.OVERLAPPING


def continued_fraction_convergents(value: float, max_terms: int = 64):
    """Yield convergents (p, q) of a positive real number."""
    p0, q0, p1, q1 = 0, 1, 1, 0
    x = value
    for _ in range(max_terms):
        a = math.floor(x)
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        yield p1, q1
        frac = x - a
        if frac < 1e-15:
            return
        x = 1 / frac


def detect_resonance(system: AmSystem, endpoint: int = 0, max_denominator: int = 1000,
                     tol: float = 1e-9):
    """Return coprime (k, l) with k/l matching the log-slope ratio at the endpoint, or None.

    At 0 the relation is a_minus**k * b_plus**l == 1, at 1 it is
    a_plus**k * b_minus**l == 1.
    """
    if endpoint == 0:
        value = -math.log(system.b_plus) / math.log(system.a_minus)
    elif endpoint == 1:
        value = -math.log(system.b_minus) / math.log(system.a_plus)
    else:
        raise ValueError("endpoint must be 0 or 1")
    for p, q in continued_fraction_convergents(value):
        if q > max_denominator:
            break
        if p > 0 and abs(value - p / q) < tol:
            return p, q
    return None


def positivity_window(k: int, l: int) -> tuple[float, float]:
    """Open interval of p_minus for which both endpoint exponents of a (k:l) system are positive."""
    if k <= l or l < 1:
        raise NotResonant("need integers k > l >= 1")
    return l / (k + l), k / (k + l)
