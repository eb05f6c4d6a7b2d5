"""Symmetric (k:l)-resonant systems: interval structure, symbolic measure and pressure.

The system is f_-(x) = rho**l x near 0 and the mirrored map near 1, with
expanding slope rho**-k. The left half of the support is organised by the
IFS phi_r(x) = rho - rho**r x acting on the interval I_{-1}; the right half
is its mirror image under x -> 1 - x.

Codes address intervals as (j, suffix, cylinder):
  j        signed level, I_j = rho**(-j-1) I_{-1} for j < 0 and the mirror for j > 0
  suffix   digits in 1..l-1 selecting I_{j, j1..jn} inside J_j (empty when l = 1)
  cylinder symbols of the induced IFS; an int r, or a tuple (r, r1, ..., rn)
           standing for phi_r o phi_r1 o ... o phi_rn
"""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .core import positivity_window
from .errors import (BoundaryRegimeWarning, InsufficientData, InsufficientDepth,
                     InvalidRegime, NoRootBracketed, OutsideDomain, ParameterOutOfRange)

ROOT_TOL = 1e-14
MAX_BISECT = 200
REGIME_TOL = 1e-12


def _check_kl(k, l):
    if not (isinstance(k, (int, np.integer)) and isinstance(l, (int, np.integer))):
        raise ParameterOutOfRange("k and l must be integers")
    if l < 1 or k <= l:
        raise ParameterOutOfRange("need k > l >= 1")
    if math.gcd(int(k), int(l)) != 1:
        raise ParameterOutOfRange(f"k={k} and l={l} are not coprime")


def _check_rho(rho):
    if not 0 < rho < 1:
        raise ParameterOutOfRange("rho must lie in (0, 1)")


def bisect(func, lo, hi, tol=ROOT_TOL, max_iter=MAX_BISECT):
    flo, fhi = func(lo), func(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise NoRootBracketed(f"no sign change on [{lo}, {hi}]")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fm = func(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
        if hi - lo < tol:
            break
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------- eta and dimension

def eta_polynomial(k: int, l: int):
    """Integer coefficients (highest degree first) of x**(k+l) - 2x**(k+1) + 2x - 1."""
    coeffs = [0] * (k + l + 1)
    coeffs[0] += 1
    coeffs[l - 1] -= 2
    coeffs[k + l - 1] += 2
    coeffs[k + l] -= 1
    return coeffs


def solve_eta(k: int, l: int) -> float:
    """Root in (1/2, 1) of x**(k+l) - 2x**(k+1) + 2x - 1; rho < eta is the disjoint regime."""
    _check_kl(k, l)

    def g(x):
        return x ** (k + l) - 2 * x ** (k + 1) + 2 * x - 1

    # g is negative at 1/2 and positive just below the trivial root at 1
    hi = 1.0 - 1e-3
    while g(hi) <= 0 and hi > 0.5:
        hi = 0.5 * (hi + 0.5)
    return bisect(g, 0.5, hi)


def _regime(rho, k, l):
    eta = solve_eta(k, l)
    if abs(rho - eta) <= REGIME_TOL:
        return eta, "boundary"
    if rho > eta:
        return eta, "overlapping"
    return eta, "disjoint"


def support_dimension(rho: float, k: int, l: int) -> float:
    """Hausdorff dimension log(eta)/log(rho) of the stationary measure's support."""
    _check_rho(rho)
    eta, regime = _regime(rho, k, l)
    if regime == "overlapping":
        raise InvalidRegime(f"rho={rho} exceeds eta={eta}")
    if regime == "boundary":
        warnings.warn("rho equals eta: support is the whole interval", BoundaryRegimeWarning,
                      stacklevel=2)
        return 1.0
    return math.log(eta) / math.log(rho)


# ---------------------------------------------------------------- symbolic measure (l = 1)

def solve_eta_pm(k: int, p_minus: float) -> tuple[float, float]:
    """Roots in (0, 1) of p_+ x**(k+1) - x + p_- and p_- x**(k+1) - x + p_+.

    When one of them has no root below 1 (p_minus on the edge of the
    positivity window) the value 1.0 is returned for it.
    """
    if not 0 < p_minus < 1:
        raise ParameterOutOfRange("p_minus must lie in (0, 1)")
    p_plus = 1 - p_minus

    def root(lead, const):
        def h(x):
            return lead * x ** (k + 1) - x + const
        xmin = (1.0 / ((k + 1) * lead)) ** (1.0 / k)
        if xmin >= 1 or h(xmin) >= 0:
            return 1.0
        return bisect(h, 0.0, xmin)

    return root(p_plus, p_minus), root(p_minus, p_plus)


@dataclass(frozen=True)
class SymbolicWeights:
    k: int
    p_minus: float
    eta_minus: float
    eta_plus: float
    c_minus: float
    c_plus: float
    beta_minus: tuple
    beta_plus: tuple

    def to_dict(self) -> dict:
        return {"k": self.k, "p_minus": self.p_minus, "eta_minus": self.eta_minus,
                "eta_plus": self.eta_plus, "c_minus": self.c_minus, "c_plus": self.c_plus,
                "beta_minus": list(self.beta_minus), "beta_plus": list(self.beta_plus)}


def symbolic_weights(k: int, p_minus: float) -> SymbolicWeights:
    """Weights of the stationary measure of a (k:1)-resonant system in the disjoint regime."""
    if k < 2:
        raise ParameterOutOfRange("need k >= 2")
    lo, hi = positivity_window(k, 1)
    if not lo < p_minus < hi:
        raise ParameterOutOfRange(f"p_minus={p_minus} outside the positivity window ({lo}, {hi})")
    p_plus = 1 - p_minus
    em, ep = solve_eta_pm(k, p_minus)
    denom = p_plus * em / (1 - em) + p_minus * ep / (1 - ep)
    bm = tuple(p_minus / p_plus * ep**r for r in range(1, k + 1))
    bp = tuple(p_plus / p_minus * em**r for r in range(1, k + 1))
    return SymbolicWeights(k, p_minus, em, ep, p_plus / denom, p_minus / denom, bm, bp)


weights = symbolic_weights


def cylinder_mass(w: SymbolicWeights, j: int, symbols) -> float:
    """Stationary mass of I_{j; r1..rn}; the beta families alternate along the word."""
    if j == 0:
        raise ParameterOutOfRange("j must be non-zero")
    if j < 0:
        mass = w.c_minus * w.eta_minus ** (-j)
        fams = (w.beta_minus, w.beta_plus)
    else:
        mass = w.c_plus * w.eta_plus**j
        fams = (w.beta_plus, w.beta_minus)
    for i, r in enumerate(symbols):
        if not 1 <= r <= w.k:
            raise ParameterOutOfRange(f"symbol {r} outside 1..{w.k}")
        mass *= fams[i % 2][r - 1]
    return mass


def measure_dimension(k: int, p_minus: float, rho: float) -> float:
    """Hausdorff dimension of the stationary measure of the (k:1) system."""
    _check_rho(rho)
    eta, regime = _regime(rho, k, 1)
    if regime != "disjoint":
        raise InvalidRegime(f"rho={rho} is not below eta={eta}")
    w = weights(k, p_minus)
    p_plus = 1 - p_minus
    em, ep = w.eta_minus, w.eta_plus
    num = den = 0.0
    for r in range(1, k + 1):
        a = p_plus / p_minus * em**r
        b = p_minus / p_plus * ep**r
        num += r * (a * math.log(em) + b * math.log(ep))
        den += r * (a + b)
    return num / (den * math.log(rho))


# ---------------------------------------------------------------- pressure (general l)

def _t0(rho, l):
    """Left end of the domain of the pressure: rho**t0 solves u + ... + u**(l-1) = 1."""
    if l <= 2:
        return 0.0
    u = bisect(lambda u: sum(u**i for i in range(1, l)) - 1, 0.0, 1.0)
    return math.log(u) / math.log(rho)


def pressure(rho: float, k: int, l: int, t: float) -> float:
    """log of sum over induced IFS symbols of rho**(t * exponent)."""
    _check_rho(rho)
    _check_kl(k, l)
    t0 = _t0(rho, l)
    if t <= t0:
        raise OutsideDomain(f"pressure is infinite for t <= {t0}")
    u = rho**t
    heads = sum(u**r for r in range(l, k + 1))
    if l == 1:
        return math.log(heads)
    # tails r1..rn over digits 1..l-1 sum to S/(1-S) with S = u + ... + u**(l-1)
    s_tail = sum(u**i for i in range(1, l))
    one_minus = -math.expm1(t * math.log(rho)) if l == 2 else 1 - s_tail
    if one_minus <= 0:
        raise OutsideDomain(f"pressure is infinite at t={t} (rounding at the left end)")
    inner = sum(u**r for r in range(l, k))
    return math.log(heads + inner * s_tail / one_minus)


def solve_pressure_zero(rho: float, k: int, l: int) -> float:
    _check_rho(rho)
    _check_kl(k, l)
    eta, regime = _regime(rho, k, l)
    if regime == "overlapping":
        raise InvalidRegime(f"rho={rho} exceeds eta={eta}")
    if regime == "boundary":
        return 1.0
    t0 = _t0(rho, l)
    lo = t0 + 1e-9 * max(1.0, t0)
    while pressure(rho, k, l, lo) <= 0:
        lo = t0 + 0.5 * (lo - t0)
    return bisect(lambda t: pressure(rho, k, l, t), lo, 1.0)


# ---------------------------------------------------------------- recurrence and (5:2)

def recurrence_residuals(masses, k: int, l: int) -> np.ndarray:
    """m_{j+k} - 2 m_j + m_{j-l} for j = l+1 .. J-k, masses given for j = 1..J."""
    m = np.asarray(masses, dtype=float)
    if len(m) < k + l + 2:
        raise InsufficientData(f"need at least {k + l + 2} masses, got {len(m)}")
    js = np.arange(l + 1, len(m) - k + 1)
    return m[js + k - 1] - 2 * m[js - 1] + m[js - l - 1]


def _polymul(p, q):
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def res_full_analysis() -> dict:
    """The (5:2) boundary system: rho* with rho*x_- = 1/2 and the characteristic roots."""
    rho = solve_eta(5, 2)
    x_minus = (1 - rho**5) / (1 - rho**7)
    char = [1, 0, 0, 0, 0, -2, 0, 1]          # x**7 - 2x**2 + 1
    factors = [[1, -1], [1, 1, 0, -1], [1, 0, 1, 1]]
    product = factors[0]
    for f in factors[1:]:
        product = _polymul(product, f)
    alpha = bisect(lambda x: x**3 + x**2 - 1, 0.0, 1.0)
    beta = bisect(lambda x: x**3 + x + 1, -1.0, 0.0)
    roots = np.roots(char)
    others = [r for r in roots if abs(r - 1) > 1e-8 and abs(r - alpha) > 1e-8
              and abs(r - beta) > 1e-8]
    return {
        "rho_star": rho,
        "rho_x_minus": rho * x_minus,
        "factorization_exact": product == char,
        "alpha": alpha,
        "beta": beta,
        "max_other_root_modulus": float(max(abs(r) for r in others)),
        "min_other_root_modulus": float(min(abs(r) for r in others)),
    }


# ---------------------------------------------------------------- interval structure

@dataclass(frozen=True)
class IntervalCode:
    j: int
    suffix: tuple = ()
    cylinder: tuple = ()

    def render(self) -> str:
        cyl = ",".join(".".join(map(str, s)) if isinstance(s, tuple) else str(s)
                       for s in self.cylinder)
        return f"j={self.j};s={','.join(map(str, self.suffix))};c={cyl}"

    @classmethod
    def parse(cls, text: str) -> "IntervalCode":
        parts = dict(p.split("=", 1) for p in text.split(";"))
        suffix = tuple(int(v) for v in parts["s"].split(",") if v)
        cyl = []
        for s in (v for v in parts["c"].split(",") if v):
            bits = tuple(int(b) for b in s.split("."))
            cyl.append(bits[0] if len(bits) == 1 else bits)
        return cls(int(parts["j"]), suffix, tuple(cyl))


@dataclass(frozen=True)
class AddressedInterval:
    code: IntervalCode
    lo: float
    hi: float
    family: str = "I"

    @property
    def length(self) -> float:
        return self.hi - self.lo

    def label(self) -> str:
        return self.code.render() if self.family == "I" else "J:" + self.code.render()


class Affine:
    """x -> scale * x + shift."""

    __slots__ = ("scale", "shift")

    def __init__(self, scale=1.0, shift=0.0):
        self.scale = scale
        self.shift = shift

    def __call__(self, x):
        return self.scale * x + self.shift

    def then(self, inner: "Affine") -> "Affine":
        """self o inner."""
        return Affine(self.scale * inner.scale, self.scale * inner.shift + self.shift)

    def image(self, lo, hi):
        a, b = self(lo), self(hi)
        return (a, b) if a <= b else (b, a)


class ResonantStructure:
    """Geometry of the symmetric (k:l) system with contraction ratio rho."""

    def __init__(self, rho: float, k: int, l: int):
        _check_rho(rho)
        _check_kl(k, l)
        self.rho, self.k, self.l = float(rho), int(k), int(l)
        self.eta, self.regime = _regime(self.rho, self.k, self.l)
        r = self.rho
        d = 1 - r ** (k + l)
        self.x_minus = (1 - r**k) / d
        self.x_plus = 1 - self.x_minus
        self.fm_xm = (r**l - r ** (k + l)) / d
        self.fp_xp = 1 - self.fm_xm
        self.I = ((r - r ** (1 + l)) / d, (r - r ** (k + 1)) / d)
        self.J = (r * (1 - r * self.x_minus), r * self.x_minus)

    @property
    def symmetric_system(self):
        from .core import from_resonance
        return from_resonance(self.rho, self.k, self.l)

    def phi(self, r: int) -> Affine:
        return Affine(-self.rho**r, self.rho)

    def symbol_map(self, symbol) -> Affine:
        if isinstance(symbol, tuple):
            m = Affine()
            for r in symbol:
                m = m.then(self.phi(r))
            return m
        return self.phi(symbol)

    @staticmethod
    def exponent(symbol) -> int:
        return sum(symbol) if isinstance(symbol, tuple) else symbol

    def level_map(self, j: int) -> Affine:
        """Carries I_{-1} onto I_j (and J_{-1} onto J_j)."""
        if j == 0:
            raise ParameterOutOfRange("level j must be non-zero")
        if j < 0:
            return Affine(self.rho ** (-j - 1), 0.0)
        return Affine(-self.rho ** (j - 1), 1.0)

    def code_map(self, code: IntervalCode) -> Affine:
        m = self.level_map(code.j)
        for s in code.suffix:
            m = m.then(self.phi(s))
        for sym in code.cylinder:
            m = m.then(self.symbol_map(sym))
        return m

    def interval(self, code: IntervalCode) -> AddressedInterval:
        lo, hi = self.code_map(code).image(*self.I)
        return AddressedInterval(code, lo, hi)

    def j_interval(self, j: int, suffix=()) -> AddressedInterval:
        m = self.level_map(j)
        for s in suffix:
            m = m.then(self.phi(s))
        lo, hi = m.image(*self.J)
        return AddressedInterval(IntervalCode(j, tuple(suffix)), lo, hi, family="J")

    def suffixes(self, depth: int):
        digits = range(1, self.l)
        for n in range(depth + 1):
            yield from itertools.product(digits, repeat=n)

    def symbols(self, exponent_cap: int):
        """Induced IFS alphabet with exponents up to the cap."""
        out = list(range(self.l, self.k + 1))
        if self.l == 1:
            return out

        def tails(budget):
            yield ()
            for d in range(1, self.l):
                if d <= budget:
                    for rest in tails(budget - d):
                        yield (d,) + rest

        for r in range(self.l, self.k):
            for t in tails(exponent_cap - r):
                if t:
                    out.append((r,) + t)
        return out

    def pressure_sum(self, t: float, exponent_cap: int) -> float:
        return sum(self.rho ** (t * self.exponent(s)) for s in self.symbols(exponent_cap))


def ifs_apply(rho: float, k: int, l: int, symbol, x: float) -> float:
    """phi_r(x) = rho - rho**r x, or the composite map of a tuple symbol.

    Bare digits below l act on J_{-1}; induced symbols act on I_{-1}.
    """
    st = ResonantStructure(rho, k, l)
    head = symbol[0] if isinstance(symbol, tuple) else symbol
    if not 1 <= head <= k:
        raise ParameterOutOfRange(f"symbol {symbol} outside 1..{k}")
    lo, hi = st.J if (not isinstance(symbol, tuple) and head < l) else st.I
    eps = 1e-12
    if not lo - eps <= x <= hi + eps:
        raise OutsideDomain(f"x={x} outside [{lo}, {hi}]")
    return st.symbol_map(symbol)(x)


def build_intervals(rho: float, k: int, l: int, j_range: int, suffix_depth: int = 0):
    """I_j for 0 < |j| <= j_range; for l > 1 also J_j and I_{j, j1..jn} up to suffix_depth."""
    st = ResonantStructure(rho, k, l)
    if st.regime == "overlapping":
        raise InvalidRegime(f"rho={rho} exceeds eta={st.eta}")
    out = []
    for j in [*range(-j_range, 0), *range(1, j_range + 1)]:
        if l > 1:
            out.append(st.j_interval(j))
        for suf in st.suffixes(suffix_depth if l > 1 else 0):
            out.append(st.interval(IntervalCode(j, suf)))
    return sorted(out, key=lambda a: (a.lo, a.family != "J"))


@dataclass
class CantorApprox:
    rho: float
    k: int
    l: int
    depth: int
    intervals: list
    j_range: int
    tail_bound: float = 0.0
    meta: dict = field(default_factory=dict)

    def total_length(self) -> float:
        return float(sum(a.length for a in self.intervals))

    def arrays(self):
        lo = np.array([a.lo for a in self.intervals])
        hi = np.array([a.hi for a in self.intervals])
        order = np.argsort(lo)
        return lo[order], hi[order]

    def contains(self, x, inflate: float = 0.0) -> np.ndarray:
        lo, hi = self.arrays()
        x = np.asarray(x, dtype=float)
        idx = np.searchsorted(lo - inflate, x, side="right") - 1
        ok = idx >= 0
        run_hi = np.maximum.accumulate(hi + inflate)
        return ok & (x <= run_hi[np.clip(idx, 0, None)])


def _default_cap(st: ResonantStructure, depth: int) -> int:
    if st.l == 1:
        return st.k
    cap = max(depth, st.k)
    while st.rho**cap > 1e-13 and len(st.symbols(cap + 1)) < 4000:
        cap += 1
    return cap


def cantor_approx(rho: float, k: int, l: int, depth: int, j_range: int,
                  suffix_depth: int = 0, exponent_cap: int | None = None) -> CantorApprox:
    """Moran cover of the support at scale rho**depth.

    Each emitted interval is a cylinder I_{j, suffix; s1..sm} whose symbol
    exponents sum to at least depth while the parent's sum is below it, so
    each length is at most rho**depth and depth d+1 refines depth d. Induced
    symbols with exponent above exponent_cap are dropped; `tail_bound` is
    the relative length they would have carried.
    """
    if depth < 0:
        raise InsufficientDepth("depth must be non-negative")
    st = ResonantStructure(rho, k, l)
    if st.regime == "overlapping":
        raise InvalidRegime(f"rho={rho} exceeds eta={st.eta}")
    cap = exponent_cap if exponent_cap is not None else _default_cap(st, depth)
    alphabet = [(s, st.symbol_map(s), st.exponent(s)) for s in st.symbols(cap)]

    cells = []

    def grow(prefix, m, e):
        if e >= depth:
            cells.append((prefix, m))
            return
        for s, sm, se in alphabet:
            grow(prefix + (s,), m.then(sm), e + se)

    grow((), Affine(), 0)
    out = []
    for j in [*range(-j_range, 0), *range(1, j_range + 1)]:
        for suf in st.suffixes(suffix_depth if l > 1 else 0):
            base = st.code_map(IntervalCode(j, suf))
            for prefix, m in cells:
                lo, hi = base.then(m).image(*st.I)
                out.append(AddressedInterval(IntervalCode(j, suf, prefix), lo, hi))
    out.sort(key=lambda a: a.lo)
    tail = 0.0
    if l > 1:
        total = math.exp(pressure(st.rho, k, l, 1.0)) if st.regime == "disjoint" else 1.0
        tail = max(0.0, total - st.pressure_sum(1.0, cap))
    return CantorApprox(st.rho, k, l, depth, out, j_range, tail, {"exponent_cap": cap})


def _cover_count(lo, hi, eps):
    """Fewest closed segments of length eps covering the union of [lo_i, hi_i] (greedy, optimal in 1D)."""
    count = 0
    reach = -math.inf
    for a, b in zip(lo, hi):
        if b <= reach:
            continue
        start = a if a > reach else reach
        n = math.ceil((b - start) / eps - 1e-9)
        n = max(n, 1)
        count += n
        reach = start + n * eps
    return count


def box_dimension_estimate(approx: CantorApprox, j: int = -1) -> float:
    """Regression slope of log N(eps) against -log eps on the copy of the support inside I_j.

    N(eps) is the minimal number of eps-segments covering the approximation,
    for eps = |I_j| rho**n over the finer half n = depth//2 .. depth, where
    the coarse-scale transient has died out.
    """
    mine = [a for a in approx.intervals if a.code.j == j and not a.code.suffix]
    if len(mine) <= 1 and approx.depth == 0:
        return 0.0
    if approx.depth < 2 or len(mine) <= 1:
        raise InsufficientDepth("need depth >= 2 for a regression")
    mine.sort(key=lambda a: a.lo)
    lo = [a.lo for a in mine]
    hi = [a.hi for a in mine]
    width = max(hi) - min(lo)
    ns = np.arange(max(1, approx.depth // 2), approx.depth + 1)
    eps = width * approx.rho**ns
    counts = np.array([_cover_count(lo, hi, e) for e in eps], dtype=float)
    slope, _ = np.polyfit(-np.log(eps), np.log(counts), 1)
    return float(slope)


def exact_eta_check(k: int, l: int, eta: float) -> float:
    """Residual of the eta polynomial evaluated in exact rational arithmetic at the float eta."""
    x = Fraction(eta)
    return float(x ** (k + l) - 2 * x ** (k + 1) + 2 * x - 1)
