"""Topological conjugacy between two symmetric (k:l)-resonant systems with different rho.

Points are located by descending the nested interval structure: a J-frame
splits into phi_1(J), ..., phi_{l-1}(J) and I, an I-frame splits into
phi_l(J), ..., phi_{k-1}(J) and phi_k(I), with gaps in between. Two systems
with the same (k, l) share this combinatorics, so a gap of one system has a
twin in the other. The conjugacy h is affine from each gap onto its twin and
is pinned down on the support by nested brackets.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import AmSystem, apply, detect_resonance
from .errors import (DomainError, InvalidRegime, MismatchedResonance, NotResonant,
                     ParameterOutOfRange, PrecisionWarning)
from .resonant import Affine, IntervalCode, ResonantStructure
from .rng import SplitMix64

MAX_DEPTH = 64


@dataclass(frozen=True)
class PointCode:
    """Where a point of [0, 1/2] sits: in a gap (with its relative offset) or on the support."""

    kind: str               # "InGap" or "InLambda"
    j: int
    path: tuple             # child indices chosen below the top-level frame
    gap: int | None         # index of the gap among the children of the last frame
    offset: float | None
    bracket: tuple
    code: IntervalCode | None = None

    @property
    def gap_id(self):
        return (self.j, self.path, self.gap) if self.kind == "InGap" else None


class _Frames:
    """Child layout of J- and I-frames for one resonant structure."""

    def __init__(self, st: ResonantStructure):
        self.st = st
        k, l = st.k, st.l
        self.frame = {"I": st.I, "J": st.J if l > 1 else st.I}
        ident = Affine()
        self.layout = {"I": [(("r", r), st.phi(r), "J" if l > 1 else "I") for r in range(l, k)]
                       + [(("r", k), st.phi(k), "I")]}
        if l > 1:
            self.layout["J"] = [(("s", s), st.phi(s), "J") for s in range(1, l)] + [(("end",), ident, "I")]
        self.top = "J" if l > 1 else "I"

    def children(self, m: Affine, kind: str):
        out = []
        for tag, phi, sub in self.layout[kind]:
            cm = m.then(phi)
            lo, hi = cm.image(*self.frame[sub])
            out.append((lo, hi, tag, cm, sub))
        out.sort(key=lambda c: c[0])
        return out

    def top_level(self, x: float):
        """(j, None) if x lies in the top frame of level j < 0, or (j, (lo, hi)) for the gap U_j."""
        rho = self.st.rho
        a, b = self.frame[self.top]
        if x > b:
            return 0, (b, 1 - b)
        n = max(0, int(math.floor(math.log(x / b) / math.log(rho))))
        while n > 0 and x > rho**n * b:
            n -= 1
        while x <= rho ** (n + 1) * b:
            n += 1
        if x >= rho**n * a:
            return -n - 1, None
        return -n - 1, (rho ** (n + 1) * b, rho**n * a)


def _pick(children, x):
    """Index of the child containing x, or ('gap', i) for the gap after child i."""
    for i, (lo, hi, *_rest) in enumerate(children):
        if x < lo:
            if i == 0:
                return 0
            return ("InGap", i - 1)
        if x <= hi:
            return i
    return len(children) - 1


def _code_from(j, tags):
    suffix, cylinder = [], []
    open_symbol = None
    seen_end = False
    for tag in tags:
        if tag[0] == "s":
            if not seen_end and not cylinder and open_symbol is None:
                suffix.append(tag[1])
            elif open_symbol is not None:
                open_symbol.append(tag[1])
        elif tag[0] == "end":
            seen_end = True
            if open_symbol is not None:
                cylinder.append(tuple(open_symbol) if len(open_symbol) > 1 else open_symbol[0])
                open_symbol = None
        else:
            seen_end = True
            if open_symbol is not None:
                cylinder.append(tuple(open_symbol) if len(open_symbol) > 1 else open_symbol[0])
            open_symbol = [tag[1]]
    if open_symbol is not None:
        cylinder.append(tuple(open_symbol) if len(open_symbol) > 1 else open_symbol[0])
    return IntervalCode(j, tuple(suffix), tuple(cylinder))


def _mirror(pc: PointCode) -> PointCode:
    lo, hi = pc.bracket
    code = pc.code
    if code is not None:
        code = IntervalCode(-code.j, code.suffix, code.cylinder)
    return PointCode(pc.kind, -pc.j, pc.path, pc.gap,
                     None if pc.offset is None else 1 - pc.offset, (1 - hi, 1 - lo), code)


def _locate_left(frames: _Frames, x: float, tol: float, max_depth: int) -> PointCode:
    j, gap = frames.top_level(x)
    if gap is not None:
        lo, hi = gap
        return PointCode("InGap", j, (), None, (x - lo) / (hi - lo), gap)
    m = frames.st.level_map(j)
    kind = frames.top
    lo, hi = m.image(*frames.frame[kind])
    path, tags = [], []
    for _ in range(max_depth):
        if hi - lo < tol:
            break
        kids = frames.children(m, kind)
        pick = _pick(kids, x)
        if isinstance(pick, tuple):
            i = pick[1]
            glo, ghi = kids[i][1], kids[i + 1][0]
            return PointCode("InGap", j, tuple(path), i, (x - glo) / (ghi - glo), (glo, ghi),
                             _code_from(j, tags))
        lo, hi, tag, m, kind = kids[pick]
        path.append(pick)
        tags.append(tag)
    else:
        warnings.warn(PrecisionWarning(f"depth cap {max_depth} reached locating {x}"))
    off = min(1.0, max(0.0, (x - lo) / (hi - lo))) if hi > lo else 0.5
    return PointCode("InLambda", j, tuple(path), None, off, (lo, hi), _code_from(j, tags))


def _structure(system: AmSystem) -> ResonantStructure:
    if not system.is_symmetric:
        raise ParameterOutOfRange("conjugacy needs symmetric systems")
    kl = detect_resonance(system, 0)
    if kl is None:
        raise NotResonant("system is not resonant at 0")
    k, l = kl
    if l < 1 or k <= l:
        raise NotResonant(f"resonance ({k}:{l}) is not of the form k > l")
    rho = float(system.a_minus) ** (1.0 / l)
    st = ResonantStructure(rho, k, l)
    if st.regime != "disjoint":
        raise InvalidRegime(f"rho={rho} is not below eta={st.eta}")
    return st


def locate(system: AmSystem, x: float, tol: float = 1e-12, max_depth: int = MAX_DEPTH) -> PointCode:
    if not 0 < x < 1:
        raise DomainError("x must lie in the open unit interval")
    frames = _Frames(_structure(system))
    if x <= 0.5:
        return _locate_left(frames, x, tol, max_depth)
    return _mirror(_locate_left(frames, 1 - x, tol, max_depth))


class Conjugacy:
    """h with g o h = h o f for two symmetric systems of the same resonance type."""

    def __init__(self, f: AmSystem, g: AmSystem, tol: float = 1e-10, max_depth: int = MAX_DEPTH):
        sf, sg = _structure(f), _structure(g)
        if (sf.k, sf.l) != (sg.k, sg.l):
            raise MismatchedResonance(f"({sf.k}:{sf.l}) versus ({sg.k}:{sg.l})")
        self.f, self.g = f, g
        self.ff, self.fg = _Frames(sf), _Frames(sg)
        self.tol = tol
        self.max_depth = max_depth

    def _left(self, x: float) -> float:
        ff, fg = self.ff, self.fg
        j, gap = ff.top_level(x)
        if gap is not None:
            off = (x - gap[0]) / (gap[1] - gap[0])
            if j == 0:
                b = fg.frame[fg.top][1]
                return b + off * (1 - 2 * b)
            rho = fg.st.rho
            n = -j - 1
            a, b = fg.frame[fg.top]
            glo, ghi = rho ** (n + 1) * b, rho**n * a
            return glo + off * (ghi - glo)
        mf = ff.st.level_map(j)
        mg = fg.st.level_map(j)
        kind = ff.top
        flo, fhi = mf.image(*ff.frame[kind])
        glo, ghi = mg.image(*fg.frame[kind])
        for _ in range(self.max_depth):
            if ghi - glo < self.tol:
                break
            kf = ff.children(mf, kind)
            kg = fg.children(mg, kind)
            pick = _pick(kf, x)
            if isinstance(pick, tuple):
                i = pick[1]
                a, b = kf[i][1], kf[i + 1][0]
                c, d = kg[i][1], kg[i + 1][0]
                return c + (x - a) / (b - a) * (d - c)
            flo, fhi, _, mf, kind = kf[pick]
            glo, ghi, _, mg, _ = kg[pick]
        else:
            warnings.warn(PrecisionWarning(f"depth cap {self.max_depth} reached at x={x}"))
            return 0.5 * (glo + ghi)
        if fhi <= flo:
            return 0.5 * (glo + ghi)
        t = min(1.0, max(0.0, (x - flo) / (fhi - flo)))
        return glo + t * (ghi - glo)

    def __call__(self, x: float) -> float:
        if not 0 <= x <= 1:
            raise DomainError(f"point {x} outside [0, 1]")
        if x == 0 or x == 1:
            return float(x)
        if x <= 0.5:
            return self._left(x)
        return 1.0 - self._left(1.0 - x)


def evaluate_h(f: AmSystem, g: AmSystem, x: float, tol: float = 1e-10) -> float:
    return Conjugacy(f, g, tol)(x)


def verify_conjugacy(f: AmSystem, g: AmSystem, samples: int = 1000, tol: float = 1e-8,
                     seed: int = 0) -> dict:
    """Largest |h(f_s x) - g_s(h x)| over random x and both signs, plus a monotonicity check."""
    h = Conjugacy(f, g, tol)
    xs = np.sort(SplitMix64(seed).uniform(samples))
    hx = np.array([h(float(x)) for x in xs])
    worst = 0.0
    for x, y in zip(xs, hx):
        for s in (-1, 1):
            worst = max(worst, abs(h(apply(f, s, float(x))) - apply(g, s, float(y))))
    return {"max_residual": worst, "monotone": bool(np.all(np.diff(hx) >= 0)),
            "samples": samples, "tol": tol}
