"""Batch front end: one JSON config in, one CSV or JSON artifact out."""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
import warnings
from dataclasses import dataclass, field

import numpy as np

from . import io as amio
from .conjugacy import verify_conjugacy
from .core import (classify_type, detect_resonance, from_resonance, lyapunov_exponents,
                   new_system)
from .dynamics import detect_jumps, omega_limit_sample, orbit, sample_word
from .errors import AmdynError, ConfigError, IoError, NonconvergenceWarning
from .measure import empirical_stationary, iterate_to_stationary, lebesgue_check
from .resonant import (box_dimension_estimate, build_intervals, cantor_approx,
                       measure_dimension, pressure, res_full_analysis, solve_eta,
                       solve_pressure_zero, support_dimension, symbolic_weights)

log = logging.getLogger("amdyn")

COMMANDS = {
    "classify": "any AM-system; reports Disjoint/Border/Overlapping and the breakpoints",
    "lyapunov": "any AM-system with p_minus in (0,1)",
    "resonance": "any AM-system; continued-fraction search at both endpoints",
    "simulate": "any AM-system; x0 in [0,1], length >= 0, p_minus in (0,1);"
                " with n_orbits, omega-limit sampling of a disjoint-type system",
    "jumps": "disjoint-type AM-system",
    "stationary": "AM-system with p_minus in (0,1); method transfer|cesaro|orbit",
    "lebesgue": "AM-system with positive Lyapunov exponents",
    "support": "resonant (rho,k,l) with rho <= eta; action build|approx|boxdim",
    "weights": "(k:1) resonance, p_minus inside the positivity window",
    "dimension": "resonant (rho,k,l) with rho <= eta; dim_mu needs l = 1",
    "pressure": "resonant (rho,k,l); t above the left end of the pressure domain",
    "conjugacy": "two symmetric systems with the same (k:l) and rho < eta",
    "resfull": "no system; reproduces the (5:2) boundary analysis",
}

SYSTEM_KEYS = {"a_minus", "b_minus", "a_plus", "b_plus", "rho", "k", "l", "p_minus"}
TOP_KEYS = {"system", "system_g", "command", "method", "action", "iterations", "samples",
            "burn_in", "bins", "depth", "j_range", "suffix_depth", "tol", "seed", "x0", "y0",
            "length", "n_orbits", "min_jumps", "tail", "max_denominator", "endpoint", "t",
            "output", "format", "threads"}


@dataclass
class RunConfig:
    command: str
    system: dict | None = None
    system_g: dict | None = None
    options: dict = field(default_factory=dict)
    seed: int = 0
    tol: float = 1e-10
    output: str | None = None
    format: str | None = None

    def opt(self, name, default=None):
        return self.options.get(name, default)


def _check_system(d, name):
    if not isinstance(d, dict):
        raise ConfigError(name, "must be an object")
    unknown = set(d) - SYSTEM_KEYS
    if unknown:
        raise ConfigError(f"{name}.{sorted(unknown)[0]}", "unknown key")
    slopes = {"a_minus", "b_minus", "a_plus", "b_plus"}
    if "rho" in d:
        for key in ("k", "l"):
            if key not in d:
                raise ConfigError(f"{name}.{key}", "required with rho")
        rho = d["rho"]
        try:
            if rho == "eta":
                rho = solve_eta(d["k"], d["l"])
            from_resonance(rho, d["k"], d["l"])
        except AmdynError as exc:
            raise ConfigError(f"{name}.rho", str(exc)) from exc
    elif slopes <= set(d):
        try:
            new_system(*(d[s] for s in ("a_minus", "b_minus", "a_plus", "b_plus")))
        except AmdynError as exc:
            raise ConfigError(name, str(exc)) from exc
    else:
        raise ConfigError(name, "give either rho/k/l or all four slopes")
    p = d.get("p_minus")
    if p is not None and not (isinstance(p, (int, float)) and 0 < p < 1):
        raise ConfigError(f"{name}.p_minus", "must lie in (0, 1)")


def parse_config(text: str) -> RunConfig:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"line {exc.lineno}", exc.msg) from exc
    if not isinstance(data, dict):
        raise ConfigError("<root>", "config must be a JSON object")
    unknown = set(data) - TOP_KEYS
    if unknown:
        raise ConfigError(sorted(unknown)[0], "unknown key")
    if "command" not in data:
        raise ConfigError("command", "missing")
    cmd = data["command"]
    if cmd not in COMMANDS:
        raise ConfigError("command", f"unknown command {cmd!r}")
    for name in ("system", "system_g"):
        if name in data:
            _check_system(data[name], name)
    if cmd not in ("resfull", "weights") and "system" not in data:
        raise ConfigError("system", f"required by {cmd}")
    if cmd == "conjugacy" and "system_g" not in data:
        raise ConfigError("system_g", "required by conjugacy")
    fmt = data.get("format")
    if fmt not in (None, "csv", "json"):
        raise ConfigError("format", "must be csv or json")
    seed = data.get("seed", 0)
    if not isinstance(seed, int) or seed < 0:
        raise ConfigError("seed", "must be a non-negative integer")
    tol = data.get("tol", 1e-10)
    if not isinstance(tol, (int, float)) or tol <= 0:
        raise ConfigError("tol", "must be positive")
    opts = {k: v for k, v in data.items()
            if k not in ("command", "system", "system_g", "seed", "tol", "output", "format")}
    return RunConfig(cmd, data.get("system"), data.get("system_g"), opts, seed, float(tol),
                     data.get("output"), fmt)


def _system(d):
    if "rho" in d:
        rho = solve_eta(d["k"], d["l"]) if d["rho"] == "eta" else d["rho"]
        return from_resonance(rho, d["k"], d["l"])
    return new_system(d["a_minus"], d["b_minus"], d["a_plus"], d["b_plus"])


def _resonant(cfg):
    d = cfg.system
    if "rho" not in d:
        raise ConfigError("system.rho", f"{cfg.command} needs a resonant rho/k/l descriptor")
    rho = solve_eta(d["k"], d["l"]) if d["rho"] == "eta" else d["rho"]
    return rho, d["k"], d["l"]


def _p(cfg, d=None):
    d = d if d is not None else cfg.system
    p = (d or {}).get("p_minus")
    return 0.5 if p is None else p


def _header(cfg):
    h = dict(cfg.system or {})
    h["seed"] = cfg.seed
    return h


class Result:
    def __init__(self, record=None, csv=None, status=0, warning=None):
        self.record = record
        self.csv = csv
        self.status = status
        self.warning = warning

    def render(self, fmt):
        if fmt == "csv":
            if self.csv is None:
                rows = [(k, v) for k, v in self.record.items() if np.isscalar(v)]
                return amio.csv_text(["key", "value"], rows)
            return self.csv
        return amio.dumps(self.record)


def _run_classify(cfg):
    s = _system(cfg.system)
    return Result({"type": classify_type(s).value, "x_minus": s.x_minus, "x_plus": s.x_plus,
                   "fm_xm": s.fm_xm, "fp_xp": s.fp_xp})


def _run_lyapunov(cfg):
    l0, l1 = lyapunov_exponents(_system(cfg.system), _p(cfg))
    return Result({"lambda0": l0, "lambda1": l1})


def _run_resonance(cfg):
    s = _system(cfg.system)
    md = cfg.opt("max_denominator", 1000)
    r0 = detect_resonance(s, 0, md, cfg.tol)
    r1 = detect_resonance(s, 1, md, cfg.tol)
    return Result({"endpoint0": list(r0) if r0 else None, "endpoint1": list(r1) if r1 else None})


def _run_simulate(cfg):
    s = _system(cfg.system)
    if "n_orbits" in cfg.options:
        pts = omega_limit_sample(s, cfg.opt("x0", 0.5), cfg.opt("n_orbits"), cfg.opt("length", 1000),
                                 cfg.opt("min_jumps", 1), cfg.opt("tail", 10), _p(cfg), cfg.seed,
                                 cfg.opt("threads", 1))
        return Result({"seed": cfg.seed, "count": len(pts), "points": pts.tolist()},
                      amio.orbit_csv(pts, _header(cfg)))
    word = sample_word(cfg.seed, cfg.opt("length", 1000), _p(cfg))
    o = orbit(s, cfg.opt("x0", 0.5), word)
    return Result({"x0": o.x0, "seed": cfg.seed, "points": o.points.tolist()},
                  amio.orbit_csv(o.points, _header(cfg)))


def _run_jumps(cfg):
    s = _system(cfg.system)
    word = sample_word(cfg.seed, cfg.opt("length", 1000), _p(cfg))
    times = detect_jumps(s, orbit(s, cfg.opt("x0", 0.5), word))
    return Result({"count": len(times), "times": times},
                  amio.csv_text(["time"], ([t] for t in times), _header(cfg)))


def _run_stationary(cfg):
    s = _system(cfg.system)
    method = cfg.opt("method", "transfer")
    if method in ("transfer", "cesaro"):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", NonconvergenceWarning)
            est = iterate_to_stationary(s, _p(cfg), max_iter=cfg.opt("iterations", 200),
                                        tol=cfg.tol,
                                        mode="direct" if method == "transfer" else "cesaro")
        xs = est.density.breakpoints
        fs = est.density.cdf_knots()
        rec = {"method": method, "converged": est.converged, "iterations": est.iterations,
               "distance": est.distance}
        status = 0 if est.converged else 3
    elif method == "orbit":
        em = empirical_stationary(s, _p(cfg), cfg.opt("burn_in", 1000),
                                  cfg.opt("samples", 100_000), cfg.opt("bins", 100), cfg.seed,
                                  cfg.opt("x0", 0.5), keep_samples=False)
        xs = em.edges
        fs = np.concatenate(([0.0], np.cumsum(em.masses)))
        rec = {"method": method, "samples": cfg.opt("samples", 100_000), "bins": em.bins}
        status = 0
    else:
        raise ConfigError("method", "must be transfer, cesaro or orbit")
    rec.update({"x": xs.tolist(), "F": fs.tolist()})
    warning = None if status == 0 else {
        "error": "Nonconvergence", "message": f"distance {est.distance:.3g} above tol",
        "distance": est.distance}
    return Result(rec, amio.csv_text(["x", "F"], zip(xs, fs), _header(cfg)), status, warning)


def _run_lebesgue(cfg):
    return Result(lebesgue_check(_system(cfg.system), _p(cfg), cfg.tol).to_dict())


def _run_support(cfg):
    rho, k, l = _resonant(cfg)
    action = cfg.opt("action", "build")
    j_range = cfg.opt("j_range", 3)
    if action == "build":
        ivs = build_intervals(rho, k, l, j_range, cfg.opt("suffix_depth", 0))
        return Result({"intervals": [{"code": a.label(), "lo": a.lo, "hi": a.hi} for a in ivs]},
                      amio.intervals_csv(ivs))
    if action == "approx":
        ca = cantor_approx(rho, k, l, cfg.opt("depth", 4), j_range, cfg.opt("suffix_depth", 0))
        return Result({"depth": ca.depth, "tail_bound": ca.tail_bound,
                       "total_length": ca.total_length(),
                       "intervals": [{"code": a.label(), "lo": a.lo, "hi": a.hi}
                                     for a in ca.intervals]},
                      amio.intervals_csv(ca.intervals))
    if action == "boxdim":
        ca = cantor_approx(rho, k, l, cfg.opt("depth", 10), 1)
        return Result({"box_dimension": box_dimension_estimate(ca),
                       "support_dimension": support_dimension(rho, k, l)})
    raise ConfigError("action", "must be build, approx or boxdim")


def _run_weights(cfg):
    d = cfg.system or {}
    k = d.get("k", 2)
    return Result(symbolic_weights(k, _p(cfg)).to_dict())


def _run_dimension(cfg):
    rho, k, l = _resonant(cfg)
    eta = solve_eta(k, l)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        dsupp = support_dimension(rho, k, l)
    regime = "boundary" if dsupp == 1.0 else "disjoint"
    dmu = measure_dimension(k, _p(cfg), rho) if l == 1 and regime == "disjoint" else None
    return Result({"eta": eta, "dim_supp": dsupp, "dim_mu": dmu, "regime": regime})


def _run_pressure(cfg):
    rho, k, l = _resonant(cfg)
    t = cfg.opt("t", 1.0)
    return Result({"t": t, "pressure": pressure(rho, k, l, t),
                   "zero": solve_pressure_zero(rho, k, l)})


def _run_conjugacy(cfg):
    f, g = _system(cfg.system), _system(cfg.system_g)
    tol = cfg.options.get("tol", 1e-8) if "tol" in cfg.options else max(cfg.tol, 1e-8)
    return Result(verify_conjugacy(f, g, cfg.opt("samples", 1000), tol, cfg.seed))


def _run_resfull(cfg):
    return Result(res_full_analysis())


RUNNERS = {name: globals()[f"_run_{name}"] for name in COMMANDS}


def run(cfg: RunConfig) -> Result:
    log.info("running %s", cfg.command)
    return RUNNERS[cfg.command](cfg)


def export(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
        return
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise IoError(f"cannot write {path}: {exc}") from exc


def _error_json(exc) -> str:
    d = {"error": type(exc).__name__, "message": str(exc)}
    if isinstance(exc, ConfigError):
        d["field"] = exc.field
    if getattr(exc, "distance", None) is not None:
        d["distance"] = exc.distance
    return json.dumps(d)


def build_parser() -> argparse.ArgumentParser:
    lines = [f"  {name:<11} {pre}" for name, pre in COMMANDS.items()]
    parser = argparse.ArgumentParser(
        prog="amdyn",
        description="Random AM interval systems: orbits, stationary measures, resonant supports.",
        epilog="commands (set \"command\" in the config):\n" + "\n".join(lines)
        + "\n\nexit codes: 0 success, 2 precondition failure, 3 nonconvergence."
          " Set AMDYN_LOG=INFO|DEBUG for logging.",
        formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--config", required=True, help="JSON run configuration")
    parser.add_argument("--output", help="output file (default: stdout)")
    parser.add_argument("--format", choices=("csv", "json"), help="output format")
    parser.add_argument("--seed", type=int, help="override the config seed")
    parser.add_argument("--threads", type=int, help="worker count bound (omega-limit sampling)")
    return parser


def main(argv=None) -> int:
    logging.basicConfig(level=os.environ.get("AMDYN_LOG", "WARNING").upper(),
                        format="%(levelname)s %(name)s: %(message)s")
    args = build_parser().parse_args(argv)
    try:
        try:
            with open(args.config, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ConfigError("--config", str(exc)) from exc
        cfg = parse_config(text)
        if args.seed is not None:
            cfg.seed = args.seed
        if args.threads is not None:
            cfg.options["threads"] = args.threads
        fmt = args.format or cfg.format or "json"
        result = run(cfg)
        export(result.render(fmt), args.output or cfg.output)
    except AmdynError as exc:
        sys.stderr.write(_error_json(exc) + "\n")
        return exc.exit_code
    if result.warning:
        sys.stderr.write(json.dumps(result.warning) + "\n")
    return result.status


if __name__ == "__main__":
    sys.exit(main())
