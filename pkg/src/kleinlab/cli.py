"""Command-line front end: single evaluations and parameter sweeps to CSV.

Exit codes: 0 success (per-row domain errors included), 2 usage or config
error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import math
import os
import sys
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import analytic, coulomb, spectrum, supercritical, vacuum
from .core import Barrier, DomainError, NumericalError, Step, UnitSystem

JOBS_ENV = "KLEINLAB_JOBS"


class ConfigError(ValueError):
    """Bad sweep specification or config file (exit code 2)."""


# ---------------------------------------------------------------------------
# Targets
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Param:
    name: str
    unit: Optional[str] = "energy"
    type: type = float
    default: object = None


@dataclass(frozen=True)
class Target:
    params: tuple
    outputs: tuple  # (name, unit) pairs
    fn: Callable
    multi: bool = False
    default_param: Optional[str] = None

    @property
    def param_names(self) -> tuple:
        return tuple(p.name for p in self.params)

    @property
    def columns(self) -> list:
        cols = [_header(p.name, p.unit) for p in self.params]
        cols += [_header(n, u) for n, u in self.outputs]
        return cols + ["status"]


def _header(name, unit):
    return f"{name}[{unit}]" if unit else name


def _step(p, units, tol):
    r = analytic.step_coefficients(p["E"], Step(p["V"]), units)
    return [dict(kappa=r.kappa, R=r.R, T=r.T, unitarity_residual=r.unitarity_residual,
                 regime=r.regime.value)]


def _barrier(p, units, tol):
    r = analytic.barrier_coefficients(p["E"], Barrier(p["V"], p["a"]), units)
    return [dict(kappa=r.kappa, R=r.R, T=r.T, unitarity_residual=r.unitarity_residual,
                 regime=r.regime.value)]


def _averaged(p, units, tol):
    R_inf, T_inf = analytic.averaged_coefficients(p["E"], p["V"], units)
    return [dict(kappa=analytic.kinematic_kappa(p["E"], p["V"], units), R_inf=R_inf, T_inf=T_inf,
                 T_mean=analytic.mean_transmission(p["E"], p["V"], units))]


def _resonances(p, units, tol):
    return [dict(N=N, E_N=E_N, p_N=N * math.pi / (2 * p["a"]))
            for N, E_N in analytic.resonance_energies(Barrier(p["V"], p["a"]), units)]


def _well_spectrum(p, units, tol):
    states = spectrum.find_bound_states(p["V"], p["a"], units, tol)
    return [dict(level=s.level, parity=s.parity, branch=s.branch_index, E=s.E,
                 p=s.well_momentum, residual=s.residual, threshold=s.threshold or "none")
            for s in states]


def _ramp(p, units, tol):
    steps = p["steps"] or spectrum.suggested_steps(p["V_max"], p["a"], units)
    flow = spectrum.ramp_spectrum(p["V_max"], steps, p["a"], units, tol)
    rows, qp, qs = [], 0, 0
    for c in flow.crossings:
        if c.kind == "zero":
            qp += 1
        else:
            qs += 1
        rows.append(dict(kind=c.kind, level=c.level, parity=c.parity, depth=c.depth,
                         Q_p=qp, Q_S=qs, Q_0=-qp))
    return rows


def _delta_well(p, units, tol):
    lv = spectrum.delta_well_states(p["lam"], units)
    Q_p, Q_S = supercritical.delta_well_charges(p["lam"])
    return [dict(E_even=lv.E_even, E_odd=lv.E_odd, E_bound=lv.E_bound, parity=lv.parity,
                 branch=lv.branch, Q_p=Q_p, Q_S=Q_S, on_boundary=lv.on_boundary)]


def _counts(p, units, tol):
    V, a = p["V"], p["a"]
    qs_arg = supercritical.supercritical_argument(V, a, units)
    qp_arg = supercritical.positron_argument(V, a, units)
    lo, hi = supercritical.count_positrons(V, a, units)
    return [dict(Q_S=supercritical.count_supercritical(V, a, units), Q_p_lower=lo, Q_p_upper=hi,
                 Q_S_argument=qs_arg, Q_p_argument=qp_arg,
                 on_boundary=supercritical.int_part(qs_arg)[1] or supercritical.int_part(qp_arg)[1])]


def _emission_summary(spec):
    return dict(Q_S_exact=spec.Q_S_exact, Q_S_estimate=spec.Q_S_estimate, tau=spec.tau,
                tau_bar=spec.tau_bar, p_bar=spec.p_bar)


def _emission(p, units, tol):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", supercritical.RegimeWarning)
        spec = supercritical.emission_spectrum(p["Delta"], p["a"], units)
    return [_emission_summary(spec)]


def _emission_levels(p, units, tol):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", supercritical.RegimeWarning)
        spec = supercritical.emission_spectrum(p["Delta"], p["a"], units)
    summary = _emission_summary(spec)
    return [dict(N=N, p_N=p_N, E_N_abs=E_N, **summary) for N, p_N, E_N in spec.entries]


def _coulomb(p, units, tol):
    inp = coulomb.CoulombInput(p["Z"], p["alpha"], p["E"], p["p"] or 0.0, p["f"])
    rho_nr = coulomb.rho_nonrelativistic(inp) if p["p"] else float("nan")
    return [dict(z_alpha=inp.z_alpha, rho_nonrel=rho_nr, rho_rel=coulomb.rho_relativistic(inp),
                 r_c=coulomb.classical_turning_point(p["Z"], p["alpha"], p["E"]))]


def _vacuum_current(p, units, tol):
    geometry = p["geometry"]
    if geometry not in ("step", "barrier"):
        raise DomainError(f"geometry must be step or barrier, got {geometry!r}")
    main = -vacuum.klein_range_integral(geometry, p["V"], units, "adaptive", tol)
    check = -vacuum.klein_range_integral(geometry, p["V"], units, "gauss", tol)
    rel = abs(main - check) / abs(main) if main else 0.0
    return [dict(current=main, current_check=check, rel_diff=rel)]


def _critical(p, units, tol):
    return [dict(V_c=supercritical.critical_potential(p["N"], p["a"], units))]


_E, _V, _A = Param("E"), Param("V"), Param("a", "length")

TARGETS = {
    "step": Target((_E, _V), (("kappa", "1"), ("R", "1"), ("T", "1"),
                              ("unitarity_residual", "1"), ("regime", None)), _step,
                   default_param="E"),
    "barrier": Target((_E, _V, _A), (("kappa", "1"), ("R", "1"), ("T", "1"),
                                     ("unitarity_residual", "1"), ("regime", None)), _barrier,
                      default_param="E"),
    "averaged": Target((_E, _V), (("kappa", "1"), ("R_inf", "1"), ("T_inf", "1"),
                                  ("T_mean", "1")), _averaged, default_param="E"),
    "resonances": Target((_V, _A), (("N", "1"), ("E_N", "energy"), ("p_N", "energy")),
                         _resonances, multi=True),
    "well-spectrum": Target((_V, _A), (("level", "1"), ("parity", None), ("branch", "1"),
                                       ("E", "energy"), ("p", "energy"), ("residual", "1"),
                                       ("threshold", None)), _well_spectrum, multi=True),
    "ramp": Target((Param("V_max"), _A, Param("steps", "1", int, 0)),
                   (("kind", None), ("level", "1"), ("parity", None), ("depth", "energy"),
                    ("Q_p", "1"), ("Q_S", "1"), ("Q_0", "1")), _ramp, multi=True),
    "delta-well": Target((Param("lam", "1"),),
                         (("E_even", "energy"), ("E_odd", "energy"), ("E_bound", "energy"),
                          ("parity", None), ("branch", "1"), ("Q_p", "1"), ("Q_S", "1"),
                          ("on_boundary", None)), _delta_well, default_param="lam"),
    "counts": Target((_V, _A), (("Q_S", "1"), ("Q_p_lower", "1"), ("Q_p_upper", "1"),
                                ("Q_S_argument", "1"), ("Q_p_argument", "1"),
                                ("on_boundary", None)), _counts, default_param="V"),
    "emission": Target((Param("Delta"), _A),
                       (("Q_S_exact", "1"), ("Q_S_estimate", "1"), ("tau", "time"),
                        ("tau_bar", "time"), ("p_bar", "energy")), _emission,
                       default_param="Delta"),
    "emission-levels": Target((Param("Delta"), _A),
                              (("N", "1"), ("p_N", "energy"), ("E_N_abs", "energy"),
                               ("Q_S_exact", "1"), ("Q_S_estimate", "1"), ("tau", "time"),
                               ("tau_bar", "time"), ("p_bar", "energy")), _emission_levels,
                              multi=True),
    "coulomb": Target((Param("Z", "1"), Param("alpha", "1", float, coulomb.FINE_STRUCTURE),
                       Param("E", "energy", float, 1.0), Param("p", "energy", float, 0.0),
                       Param("f", "1", float, 1.0)),
                      (("z_alpha", "1"), ("rho_nonrel", "1"), ("rho_rel", "1"),
                       ("r_c", "length")), _coulomb, default_param="Z"),
    "vacuum-current": Target((_V, Param("geometry", None, str, "step")),
                             (("current", "energy"), ("current_check", "energy"),
                              ("rel_diff", "1")), _vacuum_current, default_param="V"),
    "critical": Target((Param("N", "1", int), _A), (("V_c", "energy"),), _critical,
                       default_param="a"),
}


# ---------------------------------------------------------------------------
# Row evaluation and formatting
# ---------------------------------------------------------------------------

def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return format(float(v), ".17g")
    return "" if v is None else str(v)


def evaluate(target_name: str, params: dict, mass: float = 1.0, tol: float = 1e-12) -> list:
    """Rows (lists of strings, in column order) for one parameter point."""
    target = TARGETS[target_name]
    units = UnitSystem(mass)
    inputs = [format_value(params[p.name]) for p in target.params]
    try:
        rows = target.fn(params, units, tol)
    except ValueError:  # DomainError and invalid geometry
        return [inputs + ["nan" if u else "" for _, u in target.outputs] + ["DOMAIN_ERR"]]
    return [inputs + [format_value(r.get(n)) for n, _ in target.outputs] + ["OK"] for r in rows]


def _evaluate_packed(args):
    return evaluate(*args)


def write_table(columns, rows, out=None, fmt="csv"):
    delimiter = "," if fmt == "csv" else "\t"
    buf = io.StringIO()
    w = csv.writer(buf, delimiter=delimiter, lineterminator="\n")
    w.writerow(columns)
    w.writerows(rows)
    text = buf.getvalue()
    if out is None or str(out) == "-":
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    return text


# ---------------------------------------------------------------------------
# Sweeps
# ---------------------------------------------------------------------------

META_KEYS = ("target", "param", "start", "stop", "count", "scale", "out", "jobs", "mass",
             "format", "tol")


@dataclass
class SweepSpec:
    target: str
    fixed: dict = field(default_factory=dict)
    param: Optional[str] = None
    start: Optional[float] = None
    stop: Optional[float] = None
    count: int = 101
    scale: str = "linear"
    out: Optional[str] = None
    jobs: int = 1
    mass: float = 1.0
    format: str = "csv"
    tol: float = 1e-12

    def validate(self) -> "SweepSpec":
        if self.target not in TARGETS:
            raise ConfigError(f"unknown target {self.target!r}")
        target = TARGETS[self.target]
        if target.multi:
            raise ConfigError(f"target {self.target!r} yields several rows and cannot be swept")
        if self.param is None:
            self.param = target.default_param
        if self.param not in target.param_names:
            raise ConfigError(f"parameter {self.param!r} is not valid for target {self.target!r}")
        unknown = set(self.fixed) - set(target.param_names)
        if unknown:
            raise ConfigError(f"unknown parameter(s) for {self.target!r}: {', '.join(sorted(unknown))}")
        if not self.mass > 0:
            raise ConfigError(f"mass must be positive, got {self.mass!r}")
        if self.start is None or self.stop is None:
            lo, hi = self._default_range()
            self.start = lo if self.start is None else self.start
            self.stop = hi if self.stop is None else self.stop
        if self.count < 1:
            raise ConfigError(f"count must be >= 1, got {self.count}")
        if self.count > 1 and not self.start < self.stop:
            raise ConfigError(f"start must be < stop (got {self.start} >= {self.stop})")
        if self.scale not in ("linear", "log"):
            raise ConfigError(f"scale must be linear or log, got {self.scale!r}")
        if self.scale == "log" and not self.start > 0:
            raise ConfigError("log scale needs start > 0")
        if self.jobs < 1:
            raise ConfigError(f"jobs must be >= 1, got {self.jobs}")
        if self.format not in ("csv", "tsv"):
            raise ConfigError(f"format must be csv or tsv, got {self.format!r}")
        for p in target.params:
            if p.name != self.param and p.name not in self.fixed:
                if p.default is None:
                    raise ConfigError(f"missing parameter {p.name!r} for target {self.target!r}")
                self.fixed[p.name] = p.default
        return self

    def _default_range(self):
        m = self.mass
        if self.param == "E" and self.target in ("step", "barrier", "averaged") and "V" in self.fixed:
            return m * (1 + 1e-3), float(self.fixed["V"]) - m * (1 + 1e-3)
        raise ConfigError(f"start and stop are required when sweeping {self.param!r}")

    def grid(self) -> np.ndarray:
        if self.count == 1:
            return np.array([self.start], dtype=float)
        if self.scale == "log":
            return np.geomspace(self.start, self.stop, self.count)
        return np.linspace(self.start, self.stop, self.count)

    def points(self) -> list:
        ptype = {p.name: p.type for p in TARGETS[self.target].params}[self.param]
        pts = []
        for v in self.grid():
            params = dict(self.fixed)
            params[self.param] = ptype(v) if ptype is not int else int(round(v))
            pts.append(params)
        return pts


def run_sweep(spec: SweepSpec) -> str:
    """Evaluate the sweep and write the table; returns the text written.

    Points are evaluated in parallel when ``spec.jobs > 1`` but emitted in
    grid order, so the output does not depend on the number of workers.
    """
    spec.validate()
    target = TARGETS[spec.target]
    args = [(spec.target, p, spec.mass, spec.tol) for p in spec.points()]
    if spec.jobs > 1 and len(args) > 1:
        with ProcessPoolExecutor(max_workers=spec.jobs) as pool:
            chunks = list(pool.map(_evaluate_packed, args, chunksize=max(1, len(args) // (4 * spec.jobs))))
    else:
        chunks = [_evaluate_packed(a) for a in args]
    rows = [row for chunk in chunks for row in chunk]
    return write_table(target.columns, rows, spec.out, spec.format)


def _coerce(key, value, target_name, lineno=None):
    where = f"line {lineno}: " if lineno else ""
    converters = {"count": int, "jobs": int, "start": float, "stop": float, "mass": float,
                  "tol": float}
    try:
        if key in converters:
            return converters[key](value)
        if key in META_KEYS:
            return value
        ptype = {p.name: p.type for p in TARGETS[target_name].params}[key]
        return ptype(value) if ptype is not int else int(value)
    except (ValueError, KeyError):
        raise ConfigError(f"{where}bad value {value!r} for {key!r}") from None


def load_config(path, overrides: Optional[dict] = None) -> SweepSpec:
    """Read a ``key=value`` sweep file (``#`` starts a comment).

    Meta keys are those of :class:`SweepSpec`; every other key must be a
    parameter of the chosen target.  Values in ``overrides`` (from the
    command line) win over the file.
    """
    entries = []
    try:
        with open(path) as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from None
    for lineno, line in enumerate(lines, 1):
        text = line.split("#", 1)[0].strip()
        if not text:
            continue
        if "=" not in text:
            raise ConfigError(f"{path}: line {lineno}: expected key=value, got {text!r}")
        key, value = (s.strip() for s in text.split("=", 1))
        if not key:
            raise ConfigError(f"{path}: line {lineno}: empty key")
        entries.append((key, value, lineno))

    overrides = dict(overrides or {})
    target_name = overrides.get("target") or next((v for k, v, _ in entries if k == "target"), None)
    if target_name is None:
        raise ConfigError(f"{path}: no target given")
    if target_name not in TARGETS:
        raise ConfigError(f"{path}: unknown target {target_name!r}")
    allowed = set(META_KEYS) | set(TARGETS[target_name].param_names)
    meta, fixed = {}, {}
    for key, value, lineno in entries:
        if key not in allowed:
            raise ConfigError(f"{path}: line {lineno}: unknown key {key!r}")
        val = _coerce(key, value, target_name, lineno)
        (meta if key in META_KEYS else fixed)[key] = val
    for key, val in overrides.items():
        if key in META_KEYS:
            meta[key] = val
        else:
            fixed[key] = val
    meta["target"] = target_name
    return SweepSpec(fixed=fixed, **meta).validate()


# ---------------------------------------------------------------------------
# Argument parsing
# ---------------------------------------------------------------------------

def _env_jobs():
    raw = os.environ.get(JOBS_ENV)
    if raw is None:
        return 1
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{JOBS_ENV} must be an integer, got {raw!r}") from None


def _global_options(parser, suppress):
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    parser.add_argument("--mass", type=float, default=d(None), help="fermion mass m (default 1)")
    parser.add_argument("--out", default=d(None), help="output file (default stdout)")
    parser.add_argument("--format", choices=("csv", "tsv"), default=d(None))
    parser.add_argument("--jobs", type=int, default=d(None),
                        help=f"worker processes for sweeps (default ${JOBS_ENV} or 1)")
    parser.add_argument("--tol", type=float, default=d(None), help="numerical tolerance")


SUBCOMMANDS = {
    "step": "step",
    "barrier": "barrier",
    "resonances": "resonances",
    "well-spectrum": "well-spectrum",
    "ramp": "ramp",
    "delta-well": "delta-well",
    "counts": "counts",
    "emission": "emission-levels",
    "coulomb": "coulomb",
    "vacuum-current": "vacuum-current",
}

_OPTION_NAMES = {"V_max": "--V-max", "lam": "--lambda"}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="kleinlab",
                                     description="Dirac-equation scattering, bound states and Klein tunnelling.")
    _global_options(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)
    for cmd, target_name in SUBCOMMANDS.items():
        sp = sub.add_parser(cmd, help=f"evaluate {target_name}")
        _global_options(sp, suppress=True)
        for p in TARGETS[target_name].params:
            opt = _OPTION_NAMES.get(p.name, f"--{p.name}")
            sp.add_argument(opt, dest=p.name, type=p.type, default=p.default,
                            required=p.default is None)
    sp = sub.add_parser("sweep", help="sweep one parameter of a target over a grid")
    _global_options(sp, suppress=True)
    sp.add_argument("--config", help="key=value sweep file")
    sp.add_argument("--target", choices=sorted(k for k, t in TARGETS.items() if not t.multi))
    sp.add_argument("--param")
    sp.add_argument("--start", type=float)
    sp.add_argument("--stop", type=float)
    sp.add_argument("--count", type=int)
    sp.add_argument("--scale", choices=("linear", "log"))
    sp.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                    help="fixed parameter (repeatable)")
    return parser


def _sweep_from_args(args) -> SweepSpec:
    overrides = {}
    for key in ("target", "param", "start", "stop", "count", "scale", "out", "jobs", "mass",
                "format", "tol"):
        val = getattr(args, key, None)
        if val is not None:
            overrides[key] = val
    target_name = overrides.get("target")
    sets = []
    for item in args.set:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        sets.append(tuple(s.strip() for s in item.split("=", 1)))
    if args.config:
        if sets:
            tn = target_name or _peek_target(args.config)
            for k, v in sets:
                if tn in TARGETS and k in TARGETS[tn].param_names:
                    overrides[k] = _coerce(k, v, tn)
                else:
                    raise ConfigError(f"unknown key {k!r}")
        return load_config(args.config, overrides)
    if target_name is None:
        raise ConfigError("sweep needs --target or --config")
    fixed = {}
    for k, v in sets:
        if k not in TARGETS[target_name].param_names:
            raise ConfigError(f"unknown key {k!r} for target {target_name!r}")
        fixed[k] = _coerce(k, v, target_name)
    meta = {k: v for k, v in overrides.items() if k in META_KEYS}
    return SweepSpec(fixed=fixed, **meta).validate()


def _peek_target(path):
    try:
        with open(path) as fh:
            for line in fh:
                text = line.split("#", 1)[0].strip()
                if text.startswith("target") and "=" in text:
                    return text.split("=", 1)[1].strip()
    except OSError:
        pass
    return None


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.jobs is None:
            args.jobs = _env_jobs()
        if args.command == "sweep":
            spec = _sweep_from_args(args)
            run_sweep(spec)
            return 0
        mass = args.mass if args.mass is not None else 1.0
        if not mass > 0:
            raise ConfigError(f"mass must be positive, got {mass!r}")
        tol = args.tol if args.tol is not None else 1e-12
        target_name = SUBCOMMANDS[args.command]
        target = TARGETS[target_name]
        params = {p.name: getattr(args, p.name) for p in target.params}
        rows = evaluate(target_name, params, mass, tol)
        write_table(target.columns, rows, args.out, args.format or "csv")
        return 0
    except ConfigError as exc:
        print(f"kleinlab: error: {exc}", file=sys.stderr)
        return 2
    except NumericalError as exc:
        print(f"kleinlab: numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
