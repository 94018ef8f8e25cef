"""Command-line front end: ``casimir eval | sweep | fig1 | check``.

Exit codes: 0 success, 2 invalid input, 3 convergence failure, 4 a sweep
point failed, 5 a consistency check failed.
"""

from __future__ import annotations

import argparse
import csv
import functools
import io
import json
import math
import os
import sys
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field, replace

import numpy as np

from . import asymptotics, lifshitz
from .dielectric import (
    ConstantDielectric,
    DomainError,
    Drude,
    IdealMetal,
    Plasma,
    Prescription,
    _coefficients,
    real_photon_reflection,
    zero_frequency_squared,
)
from .lifshitz import PlatesConfig
from .quadrature import ConvergenceError, QuadratureSettings

EXIT_USAGE = 2
EXIT_CONVERGENCE = 3
EXIT_POINT_FAILED = 4
EXIT_CHECK_FAILED = 5

SWEEP_COLUMNS = ["a_um", "T_K", "model_id", "prescription_id",
                 "E_J_per_m2", "F_Pa", "delta_T", "est_error"]
SPHERE_COLUMN = "F_sphere_N"
FIG1_COLUMNS = ["a_um", "delta_T_drude_modified", "delta_T_drude_asis",
                "delta_T_dielectric_eps7"]

FIG1_DRUDE = Drude(12.5, 0.063)
FIG1_DIELECTRIC = ConstantDielectric(7.0)

ENV_RELTOL = "CASIMIR_QUAD_RELTOL"


class UsageError(Exception):
    pass


def parse_model(text):
    """``ideal``, ``plasma:<wp>``, ``drude:<wp>,<gamma>`` or ``dielectric:<eps0>`` (eV)."""
    name, _, args = text.strip().partition(":")
    try:
        values = [float(v) for v in args.split(",")] if args else []
    except ValueError:
        raise UsageError(f"bad model parameters in {text!r}") from None
    try:
        if name == "ideal" and not values:
            return IdealMetal()
        if name == "plasma" and len(values) == 1:
            return Plasma(*values)
        if name == "drude" and len(values) == 2:
            return Drude(*values)
        if name == "dielectric" and len(values) == 1:
            return ConstantDielectric(*values)
    except DomainError as exc:
        raise UsageError(str(exc)) from None
    raise UsageError(f"unknown model spec {text!r}; expected ideal, plasma:<wp>, "
                     "drude:<wp>,<gamma> or dielectric:<eps0>")


@dataclass
class RunSpec:
    command: str
    model: object = field(default_factory=lambda: Plasma(12.5))
    prescription: Prescription = Prescription.AS_IS
    geometry: str = "plates"
    R: float | None = None
    a: float | None = None
    T: float | None = None
    a_range: tuple | None = None
    T_range: tuple | None = None
    T0: float = asymptotics.T0_DEFAULT
    fmt: str = "csv"
    output: str | None = None
    quad: QuadratureSettings = field(default_factory=QuadratureSettings)
    jobs: int = 1
    entropy: bool = False
    delta_T: bool = True

    def validate(self):
        if self.a is not None and not self.a > 0:
            raise UsageError("a must be positive")
        if self.T is not None and not self.T >= 0:
            raise UsageError("T must be non-negative")
        for name in ("a_range", "T_range"):
            rng = getattr(self, name)
            if rng is None:
                continue
            lo, hi, n = rng
            if not (lo > 0 and hi >= lo):
                raise UsageError(f"{name} must satisfy 0 < min <= max")
            if n < 2:
                raise UsageError(f"{name} needs at least 2 points")
        if self.geometry not in ("plates", "sphere-plate"):
            raise UsageError("geometry must be plates or sphere-plate")
        if self.geometry == "sphere-plate" and not (self.R and self.R > 0):
            raise UsageError("sphere-plate geometry needs a positive --R")
        if self.fmt not in ("csv", "json"):
            raise UsageError("format must be csv or json")
        if self.jobs < 1:
            raise UsageError("jobs must be >= 1")


def grid(rng):
    lo, hi, n = rng
    return [float(v) for v in np.linspace(lo, hi, int(n))]


def fmt_num(v):
    return "" if v is None else format(v, ".15g")


# --------------------------------------------------------------------------
# computation


@functools.lru_cache(maxsize=None)
def baseline_energy(model, a, quad):
    """E(a, 0) from the frequency integral; cached per (model, a, settings)."""
    return lifshitz.free_energy_plates_zero_temperature(a, model, quad).value


def evaluate_point(spec, a, T, with_entropy=False):
    """One grid point as a dict with SweepRow fields (plus extras)."""
    cfg = PlatesConfig(a, T)
    e = lifshitz.free_energy(cfg, spec.model, spec.prescription, spec.quad)
    if T == 0:
        f = lifshitz.force_plates_zero_temperature(a, spec.model, spec.quad)
    else:
        f = lifshitz.force_plates(cfg, spec.model, spec.prescription, spec.quad)
    row = {
        "a_um": a,
        "T_K": T,
        "model_id": spec.model.label,
        "prescription_id": spec.prescription.value,
        "E_J_per_m2": e.value,
        "F_Pa": f,
        "delta_T": None,
        "est_error": e.est_error,
        "terms_used": e.terms_used,
    }
    if spec.delta_T:
        if T > 0:
            e0 = baseline_energy(spec.model, a, spec.quad)
            row["delta_T"] = asymptotics.relative_temperature_correction(e.value, e0)
        else:
            row["delta_T"] = 0.0
    if spec.geometry == "sphere-plate":
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            row[SPHERE_COLUMN] = 2.0 * math.pi * spec.R * 1e-6 * e.value
    if with_entropy and T > 0:
        s = lifshitz.entropy_plates(cfg, spec.model, spec.prescription, spec.quad)
        row["S_J_per_m2K"] = s.value
        row["S_est_error"] = s.est_error
        row["S_unreliable"] = s.unreliable
    return row


def _pool_map(fn, items, jobs):
    if jobs == 1:
        return [fn(it) for it in items]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(fn, items))


def run_eval(spec, out):
    if spec.a is None or spec.T is None:
        raise UsageError("eval needs --a and --T")
    try:
        row = evaluate_point(spec, spec.a, spec.T, with_entropy=spec.entropy)
    except ConvergenceError as exc:
        report = {"error": str(exc), "diagnostics": _jsonable(exc.diagnostics)}
        if exc.partial is not None and hasattr(exc.partial, "value"):
            report["partial_E_J_per_m2"] = exc.partial.value
        out.write(json.dumps(report, sort_keys=True) + "\n")
        return EXIT_CONVERGENCE
    row["geometry"] = spec.geometry
    if spec.geometry == "sphere-plate":
        row["R_um"] = spec.R
    row["quad"] = asdict(spec.quad)
    out.write(json.dumps(_jsonable(row), sort_keys=True, indent=2) + "\n")
    return 0


def run_sweep(spec, out):
    a_values = grid(spec.a_range) if spec.a_range else [spec.a]
    T_values = grid(spec.T_range) if spec.T_range else [spec.T]
    if None in a_values or None in T_values or not (spec.a_range or spec.T_range):
        raise UsageError("sweep needs --a-range or --T-range (and --a / --T for the fixed variable)")
    points = [(a, T) for a in a_values for T in T_values]

    def work(p):
        try:
            return evaluate_point(spec, *p)
        except (ConvergenceError, DomainError) as exc:
            return {"a_um": p[0], "T_K": p[1], "model_id": spec.model.label,
                    "prescription_id": spec.prescription.value, "error": str(exc)}

    rows = _pool_map(work, points, spec.jobs)
    columns = SWEEP_COLUMNS + ([SPHERE_COLUMN] if spec.geometry == "sphere-plate" else [])
    write_rows(out, rows, columns, spec.fmt)
    return EXIT_POINT_FAILED if any("error" in r for r in rows) else 0


def fig1_rows(a_values, T0, quad, jobs=1):
    """Relative temperature corrections for the three reference curves."""
    curves = [
        ("delta_T_drude_modified", FIG1_DRUDE, Prescription.MODIFIED),
        ("delta_T_drude_asis", FIG1_DRUDE, Prescription.AS_IS),
        ("delta_T_dielectric_eps7", FIG1_DIELECTRIC, Prescription.AS_IS),
    ]

    def work(a):
        row = {"a_um": a}
        for name, model, presc in curves:
            try:
                e = lifshitz.free_energy_plates(PlatesConfig(a, T0), model, presc, quad).value
                row[name] = asymptotics.relative_temperature_correction(
                    e, baseline_energy(model, a, quad))
            except ConvergenceError as exc:
                row[name] = None
                row["error"] = str(exc)
        return row

    return _pool_map(work, a_values, jobs)


def run_fig1(spec, out):
    a_values = grid(spec.a_range or (1.0, 5.0, 41))
    rows = fig1_rows(a_values, spec.T0, spec.quad, spec.jobs)
    write_rows(out, rows, FIG1_COLUMNS, spec.fmt)
    return EXIT_CONVERGENCE if any("error" in r for r in rows) else 0


def write_rows(out, rows, columns, fmt):
    if fmt == "json":
        out.write(json.dumps([_jsonable(r) for r in rows], sort_keys=True, indent=2) + "\n")
        return
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for r in rows:
        w.writerow([v if isinstance(v, str) else fmt_num(v)
                    for v in (r.get(c) for c in columns)])
    out.write(buf.getvalue())


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer, np.bool_)):
        return obj.item()
    return obj


# --------------------------------------------------------------------------
# consistency report


@dataclass
class Check:
    name: str
    measured: float
    bound: float
    passed: bool
    detail: str = ""
    expected_violation: bool = False


def _widen(bound, quad, scale):
    """Loosened tolerances widen bounds proportionally."""
    return max(bound, scale * quad.rel_tol)


def consistency_checks(quad):
    """Desk-scale battery of the invariants; returns a list of :class:`Check`."""
    out = []
    drude = Drude(12.5, 0.063)
    plasma = Plasma(12.5)

    a = 1.0
    e0 = lifshitz.free_energy_plates_zero_temperature(a, IdealMetal(), quad).value
    ref = asymptotics.low_T_energy_plasma(asymptotics.PlasmaAsymptoticsInput(a, 0.0, math.inf))
    dev = abs(e0 / ref - 1)
    b = _widen(1e-6, quad, 10)
    out.append(Check("ideal_metal_closed_form", dev, b, dev < b, "E(T=0), a = 1 um"))

    e_t = lifshitz.free_energy_plates(PlatesConfig(1.0, 300.0), drude, Prescription.AS_IS, quad).value
    d_t = asymptotics.relative_temperature_correction(e_t, baseline_energy(drude, 1.0, quad))
    out.append(Check("drude_as_is_delta_T", d_t, 0.04, abs(d_t + 0.17) <= 0.04,
                     "delta_T at a = 1 um, 300 K; expected -0.17 +- 0.04"))

    a, T = 5.0, 3000.0
    e = lifshitz.free_energy_plates(PlatesConfig(a, T), drude, Prescription.AS_IS, quad).value
    dev = abs(e / (0.5 * asymptotics.ideal_high_T_energy(a, T)) - 1)
    out.append(Check("drude_as_is_half_asymptote", dev, 1e-2, dev < 1e-2, "a = 5 um, 3000 K"))

    a, T = 3.0, 38.0
    inp = asymptotics.PlasmaAsymptoticsInput(a, T, 12.5)
    cfg = PlatesConfig(a, T)
    e = lifshitz.free_energy_plates(cfg, plasma, Prescription.AS_IS, quad).value
    f = lifshitz.force_plates(cfg, plasma, Prescription.AS_IS, quad)
    dev = max(abs(e / asymptotics.low_T_energy_plasma(inp) - 1),
              abs(f / asymptotics.low_T_force_plasma(inp) - 1))
    b = _widen(1e-3, quad, 10)
    out.append(Check("plasma_low_T_asymptotics", dev, b, dev < b,
                     f"a = 3 um, t = {inp.t:.3f}, delta0/a = {inp.delta0 / a:.4f}"))

    a, T = 5.0, 3000.0
    inp = asymptotics.PlasmaAsymptoticsInput(a, T, 12.5)
    cfg = PlatesConfig(a, T)
    e = lifshitz.free_energy_plates(cfg, plasma, Prescription.AS_IS, quad).value
    ea, _ = asymptotics.high_T_limits_plasma(inp)
    dev = abs(e / ea - 1)
    fc = (e / asymptotics.ideal_high_T_energy(a, T) - 1) / (-2 * inp.delta0 / a)
    out.append(Check("plasma_high_T_asymptotics", dev, 1e-2, dev < 1e-2, "a = 5 um, 3000 K"))
    out.append(Check("plasma_high_T_conductivity_factor", abs(fc - 1), 0.02, abs(fc - 1) < 0.02,
                     "correction relative to -2 delta0/a"))

    s1 = lifshitz.entropy_plates(PlatesConfig(1.0, 1.0), plasma, Prescription.AS_IS, quad).value
    s2 = lifshitz.entropy_plates(PlatesConfig(1.0, 2.0), plasma, Prescription.AS_IS, quad).value
    slope = math.log(s2 / s1) / math.log(2.0) if s1 > 0 and s2 > 0 else float("nan")
    out.append(Check("plasma_entropy_slope", slope, 0.2, abs(slope - 2) <= 0.2,
                     "log-log slope of S between 1 and 2 K; S -> 0 as T^2"))

    s1 = lifshitz.entropy_plates(PlatesConfig(1.0, 1.0), plasma, Prescription.IDEAL_METAL, quad).value
    s2 = lifshitz.entropy_plates(PlatesConfig(1.0, 2.0), plasma, Prescription.IDEAL_METAL, quad).value
    rel = abs(s2 / s1 - 1) if s1 else float("inf")
    out.append(Check("ideal_metal_rule_nonzero_entropy", rel, 0.05, rel < 0.05 and s1 > 0,
                     "predicted violation: S(T -> 0) tends to a nonzero constant",
                     expected_violation=True))

    s = lifshitz.entropy_plates(PlatesConfig(1.0, 300.0), drude, Prescription.AS_IS, quad).value
    out.append(Check("drude_as_is_negative_entropy", s, 0.0, s < 0, "S at a = 1 um, 300 K"))

    cfg = PlatesConfig(1.0, 300.0)
    ep = lifshitz.free_energy_plates(cfg, plasma, Prescription.AS_IS, quad).value
    small = Drude(12.5, 1e-6)
    gap_mod = abs(lifshitz.free_energy_plates(cfg, small, Prescription.MODIFIED, quad).value / ep - 1)
    gap_raw = abs(lifshitz.free_energy_plates(cfg, small, Prescription.AS_IS, quad).value / ep - 1)
    b = _widen(1e-4, quad, 10)
    out.append(Check("gamma_continuity_modified", gap_mod, b, gap_mod < b, "gamma = 1e-6 eV"))
    out.append(Check("gamma_discontinuity_as_is", gap_raw, 1e-2, gap_raw > 1e-2,
                     "gap must exceed the bound"))

    em = lifshitz.free_energy_plates(cfg, plasma, Prescription.MODIFIED, quad).value
    dev = abs(em / ep - 1)
    b = _widen(1e-12, quad, 10)
    out.append(Check("plasma_prescription_equivalence", dev, b, dev <= b, "as-is vs modified"))

    fine = replace(quad, rel_tol=min(quad.rel_tol, 1e-12))
    a, h = 1.0, 1e-3
    es = [lifshitz.free_energy_plates(PlatesConfig(a + k * h, 300.0), drude,
                                      Prescription.MODIFIED, fine).value for k in (-2, -1, 1, 2)]
    deriv = (es[0] - 8 * es[1] + 8 * es[2] - es[3]) / (12 * h * 1e-6)
    f = lifshitz.force_plates(PlatesConfig(a, 300.0), drude, Prescription.MODIFIED, fine)
    dev = abs(f / -deriv - 1)
    out.append(Check("force_energy_consistency", dev, 1e-4, dev < 1e-4, "Drude modified, 1 um, 300 K"))

    rng = np.random.default_rng(12345)
    worst = 0.0
    for model in (plasma, drude, ConstantDielectric(7.0), Drude(0.5, 0.2)):
        x = rng.uniform(1e-4, 30.0, 2000)
        y = x + rng.exponential(5.0, 2000)
        r1, r2, _, _ = _coefficients(model, 1.0, x, y)
        worst = max(worst, float(np.max(np.maximum(r1, r2) - 1.0)), float(-np.min(np.minimum(r1, r2))),
                    float(np.max(r2 - r1)))
    out.append(Check("reflection_bounds_and_ordering", worst, 0.0, worst <= 1e-15,
                     "0 <= r2^2 <= r1^2 <= 1 on random points"))

    viol = 0
    for eps0 in (2.0, 7.0, 100.0):
        r1, r2 = zero_frequency_squared(ConstantDielectric(eps0), Prescription.AS_IS, 1.0, np.array([1.0]))
        viol += not (r1[0] > real_photon_reflection(eps0) > r2[0])
    out.append(Check("dielectric_zero_frequency_ordering", viol, 0, viol == 0, "eps0 in {2, 7, 100}"))
    return out


def run_check(spec, out, err):
    checks = consistency_checks(spec.quad)
    failed = [c for c in checks if not c.passed and not c.expected_violation]
    for c in checks:
        status = "PASS" if c.passed else "FAIL"
        if c.expected_violation:
            status = "EXPECTED-VIOLATION" if c.passed else "FAIL"
        err.write(f"{status:>18}  {c.name:<36} measured={c.measured:.6g} bound={c.bound:.3g}  {c.detail}\n")
    report = {"passed": not failed, "quad": asdict(spec.quad),
              "checks": [_jsonable(asdict(c)) for c in checks]}
    out.write(json.dumps(report, sort_keys=True, indent=2) + "\n")
    return EXIT_CHECK_FAILED if failed else 0


# --------------------------------------------------------------------------
# argument handling


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON file with default values for the flags")
    common.add_argument("--model", help="ideal | plasma:<wp eV> | drude:<wp eV>,<gamma eV> | dielectric:<eps0>")
    common.add_argument("--prescription", choices=[p.value for p in Prescription])
    common.add_argument("--geometry", choices=["plates", "sphere-plate"])
    common.add_argument("--R", type=float, help="sphere radius, um")
    common.add_argument("--a", type=float, help="gap width, um")
    common.add_argument("--T", type=float, help="temperature, K")
    common.add_argument("--a-range", type=float, nargs=3, metavar=("MIN", "MAX", "N"))
    common.add_argument("--T-range", type=float, nargs=3, metavar=("MIN", "MAX", "N"))
    common.add_argument("--T0", type=float, help="comparison temperature for fig1, K")
    common.add_argument("--format", dest="fmt", choices=["csv", "json"])
    common.add_argument("--output", "-o", help="output path (default stdout)")
    common.add_argument("--jobs", type=int, help="worker threads for grid points")
    common.add_argument("--entropy", action="store_true", default=None, help="eval: also compute S")
    common.add_argument("--no-delta-T", dest="delta_T", action="store_false", default=None)
    common.add_argument("--quad.rel-tol", dest="rel_tol", type=float)
    common.add_argument("--quad.tail-tol", dest="matsubara_tail_tol", type=float)
    common.add_argument("--quad.max-terms", dest="max_terms", type=int)
    common.add_argument("--quad.max-subdivisions", dest="max_subdivisions", type=int)

    parser = argparse.ArgumentParser(prog="casimir", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("eval", parents=[common], help="single point, JSON report")
    sub.add_parser("sweep", parents=[common], help="grid over a and/or T, CSV rows")
    sub.add_parser("fig1", parents=[common], help="relative temperature corrections vs a")
    sub.add_parser("check", parents=[common], help="consistency report")
    return parser


_QUAD_KEYS = ("rel_tol", "matsubara_tail_tol", "max_terms", "max_subdivisions")


def spec_from_args(ns, environ=None):
    """Merge defaults < config file < environment < command-line flags."""
    environ = os.environ if environ is None else environ
    conf = {}
    if ns.config:
        try:
            with open(ns.config) as fh:
                conf = json.load(fh)
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot read config: {exc}") from None
    quad_conf = dict(conf.pop("quad", {}))
    if ENV_RELTOL in environ:
        try:
            quad_conf["rel_tol"] = float(environ[ENV_RELTOL])
        except ValueError:
            raise UsageError(f"{ENV_RELTOL} must be a number") from None
    for key in _QUAD_KEYS:
        v = getattr(ns, key)
        if v is not None:
            quad_conf[key] = v
    try:
        quad = QuadratureSettings(**quad_conf)
    except (TypeError, ValueError) as exc:
        raise UsageError(str(exc)) from None

    def pick(name, conf_key=None):
        v = getattr(ns, name)
        return v if v is not None else conf.get(conf_key or name)

    spec = RunSpec(command=ns.command, quad=quad)
    model = pick("model")
    if model is not None:
        spec.model = parse_model(model)
    presc = pick("prescription")
    if presc is not None:
        try:
            spec.prescription = Prescription(presc)
        except ValueError:
            raise UsageError(f"unknown prescription {presc!r}") from None
    for name, conf_key in (("geometry", None), ("R", None), ("a", None), ("T", None),
                           ("T0", None), ("fmt", "format"), ("output", None),
                           ("jobs", None), ("entropy", None), ("delta_T", None)):
        v = pick(name, conf_key)
        if v is not None:
            setattr(spec, name, v)
    for name in ("a_range", "T_range"):
        v = pick(name)
        if v is not None:
            if len(v) != 3:
                raise UsageError(f"{name} needs MIN MAX N")
            spec_n = v[2]
            if int(spec_n) != spec_n:
                raise UsageError(f"{name} point count must be an integer")
            setattr(spec, name, (float(v[0]), float(v[1]), int(spec_n)))
    if ns.command == "check" and ns.fmt is None and "format" not in conf:
        spec.fmt = "json"
    spec.validate()
    return spec


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        spec = spec_from_args(ns)
    except UsageError as exc:
        stderr.write(f"casimir {ns.command}: error: {exc}\n")
        return EXIT_USAGE

    out = open(spec.output, "w", encoding="utf-8", newline="\n") if spec.output else stdout
    try:
        if spec.command == "eval":
            return run_eval(spec, out)
        if spec.command == "sweep":
            return run_sweep(spec, out)
        if spec.command == "fig1":
            return run_fig1(spec, out)
        return run_check(spec, out, stderr)
    except UsageError as exc:
        stderr.write(f"casimir {ns.command}: error: {exc}\n")
        return EXIT_USAGE
    except DomainError as exc:
        stderr.write(f"casimir {ns.command}: error: {exc}\n")
        return EXIT_USAGE
    finally:
        if out is not stdout:
            out.close()


if __name__ == "__main__":
    sys.exit(main())
