r"""Lifshitz free energy, pressure and entropy for two identical half-spaces.

At temperature :math:`T > 0` the free energy per unit area is

.. math::
    E(a, T) = \frac{k_B T}{16\pi a^2}\Big[I_0 + 2\sum_{l\ge 1} I(x_l)\Big],\qquad
    I(x) = \int_x^\infty y\,dy \sum_{p=1,2}\ln\big(1 - r_p^2(x, y)e^{-y}\big),

with :math:`x_l = 2\pi l\,T/T_\mathrm{eff}` and :math:`k_B T_\mathrm{eff} = \hbar c/2a`.
The pressure replaces the logarithms by :math:`-y\,r_p^2 e^{-y}/(1 - r_p^2 e^{-y})`
and the prefactor by :math:`k_B T/16\pi a^3`. At :math:`T = 0` the sum becomes
an integral over :math:`x`. The l = 0 term :math:`I_0` follows a
:class:`~casimir.dielectric.Prescription`.

Internally everything is in eV and um; public results are SI.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np

from .constants import (
    ENERGY_DENSITY_SI,
    HBAR,
    HBAR_C,
    K_B,
    PRESSURE_SI,
    UM,
    effective_temperature,
)
from .dielectric import (
    DomainError,
    MatsubaraPoint,
    Prescription,
    _coefficients,
    normalized,
    zero_frequency_squared,
)
from .quadrature import ConvergenceError, QuadratureSettings, batch_quad

__all__ = [
    "PlatesConfig",
    "EnergyResult",
    "EntropyResult",
    "matsubara_xi",
    "free_energy_plates",
    "force_plates",
    "force_plates_result",
    "free_energy_plates_zero_temperature",
    "force_plates_zero_temperature",
    "force_sphere_plate",
    "entropy_plates",
]

# y-integration window beyond the lower limit; the integrand carries exp(-y)
Y_SPAN = 50.0
_U_BREAKS = np.array([0.0, 0.5, 2.0, 5.0, 10.0, 20.0, 35.0, Y_SPAN])
_X_BREAKS = np.array([0.0, 0.5, 2.0, 5.0, 10.0, 20.0, 35.0, Y_SPAN])
_FIRST_BLOCK = 64
# terms this small are invisible next to the l = 0 term; near the subnormal
# range a relative target can never be met
_ABS_FLOOR = 1e-280
_MAX_BLOCK = 1 << 15


@dataclass(frozen=True)
class PlatesConfig:
    a: float  # um
    T: float  # K

    def __post_init__(self):
        if not self.a > 0:
            raise DomainError("a must be positive")
        if not self.T >= 0:
            raise DomainError("T must be non-negative")

    @property
    def t(self):
        """Temperature in units of the effective temperature of the gap."""
        return self.T / effective_temperature(self.a)


@dataclass(frozen=True)
class EnergyResult:
    """A free energy (or pressure) with its error budget.

    ``value`` and ``est_error`` are SI: J/m^2 for free energies, Pa for pressures.
    """

    value: float
    terms_used: int
    est_error: float
    diagnostics: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def eV_per_um2(self):
        return self.value / ENERGY_DENSITY_SI

    @property
    def J_per_m2(self):
        return self.value


@dataclass(frozen=True)
class EntropyResult:
    value: float  # J / (m^2 K)
    est_error: float
    unreliable: bool


def matsubara_xi(l, T):
    """Matsubara frequency ``xi_l = 2 pi l k_B T / hbar`` in rad/s."""
    if T <= 0:
        raise DomainError("T must be positive; use the zero-temperature routines for T = 0")
    if l < 0 or int(l) != l:
        raise DomainError("l must be a non-negative integer")
    return MatsubaraPoint(int(l), 2.0 * math.pi * l * K_B * T / HBAR)


def matsubara_x(l, T, a):
    """Dimensionless Matsubara frequency ``2 a xi_l / c``."""
    return 2.0 * math.pi * l * T / effective_temperature(a)


# --------------------------------------------------------------------------
# integrands


def _log_one_minus(rsq, c, y):
    """ln(1 - r^2 e^-y) given c = 1 - r^2, accurate on both ends."""
    e = np.exp(-y)
    z = rsq * e
    with np.errstate(divide="ignore", invalid="ignore"):
        small = np.log1p(-z)
        large = np.log(-np.expm1(-y) + c * e)
    return np.where(z < 0.5, small, large)


def _occupation(rsq, c, y):
    """r^2 e^-y / (1 - r^2 e^-y)."""
    e = np.exp(-y)
    return rsq * e / (-np.expm1(-y) + c * e)


def _integrand(kind, y, r1, c1, r2, c2):
    if kind == "energy":
        return y * (_log_one_minus(r1, c1, y) + _log_one_minus(r2, c2, y))
    return y * y * (_occupation(r1, c1, y) + _occupation(r2, c2, y))


def _tail_bound(kind, ymax):
    """Bound on the integrand summed over both polarisations beyond ``ymax``."""
    e = math.exp(-ymax) / -math.expm1(-ymax)
    if kind == "energy":
        return 2.0 * (ymax + 1.0) * e
    return 2.0 * (ymax * ymax + 2.0 * ymax + 2.0) * e


def _term_integrals(model, a, x, kind, rel_tol, max_subdivisions):
    """``I(x)`` for an array of x > 0 (energy) or its pressure analogue.

    Returns values, error estimates (including the cut-off tail) and a
    convergence mask.
    """
    x = np.asarray(x, dtype=float)

    def f(owner, y):
        xs = x[owner]
        r1, r2, c1, c2 = _coefficients(model, a, xs, y)
        return _integrand(kind, y, r1, c1, r2, c2)

    breaks = x[:, None] + _U_BREAKS[None, :]
    val, err, ok = batch_quad(f, breaks, rel_tol=rel_tol, abs_tol=_ABS_FLOOR,
                              max_subdivisions=max_subdivisions)
    tails = np.array([_tail_bound(kind, xi + Y_SPAN) for xi in x]) if x.size else x
    return val, err + tails, ok


def _zero_term(model, prescription, a, kind, rel_tol, max_subdivisions):
    """l = 0 integral over y in (0, inf) with the prescription's coefficients."""

    def f(owner, y):
        r1, r2 = zero_frequency_squared(model, prescription, a, y)
        return _integrand(kind, y, r1, 1.0 - r1, r2, 1.0 - r2)

    # zero-frequency coefficients are exact closed forms; 1 - r^2 is only
    # needed where r^2 = 1 identically, which the subtraction gives exactly
    val, err, ok = batch_quad(f, _U_BREAKS[None, :], rel_tol=rel_tol,
                              max_subdivisions=max_subdivisions)
    return float(val[0]), float(err[0]) + _tail_bound(kind, Y_SPAN), bool(ok[0])


# --------------------------------------------------------------------------
# Matsubara sum


def _matsubara_sum(cfg, model, prescription, quad, kind):
    """Return (bracket sum, error, terms_used) for I_0 + 2 sum_{l>=1} I(x_l)."""
    model = normalized(model)
    prescription = Prescription(prescription)
    if not cfg.T > 0:
        raise DomainError("T must be positive; use the zero-temperature routines for T = 0")
    a = cfg.a
    step = 2.0 * math.pi * cfg.t
    l_guard = 1.0 / cfg.t

    zero, zero_err, zero_ok = _zero_term(model, prescription, a, kind,
                                         quad.rel_tol, quad.max_subdivisions)
    parts = [zero]
    total = zero
    err = zero_err
    failed = [] if zero_ok else [0]
    l = 1
    block = _FIRST_BLOCK
    prev = None
    last = None
    stopped = False
    while l <= quad.max_terms:
        ls = np.arange(l, min(l + block, quad.max_terms + 1))
        vals, errs, ok = _term_integrals(model, a, step * ls, kind,
                                         quad.rel_tol, quad.max_subdivisions)
        if not ok.all():
            failed.extend(int(v) for v in ls[~ok])
        running = total + 2.0 * np.cumsum(vals)
        stop = (np.abs(vals) < quad.matsubara_tail_tol * np.abs(running)) & (ls > l_guard)
        n_take = int(np.argmax(stop)) + 1 if stop.any() else len(ls)
        parts.extend((2.0 * vals[:n_take]).tolist())
        total = math.fsum(parts)
        err += 2.0 * float(np.sum(errs[:n_take]))
        if n_take >= 2:
            prev, last = float(vals[n_take - 2]), float(vals[n_take - 1])
        else:
            prev, last = last, float(vals[0])
        l = int(ls[n_take - 1]) + 1
        if stop.any():
            stopped = True
            break
        block = min(2 * block, _MAX_BLOCK)

    terms_used = l  # l = 0 .. l - 1
    tail = _geometric_tail(prev, last, step)
    err += tail
    diagnostics = {"terms_used": terms_used, "tail_estimate": tail,
                   "failed_terms": failed[:20], "t": cfg.t}
    if failed or not stopped:
        reason = "Matsubara sum hit max_terms" if not stopped else "y-quadrature did not converge"
        raise ConvergenceError(reason, partial=(total, err, terms_used), diagnostics=diagnostics)
    return total, err, terms_used, diagnostics


def _geometric_tail(prev, last, step):
    """Bound on 2 * sum of the omitted terms from the decay of the last two."""
    if last is None or last == 0.0:
        return 0.0
    if prev is not None and prev != 0.0 and 0 < last / prev < 1:
        rho = last / prev
    else:
        rho = math.exp(-step)
    return 2.0 * abs(last) * rho / (1.0 - rho)


def _energy_result(value_ev, err_ev, terms, diagnostics, scale):
    return EnergyResult(value_ev * scale, terms, abs(err_ev) * scale, diagnostics)


def free_energy_plates(cfg, model, prescription=Prescription.AS_IS, quad=None):
    """Free energy per unit area of two plates at ``cfg.T > 0``.

    Returns
    -------
    EnergyResult
        ``value`` in J/m^2 (negative: attraction).

    Raises
    ------
    ConvergenceError
        with ``partial`` set to an :class:`EnergyResult` built from the terms summed so far.
    """
    quad = quad or QuadratureSettings()
    pref = K_B * cfg.T / (16.0 * math.pi * cfg.a**2)
    try:
        s, e, n, diag = _matsubara_sum(cfg, model, prescription, quad, "energy")
    except ConvergenceError as exc:
        s, e, n = exc.partial
        exc.partial = _energy_result(pref * s, pref * e, n, exc.diagnostics, ENERGY_DENSITY_SI)
        raise
    return _energy_result(pref * s, pref * e, n, diag, ENERGY_DENSITY_SI)


def force_plates_result(cfg, model, prescription=Prescription.AS_IS, quad=None):
    """Pressure between the plates as an :class:`EnergyResult` (value in Pa)."""
    quad = quad or QuadratureSettings()
    pref = -K_B * cfg.T / (16.0 * math.pi * cfg.a**3)
    try:
        s, e, n, diag = _matsubara_sum(cfg, model, prescription, quad, "force")
    except ConvergenceError as exc:
        s, e, n = exc.partial
        exc.partial = _energy_result(pref * s, pref * e, n, exc.diagnostics, PRESSURE_SI)
        raise
    return _energy_result(pref * s, pref * e, n, diag, PRESSURE_SI)


def force_plates(cfg, model, prescription=Prescription.AS_IS, quad=None):
    """Pressure in Pa (negative: attraction); minus the a-derivative of the free energy."""
    return force_plates_result(cfg, model, prescription, quad).value


# --------------------------------------------------------------------------
# zero temperature


def _zero_temperature_integral(a, model, quad, kind):
    model = normalized(model)
    if not a > 0:
        raise DomainError("a must be positive")
    inner_tol = quad.rel_tol * 0.1
    failures = []

    def outer(owner, x):
        vals, _, ok = _term_integrals(model, a, x.ravel(), kind, inner_tol,
                                      quad.max_subdivisions)
        if not ok.all():
            failures.append(int((~ok).sum()))
        return vals.reshape(x.shape)

    val, err, ok = batch_quad(outer, _X_BREAKS[None, :], rel_tol=quad.rel_tol,
                              max_subdivisions=quad.max_subdivisions)
    value = float(val[0])
    # inner errors are bounded by inner_tol relative; the x-tail beyond Y_SPAN
    # is below the y-tail bound integrated once more
    error = float(err[0]) + inner_tol * abs(value) + _tail_bound(kind, Y_SPAN) * 3.0
    if failures or not ok[0]:
        raise ConvergenceError("zero-temperature quadrature did not converge",
                               partial=(value, error),
                               diagnostics={"inner_failures": sum(failures)})
    return value, error


def free_energy_plates_zero_temperature(a, model, quad=None):
    """Free energy per unit area at T = 0 from the frequency integral (J/m^2)."""
    quad = quad or QuadratureSettings()
    pref = HBAR_C / (32.0 * math.pi**2 * a**3)
    v, e = _zero_temperature_integral(a, model, quad, "energy")
    return EnergyResult(pref * v * ENERGY_DENSITY_SI, 1, pref * e * ENERGY_DENSITY_SI)


def force_plates_zero_temperature(a, model, quad=None):
    """Pressure at T = 0 in Pa; valid for dissipative media too."""
    quad = quad or QuadratureSettings()
    pref = -HBAR_C / (32.0 * math.pi**2 * a**4)
    v, _ = _zero_temperature_integral(a, model, quad, "force")
    return pref * v * PRESSURE_SI


def free_energy(cfg, model, prescription=Prescription.AS_IS, quad=None):
    """Dispatch to the Matsubara sum for T > 0 and to the frequency integral for T = 0."""
    if cfg.T == 0:
        return free_energy_plates_zero_temperature(cfg.a, model, quad)
    return free_energy_plates(cfg, model, prescription, quad)


def force(cfg, model, prescription=Prescription.AS_IS, quad=None):
    if cfg.T == 0:
        return force_plates_zero_temperature(cfg.a, model, quad)
    return force_plates(cfg, model, prescription, quad)


# --------------------------------------------------------------------------
# derived quantities


def force_sphere_plate(R, cfg, model, prescription=Prescription.AS_IS, quad=None):
    """Sphere-plate force in N from the proximity-force rule ``2 pi R E(a)``.

    ``R`` is in um. Warns when ``R < 100 a``, where the rule is doubtful.
    """
    if not R > 0:
        raise DomainError("R must be positive")
    if R < 100.0 * cfg.a:
        warnings.warn(f"R/a = {R / cfg.a:.3g} < 100: proximity-force rule may be inaccurate",
                      stacklevel=2)
    return 2.0 * math.pi * R * UM * free_energy(cfg, model, prescription, quad).value


# E(T) must be resolved far below the size of its temperature variation
_ENTROPY_REL_TOL = 1e-13
_ENTROPY_TAIL_TOL = 1e-17


def entropy_plates(cfg, model, prescription=Prescription.AS_IS, quad=None):
    """Entropy per unit area ``S = -dE/dT`` in J/(m^2 K).

    Central differences with step ``h = max(0.01 T, 0.5 K)`` (at most T/2)
    and ``h/2``, combined by one Richardson step. The free energies are
    computed with tolerances tightened to ``1e-13`` regardless of ``quad``.
    The result is marked unreliable, with a warning, when the error estimate
    exceeds ``|S| / 10``.
    """
    quad = quad or QuadratureSettings()
    if not cfg.T > 0:
        raise DomainError("T must be positive")
    tight = replace(quad, rel_tol=min(quad.rel_tol, _ENTROPY_REL_TOL),
                    matsubara_tail_tol=min(quad.matsubara_tail_tol, _ENTROPY_TAIL_TOL))
    h = min(max(0.01 * cfg.T, 0.5), 0.5 * cfg.T)

    def energy(T):
        return free_energy_plates(PlatesConfig(cfg.a, T), model, prescription, tight)

    def slope(step):
        hi, lo = energy(cfg.T + step), energy(cfg.T - step)
        return (hi.value - lo.value) / (2.0 * step), (hi.est_error + lo.est_error) / (2.0 * step)

    d1, e1 = slope(h)
    d2, e2 = slope(0.5 * h)
    s = -(4.0 * d2 - d1) / 3.0
    err = abs(d2 - d1) / 3.0 + (4.0 * e2 + e1) / 3.0
    unreliable = err > abs(s) / 10.0
    if unreliable:
        warnings.warn(f"entropy finite difference unreliable: S = {s:.3e} +- {err:.1e}",
                      stacklevel=2)
    return EntropyResult(s, err, unreliable)
