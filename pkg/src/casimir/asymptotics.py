r"""Closed-form low- and high-temperature limits for plasma-model plates.

With :math:`t = T/T_\mathrm{eff}` and :math:`\delta_0 = c/\omega_p`:

.. math::
    E &\approx -\frac{\pi^2\hbar c}{720a^3}\Big\{1 + \frac{45\zeta(3)}{\pi^3}t^3 - t^4
        - 4\frac{\delta_0}{a}\Big[1 - \frac{45\zeta(3)}{2\pi^3}t^3 + t^4\Big]\Big\}, \\
    F &\approx -\frac{\pi^2\hbar c}{240a^4}\Big\{1 + \frac{t^4}{3}
        - \frac{16}{3}\frac{\delta_0}{a}\Big[1 - \frac{45\zeta(3)}{8\pi^3}t^3\Big]\Big\}

for :math:`t \ll 1`, and for :math:`t \gg 1`

.. math::
    E = -\frac{k_BT\zeta(3)}{8\pi a^2}\Big(1 - 2\frac{\delta_0}{a}\Big), \qquad
    F = -\frac{k_BT\zeta(3)}{4\pi a^3}\Big(1 - 3\frac{\delta_0}{a}\Big).

Only first order in :math:`\delta_0/a` is kept. Results are SI (J/m^2, Pa).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import (
    ENERGY_DENSITY_SI,
    HBAR_C,
    K_B,
    PRESSURE_SI,
    ZETA3,
    effective_temperature,
)
from .dielectric import DomainError

# validity windows
MAX_DEPTH_RATIO = 0.25
LOW_T_MAX = 0.5
HIGH_T_MIN = 2.0

T0_DEFAULT = 300.0  # K, comparison temperature for relative corrections


@dataclass(frozen=True)
class PlasmaAsymptoticsInput:
    a: float  # um
    T: float  # K
    omega_p: float  # eV; math.inf gives the ideal metal

    def __post_init__(self):
        if not self.a > 0:
            raise DomainError("a must be positive")
        if not self.T >= 0:
            raise DomainError("T must be non-negative")
        if not self.omega_p > 0:
            raise DomainError("omega_p must be positive")

    @property
    def delta0(self):
        """Penetration depth c / omega_p in um."""
        return HBAR_C / self.omega_p

    @property
    def t(self):
        return self.T / effective_temperature(self.a)


def _check_depth(inp):
    if not inp.delta0 / inp.a < MAX_DEPTH_RATIO:
        raise DomainError(f"delta0/a = {inp.delta0 / inp.a:.3g} violates delta0/a < {MAX_DEPTH_RATIO}")


def _check_low(inp):
    _check_depth(inp)
    if not inp.t < LOW_T_MAX:
        raise DomainError(f"t = T/T_eff = {inp.t:.3g} violates t < {LOW_T_MAX}")


def _check_high(inp):
    _check_depth(inp)
    if not inp.t > HIGH_T_MIN:
        raise DomainError(f"t = T/T_eff = {inp.t:.3g} violates t > {HIGH_T_MIN}")


def low_T_energy_plasma(inp):
    """Low-temperature free energy per area (J/m^2)."""
    _check_low(inp)
    t, d, a = inp.t, inp.delta0 / inp.a, inp.a
    c3 = 45.0 * ZETA3 / math.pi**3
    bracket = 1 + c3 * t**3 - t**4 - 4 * d * (1 - 0.5 * c3 * t**3 + t**4)
    return -math.pi**2 * HBAR_C / (720.0 * a**3) * bracket * ENERGY_DENSITY_SI


def low_T_force_plasma(inp):
    """Low-temperature pressure (Pa)."""
    _check_low(inp)
    t, d, a = inp.t, inp.delta0 / inp.a, inp.a
    c3 = 45.0 * ZETA3 / math.pi**3
    bracket = 1 + t**4 / 3 - 16.0 / 3 * d * (1 - c3 / 8 * t**3)
    return -math.pi**2 * HBAR_C / (240.0 * a**4) * bracket * PRESSURE_SI


def high_T_limits_plasma(inp):
    """High-temperature (energy per area in J/m^2, pressure in Pa)."""
    _check_high(inp)
    kT, d, a = K_B * inp.T, inp.delta0 / inp.a, inp.a
    energy = -kT * ZETA3 / (8 * math.pi * a**2) * (1 - 2 * d)
    pressure = -kT * ZETA3 / (4 * math.pi * a**3) * (1 - 3 * d)
    return energy * ENERGY_DENSITY_SI, pressure * PRESSURE_SI


def ideal_high_T_energy(a, T):
    """Leading high-temperature free energy of ideal-metal plates (J/m^2)."""
    return -K_B * T * ZETA3 / (8 * math.pi * a**2) * ENERGY_DENSITY_SI


def relative_temperature_correction(E_at_T, E_at_0):
    """(E(a, T) - E(a, 0)) / E(a, 0); equal for plate free energy and sphere-plate force."""
    if E_at_0 == 0:
        raise DomainError("zero-temperature energy must be non-zero")
    return (E_at_T - E_at_0) / E_at_0
