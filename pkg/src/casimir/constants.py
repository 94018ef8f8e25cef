"""Physical constants in the eV / micrometre / kelvin unit system used internally."""

import math

HBAR_C = 0.1973269804  # eV um
K_B = 8.617333262e-5  # eV / K
HBAR = 6.582119569e-16  # eV s
EV = 1.602176634e-19  # J

ZETA3 = 1.2020569031595943

# eV/um^2 -> J/m^2 and eV/um^3 -> Pa
ENERGY_DENSITY_SI = EV / 1e-12
PRESSURE_SI = EV / 1e-18
UM = 1e-6  # m


def effective_temperature(a):
    """Temperature scale k_B T_eff = hbar c / (2a), in K, for a gap ``a`` in um."""
    return HBAR_C / (2.0 * a * K_B)


def ideal_energy_zero_T(a):
    """Ideal-metal zero-temperature free energy per area in eV/um^2."""
    return -math.pi**2 * HBAR_C / (720.0 * a**3)


def ideal_pressure_zero_T(a):
    """Ideal-metal zero-temperature pressure in eV/um^3."""
    return -math.pi**2 * HBAR_C / (240.0 * a**4)
