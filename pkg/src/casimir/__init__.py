"""Finite-temperature Casimir free energy and force between real-metal and dielectric plates."""

from .asymptotics import (
    PlasmaAsymptoticsInput,
    high_T_limits_plasma,
    low_T_energy_plasma,
    low_T_force_plasma,
    relative_temperature_correction,
)
from .dielectric import (
    ConstantDielectric,
    DimlessPoint,
    DomainError,
    Drude,
    IdealMetal,
    MatsubaraPoint,
    Plasma,
    Prescription,
    ReflectionPair,
    permittivity,
    real_photon_reflection,
    reflection_pair,
    scattering_s11,
    zero_frequency_reflection,
)
from .lifshitz import (
    EnergyResult,
    EntropyResult,
    PlatesConfig,
    entropy_plates,
    force_plates,
    force_plates_zero_temperature,
    force_sphere_plate,
    free_energy_plates,
    free_energy_plates_zero_temperature,
    matsubara_xi,
)
from .quadrature import ConvergenceError, QuadratureSettings

__version__ = "0.1.0"

__all__ = [
    "ConstantDielectric",
    "ConvergenceError",
    "DimlessPoint",
    "DomainError",
    "Drude",
    "EnergyResult",
    "EntropyResult",
    "IdealMetal",
    "MatsubaraPoint",
    "Plasma",
    "PlasmaAsymptoticsInput",
    "PlatesConfig",
    "Prescription",
    "QuadratureSettings",
    "ReflectionPair",
    "entropy_plates",
    "force_plates",
    "force_plates_zero_temperature",
    "force_sphere_plate",
    "free_energy_plates",
    "free_energy_plates_zero_temperature",
    "high_T_limits_plasma",
    "low_T_energy_plasma",
    "low_T_force_plasma",
    "matsubara_xi",
    "permittivity",
    "real_photon_reflection",
    "reflection_pair",
    "relative_temperature_correction",
    "scattering_s11",
    "zero_frequency_reflection",
]
