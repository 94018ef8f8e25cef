r"""Dielectric models on the imaginary frequency axis and the plate reflection coefficients.

Frequencies are given as photon energies :math:`\hbar\xi` in eV, lengths in um.
Coefficients are evaluated in the dimensionless variables

.. math::
    x = 2a\xi/c, \qquad y = 2aq = 2a\sqrt{\xi^2/c^2 + k_\perp^2},

so that :math:`y \ge x \ge 0`. Every model is reduced to the single function
:math:`d(x) = x^2[\varepsilon(ix) - 1]`, which gives
:math:`\tilde k = \sqrt{y^2 + d}` (the rescaled :math:`2ak_l`).
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import NamedTuple, Union

import numpy as np

from .constants import HBAR, HBAR_C


class DomainError(ValueError):
    """Argument outside the domain where a quantity is defined."""


@dataclass(frozen=True)
class IdealMetal:
    """Perfect conductor, :math:`\\varepsilon = \\infty` at every frequency."""

    @property
    def label(self):
        return "ideal"


@dataclass(frozen=True)
class Plasma:
    omega_p: float  # eV

    def __post_init__(self):
        if not self.omega_p > 0:
            raise DomainError("omega_p must be positive")

    @property
    def label(self):
        return f"plasma:{self.omega_p:g}"


@dataclass(frozen=True)
class Drude:
    omega_p: float  # eV
    gamma: float  # eV

    def __post_init__(self):
        if not self.omega_p > 0:
            raise DomainError("omega_p must be positive")
        if not self.gamma >= 0:
            raise DomainError("gamma must be non-negative")

    @property
    def label(self):
        return f"drude:{self.omega_p:g},{self.gamma:g}"


@dataclass(frozen=True)
class ConstantDielectric:
    eps0: float

    def __post_init__(self):
        if not self.eps0 >= 1:
            raise DomainError("eps0 must be >= 1")

    @property
    def label(self):
        return f"dielectric:{self.eps0:g}"


DielectricModel = Union[IdealMetal, Plasma, Drude, ConstantDielectric]


class Prescription(str, enum.Enum):
    """How the zero-frequency (l = 0) term of the Matsubara sum is built.

    ``AS_IS``
        direct xi -> 0 limit of the reflection coefficients of the model.
    ``IDEAL_METAL``
        both coefficients set to one, as for a perfect conductor, whatever the model.
    ``MODIFIED``
        TM coefficient one, TE coefficient taken on the diagonal x = y; this
        keeps the Drude result continuous in gamma and reduces to ``AS_IS``
        for non-dissipative models.
    """

    AS_IS = "as-is"
    IDEAL_METAL = "ideal-metal"
    MODIFIED = "modified"


class ReflectionPair(NamedTuple):
    r1_sq: float  # TM / parallel
    r2_sq: float  # TE / perpendicular


class DimlessPoint(NamedTuple):
    x: float
    y: float


class MatsubaraPoint(NamedTuple):
    l: int
    xi: float  # rad/s

    @property
    def hbar_xi(self):
        """Photon energy in eV."""
        return self.xi * HBAR


def normalized(model):
    """Route a collisionless Drude model to the plasma code path."""
    if isinstance(model, Drude) and model.gamma == 0:
        return Plasma(model.omega_p)
    return model


def permittivity(model, xi):
    """Permittivity :math:`\\varepsilon(i\\xi)` at photon energy ``xi`` (eV).

    Returns ``math.inf`` for :class:`IdealMetal`.
    """
    if xi < 0:
        raise DomainError("xi must be non-negative")
    model = normalized(model)
    if isinstance(model, IdealMetal):
        return math.inf
    if isinstance(model, ConstantDielectric):
        return float(model.eps0)
    if xi == 0:
        raise DomainError(
            "zero-frequency permittivity is singular; use zero_frequency_reflection"
        )
    if isinstance(model, Plasma):
        return 1.0 + model.omega_p**2 / xi**2
    return 1.0 + model.omega_p**2 / (xi * (xi + model.gamma))


def _d_of_x(model, a, x):
    """x^2 (eps(i xi) - 1) at xi = x c / 2a, vectorised over ``x``."""
    if isinstance(model, Plasma):
        w = 2.0 * a * model.omega_p / HBAR_C
        return np.full_like(x, w * w)
    if isinstance(model, Drude):
        w = 2.0 * a * model.omega_p / HBAR_C
        g = 2.0 * a * model.gamma / HBAR_C
        return w * w * x / (x + g)
    return (model.eps0 - 1.0) * x * x


def _coefficients(model, a, x, y):
    """Squared coefficients and their complements ``1 - r^2`` on arrays with ``y >= x > 0``.

    .. math::
        r_2 = -\\frac{d}{(y + \\tilde k)^2}, \\qquad
        r_1 = \\frac{(\\varepsilon - 1)[(\\varepsilon + 1)y^2 - x^2]}{(\\varepsilon y + \\tilde k)^2},

    and ``1 - |r_2| = 2y/(y + k)``, ``1 - r_1 = 2k/(eps y + k)``; no subtraction
    cancels in either form.
    """
    model = normalized(model)
    if isinstance(model, IdealMetal):
        one = np.ones(np.broadcast(x, y).shape)
        zero = np.zeros_like(one)
        return one, one.copy(), zero, zero.copy()
    d = _d_of_x(model, a, x)
    kt = np.sqrt(y * y + d)
    r2 = d / (y + kt) ** 2
    m2 = 2.0 * y / (y + kt)
    em1 = d / (x * x)
    den1 = (em1 + 1.0) * y + kt
    r1 = em1 * ((em1 + 2.0) * y * y - x * x) / den1**2
    m1 = 2.0 * kt / den1
    return r1 * r1, r2 * r2, m1 * (1.0 + r1), m2 * (1.0 + r2)


def reflection_squared(model, a, x, y):
    """Squared TM and TE coefficients on arrays ``x``, ``y`` with ``y >= x > 0``.

    No argument checking; see :func:`reflection_pair` for the checked scalar form.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    r1, r2, _, _ = _coefficients(model, a, x, y)
    return r1, r2


def diagonal_te_squared(model, a, y):
    """TE coefficient squared on the diagonal x = y (the modified zero-frequency rule)."""
    model = normalized(model)
    y = np.asarray(y, dtype=float)
    if isinstance(model, IdealMetal):
        return np.ones_like(y)
    d = _d_of_x(model, a, y)
    r2 = d / (y + np.sqrt(y * y + d)) ** 2
    return r2 * r2


def zero_frequency_squared(model, prescription, a, y):
    """Vectorised l = 0 coefficients; see :func:`zero_frequency_reflection`."""
    model = normalized(model)
    prescription = Prescription(prescription)
    y = np.asarray(y, dtype=float)
    one = np.ones_like(y)
    if prescription is Prescription.IDEAL_METAL or isinstance(model, IdealMetal):
        return one, one.copy()
    if isinstance(model, Plasma):
        # TE limit at xi = 0 equals the diagonal value because d does not depend on x
        return one, diagonal_te_squared(model, a, y)
    if isinstance(model, ConstantDielectric):
        r1 = (model.eps0 - 1.0) / (model.eps0 + 1.0)
        return one * r1 * r1, np.zeros_like(y)
    if prescription is Prescription.AS_IS:
        return one, np.zeros_like(y)
    return one, diagonal_te_squared(model, a, y)


def reflection_pair(model, a, point):
    """Squared reflection coefficients at a dimensionless point with ``y >= x > 0``.

    Parameters
    ----------
    model : DielectricModel
    a : float
        gap width in um
    point : DimlessPoint or (x, y)

    Returns
    -------
    ReflectionPair
    """
    x, y = point
    if a <= 0:
        raise DomainError("a must be positive")
    if x <= 0:
        raise DomainError("x must be positive; use zero_frequency_reflection for x = 0")
    if y < x:
        raise DomainError("y must be >= x")
    r1, r2 = reflection_squared(model, a, np.array([x]), np.array([y]))
    return ReflectionPair(float(r1[0]), float(r2[0]))


def zero_frequency_reflection(model, prescription, y, a):
    """Squared coefficients used inside the l = 0 integrand at ``y``.

    ============================  ==========================  ====================
    model                         as-is / modified            ideal-metal
    ============================  ==========================  ====================
    IdealMetal                    (1, 1)                      (1, 1)
    Plasma                        (1, r_TE(y)) both rules     (1, 1)
    ConstantDielectric            (((e-1)/(e+1))^2, 0)        (1, 1)
    Drude, as-is                  (1, 0)                      (1, 1)
    Drude, modified               (1, r_TE^2(x=y, y))         (1, 1)
    ============================  ==========================  ====================
    """
    if y <= 0:
        raise DomainError("y must be positive")
    if a <= 0:
        raise DomainError("a must be positive")
    r1, r2 = zero_frequency_squared(model, prescription, a, np.array([y]))
    return ReflectionPair(float(r1[0]), float(r2[0]))


def real_photon_reflection(eps0):
    """Normal-incidence reflectivity ((sqrt(eps0)-1)/(sqrt(eps0)+1))^2 of a real photon."""
    if not eps0 >= 1:
        raise DomainError("eps0 must be >= 1")
    n = math.sqrt(eps0)
    return ((n - 1.0) / (n + 1.0)) ** 2


def scattering_s11(model, a, xi, k_perp):
    """Scattering-matrix elements (s11_parallel, s11_perpendicular) of the two-plate problem.

    Parameters
    ----------
    model : DielectricModel
    a : float
        gap width, um
    xi : float
        photon energy, eV; must be positive
    k_perp : float
        transverse wave number, 1/um

    Used as an independent route to the log-terms of the free energy:
    ``-ln s11 - (q - k) a - ln((q + k)^2 / 4kq) == ln(1 - r^2 exp(-2aq))``.
    """
    model = normalized(model)
    if a <= 0:
        raise DomainError("a must be positive")
    if xi <= 0:
        raise DomainError("scattering solution undefined at zero frequency")
    if k_perp < 0:
        raise DomainError("k_perp must be non-negative")
    if isinstance(model, IdealMetal):
        raise DomainError("scattering solution undefined for infinite permittivity")
    eps = permittivity(model, xi)
    if eps == 1.0:
        raise DomainError("scattering solution undefined when q = k (eps = 1)")
    kv = xi / HBAR_C
    q = math.sqrt(kv * kv + k_perp * k_perp)
    k = math.sqrt(eps * kv * kv + k_perp * k_perp)
    damp = math.exp(-2.0 * q * a)
    grow = math.exp((k - q) * a)
    s_par = 4.0 * eps * k * q * grow / ((eps * q + k) ** 2 - (eps * q - k) ** 2 * damp)
    s_perp = 4.0 * k * q * grow / ((q + k) ** 2 - (q - k) ** 2 * damp)
    return s_par, s_perp
