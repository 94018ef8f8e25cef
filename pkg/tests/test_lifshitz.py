import math
import warnings

import mpmath as mp
import numpy as np
import pytest
from scipy import integrate

from casimir.constants import (
    HBAR_C,
    K_B,
    PRESSURE_SI,
    effective_temperature,
    ideal_energy_zero_T,
    ideal_pressure_zero_T,
)
from casimir.dielectric import ConstantDielectric, DomainError, Drude, IdealMetal, Plasma
from casimir.lifshitz import (
    PlatesConfig,
    entropy_plates,
    force_plates,
    force_plates_result,
    force_plates_zero_temperature,
    force_sphere_plate,
    free_energy,
    free_energy_plates,
    free_energy_plates_zero_temperature,
    matsubara_x,
    matsubara_xi,
)
from casimir.quadrature import ConvergenceError, QuadratureSettings

AL_PLASMA = Plasma(12.5)
AL_DRUDE = Drude(12.5, 0.063)
EPS7 = ConstantDielectric(7.0)
ROOM = PlatesConfig(1.0, 300.0)


def closed_energy(a):
    """-pi^2 hbar c / (720 a^3) in J/m^2, evaluated with mpmath."""
    hc = mp.mpf("0.1973269804") * mp.mpf("1.602176634e-19") * mp.mpf("1e-6")
    return float(-mp.pi**2 * hc / (720 * (mp.mpf(a) * mp.mpf("1e-6")) ** 3))


def closed_force(a):
    hc = mp.mpf("0.1973269804") * mp.mpf("1.602176634e-19") * mp.mpf("1e-6")
    return float(-mp.pi**2 * hc / (240 * (mp.mpf(a) * mp.mpf("1e-6")) ** 4))


class TestMatsubara:
    def test_zero_index(self):
        assert matsubara_xi(0, 300.0).xi == 0.0

    def test_first_frequency_at_room_temperature(self):
        oracle = 2 * mp.pi * mp.mpf("8.617333262e-5") * 300
        assert matsubara_xi(1, 300.0).hbar_xi == pytest.approx(float(oracle), rel=1e-12)
        assert matsubara_xi(1, 300.0).hbar_xi == pytest.approx(0.1624, abs=5e-5)

    def test_effective_temperature(self):
        oracle = mp.mpf("0.1973269804") / (2 * mp.mpf("8.617333262e-5"))
        assert effective_temperature(1.0) == pytest.approx(float(oracle), rel=1e-14)
        assert effective_temperature(1.0) == pytest.approx(1145, abs=1)

    def test_dimensionless(self):
        a, T = 0.7, 123.0
        xi = matsubara_xi(3, T).hbar_xi
        assert matsubara_x(3, T, a) == pytest.approx(2 * a * xi / HBAR_C, rel=1e-13)

    @pytest.mark.parametrize("T", [0.0, -1.0])
    def test_requires_positive_T(self, T):
        with pytest.raises(DomainError):
            matsubara_xi(1, T)


class TestConfig:
    @pytest.mark.parametrize("a,T", [(0.0, 1.0), (-1.0, 1.0), (1.0, -1.0)])
    def test_validation(self, a, T):
        with pytest.raises(DomainError):
            PlatesConfig(a, T)

    def test_sum_requires_positive_T(self):
        with pytest.raises(DomainError):
            free_energy_plates(PlatesConfig(1.0, 0.0), AL_PLASMA)


class TestZeroTemperature:
    @pytest.mark.parametrize("a", [0.5, 1.0, 2.0])
    def test_ideal_closed_forms(self, a):
        assert free_energy_plates_zero_temperature(a, IdealMetal()).value == pytest.approx(
            closed_energy(a), rel=1e-12)
        assert force_plates_zero_temperature(a, IdealMetal()) == pytest.approx(
            closed_force(a), rel=1e-12)

    def test_ideal_force_value(self):
        assert force_plates_zero_temperature(1.0, IdealMetal()) == pytest.approx(-1.300e-3, rel=1e-3)

    def test_vacuum_gap(self):
        assert force_plates_zero_temperature(1.0, ConstantDielectric(1.0)) == 0.0

    def test_plasma_against_raw_double_integral(self):
        # pressure in (zeta = xi/c, k_perp) variables, integrated by scipy
        a, wc = 1.0, 12.5 / HBAR_C

        def integrand(k, zeta):
            q = math.hypot(zeta, k)
            kl = math.sqrt(q * q + wc * wc)
            eps = 1.0 + (wc / zeta) ** 2 if zeta > 0 else math.inf
            e = math.exp(-2 * q * a)
            r1 = ((eps * q - kl) / (eps * q + kl)) ** 2 if zeta > 0 else 1.0
            r2 = ((q - kl) / (q + kl)) ** 2
            return k * q * (r1 * e / (1 - r1 * e) + r2 * e / (1 - r2 * e))

        val, _ = integrate.dblquad(integrand, 0, 30, 0, 30, epsabs=0, epsrel=1e-10)
        oracle = -HBAR_C / (2 * math.pi**2) * val * PRESSURE_SI
        got = force_plates_zero_temperature(a, AL_PLASMA)
        assert got == pytest.approx(oracle, rel=1e-6)
        deficit = 1 - got / closed_force(a)
        delta0 = HBAR_C / 12.5
        assert delta0 == pytest.approx(0.0158, abs=1e-4)
        assert deficit == pytest.approx(16 * delta0 / (3 * a), rel=0.1)

    def test_dispatch(self):
        cfg = PlatesConfig(1.0, 0.0)
        assert free_energy(cfg, EPS7).value == free_energy_plates_zero_temperature(1.0, EPS7).value


class TestFreeEnergy:
    def test_drude_without_damping_is_plasma(self):
        for cfg in (ROOM, PlatesConfig(0.3, 50.0)):
            assert free_energy_plates(cfg, Drude(12.5, 0.0)) == free_energy_plates(cfg, AL_PLASMA)

    @pytest.mark.parametrize("model", [IdealMetal(), AL_PLASMA, EPS7])
    def test_prescription_equivalence_without_dissipation(self, model):
        e1 = free_energy_plates(ROOM, model, "as-is").value
        e2 = free_energy_plates(ROOM, model, "modified").value
        assert e2 == pytest.approx(e1, rel=1e-9)

    @pytest.mark.parametrize("model,rule", [(IdealMetal(), "as-is"), (AL_PLASMA, "as-is"),
                                            (AL_PLASMA, "ideal-metal"), (AL_DRUDE, "as-is"),
                                            (AL_DRUDE, "modified"), (EPS7, "as-is")])
    def test_monotone_and_attractive(self, model, rule):
        values = [free_energy_plates(PlatesConfig(a, 300.0), model, rule).value
                  for a in (0.25, 0.5, 1.0, 2.0, 4.0)]
        assert all(v < 0 for v in values)
        mags = np.abs(values)
        assert np.all(np.diff(mags) < 0)

    def test_error_budget_is_positive(self):
        r = free_energy_plates(ROOM, AL_DRUDE)
        assert r.est_error >= 0 and r.terms_used >= 1
        assert r.eV_per_um2 * 1.602176634e-7 == pytest.approx(r.J_per_m2, rel=1e-15)

    def test_drude_room_temperature_correction(self):
        e_t = free_energy_plates(ROOM, AL_DRUDE).value
        e_0 = free_energy_plates_zero_temperature(1.0, AL_DRUDE).value
        assert (e_t - e_0) / e_0 == pytest.approx(-0.17, abs=0.04)

    def test_gamma_discontinuity(self):
        plasma = free_energy_plates(ROOM, AL_PLASMA).value
        weak = Drude(12.5, 1e-6)
        as_is = free_energy_plates(ROOM, weak, "as-is").value
        modified = free_energy_plates(ROOM, weak, "modified").value
        assert abs(modified - plasma) / abs(plasma) < 1e-4
        assert abs(as_is - plasma) / abs(plasma) > 10 * QuadratureSettings().rel_tol

    def test_plasma_approaches_ideal(self):
        cfg = PlatesConfig(1.0, 100.0)
        assert force_plates(cfg, Plasma(1e4)) == pytest.approx(force_plates(cfg, IdealMetal()),
                                                               rel=1e-3)


class TestTruncation:
    def test_too_few_terms_raises_with_partial(self):
        quad = QuadratureSettings(max_terms=5)
        with pytest.raises(ConvergenceError) as info:
            free_energy_plates(PlatesConfig(1.0, 1.0), AL_PLASMA, quad=quad)
        partial = info.value.partial
        assert partial.terms_used == 6
        assert "terms_used" in info.value.diagnostics

    @pytest.mark.parametrize("model", [AL_PLASMA, AL_DRUDE])
    def test_error_estimate_covers_tail(self, model):
        cfg = PlatesConfig(1.0, 30.0)
        loose = QuadratureSettings(matsubara_tail_tol=1e-4)
        r = free_energy_plates(cfg, model, quad=loose)
        more = free_energy_plates(cfg, model, quad=QuadratureSettings(
            matsubara_tail_tol=1e-4, max_terms=2 * r.terms_used))
        tight = free_energy_plates(cfg, model, quad=QuadratureSettings(matsubara_tail_tol=1e-14))
        assert abs(more.value - r.value) <= r.est_error
        assert abs(tight.value - r.value) <= r.est_error


class TestForce:
    def test_ideal_near_zero_temperature(self):
        cfg = PlatesConfig(1.0, 5.0)
        assert force_plates(cfg, IdealMetal()) == pytest.approx(closed_force(1.0), rel=1e-6)

    @pytest.mark.parametrize("model,rule", [(AL_PLASMA, "as-is"), (AL_DRUDE, "modified"),
                                            (AL_DRUDE, "as-is"), (EPS7, "as-is")])
    @pytest.mark.parametrize("a", [0.5, 1.0, 2.0])
    def test_minus_energy_derivative(self, model, rule, a):
        quad = QuadratureSettings(rel_tol=1e-12)
        h = 1e-3 * a

        def e(x):
            return free_energy_plates(PlatesConfig(x, 300.0), model, rule, quad).value

        d = (-e(a + 2 * h) + 8 * e(a + h) - 8 * e(a - h) + e(a - 2 * h)) / (12 * h * 1e-6)
        assert force_plates(PlatesConfig(a, 300.0), model, rule, quad) == pytest.approx(-d, rel=1e-4)

    @pytest.mark.parametrize("model", [IdealMetal(), AL_PLASMA, AL_DRUDE, EPS7])
    @pytest.mark.parametrize("rule", ["as-is", "modified"])
    def test_room_temperature_negligible_at_small_gap(self, model, rule):
        f_t = force_plates(PlatesConfig(0.1, 300.0), model, rule)
        f_0 = force_plates_zero_temperature(0.1, model)
        assert abs(f_t) / abs(f_0) == pytest.approx(1.0, abs=0.01)

    def test_result_view(self):
        r = force_plates_result(ROOM, AL_PLASMA)
        assert r.value == force_plates(ROOM, AL_PLASMA) and r.est_error >= 0


@pytest.mark.slow
class TestDeepLowTemperature:
    def test_ideal_energy_and_force(self):
        cfg = PlatesConfig(1.0, 0.01)
        assert free_energy_plates(cfg, IdealMetal()).value == pytest.approx(closed_energy(1.0),
                                                                            rel=1e-4)
        assert closed_energy(1.0) == pytest.approx(-4.334e-10, rel=1e-3)
        assert force_plates(cfg, IdealMetal()) == pytest.approx(closed_force(1.0), rel=1e-4)

    @pytest.mark.parametrize("model", [AL_PLASMA, AL_DRUDE])
    def test_matches_zero_temperature_route(self, model):
        f_t = force_plates(PlatesConfig(0.5, 0.01), model)
        assert f_t == pytest.approx(force_plates_zero_temperature(0.5, model), rel=1e-3)


class TestSpherePlate:
    def test_ideal_value(self):
        f = force_sphere_plate(100.0, PlatesConfig(1.0, 0.0), IdealMetal())
        assert f == pytest.approx(2 * math.pi * 1e-4 * closed_energy(1.0), rel=1e-10)
        assert f == pytest.approx(-2.72e-13, rel=2e-3)

    def test_linear_in_radius(self):
        f1 = force_sphere_plate(150.0, ROOM, AL_DRUDE)
        f2 = force_sphere_plate(300.0, ROOM, AL_DRUDE)
        assert f2 == 2 * f1

    def test_same_relative_correction_as_energy(self):
        f_t = force_sphere_plate(200.0, ROOM, AL_DRUDE)
        f_0 = force_sphere_plate(200.0, PlatesConfig(1.0, 0.0), AL_DRUDE)
        e_t = free_energy_plates(ROOM, AL_DRUDE).value
        e_0 = free_energy_plates_zero_temperature(1.0, AL_DRUDE).value
        assert (f_t - f_0) / f_0 == pytest.approx((e_t - e_0) / e_0, rel=1e-12)

    def test_warns_for_small_sphere(self):
        with pytest.warns(UserWarning, match="R/a"):
            force_sphere_plate(50.0, ROOM, AL_PLASMA)
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            force_sphere_plate(100.0, ROOM, AL_PLASMA)

    def test_radius_validation(self):
        with pytest.raises(DomainError):
            force_sphere_plate(0.0, ROOM, AL_PLASMA)


class TestEntropy:
    def test_drude_as_is_negative(self):
        assert entropy_plates(ROOM, AL_DRUDE, "as-is").value < 0

    def test_plasma_vanishes_quadratically(self):
        s1 = entropy_plates(PlatesConfig(1.0, 1.0), AL_PLASMA).value
        s2 = entropy_plates(PlatesConfig(1.0, 2.0), AL_PLASMA).value
        assert math.log(s2 / s1) / math.log(2) == pytest.approx(2.0, abs=0.2)

    def test_ideal_metal_rule_leaves_residual_entropy(self):
        s1 = entropy_plates(PlatesConfig(1.0, 1.0), AL_PLASMA, "ideal-metal").value
        s2 = entropy_plates(PlatesConfig(1.0, 2.0), AL_PLASMA, "ideal-metal").value
        assert s1 > 0 and s2 > 0
        assert abs(s2 - s1) / s1 < 0.05

    def test_ideal_metal_rule_entropy_offset(self):
        # the rule only changes the l = 0 term, which is linear in T; the
        # entropy shift is k_B / (16 pi a^2) * (zeta(3) + int y ln(1 - r_TE(0)^2 e^-y))
        a = 1.0
        w = 2 * a * mp.mpf(12.5) / mp.mpf("0.1973269804")

        def te(y):
            k = mp.sqrt(y * y + w * w)
            return y * mp.log(1 - ((y - k) / (y + k)) ** 2 * mp.e ** (-y))

        shift = (mp.mpf("8.617333262e-5") / (16 * mp.pi * a**2)
                 * (mp.zeta(3) + mp.quad(te, [0, 1, 10, mp.inf])) * mp.mpf("1.602176634e-7"))
        cfg = PlatesConfig(a, 1.0)
        s_rule = entropy_plates(cfg, AL_PLASMA, "ideal-metal").value
        s_plain = entropy_plates(cfg, AL_PLASMA, "as-is").value
        assert s_rule - s_plain == pytest.approx(float(shift), rel=1e-3)

    def test_requires_positive_T(self):
        with pytest.raises(DomainError):
            entropy_plates(PlatesConfig(1.0, 0.0), AL_PLASMA)


def test_energy_and_pressure_helpers():
    assert ideal_energy_zero_T(1.0) * 1.602176634e-7 == pytest.approx(closed_energy(1.0), rel=1e-12)
    assert ideal_pressure_zero_T(1.0) * PRESSURE_SI == pytest.approx(closed_force(1.0), rel=1e-12)
    assert K_B == 8.617333262e-5
