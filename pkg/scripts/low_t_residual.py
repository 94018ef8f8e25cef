"""Gap between the low-temperature plasma closed forms and the full Matsubara sum.

The closed forms keep only the first order in the penetration depth ratio
delta0/a, so the residual should be almost temperature independent and scale
as (delta0/a)^2. The fitted coefficients are printed at the end.
"""

import argparse

import numpy as np

from casimir.asymptotics import PlasmaAsymptoticsInput, low_T_energy_plasma, low_T_force_plasma
from casimir.constants import HBAR_C, effective_temperature
from casimir.dielectric import Plasma
from casimir.lifshitz import PlatesConfig, force_plates, free_energy_plates
from casimir.quadrature import QuadratureSettings


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--omega-p", type=float, default=12.5)
    p.add_argument("--a", type=float, nargs="+", default=[0.32, 0.5, 1, 2, 3.2, 5])
    p.add_argument("--t", type=float, nargs="+", default=[0.02, 0.05, 0.1])
    args = p.parse_args()

    quad = QuadratureSettings(rel_tol=1e-12, matsubara_tail_tol=1e-14)
    model = Plasma(args.omega_p)
    ratios, de, df = [], [], []
    print(f"{'a_um':>6} {'t':>6} {'delta0/a':>9} {'dE_rel':>11} {'dF_rel':>11}")
    for a in args.a:
        d = HBAR_C / args.omega_p / a
        for t in args.t:
            T = t * effective_temperature(a)
            inp = PlasmaAsymptoticsInput(a, T, args.omega_p)
            cfg = PlatesConfig(a, T)
            e = free_energy_plates(cfg, model, quad=quad).value / low_T_energy_plasma(inp) - 1
            f = force_plates(cfg, model, quad=quad) / low_T_force_plasma(inp) - 1
            print(f"{a:6.3g} {t:6.3g} {d:9.4f} {e:11.3e} {f:11.3e}")
            ratios.append(d)
            de.append(e)
            df.append(f)
    r2 = np.array(ratios) ** 2
    print(f"dE_rel ~ {np.linalg.lstsq(r2[:, None], de, rcond=None)[0][0]:.2f} (delta0/a)^2")
    print(f"dF_rel ~ {np.linalg.lstsq(r2[:, None], df, rcond=None)[0][0]:.2f} (delta0/a)^2")


if __name__ == "__main__":
    main()
