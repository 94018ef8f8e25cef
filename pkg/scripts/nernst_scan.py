"""Low-temperature entropy of plasma-model plates under each zero-frequency rule.

A vanishing entropy with slope ~2 on a log-log scale is consistent with the
heat theorem; a plateau is not.
"""

import argparse

import numpy as np

from casimir.dielectric import Plasma, Prescription
from casimir.lifshitz import PlatesConfig, entropy_plates


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--a", type=float, default=1.0)
    p.add_argument("--omega-p", type=float, default=12.5)
    p.add_argument("--T", type=float, nargs="+", default=[1, 2, 5, 10, 20])
    args = p.parse_args()

    model = Plasma(args.omega_p)
    Ts = np.array(args.T, dtype=float)
    print(f"{'T_K':>8} " + " ".join(f"{r.value:>14}" for r in Prescription))
    table = {r: [] for r in Prescription}
    for T in Ts:
        for r in Prescription:
            table[r].append(entropy_plates(PlatesConfig(args.a, T), model, r).value)
        print(f"{T:8.3g} " + " ".join(f"{table[r][-1]:14.5e}" for r in Prescription))
    for r in Prescription:
        s = np.array(table[r])
        if np.all(s > 0):
            slope = np.polyfit(np.log(Ts), np.log(s), 1)[0]
            print(f"log-log slope, {r.value}: {slope:.3f}")


if __name__ == "__main__":
    main()
