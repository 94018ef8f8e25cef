"""Relative temperature corrections of the three reference curves versus gap width.

Writes CSV (default stdout) and prints where the Drude as-is curve changes sign.
"""

import argparse
import sys

from casimir import cli
from casimir.quadrature import QuadratureSettings


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--a-range", type=float, nargs=3, default=(1.0, 5.0, 41),
                   metavar=("MIN", "MAX", "N"))
    p.add_argument("--T0", type=float, default=300.0)
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("-o", "--output")
    args = p.parse_args()

    rows = cli.fig1_rows(cli.grid(args.a_range), args.T0, QuadratureSettings(), args.jobs)
    out = open(args.output, "w", newline="\n") if args.output else sys.stdout
    cli.write_rows(out, rows, cli.FIG1_COLUMNS, "csv")
    if args.output:
        out.close()

    dashed = [(r["a_um"], r["delta_T_drude_asis"]) for r in rows]
    for (a, v), (b, w) in zip(dashed, dashed[1:]):
        if v < 0 <= w:
            root = a + (b - a) * (-v) / (w - v)
            print(f"Drude as-is correction changes sign near a = {root:.2f} um", file=sys.stderr)


if __name__ == "__main__":
    main()
