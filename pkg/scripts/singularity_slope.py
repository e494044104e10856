"""Near-diagonal behaviour of the Abel-summed kernel on S^2.

Prints the table for each index, the fitted log-log slope next to 2s - 2, and
for the critical index the residuals of the power-law and log-log fits.

    python scripts/singularity_slope.py [--s 0.5 0.75 1.0]
"""
import argparse

import numpy as np

from spectral_rkhs import verification


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--s", type=float, nargs="+", default=[0.5, 0.75, 1.0])
    args = p.parse_args()
    for s in args.s:
        sep, val, err = verification.singularity_table(s)
        print(f"s = {s}")
        print(f"  {'separation':>12} {'K_s':>14} {'aitken cauchy':>14}")
        for a, b, c in zip(sep, val, err):
            print(f"  {a:12.4e} {b:14.8g} {c:14.3e}")
        x, y = np.log(sep), np.log(np.abs(val))
        slope, r_pow = verification._fit(x, y)
        print(f"  slope {slope:.4f}   predicted {2 * s - 2:.4f}")
        if s == 1.0:
            _, r_log = verification._fit(np.log(np.abs(x)), y)
            print(f"  residuals: power fit {r_pow:.3e}, log|log| fit {r_log:.3e}")


if __name__ == "__main__":
    main()
