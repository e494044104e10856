"""Index-1/2 circle kernel: finite off the diagonal, unbounded toward it.

The closed form 1 - log(2 sin(d/2)) / pi is evaluated from log d, so the
separations can go far below the float range; a few Abel sums at moderate
separations confirm it against the series.

    python scripts/counterexample.py
"""
import math

import numpy as np

from spectral_rkhs import kernels
from spectral_rkhs.kernels import AbelPolicy, Sobolev
from spectral_rkhs.spectra import Circle


def main():
    print(f"{'log separation':>16} {'K_1/2':>12}")
    for k in (1, 10, 100, 1000, 2000):
        ld = -math.pi * k
        print(f"{ld:16.2f} {float(kernels.circle_half_kernel_from_log(ld)):12.4f}")
    delta = np.array([1.0, 0.1, 0.01, 0.001])
    pol = AbelPolicy(tuple(1 - 2.0**-j for j in range(3, 19)), tol=1e-3)
    res = kernels.abel_kernel(Circle(), Sobolev(0.5, "riesz"), 0.0, delta, pol)
    closed = kernels.sobolev_closed_circle(0.5, 0.0, delta)
    print(f"\n{'separation':>12} {'abel':>12} {'closed':>12} {'cauchy':>10}")
    for d, a, c, e in zip(delta, res.value, closed, res.error):
        print(f"{d:12.4g} {a:12.8f} {c:12.8f} {e:10.2e}")
    try:
        kernels.sobolev_kernel(Circle(), Sobolev(0.5, "riesz"), 1.0, 1.0)
    except kernels.DivergenceError as exc:
        print(f"\ndiagonal: {type(exc).__name__}: {exc}")


if __name__ == "__main__":
    main()
