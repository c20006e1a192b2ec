"""Recompute the numerical constants behind the lower bounds.

Shows each recomputed constant beside its printed four-digit value, the quarter
bound on Q(a; Y) along a, and the one bracket constant that the computation
does not reproduce: epsilon2 at the corner alpha = sqrt(3), y = sqrt(3)/2.
"""
import math

import numpy as np

from thetazeta import Q, bound_suite, epsilon2, bound_constants
from thetazeta.series_bounds import PRINTED_CONSTANTS


def main():
    c = bound_constants()
    print("constant   computed        printed    |diff|")
    for k in sorted(c):
        print(f"{k:8s} {c[k]:12.7f} {PRINTED_CONSTANTS[k]:12.4f} {abs(c[k] - PRINTED_CONSTANTS[k]):10.2e}")

    print("\nmax |Q(a; Y)| over Y in (0, 1/2):")
    Y = np.linspace(0.0, 0.5, 402)[1:-1]
    for a in (2.0, 3.0, 5.0, 10.0, 30.0):
        print(f"  a = {a:5.1f}: {np.max(np.abs(Q(a, Y).value)):.5f}  (bound 0.25)")

    e = epsilon2(math.sqrt(3), math.sqrt(3) / 2)
    print(f"\nepsilon2(sqrt 3, sqrt 3 / 2) = {e.value:.10e} +- {e.err:.1e}  (ceiling 1e-4)")

    rep = bound_suite(alphas=(1.0, 2.0))
    for name, (ok, worst) in rep.checks.items():
        print(f"  {'ok  ' if ok else 'FAIL'} {name:40s} {worst:.6g}")


if __name__ == "__main__":
    main()
