"""Walk theta and zeta energies down to the hexagonal lattice.

Starts from a handful of lattices (square, rectangular, sheared), reduces each
shape into the fundamental domain, then runs the local minimiser.  Every run
ends at e^{i pi/3}, and the energy printed beside it is the smallest value the
family reaches.
"""
import math

from thetazeta import HEXAGONAL, minimize, reduce, theta_direct, zeta_mellin

STARTS = {
    "square": 1j,
    "rectangle 1:3": 3j,
    "sheared": 2.7 + 0.4j,
    "thin": 0.1 + 0.15j,
}


def main():
    print(f"hexagonal point: ({HEXAGONAL.real:.6f}, {HEXAGONAL.imag:.6f})\n")
    for label, z in STARTS.items():
        w, word = reduce(z)
        print(f"{label:14s} z={z!s:>12s}  reduced to ({w.real:.4f}, {w.imag:.4f}) via {' '.join(word) or '(already reduced)'}")
        for fn, p, energy in (("theta", 1.0, theta_direct), ("zeta", 2.0, zeta_mellin)):
            r = minimize(fn, p, z)
            start_val = energy(p, w).value
            print(f"    {fn}({p:g}): {start_val:.10f} -> {r.value:.10f} at "
                  f"({r.point.real:.8f}, {r.point.imag:.8f}) after {r.n_evals} evaluations")
    gap = abs(minimize("theta", 2.0, 0.2 + 1.7j).point - complex(0.5, math.sqrt(3) / 2))
    print(f"\ntheta(2) minimiser distance to hexagonal point: {gap:.1e}")


if __name__ == "__main__":
    main()
