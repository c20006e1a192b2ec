"""Sign of the mixed derivatives over the strip, and how much room there is.

Prints a coarse character map of theta_xy(1; z) on 0 < x < 1/2 (columns) and
0.6 <= y <= 2.4 (rows, top = large y), then certifies the sign on a full grid
and reports the worst margin.  The margins shrink like e^{-pi y} up the strip
and vanish towards x = 0 and x = 1/2, yet stay far above the error bounds.
"""
import numpy as np

from thetazeta import GridSpec, Region, certify_sign, theta_xy, zeta_xy


def char_map(fn, param, nx=40, ny=12):
    xs = np.linspace(0.0, 0.5, nx)
    rows = []
    for y in np.linspace(2.4, 0.6, ny):
        r = fn(param, xs + 1j * y)
        line = "".join("0" if abs(v) <= e else ("+" if v > 0 else "-")
                       for v, e in zip(r.value, r.err))
        rows.append(f"y={y:4.2f} |{line}|")
    return "\n".join(rows)


def main():
    print("theta_xy(1; x + iy), x from 0 to 1/2:")
    print(char_map(theta_xy, 1.0))
    print("\nzeta_xy(2; x + iy):")
    print(char_map(zeta_xy, 2.0))

    strip = Region("strip", 0.6, 10.0)
    for deriv, params in (("theta_xy", [0.5, 1.0, 2.0, 4.0]), ("zeta_xy", [1.5, 2.0, 4.0])):
        for c in certify_sign(strip, deriv, params, +1, grid=GridSpec(40, 40)):
            p = next(iter(c.params.values()))
            print(f"{deriv}({p:g}) > 0: {'certified' if c.passed else 'NOT certified'}; "
                  f"worst margin {c.worst_margin:.3e} at ({c.worst_point[0]:.3f}, {c.worst_point[1]:.3f}), "
                  f"min margin/err {c.min_ratio:.2e}")


if __name__ == "__main__":
    main()
