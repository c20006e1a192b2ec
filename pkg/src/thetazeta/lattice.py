r"""Lattice theta and Epstein zeta functions of a unit-area 2-d lattice.

A point ``z = x + iy`` of the upper half plane stands for the lattice
:math:`\Lambda = y^{-1/2}(\mathbb Z \oplus z\mathbb Z)`, so a lattice vector has
squared length :math:`|mz+n|^2/y = (mx+n)^2/y + m^2 y`.

.. math::

    \theta(\alpha;z) = \sum_{(m,n)} e^{-\pi\alpha |mz+n|^2/y}, \qquad
    \zeta(s;z) = \sum_{(m,n)\ne 0} \frac{y^s}{|mz+n|^{2s}}.

Three independent routes are provided:

* direct double sums (and termwise partial derivatives of them),
* the exponential expansion in 1-d theta functions, used for the mixed
  derivatives ``theta_xy`` and ``theta_xyy``,
* for zeta, the Mellin transform of ``theta - 1`` split at ``alpha = 1`` with
  ``theta(1/alpha) = alpha * theta(alpha)``.

Functions accept complex ``z`` (scalar or array) and broadcast ``alpha`` /
``s`` against it where noted.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy import optimize, special

from ._numerics import (DEFAULT_TRUNCATION, EPS, REL_TAIL, InvalidDomain,
                        NotConverged, ToleranceNotMet, Truncation,
                        ValueWithError, gauss_legendre_panels, poly_gauss_tail,
                        rounding_err, vwe)
from .modular import reduce as reduce_point
from .theta1d import (_pick_n, theta1d, theta1d_dX, theta1d_dXXY, theta1d_dXY,
                      theta1d_dY, theta1d_sup)

PI = math.pi

ZETA_TRUNCATION = Truncation(abs_tol=1e-9, max_terms=8192)
# Termwise derivative sums only admit polynomial tail bounds; keep them loose.
ZETA_TERMWISE_TRUNCATION = Truncation(abs_tol=1e-3, max_terms=4096)

_CHUNK = 20_000


def _split(z):
    z = np.asarray(z, dtype=complex)
    x, y = z.real, z.imag
    if not np.all(y > 0):
        raise InvalidDomain("z must lie in the upper half plane (Im z > 0)")
    return x, y


def _flat(*arrays):
    b = np.broadcast_arrays(*[np.asarray(a, dtype=float) for a in arrays])
    return b[0].shape, [a.ravel() for a in b]


def _cell_diameter(x, y):
    """Longer diagonal of the fundamental cell with sides 1/sqrt(y), z/sqrt(y)."""
    return np.maximum(np.hypot(1 + x, y), np.hypot(1 - x, y)) / np.sqrt(y)


def _min_norm2(x, y, skip_m0=False):
    """Squared length of the shortest nonzero lattice vector (or with m != 0)."""
    # m = 1 gives a candidate <= 1/(4y) + y; larger |m| only matter while m^2 y is below it.
    best = 0.25 / y + y
    if not skip_m0:
        best = np.minimum(best, 1.0 / y)
    m_max = int(np.ceil(np.max(np.sqrt(best / y))))
    for m in range(1, min(m_max, 2000) + 1):
        frac = m * x - np.round(m * x)
        best = np.minimum(best, frac * frac / y + m * m * y)
    return best


# -- direct double sums ------------------------------------------------------------

# Majorant of |d^order exp(-E)| / exp(-E) as a polynomial in u = pi*alpha*r^2/y,
# given as {power of u: coefficient (may depend on y)}.
def _theta_majorant(order, y):
    return {
        "": {0: 1.0},
        "x": {1: 2.0},
        "y": {1: 1.0},
        "xy": {1: 2.0 / y, 2: 2.0},
        "xyy": {1: 4.0 / y ** 2, 2: 8.0 / y, 3: 2.0},
    }[order]


def _gauss_disc_tail(R, d, alpha, y, order):
    r"""Bound on the sum of |term| over lattice vectors with |P| > R.

    With :math:`h(r) = \sum_k c_k (\pi\alpha r^2/y)^k e^{-\pi\alpha r^2}` decreasing on
    :math:`[R,\infty)` and :math:`N(r) \le \pi(r+d)^2` (cells of diameter ``d``
    around points within ``r`` fit in the disc of radius ``r+d``),

    .. math::

        \sum_{|P|>R} h(|P|) \le \pi(R+d)^2 h(R) + \int_R^\infty 2\pi(r+d) h(r)\,dr,

    and the integral is a sum of incomplete gamma functions.
    """
    coeffs = _theta_majorant(order, y)
    pa = PI * alpha
    t = pa * R * R
    kmax = max(coeffs)
    h = sum(c * (t / y) ** k for k, c in coeffs.items()) * np.exp(-t)
    integral = 0.0
    for k, c in coeffs.items():
        ck = c * (pa / y) ** k
        for j, w in ((2 * k + 1, 2 * PI), (2 * k, 2 * PI * d)):
            a = 0.5 * (j + 1)
            integral = integral + w * ck * special.gammaincc(a, t) * special.gamma(a) / (
                2.0 * pa ** a)
    bound = PI * (R + d) ** 2 * h + integral
    return np.where(t >= kmax, bound, np.inf)


def _theta_terms(order, alpha, x, y, m, n):
    A = m * x + n
    pa = PI * alpha
    E = pa * (A * A / y + m * m * y)
    t = np.exp(-E)
    if order == "":
        return t
    Ex = 2 * pa * m * A / y
    if order == "x":
        return -Ex * t
    Ey = pa * (m * m - A * A / (y * y))
    if order == "y":
        return -Ey * t
    Exy = -2 * pa * m * A / y ** 2
    if order == "xy":
        return (-Exy + Ex * Ey) * t
    Eyy = 2 * pa * A * A / y ** 3
    Exyy = 4 * pa * m * A / y ** 3
    return (-Exyy + 2 * Exy * Ey + Ex * Eyy - Ex * Ey * Ey) * t


def _direct_theta(order, alpha, x, y, trunc, exclude_origin=False):
    """Flat-array kernel for theta_direct and its termwise partials."""
    d = _cell_diameter(x, y)
    kmax = max(_theta_majorant(order, 1.0))
    lead_r2 = _min_norm2(x, y, skip_m0=order in ("x", "xy", "xyy"))
    # Relative target: the contribution of the shortest relevant vector.
    if order == "" and not exclude_origin:
        lead = np.ones_like(x)
    else:
        lead = 1e-3 * np.exp(-PI * alpha * lead_r2)
    # radius search on t = pi*alpha*R^2
    # The bound exceeds ~e^{-t} on the disc, so no t below -log(target) can
    # succeed; starting a little under it only saves bound evaluations.
    target = np.maximum(np.minimum(trunc.abs_tol, REL_TAIL * lead), 1e-300)
    t0 = max(kmax, 1, int(np.floor(np.min(-np.log(target)))) - 8)
    t_grid = np.concatenate([np.arange(t0, max(t0 + 16, 60), 1.0),
                             np.arange(max(t0 + 16, 60), 2000, 10.0)])
    R = np.full(x.shape, np.nan)
    tail = np.full(x.shape, np.inf)
    todo = np.ones(x.shape, dtype=bool)
    abs_met = np.zeros(x.shape, dtype=bool)
    # evaluate the tail bound on blocks of the t grid at once; first hit wins
    block = 16
    for start in range(0, len(t_grid), block):
        ts = t_grid[start:start + block][:, None]
        Rt = np.sqrt(ts / (PI * alpha[None, :]))
        b = _gauss_disc_tail(Rt, d[None, :], alpha[None, :], y[None, :], order)
        ok_abs = b <= trunc.abs_tol
        ok = ok_abs & ((b <= REL_TAIL * lead[None, :]) | (b < 1e-300))
        for arr_ok, is_final in ((ok_abs, False), (ok, True)):
            hit = arr_ok.any(axis=0)
            first = np.argmax(arr_ok, axis=0)
            cols = np.arange(x.size)
            if is_final:
                sel = todo & hit
                R = np.where(sel, Rt[first, cols], R)
                tail = np.where(sel, b[first, cols], tail)
                todo &= ~sel
            else:
                sel = todo & hit & ~abs_met
                R = np.where(sel, Rt[first, cols], R)
                tail = np.where(sel, b[first, cols], tail)
                abs_met |= hit
        if not todo.any():
            break
    if not abs_met.all():
        raise ToleranceNotMet("direct theta sum: tail bound above abs_tol")
    M = np.ceil(R / np.sqrt(y)).astype(int)
    if M.max() > trunc.max_terms:
        raise ToleranceNotMet(f"direct theta sum needs |m| up to {M.max()} > max_terms")
    value = np.zeros(x.shape)
    abs_sum = np.zeros(x.shape)
    n_terms = 0
    for m in range(-int(M.max()), int(M.max()) + 1):
        half = np.sqrt(np.maximum(R * R - m * m * y, 0.0) * y)
        active = (abs(m) <= M)
        if not active.any():
            continue
        J = int(np.ceil(half[active].max())) + 1
        c = np.round(-m * x)
        j = np.arange(-J, J + 1, dtype=float)[:, None]
        n = c[None, :] + j
        terms = _theta_terms(order, alpha[None, :], x[None, :], y[None, :], m, n)
        if exclude_origin and m == 0:
            terms = np.where(n == 0, 0.0, terms)
        terms = np.where(active[None, :], terms, 0.0)
        value += terms.sum(axis=0)
        abs_sum += np.abs(terms).sum(axis=0)
        n_terms += 2 * J + 1
    return value, tail + rounding_err(abs_sum, n_terms)


def _check_alpha(alpha):
    if not np.all(np.asarray(alpha) > 0):
        raise InvalidDomain("alpha must be positive")


def theta_direct(alpha, z, trunc: Truncation | None = None,
                 exclude_origin: bool = False) -> ValueWithError:
    """theta(alpha; z) by direct summation over the lattice.

    Every vector with squared length ``<= R^2`` is summed; ``R`` is chosen so
    the disc-tail bound of :func:`_gauss_disc_tail` is below ``abs_tol``.
    ``exclude_origin=True`` returns ``theta - 1`` without cancellation.
    """
    _check_alpha(alpha)
    trunc = DEFAULT_TRUNCATION if trunc is None else trunc
    x, y = _split(z)
    shape, arrs = _flat(alpha, x, y)
    return _chunked_direct("", shape, arrs, trunc, exclude_origin)


def _chunked_direct(order, shape, arrs, trunc, exclude_origin=False):
    n = arrs[0].size
    val = np.empty(n)
    err = np.empty(n)
    for i in range(0, n, _CHUNK):
        sl = slice(i, i + _CHUNK)
        val[sl], err[sl] = _direct_theta(order, arrs[0][sl], arrs[1][sl], arrs[2][sl],
                                         trunc, exclude_origin)
    return vwe(val.reshape(shape), err.reshape(shape))


def theta_partial_direct(alpha, z, order: str, trunc: Truncation | None = None) -> ValueWithError:
    """Termwise partial derivative of the direct sum; ``order`` in x, y, xy, xyy."""
    if order not in ("x", "y", "xy", "xyy"):
        raise ValueError(f"unsupported order {order!r}")
    _check_alpha(alpha)
    trunc = DEFAULT_TRUNCATION if trunc is None else trunc
    x, y = _split(z)
    shape, arrs = _flat(alpha, x, y)
    return _chunked_direct(order, shape, arrs, trunc)


def theta_x(alpha, z, trunc: Truncation | None = None, method: str = "expansion") -> ValueWithError:
    r""":math:`\partial_x\theta(\alpha;z) = 2\sqrt{y/\alpha}\sum_{n\ge1} n e^{-\pi\alpha y n^2}
    \vartheta_Y(y/\alpha; nx)`; ``method="direct"`` differentiates the double sum instead."""
    if method == "direct":
        return theta_partial_direct(alpha, z, "x", trunc)
    return _expansion("x", alpha, z, trunc)


def theta_y(alpha, z, trunc: Truncation | None = None, method: str = "expansion") -> ValueWithError:
    r""":math:`\partial_y\theta(\alpha;z)` from the y-derivative of the expansion
    (needs theta and theta_X); ``method="direct"`` differentiates the double sum."""
    if method == "direct":
        return theta_partial_direct(alpha, z, "y", trunc)
    return _expansion("y", alpha, z, trunc)


# -- exponential expansions ----------------------------------------------------------

def _expansion_coeffs(order, alpha, y):
    """Per-n coefficient polynomials {derivative kind: {power of n: coeff}}.

    kind 0: theta, 1: theta_Y, 2: theta_XY, 3: theta_XXY, 4: theta_X, all at
    (y/alpha; n x).  Every term carries exp(-pi alpha y n^2) in addition.
    """
    ra, ry = np.sqrt(alpha), np.sqrt(y)
    if order == "":
        return {0: {0: 2.0 * ry / ra}}
    if order == "x":
        return {1: {1: 2.0 * ry / ra}}
    if order == "y":
        return {
            0: {0: 1.0 / (ra * ry), 2: -2 * PI * ra * ry},
            4: {0: 2.0 * ry / (alpha * ra)},
        }
    if order == "xy":
        return {
            1: {1: 1.0 / (ra * ry), 3: -2 * PI * ra * ry},
            2: {1: 2.0 * ry / alpha / ra},
        }
    if order == "xyy":
        return {
            1: {1: -0.5 / (ra * y * ry), 3: -2 * PI * ra / ry, 5: 2 * PI ** 2 * alpha * ra * ry},
            2: {1: 2.0 / (alpha * ra * ry), 3: -4 * PI * ry / ra},
            3: {1: 2.0 * ry / (alpha * alpha * ra)},
        }
    raise ValueError(order)


def _zero_term(order, alpha, y):
    """Coefficients of the n = 0 term, {kind: coeff} with the 1-d functions at (y/alpha; 0).

    Odd-in-Y kinds vanish at Y = 0, so only theta and its y-derivative have one.
    """
    ra, ry = np.sqrt(alpha), np.sqrt(y)
    if order == "":
        return {0: ry / ra}
    if order == "y":
        return {0: 0.5 / (ra * ry), 4: ry / (alpha * ra)}
    return {}


_THETA1D = {0: theta1d, 1: theta1d_dY, 2: theta1d_dXY, 3: theta1d_dXXY, 4: theta1d_dX}


def _expansion_kernel(order, alpha, x, y, trunc):
    X = y / alpha
    beta = PI * alpha * y
    coeffs = _expansion_coeffs(order, alpha, y)
    sups = {k: theta1d_sup(k, X) for k in coeffs}
    majorant = {}
    for k, poly in coeffs.items():
        for p, c in poly.items():
            majorant[p] = majorant.get(p, 0.0) + np.abs(c) * sups[k]

    def term(nv, vals):
        out = 0.0
        for k, poly in coeffs.items():
            out = out + sum(c * nv ** p for p, c in poly.items()) * vals[k]
        return out * np.exp(-beta * nv * nv)

    first = {k: _THETA1D[k](X, x, trunc) for k in coeffs}
    maj1 = sum(majorant.values()) * np.exp(-beta)
    lead = np.maximum(np.abs(term(1.0, {k: r.value for k, r in first.items()})), 1e-12 * maj1)
    N, tail = _pick_n(lambda N: poly_gauss_tail(N + 1, majorant, beta), lead, trunc)

    n = np.arange(1, N + 1, dtype=float)[:, None]
    vals, errs = {}, {}
    for k in coeffs:
        if N > 1:
            r = _THETA1D[k](X[None, :], n[1:] * x[None, :], trunc)
            vals[k] = np.concatenate([first[k].value[None, :], r.value])
            errs[k] = np.concatenate([first[k].err[None, :], r.err])
        else:
            vals[k], errs[k] = first[k].value[None, :], first[k].err[None, :]
    terms = term(n, vals)
    gauss = np.exp(-beta * n * n)
    prop = 0.0
    for k, poly in coeffs.items():
        prop = prop + sum(np.abs(c) * n ** p for p, c in poly.items()) * errs[k] * gauss
    value = terms.sum(axis=0)
    err = tail + prop.sum(axis=0) + rounding_err(np.abs(terms).sum(axis=0), N)
    for k, c0 in _zero_term(order, alpha, y).items():
        t0 = _THETA1D[k](X, 0.0, trunc)
        value = value + c0 * t0.value
        err = err + np.abs(c0) * t0.err
    return value, err + 2 * EPS * np.abs(value)


def _expansion(order, alpha, z, trunc):
    _check_alpha(alpha)
    trunc = DEFAULT_TRUNCATION if trunc is None else trunc
    x, y = _split(z)
    shape, (a, xf, yf) = _flat(alpha, x, y)
    nn = a.size
    val = np.empty(nn)
    err = np.empty(nn)
    for i in range(0, nn, _CHUNK):
        sl = slice(i, i + _CHUNK)
        val[sl], err[sl] = _expansion_kernel(order, a[sl], xf[sl], yf[sl], trunc)
    return vwe(val.reshape(shape), err.reshape(shape))


def theta_expansion(alpha, z, trunc: Truncation | None = None) -> ValueWithError:
    r"""theta(alpha; z) via the expansion in 1-d theta functions:

    .. math::

        \theta = \sqrt{y/\alpha}\,\vartheta(y/\alpha; 0)
               + 2\sqrt{y/\alpha}\sum_{n\ge1} e^{-\pi\alpha y n^2}\vartheta(y/\alpha; nx)
    """
    return _expansion("", alpha, z, trunc)


def theta_xy(alpha, z, trunc: Truncation | None = None) -> ValueWithError:
    r"""Mixed derivative :math:`\partial_x\partial_y\theta(\alpha;z)` from the expansion

    .. math::

        \sum_{n\ge1}\Big[(\alpha^{-1/2}y^{-1/2}n - 2\pi\alpha^{1/2}y^{1/2}n^3)\vartheta_Y
        + 2\alpha^{-3/2}y^{1/2}n\,\vartheta_{XY}\Big] e^{-\pi\alpha y n^2}

    with the 1-d functions evaluated at ``(y/alpha; n x)``.
    """
    return _expansion("xy", alpha, z, trunc)


def theta_xyy(alpha, z, trunc: Truncation | None = None) -> ValueWithError:
    r""":math:`\partial_x\partial_y^2\theta(\alpha;z)`; the y-derivative of the
    :func:`theta_xy` series taken term by term (six sums in theta_Y, theta_XY and
    theta_XXY)."""
    return _expansion("xyy", alpha, z, trunc)


# -- Epstein zeta ---------------------------------------------------------------------

def _check_s(s):
    if not np.all(np.asarray(s) > 1):
        raise InvalidDomain("s must exceed 1")


def _zeta_radial_err(R, s, d):
    """Error of the disc sum plus the integral tail pi R^(2-2s)/(s-1).

    With N(r) the number of nonzero vectors within r, |N(r) - pi r^2| <=
    pi(2rd + d^2); integrating r^(-2s) against that discrepancy gives
    ``2 pi d R^(1-2s) (1 + 2s/(2s-1)) + 2 pi d^2 R^(-2s)``.
    """
    return 2 * PI * d * R ** (1 - 2 * s) * (1 + 2 * s / (2 * s - 1)) + 2 * PI * d * d * R ** (-2 * s)


def zeta_direct(s: float, z: complex, trunc: Truncation | None = None) -> ValueWithError:
    """zeta(s; z) by summing all nonzero vectors in a disc of radius R.

    The exterior is replaced by its integral ``pi R^(2-2s)/(s-1)``; the
    reported error is the lattice-point discrepancy bound of
    :func:`_zeta_radial_err`.  For ``s < 1.25`` convergence is too slow and the
    call is delegated to :func:`zeta_mellin` with a warning.
    """
    _check_s(s)
    s = float(s)
    trunc = ZETA_TRUNCATION if trunc is None else trunc
    if s < 1.25:
        warnings.warn("zeta_direct converges slowly for s < 1.25; using zeta_mellin",
                      RuntimeWarning, stacklevel=2)
        return zeta_mellin(s, z)
    x, y = _split(z)
    x, y = float(x), float(y)
    d = float(_cell_diameter(x, y))
    R = max(2 * d, 4.0)
    while _zeta_radial_err(R, s, d) > 0.5 * trunc.abs_tol:
        R *= 1.1
        if R / math.sqrt(y) > trunc.max_terms:
            raise ToleranceNotMet(
                f"zeta_direct: radius {R:.0f} exceeds max_terms={trunc.max_terms}")
    M = int(math.floor(R / math.sqrt(y)))
    total = 0.0
    abs_total = 0.0
    count = 0
    for m in range(-M, M + 1):
        rem = R * R - m * m * y
        if rem < 0:
            continue
        half = math.sqrt(rem * y)
        lo, hi = math.ceil(-m * x - half), math.floor(-m * x + half)
        n = np.arange(lo, hi + 1, dtype=float)
        A = m * x + n
        r2 = A * A / y + m * m * y
        if m == 0:
            r2 = r2[n != 0]
        row = r2 ** (-s)
        total += row.sum()
        count += row.size
    abs_total = total
    tail = PI * R ** (2 - 2 * s) / (s - 1)
    err = _zeta_radial_err(R, s, d) + (math.log2(count + 1) + 4 + 2 * M) * EPS * abs_total
    return vwe(total + tail, err)


def _zeta_term_bound_coeff(order, s, y):
    """C with |d^order (y^s Q^-s)| <= C * r^(-2s), r^2 = Q/y."""
    return {
        "x": 2 * s / y,
        "y": 3 * s / y,
        "xy": (4 * s + 6 * s * s) / y ** 2,
        "xyy": (20 * s + 38 * s * s + 18 * s ** 3) / y ** 3,
    }[order]


def _zeta_terms(order, s, x, y, m, n):
    A = m * x + n
    Q = A * A + m * m * y * y
    g = (Q / y) ** (-s)
    Qx = 2 * m * A
    Qy = 2 * m * m * y
    Lx = -s * Qx / Q
    if order == "x":
        return Lx * g
    Ly = s / y - s * Qy / Q
    if order == "y":
        return Ly * g
    Lxy = s * Qx * Qy / (Q * Q)
    if order == "xy":
        return (Lxy + Lx * Ly) * g
    Qyy = 2 * m * m
    Lyy = -s / y ** 2 - s * (Qyy * Q - Qy * Qy) / (Q * Q)
    Lxyy = s * (Qx * Qyy / (Q * Q) - 2 * Qx * Qy * Qy / Q ** 3)
    return (Lxyy + 2 * Lxy * Ly + Lx * Lyy + Lx * Ly * Ly) * g


def zeta_partial_termwise(s: float, z: complex, order: str,
                          trunc: Truncation | None = None) -> ValueWithError:
    """Termwise partial derivative of the zeta double sum over a disc.

    Each summand is bounded by ``C r^(-2s)`` (see
    :func:`_zeta_term_bound_coeff`) and the exterior by
    ``int_R^inf pi (r+d)^2 d(-C r^-2s)``, a bound that decays only
    polynomially in ``R``: this route is a cross-check, not a precision tool.
    """
    _check_s(s)
    s = float(s)
    trunc = ZETA_TERMWISE_TRUNCATION if trunc is None else trunc
    x, y = _split(z)
    x, y = float(x), float(y)
    d = float(_cell_diameter(x, y))
    C = _zeta_term_bound_coeff(order, s, y)

    def bound(R):
        return 2 * PI * s * C * (R ** (2 - 2 * s) / (2 * s - 2) + 2 * d * R ** (1 - 2 * s) / (2 * s - 1)
                                 + d * d * R ** (-2 * s) / (2 * s))

    R = max(2 * d, 4.0)
    while bound(R) > trunc.abs_tol:
        R *= 1.1
        if R / math.sqrt(y) > trunc.max_terms:
            raise ToleranceNotMet(
                f"termwise zeta_{order}: radius {R:.0f} exceeds max_terms={trunc.max_terms}")
    M = int(math.floor(R / math.sqrt(y)))
    total = 0.0
    abs_total = 0.0
    count = 0
    for m in range(-M, M + 1):
        rem = R * R - m * m * y
        if rem < 0:
            continue
        half = math.sqrt(rem * y)
        lo, hi = math.ceil(-m * x - half), math.floor(-m * x + half)
        n = np.arange(lo, hi + 1, dtype=float)
        if m == 0:
            n = n[n != 0]
        t = _zeta_terms(order, s, x, y, m, n)
        total += t.sum()
        abs_total += np.abs(t).sum()
        count += t.size
    err = bound(R) + (math.log2(count + 1) + 4 + 2 * M) * EPS * abs_total
    return vwe(total, err)


_MELLIN_INTEGRAND = {
    "": lambda a, z, t: theta_direct(a, z, t, exclude_origin=True),
    "x": lambda a, z, t: theta_x(a, z, t),
    "y": lambda a, z, t: theta_y(a, z, t),
    "xy": lambda a, z, t: theta_xy(a, z, t),
    "xyy": lambda a, z, t: theta_xyy(a, z, t),
}


def _mellin_cutoff(c, s):
    """Upper limit U with exp(-pi c (U-1)) U^(s+3) <= 1e-17."""
    U = 2.0
    for _ in range(50):
        U_new = 1.0 + (math.log(1e17) + (s + 3) * math.log(U)) / (PI * c)
        if abs(U_new - U) < 1e-6:
            break
        U = U_new
    return max(U, 1.5)


def zeta_mellin_partial(s: float, z, order: str = "",
                        trunc: Truncation | None = None) -> ValueWithError:
    r"""zeta(s; z) or one of its partials through the Mellin transform.

    .. math::

        \zeta(s;z) = \frac{\pi^s}{\Gamma(s)}\Big[\int_1^\infty (\theta(\alpha;z)-1)
            (\alpha^{s-1} + \alpha^{-s})\,d\alpha + \frac{1}{s-1} - \frac{1}{s}\Big]

    The lower half of the integral has been folded onto ``[1, inf)`` with
    ``theta(1/alpha) = alpha theta(alpha)``.  Differentiating in ``z`` keeps the
    identity, so a partial uses the same kernel with ``theta`` replaced by its
    partial and no constant term.  ``z`` may be an array; ``order`` is one of
    ``"", "x", "y", "xy", "xyy"``.
    """
    _check_s(s)
    return zeta_mellin_multi([float(s)], z, order, trunc)[0]


def zeta_mellin_multi(s_values, z, order: str = "",
                      trunc: Truncation | None = None) -> list[ValueWithError]:
    """:func:`zeta_mellin_partial` for several ``s`` sharing one set of theta
    evaluations (the integrand depends on ``s`` only through its weight)."""
    s_values = [float(v) for v in s_values]
    _check_s(np.array(s_values))
    if order not in _MELLIN_INTEGRAND:
        raise ValueError(f"unsupported order {order!r}")
    trunc = DEFAULT_TRUNCATION if trunc is None else trunc
    x, y = _split(z)
    zz = np.asarray(z, dtype=complex)
    zflat = zz.ravel()
    c_all = np.atleast_1d(_min_norm2(np.atleast_1d(x).ravel(), np.atleast_1d(y).ravel(),
                                     skip_m0=order in ("x", "xy", "xyy")))
    value = np.empty((len(s_values), zflat.size))
    err = np.empty_like(value)
    # Points sharing a batch share the cutoff U, so group them by decay rate.
    order_idx = np.argsort(c_all)
    for i in range(0, zflat.size, _MELLIN_BATCH):
        idx = order_idx[i:i + _MELLIN_BATCH]
        value[:, idx], err[:, idx] = _mellin_batch(s_values, zflat[idx],
                                                   float(c_all[idx].min()), order, trunc)
    return [vwe(v.reshape(zz.shape), e.reshape(zz.shape)) for v, e in zip(value, err)]


_MELLIN_BATCH = 512


def _mellin_batch(s_values, zb, c, order, trunc):
    sv = np.array(s_values)
    U = _mellin_cutoff(c, sv.max())
    integrand = _MELLIN_INTEGRAND[order]

    def f(nodes):
        r = integrand(nodes[:, None], zb[None, :], trunc)
        w = (nodes[:, None] ** (sv - 1) + nodes[:, None] ** (-sv))[:, :, None]
        return r.value[:, None, :] * w, r.err[:, None, :] * w

    n_panels = max(2, int(math.ceil((U - 1) * PI * c / 16)))
    I, I_err, _ = gauss_legendre_panels(f, 1.0, U, abs_tol=trunc.abs_tol, rel_tol=1e-10,
                                        start_panels=n_panels, max_doublings=6)
    fu, _ = f(np.array([U]))
    # beyond U the integrand decays at least like exp(-pi c alpha)
    I_err = I_err + 2 * np.abs(fu[0]) / (PI * c)
    pref = np.array([PI ** s / math.gamma(s) for s in s_values])[:, None]
    const = (1 / (sv - 1) - 1 / sv)[:, None] if order == "" else 0.0
    value = pref * (I + const)
    return value, pref * I_err + 4 * EPS * np.abs(value)


def zeta_mellin(s: float, z, trunc: Truncation | None = None) -> ValueWithError:
    """zeta(s; z) by Mellin quadrature of theta - 1 (see :func:`zeta_mellin_partial`)."""
    return zeta_mellin_partial(s, z, "", trunc)


def zeta_x(s, z, trunc=None) -> ValueWithError:
    return zeta_mellin_partial(s, z, "x", trunc)


def zeta_y(s, z, trunc=None) -> ValueWithError:
    return zeta_mellin_partial(s, z, "y", trunc)


def zeta_xy(s, z, trunc: Truncation | None = None, method: str = "mellin") -> ValueWithError:
    """Mixed partial of zeta; ``method`` is ``"mellin"`` or ``"termwise"``."""
    if method == "termwise":
        return zeta_partial_termwise(s, z, "xy", trunc)
    return zeta_mellin_partial(s, z, "xy", trunc)


def zeta_xyy(s, z, trunc: Truncation | None = None, method: str = "mellin") -> ValueWithError:
    """Third partial d^3 zeta / dx dy^2; ``method`` as in :func:`zeta_xy`."""
    if method == "termwise":
        return zeta_partial_termwise(s, z, "xyy", trunc)
    return zeta_mellin_partial(s, z, "xyy", trunc)


# -- minimisation over the fundamental domain --------------------------------------

HEXAGONAL = complex(0.5, math.sqrt(3) / 2)


@dataclass
class MinimizeResult:
    point: complex
    value: float
    n_evals: int
    start_reduced: complex


def project_closure(x: float, y: float) -> complex:
    """Clamp to the closed fundamental domain: x into [0, 1/2], then |z| >= 1."""
    x = min(max(x, 0.0), 0.5)
    y = max(y, math.sqrt(1.0 - x * x), 1e-6)
    return complex(x, y)


def minimize(functional: str, param: float, start: complex,
             trunc: Truncation | None = None, max_evals: int = 100_000) -> MinimizeResult:
    """Local minimisation of theta(alpha;.) or zeta(s;.) over the closed domain.

    ``start`` is first reduced into the closed fundamental domain; Nelder-Mead
    then runs on ``f(project(x, y))`` so every evaluation happens inside the
    closure.  ``functional`` is ``"theta"`` (``param`` = alpha) or ``"zeta"``
    (``param`` = s, evaluated by Mellin quadrature).
    """
    if functional == "theta":
        _check_alpha(param)

        def evaluate(z):
            return theta_direct(param, z, trunc)
    elif functional == "zeta":
        _check_s(param)

        def evaluate(z):
            return zeta_mellin(param, z, trunc)
    else:
        raise ValueError(f"functional must be 'theta' or 'zeta', got {functional!r}")

    z0, _ = reduce_point(start)
    z0 = project_closure(z0.real, z0.imag)

    def f(p):
        return float(evaluate(project_closure(p[0], p[1])).value)

    step = 0.05
    simplex = np.array([[z0.real, z0.imag], [z0.real + step, z0.imag],
                        [z0.real, z0.imag + step]])
    res = optimize.minimize(f, [z0.real, z0.imag], method="Nelder-Mead",
                            options=dict(xatol=1e-10, fatol=1e-16, maxfev=max_evals,
                                         initial_simplex=simplex))
    if res.nfev >= max_evals:
        raise NotConverged(f"minimize: {res.nfev} evaluations without convergence")
    zmin = project_closure(res.x[0], res.x[1])
    rmin, r0 = evaluate(zmin), evaluate(z0)
    if not rmin.value + rmin.err < r0.value - r0.err:
        # no improvement beyond evaluation error (e.g. started at a critical point)
        zmin, rmin = z0, r0
    return MinimizeResult(point=zmin, value=float(rmin.value), n_evals=int(res.nfev) + 2,
                          start_reduced=z0)
