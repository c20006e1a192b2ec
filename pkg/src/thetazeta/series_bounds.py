r"""Auxiliary series and the quotient bounds built on them.

The six tail series are

.. math::

    \mu(X)    = \sum_{n\ge2} n^2 e^{-\pi(n^2-1)X},\quad
    \nu(X)    = \sum_{n\ge2} n^4 e^{-\pi(n^2-1)X},\quad
    \omega(X) = \sum_{n\ge2} n^6 e^{-\pi(n^2-1)X},

and their hatted versions carrying the sign :math:`(-1)^{n+1}`.  They bound
quotients of derivatives of :math:`\vartheta` (see :func:`quotient_bound_check`).

The second half of the module evaluates the moment sums
:math:`S_j(a;Y) = \sum_n (n-Y)^j e^{-a\pi(n-Y)^2}` and the combinations
``Q``, ``F`` and ``H`` used to bound :math:`\vartheta_{XXY}/\vartheta_Y`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ._numerics import (DEFAULT_TRUNCATION, DegenerateDenominator, InvalidDomain,
                        Truncation, ValueWithError, poly_gauss_tail, rounding_err,
                        vwe)
from .theta1d import theta1d_dXXY, theta1d_dXY, theta1d_dY

PI = math.pi


class AuxSeries(str, Enum):
    mu = "mu"
    nu = "nu"
    omega = "omega"
    mu_hat = "mu_hat"
    nu_hat = "nu_hat"
    omega_hat = "omega_hat"

    @property
    def weight(self) -> int:
        return {"mu": 2, "nu": 4, "omega": 6}[self.value.replace("_hat", "")]

    @property
    def alternating(self) -> bool:
        return self.value.endswith("_hat")


def aux_series(kind, X, trunc: Truncation | None = None) -> ValueWithError:
    """Evaluate one of mu, nu, omega (or the hatted alternating versions) at X."""
    kind = AuxSeries(kind)
    trunc = DEFAULT_TRUNCATION if trunc is None else trunc
    X = np.asarray(X, dtype=float)
    if not np.all(X > 0):
        raise InvalidDomain("aux_series requires X > 0")
    w = kind.weight
    beta = PI * X
    # sum_{n>N} n^w e^{-pi(n^2-1)X} = e^{pi X} * sum_{n>N} n^w e^{-pi n^2 X}
    from .theta1d import _pick_n
    lead = 2.0 ** w * np.exp(-3.0 * beta)
    N, tail = _pick_n(lambda N: _shifted_tail(max(N, 2) + 1, w, beta), lead, trunc)
    N = max(N, 2)
    n = np.arange(2, N + 1, dtype=float).reshape((-1,) + (1,) * X.ndim)
    mag = n ** w * np.exp(-beta * (n * n - 1.0))
    sign = np.where(n % 2 == 0, -1.0, 1.0) if kind.alternating else 1.0
    value = (sign * mag).sum(axis=0)
    return vwe(value, tail + rounding_err(mag.sum(axis=0), N))


def _shifted_tail(u0, w, beta):
    """Bound on sum_{n>=u0} n^w e^{-beta (n^2-1)}: geometric majorant once past the peak."""
    with np.errstate(over="ignore", under="ignore", divide="ignore", invalid="ignore"):
        m = u0 ** w * np.exp(-beta * (u0 * u0 - 1.0))
        r = ((u0 + 1.0) / u0) ** w * np.exp(-beta * (2.0 * u0 + 1.0))
        ok = (2.0 * beta * u0 * u0 >= w) & (r < 1.0)
        return np.where(ok, m / (1.0 - r), np.inf)


def _aux(kind, X, trunc=None):
    return aux_series(kind, X, trunc).value


# -- printed composite constants -------------------------------------------------

PRINTED_CONSTANTS = {
    "c1": 0.8729,
    "c2": 0.0150,
    "c3": 0.0602,
    "c4": 1.1042,
    "c5": 0.8884,
    "c6": 0.4435,
}

CONSTANT_FORMULAS = {
    "c1": "(1+nu_hat(1/2))/(1+mu_hat(1/2)) - (1+nu(1/2))/(1-mu(1/2)) * mu(3/5)",
    "c2": "(1+mu(1/2))/(1-mu(1/2)) * mu(3/5)",
    "c3": "(1+mu(1/2))/(1-mu(1/2)) * nu(3/5)",
    "c4": "(1+nu(1/2))/(1+mu(1/2))",
    "c5": "(1+nu_hat(1/2))/(1+mu_hat(1/2))",
    "c6": "(1+omega_hat(1/2))/(1+mu_hat(1/2))",
}

CONSTANT_TOL = 2e-3


def bound_constants(trunc: Truncation | None = None) -> dict[str, float]:
    """Recompute the six composite constants from the auxiliary series.

    The printed value of ``c1`` (0.8729) does not match this recomputation
    (about 0.87183); callers comparing against :data:`PRINTED_CONSTANTS` should
    report that row separately.
    """
    h, t = 0.5, 0.6
    mu_h, nu_h = _aux("mu", h, trunc), _aux("nu", h, trunc)
    muh_h, nuh_h = _aux("mu_hat", h, trunc), _aux("nu_hat", h, trunc)
    omh_h = _aux("omega_hat", h, trunc)
    mu_t, nu_t = _aux("mu", t, trunc), _aux("nu", t, trunc)
    r_mu = (1 + mu_h) / (1 - mu_h)
    return {
        "c1": (1 + nuh_h) / (1 + muh_h) - (1 + nu_h) / (1 - mu_h) * mu_t,
        "c2": r_mu * mu_t,
        "c3": r_mu * nu_t,
        "c4": (1 + nu_h) / (1 + mu_h),
        "c5": (1 + nuh_h) / (1 + muh_h),
        "c6": (1 + omh_h) / (1 + muh_h),
    }


# -- quotient bounds ---------------------------------------------------------------

class QuotientItem(str, Enum):
    """Quotient inequalities for 1-d theta derivatives.

    Each member names ``numerator / theta_Y(X;Y)``; ``_K`` members evaluate the
    numerator at ``kY`` and ``_SMALL_X`` members hold for ``X <= 1/2`` (or a
    similar upper range) with explicit exponential constants.
    """

    DY_K = "dY(kY)/dY"
    DY_K_SMALL_X = "dY(kY)/dY small X"
    DXY = "dXY/dY"
    DXY_SMALL_X = "dXY/dY small X"
    DXY_K = "dXY(kY)/dY"
    DXY_K_SMALL_X = "dXY(kY)/dY small X"
    DXXY = "dXXY/dY"
    DXXY_SMALL_X = "dXXY/dY small X"
    DXXY_K_SMALL_X = "dXXY(kY)/dY small X"


# item -> (X-range predicate, description, uses k)
_ITEM_RANGE = {
    QuotientItem.DY_K: (lambda X: X > 0.2, "X > 1/5", True),
    QuotientItem.DY_K_SMALL_X: (lambda X: X < PI / (PI + 2), "X < pi/(pi+2)", True),
    QuotientItem.DXY: (lambda X: X >= 0.2, "X >= 1/5", False),
    QuotientItem.DXY_SMALL_X: (lambda X: 0 < X <= 0.5, "0 < X <= 1/2", False),
    QuotientItem.DXY_K: (lambda X: X >= 0.2, "X >= 1/5", True),
    QuotientItem.DXY_K_SMALL_X: (lambda X: 0 < X <= 0.5, "0 < X <= 1/2", True),
    QuotientItem.DXXY: (lambda X: X >= 59 / 250, "X >= 59/250", False),
    QuotientItem.DXXY_SMALL_X: (lambda X: 0 < X <= 0.5, "0 < X <= 1/2", False),
    QuotientItem.DXXY_K_SMALL_X: (lambda X: 0 < X <= 0.5, "0 < X <= 1/2", True),
}


@dataclass(frozen=True)
class QuotientBoundCase:
    item: QuotientItem
    k: int = 1

    def __post_init__(self):
        object.__setattr__(self, "item", QuotientItem(self.item))
        if self.k < 1:
            raise InvalidDomain("k must be a positive integer")

    def in_range(self, X: float) -> bool:
        return bool(_ITEM_RANGE[self.item][0](X))

    @property
    def uses_k(self) -> bool:
        return _ITEM_RANGE[self.item][2]


def quotient_bounds(case: QuotientBoundCase, X: float, trunc=None):
    """Return ``(lower, upper)`` of the inequality for ``case`` at ``X``.

    One-sided absolute-value items return ``(-bound, bound)``.
    """
    item, k = case.item, case.k
    if item is QuotientItem.DY_K:
        b = k * (1 + _aux("mu", X, trunc)) / (1 - _aux("mu", X, trunc))
    elif item is QuotientItem.DY_K_SMALL_X:
        b = k / PI * math.exp(PI / (4 * X))
    elif item is QuotientItem.DXY:
        lo = -PI * (1 + _aux("nu", X, trunc)) / (1 + _aux("mu", X, trunc))
        hi = -PI * (1 + _aux("nu_hat", X, trunc)) / (1 + _aux("mu_hat", X, trunc))
        return lo, hi
    elif item is QuotientItem.DXY_SMALL_X:
        e = math.exp(-PI / X)
        lo = (0.75 * X ** 2 + 2 * PI ** 2 * e) / (-0.5 * X ** 3 + 2 * PI * X ** 2 * e)
        return lo, PI / (4 * X ** 2)
    elif item is QuotientItem.DXY_K:
        b = k * PI * (1 + _aux("nu", X, trunc)) / (1 - _aux("mu", X, trunc))
    elif item is QuotientItem.DXY_K_SMALL_X:
        b = 3 * k / (2 * PI) / X * (1 + PI / (6 * X)) * math.exp(PI / (4 * X))
    elif item is QuotientItem.DXXY:
        lo = PI ** 2 * (1 + _aux("omega_hat", X, trunc)) / (1 + _aux("mu_hat", X, trunc))
        hi = PI ** 2 * (1 + _aux("omega", X, trunc)) / (1 + _aux("mu", X, trunc))
        return lo, hi
    elif item is QuotientItem.DXXY_SMALL_X:
        return 15 / (4 * X ** 2) - PI / (4 * X ** 4), 15 / (4 * X ** 2) + PI / (4 * X ** 4)
    else:
        b = k / (4 * X ** 2) * (15 / PI + 1 / X ** 2) * math.exp(PI / (4 * X))
    return -b, b


_NUMERATOR = {
    QuotientItem.DY_K: theta1d_dY, QuotientItem.DY_K_SMALL_X: theta1d_dY,
    QuotientItem.DXY: theta1d_dXY, QuotientItem.DXY_SMALL_X: theta1d_dXY,
    QuotientItem.DXY_K: theta1d_dXY, QuotientItem.DXY_K_SMALL_X: theta1d_dXY,
    QuotientItem.DXXY: theta1d_dXXY, QuotientItem.DXXY_SMALL_X: theta1d_dXXY,
    QuotientItem.DXXY_K_SMALL_X: theta1d_dXXY,
}


def quotient_bound_check(case: QuotientBoundCase, X: float, Y: float,
                         trunc: Truncation | None = None) -> ValueWithError:
    """Signed slack of one quotient inequality at ``(X, Y)``.

    The quotient is ``num(X; kY) / theta_Y(X; Y)`` with ``num`` the derivative
    named by the item.  Returns ``min(q - lower, upper - q)`` with the error of
    the quotient; a value ``>= -err`` means the inequality holds at the point.

    Raises :class:`DegenerateDenominator` when ``|theta_Y(X;Y)|`` is within
    10x its own error bound.
    """
    case = QuotientBoundCase(case.item, case.k)
    if not case.in_range(X):
        raise InvalidDomain(f"X={X} outside {_ITEM_RANGE[case.item][1]} for {case.item.value}")
    if not Y > 0:
        raise InvalidDomain("quotient bounds assume Y > 0")
    kY = case.k * Y if case.uses_k else Y
    den = theta1d_dY(X, Y, trunc)
    if abs(den.value) <= 10 * den.err:
        raise DegenerateDenominator(f"theta_Y({X};{Y}) = {den.value:.3e} +- {den.err:.1e}")
    num = _NUMERATOR[case.item](X, kY, trunc)
    q = num.value / den.value
    q_err = (num.err + abs(q) * den.err) / (abs(den.value) - den.err)
    lo, hi = quotient_bounds(case, X, trunc)
    return vwe(min(q - lo, hi - q), q_err)


# -- moment sums, Q, F, H -----------------------------------------------------------

def _window(a):
    return max(8, int(math.ceil(math.sqrt(40.0 / (a * PI)))) + 2)


def _moments(a, Y, powers, trunc=None):
    """S_j(a;Y) for j in ``powers`` with error bounds; Y broadcasts."""
    if not a > 0:
        raise InvalidDomain("a must be positive")
    Y = np.asarray(Y, dtype=float)
    Yr = Y - np.round(Y)
    M = _window(a)
    n = np.arange(-M, M + 1, dtype=float).reshape((-1,) + (1,) * Y.ndim)
    u = n - Yr
    g = np.exp(-a * PI * u * u)
    out = {}
    for j in powers:
        terms = u ** j * g
        tail = 2.0 * poly_gauss_tail(M + 0.5, {j: 1.0}, a * PI)
        out[j] = (terms.sum(axis=0), tail + rounding_err(np.abs(terms).sum(axis=0), 2 * M + 1))
    return out


def moment_sum(j: int, a: float, Y, trunc=None) -> ValueWithError:
    """S_j(a;Y) = sum_n (n-Y)^j exp(-a pi (n-Y)^2)."""
    v, e = _moments(a, Y, (j,), trunc)[j]
    return vwe(v, e)


def Q(a: float, Y, trunc: Truncation | None = None) -> ValueWithError:
    """Q(a;Y) = pi S5/S1 - (5/a) S3/S1; degenerate where S1 vanishes (Y in Z/2)."""
    if not a >= 2:
        raise InvalidDomain("Q is defined here for a >= 2")
    S = _moments(a, Y, (1, 3, 5), trunc)
    (s1, e1), (s3, e3), (s5, e5) = S[1], S[3], S[5]
    if np.any(np.abs(s1) <= 10 * e1):
        raise DegenerateDenominator("S1(a;Y) vanishes to within its error")
    q = (PI * s5 - 5.0 / a * s3) / s1
    err = (PI * e5 + 5.0 / a * e3 + np.abs(q) * e1) / (np.abs(s1) - e1)
    return vwe(q, err)


def _FH(a, Y, sign, trunc):
    S = _moments(a, Y, (1, 3, 5), trunc)
    (s1, e1), (s3, e3), (s5, e5) = S[1], S[3], S[5]
    v = PI * s5 - 5.0 / a * s3 + sign * 0.25 * s1
    return vwe(v, PI * e5 + 5.0 / a * e3 + 0.25 * e1 + rounding_err(
        PI * np.abs(s5) + 5.0 / a * np.abs(s3) + 0.25 * np.abs(s1), 3))


def F(a: float, Y, trunc: Truncation | None = None) -> ValueWithError:
    """F(a;Y) = sum_n (pi u^5 - (5/a) u^3 - u/4) exp(-a pi u^2), u = n - Y."""
    return _FH(a, Y, -1.0, trunc)


def H(a: float, Y, trunc: Truncation | None = None) -> ValueWithError:
    """H(a;Y): as :func:`F` with +u/4."""
    return _FH(a, Y, +1.0, trunc)


def f_terms(a, Y, n):
    """Individual summands f_n(a;Y) of F."""
    u = np.asarray(n, dtype=float) - Y
    return (PI * u ** 5 - 5.0 / a * u ** 3 - 0.25 * u) * np.exp(-a * PI * u * u)


def fprime_terms(a, Y, n):
    """d/dY f_n(a;Y) in closed form."""
    u = np.asarray(n, dtype=float) - Y
    return (2 * a * PI ** 2 * u ** 6 - 15 * PI * u ** 4 + (15.0 / a - a * PI / 2) * u ** 2
            + 0.25) * np.exp(-a * PI * u * u)


def dF_dY(a: float, Y, trunc: Truncation | None = None) -> ValueWithError:
    """dF/dY via the termwise derivative, |n| <= window."""
    Y = np.asarray(Y, dtype=float)
    M = _window(a) + 1  # Y is not reduced here; widen by one
    n = np.arange(-M, M + 2, dtype=float).reshape((-1,) + (1,) * Y.ndim)
    terms = fprime_terms(a, Y, n)
    coeffs = {6: 2 * a * PI ** 2, 4: 15 * PI, 2: abs(15.0 / a - a * PI / 2), 0: 0.25}
    tail = 2.0 * poly_gauss_tail(M - 0.5, coeffs, a * PI)
    return vwe(terms.sum(axis=0), tail + rounding_err(np.abs(terms).sum(axis=0), 2 * M + 2))


def tail_ratio_derivative(a: float, Y: float) -> tuple[float, float]:
    """Ratio of the |n|>=3 derivative tail to the |n|<=2 core, on [2/5, 1/2].

    Returns ``(measured, analytic_bound)`` where the bound is
    ``8 a pi^2 (2+Y)^6 exp(-4 a pi (1+Y))``.
    """
    n_core = np.arange(-2, 3)
    n_tail = np.concatenate([np.arange(-40, -2), np.arange(3, 41)])
    core = -fprime_terms(a, Y, n_core).sum()
    tail = np.abs(fprime_terms(a, Y, n_tail)).sum()
    bound = 8 * a * PI ** 2 * (2 + Y) ** 6 * math.exp(-4 * a * PI * (1 + Y))
    return float(tail / core), bound


def tail_ratio_value(a: float, Y: float) -> tuple[float, float]:
    """Ratio of the n<=-2 tail of F to its |n|<=1 core, on [1/20, 2/5].

    Returns ``(measured, analytic_bound)`` with bound
    ``80 pi (2+Y)^5 exp(-4 a pi (1+Y))``.
    """
    core = f_terms(a, Y, np.arange(-1, 2)).sum()
    tail = np.abs(f_terms(a, Y, np.arange(-40, -1))).sum()
    bound = 80 * PI * (2 + Y) ** 5 * math.exp(-4 * a * PI * (1 + Y))
    return float(tail / core), bound


@dataclass
class FPositivityReport:
    passed: bool
    n_points: int
    worst: dict = field(default_factory=dict)
    first_violation: dict | None = None
    tail_ratios: dict = field(default_factory=dict)


def f_positivity_suite(a_grid=None, Y_grid=None, trunc: Truncation | None = None) -> FPositivityReport:
    """Grid verification of the four-item positivity argument for F on a in [2, 24].

    Checks: ``zeros`` F(a;0) = F(a;1/2) = 0; ``slope_low`` dF/dY >= e^{-a pi Y^2}/10
    on [0, 1/20]; ``slope_high`` dF/dY <= -(3/5) e^{-a pi Y^2} on [2/5, 1/2];
    ``interior`` F >= e^{-a pi Y^2}/100 on [1/20, 2/5].  The two tail ratios (<= 1e-10 and <= 1e-7) are checked at
    every relevant grid point, both as measured and via their closed-form bounds.
    Margins are normalised by ``e^{-a pi Y^2}``.
    """
    a_grid = np.arange(2.0, 24.0 + 1e-9, 0.5) if a_grid is None else np.asarray(a_grid, float)
    Y_grid = np.linspace(0.0, 0.5, 101) if Y_grid is None else np.asarray(Y_grid, float)
    if a_grid.min() < 2 or a_grid.max() > 24 or Y_grid.min() < 0 or Y_grid.max() > 0.5:
        raise InvalidDomain("suite grid must lie in a in [2,24], Y in [0,1/2]")
    rep = FPositivityReport(passed=True, n_points=0)
    worst = {"zeros": -np.inf, "slope_low": np.inf, "slope_high": np.inf, "interior": np.inf,
             "ratio_deriv": 0.0, "ratio_value": 0.0}
    tol = 1e-12

    def fail(item, a, Y, **vals):
        rep.passed = False
        if rep.first_violation is None:
            rep.first_violation = dict(item=item, a=float(a), Y=float(Y), **vals)

    for a in a_grid:
        # item 1
        for Yb in (0.0, 0.5):
            v = F(a, Yb, trunc)
            worst["zeros"] = max(worst["zeros"], abs(v.value))
            if abs(v.value) > v.err + tol:
                fail("zeros", a, Yb, F=float(v.value))
        Fv = F(a, Y_grid, trunc)
        dF = dF_dY(a, Y_grid, trunc)
        w = np.exp(-a * PI * Y_grid ** 2)
        for Y, f, fe, d, de, ww in zip(Y_grid, Fv.value, Fv.err, dF.value, dF.err, w):
            rep.n_points += 1
            if Y <= 0.05 + 1e-12:
                m = (d - de - 0.1 * ww) / ww
                worst["slope_low"] = min(worst["slope_low"], m)
                if m < 0:
                    fail("slope_low", a, Y, dF=float(d), bound=float(0.1 * ww))
            if Y >= 0.4 - 1e-12:
                m = (-0.6 * ww - d - de) / ww
                worst["slope_high"] = min(worst["slope_high"], m)
                if m < 0:
                    fail("slope_high", a, Y, dF=float(d), bound=float(-0.6 * ww))
                r, rb = tail_ratio_derivative(a, Y)
                worst["ratio_deriv"] = max(worst["ratio_deriv"], r, rb)
                if r > 1e-10 or rb > 1e-10:
                    fail("ratio_deriv", a, Y, ratio=r, bound=rb)
            if 0.05 - 1e-12 <= Y <= 0.4 + 1e-12:
                m = (f - fe - 0.01 * ww) / ww
                worst["interior"] = min(worst["interior"], m)
                if m < 0:
                    fail("interior", a, Y, F=float(f), bound=float(0.01 * ww))
                r, rb = tail_ratio_value(a, Y)
                worst["ratio_value"] = max(worst["ratio_value"], r, rb)
                if r > 1e-7 or rb > 1e-7:
                    fail("ratio_value", a, Y, ratio=r, bound=rb)
    rep.worst = {str(k): float(v) for k, v in worst.items()}
    rep.tail_ratios = {
        "deriv(a=2,Y=0.45)": tail_ratio_derivative(2.0, 0.45),
        "value(a=2,Y=0.2)": tail_ratio_value(2.0, 0.2),
    }
    return rep


# names used by the command-line claims
lemma25_suite = f_positivity_suite
paper_constants = bound_constants
