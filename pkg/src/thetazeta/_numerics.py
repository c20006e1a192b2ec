"""Shared numerical plumbing: truncation policy, error-carrying values,
Gaussian-series tail bounds and panel Gauss-Legendre quadrature."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

ArrayLike = Union[float, np.ndarray]

EPS = np.finfo(float).eps
# A tail is also required to sit this far below the largest retained term,
# so tiny values (deep in a Gaussian decay) keep relative accuracy.
REL_TAIL = 2.0 ** -60


class ThetaZetaError(Exception):
    """Base class for evaluation and certification failures."""


class InvalidDomain(ThetaZetaError, ValueError):
    pass


class ToleranceNotMet(ThetaZetaError):
    pass


class DegenerateDenominator(ThetaZetaError):
    pass


class QuadratureNotConverged(ThetaZetaError):
    pass


class NotConverged(ThetaZetaError):
    pass


@dataclass(frozen=True)
class Truncation:
    """Stopping rule for every series evaluation.

    ``abs_tol`` bounds the truncation part of the error; ``max_terms`` caps the
    summation index.  Exceeding the cap before reaching ``abs_tol`` raises
    :class:`ToleranceNotMet`.
    """

    abs_tol: float = 1e-13
    max_terms: int = 64

    def __post_init__(self):
        if not self.abs_tol >= 0:
            raise InvalidDomain(f"abs_tol must be >= 0, got {self.abs_tol}")
        if int(self.max_terms) < 1:
            raise InvalidDomain(f"max_terms must be positive, got {self.max_terms}")
        if self.abs_tol == 0 and not math.isfinite(self.max_terms):
            raise InvalidDomain("no stopping rule: abs_tol == 0 and max_terms infinite")


DEFAULT_TRUNCATION = Truncation()


@dataclass(frozen=True)
class ValueWithError:
    """A value and a nonnegative bound on its absolute error.

    Both fields may be numpy arrays of the same shape for vectorised calls.
    """

    value: ArrayLike
    err: ArrayLike

    def __iter__(self):
        yield self.value
        yield self.err

    def __float__(self):
        return float(self.value)

    @property
    def lo(self):
        return self.value - self.err

    @property
    def hi(self):
        return self.value + self.err


def _scalar_or_array(a):
    a = np.asarray(a, dtype=float)
    return a.item() if a.ndim == 0 else a


def vwe(value, err) -> ValueWithError:
    return ValueWithError(_scalar_or_array(value), _scalar_or_array(err))


def rounding_err(abs_sum, n_terms):
    """Crude forward bound on accumulated rounding in a sum of ``n_terms``."""
    return (n_terms + 4) * EPS * np.asarray(abs_sum)


def poly_gauss_tail(u0, coeffs, gamma):
    r"""Bound :math:`\sum_{j\ge 0} m(u_0 + j)` for the majorant
    :math:`m(u) = \sum_k a_k u^k e^{-\gamma u^2}` (all :math:`a_k \ge 0`).

    Once ``m`` is past its peak the ratio of consecutive terms is at most
    ``r = ((u0+1)/u0)**kmax * exp(-gamma*(2*u0+1))``, so the tail is bounded
    by the geometric majorant ``m(u0) / (1 - r)``.  Returns ``inf`` where that
    argument does not apply yet (``u0`` before the peak or ``r >= 1``).

    ``coeffs`` maps exponent ``k`` to ``a_k`` (scalar or array); ``u0`` and
    ``gamma`` broadcast against them.
    """
    u0 = np.asarray(u0, dtype=float)
    gamma = np.asarray(gamma, dtype=float)
    kmax = max(coeffs)
    with np.errstate(over="ignore", under="ignore", divide="ignore", invalid="ignore"):
        gauss = np.exp(-gamma * u0 * u0)
        m = sum(np.asarray(a, dtype=float) * u0 ** k for k, a in coeffs.items()) * gauss
        r = ((u0 + 1.0) / u0) ** kmax * np.exp(-gamma * (2.0 * u0 + 1.0))
        past_peak = u0 * u0 * 2.0 * gamma >= kmax
        out = np.where(past_peak & (r < 1.0), m / (1.0 - r), np.inf)
    return out


def gauss_legendre_panels(f: Callable[[np.ndarray], tuple], a: float, b: float,
                          abs_tol: float, rel_tol: float = 1e-12,
                          order: int = 16, start_panels: int = 4,
                          max_doublings: int = 10):
    """Integrate ``f`` over ``[a, b]`` with composite Gauss-Legendre panels.

    ``f(nodes)`` takes a 1-d array of abscissae and returns ``(values, errs)``
    with leading axis matching ``nodes`` (trailing axes are independent
    integrands).  The panel count doubles until two successive estimates differ
    by less than ``abs_tol / 2`` and ``rel_tol * int|f|``; the absolute test is
    mandatory, the relative one is pursued until ``max_doublings``.

    Scaling by ``int|f|`` instead of ``|I|`` keeps integrals that vanish by
    symmetry from forcing refinement.  The absolute test is floored at
    ``64 eps int|f|`` plus twice the integrated sample error, and the relative
    test by the latter, since no panel count resolves differences below the
    accuracy of the samples.

    Returns ``(integral, err, n_panels)`` where ``err`` is the last difference
    plus the propagated integrand error.
    """
    x, w = np.polynomial.legendre.leggauss(order)

    def estimate(n_panels):
        edges = np.linspace(a, b, n_panels + 1)
        half = 0.5 * (edges[1:] - edges[:-1])
        mid = 0.5 * (edges[1:] + edges[:-1])
        nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
        weights = (half[:, None] * w[None, :]).ravel()
        vals, errs = f(nodes)
        vals = np.asarray(vals, dtype=float)
        errs = np.asarray(errs, dtype=float)
        shape = (-1,) + (1,) * (vals.ndim - 1)
        wb = weights.reshape(shape)
        return (wb * vals).sum(axis=0), (wb * errs).sum(axis=0), (wb * np.abs(vals)).sum(axis=0)

    n = start_panels
    prev, _, _ = estimate(n)
    for _ in range(max_doublings):
        n *= 2
        cur, cur_err, scale = estimate(n)
        diff = np.abs(cur - prev)
        abs_ok = np.all(diff <= 0.5 * abs_tol + 64 * EPS * scale + 2 * cur_err)
        rel_ok = np.all(diff <= rel_tol * scale + 2 * cur_err)
        prev = cur
        if abs_ok and rel_ok:
            return cur, diff + cur_err, n
    if abs_ok:
        return cur, diff + cur_err, n
    raise QuadratureNotConverged(
        f"panel doubling stalled at {n} panels, max step {float(np.max(diff)):.3e}")
