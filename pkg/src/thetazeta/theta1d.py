r"""One-dimensional Jacobi theta function and its Y-derivatives.

.. math::

    \vartheta(X;Y) = \sum_{n\in\mathbb Z} e^{-\pi n^2 X} e^{2\pi i n Y}
                   = X^{-1/2} \sum_{n\in\mathbb Z} e^{-\pi (n-Y)^2 / X}

The first (q-series) form converges like :math:`e^{-\pi n^2 X}` and is used
for ``X >= 1``; the second (Poisson) form converges like
:math:`e^{-\pi n^2 / X}` and is used below.  Both forms are exposed through
``method=`` so they can be checked against each other.

All functions broadcast over array ``X`` and ``Y`` and return a
:class:`~thetazeta.ValueWithError`.
"""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from ._numerics import (DEFAULT_TRUNCATION, REL_TAIL, InvalidDomain,
                        ToleranceNotMet, Truncation, ValueWithError,
                        poly_gauss_tail, rounding_err, vwe)

PI = math.pi

# derivative order -> (q-series prefactor, power of n, trig)
#   theta      =  1 + 2     sum       e cos
#   theta_Y    =    -4pi    sum n     e sin
#   theta_XY   =     4pi^2  sum n^3   e sin
#   theta_XXY  =    -4pi^3  sum n^5   e sin
#   theta_X    =    -2pi    sum n^2   e cos
_Q_FORM = {
    0: (2.0, 0, np.cos),
    1: (-4.0 * PI, 1, np.sin),
    2: (4.0 * PI ** 2, 3, np.sin),
    3: (-4.0 * PI ** 3, 5, np.sin),
    4: (-2.0 * PI, 2, np.cos),
}

KINDS = {"theta": 0, "dY": 1, "dXY": 2, "dXXY": 3, "dX": 4}


class Theta1dPoint(NamedTuple):
    X: float
    Y: float


def _poisson_coeffs(kind, X):
    """Signed polynomial coefficients c_k(X) with term = sum_k c_k u^k e^{-pi u^2/X}.

    theta_Y   = 2 pi X^{-3/2} u g
    theta_XY  = 2 pi g (-(3/2) X^{-5/2} u + pi X^{-7/2} u^3)
    theta_XXY = 2 pi g ((15/4) X^{-7/2} u - 5 pi X^{-9/2} u^3 + pi^2 X^{-11/2} u^5)
    theta_X   = g (-(1/2) X^{-3/2} + pi X^{-5/2} u^2)
    """
    if kind == 0:
        return {0: X ** -0.5}
    if kind == 4:
        return {0: -0.5 * X ** -1.5, 2: PI * X ** -2.5}
    if kind == 1:
        return {1: 2 * PI * X ** -1.5}
    if kind == 2:
        return {1: -3 * PI * X ** -2.5, 3: 2 * PI ** 2 * X ** -3.5}
    return {1: 7.5 * PI * X ** -3.5, 3: -10 * PI ** 2 * X ** -4.5,
            5: 2 * PI ** 3 * X ** -5.5}


def _pick_n(tail_fn, lead, trunc):
    """Smallest N whose tail bound meets abs_tol and sits REL_TAIL below lead."""
    abs_ok_at = None
    for N in range(1, int(trunc.max_terms) + 1):
        tail = tail_fn(N)
        abs_ok = np.all(tail <= trunc.abs_tol)
        if abs_ok and abs_ok_at is None:
            abs_ok_at = N
        rel_ok = np.all((tail <= REL_TAIL * lead) | (tail < 1e-300))
        if abs_ok and rel_ok:
            return N, tail
    if abs_ok_at is None:
        raise ToleranceNotMet(
            f"series tail {float(np.max(tail)):.3e} above abs_tol={trunc.abs_tol:g} "
            f"after max_terms={trunc.max_terms}")
    return N, tail


def _q_series(kind, X, Y, trunc):
    coef, p, trig = _Q_FORM[kind]
    beta = PI * X
    lead = np.ones_like(X) if kind == 0 else abs(coef) * np.exp(-beta)
    N, tail = _pick_n(lambda N: abs(coef) * poly_gauss_tail(N + 1, {p: 1.0}, beta),
                      lead, trunc)
    n = np.arange(1, N + 1, dtype=float).reshape((-1,) + (1,) * X.ndim)
    mag = n ** p * np.exp(-beta * n * n)
    terms = coef * mag * trig(2 * PI * n * Y)
    value = terms.sum(axis=0) + (1.0 if kind == 0 else 0.0)
    abs_sum = abs(coef) * mag.sum(axis=0) + (1.0 if kind == 0 else 0.0)
    return value, tail + rounding_err(abs_sum, N)


def _poisson(kind, X, Y, trunc):
    # Y is already reduced to [-1/2, 1/2]; omitted terms have |n - Y| >= N + 1/2.
    coeffs = _poisson_coeffs(kind, X)
    majorant = {k: np.abs(c) for k, c in coeffs.items()}
    gamma = PI / X

    def m(u):
        return sum(a * u ** k for k, a in majorant.items()) * np.exp(-gamma * u * u)

    ay = np.abs(Y)
    lead = np.maximum(m(ay), m(1.0 - ay))
    N, tail = _pick_n(lambda N: 2.0 * poly_gauss_tail(N + 0.5, majorant, gamma),
                      lead, trunc)
    n = np.arange(-N, N + 1, dtype=float).reshape((-1,) + (1,) * X.ndim)
    u = n - Y
    u2 = u * u
    g = np.exp(-gamma * u2)
    # Horner in u^2; every kind is a polynomial of one parity in u
    top = max(coeffs)
    poly = np.zeros_like(u)
    apoly = np.zeros_like(u)
    for k in range(top, -1, -2):
        c = coeffs.get(k, 0.0)
        poly = poly * u2 + c
        apoly = apoly * u2 + np.abs(c)
    if top % 2:
        poly = poly * u
        apoly = apoly * np.abs(u)
    value = (poly * g).sum(axis=0)
    abs_sum = (apoly * g).sum(axis=0)
    return value, tail + rounding_err(abs_sum, 2 * N + 1)


def _evaluate(kind, X, Y, trunc, method):
    trunc = DEFAULT_TRUNCATION if trunc is None else trunc
    X, Y = np.broadcast_arrays(np.asarray(X, dtype=float), np.asarray(Y, dtype=float))
    if not np.all(X > 0):
        raise InvalidDomain("theta1d requires X > 0")
    if not np.all(np.isfinite(Y)):
        raise InvalidDomain("theta1d requires finite Y")
    # Periodicity: reduce Y to [-1/2, 1/2] before summing.
    Y = Y - np.round(Y)
    if method == "auto":
        use_q = X >= 1.0
    elif method == "q":
        use_q = np.ones(X.shape, dtype=bool)
    elif method == "poisson":
        use_q = np.zeros(X.shape, dtype=bool)
    else:
        raise ValueError(f"unknown method {method!r}")

    value = np.empty(X.shape)
    err = np.empty(X.shape)
    if use_q.any():
        value[use_q], err[use_q] = _q_series(kind, X[use_q], Y[use_q], trunc)
    rest = ~use_q
    if rest.any():
        value[rest], err[rest] = _poisson(kind, X[rest], Y[rest], trunc)
    return vwe(value, err)


def theta1d(X, Y, trunc: Truncation | None = None, method: str = "auto") -> ValueWithError:
    r"""Evaluate :math:`\vartheta(X;Y)`.

    Parameters
    ----------
    X : float or ndarray, > 0
    Y : float or ndarray
    trunc : Truncation, optional
    method : {"auto", "q", "poisson"}
        ``auto`` uses the q-series for ``X >= 1`` and the Poisson form below.
    """
    return _evaluate(0, X, Y, trunc, method)


def theta1d_dY(X, Y, trunc: Truncation | None = None, method: str = "auto") -> ValueWithError:
    r""":math:`\partial_Y \vartheta(X;Y)`; odd in ``Y``, nonpositive on ``[0, 1/2]``."""
    return _evaluate(1, X, Y, trunc, method)


def theta1d_dXY(X, Y, trunc: Truncation | None = None, method: str = "auto") -> ValueWithError:
    r""":math:`\partial_X\partial_Y \vartheta(X;Y)`."""
    return _evaluate(2, X, Y, trunc, method)


def theta1d_dXXY(X, Y, trunc: Truncation | None = None, method: str = "auto") -> ValueWithError:
    r""":math:`\partial_X^2\partial_Y \vartheta(X;Y)`."""
    return _evaluate(3, X, Y, trunc, method)


def theta1d_dX(X, Y, trunc: Truncation | None = None, method: str = "auto") -> ValueWithError:
    r""":math:`\partial_X \vartheta(X;Y)`."""
    return _evaluate(4, X, Y, trunc, method)


def theta1d_sup(kind: int, X) -> np.ndarray:
    """Upper bound on ``sup_Y |d^kind theta(X;Y)|`` from the absolute q-series.

    ``kind`` follows the order 0: theta, 1: dY, 2: dXY, 3: dXXY, 4: dX.  Used to bound
    discarded terms of the lattice expansions, where the Y-argument varies.
    """
    coef, p, _ = _Q_FORM[kind]
    X = np.asarray(X, dtype=float)
    beta = PI * X
    N = int(math.ceil(math.sqrt((45.0 + p * 3.0) / (PI * float(np.min(X)))))) + 3
    n = np.arange(1, N + 1, dtype=float).reshape((-1,) + (1,) * X.ndim)
    s = (n ** p * np.exp(-beta * n * n)).sum(axis=0)
    s = s + poly_gauss_tail(N + 1, {p: 1.0}, beta)
    return abs(coef) * s + (1.0 if kind == 0 else 0.0)
