import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from thetazeta import (InvalidDomain, ToleranceNotMet, Truncation, theta1d, theta1d_dX,
                       theta1d_dXXY, theta1d_dXY, theta1d_dY)
from thetazeta.theta1d import theta1d_sup

FUNCS = [theta1d, theta1d_dY, theta1d_dXY, theta1d_dXXY, theta1d_dX]
X_GRID = [0.2, 0.5, 1.0, 2.0, 5.0]
Y_GRID = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5]

xs = st.floats(0.05, 8.0)
ys = st.floats(-3.0, 3.0)


def test_value_at_one_zero():
    r = theta1d(1.0, 0.0)
    assert abs(r.value - oracles.THETA1D_1_0) <= 1e-12
    assert r.err <= 1e-13


def test_value_at_half_zero():
    # Below the representation switch, so the Poisson form is used.
    assert abs(theta1d(0.5, 0.0).value - oracles.THETA1D_HALF_0) <= 1e-12


def test_q_series_needs_few_terms_at_one():
    direct = 1 + 2 * sum(math.exp(-math.pi * n * n) for n in range(1, 5))
    assert abs(theta1d(1.0, 0.0, method="q").value - direct) <= 1e-15


@pytest.mark.parametrize("X", X_GRID)
def test_dY_vanishes_at_zero_and_half(X):
    for Y in (0.0, 0.5):
        r = theta1d_dY(X, Y)
        assert abs(r.value) <= r.err + 1e-15


def test_dY_quarter_matches_reference_and_finite_difference():
    r = theta1d_dY(1.0, 0.25)
    assert r.value < 0
    assert abs(r.value - oracles.THETA1D_DY_1_QUARTER) <= 1e-12
    h = 1e-5
    fd = (theta1d(1.0, 0.25 + h).value - theta1d(1.0, 0.25 - h).value) / (2 * h)
    assert abs(fd - r.value) <= 1e-8


@pytest.mark.parametrize("lower, upper, wrt", [
    (theta1d, theta1d_dY, "Y"),
    (theta1d_dY, theta1d_dXY, "X"),
    (theta1d_dXY, theta1d_dXXY, "X"),
    (theta1d, theta1d_dX, "X"),
])
@pytest.mark.parametrize("X", [0.3, 0.8, 1.5, 3.0])
@pytest.mark.parametrize("Y", [0.13, 0.31, 0.44])
def test_derivatives_match_central_differences(lower, upper, wrt, X, Y):
    h = 1e-5
    if wrt == "Y":
        fd = (lower(X, Y + h).value - lower(X, Y - h).value) / (2 * h)
    else:
        fd = (lower(X + h, Y).value - lower(X - h, Y).value) / (2 * h)
    exact = upper(X, Y).value
    assert abs(fd - exact) <= 1e-6 * max(abs(exact), 1e-3)


def test_dXXY_second_difference_in_X():
    X, Y, h = 2.0, 0.3, 1e-3
    fd = (theta1d_dY(X + h, Y).value - 2 * theta1d_dY(X, Y).value
          + theta1d_dY(X - h, Y).value) / h ** 2
    assert abs(fd - theta1d_dXXY(X, Y).value) <= 1e-6


@pytest.mark.parametrize("fn", FUNCS)
def test_representations_agree_on_grid(fn):
    t = Truncation(abs_tol=1e-12)
    X, Y = np.meshgrid(X_GRID, Y_GRID)
    q = fn(X, Y, t, method="q")
    p = fn(X, Y, t, method="poisson")
    assert np.all(np.abs(q.value - p.value) <= q.err + p.err)
    assert np.max(np.abs(q.value - p.value)) <= 1e-11


@settings(max_examples=60, deadline=None)
@given(xs, ys)
def test_periodicity(X, Y):
    a, b = theta1d(X, Y), theta1d(X, Y + 1)
    assert abs(a.value - b.value) <= a.err + b.err + 1e-15


@settings(max_examples=60, deadline=None)
@given(xs, ys)
def test_parity(X, Y):
    a, b = theta1d(X, Y), theta1d(X, -Y)
    assert abs(a.value - b.value) <= a.err + b.err + 1e-15
    c, d = theta1d_dY(X, Y), theta1d_dY(X, -Y)
    assert abs(c.value + d.value) <= c.err + d.err + 1e-15


@settings(max_examples=80, deadline=None)
@given(st.floats(0.02, 10.0), st.floats(0.0, 0.5))
def test_dY_sign_on_half_period(X, Y):
    r = theta1d_dY(X, Y)
    assert r.value <= r.err
    s = theta1d_dY(X, -Y)
    assert s.value >= -s.err


@settings(max_examples=40, deadline=None)
@given(xs, ys)
def test_error_is_tolerance_plus_rounding(X, Y):
    # err = truncation tail (<= abs_tol) + accumulated rounding of the terms
    for kind, fn in enumerate(FUNCS):
        scale = theta1d_sup(kind, X) * max(1.0, X ** -0.5) * max(1.0, 1 / X) ** kind
        assert fn(X, Y).err <= 1e-13 + 200 * np.finfo(float).eps * scale


def test_broadcasting():
    r = theta1d_dXY(np.array([0.4, 1.0, 3.0])[:, None], np.linspace(0, 0.5, 4)[None, :])
    assert np.shape(r.value) == (3, 4)
    assert np.shape(r.err) == (3, 4)


@pytest.mark.parametrize("X", [0.0, -1.0])
def test_nonpositive_X_rejected(X):
    with pytest.raises(InvalidDomain):
        theta1d(X, 0.1)


def test_tolerance_not_met_when_capped():
    with pytest.raises(ToleranceNotMet):
        theta1d(0.01, 0.2, Truncation(abs_tol=1e-15, max_terms=1), method="q")


def test_quotient_ranges_at_sample_points():
    # ratio theta_XXY/theta_Y at X=1/2 sits in [15 - 4 pi, 15 + 4 pi]
    q = theta1d_dXXY(0.5, 0.25).value / theta1d_dY(0.5, 0.25).value
    assert 15 - 4 * math.pi <= q <= 15 + 4 * math.pi
    # theta_XY/theta_Y at X=0.4 stays below pi / (4 X^2)
    q = theta1d_dXY(0.4, 0.3).value / theta1d_dY(0.4, 0.3).value
    assert q <= math.pi / (4 * 0.4 ** 2)
