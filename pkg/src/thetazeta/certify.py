r"""Explicit lower bounds and grid sign certification.

Two kinds of checks live here.

* Closed-form lower bounds for :math:`\theta_{xy}` and :math:`-\theta_{xyy}`
  (``alpha >= 1``) together with the bracket constants that make them
  positive, split by ``y/alpha >= 1/2`` (case A) or ``<= 1/2`` (case B).
* Grid certification: a derivative is sampled on a region, and a
  :class:`SignCertificate` is issued only if ``sign * value > err`` at every
  sample (``>= -err`` for the non-strict claims).

Certificates are grid statements, not proofs on the continuum.  Above
``y_cap`` every certified quantity decays like ``exp(-pi alpha y)`` (theta) or
the matching Mellin average (zeta), so the sign there is governed by the
leading term already visible at the cap.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import lattice
from ._numerics import (DEFAULT_TRUNCATION, EPS, InvalidDomain, ThetaZetaError,
                        Truncation, ValueWithError, vwe)
from .series_bounds import aux_series
from .theta1d import theta1d_dY

PI = math.pi
SQRT3 = math.sqrt(3.0)
DEFAULT_SEED = 0x5EED

# case-B coefficient bound on the theta_XY / theta_Y quotient for X <= 1/2
CASE_B_QUOTIENT = (1.5 + 16 * PI * math.exp(-2 * PI)) / (1 - 8 * PI * math.exp(-2 * PI))


# -- regions and grids -----------------------------------------------------------

@dataclass(frozen=True)
class Region:
    """Sampling region in the upper half plane.

    ``kind`` is ``"strip"`` (0 < x < 1/2, y >= y0), ``"fundamental_open"``,
    ``"fundamental_closed"`` or ``"arc"`` (|z| = 1, x in [0, 1/2]).
    """

    kind: str
    y0: float = 0.6
    y_cap: float = 10.0

    def __post_init__(self):
        if self.kind not in ("strip", "fundamental_open", "fundamental_closed", "arc"):
            raise InvalidDomain(f"unknown region kind {self.kind!r}")
        if self.kind == "strip" and not 0 < self.y0 < self.y_cap:
            raise InvalidDomain("strip needs 0 < y0 < y_cap")

    def describe(self) -> str:
        if self.kind == "strip":
            return f"strip 0<x<1/2, {self.y0:g}<=y<={self.y_cap:g}"
        return f"{self.kind}, y<={self.y_cap:g}"


@dataclass(frozen=True)
class GridSpec:
    """``nx`` by ``ny`` samples; ``inset`` keeps open boundaries at a distance.

    The y-axis is geometric between the lower edge and ``y_cap`` because every
    quantity varies on the scale of ``y`` itself.
    """

    nx: int = 60
    ny: int = 60
    inset: float = 1e-3

    def __post_init__(self):
        if self.nx < 2 or self.ny < 2:
            raise InvalidDomain("grid needs at least 2 samples per axis")
        if not 0 <= self.inset < 0.05:
            raise InvalidDomain("inset must lie in [0, 0.05)")


def sample_region(region: Region, grid: GridSpec = GridSpec()) -> np.ndarray:
    """Complex sample points (flat array) of ``region`` on ``grid``."""
    ins = grid.inset
    if region.kind == "arc":
        t = np.linspace(PI / 3, PI / 2, grid.nx)
        return np.exp(1j * t)
    closed = region.kind == "fundamental_closed"
    x = np.linspace(0.0 if closed else ins, 0.5 if closed else 0.5 - ins, grid.nx)
    if region.kind == "strip":
        lo = np.full_like(x, region.y0)
    else:
        lo = np.sqrt(1.0 - x * x) + (0.0 if closed else ins)
    u = np.linspace(0.0, 1.0, grid.ny)[:, None]
    y = lo[None, :] * (region.y_cap / lo[None, :]) ** u
    return (x[None, :] + 1j * y).ravel()


# -- derivative evaluation ----------------------------------------------------------

THETA_DERIVATIVES = ("theta_x", "theta_y", "theta_xy", "theta_xyy")
ZETA_DERIVATIVES = ("zeta_x", "zeta_y", "zeta_xy", "zeta_xyy")

_THETA_FN = {"theta_x": lattice.theta_x, "theta_y": lattice.theta_y,
             "theta_xy": lattice.theta_xy, "theta_xyy": lattice.theta_xyy}


def evaluate_theta_derivative(name, alpha, z, trunc=None) -> ValueWithError:
    """Theta derivative with ``alpha < 1`` reduced through ``theta(a) = theta(1/a) / a``."""
    if not alpha > 0:
        raise InvalidDomain("alpha must be positive")
    fn = _THETA_FN[name]
    if alpha < 1:
        r = fn(1.0 / alpha, z, trunc)
        return vwe(np.asarray(r.value) / alpha, np.asarray(r.err) / alpha + EPS * np.abs(r.value))
    return fn(alpha, z, trunc)


def evaluate_zeta_derivatives(name, s_values, z, method="mellin", trunc=None):
    """List of results for each ``s``; ``method`` is ``"mellin"`` or ``"termwise"``."""
    order = name.split("_", 1)[1]
    if method == "mellin":
        return lattice.zeta_mellin_multi(s_values, z, order, trunc)
    if method != "termwise":
        raise ValueError(f"unknown zeta method {method!r}")
    out = []
    zf = np.asarray(z).ravel()
    for s in s_values:
        vals = [lattice.zeta_partial_termwise(s, zi, order, trunc) for zi in zf]
        out.append(vwe(np.array([v.value for v in vals]), np.array([v.err for v in vals])))
    return out


# -- certificates --------------------------------------------------------------------

@dataclass
class SignCertificate:
    region: str
    derivative: str
    params: dict
    claimed_sign: int
    strict: bool
    passed: bool
    n_samples: int
    worst_margin: float
    worst_slack: float
    worst_point: tuple
    min_ratio: float
    grid: dict
    skipped: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    note: str = ""
    samples: dict | None = field(default=None, repr=False)

    def to_dict(self, with_samples=False) -> dict:
        d = asdict(self)
        if not with_samples:
            d.pop("samples")
        return d


def _certificate(region, derivative, params, sign, strict, z, res, grid, note="",
                 skipped=None) -> SignCertificate:
    v = np.asarray(res.value, dtype=float).ravel()
    e = np.asarray(res.err, dtype=float).ravel()
    margin = sign * v
    slack = margin - e if strict else margin + e
    ok = slack > 0 if strict else slack >= 0
    i = int(np.argmin(margin))
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(e > 0, margin / e, np.inf)
    bad = np.flatnonzero(~ok)
    violations = [dict(x=float(z[j].real), y=float(z[j].imag), value=float(v[j]), err=float(e[j]))
                  for j in bad[:10]]
    skipped = skipped or []
    return SignCertificate(
        region=region.describe(), derivative=derivative, params=params,
        claimed_sign=sign, strict=strict, passed=bool(ok.all()) and not skipped,
        n_samples=int(v.size), worst_margin=float(margin[i]),
        worst_slack=float(slack.min()), worst_point=(float(z[i].real), float(z[i].imag)),
        min_ratio=float(ratio.min()), grid=dict(nx=grid.nx, ny=grid.ny, inset=grid.inset,
                                               y_cap=region.y_cap),
        skipped=skipped, violations=violations, note=note,
        samples=dict(x=z.real, y=z.imag, value=v, err=e))


def _failed_certificate(region, derivative, params, sign, strict, grid, reason):
    return SignCertificate(
        region=region.describe(), derivative=derivative, params=params, claimed_sign=sign,
        strict=strict, passed=False, n_samples=0, worst_margin=float("nan"),
        worst_slack=float("nan"), worst_point=(float("nan"), float("nan")),
        min_ratio=float("nan"), grid=dict(nx=grid.nx, ny=grid.ny, inset=grid.inset,
                                          y_cap=region.y_cap),
        skipped=[reason], note=reason)


def certify_sign(region: Region, derivative: str, params, sign: int, strict: bool = True,
                 grid: GridSpec = GridSpec(), zeta_method: str = "mellin",
                 trunc: Truncation | None = None, threads: int = 1,
                 fail_fast: bool = False) -> list[SignCertificate]:
    """One certificate per parameter value.

    ``params`` is a sequence of alpha (theta derivatives) or s (zeta
    derivatives).  Theta parameters are independent and may run on ``threads``
    workers; zeta parameters share one Mellin pass.  With
    ``zeta_method="termwise"`` points are summed one at a time and
    ``fail_fast`` stops at the first violating sample.
    """
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    z = sample_region(region, grid)
    params = [float(p) for p in params]
    if derivative in THETA_DERIVATIVES:
        for a in params:
            if not a > 0:
                raise InvalidDomain(f"alpha must be positive, got {a}")

        def one(a):
            res = evaluate_theta_derivative(derivative, a, z, trunc)
            return _certificate(region, derivative, {"alpha": a}, sign, strict, z, res, grid)

        if threads > 1 and len(params) > 1:
            with ThreadPoolExecutor(max_workers=threads) as ex:
                return list(ex.map(one, params))
        return [one(a) for a in params]
    if derivative in ZETA_DERIVATIVES:
        for s in params:
            if not s > 1:
                raise InvalidDomain(f"s must exceed 1, got {s}")
        if zeta_method == "termwise":
            return [_termwise_certificate(region, derivative, s_, sign, strict, z, grid, trunc,
                                          fail_fast) for s_ in params]
        try:
            results = evaluate_zeta_derivatives(derivative, params, z, zeta_method, trunc)
        except ThetaZetaError as exc:
            return [_failed_certificate(region, derivative, {"s": s, "method": zeta_method},
                                        sign, strict, grid, f"{type(exc).__name__}: {exc}")
                    for s in params]
        return [_certificate(region, derivative, {"s": s, "method": zeta_method}, sign, strict,
                             z, r, grid) for s, r in zip(params, results)]
    raise ValueError(f"unknown derivative {derivative!r}")


def _termwise_certificate(region, derivative, s, sign, strict, z, grid, trunc, fail_fast):
    params = {"s": s, "method": "termwise"}
    order = derivative.split("_", 1)[1]
    vals, errs, done = [], [], []
    for zi in z:
        try:
            r = lattice.zeta_partial_termwise(s, zi, order, trunc)
        except ThetaZetaError as exc:
            return _failed_certificate(region, derivative, params, sign, strict, grid,
                                       f"{type(exc).__name__} at z={zi}: {exc}")
        vals.append(r.value)
        errs.append(r.err)
        done.append(zi)
        m = sign * r.value
        if fail_fast and not (m - r.err > 0 if strict else m + r.err >= 0):
            break
    zs = np.array(done)
    cert = _certificate(region, derivative, params, sign, strict, zs,
                        vwe(np.array(vals), np.array(errs)), grid)
    if zs.size < z.size:
        cert.passed = False
        cert.note = f"stopped at first violation after {zs.size} of {z.size} samples"
    return cert


# claim -> list of (derivative, region, sign, strict)
CLAIMS = {
    "prop1": [("zeta_y", Region("strip", y0=1.5), +1, True)],
    "prop2": [("zeta_x", Region("strip", y0=0.6), -1, True)],
    "prop3": [("theta_y", Region("fundamental_closed"), +1, False)],
    "prop4": [("theta_x", Region("strip", y0=0.5), -1, False)],
    "thm1-1": [("theta_xy", Region("strip", y0=0.6), +1, True),
               ("zeta_xy", Region("strip", y0=0.6), +1, True)],
    "thm1-2": [("theta_xyy", Region("fundamental_open"), -1, True),
               ("zeta_xyy", Region("fundamental_open"), -1, True)],
}

DEFAULT_ALPHAS = {"thm1-1": (0.5, 1.0, 2.0, 4.0), "thm1-2": (1.0, 2.0)}
DEFAULT_ALPHA = (0.5, 1.0, 2.0)
DEFAULT_S = (1.5, 2.0, 4.0)


def certify_claim(claim: str, alphas=None, s_values=None, grid: GridSpec = GridSpec(),
                  y_cap: float = 10.0, zeta_method: str = "mellin",
                  trunc: Truncation | None = None, threads: int = 1,
                  fail_fast: bool = False) -> list[SignCertificate]:
    """Run every sign check belonging to ``claim`` (a key of :data:`CLAIMS`)."""
    if claim not in CLAIMS:
        raise ValueError(f"unknown claim {claim!r}")
    alphas = DEFAULT_ALPHAS.get(claim, DEFAULT_ALPHA) if alphas is None else alphas
    s_values = DEFAULT_S if s_values is None else s_values
    out = []
    for deriv, region, sign, strict in CLAIMS[claim]:
        region = Region(region.kind, region.y0, y_cap)
        params = alphas if deriv.startswith("theta") else s_values
        if len(params) == 0:
            continue
        out.extend(certify_sign(region, deriv, params, sign, strict, grid, zeta_method,
                                trunc, threads, fail_fast))
    return out


# -- closed-form lower bounds and their constants -----------------------------------

def _aux_interval(kind, X, trunc):
    r = aux_series(kind, X, trunc)
    return np.asarray(r.value), np.asarray(r.err)


def _monotone_eval(fn, args):
    """Evaluate ``fn`` (nondecreasing in every argument) at the lower and upper
    ends of ``args = [(value, err), ...]`` and return value with half-width."""
    lo = fn(*[v - e for v, e in args])
    hi = fn(*[v + e for v, e in args])
    mid = fn(*[v for v, _ in args])
    err = np.maximum(hi - mid, mid - lo) + 8 * EPS * np.abs(mid)
    return vwe(mid, err)


def epsilon1(alpha, y, trunc: Truncation | None = None) -> ValueWithError:
    """Case-A remainder: sum of three groups of auxiliary series.

    With ``X = y/alpha`` and ``t = alpha*y``::

        (1+mu(X))/(1-mu(X)) * (omega(t) + mu(t)/(4 pi^2 t^2) + nu(t)/(pi t))
      + (1+nu(X))/(1-mu(X)) * (mu(t)/(pi alpha^2 t) + 2 nu(t)/alpha^2)
      + mu(t)/alpha^4 * (1+omega(X))/(1-mu(X))

    Requires ``y/alpha >= 1/2``.
    """
    alpha, y = np.broadcast_arrays(np.asarray(alpha, float), np.asarray(y, float))
    if not (np.all(alpha > 0) and np.all(y > 0)):
        raise InvalidDomain("epsilon1 needs alpha > 0 and y > 0")
    if not np.all(y / alpha >= 0.5 - 1e-15):
        raise InvalidDomain("epsilon1 is defined for y/alpha >= 1/2")
    trunc = DEFAULT_TRUNCATION if trunc is None else trunc
    X, t = y / alpha, alpha * y
    args = [_aux_interval(k, X, trunc) for k in ("mu", "nu", "omega")] + \
           [_aux_interval(k, t, trunc) for k in ("mu", "nu", "omega")]

    def fn(muX, nuX, omX, mut, nut, omt):
        den = 1 - muX
        return ((1 + muX) / den * (omt + mut / (4 * PI ** 2 * t * t) + nut / (PI * t))
                + (1 + nuX) / den * (mut / (PI * alpha ** 2 * t) + 2 * nut / alpha ** 2)
                + mut / alpha ** 4 * (1 + omX) / den)

    return _monotone_eval(fn, args)


def _shifted_sum(w, alpha, y, trunc):
    """sum_{n>=2} n^w exp(-pi alpha (y (n^2-1) - 1/(4y))) via the auxiliary series at alpha*y."""
    r = aux_series({2: "mu", 4: "nu", 6: "omega"}[w], alpha * y, trunc)
    f = np.exp(PI * alpha / (4 * y))
    return np.asarray(r.value) * f, np.asarray(r.err) * f


def epsilon2(alpha, y, trunc: Truncation | None = None) -> ValueWithError:
    """Case-B remainder for the third derivative::

        (1/pi) S6 + (4/(pi^2 alpha y) + 1/(2 pi y^2)) S4
          + (11/(2 pi^3 alpha^2 y^2) + 1/(4 pi^2 alpha y^3) + 1/(4 pi^2 y^4)) S2

    with ``Sw = sum_{n>=2} n^w exp(-pi alpha (y (n^2-1) - 1/(4y)))``.  Requires
    ``alpha >= sqrt(3)`` and ``y >= sqrt(3)/2``.
    """
    alpha, y = np.broadcast_arrays(np.asarray(alpha, float), np.asarray(y, float))
    if not (np.all(alpha >= SQRT3 - 1e-12) and np.all(y >= SQRT3 / 2 - 1e-12)):
        raise InvalidDomain("epsilon2 is defined for alpha >= sqrt(3), y >= sqrt(3)/2")
    trunc = DEFAULT_TRUNCATION if trunc is None else trunc
    args = [_shifted_sum(w, alpha, y, trunc) for w in (6, 4, 2)]

    def fn(s6, s4, s2):
        return (s6 / PI + (4 / (PI ** 2 * alpha * y) + 1 / (2 * PI * y * y)) * s4
                + (11 / (2 * PI ** 3 * alpha ** 2 * y ** 2) + 1 / (4 * PI ** 2 * alpha * y ** 3)
                   + 1 / (4 * PI ** 2 * y ** 4)) * s2)

    return _monotone_eval(fn, args)


def case_b_sum(alpha, y, trunc: Truncation | None = None) -> ValueWithError:
    """Second-derivative case-B remainder (bounded by 0.039 for y >= 3/5, alpha >= 2y)::

        (1/pi) S4 + (2/(pi^2 alpha y) + 1/(4 pi y^2)) S2
    """
    alpha, y = np.broadcast_arrays(np.asarray(alpha, float), np.asarray(y, float))
    if not (np.all(alpha > 0) and np.all(y > 0)):
        raise InvalidDomain("case_b_sum needs alpha > 0 and y > 0")
    trunc = DEFAULT_TRUNCATION if trunc is None else trunc
    args = [_shifted_sum(w, alpha, y, trunc) for w in (4, 2)]
    return _monotone_eval(
        lambda s4, s2: s4 / PI + (2 / (PI ** 2 * alpha * y) + 1 / (4 * PI * y * y)) * s2, args)


def _constants_at_half(trunc):
    mu = aux_series("mu", 0.5, trunc).value
    nu = aux_series("nu", 0.5, trunc).value
    mu35 = aux_series("mu", 0.6, trunc).value
    nu35 = aux_series("nu", 0.6, trunc).value
    r = (1 + mu) / (1 - mu)
    return r * mu35, r * nu35


def bracket_xy_case_a(alpha, y, trunc=None) -> ValueWithError:
    """``1 - (1 + c2)/(2 pi alpha y) - c3``; at least 2/3 when alpha*y >= 3/5."""
    c2, c3 = _constants_at_half(trunc)
    v = 1 - (1 + c2) / (2 * PI * np.asarray(alpha) * np.asarray(y)) - c3
    # c2, c3 carry errors near 1e-16; 1e-12 covers them with room to spare
    return vwe(v, np.full_like(v, 1e-12))


def bracket_xy_case_b(alpha, y, trunc=None) -> ValueWithError:
    """``1 - 1/(2 pi alpha y) - 1/(4 y^2) - case_b_sum``; at least 1/200 on its range."""
    s = case_b_sum(alpha, y, trunc)
    v = 1 - 1 / (2 * PI * np.asarray(alpha) * np.asarray(y)) - 1 / (4 * np.asarray(y) ** 2) - s.value
    return vwe(v, np.asarray(s.err) + 4 * EPS)


def bracket_xyy_case_a(alpha, y, trunc=None) -> ValueWithError:
    """``1 - 1/(pi alpha y) - epsilon1``; at least 1/2 on its range."""
    e = epsilon1(alpha, y, trunc)
    v = 1 - 1 / (PI * np.asarray(alpha) * np.asarray(y)) - e.value
    return vwe(v, np.asarray(e.err) + 4 * EPS)


def bracket_xyy_case_b(alpha, y, trunc=None) -> ValueWithError:
    """``1 + (7/2 - K)/(pi^2 alpha^2 y^2) - 1/(pi alpha y) - 1/(2y^2) - 1/(4 pi y^4) - epsilon2``
    with ``K = (3/2 + 16 pi e^{-2pi}) / (1 - 8 pi e^{-2pi})``; at least 1/100."""
    e = epsilon2(alpha, y, trunc)
    a, yy = np.asarray(alpha, float), np.asarray(y, float)
    v = (1 + (3.5 - CASE_B_QUOTIENT) / (PI ** 2 * a * a * yy * yy) - 1 / (PI * a * yy)
         - 1 / (2 * yy * yy) - 1 / (4 * PI * yy ** 4) - e.value)
    return vwe(v, np.asarray(e.err) + 8 * EPS)


@dataclass
class LowerBound:
    """``bound`` is the stated lower bound, ``actual`` the evaluated derivative
    (sign-adjusted so the claim reads ``actual >= bound``); ``case_bound`` is
    the sharper bound of the applicable case.  Unpacks as ``(bound, actual)``."""

    bound: ValueWithError
    actual: ValueWithError
    case: np.ndarray
    case_bound: ValueWithError

    def __iter__(self):
        yield self.bound
        yield self.actual

    def holds(self):
        slack = (np.asarray(self.actual.value) - np.asarray(self.bound.value)
                 + np.asarray(self.actual.err) + np.asarray(self.bound.err))
        return np.all(slack >= 0)


def _lead_factor(alpha, x, y, trunc):
    dy = theta1d_dY(y / alpha, x, trunc)
    g = np.sqrt(y) * np.exp(-PI * alpha * y)
    return -np.asarray(dy.value) * g, np.asarray(dy.err) * g


def lower_bound_theta_xy(alpha, z, trunc: Truncation | None = None) -> LowerBound:
    """``theta_xy >= (pi/10) sqrt(alpha y) (-theta_Y(y/alpha; x)) exp(-pi alpha y)``.

    Requires ``alpha >= 1``, ``0 < x < 1/2`` and ``y >= 3/5``.  The case
    factor is ``4 pi/3`` for ``y/alpha >= 1/2`` and ``pi/100`` otherwise.
    """
    x, y = lattice._split(z)
    alpha = np.broadcast_to(np.asarray(alpha, float), x.shape)
    if not np.all(alpha >= 1):
        raise InvalidDomain("lower_bound_theta_xy needs alpha >= 1")
    if not (np.all((x > 0) & (x < 0.5)) and np.all(y >= 0.6 - 1e-12)):
        raise InvalidDomain("lower_bound_theta_xy needs 0 < x < 1/2 and y >= 3/5")
    f, fe = _lead_factor(alpha, x, y, trunc)
    ra = np.sqrt(alpha)
    case = np.where(y / alpha >= 0.5, "A", "B")
    factor = np.where(case == "A", 4 * PI / 3, PI / 100)
    actual = lattice.theta_xy(alpha, z, trunc)
    return LowerBound(bound=vwe(PI / 10 * ra * f, PI / 10 * ra * fe), actual=actual,
                      case=case, case_bound=vwe(factor * ra * f, factor * ra * fe))


def lower_bound_neg_theta_xyy(alpha, z, trunc: Truncation | None = None) -> LowerBound:
    """``-theta_xyy >= (pi^2/50) alpha^{3/2} y^{1/2} (-theta_Y(y/alpha; x)) exp(-pi alpha y)``.

    Requires ``alpha >= 1`` and ``z`` in the open fundamental domain.  The case
    factor is ``pi^2`` for ``y/alpha >= 1/2`` and ``pi^2/50`` otherwise.
    """
    x, y = lattice._split(z)
    alpha = np.broadcast_to(np.asarray(alpha, float), x.shape)
    if not np.all(alpha >= 1):
        raise InvalidDomain("lower_bound_neg_theta_xyy needs alpha >= 1")
    if not np.all((x > 0) & (x < 0.5) & (x * x + y * y > 1)):
        raise InvalidDomain("lower_bound_neg_theta_xyy needs z in the open fundamental domain")
    f, fe = _lead_factor(alpha, x, y, trunc)
    a32 = alpha ** 1.5
    case = np.where(y / alpha >= 0.5, "A", "B")
    factor = np.where(case == "A", PI ** 2, PI ** 2 / 50)
    r = lattice.theta_xyy(alpha, z, trunc)
    actual = vwe(-np.asarray(r.value), r.err)
    return LowerBound(bound=vwe(PI ** 2 / 50 * a32 * f, PI ** 2 / 50 * a32 * fe), actual=actual,
                      case=case, case_bound=vwe(factor * a32 * f, factor * a32 * fe))


@dataclass
class BoundSuiteReport:
    passed: bool
    checks: dict


def bound_suite(alphas=(1.0, 2.0, 4.0), grid: GridSpec = GridSpec(30, 30),
                y_cap: float = 10.0, trunc: Truncation | None = None) -> BoundSuiteReport:
    """Check both lower bounds on the certification grids and the bracket
    constants on their hypothesis ranges."""
    checks = {}
    strip = sample_region(Region("strip", 0.6, y_cap), grid)
    dom = sample_region(Region("fundamental_open", y_cap=y_cap), grid)
    for a in alphas:
        lb = lower_bound_theta_xy(a, strip, trunc)
        slack = lb.actual.value - lb.bound.value + lb.actual.err + lb.bound.err
        cs = lb.actual.value - lb.case_bound.value + lb.actual.err + lb.case_bound.err
        checks[f"theta_xy bound alpha={a:g}"] = (bool(np.all(slack >= 0) and np.all(lb.bound.value > 0)),
                                                 float(np.min(lb.actual.value / lb.bound.value)))
        checks[f"theta_xy case bound alpha={a:g}"] = (bool(np.all(cs >= 0)),
                                                      float(np.min(lb.actual.value / lb.case_bound.value)))
        lb = lower_bound_neg_theta_xyy(a, dom, trunc)
        slack = lb.actual.value - lb.bound.value + lb.actual.err + lb.bound.err
        cs = lb.actual.value - lb.case_bound.value + lb.actual.err + lb.case_bound.err
        checks[f"-theta_xyy bound alpha={a:g}"] = (bool(np.all(slack >= 0) and np.all(lb.bound.value > 0)),
                                                   float(np.min(lb.actual.value / lb.bound.value)))
        checks[f"-theta_xyy case bound alpha={a:g}"] = (bool(np.all(cs >= 0)),
                                                        float(np.min(lb.actual.value / lb.case_bound.value)))

    # Bracket constants.  Every remainder decreases in alpha and y, so the
    # grids are laid out to contain the corners of each hypothesis range.
    u = np.linspace(0.0, 1.0, 60)
    k = np.geomspace(1.0, 20.0, 60)

    def case_b_grid(y_lo):
        Y, K = np.meshgrid(np.geomspace(y_lo, y_cap, 80), k)
        return (2 * Y * K).ravel(), Y.ravel()          # alpha >= 2y

    def case_a_grid(y_lo):
        Y, U = np.meshgrid(np.geomspace(y_lo, y_cap, 80), u)
        return (1 + (2 * Y - 1) * U).ravel(), Y.ravel()  # 1 <= alpha <= 2y

    A, Y = case_b_grid(0.6)
    v = case_b_sum(A, Y, trunc)
    checks["case-B sum <= 0.039"] = (bool(np.all(v.value + v.err <= 0.039)), float(np.max(v.value)))
    b = bracket_xy_case_b(A, Y, trunc)
    checks["theta_xy case-B bracket >= 1/200"] = (bool(np.all(b.value - b.err >= 1 / 200)),
                                                  float(np.min(b.value)))
    A, Y = case_a_grid(0.6)
    b = bracket_xy_case_a(A, Y, trunc)
    checks["theta_xy case-A bracket >= 2/3"] = (bool(np.all(b.value - b.err >= 2 / 3)),
                                                float(np.min(b.value)))
    A, Y = case_a_grid(SQRT3 / 2)
    v = epsilon1(A, Y, trunc)
    checks["epsilon1 <= 2/50"] = (bool(np.all(v.value + v.err <= 0.04)), float(np.max(v.value)))
    b = bracket_xyy_case_a(A, Y, trunc)
    checks["-theta_xyy case-A bracket >= 1/2"] = (bool(np.all(b.value - b.err >= 0.5)),
                                                  float(np.min(b.value)))
    A, Y = case_b_grid(SQRT3 / 2)
    v = epsilon2(A, Y, trunc)
    checks["epsilon2 <= 1e-4"] = (bool(np.all(v.value + v.err <= 1e-4)), float(np.max(v.value)))
    b = bracket_xyy_case_b(A, Y, trunc)
    checks["-theta_xyy case-B bracket >= 1/100"] = (bool(np.all(b.value - b.err >= 0.01)),
                                                    float(np.min(b.value)))
    return BoundSuiteReport(passed=all(ok for ok, _ in checks.values()), checks=checks)


# -- minimum on the arc ------------------------------------------------------------

@dataclass
class ArcReport:
    derivative: str
    param: float
    passed: bool
    min_domain: float
    argmin_domain: tuple
    min_arc: float
    argmin_arc: tuple
    grid_tol: float
    tie_on_arc: bool
    resolution: float
    n_domain: int


def _closed_domain_grid(h, y_cap):
    xs = np.arange(0.0, 0.5 + h / 2, h)
    cols, on_arc = [], []
    for x in xs:
        lo = math.sqrt(1 - x * x)
        ys = lo + np.arange(0.0, y_cap - lo + h / 2, h)
        cols.append(x + 1j * ys)
        on_arc.append(np.arange(ys.size) == 0)
    return xs, cols, np.concatenate(cols), np.concatenate(on_arc)


def arc_restriction_check(derivative: str, param: float, resolution: float = 1e-2,
                          y_cap: float = 2.5, trunc: Truncation | None = None) -> ArcReport:
    """Compare the grid minimum over the closed fundamental domain with the
    minimum over the arc ``|z| = 1``.

    Columns ``x = 0, h, ..., 1/2`` start on the arc and rise in steps ``h``.
    ``grid_tol`` is the largest difference between neighbouring samples.  The
    check passes when the two minima differ by at most ``grid_tol`` and some
    sample tied with the domain minimum (within its error bound) lies within
    one grid cell of the arc; ties matter because ``theta_xy`` vanishes on the
    whole line ``x = 0``.
    """
    if derivative not in ("theta_x", "theta_xy", "zeta_x", "zeta_xy"):
        raise ValueError(f"unsupported derivative {derivative!r}")
    h = float(resolution)
    xs, cols, z, on_arc = _closed_domain_grid(h, y_cap)
    n_arc = max(int(math.ceil((PI / 6) / h)) + 1, 2)
    zarc = np.exp(1j * np.linspace(PI / 3, PI / 2, n_arc))
    allz = np.concatenate([z, zarc])
    if derivative.startswith("theta"):
        r = evaluate_theta_derivative(derivative, param, allz, trunc)
    else:
        r = evaluate_zeta_derivatives(derivative, [param], allz, "mellin", trunc)[0]
    v, e = np.asarray(r.value), np.asarray(r.err)
    vd, ed, va = v[:z.size], e[:z.size], v[z.size:]
    # neighbour differences inside columns and between adjacent columns
    diffs = [0.0]
    pos = 0
    col_vals = []
    for c in cols:
        cv = vd[pos:pos + c.size]
        col_vals.append(cv)
        if cv.size > 1:
            diffs.append(np.max(np.abs(np.diff(cv))))
        pos += c.size
    for c1, c2 in zip(col_vals, col_vals[1:]):
        m = min(c1.size, c2.size)
        diffs.append(np.max(np.abs(c1[-m:] - c2[-m:])))
    grid_tol = float(max(diffs))
    i = int(np.argmin(vd))
    j = int(np.argmin(va))
    min_dom, min_arc = float(vd[i]), float(va[j])
    tied = vd <= vd[i] + ed[i] + ed
    dist = np.abs(np.abs(z) - 1.0)
    tie_on_arc = bool(np.any(tied & (dist <= h + 1e-12)))
    passed = abs(min_dom - min_arc) <= grid_tol and tie_on_arc
    return ArcReport(derivative=derivative, param=float(param), passed=bool(passed),
                     min_domain=min_dom, argmin_domain=(float(z[i].real), float(z[i].imag)),
                     min_arc=min_arc, argmin_arc=(float(zarc[j].real), float(zarc[j].imag)),
                     grid_tol=grid_tol, tie_on_arc=tie_on_arc, resolution=h, n_domain=int(z.size))


def random_admissible_points(n: int, seed: int = DEFAULT_SEED, y_cap: float = 3.0) -> np.ndarray:
    """Seeded uniform points of the strip 0 < x < 1/2, 3/5 <= y <= y_cap."""
    rng = np.random.default_rng(seed)
    x = rng.uniform(1e-3, 0.5 - 1e-3, n)
    y = rng.uniform(0.6, y_cap, n)
    return x + 1j * y


__all__ = [
    "Region", "GridSpec", "SignCertificate", "LowerBound", "ArcReport", "BoundSuiteReport",
    "sample_region", "certify_sign", "certify_claim", "CLAIMS", "epsilon1", "epsilon2",
    "case_b_sum", "bracket_xy_case_a", "bracket_xy_case_b", "bracket_xyy_case_a",
    "bracket_xyy_case_b", "lower_bound_theta_xy", "lower_bound_neg_theta_xyy", "bound_suite",
    "arc_restriction_check", "evaluate_theta_derivative", "evaluate_zeta_derivatives",
    "random_admissible_points", "DEFAULT_SEED",
]
