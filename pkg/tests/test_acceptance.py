"""Acceptance checks, one test per criterion.

Each test records a PASS/FAIL line (printed in the terminal summary) and then
asserts, so a failing criterion also fails the run.
"""
import json
import math
import subprocess
import sys
import time

import numpy as np

import oracles
from thetazeta import (GridSpec, Q, Truncation, arc_restriction_check, bound_suite,
                       certify_claim, f_positivity_suite, minimize, bound_constants,
                       theta1d, theta1d_dXXY, theta1d_dXY, theta1d_dY, theta_direct,
                       theta_expansion, theta_xy, theta_xyy, zeta_direct, zeta_mellin)
from thetazeta.certify import random_admissible_points
from thetazeta.series_bounds import PRINTED_CONSTANTS, tail_ratio_derivative, tail_ratio_value

SQ3 = math.sqrt(3)
HEX = complex(0.5, SQ3 / 2)


def cli(*args):
    t = time.perf_counter()
    p = subprocess.run([sys.executable, "-m", "thetazeta", *map(str, args), "--json"],
                       capture_output=True, text=True, timeout=600)
    return p.returncode, json.loads(p.stdout), time.perf_counter() - t


def domain_grid(n=5, y_max=2.5):
    pts = []
    for x in np.linspace(0.02, 0.48, n):
        lo = math.sqrt(1 - x * x) + 0.02
        pts.extend(complex(x, y) for y in np.linspace(lo, y_max, n))
    return np.array(pts)


def test_criterion_01_constants(criterion):
    t = time.perf_counter()
    c = bound_constants()
    elapsed = time.perf_counter() - t
    diffs = {k: abs(c[k] - PRINTED_CONSTANTS[k]) for k in ("c2", "c3", "c4", "c5", "c6")}
    code, rep, _ = cli("constants")
    c1 = next(r for r in rep["results"] if r["name"] == "c1")["value"]
    ok = max(diffs.values()) <= 2e-3 and code == 0 and elapsed < 1.0
    criterion(1, ok, f"max |c2..c6 - printed| = {max(diffs.values()):.2e}; "
                     f"c1 = {c1:.7f} vs printed {PRINTED_CONSTANTS['c1']} "
                     f"(diff {PRINTED_CONSTANTS['c1'] - c1:.2e}, reported); {elapsed:.3f} s")
    assert ok


def test_criterion_02_zeta_closed_form(criterion):
    t = time.perf_counter()
    worst = 0.0
    for s in (2, 3, 4):
        exact = oracles.square_lattice_zeta(s)
        assert abs(exact - oracles.ZETA_SQUARE[s]) <= 1e-13
        for fn in (zeta_direct, zeta_mellin):
            worst = max(worst, abs(fn(s, 1j).value - exact))
    elapsed = time.perf_counter() - t
    ok = worst <= 1e-8 and elapsed < 5
    criterion(2, ok, f"max |zeta(s;i) - 4 zeta(s) beta(s)| = {worst:.2e} for s = 2,3,4; {elapsed:.2f} s")
    assert ok


def test_criterion_03_representation_agreement(criterion):
    t = Truncation(abs_tol=1e-12)
    X, Y = np.meshgrid([0.2, 0.5, 1.0, 2.0, 5.0], [0.0, 0.1, 0.2, 0.3, 0.4, 0.5])
    one_d = 0.0
    for fn in (theta1d, theta1d_dY, theta1d_dXY, theta1d_dXXY):
        q, p = fn(X, Y, t, method="q"), fn(X, Y, t, method="poisson")
        one_d = max(one_d, float(np.max(np.abs(q.value - p.value))))
    z = domain_grid()
    two_d = 0.0
    for alpha in (0.5, 1.0, 2.0):
        two_d = max(two_d, float(np.max(np.abs(theta_expansion(alpha, z).value
                                                - theta_direct(alpha, z).value))))
    ok = one_d <= 1e-11 and two_d <= 1e-10
    criterion(3, ok, f"q vs Poisson {one_d:.2e} (<= 1e-11); expansion vs direct {two_d:.2e} (<= 1e-10)")
    assert ok


def test_criterion_04_functional_equation(criterion):
    z = np.concatenate([domain_grid(), random_admissible_points(50)])
    worst = 0.0
    for alpha in (0.25, 0.5, 0.8, 1.0, 1.7, 3.0):
        lhs = theta_direct(1 / alpha, z).value
        rhs = alpha * theta_direct(alpha, z).value
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    ok = worst <= 1e-10
    criterion(4, ok, f"max |theta(1/a;z) - a theta(a;z)| = {worst:.2e} over {z.size} points x 6 alphas")
    assert ok


def _mixed_fd(f, x, y, h, ny):
    def dx(yy):
        return (f(x + h, yy) - f(x - h, yy)) / (2 * h)
    if ny == 1:
        return (dx(y + h) - dx(y - h)) / (2 * h)
    return (dx(y + h) - 2 * dx(y) + dx(y - h)) / h ** 2


def _richardson(f, x, y, h, ny):
    return (4 * _mixed_fd(f, x, y, h / 2, ny) - _mixed_fd(f, x, y, h, ny)) / 3


def test_criterion_05_derivative_oracles(criterion):
    # Differences of O(1) theta values cannot resolve theta_xy ~ 1e-7 higher up
    # the strip in binary64, so the sample band stops at y = 2.
    z = random_admissible_points(25, y_cap=2.0)
    h = 8e-3
    e_xy = e_xyy = 0.0
    for alpha in (0.5, 1.0, 2.0):
        def f(x, y):
            return theta_direct(alpha, complex(x, y)).value
        for p in z:
            e_xy = max(e_xy, abs(_richardson(f, p.real, p.imag, h, 1) / theta_xy(alpha, p).value - 1))
            e_xyy = max(e_xyy, abs(_richardson(f, p.real, p.imag, h, 2) / theta_xyy(alpha, p).value - 1))
    ok = e_xy <= 1e-5 and e_xyy <= 1e-4
    criterion(5, ok, f"relative FD error theta_xy {e_xy:.2e} (<= 1e-5), theta_xyy {e_xyy:.2e} (<= 1e-4)")
    assert ok


def test_criterion_06_sign_certification(criterion):
    t = time.perf_counter()
    c1, rep1, _ = cli("certify", "--claim", "thm1-1")
    c2, rep2, _ = cli("certify", "--claim", "thm1-2")
    certs = rep1["certificates"] + rep2["certificates"]
    # thm1-1: 4 alphas + 3 s values; thm1-2: 2 alphas + 3 s values
    mellin_ok = (c1 == 0 and c2 == 0 and len(certs) == 12
                 and all(c["passed"] and c["worst_margin"] > 0 for c in certs))
    # zeta again, now by termwise sums; stop each certificate at its first violation
    termwise = []
    for claim in ("thm1-1", "thm1-2"):
        termwise += certify_claim(claim, alphas=[], grid=GridSpec(60, 60), zeta_method="termwise",
                                  fail_fast=True)
    termwise_ok = all(c.passed for c in termwise)
    elapsed = time.perf_counter() - t
    ok = mellin_ok and termwise_ok and elapsed < 60
    failed = [f"{c.derivative} s={c.params['s']:g}" for c in termwise if not c.passed]
    criterion(6, ok, f"theta + Mellin zeta: {'pass' if mellin_ok else 'FAIL'}; "
                     f"termwise zeta failures: {', '.join(failed) or 'none'}; {elapsed:.1f} s")
    assert ok


def test_criterion_07_lower_bounds(criterion):
    rep = bound_suite(grid=GridSpec(60, 60))
    failed = [k for k, (passed, _) in rep.checks.items() if not passed]
    detail = ", ".join(f"{k} (worst {rep.checks[k][1]:.10g})" for k in failed)
    criterion(7, rep.passed, f"{len(rep.checks) - len(failed)}/{len(rep.checks)} checks pass"
                             + (f"; failed: {detail}" if failed else ""))
    assert rep.passed


def test_criterion_08_quarter_bound_and_positivity(criterion):
    t = time.perf_counter()
    worst_q = 0.0
    for a in np.linspace(2.0, 30.0, 200):
        r = Q(a, np.linspace(0.0, 0.5, 202)[1:-1])
        worst_q = max(worst_q, float(np.max(np.abs(r.value) - r.err)))
    suite = f_positivity_suite()
    # each ratio at the corners of its own Y window
    ratios = [tail_ratio_derivative(a, Y)[0] for a in (2.0, 24.0) for Y in (0.4, 0.5)]
    values = [tail_ratio_value(a, Y)[0] for a in (2.0, 24.0) for Y in (0.05, 0.4)]
    elapsed = time.perf_counter() - t
    ok = (worst_q <= 0.25 and suite.passed and max(ratios) <= 1e-10 and max(values) <= 1e-7
          and elapsed < 30)
    criterion(8, ok, f"max |Q| = {worst_q:.4f}; positivity suite {'pass' if suite.passed else 'FAIL'} "
                     f"on {suite.n_points} points; tail ratios {max(ratios):.1e} / {max(values):.1e}; "
                     f"{elapsed:.1f} s")
    assert ok


def test_criterion_09_minimisation(criterion):
    rng = np.random.default_rng(20240601)
    starts = rng.uniform(-3, 3, 10) + 1j * np.exp(rng.uniform(math.log(0.2), math.log(5), 10))
    t = time.perf_counter()
    worst = 0.0
    for fn, params in (("theta", (1.0, 2.0)), ("zeta", (2.0, 3.0))):
        for p in params:
            for z0 in starts:
                r = minimize(fn, p, complex(z0))
                worst = max(worst, abs(r.point.real - HEX.real), abs(r.point.imag - HEX.imag))
    elapsed = time.perf_counter() - t
    ok = worst <= 1e-6 and elapsed < 30
    criterion(9, ok, f"40 runs, max coordinate distance to e^(i pi/3) {worst:.1e}; {elapsed:.1f} s")
    assert ok


def test_criterion_10_arc_restriction(criterion):
    reports = [arc_restriction_check(d, p, resolution=1e-2)
               for d, p in (("theta_x", 1.0), ("theta_xy", 1.0), ("zeta_x", 2.0), ("zeta_xy", 2.0))]
    ok = all(r.passed for r in reports)
    criterion(10, ok, "; ".join(f"{r.derivative}: {'pass' if r.passed else 'FAIL'}" for r in reports))
    assert ok
