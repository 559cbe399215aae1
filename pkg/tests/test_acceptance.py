"""Acceptance gate: one test per shipping criterion.

Each test ends by recording a single PASS/FAIL line through the
``acceptance_log`` fixture; the lines are echoed in a terminal summary
section after the run.
"""

import csv
import io
import json
import math
import time

import numpy as np
import pytest

from fracshadow.cli import main
from fracshadow.core import Interval, gamma
from fracshadow.expr import differentiate, evaluate, parse, to_source
from fracshadow.fence import Wall, build_fence, shadow
from fracshadow.operators import (
    caputo_derivative,
    feller_potential,
    gl_derivative,
    riesz_potential,
    rl_derivative,
    rl_integral_left,
    rl_integral_right,
    volterra_convolution,
)
from fracshadow.quad import classical_integrate
from fracshadow.timescale import LeftRLScale, scale_left

from test_expr import _random_expr

_POOL = ("1", "t", "t^2", "sin(t)", "t + 0.5*sin(t)")
_ALPHAS = (0.25, 0.5, 0.75)


def _classical_on(source, t):
    """Closed-form integral over [0, t] for the smooth pool."""
    return {
        "1": t,
        "t": t * t / 2.0,
        "t^2": t**3 / 3.0,
        "sin(t)": 1.0 - math.cos(t),
        "t + 0.5*sin(t)": t * t / 2.0 + 0.5 * (1.0 - math.cos(t)),
    }[source]


def _verdict(log, ok, label, detail):
    line = f"{'PASS' if ok else 'FAIL'} {label}: {detail}"
    log(line)
    assert ok, line


def test_criterion_01_table1(acceptance_log, capsys):
    main(["demo", "table1"])  # warm the import and transport paths
    capsys.readouterr()
    start = time.perf_counter()
    code = main(["demo", "table1"])
    elapsed = time.perf_counter() - start
    out = capsys.readouterr().out
    lines = out.splitlines()
    ok = (
        code == 0
        and lines[-2] == "S_N = 79"
        and lines[-1] == "S_O = 1368"
        and elapsed < 0.1
    )
    _verdict(
        acceptance_log, ok, "criterion 01 (table 1)",
        f"S_N = 79 and S_O = 1368 exact, {elapsed * 1000.0:.1f} ms",
    )


def test_criterion_02_power_rule(acceptance_log):
    worst = 0.0
    start = time.perf_counter()
    for beta in (0.0, 1.0, 2.0):
        f = parse("1") if beta == 0.0 else parse(f"t^{beta:g}")
        for alpha in _ALPHAS:
            exact = gamma(beta + 1.0) / gamma(alpha + beta + 1.0)
            got = rl_integral_left(f, alpha, 1.0, n=4096).value
            worst = max(worst, abs(got - exact) / exact)
    elapsed = time.perf_counter() - start
    ok = worst <= 1e-6 and elapsed < 1.0
    _verdict(
        acceptance_log, ok, "criterion 02 (power rule)",
        f"9 cases, worst relative error {worst:.2e} at n=4096, {elapsed:.2f} s",
    )


def test_criterion_03_scaling_property(acceptance_log):
    rng = np.random.default_rng(42)
    worst = 0.0
    for _ in range(1000):
        alpha = float(rng.uniform(0.1, 1.9))
        t = float(rng.uniform(0.1, 10.0))
        tau = float(rng.uniform(0.0, t))
        k = float(rng.uniform(0.1, 4.0))
        rhs = k**alpha * scale_left(alpha, t, tau)
        gap = abs(scale_left(alpha, k * t, k * tau) - rhs) / (1.0 + abs(rhs))
        worst = max(worst, gap)
    ok = worst <= 1e-12
    _verdict(
        acceptance_log, ok, "criterion 03 (scaling property)",
        f"1000 random (alpha, t, tau, k), worst normalized gap {worst:.2e}",
    )


def test_criterion_04_riesz_decomposition(acceptance_log):
    rng = np.random.default_rng(4)
    ok = True
    worst = 0.0
    for _ in range(100):
        alpha = float(rng.uniform(0.1, 0.95))
        b = float(rng.uniform(1.0, 8.0))
        t = float(rng.uniform(0.05 * b, 0.95 * b))
        f = parse(str(rng.choice(_POOL)))
        whole = riesz_potential(f, alpha, t, b, n=256)
        left = rl_integral_left(f, alpha, t, n=256)
        right = rl_integral_right(f, alpha, t, b, n=256)
        gap = abs(whole.value - left.value - right.value)
        budget = whole.error_estimate + left.error_estimate + right.error_estimate
        # allow the roundoff of the three-term comparison itself
        slack = 8.0 * np.finfo(float).eps * (
            abs(whole.value) + abs(left.value) + abs(right.value)
        )
        worst = max(worst, gap)
        ok = ok and gap <= budget + slack
    _verdict(
        acceptance_log, ok, "criterion 04 (riesz decomposition)",
        f"100 random cases, worst |riesz - left - right| = {worst:.2e}",
    )


def test_criterion_05_shadow_operator_equality(acceptance_log):
    worst_gf = worst_tf = 0.0
    t = 10.0
    for source in _POOL:
        f = parse(source)
        exact_classical = _classical_on(source, t)
        for alpha in _ALPHAS:
            fence = build_fence(f, LeftRLScale(alpha, t), 4096)
            op = rl_integral_left(f, alpha, t, n=4096)
            gf = abs(shadow(fence, Wall.G_F).area - op.value) / abs(op.value)
            tf = abs(shadow(fence, Wall.TAU_F).area - exact_classical) / abs(exact_classical)
            worst_gf = max(worst_gf, gf)
            worst_tf = max(worst_tf, tf)
    ok = worst_gf <= 1e-3 and worst_tf <= 1e-3
    _verdict(
        acceptance_log, ok, "criterion 05 (shadow equals operator)",
        f"pool x alpha at t=10, n=4096: worst GF {worst_gf:.2e}, worst TauF {worst_tf:.2e}",
    )


def test_criterion_06_alpha_one_collapse(acceptance_log):
    f = parse("t + 0.5*sin(t)")
    t, b, n = 10.0, 16.0, 4096
    over_0t = classical_integrate(f, Interval(0.0, t), n=n).value
    over_tb = classical_integrate(f, Interval(t, b), n=n).value
    over_0b = classical_integrate(f, Interval(0.0, b), n=n).value
    checks = {
        "rl-left": (rl_integral_left(f, 1.0, t, n=n).value, over_0t),
        "rl-right": (rl_integral_right(f, 1.0, t, b, n=n).value, over_tb),
        "riesz": (riesz_potential(f, 1.0, t, b, n=n).value, over_0b),
        "feller": (
            feller_potential(f, 1.0, 2.0, -0.5, t, b=b, n=n).value,
            2.0 * over_0t - 0.5 * over_tb,
        ),
        "volterra": (volterra_convolution(f, "t", t, n=n).value, over_0t),
    }
    worst = max(abs(got - ref) / abs(ref) for got, ref in checks.values())
    fence = build_fence(f, LeftRLScale(1.0, t), n)
    shadow_gap = abs(shadow(fence, Wall.G_F).area - shadow(fence, Wall.TAU_F).area)
    ok = worst <= 1e-8 and shadow_gap <= 1e-10
    _verdict(
        acceptance_log, ok, "criterion 06 (alpha = 1 collapse)",
        f"five operators vs classical, worst {worst:.2e}; shadow gap {shadow_gap:.2e}",
    )


def test_criterion_07_rl_caputo_coincidence(acceptance_log):
    t = 2.0
    ok = True
    worst_pair = 0.0
    for source in ("t", "t^2", "sin(t)"):
        f = parse(source)
        for alpha in _ALPHAS:
            rl = rl_derivative(f, alpha, t)
            cap = caputo_derivative(f, alpha, t)
            gap = abs(rl.value - cap.value)
            worst_pair = max(worst_pair, gap)
            ok = ok and gap <= rl.error_estimate + cap.error_estimate
    worst_const = 0.0
    one = parse("1")
    for alpha in _ALPHAS:
        rl = rl_derivative(one, alpha, t)
        ok = ok and caputo_derivative(one, alpha, t).value == 0.0
        oracle = gl_derivative(one, alpha, t, n=2**15).value
        closed = t**-alpha / gamma(1.0 - alpha)
        worst_const = max(
            worst_const,
            abs(rl.value - closed) / closed,
            abs(oracle - closed) / closed,
        )
    ok = ok and worst_const <= 1e-3
    _verdict(
        acceptance_log, ok, "criterion 07 (RL-Caputo coincidence)",
        f"gaps within estimates (worst {worst_pair:.2e}); constant gap vs"
        f" t^-alpha/Gamma(1-alpha) worst {worst_const:.2e}",
    )


def test_criterion_08_derivative_cross_validation(acceptance_log):
    t = 10.0
    worst = 0.0
    for source in _POOL:
        f = parse(source)
        for alpha in _ALPHAS:
            rl = rl_derivative(f, alpha, t)
            gl = gl_derivative(f, alpha, t, n=2**15)
            worst = max(worst, abs(rl.value - gl.value) / abs(rl.value))
    ok = worst <= 1e-2
    _verdict(
        acceptance_log, ok, "criterion 08 (RL vs GL)",
        f"pool x alpha at t=10, GL at n=2^15, worst relative gap {worst:.2e}",
    )


def test_criterion_09_volterra_reduction(acceptance_log):
    t = 2.0
    f = parse("t + 0.5*sin(t)")
    worst = 0.0
    for alpha in (0.5, 0.75):
        kernel = f"t^{alpha} * {1.0 / gamma(alpha + 1.0)!r}"
        conv = volterra_convolution(f, kernel, t, n=4096)
        left = rl_integral_left(f, alpha, t, n=4096)
        worst = max(worst, abs(conv.value - left.value) / abs(left.value))
    ok = worst <= 1e-4
    _verdict(
        acceptance_log, ok, "criterion 09 (volterra reduction)",
        f"K = t^alpha/Gamma(alpha+1) vs left integral, worst {worst:.2e}",
    )


def test_criterion_10_figure_data(acceptance_log, tmp_path, capsys):
    alpha, source, dt, t_max, n = 0.75, "t + 0.5*sin(t)", 0.5, 10.0, 4096
    snap_file = tmp_path / "snapshots.csv"
    start = time.perf_counter()
    code = main(
        ["snapshots", "--alpha", str(alpha), "--f", source, "--t-max", str(t_max),
         "--dt", str(dt), "--nodes", str(n), "--out", str(snap_file)]
    )
    elapsed = time.perf_counter() - start
    capsys.readouterr()
    assert code == 0

    rows = list(csv.reader(io.StringIO(snap_file.read_text())))
    ok = rows[0] == ["t", "tau", "g", "f"]
    by_t: dict[float, list[list[float]]] = {}
    for row in rows[1:]:
        ok = ok and len(row) == 4
        values = [float(cell) for cell in row]
        ok = ok and all(math.isfinite(v) for v in values)
        by_t.setdefault(values[0], []).append(values[1:])
    ts = sorted(by_t)
    ok = ok and len(ts) == 20 and all(len(v) == n + 1 for v in by_t.values())

    f = parse(source)
    areas = []
    worst_gf = worst_tf = 0.0
    for t in ts:
        data = np.asarray(by_t[t])
        tau, g, fv = data[:, 0], data[:, 1], data[:, 2]
        gf_area = float(np.sum(0.5 * (fv[:-1] + fv[1:]) * np.diff(g)))
        tf_area = float(np.sum(0.5 * (fv[:-1] + fv[1:]) * np.diff(tau)))
        areas.append(gf_area)
        op = rl_integral_left(f, alpha, t, n=n).value
        worst_gf = max(worst_gf, abs(gf_area - op) / abs(op))
        exact = _classical_on(source, t)
        worst_tf = max(worst_tf, abs(tf_area - exact) / abs(exact))
    ok = ok and all(b > a for a, b in zip(areas, areas[1:]))
    ok = ok and worst_gf <= 1e-3 and worst_tf <= 1e-3

    fence_file = tmp_path / "fence.csv"
    code = main(
        ["fence", "--alpha", str(alpha), "--f", source, "--t", "10",
         "--nodes", str(n), "--out", str(fence_file)]
    )
    capsys.readouterr()
    fence_rows = list(csv.reader(io.StringIO(fence_file.read_text())))
    ok = ok and code == 0 and fence_rows[0] == ["tau", "g", "f"]
    ok = ok and len(fence_rows) == n + 2
    ok = ok and elapsed < 5.0
    _verdict(
        acceptance_log, ok, "criterion 10 (figure data)",
        f"20 snapshots at n=4096 in {elapsed:.2f} s, GF areas monotone,"
        f" worst GF {worst_gf:.2e}, worst TauF {worst_tf:.2e}",
    )


def test_criterion_11_parser_suite(acceptance_log):
    rng = np.random.default_rng(11)
    trips = 1000
    ok = True
    for _ in range(trips):
        expr = _random_expr(rng, depth=4)
        ok = ok and parse(to_source(expr)) == expr

    differentiable = (
        "t^3 - 2*t + 1",
        "sin(t) * cos(t)",
        "exp(-t) * t^2",
        "ln(t + 2)",
        "sqrt(t + 1)",
        "1 / (1 + t^2)",
        "t^1.5",
        "2^t",
        "t^t",
        "sin(exp(t / 4))",
    )
    worst = 0.0
    for source in differentiable:
        f = parse(source)
        d = differentiate(f)
        points = rng.uniform(0.2, 3.0, size=100)
        for t in points:
            t = float(t)
            h = 1e-6 * max(1.0, abs(t))
            numeric = (evaluate(f, t + h) - evaluate(f, t - h)) / (2.0 * h)
            symbolic = evaluate(d, t)
            worst = max(worst, abs(symbolic - numeric) / (1.0 + abs(symbolic)))
    ok = ok and worst <= 1e-5
    _verdict(
        acceptance_log, ok, "criterion 11 (parser suite)",
        f"{trips} AST round-trips; derivative vs central difference worst {worst:.2e}"
        f" over 10 expressions x 100 points",
    )
