"""Fence geometry and shadow areas."""

import math

import numpy as np
import pytest

from fracshadow.core import Interval
from fracshadow.errors import DomainError
from fracshadow.expr import evaluate_array, parse
from fracshadow.fence import (
    Fence,
    Wall,
    build_fence,
    fence_basis_track,
    shadow,
    snapshot_series,
)
from fracshadow.operators import feller_potential, rl_integral_left, riesz_potential
from fracshadow.quad import classical_integrate
from fracshadow.timescale import FellerScale, LeftRLScale, RieszScale, VolterraScale


def test_fence_samples_the_curve():
    f = parse("t + 0.5*sin(t)")
    scale = LeftRLScale(0.5, 2.0)
    fence = build_fence(f, scale, 64)
    assert len(fence) == 65
    assert fence.t == 2.0 and fence.variant == "rl-left" and fence.alpha == 0.5
    assert fence.tau[0] == 0.0 and fence.tau[-1] == 2.0
    assert fence.g[0] == 0.0
    assert np.all(np.diff(fence.tau) > 0.0)
    assert np.all(np.diff(fence.g) > 0.0)
    assert np.allclose(fence.f, evaluate_array(f, fence.tau), rtol=0.0, atol=0.0)
    pts = fence.points()
    assert pts.shape == (65, 3)


def test_gf_shadow_approximates_the_fractional_integral():
    f = parse("t + 0.5*sin(t)")
    alpha, t = 0.75, 10.0
    fence = build_fence(f, LeftRLScale(alpha, t), 4096)
    area = shadow(fence, Wall.G_F).area
    op = rl_integral_left(f, alpha, t, n=4096)
    assert abs(area - op.value) <= 1e-4 * (1.0 + abs(op.value))


def test_tauf_shadow_approximates_the_classical_integral():
    f = parse("t + 0.5*sin(t)")
    fence = build_fence(f, LeftRLScale(0.75, 10.0), 4096)
    area = shadow(fence, Wall.TAU_F).area
    exact = 50.0 + 0.5 * (1.0 - math.cos(10.0))
    assert abs(area - exact) <= 1e-4 * (1.0 + exact)


def test_shadow_boundary_is_the_projected_polyline():
    fence = build_fence(parse("t"), LeftRLScale(0.5, 1.0), 16)
    sh = shadow(fence, Wall.G_F)
    assert sh.boundary.shape == (17, 2)
    assert np.array_equal(sh.boundary[:, 0], fence.g)
    assert np.array_equal(sh.boundary[:, 1], fence.f)
    sh2 = shadow(fence, Wall.TAU_F)
    assert np.array_equal(sh2.boundary[:, 0], fence.tau)


def test_alpha_one_shadows_collapse():
    f = parse("t + 0.5*sin(t)")
    fence = build_fence(f, LeftRLScale(1.0, 10.0), 2048)
    gf = shadow(fence, Wall.G_F).area
    tf = shadow(fence, Wall.TAU_F).area
    assert abs(gf - tf) <= 1e-10


def test_riesz_fence_crosses_t():
    f = parse("t^2")
    scale = RieszScale(0.6, 2.0, 5.0)
    fence = build_fence(f, scale, 128)
    assert fence.tau[0] == 0.0 and fence.tau[-1] == 5.0
    assert np.any(fence.tau == 2.0)  # shared node at the junction
    assert np.all(np.diff(fence.g) > 0.0)
    area = shadow(fence, Wall.G_F).area
    op = riesz_potential(f, 0.6, 2.0, 5.0, n=4096)
    assert abs(area - op.value) <= 1e-3 * (1.0 + abs(op.value))


def test_volterra_fence():
    f = parse("1")
    fence = build_fence(f, VolterraScale("t^2", 2.0), 64)
    # for f = 1 the GF area telescopes to q(t) = K(t) - K(0) exactly
    assert shadow(fence, Wall.G_F).area == pytest.approx(4.0, rel=1e-14)
    assert fence.alpha is None


def test_feller_fence_keeps_both_branch_values():
    f = parse("1")
    scale = FellerScale(0.5, 2.0, -0.5, 0.0, 4.0, 2.0)
    fence = build_fence(f, scale, 16)
    assert len(fence) == 18  # n+2 points: the junction tau appears twice
    j = fence.junction
    assert fence.tau[j] == fence.tau[j + 1] == 2.0
    assert fence.g[j] != fence.g[j + 1]  # c- and d-weighted branch values
    op = feller_potential(f, 0.5, 2.0, -0.5, 2.0, b=4.0, n=16)
    assert shadow(fence, Wall.G_F).area == pytest.approx(op.value, rel=1e-12)
    # the tau-f wall ignores the zero-width junction step
    assert shadow(fence, Wall.TAU_F).area == pytest.approx(4.0, rel=1e-14)


def test_feller_fence_degenerate_side():
    scale = FellerScale(0.5, 1.0, 1.0, 2.0, 4.0, 2.0)  # a == t: left side empty
    fence = build_fence(parse("t"), scale, 16)
    assert fence.junction is None
    assert fence.tau[0] == 2.0 and fence.tau[-1] == 4.0


def test_fence_rejects_tiny_node_counts():
    with pytest.raises(DomainError):
        build_fence(parse("t"), LeftRLScale(0.5, 1.0), 1)


def test_fence_validates_shapes_and_order():
    tau = np.array([0.0, 0.5, 1.0])
    good = np.array([0.0, 1.0, 2.0])
    with pytest.raises(DomainError):
        Fence(tau, good[:2], good, 1.0, "rl-left")
    with pytest.raises(DomainError):
        Fence(tau[::-1].copy(), good, good, 1.0, "rl-left")
    with pytest.raises(DomainError):
        # a zero step is only legal at a declared junction
        Fence(np.array([0.0, 0.5, 0.5]), good, good, 1.0, "feller")


def test_zero_width_shadow_is_degenerate():
    fence = Fence(
        np.array([1.0, 1.0]),
        np.array([0.0, 1.0]),
        np.array([1.0, 1.0]),
        1.0,
        "feller",
        junction=0,
    )
    with pytest.raises(DomainError):
        shadow(fence, Wall.TAU_F)
    # a junction step spans no individual time and sweeps no area
    assert shadow(fence, Wall.G_F).area == 0.0


def test_snapshot_series_structure():
    f = parse("t + 0.5*sin(t)")
    series = snapshot_series(f, 0.75, 10.0, 0.5, 128)
    assert len(series) == 20 and series.dt == 0.5
    ts = [snap.t for snap in series]
    assert ts[0] == 0.5 and ts[-1] == pytest.approx(10.0, rel=1e-12)
    areas = [snap.shadow_gf.area for snap in series]
    assert all(b > a for a, b in zip(areas, areas[1:]))
    for snap in series:
        assert snap.fence.t == snap.t
        assert snap.shadow_gf.area == shadow(snap.fence, Wall.G_F).area


def test_snapshot_series_validation():
    f = parse("t")
    with pytest.raises(DomainError):
        snapshot_series(f, 0.5, 1.0, 0.0, 16)
    with pytest.raises(DomainError):
        snapshot_series(f, 0.5, 1.0, 2.0, 16)  # dt beyond t_max


def test_fence_basis_track():
    f = parse("t")
    track = fence_basis_track(f, lambda t: LeftRLScale(0.5, t), [1.0, 2.0, 3.0], 32)
    assert [fence.t for fence in track] == [1.0, 2.0, 3.0]
    with pytest.raises(DomainError):
        fence_basis_track(f, lambda t: LeftRLScale(0.5, t), [1.0, 1.0], 32)


def test_fence_area_matches_stieltjes_quadrature():
    # the GF shadow is the trapezoid version of the same Stieltjes sum
    f = parse("t^2")
    alpha, t = 0.5, 3.0
    fence = build_fence(f, LeftRLScale(alpha, t), 2048)
    area = shadow(fence, Wall.G_F).area
    op = rl_integral_left(f, alpha, t, n=2048)
    assert abs(area - op.value) <= 1e-3 * (1.0 + abs(op.value))
    classical = classical_integrate(f, Interval(0.0, t), n=512).value
    assert abs(shadow(fence, Wall.TAU_F).area - classical) <= 1e-3 * (1.0 + classical)
