"""The fence-and-shadows geometry.

A fence is the 3D polyline (tau, g(tau), f(tau)) over a scale's support.
Dropping it onto the (tau, f) wall gives the classical integral of f as
the shadow area; dropping it onto the (g, f) wall gives the fractional
(or Volterra, or two-coefficient composite) integral.  A snapshot
series rebuilds the fence as the anchor t grows, tracing the integral
as a function of t.

Shadow areas are trapezoidal sums over fence nodes.  For the
two-branch composite scale the fence carries both one-sided points at
tau = t; the zero-width-in-tau junction cell is excluded from areas so
the (g, f) shadow equals the operator value (the composite has no point
mass at the jump).  For non-monotone deformations the "area" is the
signed sum, not geometric overlap.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from .core import check_integral_order
from .errors import DomainError
from .expr import Expr, evaluate_array
from .timescale import FellerScale, LeftRLScale, TimeScale

__all__ = [
    "Wall",
    "Fence",
    "Shadow",
    "Snapshot",
    "SnapshotSeries",
    "build_fence",
    "shadow",
    "snapshot_series",
    "fence_basis_track",
]

AnyScale = Union[TimeScale, FellerScale]


class Wall(enum.Enum):
    """Projection walls: (tau, f) for classical time, (g, f) for deformed."""

    TAU_F = "tau-f"
    G_F = "g-f"


@dataclass(frozen=True, eq=False)
class Fence:
    """Sampled fence: parallel arrays of tau, g, and f values.

    ``junction``, when set, is the index of the left-limit point of a
    two-branch fence; the next point repeats the same tau with the
    right-limit g.  Everywhere else tau increases strictly.
    """

    tau: np.ndarray
    g: np.ndarray
    f: np.ndarray
    t: float
    variant: str
    alpha: float | None = None
    junction: int | None = None

    def __post_init__(self) -> None:
        tau = np.asarray(self.tau, dtype=float)
        g = np.asarray(self.g, dtype=float)
        f = np.asarray(self.f, dtype=float)
        for name, arr in (("tau", tau), ("g", g), ("f", f)):
            object.__setattr__(self, name, arr)
        if not (tau.size == g.size == f.size) or tau.size < 2:
            raise DomainError("fence needs >= 2 points with matching columns")
        steps = np.diff(tau)
        flat = np.flatnonzero(steps <= 0.0)
        if self.junction is None:
            if flat.size:
                raise DomainError("fence tau values must increase strictly")
        elif flat.size != 1 or flat[0] != self.junction or steps[self.junction] != 0.0:
            raise DomainError("two-branch fence must repeat tau exactly at the junction")

    def __len__(self) -> int:
        return int(self.tau.size)

    def points(self) -> np.ndarray:
        """(m, 3) array of (tau, g, f) rows."""
        return np.column_stack([self.tau, self.g, self.f])


@dataclass(frozen=True, eq=False)
class Shadow:
    """A wall projection: its boundary polyline and signed area."""

    wall: Wall
    boundary: np.ndarray
    area: float


@dataclass(frozen=True, eq=False)
class Snapshot:
    t: float
    fence: Fence
    shadow_gf: Shadow


@dataclass(frozen=True, eq=False)
class SnapshotSeries:
    """Fences and their (g, f) shadows at t = dt, 2 dt, ..."""

    snapshots: tuple[Snapshot, ...]
    dt: float

    def __len__(self) -> int:
        return len(self.snapshots)

    def __iter__(self):
        return iter(self.snapshots)


# --------------------------------------------------------------------------
# construction


def build_fence(f: Expr, scale: AnyScale, n: int) -> Fence:
    """Sample the fence for *f* over the scale's natural graded grid.

    Single-branch scales yield n+1 points; the two-branch composite
    yields n+2 (both one-sided points at tau = t).
    """
    if n < 2:
        raise DomainError(f"fence needs n >= 2 cells, got {n}")
    if isinstance(scale, FellerScale):
        return _build_feller_fence(f, scale, n)
    nodes = scale.grid(n)
    g = np.asarray(scale(nodes), dtype=float)
    fv = evaluate_array(f, nodes, check=True)
    alpha = getattr(scale, "alpha", None)
    return Fence(nodes, g, fv, scale.t, scale.variant, alpha)


def _build_feller_fence(f: Expr, scale: FellerScale, n: int) -> Fence:
    n_left, n_right = scale.split_cells(n)
    if n_left == 0:
        nodes = scale.right_nodes(n)
        g = scale.branches(nodes)[1]
        junction = None
    elif n_right == 0:
        nodes = scale.left_nodes(n)
        g = scale.branches(nodes)[0]
        junction = None
    else:
        left = scale.left_nodes(n_left)
        right = scale.right_nodes(n_right)
        nodes = np.concatenate([left, right])
        g = np.concatenate([scale.branches(left)[0], scale.branches(right)[1]])
        junction = left.size - 1
    fv = evaluate_array(f, nodes, check=True)
    return Fence(nodes, g, fv, scale.t, scale.variant, scale.alpha, junction)


# --------------------------------------------------------------------------
# projection


def shadow(fence: Fence, wall: Wall) -> Shadow:
    """Project the fence onto a wall and measure the signed shadow area."""
    x = fence.tau if wall is Wall.TAU_F else fence.g
    if float(np.max(x) - np.min(x)) <= 0.0:
        raise DomainError(f"degenerate fence: zero projected width on {wall.value}")
    boundary = np.column_stack([x, fence.f])
    keep = np.diff(fence.tau) > 0.0
    heights = 0.5 * (fence.f[:-1] + fence.f[1:])
    area = float(np.sum((heights * np.diff(x))[keep]))
    return Shadow(wall, boundary, area)


def snapshot_series(
    f: Expr, alpha: float, t_max: float, dt: float, n: int
) -> SnapshotSeries:
    """Fences and (g, f) shadows at t = dt, 2 dt, ..., floor(t_max/dt) dt.

    Each shadow area samples the left-sided fractional integral at its
    t, so the series is the integral's trajectory.
    """
    check_integral_order(alpha)
    if not (math.isfinite(dt) and math.isfinite(t_max)) or not 0.0 < dt <= t_max:
        raise DomainError(f"need 0 < dt <= t_max, got dt={dt!r}, t_max={t_max!r}")
    count = int(math.floor(t_max / dt + 1e-9))
    snapshots = []
    for k in range(1, count + 1):
        t = k * dt
        fence = build_fence(f, LeftRLScale(alpha, t), n)
        snapshots.append(Snapshot(t, fence, shadow(fence, Wall.G_F)))
    return SnapshotSeries(tuple(snapshots), dt)


def fence_basis_track(
    f: Expr,
    scale_family: Callable[[float], AnyScale],
    t_values: Sequence[float],
    n: int,
) -> list[Fence]:
    """One fence per anchor t, for watching the basis shape evolve.

    ``scale_family`` maps an anchor time to its scale, e.g.
    ``lambda t: RightRLScale(0.75, t, 10.0)``.
    """
    ts = [float(t) for t in t_values]
    if not ts:
        raise DomainError("fence tracking needs at least one t value")
    if any(t1 <= t0 for t0, t1 in zip(ts, ts[1:])):
        raise DomainError("t values must increase strictly")
    return [build_fence(f, scale_family(t), n) for t in ts]
