"""Deformed-time-scale function families.

Each scale maps the individual time tau to the cosmic time it is worth,
anchored at the current instant t.  The left family covers the past
[0, t], the right family the future [t, b], the symmetric family joins
both continuously, the two-coefficient composite keeps its branches
separate (it may jump at tau = t), and the convolution family derives
the deformation from an arbitrary kernel K via q_t(tau) = K(t) - K(t-tau).

Scales know their support interval and a natural quadrature grid with
cells clustered where their slope blows up, which is what the fence and
quadrature modules consume.
"""

from __future__ import annotations

import abc
import math
from dataclasses import dataclass
from typing import ClassVar, Union

import numpy as np

from .core import Interval, default_grading, gamma, graded_nodes
from .errors import DomainError
from . import expr as expr_mod
from .expr import Expr, evaluate_array

__all__ = [
    "TimeScale",
    "LeftRLScale",
    "RightRLScale",
    "RieszScale",
    "VolterraScale",
    "FellerScale",
    "scale_left",
    "scale_right",
    "scale_riesz",
    "scale_volterra",
    "scale_feller",
]

ArrayLike = Union[float, np.ndarray]


def _prepare(tau: ArrayLike) -> tuple[np.ndarray, bool]:
    arr = np.asarray(tau, dtype=float)
    return np.atleast_1d(arr), arr.ndim == 0


def _finish(values: np.ndarray, scalar: bool) -> ArrayLike:
    if scalar:
        return float(values[0])
    return values


def _check_range(tau: np.ndarray, lower: float, upper: float, what: str) -> None:
    # tolerate FP dust from grid construction at the endpoints
    slack = 1e-12 * (1.0 + abs(lower) + abs(upper))
    if np.any(tau < lower - slack) or np.any(tau > upper + slack):
        bad = tau[(tau < lower - slack) | (tau > upper + slack)][0]
        raise DomainError(
            f"{what}: tau = {bad!r} outside [{lower}, {upper}]"
        )


def _positive(value: float, name: str) -> float:
    value = float(value)
    if not math.isfinite(value) or value <= 0.0:
        raise DomainError(f"{name} must be finite and > 0, got {value!r}")
    return value


class TimeScale(abc.ABC):
    """A single-valued deformed time scale tau -> cosmic time."""

    variant: ClassVar[str]

    @abc.abstractmethod
    def __call__(self, tau: ArrayLike) -> ArrayLike:
        """Value of the scale at tau (scalar in, scalar out)."""

    @abc.abstractmethod
    def interval(self) -> Interval:
        """Support of the scale."""

    @abc.abstractmethod
    def grid(self, n: int) -> np.ndarray:
        """n+1 nodes over the support, clustered at the steep end."""


@dataclass(frozen=True)
class LeftRLScale(TimeScale):
    """Past-side scale g_t(tau) = {t^a - (t-tau)^a} / Gamma(a+1) on [0, t]."""

    alpha: float
    t: float

    variant: ClassVar[str] = "rl-left"

    def __post_init__(self) -> None:
        _positive(self.alpha, "alpha")
        _positive(self.t, "t")

    def __call__(self, tau: ArrayLike) -> ArrayLike:
        arr, scalar = _prepare(tau)
        _check_range(arr, 0.0, self.t, "left scale")
        a, t = self.alpha, self.t
        values = (np.power(t, a) - np.maximum(t - arr, 0.0) ** a) / gamma(a + 1.0)
        return _finish(values, scalar)

    def density(self, tau: ArrayLike) -> ArrayLike:
        """Slope dg/dtau = (t-tau)^(a-1)/Gamma(a); singular at tau = t for a < 1."""
        arr, scalar = _prepare(tau)
        _check_range(arr, 0.0, self.t, "left scale")
        with np.errstate(divide="ignore"):
            values = np.maximum(self.t - arr, 0.0) ** (self.alpha - 1.0)
        return _finish(values / gamma(self.alpha), scalar)

    def interval(self) -> Interval:
        return Interval(0.0, self.t)

    def grid(self, n: int) -> np.ndarray:
        r = default_grading(self.alpha)
        return graded_nodes(0.0, self.t, n, r, cluster="upper")


@dataclass(frozen=True)
class RightRLScale(TimeScale):
    """Future-side scale h_t(tau) = {t^a + (tau-t)^a} / Gamma(a+1) on [t, b]."""

    alpha: float
    t: float
    b: float

    variant: ClassVar[str] = "rl-right"

    def __post_init__(self) -> None:
        _positive(self.alpha, "alpha")
        if not math.isfinite(self.t) or self.t < 0.0:
            raise DomainError(f"t must be finite and >= 0, got {self.t!r}")
        if not math.isfinite(self.b) or self.b <= self.t:
            raise DomainError(f"need t < b, got t={self.t!r}, b={self.b!r}")

    def __call__(self, tau: ArrayLike) -> ArrayLike:
        arr, scalar = _prepare(tau)
        _check_range(arr, self.t, self.b, "right scale")
        a, t = self.alpha, self.t
        values = (np.power(t, a) + np.maximum(arr - t, 0.0) ** a) / gamma(a + 1.0)
        return _finish(values, scalar)

    def density(self, tau: ArrayLike) -> ArrayLike:
        arr, scalar = _prepare(tau)
        _check_range(arr, self.t, self.b, "right scale")
        with np.errstate(divide="ignore"):
            values = np.maximum(arr - self.t, 0.0) ** (self.alpha - 1.0)
        return _finish(values / gamma(self.alpha), scalar)

    def interval(self) -> Interval:
        return Interval(self.t, self.b)

    def grid(self, n: int) -> np.ndarray:
        r = default_grading(self.alpha)
        return graded_nodes(self.t, self.b, n, r, cluster="lower")


@dataclass(frozen=True)
class RieszScale(TimeScale):
    """Symmetric scale r_t(tau) = {t^a + sign(tau-t)|tau-t|^a} / Gamma(a+1).

    Continuous across tau = t (sign(0) = 0 makes r_t(t) = t^a/Gamma(a+1)
    exactly); the support used for fences and grids is [0, b].
    """

    alpha: float
    t: float
    b: float

    variant: ClassVar[str] = "riesz"

    def __post_init__(self) -> None:
        _positive(self.alpha, "alpha")
        _positive(self.t, "t")
        if not math.isfinite(self.b) or self.b <= self.t:
            raise DomainError(f"need t < b, got t={self.t!r}, b={self.b!r}")

    def __call__(self, tau: ArrayLike) -> ArrayLike:
        arr, scalar = _prepare(tau)
        if np.any(arr < -1e-12):
            raise DomainError(f"riesz scale: tau = {arr.min()!r} below 0")
        a, t = self.alpha, self.t
        diff = arr - t
        values = (np.power(t, a) + np.sign(diff) * np.abs(diff) ** a) / gamma(a + 1.0)
        return _finish(values, scalar)

    def density(self, tau: ArrayLike) -> ArrayLike:
        arr, scalar = _prepare(tau)
        with np.errstate(divide="ignore"):
            values = np.abs(arr - self.t) ** (self.alpha - 1.0)
        return _finish(values / gamma(self.alpha), scalar)

    def interval(self) -> Interval:
        return Interval(0.0, self.b)

    def grid(self, n: int) -> np.ndarray:
        left, right = _split_cells(n, 0.0, self.t, self.b)
        r = default_grading(self.alpha)
        left_nodes = graded_nodes(0.0, self.t, left, r, cluster="upper")
        right_nodes = graded_nodes(self.t, self.b, right, r, cluster="lower")
        return np.concatenate([left_nodes, right_nodes[1:]])


def _split_cells(n: int, lower: float, mid: float, upper: float) -> tuple[int, int]:
    if n < 2:
        raise DomainError(f"a two-branch grid needs n >= 2, got {n}")
    left = int(round(n * (mid - lower) / (upper - lower)))
    left = min(max(left, 1), n - 1)
    return left, n - left


@dataclass(frozen=True, eq=False)
class VolterraScale(TimeScale):
    """Kernel-driven scale q_t(tau) = K(t) - K(t-tau) on [0, t].

    Only differences of K matter, so no K(0) = 0 normalization is
    required: q_t(0) = 0 identically.  ``kernel`` may be given as source
    text; it is parsed on construction.
    """

    kernel: Expr | str
    t: float

    variant: ClassVar[str] = "volterra"

    def __post_init__(self) -> None:
        if isinstance(self.kernel, str):
            object.__setattr__(self, "kernel", expr_mod.parse(self.kernel))
        _positive(self.t, "t")

    def __call__(self, tau: ArrayLike) -> ArrayLike:
        arr, scalar = _prepare(tau)
        _check_range(arr, 0.0, self.t, "volterra scale")
        at_t = evaluate_array(self.kernel, np.array([self.t]))[0]
        values = at_t - evaluate_array(self.kernel, np.maximum(self.t - arr, 0.0))
        return _finish(values, scalar)

    def interval(self) -> Interval:
        return Interval(0.0, self.t)

    def grid(self, n: int) -> np.ndarray:
        # K' may blow up at the tau = t end (t - tau -> 0), so cluster
        # there, but only mildly: the kernel is arbitrary and a hard
        # grade would waste nodes on smooth K and push increments of
        # K(t) - K(t - tau) below float resolution.
        return graded_nodes(0.0, self.t, n, 2.0, cluster="upper")


@dataclass(frozen=True)
class FellerScale:
    """Two-branch composite: c-weighted past scale on [a, t], d-weighted
    future scale on [t, b].

    Not a :class:`TimeScale`: the composite may jump at tau = t, so the
    branches are kept separate and consumers (the fence builder) decide
    how to stitch them.  The past branch generalizes the left scale to a
    lower limit a: {(t-a)^alpha - (t-tau)^alpha}/Gamma(alpha+1).
    """

    alpha: float
    c: float
    d: float
    a: float
    b: float
    t: float

    variant: ClassVar[str] = "feller"

    def __post_init__(self) -> None:
        _positive(self.alpha, "alpha")
        if not self.a <= self.t <= self.b:
            raise DomainError(
                f"need a <= t <= b, got a={self.a!r}, t={self.t!r}, b={self.b!r}"
            )
        if self.a == self.t == self.b:
            raise DomainError("degenerate composite: a = t = b")

    def branches(self, tau: ArrayLike) -> tuple[ArrayLike, ArrayLike]:
        """(left, right) branch values at tau; the off-side branch is 0."""
        arr, scalar = _prepare(tau)
        _check_range(arr, self.a, self.b, "feller scale")
        al, t = self.alpha, self.t
        norm = gamma(al + 1.0)
        on_left = arr <= self.t
        left = np.where(
            on_left,
            self.c * (np.power(t - self.a, al) - np.maximum(t - arr, 0.0) ** al) / norm,
            0.0,
        )
        on_right = arr >= self.t
        right = np.where(
            on_right,
            self.d * (np.power(t, al) + np.maximum(arr - t, 0.0) ** al) / norm,
            0.0,
        )
        if scalar:
            return float(left[0]), float(right[0])
        return left, right

    def interval(self) -> Interval:
        return Interval(self.a, self.b)

    def left_nodes(self, n: int) -> np.ndarray:
        r = default_grading(self.alpha)
        return graded_nodes(self.a, self.t, n, r, cluster="upper")

    def right_nodes(self, n: int) -> np.ndarray:
        r = default_grading(self.alpha)
        return graded_nodes(self.t, self.b, n, r, cluster="lower")

    def split_cells(self, n: int) -> tuple[int, int]:
        """Cell counts for the two branches, proportional to their spans."""
        if self.a == self.t:
            return 0, n
        if self.t == self.b:
            return n, 0
        return _split_cells(n, self.a, self.t, self.b)


# --------------------------------------------------------------------------
# direct evaluation functions


def scale_left(alpha: float, t: float, tau: ArrayLike) -> ArrayLike:
    """{t^alpha - (t-tau)^alpha} / Gamma(alpha+1) for tau in [0, t]."""
    return LeftRLScale(alpha, t)(tau)


def scale_right(alpha: float, t: float, b: float, tau: ArrayLike) -> ArrayLike:
    """{t^alpha + (tau-t)^alpha} / Gamma(alpha+1) for tau in [t, b]."""
    return RightRLScale(alpha, t, b)(tau)


def scale_riesz(alpha: float, t: float, tau: ArrayLike) -> ArrayLike:
    """{t^alpha + sign(tau-t)|tau-t|^alpha} / Gamma(alpha+1) for tau >= 0."""
    _positive(alpha, "alpha")
    _positive(t, "t")
    arr, scalar = _prepare(tau)
    if np.any(arr < -1e-12):
        raise DomainError(f"riesz scale: tau = {arr.min()!r} below 0")
    diff = arr - t
    values = (np.power(t, alpha) + np.sign(diff) * np.abs(diff) ** alpha) / gamma(alpha + 1.0)
    return _finish(values, scalar)


def scale_volterra(kernel: Expr | str, t: float, tau: ArrayLike) -> ArrayLike:
    """K(t) - K(t-tau) for tau in [0, t]."""
    return VolterraScale(kernel, t)(tau)


def scale_feller(
    alpha: float,
    c: float,
    d: float,
    a: float,
    b: float,
    t: float,
    tau: ArrayLike,
) -> tuple[ArrayLike, ArrayLike]:
    """Pair of (c-weighted past, d-weighted future) branch values at tau."""
    return FellerScale(alpha, c, d, a, b, t).branches(tau)
