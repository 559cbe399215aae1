"""Two-kinds-of-time kinematics.

A moving observer carries an equably ticking clock (individual time);
the reference frame's clock (cosmic time) may run inhomogeneously.  The
same speed log then yields different distances depending on which clock
weights the intervals.  The continuous version of that weighting is a
Stieltjes integral against a deformation g, and with the power-law
deformation it becomes the fractional integral; differentiating backs
the individual speed out again.

Distances computed with an anchor-dependent deformation are not
additive: the past is re-weighted every time t moves, so
S(t2) != S(t1) + increment.  Each call here evaluates its own t
independently.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .core import Interval
from .errors import DomainError
from .expr import Expr, evaluate_array
from .operators import caputo_derivative, rl_derivative, rl_integral_left
from .quad import QuadResult, stieltjes

__all__ = [
    "DeformationWarning",
    "SpeedRecord",
    "ClockModel",
    "SpeedRecovery",
    "TABLE1_SPEEDS",
    "distance_individual",
    "distance_observer_discrete",
    "distance_observer_continuous",
    "distance_fractional",
    "recover_individual_speed",
]


class DeformationWarning(UserWarning):
    """A deformation expected to be increasing was found decreasing somewhere."""


#: Velocity log in m/s, one reading per individual second 0..7.
TABLE1_SPEEDS = (10.0, 11.0, 12.0, 13.0, 12.0, 11.0, 10.0, 9.0)


@dataclass(frozen=True)
class SpeedRecord:
    """Speed readings taken at consecutive individual seconds 0, 1, 2, ..."""

    speeds: tuple[float, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "speeds", tuple(float(v) for v in self.speeds))

    def __len__(self) -> int:
        return len(self.speeds)

    @classmethod
    def table1(cls) -> "SpeedRecord":
        return cls(TABLE1_SPEEDS)


@dataclass(frozen=True)
class ClockModel:
    """Cosmic-time coordinates of a clock's ticks, one per individual second.

    tick_times[0] must be 0 and the sequence must increase strictly.
    """

    tick_times: tuple[float, ...]

    def __post_init__(self) -> None:
        ticks = tuple(float(v) for v in self.tick_times)
        object.__setattr__(self, "tick_times", ticks)
        if not ticks or ticks[0] != 0.0:
            raise DomainError("clock must start at cosmic time 0")
        if any(b <= a for a, b in zip(ticks, ticks[1:])):
            raise DomainError("clock tick times must increase strictly")

    def __len__(self) -> int:
        return len(self.tick_times)

    @classmethod
    def identity(cls, count: int) -> "ClockModel":
        """Undeformed clock: tick i at cosmic time i."""
        return cls(tuple(float(i) for i in range(count)))

    @classmethod
    def doubling(cls, count: int) -> "ClockModel":
        """Each individual second is worth twice the previous: T_i = 2^i - 1."""
        return cls(tuple(float(2**i - 1) for i in range(count)))

    @classmethod
    def from_deformation(cls, g: Expr, count: int) -> "ClockModel":
        """Sample a continuous deformation at the integers 0..count-1."""
        ticks = evaluate_array(g, np.arange(count, dtype=float))
        return cls(tuple(ticks))


def distance_individual(record: SpeedRecord) -> float:
    """Distance by the mover's own clock: sum of speeds times unit seconds.

    Left-endpoint convention: N readings span N-1 intervals, so the
    final reading never enters the sum.
    """
    if len(record) == 0:
        raise DomainError("empty speed record")
    return float(sum(record.speeds[:-1]))


def distance_observer_discrete(record: SpeedRecord, clock: ClockModel) -> float:
    """Distance with intervals reweighted by the observer's clock ticks."""
    if len(record) == 0:
        raise DomainError("empty speed record")
    if len(clock) < len(record):
        raise DomainError(
            f"clock has {len(clock)} ticks but the record needs {len(record)}"
        )
    ticks = clock.tick_times
    total = 0.0
    for i, speed in enumerate(record.speeds[:-1]):
        total += speed * (ticks[i + 1] - ticks[i])
    return total


def distance_observer_continuous(v, g, t: float, n: int = 1024) -> QuadResult:
    """Stieltjes distance: integral of v against the deformation g over [0, t].

    ``v`` and ``g`` are expressions in the individual time (callables
    work too).  A deformation that decreases somewhere triggers a
    :class:`DeformationWarning` and the signed integral is returned.
    """
    if not math.isfinite(t) or t <= 0.0:
        raise DomainError(f"distance needs t > 0, got {t!r}")
    _warn_if_decreasing(g, t)
    return stieltjes(v, g, Interval(0.0, t), n=n)


def _warn_if_decreasing(g, t: float, samples: int = 512) -> None:
    taus = np.linspace(0.0, t, samples + 1)
    try:
        if callable(g):
            values = np.asarray(g(taus), dtype=float)
        else:
            values = evaluate_array(g, taus)
    except Exception:
        return  # evaluation problems surface from the integral itself
    if np.any(np.diff(values) < 0.0):
        warnings.warn(
            "deformation decreases somewhere on [0, t]; "
            "returning the signed integral",
            DeformationWarning,
            stacklevel=3,
        )


def distance_fractional(
    v: Expr, alpha: float, t: float, n: int = 1024, grading: float | None = None
) -> QuadResult:
    """Observer distance under the power-law deformation: the left integral.

    Numerically identical to the left-sided fractional integral of v;
    exposed under its kinematic name.
    """
    return rl_integral_left(v, alpha, t, n=n, grading=grading)


@dataclass(frozen=True)
class SpeedRecovery:
    """Both derivative readings of a distance history.

    The primary fields mirror the differentiate-the-integral result;
    the Caputo companion agrees with it whenever S(0) = 0.
    """

    rl: QuadResult
    caputo: QuadResult

    @property
    def value(self) -> float:
        return self.rl.value

    @property
    def error_estimate(self) -> float:
        return self.rl.error_estimate

    @property
    def nodes_used(self) -> int:
        return self.rl.nodes_used


def recover_individual_speed(
    S: Expr, alpha: float, t: float, n: int = 1024
) -> SpeedRecovery:
    """Invert a distance history back to the individual speed.

    Computes the order-alpha derivative of S at t by both definitions
    and returns them packaged together.
    """
    return SpeedRecovery(
        rl=rl_derivative(S, alpha, t, n=n),
        caputo=caputo_derivative(S, alpha, t, n=n),
    )
