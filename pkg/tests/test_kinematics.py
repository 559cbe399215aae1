"""Two kinds of time: discrete clocks, deformed distances, speed recovery."""

import math

import numpy as np
import pytest

from fracshadow.core import gamma
from fracshadow.errors import DomainError
from fracshadow.expr import parse
from fracshadow.kinematics import (
    TABLE1_SPEEDS,
    ClockModel,
    DeformationWarning,
    SpeedRecord,
    distance_fractional,
    distance_individual,
    distance_observer_continuous,
    distance_observer_discrete,
    recover_individual_speed,
)


def test_reference_journey_totals():
    record = SpeedRecord.table1()
    clock = ClockModel.doubling(len(TABLE1_SPEEDS))
    assert distance_individual(record) == 79.0
    assert distance_observer_discrete(record, clock) == 1368.0


def test_reference_journey_data():
    assert TABLE1_SPEEDS == (10.0, 11.0, 12.0, 13.0, 12.0, 11.0, 10.0, 9.0)
    assert ClockModel.doubling(8).tick_times == (0.0, 1.0, 3.0, 7.0, 15.0, 31.0, 63.0, 127.0)


def test_identity_clock_recovers_individual_distance():
    record = SpeedRecord.table1()
    clock = ClockModel.identity(len(TABLE1_SPEEDS))
    assert distance_observer_discrete(record, clock) == distance_individual(record)


def test_clock_model_validation():
    with pytest.raises(DomainError):
        ClockModel((1.0, 2.0))  # first tick must sit at zero
    with pytest.raises(DomainError):
        ClockModel((0.0, 2.0, 2.0))  # ticks must advance
    with pytest.raises(DomainError):
        distance_observer_discrete(SpeedRecord.table1(), ClockModel.doubling(4))


def test_from_deformation_matches_doubling():
    clock = ClockModel.from_deformation(parse("2^t - 1"), 8)
    assert clock.tick_times == ClockModel.doubling(8).tick_times


def test_empty_record_rejected():
    with pytest.raises(DomainError):
        distance_individual(SpeedRecord(()))


def test_continuous_observer_distance_reproduces_the_discrete_journey():
    speeds = np.asarray(TABLE1_SPEEDS)

    def v(ts):
        return speeds[np.minimum(ts.astype(int), speeds.size - 1)]

    res = distance_observer_continuous(v, parse("2^t - 1"), 7.0, n=7)
    assert abs(res.value - 1368.0) <= 1e-9


def test_continuous_observer_distance_identity_deformation():
    res = distance_observer_continuous(parse("t"), parse("t"), 2.0)
    assert abs(res.value - 2.0) <= 1e-10


def test_decreasing_deformation_warns():
    with pytest.warns(DeformationWarning):
        res = distance_observer_continuous(parse("1"), parse("-t"), 1.0)
    assert res.value == pytest.approx(-1.0, rel=1e-12)


def test_fractional_distance_is_the_left_integral():
    # constant speed c gives S(t) = c t^alpha / Gamma(alpha + 1)
    alpha, t, c = 0.5, 2.0, 3.0
    res = distance_fractional(parse("3"), alpha, t)
    exact = c * t**alpha / gamma(alpha + 1.0)
    assert abs(res.value - exact) <= 1e-12 * exact


def test_fractional_distance_alpha_one_is_classical():
    res = distance_fractional(parse("t"), 1.0, 3.0)
    assert abs(res.value - 4.5) <= 1e-12


def test_recover_individual_speed_round_trip():
    # S = I^alpha v for constant v = 1; both derivative routes undo it.
    alpha, t = 0.5, 2.0
    S = parse(f"t^{alpha} * {1.0 / gamma(alpha + 1.0)!r}")
    rec = recover_individual_speed(S, alpha, t)
    assert abs(rec.rl.value - 1.0) <= 1e-3
    assert abs(rec.caputo.value - 1.0) <= 1e-3
    # the recovery reports the RL route
    assert rec.value == rec.rl.value
    assert rec.error_estimate == rec.rl.error_estimate
    assert rec.nodes_used == rec.rl.nodes_used


def test_recover_speed_distinguishes_routes_for_offset_distance():
    # adding a constant offset changes RL but not Caputo
    alpha, t = 0.5, 2.0
    S = parse(f"1 + t^{alpha} * {1.0 / gamma(alpha + 1.0)!r}")
    rec = recover_individual_speed(S, alpha, t)
    gap = t**-alpha / gamma(1.0 - alpha)
    assert abs((rec.rl.value - rec.caputo.value) - gap) <= 1e-3 * (1.0 + gap)


def test_observer_distance_rejects_bad_horizon():
    with pytest.raises(DomainError):
        distance_observer_continuous(parse("1"), parse("t"), 0.0)
