"""Leader trajectories, slip profiles and noise schedules of the two test scenarios.

Every scenario is a pure function of time.  Intervals are left-closed and
right-open, except that the final instant ``t == duration`` belongs to the
last interval.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass
from typing import NamedTuple

EQ23_LITERAL = "eq23-literal"
EQ23_CONSTANT = "eq23-constant"


class ScenarioSample(NamedTuple):
    theta_L: float
    v_L: float
    a_R: float
    a_L: float
    noise_on: bool
    e_s_ref: float


def _interval_index(bounds: tuple[float, ...], t: float, duration: float) -> int:
    if not (0.0 <= t <= duration):
        raise ValueError(f"t={t!r} outside [0, {duration}]")
    return min(bisect.bisect_right(bounds, t), len(bounds)) - 1


class Scenario:
    name = "base"
    duration = 60.0
    intervals: tuple[tuple[float, float], ...] = ()
    initial = (0.0, 0.0, 0.0)
    sigma_d = 0.0
    sigma_s = 0.0

    def __call__(self, t: float) -> ScenarioSample:
        raise NotImplementedError

    def leader_inputs(self, t: float) -> tuple[float, float]:
        s = self(t)
        return s.theta_L, s.v_L

    def slip(self, t: float) -> tuple[float, float]:
        s = self(t)
        return s.a_R, s.a_L

    def interval_of(self, t: float) -> int:
        starts = tuple(a for a, _ in self.intervals)
        return _interval_index(starts, t, self.duration)


#: ``(start, slope)`` of the leader course pieces; course is ``slope * t``.
COURSE_PIECES = (
    (0.0, -0.12),
    (10.0, 0.88),
    (15.0, 1.07),
    (35.0, 1.22),
    (37.0, 0.87),
    (40.0, 1.17),
    (45.0, 0.97),
    (47.0, 0.92),
    (52.0, 0.77),
)


@dataclass
class Scenario1(Scenario):
    """Piecewise leader course with stop, speed variation, slip, noise and a reference step.

    ``course`` selects how the piecewise course table is read:
    ``"eq23-literal"`` takes each entry as ``slope * t``,
    ``"eq23-constant"`` as a constant course equal to the slope value.
    """

    course: str = EQ23_LITERAL
    v_nominal: float = 2.0
    v_amplitude: float = 1.4
    slip_mean: float = 0.7
    slip_amplitude: float = 0.3
    slip_freq_R: float = 5.0
    slip_freq_L: float = 2.0
    sigma_d: float = 0.02
    sigma_s: float = 0.01
    e_s_ref_low: float = 2.0
    e_s_ref_high: float = 3.0
    initial: tuple[float, float, float] = (3.0, 20.0, 0.0)

    name = "1"
    duration = 60.0
    intervals = ((0.0, 10.0), (10.0, 15.0), (15.0, 30.0), (30.0, 45.0), (45.0, 60.0))

    def __post_init__(self):
        if self.course not in (EQ23_LITERAL, EQ23_CONSTANT):
            raise ValueError(f"unknown course interpretation {self.course!r}")
        self._starts = tuple(s for s, _ in COURSE_PIECES)

    def course_angle(self, t: float) -> float:
        slope = COURSE_PIECES[_interval_index(self._starts, t, self.duration)][1]
        return slope * t if self.course == EQ23_LITERAL else slope

    def speed(self, t: float) -> float:
        if t < 10.0:
            return self.v_nominal
        if t < 15.0:
            return 0.0
        return self.v_nominal + self.v_amplitude * math.sin(t)

    def slip(self, t: float) -> tuple[float, float]:
        if t < 15.0:
            return 1.0, 1.0
        return (
            self.slip_mean + self.slip_amplitude * math.sin(self.slip_freq_R * t),
            self.slip_mean + self.slip_amplitude * math.sin(self.slip_freq_L * t),
        )

    def leader_inputs(self, t: float) -> tuple[float, float]:
        return self.course_angle(t), self.speed(t)

    def __call__(self, t: float) -> ScenarioSample:
        theta = self.course_angle(t)
        a_R, a_L = self.slip(t)
        return ScenarioSample(
            theta_L=theta,
            v_L=self.speed(t),
            a_R=a_R,
            a_L=a_L,
            noise_on=t >= 30.0,
            e_s_ref=self.e_s_ref_low if t < 45.0 else self.e_s_ref_high,
        )


@dataclass
class Scenario2(Scenario):
    """Circular leader path with four slip regimes: none, constant, ramp, sinusoid."""

    v_L: float = 2.0
    turn_rate: float = 0.08
    e_s_ref: float = 2.0
    const_R: float = 0.8
    const_L: float = 0.9
    ramp_start: float = 1.0
    ramp_end: float = 0.6
    sin_mean: float = 0.8
    sin_amplitude: float = 0.2
    sin_freq: float = 2.0
    sin_phase_L: float = 0.0
    initial: tuple[float, float, float] = (25.0, 45.0, 0.0)

    name = "2"
    duration = 60.0
    intervals = ((0.0, 15.0), (15.0, 30.0), (30.0, 45.0), (45.0, 60.0))

    def slip(self, t: float) -> tuple[float, float]:
        if not (0.0 <= t <= self.duration):
            raise ValueError(f"t={t!r} outside [0, {self.duration}]")
        if t < 15.0:
            return 1.0, 1.0
        if t < 30.0:
            return self.const_R, self.const_L
        if t < 45.0:
            a = self.ramp_start + (self.ramp_end - self.ramp_start) * (t - 30.0) / 15.0
            return a, a
        return (
            self.sin_mean + self.sin_amplitude * math.sin(self.sin_freq * t),
            self.sin_mean + self.sin_amplitude * math.sin(self.sin_freq * t + self.sin_phase_L),
        )

    def leader_inputs(self, t: float) -> tuple[float, float]:
        if not (0.0 <= t <= self.duration):
            raise ValueError(f"t={t!r} outside [0, {self.duration}]")
        return self.turn_rate * t, self.v_L

    def __call__(self, t: float) -> ScenarioSample:
        theta, v = self.leader_inputs(t)
        a_R, a_L = self.slip(t)
        return ScenarioSample(theta, v, a_R, a_L, False, self.e_s_ref)


def scenario1(t: float, course: str = EQ23_LITERAL) -> ScenarioSample:
    return Scenario1(course=course)(t)


def scenario2(t: float) -> ScenarioSample:
    return Scenario2()(t)


def build_scenario(name: str, **overrides) -> Scenario:
    """Scenario by name (``"1"`` or ``"2"``) with field overrides."""
    name = str(name).strip()
    if name in ("1", "scenario1"):
        return Scenario1(**overrides)
    if name in ("2", "scenario2"):
        return Scenario2(**overrides)
    raise ValueError(f"unknown scenario {name!r}")
