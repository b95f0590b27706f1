"""Tracked-vehicle kinematics with track slippage.

The vehicle is a differential-track (skid-steer) platform driven by the
angular velocities of its right and left drive wheels.  Slippage is modelled
as per-track friction coefficients in ``[0, 1]`` that scale the effective
contribution of each track.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

#: Internal integration substep for the plant and continuous observers, seconds.
DT_PLANT = 1e-3


def _check_finite(**values: float) -> None:
    for name, value in values.items():
        if not math.isfinite(value):
            raise ValueError(f"{name} must be finite, got {value!r}")


@dataclass(frozen=True)
class VehicleParams:
    """Geometry and limits of the tracked vehicle.

    :param r: drive wheel radius [m]
    :param B: distance between the tracks [m]
    :param thetadot_max: angular-rate saturation used by the controllers [rad/s]
    """

    r: float = 0.3
    B: float = 0.7
    thetadot_max: float = 5.0

    def __post_init__(self):
        for name in ("r", "B", "thetadot_max"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"VehicleParams.{name} must be > 0, got {value!r}")


@dataclass(frozen=True)
class VehicleState:
    """Inertial pose of the follower; ``theta`` is never wrapped."""

    X: float = 0.0
    Y: float = 0.0
    theta: float = 0.0

    def __post_init__(self):
        _check_finite(X=self.X, Y=self.Y, theta=self.theta)


@dataclass(frozen=True)
class SlipCoefficients:
    """Track friction coefficients; 1 means no slip, 0 complete slip."""

    a_R: float = 1.0
    a_L: float = 1.0

    def __post_init__(self):
        for name in ("a_R", "a_L"):
            value = getattr(self, name)
            if not (0.0 <= value <= 1.0):
                raise ValueError(f"{name} must lie in [0, 1], got {value!r}")


NO_SLIP = SlipCoefficients()


def forward_kinematics(
    omega_R: float, omega_L: float, slip: SlipCoefficients, params: VehicleParams
) -> tuple[float, float]:
    """Effective longitudinal speed and turn rate produced by the wheel speeds.

    The nominal (unit slip) values are ``v = r/2 (wR + wL)`` and
    ``thetadot = r/B (wR - wL)``; slip scales each track's contribution.
    """
    _check_finite(omega_R=omega_R, omega_L=omega_L)
    right = slip.a_R * omega_R
    left = slip.a_L * omega_L
    return 0.5 * params.r * (right + left), params.r / params.B * (right - left)


def inverse_kinematics(v_cmd: float, thetadot_cmd: float, params: VehicleParams) -> tuple[float, float]:
    """Wheel speeds realising ``(v_cmd, thetadot_cmd)`` on a slip-free vehicle."""
    _check_finite(v_cmd=v_cmd, thetadot_cmd=thetadot_cmd)
    base = v_cmd / params.r
    diff = params.B * thetadot_cmd / (2.0 * params.r)
    return base + diff, base - diff


def saturate(value: float, limit: float) -> float:
    """Clamp ``value`` to ``[-limit, limit]``."""
    return min(max(value, -limit), limit)


def rk4_step(f: Callable[[float, np.ndarray], np.ndarray], t: float, y: np.ndarray, h: float) -> np.ndarray:
    """One classical Runge-Kutta step of ``y' = f(t, y)``."""
    k1 = f(t, y)
    k2 = f(t + 0.5 * h, y + 0.5 * h * k1)
    k3 = f(t + 0.5 * h, y + 0.5 * h * k2)
    k4 = f(t + h, y + h * k3)
    return y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)


def substeps(dt: float, max_step: float = DT_PLANT) -> tuple[int, float]:
    """Split ``dt`` into the fewest equal substeps no longer than ``max_step``."""
    if not dt > 0:
        raise ValueError(f"dt must be > 0, got {dt!r}")
    n = max(1, math.ceil(dt / max_step - 1e-9))
    return n, dt / n


def _pose_rk4(x: float, y: float, th: float, v: Sequence[float], w: Sequence[float], h: float):
    # v, w hold the rates at the start, midpoint and end of the step
    c1, s1 = math.cos(th), math.sin(th)
    th2 = th + 0.5 * h * w[0]
    c2, s2 = math.cos(th2), math.sin(th2)
    th3 = th + 0.5 * h * w[1]
    c3, s3 = math.cos(th3), math.sin(th3)
    th4 = th + h * w[1]
    c4, s4 = math.cos(th4), math.sin(th4)
    x += h / 6.0 * (v[0] * c1 + 2.0 * v[1] * c2 + 2.0 * v[1] * c3 + v[2] * c4)
    y += h / 6.0 * (v[0] * s1 + 2.0 * v[1] * s2 + 2.0 * v[1] * s3 + v[2] * s4)
    th += h / 6.0 * (w[0] + 4.0 * w[1] + w[2])
    return x, y, th


def integrate_pose(
    state: VehicleState, v_eff: float, thetadot_eff: float, dt: float, max_step: float = DT_PLANT
) -> VehicleState:
    """Advance the unicycle pose by ``dt`` with constant rates (RK4, 1 ms substeps)."""
    n, h = substeps(dt, max_step)
    v = (v_eff, v_eff, v_eff)
    w = (thetadot_eff, thetadot_eff, thetadot_eff)
    x, y, th = state.X, state.Y, state.theta
    for _ in range(n):
        x, y, th = _pose_rk4(x, y, th, v, w, h)
    return VehicleState(x, y, th)


def advance_vehicle(
    state: VehicleState,
    omega_R: float,
    omega_L: float,
    slip_at: Callable[[float], tuple[float, float]],
    t: float,
    dt: float,
    params: VehicleParams,
    max_step: float = DT_PLANT,
) -> VehicleState:
    """Advance the pose with held wheel speeds and time-varying slip ``slip_at(t) -> (a_R, a_L)``."""
    n, h = substeps(dt, max_step)
    k_v = 0.5 * params.r
    k_w = params.r / params.B
    x, y, th = state.X, state.Y, state.theta

    def rates(tau):
        a_R, a_L = slip_at(tau)
        right, left = a_R * omega_R, a_L * omega_L
        return k_v * (right + left), k_w * (right - left)

    start = rates(t)
    for i in range(n):
        t0 = t + i * h
        mid = rates(t0 + 0.5 * h)
        end = rates(t0 + h)
        x, y, th = _pose_rk4(x, y, th, (start[0], mid[0], end[0]), (start[1], mid[1], end[1]), h)
        start = end
    return VehicleState(x, y, th)
