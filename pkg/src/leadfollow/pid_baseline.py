"""PI/PID comparison controllers.

The integrator is discretized with backward Euler and the derivative filter
``Kd N s / (s + N)`` with Tustin.  When an output limit is given the
integrator uses conditional integration and is additionally clamped so that
``|Ki * integral|`` never exceeds the limit.
"""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class PidGains:
    Kp: float
    Ki: float = 0.0
    Kd: float = 0.0
    N: float = 50.0
    is_pi: bool = False

    def __post_init__(self):
        if self.Kd != 0 and not self.is_pi and not self.N > 0:
            raise ValueError("derivative filter coefficient N must be > 0 when Kd != 0")


LATERAL_PID = PidGains(Kp=4.0, Ki=2.0, Kd=0.5, N=50.0)
LONGITUDINAL_PI = PidGains(Kp=3.0, Ki=3.0, is_pi=True)


class PidController:
    def __init__(self, gains: PidGains, limit: float | None = None):
        self.gains = gains
        self.limit = limit
        self.reset()

    def reset(self):
        self.integral = 0.0
        self.derivative = 0.0
        self.prev_error = 0.0

    def step(self, error: float, dt: float) -> float:
        """Advance one tick of length ``dt`` and return the (saturated) command."""
        if not dt > 0:
            raise ValueError(f"dt must be > 0, got {dt!r}")
        g = self.gains
        if g.Kd != 0 and not g.is_pi:
            nt = g.N * dt
            self.derivative = ((2.0 - nt) * self.derivative + 2.0 * g.Kd * g.N * (error - self.prev_error)) / (
                2.0 + nt
            )
        else:
            self.derivative = 0.0
        self.prev_error = error

        candidate = self.integral + error * dt
        u = g.Kp * error + g.Ki * candidate + self.derivative
        if self.limit is None:
            self.integral = candidate
            return u

        lim = self.limit
        # integrate only while unsaturated or when the error unwinds the integrator
        if abs(u) <= lim or error * u < 0:
            self.integral = candidate
        if g.Ki != 0:
            bound = lim / abs(g.Ki)
            self.integral = min(max(self.integral, -bound), bound)
        u = g.Kp * error + g.Ki * self.integral + self.derivative
        return min(max(u, -lim), lim)


class PidPair:
    """Lateral PID on ``e_d`` and longitudinal PI on ``e_s - e_s_ref``."""

    fhat_l = float("nan")
    fhat_v = float("nan")

    def __init__(self, lateral: PidGains, longitudinal: PidGains, thetadot_max: float):
        self.lateral = PidController(lateral, thetadot_max)
        self.longitudinal = PidController(longitudinal)

    def update(self, e_d: float, e_s: float, e_s_ref: float, dt: float, e_s_ref_dot: float = 0.0):
        w = self.lateral.step(e_d, dt)
        v = self.longitudinal.step(e_s - e_s_ref, dt)
        return v, w
