"""Continuous-time linear ADRC for the lateral and longitudinal channels.

Lateral channel model:      e_d'' = b0 * thetadot + f_l      (total disturbance f_l)
Longitudinal channel model: e_s'  = -v + f_v                 (total disturbance f_v)

Both channels are tuned by bandwidth parameterization: every controller pole
at ``-omega_CL`` and every observer pole at ``-omega_ESO``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .plant import DT_PLANT, substeps


def _check_bandwidths(omega_CL: float, omega_ESO: float) -> None:
    for name, w in (("omega_CL", omega_CL), ("omega_ESO", omega_ESO)):
        if not (math.isfinite(w) and w > 0):
            raise ValueError(f"{name} must be > 0, got {w!r}")


@dataclass(frozen=True)
class LateralGains:
    k1l: float
    k2l: float
    l1l: float
    l2l: float
    l3l: float
    b0: float
    omega_CL: float
    omega_ESO: float


@dataclass(frozen=True)
class LongitudinalGains:
    k1v: float
    l1v: float
    l2v: float
    omega_CL: float
    omega_ESO: float


@dataclass(frozen=True)
class EsoState:
    """Observer state.

    Lateral: ``(e_d_hat, e_d_dot_hat, f_l_hat)``; longitudinal: ``(e_s_hat, f_v_hat)``.
    """

    z: tuple[float, ...]

    @classmethod
    def lateral(cls, e_d0: float = 0.0) -> "EsoState":
        return cls((e_d0, 0.0, 0.0))

    @classmethod
    def longitudinal(cls, e_s0: float = 0.0) -> "EsoState":
        return cls((e_s0, 0.0))

    @property
    def disturbance(self) -> float:
        return self.z[-1]


def tune_lateral(omega_CL: float, omega_ESO: float, b0: float) -> LateralGains:
    """Gains from ``(s + w_CL)^2`` and ``(s + w_ESO)^3``."""
    _check_bandwidths(omega_CL, omega_ESO)
    if b0 == 0 or not math.isfinite(b0):
        raise ValueError("b0 must be finite and nonzero")
    return LateralGains(
        k1l=omega_CL**2,
        k2l=2.0 * omega_CL,
        l1l=3.0 * omega_ESO,
        l2l=3.0 * omega_ESO**2,
        l3l=omega_ESO**3,
        b0=b0,
        omega_CL=omega_CL,
        omega_ESO=omega_ESO,
    )


def tune_longitudinal(omega_CL: float, omega_ESO: float) -> LongitudinalGains:
    """Gains from ``s + w_CL`` and ``(s + w_ESO)^2``."""
    _check_bandwidths(omega_CL, omega_ESO)
    return LongitudinalGains(
        k1v=omega_CL, l1v=2.0 * omega_ESO, l2v=omega_ESO**2, omega_CL=omega_CL, omega_ESO=omega_ESO
    )


def lateral_eso_step(
    state: EsoState, e_d_meas: float, u: float, gains: LateralGains, dt: float, max_step: float = DT_PLANT
) -> EsoState:
    """Advance the third-order ESO by ``dt`` with measurement and input held."""
    n, h = substeps(dt, max_step)
    l1, l2, l3, b0 = gains.l1l, gains.l2l, gains.l3l, gains.b0
    bu = b0 * u
    y = e_d_meas

    def f(z1, z2, z3):
        inn = y - z1
        return z2 + l1 * inn, z3 + bu + l2 * inn, l3 * inn

    z1, z2, z3 = state.z
    for _ in range(n):
        a1, a2, a3 = f(z1, z2, z3)
        b1, b2, b3 = f(z1 + 0.5 * h * a1, z2 + 0.5 * h * a2, z3 + 0.5 * h * a3)
        c1, c2, c3 = f(z1 + 0.5 * h * b1, z2 + 0.5 * h * b2, z3 + 0.5 * h * b3)
        d1, d2, d3 = f(z1 + h * c1, z2 + h * c2, z3 + h * c3)
        z1 += h / 6.0 * (a1 + 2.0 * b1 + 2.0 * c1 + d1)
        z2 += h / 6.0 * (a2 + 2.0 * b2 + 2.0 * c2 + d2)
        z3 += h / 6.0 * (a3 + 2.0 * b3 + 2.0 * c3 + d3)
    return EsoState((z1, z2, z3))


def lateral_control(state: EsoState, gains: LateralGains) -> float:
    """Unsaturated turn-rate command cancelling the estimated disturbance."""
    e_hat, de_hat, f_hat = state.z
    return (-gains.k1l * e_hat - gains.k2l * de_hat - f_hat) / gains.b0


def longitudinal_eso_step(
    state: EsoState, e_s_meas: float, u: float, gains: LongitudinalGains, dt: float, max_step: float = DT_PLANT
) -> EsoState:
    """Advance the second-order ESO (input gain -1) by ``dt``."""
    n, h = substeps(dt, max_step)
    l1, l2 = gains.l1v, gains.l2v
    y = e_s_meas

    def f(z1, z2):
        inn = y - z1
        return z2 - u + l1 * inn, l2 * inn

    z1, z2 = state.z
    for _ in range(n):
        a1, a2 = f(z1, z2)
        b1, b2 = f(z1 + 0.5 * h * a1, z2 + 0.5 * h * a2)
        c1, c2 = f(z1 + 0.5 * h * b1, z2 + 0.5 * h * b2)
        d1, d2 = f(z1 + h * c1, z2 + h * c2)
        z1 += h / 6.0 * (a1 + 2.0 * b1 + 2.0 * c1 + d1)
        z2 += h / 6.0 * (a2 + 2.0 * b2 + 2.0 * c2 + d2)
    return EsoState((z1, z2))


def longitudinal_control(
    state: EsoState, e_s_ref: float, e_s_ref_dot: float, gains: LongitudinalGains
) -> float:
    """Speed command tracking ``e_s_ref``."""
    e_hat, f_hat = state.z
    return -gains.k1v * (e_s_ref - e_hat) - e_s_ref_dot + f_hat


class ContinuousAdrc:
    """Both ADRC channels with their observers, sampled every ``update`` call.

    The observers are initialised on the first measurement and driven with the
    saturated turn-rate command.
    """

    def __init__(self, lateral: LateralGains, longitudinal: LongitudinalGains, thetadot_max: float):
        self.lateral = lateral
        self.longitudinal = longitudinal
        self.thetadot_max = thetadot_max
        self.eso_l: EsoState | None = None
        self.eso_v: EsoState | None = None

    @property
    def fhat_l(self) -> float:
        return self.eso_l.disturbance if self.eso_l else 0.0

    @property
    def fhat_v(self) -> float:
        return self.eso_v.disturbance if self.eso_v else 0.0

    def update(self, e_d: float, e_s: float, e_s_ref: float, dt: float, e_s_ref_dot: float = 0.0):
        """Return ``(v_cmd, thetadot_cmd)`` and advance the observers over the hold ``dt``."""
        if self.eso_l is None:
            self.eso_l = EsoState.lateral(e_d)
            self.eso_v = EsoState.longitudinal(e_s)
        lim = self.thetadot_max
        w = min(max(lateral_control(self.eso_l, self.lateral), -lim), lim)
        v = longitudinal_control(self.eso_v, e_s_ref, e_s_ref_dot, self.longitudinal)
        self.eso_l = lateral_eso_step(self.eso_l, e_d, w, self.lateral, dt)
        self.eso_v = longitudinal_eso_step(self.eso_v, e_s, v, self.longitudinal, dt)
        return v, w
