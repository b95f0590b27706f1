"""Leader-follower tracking errors and the camera/laser measurement geometry.

Errors are expressed in the follower's body frame: ``e_s`` along the heading
axis, ``e_d`` across it, positive when the leader is on the follower's left.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .plant import VehicleState


class GeometryError(ValueError):
    """Camera and laser readings that no leader position can satisfy."""


@dataclass(frozen=True)
class LeaderState:
    X_L: float
    Y_L: float
    theta_L: float = 0.0
    v_L: float = 0.0

    def __post_init__(self):
        if not all(map(math.isfinite, (self.X_L, self.Y_L, self.theta_L, self.v_L))):
            raise ValueError("LeaderState fields must be finite")
        if self.v_L < 0:
            raise ValueError(f"leader speed must be >= 0, got {self.v_L}")


@dataclass(frozen=True)
class TrackErrors:
    e_d: float
    e_s: float

    def __post_init__(self):
        if not (math.isfinite(self.e_d) and math.isfinite(self.e_s)):
            raise ValueError("tracking errors must be finite")


@dataclass(frozen=True)
class CameraParams:
    """Pinhole camera: focal length and pixel pitch in meters."""

    f_c: float = 2.8e-3
    P: float = 19e-6
    width_px: int = 1280
    height_px: int = 720

    def __post_init__(self):
        if not (self.f_c > 0 and self.P > 0):
            raise ValueError("focal length and pixel pitch must be > 0")


@dataclass(frozen=True)
class NoiseModel:
    sigma_d: float = 0.0
    sigma_s: float = 0.0
    seed: int = 0

    def __post_init__(self):
        if self.sigma_d < 0 or self.sigma_s < 0:
            raise ValueError("noise standard deviations must be >= 0")


def true_errors(vehicle: VehicleState, leader: LeaderState) -> TrackErrors:
    """Leader position rotated into the follower frame."""
    dx = leader.X_L - vehicle.X
    dy = leader.Y_L - vehicle.Y
    c, s = math.cos(vehicle.theta), math.sin(vehicle.theta)
    return TrackErrors(e_d=-s * dx + c * dy, e_s=c * dx + s * dy)


def course_angle_error(leader: LeaderState, theta_eff: float) -> float:
    """``theta_L - theta_eff``, unwrapped."""
    return leader.theta_L - theta_eff


def pixel_to_meter(e_dc: float, e_s_ref: float, cam: CameraParams) -> float:
    """Cross-track error in meters from its horizontal pixel offset.

    Similar triangles between the image plane (offset ``e_dc * P`` at focal
    distance ``f_c``) and the leader plane at the assumed range ``e_s_ref``.
    """
    if not e_s_ref > 0:
        raise ValueError(f"e_s_ref must be > 0, got {e_s_ref!r}")
    return e_s_ref * e_dc * cam.P / cam.f_c


def meter_to_pixel(e_d: float, e_s: float, cam: CameraParams) -> float:
    """Pixel offset a leader at body-frame ``(e_d, e_s)`` projects to."""
    if not e_s > 0:
        raise ValueError(f"leader must be in front of the camera, got e_s={e_s!r}")
    return e_d * cam.f_c / (e_s * cam.P)


def along_track_from_laser(d_VL: float, e_d: float) -> float:
    """Along-track error from the laser range and the cross-track error."""
    if d_VL < 0:
        raise ValueError(f"laser distance must be >= 0, got {d_VL!r}")
    if abs(e_d) > d_VL:
        raise GeometryError(f"|e_d|={abs(e_d):.6g} m exceeds laser range {d_VL:.6g} m")
    return math.sqrt(d_VL * d_VL - e_d * e_d)


class NoiseStream:
    """Seeded Gaussian measurement noise.

    Each call to :meth:`draw` consumes exactly one pair of samples, whether or
    not the noise is switched on, so runs with the same seed see the same
    realisation regardless of schedule.
    """

    def __init__(self, model: NoiseModel):
        self.model = model
        self._rng = np.random.default_rng(model.seed)

    def draw(self) -> tuple[float, float]:
        n_d, n_s = self._rng.standard_normal(2)
        return self.model.sigma_d * float(n_d), self.model.sigma_s * float(n_s)

    def apply(self, errors: TrackErrors, enabled: bool = True) -> TrackErrors:
        n_d, n_s = self.draw()
        if not enabled:
            return errors
        return replace(errors, e_d=errors.e_d + n_d, e_s=errors.e_s + n_s)


def add_noise(errors: TrackErrors, model: NoiseModel, stream: NoiseStream | None = None) -> TrackErrors:
    """Add one noise sample to ``errors``.

    Without an explicit ``stream`` a fresh one is seeded from ``model``, which
    makes the call reproducible but draws the same first sample each time.
    """
    if stream is None:
        stream = NoiseStream(model)
    return stream.apply(errors)
