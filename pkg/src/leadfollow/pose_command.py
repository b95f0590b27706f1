"""Leader pose classification from 2-D body landmarks and pose-gated wheel commands.

Landmarks follow the 33-point MediaPipe pose map with normalized image
coordinates (x to the right, y downward).  Only landmarks 11..30 are used.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import CameraParams, pixel_to_meter
from .plant import VehicleParams, inverse_kinematics, saturate

N_LANDMARKS = 33
REQUIRED = tuple(range(11, 31))
VISIBLE = 0.5

# MediaPipe indices
L_SHOULDER, R_SHOULDER = 11, 12
L_WRIST, R_WRIST = 15, 16
L_HIP, R_HIP = 23, 24
L_ANKLE, R_ANKLE = 27, 28

# left/right partner of every landmark, used for mirroring
_PAIRS = ((1, 4), (2, 5), (3, 6), (7, 8), (9, 10)) + tuple((i, i + 1) for i in range(11, 33, 2))
SWAP = list(range(N_LANDMARKS))
for _a, _b in _PAIRS:
    SWAP[_a], SWAP[_b] = _b, _a


class LeaderPose(enum.Enum):
    UPRIGHT = "Upright"
    CROUCH = "Crouch"
    CROUCH_RIGHT_HAND = "CrouchRightHand"
    CROUCH_LEFT_HAND = "CrouchLeftHand"
    UNKNOWN = "Unknown"


@dataclass(frozen=True)
class LandmarkFrame:
    points: np.ndarray  # (33, 2)
    visibility: np.ndarray  # (33,)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        vis = np.asarray(self.visibility, dtype=float)
        if pts.shape != (N_LANDMARKS, 2) or vis.shape != (N_LANDMARKS,):
            raise ValueError(f"expected 33 landmarks, got points {pts.shape}, visibility {vis.shape}")
        if not np.all(np.isfinite(pts)) or np.any((pts < 0) | (pts > 1)):
            raise ValueError("landmark coordinates must lie in [0, 1]")
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "visibility", vis)

    def visible(self, indices=REQUIRED, threshold: float = VISIBLE) -> bool:
        return bool(np.all(self.visibility[list(indices)] >= threshold))


@dataclass(frozen=True)
class WheelCommand:
    omega_R: float
    omega_L: float

    def __post_init__(self):
        if not (math.isfinite(self.omega_R) and math.isfinite(self.omega_L)):
            raise ValueError("wheel command must be finite")


STOP = WheelCommand(0.0, 0.0)


@dataclass(frozen=True)
class PoseRules:
    crouch_ratio: float = 0.55
    visibility: float = VISIBLE


def _extent_ratio(p: np.ndarray, shoulder: int, hip: int, ankle: int) -> float:
    full = p[ankle, 1] - p[shoulder, 1]
    if full <= 0:
        return math.nan
    return (p[ankle, 1] - p[hip, 1]) / full


def classify_pose(frame: LandmarkFrame, rules: PoseRules = PoseRules()) -> LeaderPose:
    """Upright, crouch, or crouch with one hand raised.

    Raised hands only count while crouching; both hands raised is treated
    as a plain crouch.
    """
    if not frame.visible(REQUIRED, rules.visibility):
        return LeaderPose.UNKNOWN
    p = frame.points
    ratios = [_extent_ratio(p, L_SHOULDER, L_HIP, L_ANKLE), _extent_ratio(p, R_SHOULDER, R_HIP, R_ANKLE)]
    if any(math.isnan(r) for r in ratios):
        return LeaderPose.UNKNOWN
    if np.mean(ratios) >= rules.crouch_ratio:
        return LeaderPose.UPRIGHT
    right = p[R_WRIST, 1] < p[R_SHOULDER, 1]
    left = p[L_WRIST, 1] < p[L_SHOULDER, 1]
    if right and not left:
        return LeaderPose.CROUCH_RIGHT_HAND
    if left and not right:
        return LeaderPose.CROUCH_LEFT_HAND
    return LeaderPose.CROUCH


def mirror_frame(frame: LandmarkFrame) -> LandmarkFrame:
    """Horizontal flip: x -> 1 - x with left and right landmarks exchanged."""
    pts = frame.points[SWAP].copy()
    pts[:, 0] = 1.0 - pts[:, 0]
    return LandmarkFrame(pts, frame.visibility[SWAP].copy())


def command_select(
    pose: LeaderPose,
    adrc_thetadot: float,
    adrc_v: float,
    params: VehicleParams = VehicleParams(),
    v_fix: float = 0.5,
) -> WheelCommand:
    """Stateless pose-to-wheel mapping; Unknown stops (holding is done by the selector)."""
    if pose is LeaderPose.UPRIGHT:
        return WheelCommand(*inverse_kinematics(adrc_v, saturate(adrc_thetadot, params.thetadot_max), params))
    if pose is LeaderPose.CROUCH_RIGHT_HAND:
        return WheelCommand(*inverse_kinematics(v_fix, 0.0, params))
    if pose is LeaderPose.CROUCH_LEFT_HAND:
        return WheelCommand(*inverse_kinematics(-v_fix, 0.0, params))
    return STOP


@dataclass
class CommandSelector:
    """Debounced pose gate in front of ``command_select``.

    A new pose takes over only after it has been seen on ``debounce``
    consecutive ticks; the first valid pose is taken at once.  Unknown
    frames keep the last command for up to ``hold`` ticks, then stop.
    """

    params: VehicleParams = field(default_factory=VehicleParams)
    v_fix: float = 0.5
    debounce: int = 3
    hold: int = 3
    active: LeaderPose | None = None
    _candidate: LeaderPose | None = None
    _count: int = 0
    _unknown: int = 0
    _last: WheelCommand = STOP

    def step(self, pose: LeaderPose, adrc_thetadot: float, adrc_v: float) -> WheelCommand:
        if pose is LeaderPose.UNKNOWN:
            self._unknown += 1
            self._candidate, self._count = None, 0
            if self._unknown > self.hold:
                self._last = STOP
            return self._last
        self._unknown = 0

        if self.active is None:
            self.active = pose
        elif pose is self.active:
            self._candidate, self._count = None, 0
        else:
            if pose is self._candidate:
                self._count += 1
            else:
                self._candidate, self._count = pose, 1
            if self._count >= self.debounce:
                self.active, self._candidate, self._count = pose, None, 0

        self._last = command_select(self.active, adrc_thetadot, adrc_v, self.params, self.v_fix)
        return self._last


# replay files


@dataclass(frozen=True)
class ReplayFrame:
    t: float
    frame: LandmarkFrame


def parse_landmark_line(line: str) -> ReplayFrame:
    values = [float(x) for x in line.split()]
    if len(values) != 1 + 3 * N_LANDMARKS:
        raise ValueError(f"expected {1 + 3 * N_LANDMARKS} numbers per frame, got {len(values)}")
    arr = np.array(values[1:]).reshape(N_LANDMARKS, 3)
    return ReplayFrame(values[0], LandmarkFrame(arr[:, :2], arr[:, 2]))


def load_landmarks(path: str | Path) -> list[ReplayFrame]:
    frames = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        try:
            frames.append(parse_landmark_line(line))
        except ValueError as exc:
            raise ValueError(f"{path}:{lineno}: {exc}") from exc
    return frames


def format_landmark_line(t: float, frame: LandmarkFrame) -> str:
    cells = [repr(float(t))]
    for (x, y), v in zip(frame.points, frame.visibility):
        cells += [repr(float(x)), repr(float(y)), repr(float(v))]
    return " ".join(cells)


def cross_track_pixels(frame: LandmarkFrame, cam: CameraParams = CameraParams()) -> float:
    """Leader offset from the image centre in pixels, positive when the leader is left of centre."""
    x_center = 0.5 * (frame.points[L_HIP, 0] + frame.points[R_HIP, 0])
    return (0.5 - x_center) * cam.width_px


def replay_errors(frame: LandmarkFrame, e_s_ref: float, cam: CameraParams = CameraParams()) -> tuple[float, float]:
    """(e_d, e_s) reconstructed from a frame, taking the along-track distance at its reference."""
    return pixel_to_meter(cross_track_pixels(frame, cam), e_s_ref, cam), e_s_ref
