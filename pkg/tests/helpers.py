"""Synthetic skeletons and small numeric oracles shared by the tests."""

import numpy as np

from leadfollow.pose_command import LandmarkFrame, N_LANDMARKS


def skeleton(crouch=False, right_up=False, left_up=False, x0=0.5, visible=1.0):
    """Front-facing stick figure in normalized image coordinates.

    The person's right side appears at smaller x (camera view).  A crouch
    lowers shoulders and hips towards the fixed ankles.
    """
    pts = np.full((N_LANDMARKS, 2), 0.5)
    ankle_y = 0.95
    if crouch:
        shoulder_y, hip_y, knee_y = 0.55, 0.80, 0.85
    else:
        shoulder_y, hip_y, knee_y = 0.30, 0.42, 0.68
    half = 0.06
    for idx, y in ((0, shoulder_y - 0.12),):
        pts[idx] = (x0, y)
    for i in range(1, 11):
        pts[i] = (x0 + (half / 3 if i in (1, 2, 3, 7, 9) else -half / 3), shoulder_y - 0.10)

    def side(left_idx, right_idx, y, spread=half):
        pts[left_idx] = (x0 + spread, y)
        pts[right_idx] = (x0 - spread, y)

    side(11, 12, shoulder_y)
    side(13, 14, shoulder_y + 0.10, half + 0.03)
    side(15, 16, shoulder_y + 0.20, half + 0.04)
    for a, b in ((17, 18), (19, 20), (21, 22)):
        side(a, b, shoulder_y + 0.22, half + 0.04)
    side(23, 24, hip_y, 0.04)
    side(25, 26, knee_y, 0.05)
    side(27, 28, ankle_y, 0.05)
    side(29, 30, ankle_y + 0.01, 0.05)
    side(31, 32, ankle_y + 0.02, 0.06)
    # raised hands go above the head
    if right_up:
        for i in (14, 16, 18, 20, 22):
            pts[i, 1] = shoulder_y - 0.15
    if left_up:
        for i in (13, 15, 17, 19, 21):
            pts[i, 1] = shoulder_y - 0.15
    pts = np.clip(pts, 0.0, 1.0)
    return LandmarkFrame(pts, np.full(N_LANDMARKS, visible))


def long_division(num, den, n):
    """First ``n`` impulse-response samples of ``num(z^-1)/den(z^-1)``."""
    num = list(num) + [0.0] * n
    h = []
    r = np.array(num[: n + len(den)], dtype=float)
    for k in range(n):
        q = r[k] / den[0]
        h.append(q)
        for j, d in enumerate(den):
            if k + j < len(r):
                r[k + j] -= q * d
    return np.array(h)
