import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from leadfollow.plant import (
    NO_SLIP,
    SlipCoefficients,
    VehicleParams,
    VehicleState,
    advance_vehicle,
    forward_kinematics,
    integrate_pose,
    inverse_kinematics,
    rk4_step,
    saturate,
    substeps,
)

P = VehicleParams()
finite = st.floats(-50, 50, allow_nan=False)


def test_forward_kinematics_no_slip():
    v, w = forward_kinematics(10.0, 10.0, NO_SLIP, P)
    assert v == pytest.approx(3.0) and w == 0.0
    v, w = forward_kinematics(1.0, -1.0, NO_SLIP, P)
    assert v == 0.0 and w == pytest.approx(2 * 0.3 / 0.7)


def test_inverse_kinematics_example():
    assert inverse_kinematics(2.0, 0.0, P) == pytest.approx((6.666666667, 6.666666667))
    assert inverse_kinematics(-0.5, 0.0, P) == pytest.approx((-1.666666667, -1.666666667))


@given(finite, finite)
def test_kinematics_round_trip(v, w):
    wr, wl = inverse_kinematics(v, w, P)
    v2, w2 = forward_kinematics(wr, wl, NO_SLIP, P)
    assert v2 == pytest.approx(v, abs=1e-9)
    assert w2 == pytest.approx(w, abs=1e-9)


@given(finite, finite, st.floats(0, 1), st.floats(0, 1))
def test_slip_only_reduces_track_contribution(wr, wl, a_r, a_l):
    v, w = forward_kinematics(wr, wl, SlipCoefficients(a_r, a_l), P)
    v1, w1 = forward_kinematics(a_r * wr, a_l * wl, NO_SLIP, P)
    assert v == pytest.approx(v1) and w == pytest.approx(w1)


def test_full_slip_stops_vehicle():
    assert forward_kinematics(5.0, 3.0, SlipCoefficients(0.0, 0.0), P) == (0.0, 0.0)


@pytest.mark.parametrize("bad", [-0.1, 1.1, math.nan])
def test_slip_range(bad):
    with pytest.raises(ValueError):
        SlipCoefficients(bad, 1.0)


def test_params_and_state_validation():
    with pytest.raises(ValueError):
        VehicleParams(r=0.0)
    with pytest.raises(ValueError):
        VehicleParams(B=-1.0)
    with pytest.raises(ValueError):
        VehicleState(math.inf, 0.0, 0.0)
    with pytest.raises(ValueError):
        inverse_kinematics(math.nan, 0.0, P)


def test_saturate():
    assert saturate(7.0, 5.0) == 5.0
    assert saturate(-7.0, 5.0) == -5.0
    assert saturate(1.5, 5.0) == 1.5


def test_substeps():
    assert substeps(0.01) == (10, pytest.approx(0.001))
    assert substeps(0.0005) == (1, 0.0005)
    with pytest.raises(ValueError):
        substeps(0.0)


def test_quarter_circle_closed_form():
    # v = 1, thetadot = pi/2 for 1 s: quarter circle of radius 2/pi
    s = integrate_pose(VehicleState(0, 0, 0), 1.0, math.pi / 2, 1.0)
    R = 2 / math.pi
    assert (s.X, s.Y, s.theta) == pytest.approx((R, R, math.pi / 2), abs=1e-6)


def test_straight_line():
    s = integrate_pose(VehicleState(1.0, 2.0, 0.3), 2.0, 0.0, 3.0)
    assert s.X == pytest.approx(1 + 6 * math.cos(0.3))
    assert s.Y == pytest.approx(2 + 6 * math.sin(0.3))


@settings(max_examples=30, deadline=None)
@given(st.floats(-3, 3), st.floats(0.1, 4), st.floats(-math.pi, math.pi))
def test_arc_matches_analytic(v, w, th0):
    s = integrate_pose(VehicleState(0, 0, th0), v, w, 1.0)
    x = v / w * (math.sin(th0 + w) - math.sin(th0))
    y = -v / w * (math.cos(th0 + w) - math.cos(th0))
    assert (s.X, s.Y) == pytest.approx((x, y), abs=1e-8)


def test_advance_vehicle_constant_slip_matches_effective_rates():
    wr, wl = inverse_kinematics(1.0, 0.8, P)
    slip = SlipCoefficients(0.7, 0.9)
    v, w = forward_kinematics(wr, wl, slip, P)
    a = advance_vehicle(VehicleState(0, 0, 0), wr, wl, lambda t: (0.7, 0.9), 0.0, 0.5, P)
    b = integrate_pose(VehicleState(0, 0, 0), v, w, 0.5)
    assert (a.X, a.Y, a.theta) == pytest.approx((b.X, b.Y, b.theta), abs=1e-12)


def test_rk4_exponential():
    y = np.array([1.0])
    for _ in range(100):
        y = rk4_step(lambda t, y: -y, 0.0, y, 0.01)
    assert y[0] == pytest.approx(math.exp(-1.0), rel=1e-9)
