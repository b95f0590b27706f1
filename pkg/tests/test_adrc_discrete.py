import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st
from helpers import long_division

from leadfollow.adrc_discrete import (
    ALPHA21_PRINTED,
    Accumulator,
    Df2tFilter,
    DiscreteAdrc,
    coefficient_report,
    lateral_coeffs,
    lateral_controller,
    longitudinal_coeffs,
    longitudinal_controller,
)

DIGITS = 50


def _published_lateral(w_cl, w_eso, b0, ts):
    """Lateral coefficients typed out independently, evaluated in sympy at 50 digits."""
    Ts = sp.Float(ts, DIGITS)
    zc, ze = sp.exp(-sp.Float(w_cl, DIGITS) * Ts), sp.exp(-sp.Float(w_eso, DIGITS) * Ts)
    g = 1 / (b0 * Ts**2)
    a11 = -sp.Rational(1, 8) * (1 + zc) ** 2 * (1 + ze) ** 3 + zc**2 * ze**3 + 1
    a12 = zc**2 * ze**3
    b10 = g * (sp.Rational(1, 4) * (1 + zc) ** 2 * (1 + ze) ** 3 - 2 * (zc**2 * ze**3 + 2 * zc + 3 * ze - 2))
    b11 = g * (
        -((1 + zc) ** 2) * (1 + ze) ** 3
        + 2 * (1 + zc) ** 2
        + 6 * (zc**2 * ze**3 + 2 * zc * ze + ze**2 + ze - 1)
    )
    b12 = g * (
        -sp.Rational(1, 4) * (1 + zc) ** 2 * (1 + ze) ** 3
        + 2 * (-2 * zc**2 * ze**3 + 3 * zc**2 * ze**2 + 2 * zc * ze**3 + 1)
    )
    return [float(sp.N(x, DIGITS)) for x in (a11, a12, b10, b11, b12)]


def _published_longitudinal(w_cl, w_eso, b0, ts):
    Ts = sp.Float(ts, DIGITS)
    zc, ze = sp.exp(-sp.Float(w_cl, DIGITS) * Ts), sp.exp(-sp.Float(w_eso, DIGITS) * Ts)
    g = 1 / (b0 * Ts)
    vals = (
        -2 * zc * ze**2,
        g * (zc * ze**2 - 2 * ze - zc + 2),
        g * (2 * zc * ze - 2 * zc * ze**2 + ze**2 - 1),
        g * (1 - zc),
        -2 * ze * g * (1 - zc),
        ze**2 * g * (1 - zc),
    )
    return [float(sp.N(x, DIGITS)) for x in vals]


def _symbolic_design(order, w_cl, w_eso, b0, ts):
    """Current-observer ADRC by coefficient matching of characteristic polynomials.

    Returns ``(num, den)`` of ``u/y`` in powers of ``z^-1`` (sign: u = +G * y).
    """
    z = sp.Symbol("z")
    n = order + 1
    Ts = sp.Float(ts, DIGITS)
    zc, ze = sp.exp(-sp.Float(w_cl, DIGITS) * Ts), sp.exp(-sp.Float(w_eso, DIGITS) * Ts)
    Phi = sp.Matrix(n, n, lambda i, j: Ts ** (j - i) / sp.factorial(j - i) if j >= i else 0)
    Gam = sp.Matrix([b0 * Ts ** (order - i) / sp.factorial(order - i) if i < order else 0 for i in range(n)])
    C = sp.Matrix([[1] + [0] * order])
    ls = sp.symbols(f"l0:{n}")
    L = sp.Matrix(ls)
    obs = Phi - L * C * Phi
    eqs = sp.Poly((z * sp.eye(n) - obs).det() - (z - ze) ** n, z).all_coeffs()
    L = L.subs(sp.solve(eqs, ls))
    ks = sp.symbols(f"k0:{order}")
    Ksub = sp.Matrix([ks])
    Ps, Gs = Phi[:order, :order], Gam[:order, :] / b0
    eqs = sp.Poly((z * sp.eye(order) - (Ps - Gs * Ksub)).det() - (z - zc) ** order, z).all_coeffs()
    Ksub = Ksub.subs(sp.solve(eqs, ks))
    Kf = sp.Matrix([[*Ksub, 1]]) / b0
    Ic = sp.eye(n) - L * C
    M = Phi - Gam * Kf
    A, B, Cc, D = M * Ic, M * L, -Kf * Ic, (-Kf * L)[0]
    den = sp.Poly((z * sp.eye(n) - A).det(), z)
    num = sp.Poly(sp.expand((Cc * (z * sp.eye(n) - A).adjugate() * B)[0] + D * den.as_expr()), z)
    # coefficients of z^n ... z^0 equal those of z^-0 ... z^-n after dividing by z^n
    nc = [float(c) for c in num.all_coeffs()]
    dc = [float(c) for c in den.all_coeffs()]
    nc = [0.0] * (len(dc) - len(nc)) + nc
    return np.array(nc) / dc[0], np.array(dc) / dc[0]


@pytest.mark.parametrize("ts", [0.2, 0.05, 0.01, 0.001])
def test_lateral_matches_symbolic_transcription(ts):
    c = lateral_coeffs(1.2, 10.0, -2.0, ts)
    ref = _published_lateral(1.2, 10.0, -2.0, ts)
    got = [c.alpha11, c.alpha12, c.beta10, c.beta11, c.beta12]
    assert got == pytest.approx(ref, rel=1e-12, abs=1e-15)


@pytest.mark.parametrize("ts", [0.2, 0.01, 0.001])
def test_longitudinal_printed_matches_symbolic_transcription(ts):
    c = longitudinal_coeffs(1.0, 10.0, -1.0, ts, alpha21=ALPHA21_PRINTED)
    ref = _published_longitudinal(1.0, 10.0, -1.0, ts)
    got = [c.alpha21, c.beta20, c.beta21, c.gamma20, c.gamma21, c.gamma22]
    assert got == pytest.approx(ref, rel=1e-12, abs=1e-15)


def test_documented_examples():
    lat = lateral_coeffs(1.2, 10.0, -2.0, 0.2)
    assert lat.z_CL == pytest.approx(0.786628, abs=1e-6)
    assert lat.z_ESO == pytest.approx(0.135335, abs=1e-6)
    assert lat.alpha12 == pytest.approx(1.5339e-3, abs=1e-7)
    lon = longitudinal_coeffs(1.0, 10.0, -1.0, 0.2, alpha21=ALPHA21_PRINTED)
    assert lon.z_CL == pytest.approx(0.818731, abs=1e-6)
    assert lon.z_ESO == pytest.approx(0.135335, abs=1e-6)
    # -2 exp(-0.2) exp(-4)
    assert lon.alpha21 == pytest.approx(-2.99912e-2, abs=1e-7)
    assert lon.gamma20 == pytest.approx(-0.906347, abs=1e-6)


@pytest.mark.parametrize("ts", [0.2, 0.01])
def test_lateral_closed_form_equals_pole_placement_design(ts):
    num, den = _symbolic_design(2, 1.2, 10.0, -2.0, ts)
    c = lateral_coeffs(1.2, 10.0, -2.0, ts)
    # thetadot = -G_FB e_d, so u/y = -G_FB = -(beta)/(alpha (1 - z^-1))
    want_den = np.polymul([1, c.alpha11, c.alpha12], [1, -1])
    assert den == pytest.approx(want_den, abs=1e-9)
    assert -num[:3] == pytest.approx([c.beta10, c.beta11, c.beta12], rel=1e-8)
    assert num[3] == pytest.approx(0.0, abs=1e-8 * abs(c.beta10))


@pytest.mark.parametrize("ts", [0.2, 0.01])
def test_longitudinal_alpha21_is_half_the_printed_value(ts):
    num, den = _symbolic_design(1, 1.0, 10.0, -1.0, ts)
    derived = longitudinal_coeffs(1.0, 10.0, -1.0, ts)
    printed = longitudinal_coeffs(1.0, 10.0, -1.0, ts, alpha21=ALPHA21_PRINTED)
    assert den == pytest.approx(np.polymul([1, derived.alpha21], [1, -1]), abs=1e-12)
    assert printed.alpha21 == pytest.approx(2 * derived.alpha21, rel=1e-12)
    assert -num[:2] == pytest.approx([derived.beta20, derived.beta21], rel=1e-9)


def test_printed_alpha21_pole_leaves_unit_circle_for_small_ts():
    c = longitudinal_coeffs(1.0, 10.0, -1.0, 0.001, alpha21=ALPHA21_PRINTED)
    assert abs(np.roots([1, c.alpha21])[0]) > 1.9


def test_coefficient_report_flags_only_alpha21():
    for ts in (0.2, 0.01):
        rows = {r.name: r for r in coefficient_report(Ts=ts)}
        for name, r in rows.items():
            if name == "alpha21 (printed)":
                assert r.abs_diff == pytest.approx(abs(r.derived), rel=1e-9)
            else:
                assert r.abs_diff <= 1e-9 * max(1.0, abs(r.closed_form)), name


@pytest.mark.parametrize("bad", [(0, 10, -2, 0.1), (1, 10, 0, 0.1), (1, 10, -2, 0), (1, -10, -2, 0.1)])
def test_invalid_inputs(bad):
    with pytest.raises(ValueError):
        lateral_coeffs(*bad)
    with pytest.raises(ValueError):
        longitudinal_coeffs(*bad)


# realization


def test_zero_input_zero_output():
    ctl = lateral_controller(lateral_coeffs(1.2, 10.0, -2.0, 0.01))
    assert all(ctl.step(0.0) == 0.0 for _ in range(20))


@pytest.mark.parametrize("ts", [0.2, 0.01])
def test_impulse_response_long_division(ts):
    c = lateral_coeffs(1.2, 10.0, -2.0, ts)
    ctl = lateral_controller(c)
    out = [ctl.step(1.0 if k == 0 else 0.0) for k in range(40)]
    ref = long_division(c.numerator, np.polymul(c.denominator, [1, -1]), 40)
    assert out == pytest.approx(ref, rel=1e-9, abs=1e-9)


def test_longitudinal_reference_path_long_division():
    c = longitudinal_coeffs(1.0, 10.0, -1.0, 0.2)
    ctl = longitudinal_controller(c)
    out = [ctl.step(0.0, 1.0 if k == 0 else 0.0) for k in range(30)]
    (fnum, fden), (pnum, pden) = c.feedback, c.prefilter
    ref = long_division(np.polymul(fnum, pnum), np.polymul(np.polymul(fden, [1, -1]), pden), 30)
    assert out == pytest.approx(ref, rel=1e-9, abs=1e-12)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=1, max_size=30), st.floats(-3, 3), st.integers(0, 5))
def test_linear_time_invariant(xs, scale, shift):
    c = lateral_coeffs(1.2, 10.0, -2.0, 0.05)

    def run(seq):
        ctl = lateral_controller(c)
        return np.array([ctl.step(x) for x in seq])

    base = run(xs)
    assert run([scale * x for x in xs]) == pytest.approx(scale * base, abs=1e-6 * (1 + np.abs(base).max()))
    shifted = run([0.0] * shift + list(xs))
    assert shifted[shift:] == pytest.approx(base, abs=1e-9 * (1 + np.abs(base).max()))


def test_constant_input_ramp_slope_equals_residue():
    c = lateral_coeffs(1.2, 10.0, -2.0, 0.05)
    ctl = lateral_controller(c)
    out = [ctl.step(0.3) for _ in range(600)]
    slope = out[-1] - out[-2]
    residue = 0.3 * sum(c.numerator) / sum(c.denominator)
    assert slope == pytest.approx(residue, rel=1e-6)


def test_poles_approach_first_order_rate():
    for ts in (1e-2, 1e-3, 1e-4):
        c = lateral_coeffs(1.2, 10.0, -2.0, ts)
        assert abs(c.z_CL - (1 - 1.2 * ts)) <= (1.2 * ts) ** 2
        assert abs(c.z_ESO - (1 - 10 * ts)) <= (10 * ts) ** 2


def test_df2t_matches_scipy_lfilter():
    from scipy.signal import lfilter

    rng = np.random.default_rng(0)
    x = rng.standard_normal(200)
    num, den = [0.5, -0.2, 0.1], [1.0, -0.9, 0.2]
    f = Df2tFilter(num, den)
    assert [f.step(v) for v in x] == pytest.approx(lfilter(num, den, x), abs=1e-12)


def test_accumulator_clamps_and_unwinds():
    acc = Accumulator(limit=1.0)
    assert [acc.step(0.6) for _ in range(3)] == [0.6, 1.0, 1.0]
    assert acc.step(-0.5) == pytest.approx(0.5)


def test_discrete_adrc_checks_tick():
    ctl = DiscreteAdrc(lateral_coeffs(1.2, 10, -2, 0.01), longitudinal_coeffs(1, 10, -1, 0.01), 5.0)
    with pytest.raises(ValueError):
        ctl.update(0.0, 2.0, 2.0, 0.02)
    v, w = ctl.update(0.5, 2.0, 2.0, 0.01)
    assert abs(w) <= 5.0 and math.isfinite(v)
    assert math.isnan(ctl.fhat_l)
