"""Discrete-time transfer-function realization of the ADRC controllers.

Lateral:       thetadot = -G_FB_L(z) * e_d
Longitudinal:  v        =  G_FB_v(z) * (G_PF_v(z) * e_s_ref - e_s)

Each feedback transfer function is a biquad (or first-order section) in
cascade with the integrator ``1 / (1 - z^-1)``.  The sections run in direct
form II transposed; the integrator is a separate accumulator that clamps at
the output limit, which stops it winding up while the actuator saturates.

The closed-form coefficients come from a discrete current-observer ADRC with
poles at ``z_CL = exp(-omega_CL Ts)`` and ``z_ESO = exp(-omega_ESO Ts)``.
They suffer heavy cancellation for small ``Ts`` (terms of order one cancel
down to order ``Ts^3``), so they are evaluated in extended precision.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np
from scipy import signal

#: The published value of the longitudinal denominator coefficient is ``-2 z_CL z_ESO^2``;
#: deriving the controller gives ``-z_CL z_ESO^2``.  See :func:`longitudinal_coeffs`.
ALPHA21_PRINTED = "printed"
ALPHA21_DERIVED = "derived"

_PRECISION = 50


def _validate(omega_CL: float, omega_ESO: float, b0: float, Ts: float) -> None:
    for name, value in (("omega_CL", omega_CL), ("omega_ESO", omega_ESO), ("Ts", Ts)):
        if not (math.isfinite(value) and value > 0):
            raise ValueError(f"{name} must be > 0, got {value!r}")
    if b0 == 0 or not math.isfinite(b0):
        raise ValueError("b0 must be finite and nonzero")


@dataclass(frozen=True)
class LateralDiscreteCoeffs:
    alpha11: float
    alpha12: float
    beta10: float
    beta11: float
    beta12: float
    Ts: float
    z_CL: float = float("nan")
    z_ESO: float = float("nan")

    @property
    def numerator(self) -> tuple[float, float, float]:
        return self.beta10, self.beta11, self.beta12

    @property
    def denominator(self) -> tuple[float, float, float]:
        """Denominator without the integrator factor."""
        return 1.0, self.alpha11, self.alpha12


@dataclass(frozen=True)
class LongitudinalDiscreteCoeffs:
    alpha21: float
    beta20: float
    beta21: float
    gamma20: float
    gamma21: float
    gamma22: float
    Ts: float
    z_CL: float = float("nan")
    z_ESO: float = float("nan")

    def __post_init__(self):
        if self.beta20 == 0:
            raise ValueError("beta20 must be nonzero")

    @property
    def feedback(self) -> tuple[tuple[float, ...], tuple[float, ...]]:
        """``(num, den)`` of G_FB_v without the integrator."""
        return (self.beta20, self.beta21), (1.0, self.alpha21)

    @property
    def prefilter(self) -> tuple[tuple[float, ...], tuple[float, ...]]:
        """``(num, den)`` of G_PF_v, normalised to a monic denominator."""
        g = 1.0 / self.beta20
        return (self.gamma20 * g, self.gamma21 * g, self.gamma22 * g), (1.0, self.beta21 * g)


def lateral_coeffs(omega_CL: float, omega_ESO: float, b0: float, Ts: float) -> LateralDiscreteCoeffs:
    """Coefficients of the lateral feedback controller for sample time ``Ts``."""
    _validate(omega_CL, omega_ESO, b0, Ts)
    with mpmath.workdps(_PRECISION):
        ts = mpmath.mpf(Ts)
        zc = mpmath.exp(-mpmath.mpf(omega_CL) * ts)
        ze = mpmath.exp(-mpmath.mpf(omega_ESO) * ts)
        common = (1 + zc) ** 2 * (1 + ze) ** 3
        p = zc**2 * ze**3
        g = 1 / (mpmath.mpf(b0) * ts**2)
        alpha11 = -common / 8 + p + 1
        alpha12 = p
        beta10 = g * (common / 4 - 2 * (p + 2 * zc + 3 * ze - 2))
        beta11 = g * (-common + 2 * (1 + zc) ** 2 + 6 * (p + 2 * zc * ze + ze**2 + ze - 1))
        beta12 = g * (-common / 4 + 2 * (-2 * p + 3 * zc**2 * ze**2 + 2 * zc * ze**3 + 1))
        vals = [float(x) for x in (alpha11, alpha12, beta10, beta11, beta12, zc, ze)]
    a11, a12, b10, b11, b12, zc_f, ze_f = vals
    return LateralDiscreteCoeffs(a11, a12, b10, b11, b12, Ts, zc_f, ze_f)


def longitudinal_coeffs(
    omega_CL: float, omega_ESO: float, b0_v: float = -1.0, Ts: float = 0.2, alpha21: str = ALPHA21_DERIVED
) -> LongitudinalDiscreteCoeffs:
    """Coefficients of the longitudinal feedback controller and reference prefilter.

    ``alpha21="printed"`` reproduces the published ``-2 z_CL z_ESO^2``.  That
    value puts a controller pole at ``2 z_CL z_ESO^2``, which leaves the unit
    circle for small ``Ts`` and does not reduce to the continuous design; the
    default ``"derived"`` uses ``-z_CL z_ESO^2``, the value obtained when the
    controller is derived from the current-observer design.
    """
    _validate(omega_CL, omega_ESO, b0_v, Ts)
    if alpha21 not in (ALPHA21_PRINTED, ALPHA21_DERIVED):
        raise ValueError(f"alpha21 must be {ALPHA21_PRINTED!r} or {ALPHA21_DERIVED!r}")
    with mpmath.workdps(_PRECISION):
        ts = mpmath.mpf(Ts)
        zc = mpmath.exp(-mpmath.mpf(omega_CL) * ts)
        ze = mpmath.exp(-mpmath.mpf(omega_ESO) * ts)
        g = 1 / (mpmath.mpf(b0_v) * ts)
        a21 = (-2 if alpha21 == ALPHA21_PRINTED else -1) * zc * ze**2
        b20 = g * (zc * ze**2 - 2 * ze - zc + 2)
        b21 = g * (2 * zc * ze - 2 * zc * ze**2 + ze**2 - 1)
        g20 = (1 - zc) * g
        g21 = -2 * ze * (1 - zc) * g
        g22 = ze**2 * (1 - zc) * g
        vals = [float(x) for x in (a21, b20, b21, g20, g21, g22, zc, ze)]
    return LongitudinalDiscreteCoeffs(*vals[:6], Ts, vals[6], vals[7])


class Df2tFilter:
    """IIR section ``num(z^-1) / den(z^-1)`` in direct form II transposed."""

    def __init__(self, num, den):
        num = [float(x) for x in num]
        den = [float(x) for x in den]
        if den[0] == 0:
            raise ValueError("leading denominator coefficient must be nonzero")
        n = max(len(num), len(den))
        num += [0.0] * (n - len(num))
        den += [0.0] * (n - len(den))
        a0 = den[0]
        self.b = [x / a0 for x in num]
        self.a = [x / a0 for x in den]
        self.state = [0.0] * (n - 1)

    def reset(self) -> None:
        self.state = [0.0] * len(self.state)

    def step(self, x: float) -> float:
        b, a, s = self.b, self.a, self.state
        y = b[0] * x + (s[0] if s else 0.0)
        last = len(s) - 1
        for i in range(last + 1):
            nxt = s[i + 1] if i < last else 0.0
            s[i] = b[i + 1] * x - a[i + 1] * y + nxt
        return y


@dataclass
class Accumulator:
    """``1 / (1 - z^-1)`` with optional clamping of the running sum."""

    limit: float | None = None
    value: float = 0.0

    def step(self, increment: float) -> float:
        value = self.value + increment
        if self.limit is not None:
            value = min(max(value, -self.limit), self.limit)
        self.value = value
        return value


@dataclass
class DiscreteController:
    """One cascaded realization: prefilter (optional), section, accumulator."""

    section: Df2tFilter
    integrator: Accumulator = field(default_factory=Accumulator)
    prefilter: Df2tFilter | None = None

    def step(self, error: float, reference: float = 0.0) -> float:
        if self.prefilter is not None:
            error = self.prefilter.step(reference) - error
        return self.integrator.step(self.section.step(error))

    def reset(self) -> None:
        self.section.reset()
        self.integrator.value = 0.0
        if self.prefilter is not None:
            self.prefilter.reset()


def lateral_controller(coeffs: LateralDiscreteCoeffs, thetadot_max: float | None = None) -> DiscreteController:
    """Controller computing ``thetadot = -G_FB_L * e_d``; call ``step(-e_d)``."""
    section = Df2tFilter(coeffs.numerator, coeffs.denominator)
    return DiscreteController(section, Accumulator(thetadot_max))


def longitudinal_controller(coeffs: LongitudinalDiscreteCoeffs, v_max: float | None = None) -> DiscreteController:
    """Controller computing ``v = G_FB_v (G_PF_v e_s_ref - e_s)``; call ``step(e_s, e_s_ref)``."""
    num, den = coeffs.feedback
    pnum, pden = coeffs.prefilter
    return DiscreteController(Df2tFilter(num, den), Accumulator(v_max), Df2tFilter(pnum, pden))


class DiscreteAdrc:
    """Both channels in discrete form, ticked once per sample period."""

    def __init__(
        self,
        lateral: LateralDiscreteCoeffs,
        longitudinal: LongitudinalDiscreteCoeffs,
        thetadot_max: float,
    ):
        self.Ts = lateral.Ts
        self._lat = lateral_controller(lateral, thetadot_max)
        self._lon = longitudinal_controller(longitudinal)
        self.fhat_l = float("nan")
        self.fhat_v = float("nan")

    def update(self, e_d: float, e_s: float, e_s_ref: float, dt: float, e_s_ref_dot: float = 0.0):
        if abs(dt - self.Ts) > 1e-9 * max(1.0, self.Ts):
            raise ValueError(f"discrete controller designed for Ts={self.Ts}, ticked with {dt}")
        w = self._lat.step(-e_d)
        v = self._lon.step(e_s, e_s_ref)
        return v, w


# -- independent re-derivation -------------------------------------------------


def _ackermann_observer(Phi: np.ndarray, Cp: np.ndarray, pole: float) -> np.ndarray:
    n = Phi.shape[0]
    obs = np.vstack([Cp @ np.linalg.matrix_power(Phi, i) for i in range(n)])
    poly = np.poly(np.full(n, pole))
    p_phi = sum(c * np.linalg.matrix_power(Phi, n - i) for i, c in enumerate(poly))
    e_n = np.zeros(n)
    e_n[-1] = 1.0
    return p_phi @ np.linalg.solve(obs, e_n)


def _ackermann_feedback(Phi: np.ndarray, Gam: np.ndarray, pole: float) -> np.ndarray:
    n = Phi.shape[0]
    ctrb = np.column_stack([np.linalg.matrix_power(Phi, i) @ Gam for i in range(n)])
    poly = np.poly(np.full(n, pole))
    p_phi = sum(c * np.linalg.matrix_power(Phi, n - i) for i, c in enumerate(poly))
    e_n = np.zeros(n)
    e_n[-1] = 1.0
    return np.linalg.solve(ctrb.T, e_n) @ p_phi


def _current_observer_adrc(order: int, omega_CL: float, omega_ESO: float, b0: float, Ts: float):
    """State-space of a discrete ADRC: ZOH integrator chain, current observer, state feedback.

    Returns ``(A, B_y, B_r, C, D_y, D_r)`` of the controller with inputs
    ``(y, r)`` and output ``u``.
    """
    n = order + 1
    Phi = np.eye(n)
    for i in range(n):
        for j in range(i + 1, n):
            Phi[i, j] = Ts ** (j - i) / math.factorial(j - i)
    Gam = np.array([b0 * Ts ** (order - i) / math.factorial(order - i) if i < order else 0.0 for i in range(n)])
    C = np.zeros(n)
    C[0] = 1.0
    z_CL, z_ESO = math.exp(-omega_CL * Ts), math.exp(-omega_ESO * Ts)
    L = _ackermann_observer(Phi, (C @ Phi)[None, :], z_ESO)
    K = _ackermann_feedback(Phi[:order, :order], Gam[:order] / b0, z_CL)
    # u = (k1 (r - x1) - k2 x2 - ... - f) / b0
    Kf = np.append(K, 1.0) / b0
    I = np.eye(n)
    M = Phi - np.outer(Gam, Kf)
    Ic = I - np.outer(L, C)
    A = M @ Ic
    Br = Gam * K[0] / b0
    return A, M @ L, Br, -Kf @ Ic, -Kf @ L, K[0] / b0


def _tf(A, B, C, D):
    num, den = signal.ss2tf(A, B[:, None], C[None, :], np.array([[D]]))
    return np.atleast_1d(num[0]), den


def derived_lateral_tf(omega_CL: float, omega_ESO: float, b0: float, Ts: float):
    """``(num, den)`` in powers of ``z^-1`` of the re-derived lateral G_FB, integrator included."""
    A, By, _, C, Dy, _ = _current_observer_adrc(2, omega_CL, omega_ESO, b0, Ts)
    num, den = _tf(A, By, C, Dy)
    return -num, den


def derived_longitudinal_tf(omega_CL: float, omega_ESO: float, b0: float, Ts: float):
    """Re-derived longitudinal ``(G_FB num, den), (r->u num, den)`` in powers of ``z^-1``."""
    A, By, Br, C, Dy, Dr = _current_observer_adrc(1, omega_CL, omega_ESO, b0, Ts)
    fb = _tf(A, By, C, Dy)
    ref = _tf(A, Br, C, Dr)
    return (-fb[0], fb[1]), ref


@dataclass(frozen=True)
class CoefficientCheck:
    name: str
    closed_form: float
    derived: float

    @property
    def abs_diff(self) -> float:
        return abs(self.closed_form - self.derived)


def _strip_integrator(num, den):
    # den = (1 - z^-1) * rest, exact up to round-off
    den = np.asarray(den, float)
    rest, _ = np.polydiv(den, np.array([1.0, -1.0]))
    return np.asarray(num, float) / den[0], rest / rest[0]


def coefficient_report(
    omega_CL_l: float = 1.2,
    omega_ESO_l: float = 10.0,
    b0: float = -2.0,
    omega_CL_v: float = 1.0,
    omega_ESO_v: float = 10.0,
    b0_v: float = -1.0,
    Ts: float = 0.2,
) -> list[CoefficientCheck]:
    """Closed-form coefficients against a numerically re-derived controller.

    The re-derivation builds the current-observer ADRC in state space and
    converts it to transfer functions; it shares no code with the closed forms.
    Both longitudinal ``alpha21`` variants are listed.
    """
    lat = lateral_coeffs(omega_CL_l, omega_ESO_l, b0, Ts)
    num, den = derived_lateral_tf(omega_CL_l, omega_ESO_l, b0, Ts)
    num, rest = _strip_integrator(num, den)
    checks = [
        CoefficientCheck("alpha11", lat.alpha11, rest[1]),
        CoefficientCheck("alpha12", lat.alpha12, rest[2]),
        CoefficientCheck("beta10", lat.beta10, num[0]),
        CoefficientCheck("beta11", lat.beta11, num[1]),
        CoefficientCheck("beta12", lat.beta12, num[2]),
    ]
    lon = longitudinal_coeffs(omega_CL_v, omega_ESO_v, b0_v, Ts)
    printed = longitudinal_coeffs(omega_CL_v, omega_ESO_v, b0_v, Ts, alpha21=ALPHA21_PRINTED)
    (fnum, fden), (rnum, rden) = derived_longitudinal_tf(omega_CL_v, omega_ESO_v, b0_v, Ts)
    fnum, frest = _strip_integrator(fnum, fden)
    rnum = np.asarray(rnum, float) / rden[0]
    checks += [
        CoefficientCheck("alpha21 (printed)", printed.alpha21, frest[1]),
        CoefficientCheck("alpha21 (derived)", lon.alpha21, frest[1]),
        CoefficientCheck("beta20", lon.beta20, fnum[0]),
        CoefficientCheck("beta21", lon.beta21, fnum[1]),
        CoefficientCheck("gamma20", lon.gamma20, rnum[0]),
        CoefficientCheck("gamma21", lon.gamma21, rnum[1]),
        CoefficientCheck("gamma22", lon.gamma22, rnum[2]),
    ]
    return checks
