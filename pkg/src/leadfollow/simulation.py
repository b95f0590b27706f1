"""Closed-loop leader-follower simulation.

One run: scenario -> true errors -> measurement noise -> controller ->
turn-rate saturation -> inverse kinematics -> slip-perturbed plant.  The
controller ticks every ``ts``; the vehicle, the leader and any continuous
observer are integrated with RK4 on ``dt_plant`` substeps in between.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .adrc_continuous import ContinuousAdrc, tune_lateral, tune_longitudinal
from .adrc_discrete import DiscreteAdrc, lateral_coeffs, longitudinal_coeffs
from .config import ConfigError, RunConfig
from .errors import LeaderState, NoiseModel, NoiseStream, true_errors
from .metrics import interval_metrics
from .pid_baseline import PidGains, PidPair
from .plant import VehicleParams, VehicleState, inverse_kinematics, saturate
from .scenarios import Scenario, build_scenario

CSV_COLUMNS = (
    "t", "x_L", "y_L", "theta_L", "x_V", "y_V", "theta_V",
    "e_d_true", "e_s_true", "e_d_meas", "e_s_meas",
    "v_cmd", "thetadot_cmd", "omega_R", "omega_L",
    "fhat_l", "fhat_v", "a_R", "a_L",
)  # fmt: skip


class NumericalDivergence(RuntimeError):
    pass


@dataclass
class SimulationResult:
    config: RunConfig
    scenario: Scenario
    log: dict[str, np.ndarray]

    @property
    def intervals(self):
        end = self.log["t"][-1]
        return [(a, min(b, end)) for a, b in self.scenario.intervals if a < end - 1e-12]

    def metrics(self):
        """Interval IAE from the noise-free errors."""
        lg = self.log
        return interval_metrics(lg["t"], lg["e_d_true"], lg["e_s_true"], lg["e_s_ref"], self.intervals)

    def to_csv(self) -> str:
        cols = [self.log[c] for c in CSV_COLUMNS]
        lines = [",".join(CSV_COLUMNS)]
        for row in zip(*cols):
            lines.append(",".join(repr(float(x)) for x in row))
        return "\n".join(lines) + "\n"

    def write_csv(self, path: str | Path) -> None:
        Path(path).write_text(self.to_csv())


def make_scenario(config: RunConfig) -> Scenario:
    overrides = dict(config.scenario_overrides)
    if str(config.scenario).strip() in ("1", "scenario1"):
        overrides.setdefault("course", config.eq23)
        if config.sigma_d is not None:
            overrides["sigma_d"] = config.sigma_d
        if config.sigma_s is not None:
            overrides["sigma_s"] = config.sigma_s
    try:
        return build_scenario(config.scenario, **overrides)
    except TypeError as exc:
        raise ConfigError(f"bad scenario override: {exc}") from exc


def make_controller(config: RunConfig, params: VehicleParams):
    if config.controller == "adrc-continuous":
        return ContinuousAdrc(
            tune_lateral(config.omega_cl_lat, config.omega_eso_lat, config.b0_lat),
            tune_longitudinal(config.omega_cl_lon, config.omega_eso_lon),
            params.thetadot_max,
        )
    if config.controller == "adrc-discrete":
        return DiscreteAdrc(
            lateral_coeffs(config.omega_cl_lat, config.omega_eso_lat, config.b0_lat, config.ts),
            longitudinal_coeffs(config.omega_cl_lon, config.omega_eso_lon, config.b0_lon, config.ts, config.alpha21),
            params.thetadot_max,
        )
    return PidPair(
        PidGains(config.kp_lat, config.ki_lat, config.kd_lat, config.n_lat),
        PidGains(config.kp_lon, config.ki_lon, is_pi=True),
        params.thetadot_max,
    )


def _plan(config: RunConfig, duration: float) -> tuple[int, int, float]:
    """Number of ticks, substeps per tick and the substep length."""
    ticks = round(duration / config.ts)
    if not math.isclose(ticks * config.ts, duration, rel_tol=0, abs_tol=1e-9):
        raise ConfigError(f"duration {duration} is not a multiple of ts={config.ts}")
    n_sub = max(1, math.ceil(config.ts / config.dt_plant - 1e-9))
    return ticks, n_sub, config.ts / n_sub


def simulate(config: RunConfig, scenario: Scenario | None = None, controller=None) -> SimulationResult:
    """Run one closed-loop simulation and return the per-tick log."""
    params = VehicleParams(config.r, config.B, config.thetadot_max)
    scenario = scenario if scenario is not None else make_scenario(config)
    controller = controller if controller is not None else make_controller(config, params)
    duration = scenario.duration if config.duration is None else min(config.duration, scenario.duration)
    ticks, n_sub, h = _plan(config, duration)
    noise = NoiseStream(NoiseModel(scenario.sigma_d, scenario.sigma_s, config.seed))

    x0, y0, th0 = scenario.initial
    xv, yv, thv = x0, y0, th0
    xl, yl = x0, y0
    k_v, k_w = 0.5 * params.r, params.r / params.B
    lim = params.thetadot_max
    leader_inputs, slip = scenario.leader_inputs, scenario.slip
    # stage times at the end of a substep are nudged left so that piecewise
    # inputs use the piece the substep started in
    end_eps = 1e-9 * h

    log = {c: np.empty(ticks + 1) for c in CSV_COLUMNS}
    log["e_s_ref"] = np.empty(ticks + 1)
    for k in range(ticks + 1):
        t = k * config.ts
        if k == ticks:
            t = duration
        sample = scenario(t)
        vehicle = VehicleState(xv, yv, thv)
        truth = true_errors(vehicle, LeaderState(xl, yl, sample.theta_L, max(sample.v_L, 0.0)))
        meas = noise.apply(truth, sample.noise_on)
        v_cmd, w_cmd = controller.update(meas.e_d, meas.e_s, sample.e_s_ref, config.ts)
        w_cmd = saturate(w_cmd, lim)
        om_R, om_L = inverse_kinematics(v_cmd, w_cmd, params)

        row = (
            t, xl, yl, sample.theta_L, xv, yv, thv,
            truth.e_d, truth.e_s, meas.e_d, meas.e_s,
            v_cmd, w_cmd, om_R, om_L,
            controller.fhat_l, controller.fhat_v, sample.a_R, sample.a_L,
        )  # fmt: skip
        for c, value in zip(CSV_COLUMNS, row):
            log[c][k] = value
        log["e_s_ref"][k] = sample.e_s_ref
        if k == ticks:
            break

        for i in range(n_sub):
            t0 = t + i * h
            tm, te = t0 + 0.5 * h, t0 + h - end_eps
            # vehicle
            rates = []
            for tau in (t0, tm, te):
                a_R, a_L = slip(tau)
                right, left = a_R * om_R, a_L * om_L
                rates.append((k_v * (right + left), k_w * (right - left)))
            (v1, w1), (v2, w2), (v3, w3) = rates
            th2 = thv + 0.5 * h * w2
            th4 = thv + h * w2
            c1, s1 = math.cos(thv), math.sin(thv)
            c2, s2 = math.cos(thv + 0.5 * h * w1), math.sin(thv + 0.5 * h * w1)
            c3, s3 = math.cos(th2), math.sin(th2)
            c4, s4 = math.cos(th4), math.sin(th4)
            xv += h / 6.0 * (v1 * c1 + 2.0 * v2 * (c2 + c3) + v3 * c4)
            yv += h / 6.0 * (v1 * s1 + 2.0 * v2 * (s2 + s3) + v3 * s4)
            thv += h / 6.0 * (w1 + 4.0 * w2 + w3)
            # leader: pure kinematics along its course
            (q1, u1), (q2, u2), (q4, u4) = leader_inputs(t0), leader_inputs(tm), leader_inputs(te)
            xl += h / 6.0 * (u1 * math.cos(q1) + 4.0 * u2 * math.cos(q2) + u4 * math.cos(q4))
            yl += h / 6.0 * (u1 * math.sin(q1) + 4.0 * u2 * math.sin(q2) + u4 * math.sin(q4))

        if not all(map(math.isfinite, (xv, yv, thv, xl, yl, v_cmd, w_cmd))):
            raise NumericalDivergence(f"non-finite state at t={t:.3f} s")

    return SimulationResult(config, scenario, log)
