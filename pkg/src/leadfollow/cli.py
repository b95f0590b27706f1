"""Command-line entry point.

Subcommands::

    simulate     run one closed-loop scenario, print the IAE table, optionally write the CSV log
    compare      run two configurations on the same scenario and print a joint table
    replay-pose  drive the pose-gated command logic from a landmark replay file
    tune-report  print observer/controller gains and discrete coefficients

Exit codes: 0 success, 1 configuration or I/O error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys

from .adrc_continuous import tune_lateral, tune_longitudinal
from .adrc_discrete import ALPHA21_DERIVED, ALPHA21_PRINTED, coefficient_report, lateral_coeffs, longitudinal_coeffs
from .config import CONTROLLERS, ConfigError, RunConfig, load_config, parse_config_text
from .errors import CameraParams
from .metrics import table_report
from .plant import VehicleParams
from .pose_command import CommandSelector, classify_pose, load_landmarks, replay_errors
from .scenarios import EQ23_CONSTANT, EQ23_LITERAL
from .simulation import NumericalDivergence, make_controller, simulate

log = logging.getLogger("leadfollow")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2


def _add_run_options(p: argparse.ArgumentParser, suffix: str = "") -> None:
    p.add_argument("--config", help="key = value config file")
    p.add_argument("--scenario", help="scenario id (1 or 2)")
    p.add_argument("--ts", type=float, help="controller sample period [s]")
    p.add_argument("--seed", type=int, help="noise seed")
    p.add_argument("--eq23", choices=(EQ23_LITERAL, EQ23_CONSTANT), help="Scenario 1 course interpretation")
    p.add_argument("--duration", type=float, help="stop early [s]")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="override any config key")


def _config_from(args, config_path=None, controller=None, extra_sets=()) -> RunConfig:
    cfg = load_config(config_path) if config_path else RunConfig()
    lines = [f"{k} = {v}" for k, v in (
        ("scenario", args.scenario), ("ts", args.ts), ("seed", args.seed),
        ("eq23", args.eq23), ("duration", args.duration), ("controller", controller),
        ("out", getattr(args, "out", None)),
    ) if v is not None]  # fmt: skip
    for item in [*args.set, *extra_sets]:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        lines.append(item)
    return parse_config_text("\n".join(lines), cfg)


def _emit(text: str, path) -> None:
    if path is None:
        sys.stdout.write(text)
        return
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text)
    log.info("wrote %s", path)


def cmd_simulate(args) -> int:
    cfg = _config_from(args, args.config, args.controller)
    result = simulate(cfg)
    report = table_report({cfg.controller: result.metrics()})
    print(f"scenario {cfg.scenario}, controller {cfg.controller}, Ts={cfg.ts:g} s, seed {cfg.seed}")
    print(report.to_csv() if args.format == "csv" else report.to_text())
    path = cfg.output_path()
    if path is not None:
        _emit(result.to_csv(), path)
    return EXIT_OK


def cmd_compare(args) -> int:
    a = _config_from(args, args.config_a or args.config, args.controller_a, args.set_a)
    b = _config_from(args, args.config_b or args.config, args.controller_b, args.set_b)
    if str(a.scenario).strip() != str(b.scenario).strip():
        raise ConfigError(f"cannot compare scenario {a.scenario!r} with scenario {b.scenario!r}")
    if a.seed != b.seed:
        raise ConfigError("compared runs must share the noise seed")
    name_a, name_b = a.controller, b.controller
    if name_a == name_b:
        name_a, name_b = f"a:{name_a}", f"b:{name_b}"
    ra, rb = simulate(a), simulate(b)
    try:
        report = table_report({name_a: ra.metrics(), name_b: rb.metrics()})
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    print(f"scenario {a.scenario}, seed {a.seed}")
    print(report.to_csv() if args.format == "csv" else report.to_text())
    return EXIT_OK


REPLAY_COLUMNS = ("t", "pose", "active_pose", "e_d", "e_s", "v_cmd", "thetadot_cmd", "omega_R", "omega_L")


def cmd_replay_pose(args) -> int:
    cfg = _config_from(args, args.config, args.controller)
    try:
        frames = load_landmarks(args.landmarks)
    except (OSError, ValueError) as exc:
        raise ConfigError(str(exc)) from exc
    params = VehicleParams(cfg.r, cfg.B, cfg.thetadot_max)
    controller = make_controller(cfg, params)
    selector = CommandSelector(params=params, v_fix=cfg.v_fix)
    cam = CameraParams()
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(REPLAY_COLUMNS)
    for rf in frames:
        pose = classify_pose(rf.frame)
        e_d, e_s = replay_errors(rf.frame, args.e_s_ref, cam) if pose.value != "Unknown" else (0.0, args.e_s_ref)
        v, thetadot = controller.update(e_d, e_s, args.e_s_ref, cfg.ts)
        cmd = selector.step(pose, thetadot, v)
        active = selector.active.value if selector.active else ""
        w.writerow([repr(rf.t), pose.value, active, repr(e_d), repr(e_s), repr(v), repr(thetadot),
                    repr(cmd.omega_R), repr(cmd.omega_L)])  # fmt: skip
    _emit(buf.getvalue(), cfg.output_path())
    return EXIT_OK


def cmd_tune_report(args) -> int:
    lat = tune_lateral(args.omega_cl_lat, args.omega_eso_lat, args.b0_lat)
    lon = tune_longitudinal(args.omega_cl_lon, args.omega_eso_lon)
    print("lateral:      k1=%.12g k2=%.12g l=(%.12g, %.12g, %.12g) b0=%g" % (lat.k1l, lat.k2l, lat.l1l, lat.l2l, lat.l3l, lat.b0))
    print("longitudinal: k1=%.12g l=(%.12g, %.12g)" % (lon.k1v, lon.l1v, lon.l2v))
    dl = lateral_coeffs(args.omega_cl_lat, args.omega_eso_lat, args.b0_lat, args.ts)
    print(f"\ndiscrete, Ts={args.ts:g} s: z_CL={dl.z_CL:.9g} z_ESO={dl.z_ESO:.9g}")
    for variant in (ALPHA21_DERIVED, ALPHA21_PRINTED):
        dv = longitudinal_coeffs(args.omega_cl_lon, args.omega_eso_lon, args.b0_lon, args.ts, alpha21=variant)
        print(f"  longitudinal alpha21 ({variant}) = {dv.alpha21:.9g}")
    print("\n%-20s %16s %16s %10s" % ("coefficient", "closed form", "re-derived", "|diff|"))
    for c in coefficient_report(args.omega_cl_lat, args.omega_eso_lat, args.b0_lat,
                                args.omega_cl_lon, args.omega_eso_lon, args.b0_lon, args.ts):  # fmt: skip
        print("%-20s %16.9g %16.9g %10.2e" % (c.name, c.closed_form, c.derived, c.abs_diff))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="leadfollow", description="ADRC leader-follower tracked vehicle simulator")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="run one scenario")
    _add_run_options(p)
    p.add_argument("--controller", choices=CONTROLLERS)
    p.add_argument("--out", help="CSV log path (relative paths honour $LEADFOLLOW_OUTPUT_DIR)")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("compare", help="two controllers side by side")
    _add_run_options(p)
    p.add_argument("--controller-a", choices=CONTROLLERS, default="adrc-discrete")
    p.add_argument("--controller-b", choices=CONTROLLERS, default="pid")
    p.add_argument("--config-a")
    p.add_argument("--config-b")
    p.add_argument("--set-a", action="append", default=[], metavar="KEY=VALUE")
    p.add_argument("--set-b", action="append", default=[], metavar="KEY=VALUE")
    p.add_argument("--format", choices=("text", "csv"), default="text")
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("replay-pose", help="pose-gated commands from a landmark file")
    _add_run_options(p)
    p.add_argument("--landmarks", required=True)
    p.add_argument("--controller", choices=CONTROLLERS, default="adrc-discrete")
    p.add_argument("--e-s-ref", type=float, default=2.0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_replay_pose)

    p = sub.add_parser("tune-report", help="gains and discrete coefficients")
    p.add_argument("--omega-cl-lat", type=float, default=1.2)
    p.add_argument("--omega-eso-lat", type=float, default=10.0)
    p.add_argument("--b0-lat", type=float, default=-2.0)
    p.add_argument("--omega-cl-lon", type=float, default=1.0)
    p.add_argument("--omega-eso-lon", type=float, default=10.0)
    p.add_argument("--b0-lon", type=float, default=-1.0)
    p.add_argument("--ts", type=float, default=0.2)
    p.set_defaults(func=cmd_tune_report)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except NumericalDivergence as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ValueError as exc:
        # invalid parameter values rejected by the model constructors
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
