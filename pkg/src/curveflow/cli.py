"""Command-line surface.

Subcommands:

    simulate         run the regularised flow from a config file, write
                     the diagnostics CSV and an optional final checkpoint
    check-identities run the full identity battery on one target
    grad-check       finite-difference validation of the energy gradients
    sweep-epsilon    run the same data at several regularisation strengths

Exit codes: 0 success, 2 configuration error, 3 numerical abort
(NaN / constraint drift / time-cut), 4 verification failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import RunConfig, parse_config
from .checkpoint import write_checkpoint
from .curves import GridSpec
from .errors import ConfigError, CurveFlowError, NumericalAbortError
from .flows import FlowParams, HamiltonianParams
from .identities import (
    check_Ai_symmetry,
    check_curvature_properties,
    check_parallel_curvature,
    check_resolution_identities,
    check_surface_reduction,
)
from .initial_data import random_smooth_curve, random_tangent_field
from .integrators import IntegratorConfig, epsilon_sweep, gradient_check, integrate
from .targets import TargetManifold

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_VERIFICATION = 4


def parse_target(spec: str) -> TargetManifold:
    """Parse CLI target names: sphere2, cp<n>, gr<n>-<k>."""
    spec = spec.strip().lower()
    if spec == "sphere2":
        return TargetManifold.sphere2()
    if spec.startswith("cp"):
        return TargetManifold.complex_projective(int(spec[2:]))
    if spec.startswith("gr"):
        n_str, _, k_str = spec[2:].partition("-")
        return TargetManifold.grassmannian(int(n_str), int(k_str))
    raise ConfigError(f"unknown target {spec!r} (expected sphere2, cp<n> or gr<n>-<k>)")


def _load_config(args: argparse.Namespace) -> RunConfig:
    if not args.config:
        raise ConfigError("a --config file is required")
    overrides = {}
    for item in args.set or []:
        key, sep, value = item.partition("=")
        if not sep:
            raise ConfigError(f"override {item!r} is not of the form section.key=value")
        overrides[key.strip()] = value.strip()
    if getattr(args, "seed", None) is not None:
        overrides["flow.seed"] = str(args.seed)
    return parse_config(args.config, overrides)


def _cmd_simulate(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    curve0 = cfg.initial_curve()
    result = integrate(curve0, cfg.params, cfg.integrator)
    csv_path = args.csv or cfg.csv_path
    if csv_path:
        Path(csv_path).write_text(result.csv_text())
    else:
        sys.stdout.write(result.csv_text())
    checkpoint_path = args.checkpoint or cfg.checkpoint_path
    if checkpoint_path:
        write_checkpoint(checkpoint_path, result.final_curve)
    final = result.records[-1]
    print(
        f"completed {len(result.records)} records up to t={final.t:g}; "
        f"N_{cfg.integrator.k_diag}={final.n_k:.6g}, drift={final.drift:.3e}",
        file=sys.stderr,
    )
    return EXIT_OK


def _cmd_check_identities(args: argparse.Namespace) -> int:
    target = parse_target(args.target)
    grid = GridSpec(args.points)
    reports = [check_curvature_properties(target, trials=args.trials, seed=args.seed)]
    curve = random_smooth_curve(target, grid, seed=args.seed)
    fields = tuple(random_tangent_field(curve, seed=args.seed + i) for i in range(3))
    reports.append(check_parallel_curvature(curve, fields))
    reports.append(check_Ai_symmetry(curve, trials=args.trials, seed=args.seed))
    reports.append(check_resolution_identities(curve, trials=args.trials, seed=args.seed))
    if target.tangent_dim == 2:
        params = FlowParams(a=1.0, b=2.0, c=-1.0, lam=0.5)
        reports.append(check_surface_reduction(curve, params, target.curvature_scale))
    for report in reports:
        print(report.to_table())
        print()
    if args.records:
        lines = [report.to_json_lines() for report in reports]
        Path(args.records).write_text("\n".join(lines) + "\n")
    if all(r.passed for r in reports):
        print("identity suite: PASS")
        return EXIT_OK
    print("identity suite: FAIL", file=sys.stderr)
    return EXIT_VERIFICATION


def _cmd_grad_check(args: argparse.Namespace) -> int:
    target = parse_target(args.target)
    grid = GridSpec(args.points)
    curve = random_smooth_curve(target, grid, seed=args.seed)
    report = gradient_check(
        curve,
        HamiltonianParams(1.0, 1.0, 1.0),
        steps=[float(s) for s in args.steps.split(",")],
        seed=args.seed,
    )
    print(report.to_table())
    finest = min(e.step for e in report.entries)
    ok = all(e.max_rel_error <= args.tolerance for e in report.entries if e.step == finest)
    ok = ok and all(abs(order - 2.0) <= 0.2 for order in report.orders.values())
    if ok:
        print("gradient check: PASS")
        return EXIT_OK
    print("gradient check: FAIL", file=sys.stderr)
    return EXIT_VERIFICATION


def _cmd_sweep_epsilon(args: argparse.Namespace) -> int:
    cfg = _load_config(args)
    epsilons = [float(e) for e in args.epsilons.split(",")]
    report = epsilon_sweep(cfg.initial_curve(), cfg.params, epsilons, cfg.integrator)
    print(report.to_table())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="curveflow",
        description="Fourth-order dispersive curve flows on Kahler symmetric targets",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="integrate the regularised flow")
    sim.add_argument("--config", required=True)
    sim.add_argument("--seed", type=int, default=None, help="override the initial-data seed")
    sim.add_argument("--set", action="append", metavar="SECTION.KEY=VALUE")
    sim.add_argument("--csv", default=None, help="diagnostics CSV path (overrides config)")
    sim.add_argument("--checkpoint", default=None, help="final-state checkpoint path")
    sim.set_defaults(func=_cmd_simulate)

    chk = sub.add_parser("check-identities", help="run the curvature-identity battery")
    chk.add_argument("--target", default="sphere2")
    chk.add_argument("--trials", type=int, default=100)
    chk.add_argument("--seed", type=int, default=0)
    chk.add_argument("--points", type=int, default=128)
    chk.add_argument("--records", default=None, help="write key-value records (JSON lines)")
    chk.set_defaults(func=_cmd_check_identities)

    grd = sub.add_parser("grad-check", help="finite-difference gradient validation")
    grd.add_argument("--target", default="sphere2")
    grd.add_argument("--seed", type=int, default=0)
    grd.add_argument("--points", type=int, default=64)
    grd.add_argument("--steps", default="1e-3,1e-4")
    grd.add_argument("--tolerance", type=float, default=1e-5)
    grd.set_defaults(func=_cmd_grad_check)

    swp = sub.add_parser("sweep-epsilon", help="compare runs at decreasing epsilon")
    swp.add_argument("--config", required=True)
    swp.add_argument("--seed", type=int, default=None)
    swp.add_argument("--set", action="append", metavar="SECTION.KEY=VALUE")
    swp.add_argument("--epsilons", default="0.4,0.2,0.1")
    swp.set_defaults(func=_cmd_sweep_epsilon)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalAbortError as exc:
        print(f"numerical abort: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except CurveFlowError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
