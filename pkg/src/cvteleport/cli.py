"""Command-line front door.

    cvteleport point    --config cfg.json
    cvteleport sweep    --config cfg.json --out sweep.csv [--json out.json]
                        [--plot sweep.png] [--assert-shapes]
    cvteleport graphene --config cfg.json
    cvteleport validate [--seed N] [--fast]

Exit codes: 0 success, 2 config error, 3 numerical failure,
4 every sweep point unstable.
"""

from __future__ import annotations

import argparse
import sys

from .errors import CVTeleportError, ParseError, ValidationError
from .sweep import (
    SweepConfig,
    check_sweep_shapes,
    emit_csv,
    graphene_dynamics,
    parse_config,
    rows_to_json,
    run_point,
    run_sweep,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_ALL_UNSTABLE = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="cvteleport",
        description="Entanglement and teleportation-fidelity sweeps for the "
                    "microwave-driven graphene-waveguide entangler.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_point = sub.add_parser("point", help="evaluate the base parameter point")
    p_point.add_argument("--config", required=True)

    p_sweep = sub.add_parser("sweep", help="run the configured parameter sweep")
    p_sweep.add_argument("--config", required=True)
    p_sweep.add_argument("--out", required=True, help="CSV output path")
    p_sweep.add_argument("--json", help="optional JSON mirror of the CSV")
    p_sweep.add_argument("--plot", help="optional figure path (png/pdf/svg)")
    p_sweep.add_argument("--assert-shapes", action="store_true",
                         help="fail unless the qualitative curve shapes hold")

    p_gr = sub.add_parser("graphene",
                          help="material-to-couplings report from the config")
    p_gr.add_argument("--config", required=True)

    p_val = sub.add_parser("validate", help="run the oracle-equivalence battery")
    p_val.add_argument("--seed", type=int, default=12345)
    p_val.add_argument("--fast", action="store_true",
                       help="smaller draw counts, skip the Monte-Carlo check")
    return parser


def _cmd_point(cfg: SweepConfig) -> int:
    row = run_point(cfg.base, cfg.filters, cfg.sweep_param,
                    quad_tol=cfg.quad_tol)
    print(f"stable: {row.stable}  margin: {row.margin:+.6e}")
    if row.stable:
        for name in ("E_N", "eta_minus", "F", "F_opt"):
            print(f"{name}: {getattr(row, name):.12g}")
    else:
        print("metrics: not computed (unstable point)", file=sys.stderr)
    return EXIT_OK


def _cmd_sweep(cfg: SweepConfig, args: argparse.Namespace) -> int:
    rows = run_sweep(cfg)
    for row in rows:
        if row.error:
            print(f"point {row.value:.6g}: {row.error}", file=sys.stderr)
    emit_csv(rows, args.out)
    if args.json:
        with open(args.json, "w", encoding="utf-8") as fh:
            fh.write(rows_to_json(rows))
    if args.plot:
        from .plotting import render_sweep_figure
        render_sweep_figure(rows, args.plot)
    n_stable = sum(r.stable for r in rows)
    print(f"{len(rows)} points ({n_stable} stable) -> {args.out}")
    if n_stable == 0:
        print("every sweep point is unstable", file=sys.stderr)
        return EXIT_ALL_UNSTABLE
    if args.assert_shapes:
        problems = check_sweep_shapes(rows)
        for msg in problems:
            print(f"shape check failed: {msg}", file=sys.stderr)
        if problems:
            return EXIT_NUMERICAL
    return EXIT_OK


def _cmd_graphene(cfg_path: str) -> int:
    import json

    from .graphene import chemical_potential

    with open(cfg_path, "r", encoding="utf-8") as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ParseError(f"{cfg_path}: line {exc.lineno} column {exc.colno}: "
                             f"{exc.msg}") from exc
    section = raw.get("graphene") if isinstance(raw, dict) else None
    if section is None:
        raise ValidationError("config has no 'graphene' section")
    params, report = graphene_dynamics(section)
    mu_p, mu_pp = chemical_potential(report["config"])
    print(f"chemical potential mu' = {mu_p:.6e} J, mu'' = {mu_pp:.6e} J/V")
    for label, w, prof, pert in zip(("pump", "upper", "lower"), report["omegas"],
                                    report["profiles"], report["perturbed"]):
        print(f"{label}: f = {w / 6.283185307179586:.6e} Hz")
        print(f"  zeta'  = {pert.zeta_p:.6e} S")
        print(f"  zeta'' = {pert.zeta_pp:.6e} S/V")
        print(f"  beta   = {prof.beta:.6e} 1/m")
        print(f"  alpha  = {prof.alpha:.6e} 1/m")
    for j in (2, 3):
        eps_p, eps_pp = report["eps"][j]
        print(f"mode {j}: eps' = {eps_p:.6e}, eps'' = {eps_pp:.6e} 1/V")
    print(f"g2 = {report['g2']:.6e} rad/s  |g2| = {abs(report['g2']):.6e}")
    print(f"g3 = {report['g3']:.6e} rad/s  |g3| = {abs(report['g3']):.6e}")
    print(f"G2 = {params.G2:.6e}  G3 = {params.G3:.6e}  (units of omega_m)")
    print(f"n_m = {params.n_m:.6e}")
    return EXIT_OK


def _cmd_validate(seed: int, fast: bool) -> int:
    from .validate import format_validation, run_validation

    results = run_validation(seed=seed, fast=fast)
    print(format_validation(results))
    return EXIT_OK if all(r.passed for r in results) else EXIT_NUMERICAL


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "point":
            return _cmd_point(parse_config(args.config))
        if args.command == "sweep":
            return _cmd_sweep(parse_config(args.config), args)
        if args.command == "graphene":
            return _cmd_graphene(args.config)
        if args.command == "validate":
            return _cmd_validate(args.seed, args.fast)
    except (ParseError, ValidationError, FileNotFoundError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except CVTeleportError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    raise AssertionError("unreachable")


if __name__ == "__main__":
    sys.exit(main())
