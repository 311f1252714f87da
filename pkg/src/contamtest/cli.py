"""Command-line runner for scenario files.

Subcommands expose the pipeline stage by stage: `run` executes everything
and writes curves plus a summary, `nustar` reports only the mixture
proportions, `region` prints the feasible polygon, and `curve` writes the
risk curves without the summary.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import ContamTestError
from .mixprop import nu_star
from .models import ContaminationParams, contaminate
from .scenario import (
    curves_csv,
    emit_curves,
    load_scenario,
    prepare_scenario,
    render_report,
    run_scenario,
)


def _add_scenario_arg(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--scenario", required=True, help="path to a scenario JSON file")


def cmd_run(args) -> int:
    config = load_scenario(args.scenario)
    run = run_scenario(config, grid_points=args.grid_points)
    print(render_report(run))
    if args.out:
        csv_path, json_path = emit_curves(run, args.out)
        print(f"wrote {csv_path} and {json_path}")
    return 0


def cmd_nustar(args) -> int:
    config = load_scenario(args.scenario)
    if config.mode == "simulation":
        pair = contaminate(config.model0, config.model1, ContaminationParams(*config.pi_true))
        p0t, p1t = pair.p0_tilde, pair.p1_tilde
        print(f"nu_pure_01 = {nu_star(pair.p0, pair.p1).value:.4f}")
        print(f"nu_pure_10 = {nu_star(pair.p1, pair.p0).value:.4f}")
    else:
        p0t, p1t = config.observed
    print(f"nu_tilde_01 = {nu_star(p0t, p1t).value:.4f}")
    print(f"nu_tilde_10 = {nu_star(p1t, p0t).value:.4f}")
    return 0


def cmd_region(args) -> int:
    config = load_scenario(args.scenario)
    prepared = prepare_scenario(config)
    vertices = prepared.region.vertices
    print(f"{len(vertices)} vertices "
          f"({sum(1 for v in vertices if v.candidate)} candidates)")
    for v in vertices:
        mark = "candidate" if v.candidate else "filtered "
        print(f"  ({v.point[0]:.4f}, {v.point[1]:.4f})  {mark}  active={list(v.active_set)}")
    return 0


def cmd_curve(args) -> int:
    config = load_scenario(args.scenario)
    run = run_scenario(config, grid_points=args.grid_points)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    csv_path = out / "curves.csv"
    csv_path.write_text(curves_csv(run.result))
    print(f"wrote {csv_path}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="contamtest",
        description="Minimax-robust likelihood-ratio testing under label-noise contamination",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="full pipeline: proportions, region, minimax search")
    _add_scenario_arg(p_run)
    p_run.add_argument("--out", help="directory for curves.csv and summary.json")
    p_run.add_argument("--grid-points", type=int, default=None, help="override the threshold grid size")
    p_run.set_defaults(func=cmd_run)

    p_nu = sub.add_parser("nustar", help="mixture proportions only")
    _add_scenario_arg(p_nu)
    p_nu.set_defaults(func=cmd_nustar)

    p_region = sub.add_parser("region", help="feasible polygon vertices and candidate flags")
    _add_scenario_arg(p_region)
    p_region.set_defaults(func=cmd_region)

    p_curve = sub.add_parser("curve", help="risk curves only")
    _add_scenario_arg(p_curve)
    p_curve.add_argument("--out", required=True, help="directory for curves.csv")
    p_curve.add_argument("--grid-points", type=int, default=None)
    p_curve.set_defaults(func=cmd_curve)

    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ContamTestError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
