"""Command-line experiment runner.

Subcommands::

    tuavsim simulate <config.toml> --out results.csv   # one scenario, one row
    tuavsim sweep <config.toml> --out sweep.csv        # full campaign
    tuavsim optimize <config.toml>                     # print best placement
    tuavsim gen-buildings <config.toml> --out field.csv

Global flags ``--seed``, ``--samples``, ``--workers`` override the config;
``--workers`` never changes results, only wall-clock time.
"""

from __future__ import annotations

import argparse
import sys

import numpy as np

from . import config as cfgmod
from .campaigns import (
    _TAG_BUILDINGS,
    campaign_metadata,
    run_accessibility_campaign,
    run_distance_campaign,
    simulate_single,
    write_rows_csv,
)
from .config import ACCESSIBILITY_SWEEP, DISTANCE_SWEEP, ConfigError, load_config
from .deployment import dump_buildings_csv, generate_buildings
from .geometry import Point3
from .placement import optimize_tuav
from .version import __version__


def _common_flags(parser: argparse.ArgumentParser, needs_out: bool) -> None:
    parser.add_argument("config", help="path to a TOML config file")
    parser.add_argument("--seed", type=int, default=None, help="override the config seed")
    parser.add_argument(
        "--samples", type=int, default=None, help="override samples_final (reported points)"
    )
    parser.add_argument("--workers", type=int, default=None, help="worker processes")
    parser.add_argument("--format", choices=["csv"], default="csv", help="output format")
    if needs_out:
        parser.add_argument("--out", required=True, help="output file path")
    else:
        parser.add_argument("--out", default=None, help="optional output file path")


def _overrides(args: argparse.Namespace) -> dict:
    out = {}
    if args.seed is not None:
        out["seed"] = args.seed
    if args.samples is not None:
        out["samples_final"] = args.samples
    if args.workers is not None:
        out["workers"] = args.workers
    return out


def _cmd_simulate(args: argparse.Namespace) -> int:
    cfg = load_config(args.config, _overrides(args))
    rows = simulate_single(cfg)
    write_rows_csv(args.out, rows, campaign_metadata(cfg, "simulate"))
    return 0


def _cmd_sweep(args: argparse.Namespace) -> int:
    cfg = load_config(args.config, _overrides(args))
    if cfg.campaign == DISTANCE_SWEEP:
        rows = run_distance_campaign(cfg)
    elif cfg.campaign == ACCESSIBILITY_SWEEP:
        rows = run_accessibility_campaign(cfg)
    else:  # pragma: no cover - rejected earlier by config validation
        raise ConfigError(f"unknown campaign {cfg.campaign!r}")
    write_rows_csv(args.out, rows, campaign_metadata(cfg, "sweep"))
    return 0


def _cmd_optimize(args: argparse.Namespace) -> int:
    cfg = load_config(args.config, _overrides(args))
    anchor = Point3(cfg.mbs_distance_m, 0.0, cfg.mbs_height_m + cfg.gs_mast_m)
    region = cfgmod.hovering_region(cfg, anchor)
    scenario = _tethered_scenario(cfg, region)
    result = optimize_tuav(
        scenario,
        region,
        cfg.samples_per_eval,
        grid=cfgmod.grid_shape(cfg),
        master_seed=cfg.seed,
        refine_evals=cfg.refine_evals,
        workers=cfg.workers,
    )
    text = (
        f"position_m = ({result.position.x!r}, {result.position.y!r}, {result.position.z!r})\n"
        f"objective = {result.objective!r}\n"
        f"evaluations = {result.evaluations}\n"
    )
    if args.out:
        with open(args.out, "w") as f:
            f.write(text)
    sys.stdout.write(text)
    return 0


def _tethered_scenario(cfg, region):
    from .deployment import Scenario, TetheredMode

    return Scenario(
        cluster=cfgmod.cluster(cfg),
        mbs_position=cfgmod.mbs_position(cfg),
        uav_mode=TetheredMode(region),
        channel=cfgmod.channel_params(cfg),
    )


def _cmd_gen_buildings(args: argparse.Namespace) -> int:
    cfg = load_config(args.config, _overrides(args))
    rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, _TAG_BUILDINGS, 0]))
    field = generate_buildings(
        cfgmod.window(cfg),
        cfg.building_density_per_km2,
        cfg.building_height_scale_m,
        cfg.accessibility,
        rng,
        (cfg.building_height_min_m, cfg.building_height_max_m),
    )
    dump_buildings_csv(field, args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tuavsim",
        description="Coverage trade-off simulator for tethered vs. untethered aerial base stations",
    )
    parser.add_argument("--version", action="version", version=f"tuavsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("simulate", help="single scenario, one result row")
    _common_flags(p, needs_out=True)
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("sweep", help="run the configured campaign")
    _common_flags(p, needs_out=True)
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("optimize", help="print the best tethered placement")
    _common_flags(p, needs_out=False)
    p.set_defaults(func=_cmd_optimize)

    p = sub.add_parser("gen-buildings", help="dump one building-field realization as CSV")
    _common_flags(p, needs_out=True)
    p.set_defaults(func=_cmd_gen_buildings)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 2
    except Exception as e:  # runtime failures: diagnostic, nonzero exit
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
