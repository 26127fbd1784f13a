"""Command line front end: run the two sweep experiments and write CSVs."""

from __future__ import annotations

import argparse
import sys

from .scenario import ConfigError, load_config, run_scenario


def _add_common(sub):
    sub.add_argument("--config", default=None, help="flat key=value config file")
    sub.add_argument("--set", dest="overrides", action="append", default=[],
                     metavar="KEY=VALUE", help="override one config key (repeatable)")
    sub.add_argument("--out", default="results", help="output directory")
    sub.add_argument("--seeds", type=int, default=None,
                     help="number of seeded runs (overrides 'runs')")
    sub.add_argument("--parallel", type=int, default=1,
                     help="worker processes; output is identical for any value")
    sub.add_argument("--quiet", action="store_true", help="suppress progress output")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="mcsim",
        description="5G multi-connectivity downlink simulator for AR/VR traffic")
    subs = parser.add_subparsers(dest="command", required=True)
    _add_common(subs.add_parser(
        "sweep-distance", help="single UE at fixed distances, all policies"))
    _add_common(subs.add_parser(
        "sweep-capacity", help="growing UE population, all policies"))
    args = parser.parse_args(argv)

    overrides = list(args.overrides)
    if args.seeds is not None:
        overrides.append(f"runs={args.seeds}")
    try:
        cfg = load_config(args.config, overrides)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2

    scenario = ("single_ue_distance_sweep" if args.command == "sweep-distance"
                else "multi_ue_capacity_sweep")

    def progress(done, total):
        if not args.quiet and (done % 20 == 0 or done == total):
            print(f"\r{done}/{total} runs", end="", file=sys.stderr, flush=True)

    paths = run_scenario(cfg, scenario, args.out, max(1, args.parallel), progress)
    if not args.quiet:
        print(file=sys.stderr)
    for kind, path in paths.items():
        print(f"{kind}: {path}")
    if not args.quiet:
        print((paths["summary"]).read_text(), end="")
    return 0


if __name__ == "__main__":
    sys.exit(main())
