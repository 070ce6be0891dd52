"""Command-line interface.

    softscat run --preset example3 --out results/example3
    softscat run --config my_run.txt --out results/custom --seed 7
    softscat compare results/a results/b
    softscat selftest

Exit codes: 0 success, 1 configuration error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import logging
import sys

from .config import ConfigError, ExperimentConfig, apply_setting, load_config_file, preset_config
from .experiment import NumericalError, compare_runs, format_comparison, run_experiment
from .selftest import run_selftest


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _build_parser() -> _Parser:
    parser = _Parser(prog="softscat",
                     description="Direct sampling reconstruction of sound-soft obstacles "
                                 "from simulated near-field point-source data.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run one experiment")
    run_p.add_argument("--preset", help="named preset (example1..example5b)")
    run_p.add_argument("--config", help="flat key = value config file")
    run_p.add_argument("--out", help="output directory (images, manifest)")
    run_p.add_argument("--seed", type=int, help="override the RNG seed")
    run_p.add_argument("--delta", type=float, help="override the noise level")
    run_p.add_argument("--shape", help="override the obstacle shape")
    run_p.add_argument("--set", dest="settings", action="append", default=[],
                       metavar="KEY=VALUE", help="override any config key (repeatable)")
    run_p.add_argument("--save-data", action="store_true",
                       help="also write the near-field CSV bundle under <out>/data")
    run_p.add_argument("--dump-operators", action="store_true",
                       help="also write the transformed operator under <out>/operators")

    cmp_p = sub.add_parser("compare", help="compare two run output directories")
    cmp_p.add_argument("dir_a")
    cmp_p.add_argument("dir_b")

    sub.add_parser("selftest", help="run the built-in oracle/invariant checks")
    return parser


def _assemble_config(args) -> ExperimentConfig:
    config = preset_config(args.preset) if args.preset else ExperimentConfig()
    if args.config:
        config = load_config_file(args.config, base=config)
    if args.shape is not None:
        config = apply_setting(config, "shape", args.shape)
    if args.delta is not None:
        config = apply_setting(config, "delta", repr(args.delta))
    if args.seed is not None:
        config = apply_setting(config, "seed", str(args.seed))
    for item in args.settings:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        config = apply_setting(config, key, value)
    return config.validate()


def _cmd_run(args) -> int:
    config = _assemble_config(args)
    result = run_experiment(config, out_dir=args.out, save_data=args.save_data,
                            dump_operators=args.dump_operators)
    manifest = result.manifest
    if args.out:
        print(f"wrote {sorted(result.images)} images and manifest to {args.out}")
    else:
        for line in manifest.diagnostics_lines():
            print(line)
    for tag, m in manifest.metrics.items():
        print(f"{tag}: argmax=({m.argmax[0]:+.4f},{m.argmax[1]:+.4f}) "
              f"dist={m.argmax_distance:.4f} exterior_mean={m.exterior_mean:.4f}")
    return 0


def _cmd_compare(args) -> int:
    print(format_comparison(compare_runs(args.dir_a, args.dir_b)))
    return 0


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "compare":
            return _cmd_compare(args)
        return 0 if run_selftest() else 2
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
