"""Command-line experiment driver.

Subcommands:

* ``nmse-sweep``  Monte Carlo estimation-error sweep over training lengths.
* ``rate-eval``   end-to-end rate with exhaustive tuning, estimated vs true CSI.
* ``estimate``    one seeded instance per method, printing errors and diagnostics.

All take ``--config`` (flat key=value file), ``--out``, ``--seed``,
``--trials``, and ``--quiet``.  Exit code is 0 on success, nonzero with a
diagnostic line on stderr otherwise.
"""

import argparse
import dataclasses
import sys
from pathlib import Path

from .experiment import (
    ConfigError,
    ExperimentConfig,
    estimate_once,
    parse_config,
    run_nmse_sweep,
    run_rate_eval,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="risce",
        description="Single-RF-chain RIS channel estimation experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("nmse-sweep", "run the estimation-error sweep and write CSV results"),
        ("rate-eval", "run the achievable-rate comparison and write CSV results"),
        ("estimate", "run a single seeded instance and print diagnostics"),
    ):
        cmd = sub.add_parser(name, help=help_text)
        cmd.add_argument("--config", type=Path, help="path to a key=value config file")
        cmd.add_argument("--out", type=Path, help="output CSV path (overrides config)")
        cmd.add_argument("--seed", type=int, help="master seed (overrides config)")
        cmd.add_argument("--trials", type=int, help="trial count (overrides config)")
        cmd.add_argument("--quiet", action="store_true", help="suppress progress output")
        if name != "estimate":
            cmd.add_argument(
                "--timings",
                action="store_true",
                help="record measured wall_ms per row (breaks byte-reproducibility)",
            )
    return parser


def _load_config(args) -> ExperimentConfig:
    if args.config is not None:
        try:
            text = Path(args.config).read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config file {args.config}: {exc}") from exc
        config = parse_config(text)
    else:
        config = ExperimentConfig()
    overrides = {}
    if args.out is not None:
        overrides["output_path"] = str(args.out)
    if args.seed is not None:
        overrides["master_seed"] = args.seed
    if args.trials is not None:
        overrides["trials"] = args.trials
    if overrides:
        config = dataclasses.replace(config, **overrides)
    return config


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _load_config(args)
        if args.command == "nmse-sweep":
            rows_path, summary_path = run_nmse_sweep(config, measure_time=args.timings)
            if not args.quiet:
                print(f"wrote {rows_path} and {summary_path}")
        elif args.command == "rate-eval":
            rows_path, summary_path = run_rate_eval(config, measure_time=args.timings)
            if not args.quiet:
                print(f"wrote {rows_path} and {summary_path}")
        else:
            reports = estimate_once(config)
            for report in reports:
                extra = ""
                if report.iterations is not None:
                    r1, r2 = report.final_residuals
                    extra = f" iterations={report.iterations} residuals=({r1:.3e},{r2:.3e})"
                print(
                    f"method={report.method} t={report.t} nmse={report.nmse:.6f}"
                    f" wall_ms={report.wall_ms:.1f}{extra}"
                )
    except (ConfigError, ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
