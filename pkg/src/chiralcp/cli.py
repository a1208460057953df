"""Command-line front end.

Subcommands mirror the scenario commands (potential, enhancement,
ensemble, barrier) plus `presets list`. Each run consumes a YAML config
(--config) or a packaged preset (--preset) and writes its outputs,
config echo, and manifest into --out.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import __version__
from .dynamics import IntegrationError
from .quadrature import ConvergenceError
from .scenarios import (
    COMMANDS,
    ConfigError,
    load_preset,
    load_scenario,
    preset_names,
    run_scenario,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="chiralcp",
        description="Chiral Casimir-Polder potentials and enantiomer "
        "separation in a two-mirror cavity.",
    )
    parser.add_argument("--version", action="version",
                        version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    helps = {
        "potential": "potential curve(s) over a z grid, CSV output",
        "enhancement": "resonant component amplitudes vs cavity width",
        "ensemble": "two-enantiomer trajectory ensemble statistics",
        "barrier": "barrier heights and threshold speeds at one mirror",
    }
    for name in COMMANDS:
        sp = sub.add_parser(name, help=helps[name])
        src = sp.add_mutually_exclusive_group(required=True)
        src.add_argument("--config", type=Path, help="scenario YAML file")
        src.add_argument("--preset", help="packaged scenario name")
        sp.add_argument("--seed", type=int, default=None,
                        help="override the ensemble RNG seed (u64)")
        sp.add_argument("--workers", type=int, default=1,
                        help="parallel trajectory workers")
        sp.add_argument("--out", type=Path, default=None,
                        help="output directory (default: runs/<name>)")

    sp = sub.add_parser("presets", help="inspect packaged scenarios")
    sp.add_argument("action", choices=["list"])
    return parser


def _run(args) -> int:
    if args.command == "presets":
        for name in preset_names():
            cfg = load_preset(name)
            print(f"{name:8s} {cfg.command:12s} {cfg.description}")
        return EXIT_OK

    if args.seed is not None and not 0 <= args.seed < 2**64:
        raise ConfigError("--seed: must fit in an unsigned 64-bit integer")
    if args.workers < 1:
        raise ConfigError("--workers: must be >= 1")

    cfg = load_preset(args.preset) if args.preset else load_scenario(args.config)
    if cfg.command != args.command:
        raise ConfigError(
            f"scenario declares command {cfg.command!r}, "
            f"but was invoked as {args.command!r}")
    out = args.out
    if out is None:
        out = Path("runs") / (args.preset if args.preset else args.config.stem)
    manifest = run_scenario(
        cfg, out, workers=args.workers, seed_override=args.seed,
        tool_version=__version__,
    )
    names = ", ".join(sorted(manifest.outputs))
    print(f"{out}: wrote {names} (config {manifest.config_digest[:12]}, "
          f"{manifest.wall_clock_s:.1f}s)")
    return EXIT_OK


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return _run(args)
    except ConfigError as exc:
        print(f"chiralcp: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except FileNotFoundError as exc:
        print(f"chiralcp: config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (ConvergenceError, IntegrationError, FloatingPointError) as exc:
        print(f"chiralcp: numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
