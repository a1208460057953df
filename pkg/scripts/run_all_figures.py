#!/usr/bin/env python3
"""Run every bundled preset scenario and collect the outputs under one root.

The potential scans and the barrier report finish in seconds to a couple of
minutes each; the two ensemble presets integrate 2 x 500 trajectories apiece
and take a few minutes per preset on a single core (use --workers on a
multi-core machine).

Usage:
    python scripts/run_all_figures.py --out runs/all
    python scripts/run_all_figures.py --only fig5 barrierA
    python scripts/run_all_figures.py --workers 4
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path

from chiralcp import __version__, load_preset, preset_names, run_scenario


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument(
        "--out",
        type=Path,
        default=Path("runs") / "all",
        help="output root; each preset writes into <out>/<name> (default: runs/all)",
    )
    parser.add_argument(
        "--only",
        nargs="+",
        metavar="NAME",
        help="run only these presets (default: all of them)",
    )
    parser.add_argument(
        "--workers",
        type=int,
        default=1,
        help="process count for ensemble presets (default: 1)",
    )
    args = parser.parse_args(argv)

    names = list(preset_names())
    if args.only:
        unknown = sorted(set(args.only) - set(names))
        if unknown:
            parser.error(f"unknown preset(s): {', '.join(unknown)}")
        names = [n for n in names if n in set(args.only)]

    for name in names:
        cfg = load_preset(name)
        out_dir = args.out / name
        print(f"[{name}] {cfg.command}: {cfg.description}")
        t0 = time.perf_counter()
        manifest = run_scenario(
            cfg, out_dir, workers=args.workers, tool_version=__version__
        )
        wall = time.perf_counter() - t0
        files = ", ".join(sorted(manifest.outputs))
        print(f"[{name}] wrote {files} in {wall:.1f} s -> {out_dir}")

    return 0


if __name__ == "__main__":
    sys.exit(main())
