#!/usr/bin/env python3
"""Replay both rounds of the 5-player benchmark and print the comparison table.

Examples:
    python scripts/reproduce_five_player.py                  # model-free, seed 0
    python scripts/reproduce_five_player.py --mode exact
    python scripts/reproduce_five_player.py --seed 17 --out runs/seed17
"""

import argparse
import json
import sys
from pathlib import Path

from nashlq.cli import main as nashlq_main


def run(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--mode", choices=["exact", "model-free"], default="model-free")
    parser.add_argument("--seed", type=int, default=None)
    parser.add_argument("--out", default="runs/reproduce-paper")
    parser.add_argument("--independent-rounds", action="store_true")
    args = parser.parse_args(argv)

    cli_args = ["reproduce-paper", "--mode", args.mode, "--out", args.out]
    if args.seed is not None:
        cli_args += ["--seed", str(args.seed)]
    if args.independent_rounds:
        cli_args += ["--independent-rounds"]
    code = nashlq_main(cli_args)
    if code != 0:
        return code

    summary = json.loads((Path(args.out) / "summary.json").read_text())
    players = range(1, len(summary["rounds"][0]["final"]) + 1)
    print()
    print(f"{'action':<16}{'round':<7}" + "".join(f"player {i:<6}" for i in players))
    for label, key in (("k (start)", "start"), ("k (final)", "final")):
        for index, round_info in enumerate(summary["rounds"], start=1):
            cells = "".join(f"{v:<13.4f}" for v in round_info[key])
            print(f"{label:<16}{index:<7}{cells}")
    for index, published in enumerate(summary["published_finals"], start=1):
        cells = "".join(f"{v:<13.4f}" for v in published)
        print(f"{'k (published)':<16}{index:<7}{cells}")
    print(f"\noverall: {'PASS' if summary['passed'] else 'FAIL'}")
    return 0


if __name__ == "__main__":
    sys.exit(run())
