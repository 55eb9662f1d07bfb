"""Write every figure's data table to a directory, one CSV per figure id."""

import argparse
import time
from pathlib import Path

from su11if import tables
from su11if.scenario import load_scenario


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("outdir", type=Path)
    parser.add_argument("--scenario", default="paper-default")
    parser.add_argument("--amp-steps", type=int, default=tables.AMP_STEPS)
    args = parser.parse_args()

    scenario = load_scenario(args.scenario)
    args.outdir.mkdir(parents=True, exist_ok=True)
    for fig in tables.FIGURE_IDS:
        t0 = time.perf_counter()
        table = tables.figure_table(fig, scenario, amp_steps=args.amp_steps)
        path = args.outdir / f"{fig}.csv"
        with open(path, "w", newline="", encoding="utf-8") as fh:
            tables.write_csv(table, fh)
        print(f"{fig:7s} {len(table.rows):6d} rows  {time.perf_counter() - t0:6.2f} s  -> {path}")


if __name__ == "__main__":
    main()
