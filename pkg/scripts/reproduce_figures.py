#!/usr/bin/env python3
"""Run every figure preset and write one CSV per preset."""
import argparse
import logging
import time
from pathlib import Path

from photodevice.sweep import PRESET_NAMES, run_preset, write_csv

log = logging.getLogger("reproduce")


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--outdir", default="results", type=Path)
    ap.add_argument("--jobs", type=int, default=None)
    ap.add_argument("presets", nargs="*", default=list(PRESET_NAMES), choices=PRESET_NAMES)
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    args.outdir.mkdir(parents=True, exist_ok=True)
    for name in args.presets:
        t0 = time.perf_counter()
        res = run_preset(name, jobs=args.jobs)
        path = args.outdir / f"{name}.csv"
        write_csv(res.rows, path, res.comments)
        log.info("%-6s %5d rows  %6.1fs  -> %s", name, len(res.rows), time.perf_counter() - t0, path)


if __name__ == "__main__":
    main()
