#!/usr/bin/env python3
"""Run the three benchmark scenarios and write curves/plots under results/.

Equivalent to ``difflms scenarios --out results``; extra flags pass through,
e.g. ``python scripts/run_benchmark_scenarios.py --runs 10 --iterations 500`` for
a quick smoke pass instead of the full 100x2000 study.
"""
import sys

from difflms.cli import main

if __name__ == "__main__":
    sys.exit(main(["scenarios", "--out", "results", *sys.argv[1:]]))
