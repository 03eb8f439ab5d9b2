#!/usr/bin/env python3
"""Regenerate the golden CLI outputs used by the determinism tests."""

import contextlib
import io
import math
import pathlib
import sys

from spectral_gap.cli import main

GOLDEN = pathlib.Path(__file__).resolve().parent.parent / "tests" / "golden"

CASES = [
    ("criterion1_flat_solve.json",
     ["solve", "--m", "1", "--kappa1", "0", "--kappa2", "0",
      "--diameter", "3.141592653589793", "--backend", "fd"]),
    ("criterion2_kroger_solve.json",
     ["solve", "--riemannian", "--n", "3", "--K", "1.0",
      "--diameter", str(math.pi * (1 - 1e-6))]),
    ("criterion4_bound.json",
     ["bound", "--m", "2", "--kappa1", "1", "--kappa2", "1",
      "--diameter", str(math.pi / 2)]),
]


def run():
    GOLDEN.mkdir(parents=True, exist_ok=True)
    for fname, argv in CASES:
        buf = io.StringIO()
        with contextlib.redirect_stdout(buf):
            code = main(argv)
        if code != 0:
            print(f"{fname}: exit code {code}", file=sys.stderr)
            return 1
        (GOLDEN / fname).write_text(buf.getvalue())
        print(f"wrote {GOLDEN / fname}")
    return 0


if __name__ == "__main__":
    sys.exit(run())
