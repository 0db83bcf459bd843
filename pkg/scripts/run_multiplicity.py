#!/usr/bin/env python3
"""Scan the toy-model ground multiplicity against the spin-operator bound.

Uses the equal-moment two-spin configuration (the scan requires equal
moments, which are then swept over the common value g).
"""

import sys
from pathlib import Path

from spinrad.cli import main

ROOT = Path(__file__).resolve().parent.parent


if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else str(
        ROOT / "results" / "multiplicity")
    sys.exit(main(["multiplicity",
                   "--config", str(ROOT / "configs" / "two_spins_equal.yaml"),
                   "--g", "0.4,0.2,0.1",
                   "--out", out]))
