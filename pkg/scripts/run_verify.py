#!/usr/bin/env python3
"""Run the energy-identity verification suite on the bundled two-spin config.

Artifacts (verify.csv, verify_manifest.json) land in results/verify by
default; pass a different output directory as the first argument.
"""

import sys
from pathlib import Path

from spinrad.cli import main

ROOT = Path(__file__).resolve().parent.parent


if __name__ == "__main__":
    out = sys.argv[1] if len(sys.argv) > 1 else str(ROOT / "results" / "verify")
    sys.exit(main(["verify",
                   "--config", str(ROOT / "configs" / "two_spins.yaml"),
                   "--out", out]))
