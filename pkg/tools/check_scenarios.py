#!/usr/bin/env python3
"""Standalone smoke run of every auxnet scenario.

Usage:
    python tools/check_scenarios.py            # reduced lattices, a few seconds
    AUXNET_FULL=1 python tools/check_scenarios.py   # the full-size defaults

Runs each scenario through the CLI into a temporary directory and prints the
SHAPE of every file it wrote (CSV rows/columns, JSON keys, SVG size) so the
output layout can be eyeballed without opening the files.

Exit codes:
    0  Every scenario exited 0 and wrote its manifest.
    1  A scenario returned a non-zero exit code or left a file missing.
    2  AUXNET_FULL is set to something other than 0/1.
"""

from __future__ import annotations

import csv
import json
import os
import sys
import tempfile
from pathlib import Path
from typing import Any

from auxnet.cli import main as cli_main
from auxnet.const import MANIFEST_FILENAME

REDUCED: dict[str, dict[str, Any]] = {
    "defect": {"n_q": 200, "n_trunc": 40},
    "lee": {"n_trunc": 80, "t_max": 20.0, "dt": 0.01},
    "ptbic": {"n_trunc": 81},
    "reduce": {},
    "sweep": {"sizes": [21, 41], "u_min": 0.0, "u_max": 3.0},
}


def _shape(path: Path) -> str:
    """One-line summary of an output file."""
    if path.suffix == ".csv":
        with open(path, encoding="utf-8", newline="") as handle:
            rows = list(csv.reader(handle))
        return f"csv[{len(rows) - 1} rows] cols={rows[0] if rows else []}"
    if path.suffix == ".json":
        data = json.loads(path.read_text(encoding="utf-8"))
        keys = sorted(data) if isinstance(data, dict) else []
        return "json{" + ", ".join(keys[:8]) + ("…" if len(keys) > 8 else "") + "}"
    return f"{path.suffix.lstrip('.')}({path.stat().st_size} bytes)"


def main() -> int:
    full = os.environ.get("AUXNET_FULL", "0")
    if full not in ("0", "1"):
        print("AUXNET_FULL must be 0 or 1.", file=sys.stderr)
        return 2

    failed = []
    with tempfile.TemporaryDirectory(prefix="auxnet-") as tmp:
        root = Path(tmp)
        for k, (scenario, parameters) in enumerate(REDUCED.items(), start=1):
            out = root / scenario
            argv = [scenario, "--out", str(out), "-q"]
            if full == "0" and parameters:
                config = root / f"{scenario}.json"
                config.write_text(json.dumps({"schema_version": 1, "parameters": parameters}))
                argv += ["--config", str(config)]
            print(f"[{k}/{len(REDUCED)}] {scenario}…")
            code = cli_main(argv)
            if code != 0 or not (out / MANIFEST_FILENAME).exists():
                print(f"      ✗ exit code {code}")
                failed.append(scenario)
                continue
            for path in sorted(out.iterdir()):
                print(f"      {path.name}: {_shape(path)}")

    if failed:
        print(f"\nFailed scenarios: {', '.join(failed)}", file=sys.stderr)
        return 1
    print("\nAll scenarios ran.")
    return 0


if __name__ == "__main__":
    sys.exit(main())
