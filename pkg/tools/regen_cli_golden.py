"""Regenerate tests/golden/*.out from the CLI cases listed in tests/cli_cases.py.

Run from the repository root after an intentional output change; review the diff.
"""

import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))

from cli_cases import CASES, GOLDEN, resolve  # noqa: E402

from artinkit.cli import run  # noqa: E402

GOLDEN.mkdir(exist_ok=True)
for name, argv, code in CASES:
    outcome = run(resolve(argv))
    if outcome.code != code:
        sys.exit(f"{name}: exit {outcome.code}, expected {code}")
    (GOLDEN / f"{name}.out").write_text(outcome.text, encoding="utf-8")
    print(f"wrote {name}.out")
