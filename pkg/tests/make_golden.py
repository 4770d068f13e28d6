"""Regenerate tests/golden/ from the pinned tiny run.

Run from the repository root:

    python3 tests/make_golden.py

Only do this for a deliberate change to the RNG layout, step control,
jump arithmetic or output formatting, and say so in the commit message.
"""

import json
import tempfile
from pathlib import Path

from lztraj import cli

import test_config_cli


def main() -> None:
    golden = Path(__file__).parent / "golden"
    golden.mkdir(exist_ok=True)
    with tempfile.TemporaryDirectory() as tmp:
        cfg_path = Path(tmp) / "cfg.json"
        cfg_path.write_text(json.dumps(test_config_cli.golden_config()), encoding="utf-8")
        assert cli.main(["run", "--config", str(cfg_path), "--out", str(golden)]) == 0
    # runtime is never compared; drop it so regeneration diffs stay clean
    summary = json.loads((golden / "summary.json").read_text(encoding="utf-8"))
    summary.pop("runtime_seconds", None)
    (golden / "summary.json").write_text(
        json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    print(f"regenerated {golden}")


if __name__ == "__main__":
    main()
