"""Regenerate the golden prediction, report and feedback files next to tests/data/qmwg_*.ann.

Only rerun this after an intentional output-format change, and review the diff.
"""

from pathlib import Path

from aslgram.cli import main

DATA = Path(__file__).resolve().parent.parent / "tests" / "data"


def regenerate(stem: Path) -> int:
    pred = stem.with_suffix(".pred")
    main(["simulate", str(stem.with_suffix(".ann")), "--predictions", str(pred)])
    return main(["detect", str(pred), "--report", str(stem.with_suffix(".report.json")),
                 "--feedback", str(stem.with_suffix(".feedback.txt"))])


if __name__ == "__main__":
    for ann in sorted(DATA.glob("qmwg_*.ann")):
        code = regenerate(ann.with_suffix(""))
        print(f"{ann.name}: exit {code}")
