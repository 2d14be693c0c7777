"""Score detected errors against a ground-truth errors tier."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

from .core import ErrorType, VideoMeta, interval_gap, within_ms


@dataclass(frozen=True)
class MatchConfig:
    match_tolerance_ms: float = 1000
    require_type_match: bool = True

    def __post_init__(self):
        if self.match_tolerance_ms < 0:
            raise ValueError("match tolerance must be non-negative")


@dataclass(frozen=True)
class TypeRow:
    ground_truth: int
    recognized: int

    @property
    def tp_rate(self) -> Optional[float]:
        if self.ground_truth == 0:
            return None
        return self.recognized / self.ground_truth


@dataclass
class EvaluationReport:
    rows: dict = field(default_factory=dict)  # ErrorType -> TypeRow
    false_positives: int = 0

    @property
    def total(self) -> TypeRow:
        return TypeRow(
            sum(r.ground_truth for r in self.rows.values()),
            sum(r.recognized for r in self.rows.values()),
        )

    def to_json(self) -> str:
        def rate(row):
            return None if row.tp_rate is None else round(row.tp_rate, 3)

        doc = {
            "rows": {
                t.value: {"ground_truth": r.ground_truth, "recognized": r.recognized, "tp_rate": rate(r)}
                for t, r in self.rows.items()
            },
            "total": {"ground_truth": self.total.ground_truth, "recognized": self.total.recognized,
                      "tp_rate": rate(self.total)},
            "false_positives": self.false_positives,
        }
        return json.dumps(doc, sort_keys=True, indent=2) + "\n"

    def format_table(self) -> str:
        def pct(row):
            return "n/a" if row.tp_rate is None else f"{100 * row.tp_rate:.1f}%"

        lines = [f"{'Error Type':<18} {'Ground Truth':>12} {'Recognized':>10} {'TP Rate':>8}"]
        for t, r in self.rows.items():
            lines.append(f"{t.value:<18} {r.ground_truth:>12} {r.recognized:>10} {pct(r):>8}")
        total = self.total
        lines.append(f"{'total':<18} {total.ground_truth:>12} {total.recognized:>10} {pct(total):>8}")
        lines.append(f"false positives: {self.false_positives}")
        return "\n".join(lines) + "\n"


def match_errors(detected: Sequence, truth: Sequence, meta: VideoMeta, config: MatchConfig = MatchConfig()) -> EvaluationReport:
    """Greedy one-to-one matching in temporal order.

    ``detected`` and ``truth`` hold objects with ``error_type`` and
    ``interval`` (``DetectedError`` or ``(ErrorType, Interval)`` pairs for
    truth). Each detection takes the earliest unmatched truth span within the
    tolerance.
    """
    truth = [_pair(x) for x in truth]
    order = sorted(range(len(truth)), key=lambda i: (truth[i][1], list(ErrorType).index(truth[i][0])))
    used = [False] * len(truth)
    matched = {t: 0 for t in ErrorType}
    false_positives = 0
    for det in sorted(detected, key=lambda d: (d.interval, list(ErrorType).index(d.error_type))):
        hit = None
        for i in order:
            kind, iv = truth[i]
            if used[i] or (config.require_type_match and kind != det.error_type):
                continue
            if within_ms(interval_gap(iv, det.interval), config.match_tolerance_ms, meta):
                hit = i
                break
        if hit is None:
            false_positives += 1
        else:
            used[hit] = True
            matched[truth[hit][0]] += 1
    counts = {t: 0 for t in ErrorType}
    for kind, _ in truth:
        counts[kind] += 1
    rows = {t: TypeRow(counts[t], matched[t]) for t in ErrorType}
    return EvaluationReport(rows, false_positives)


def _pair(x):
    if isinstance(x, tuple):
        return x
    if hasattr(x, "error_type"):
        return (x.error_type, x.interval)
    # annotation span from an "errors" tier
    return (ErrorType(x.label), x.interval)
