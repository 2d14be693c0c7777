"""Segment extraction from per-frame labels and confidence pruning."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .core import Interval, Modality, Segment, others
from .voting import FrameLabel
from .windows import FrameVoteList


@dataclass(frozen=True)
class PruneConfig:
    threshold: float = 0.8

    def __post_init__(self):
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError("threshold must lie in [0, 1]")


def frame_confidence(frame: FrameVoteList, final: FrameLabel) -> float:
    """Highest confidence among the frame's votes for its final label (0 if none)."""
    return max((c for label, c in frame.votes if label == final.label), default=0.0)


def extract_segments(
    finals: Sequence[FrameLabel], votes: Sequence[FrameVoteList], modality: Modality
) -> list[Segment]:
    segments = []
    start = 0
    peak = 0.0
    for f, final in enumerate(finals):
        conf = frame_confidence(votes[f], final)
        if f > start and final.label != finals[f - 1].label:
            segments.append(Segment(modality, finals[start].label, Interval(start, f - 1), peak))
            start, peak = f, conf
        else:
            peak = max(peak, conf)
    if finals:
        segments.append(Segment(modality, finals[start].label, Interval(start, len(finals) - 1), peak))
    return segments


def prune_segments(segments: Sequence[Segment], config: PruneConfig = PruneConfig()) -> list[Segment]:
    """Relabel segments whose peak does not exceed the threshold as Others, then merge Others runs.

    A merged Others segment keeps the highest peak among pieces that were
    already Others; relabeled pieces contribute 0.
    """
    out: list[Segment] = []
    for seg in segments:
        background = others(seg.modality)
        if seg.label != background and seg.peak_confidence > config.threshold:
            out.append(seg)
            continue
        peak = seg.peak_confidence if seg.label == background else 0.0
        if out and out[-1].label == background and out[-1].end + 1 == seg.start:
            prev = out.pop()
            out.append(
                Segment(seg.modality, background, Interval(prev.start, seg.end), max(prev.peak_confidence, peak))
            )
        else:
            out.append(Segment(seg.modality, background, seg.interval, peak))
    return out
