"""Sliding-window enumeration and per-frame vote accumulation."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .core import Label, Modality, TAXONOMY, VideoMeta
from .errors import ConfidenceRange, DuplicateWindow, OutOfRange, ShortVideo

BATCH_SIZE = 64


@dataclass(frozen=True)
class WindowSpec:
    size: int
    stride: int = 2

    def __post_init__(self):
        if self.size < 1 or self.stride < 1:
            raise ValueError(f"window size and stride must be >= 1, got {self.size}/{self.stride}")

    def center(self, start: int) -> int:
        return start + (self.size - 1) // 2


DEFAULT_SPECS = {
    Modality.HANDS: WindowSpec(8, 2),
    Modality.FACE: WindowSpec(32, 2),
    Modality.HEAD: WindowSpec(32, 2),
}


@dataclass(frozen=True)
class WindowPrediction:
    modality: Modality
    start: int
    label: Label
    confidence: float

    def __post_init__(self):
        if not 0.0 <= self.confidence <= 1.0:
            raise ConfidenceRange(self.confidence)
        if not isinstance(self.label, TAXONOMY[self.modality]):
            raise ValueError(f"{self.label} is not a {self.modality.value} label")
        if self.start < 0:
            raise OutOfRange(f"negative window start {self.start}")


@dataclass
class FrameVoteList:
    frame: int
    votes: list  # (label, confidence) pairs in ascending window-start order

    def __len__(self):
        return len(self.votes)


def enumerate_windows(meta: VideoMeta, spec: WindowSpec) -> list[int]:
    """Window starts 0, stride, 2*stride, ..., plus a tail window at n - size if needed."""
    n, size = meta.frame_count, spec.size
    if n < size:
        raise ShortVideo(n, size)
    last = n - size
    starts = list(range(0, last + 1, spec.stride))
    if starts[-1] < last:
        starts.append(last)
    return starts


def batched(starts: Sequence[int], batch_size: int = BATCH_SIZE) -> Iterator[Sequence[int]]:
    for i in range(0, len(starts), batch_size):
        yield starts[i : i + batch_size]


def accumulate_votes(
    predictions: Iterable[WindowPrediction], spec: WindowSpec, meta: VideoMeta
) -> list[FrameVoteList]:
    """Give every frame the (label, confidence) of each window covering it.

    Predictions may arrive in any order; votes are laid down in ascending
    window-start order.
    """
    n = meta.frame_count
    ordered = sorted(predictions, key=lambda p: p.start)
    table: list[list] = [[] for _ in range(n)]
    previous = None
    for p in ordered:
        if p.start == previous:
            raise DuplicateWindow(p.start, p.modality)
        previous = p.start
        stop = p.start + spec.size
        if stop > n:
            raise OutOfRange(
                f"window [{p.start}, {stop - 1}] exceeds video of {n} frames"
            )
        vote = (p.label, p.confidence)
        for f in range(p.start, stop):
            table[f].append(vote)
    return [FrameVoteList(f, votes) for f, votes in enumerate(table)]
