"""Shared vocabulary: modalities, label taxonomies, frame/time arithmetic, intervals."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

DEFAULT_FPS = 30


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        # str() keeps 29.97 as 2997/100 rather than its binary expansion
        return Fraction(str(value))
    return Fraction(value)


@dataclass(frozen=True)
class VideoMeta:
    frame_count: int
    fps: Fraction = field(default=Fraction(DEFAULT_FPS))

    def __post_init__(self):
        object.__setattr__(self, "fps", _as_fraction(self.fps))
        if not isinstance(self.frame_count, int) or self.frame_count < 1:
            raise ValueError(f"frame_count must be a positive integer, got {self.frame_count!r}")
        if self.fps <= 0:
            raise ValueError(f"fps must be positive, got {self.fps}")

    @property
    def last_frame(self) -> int:
        return self.frame_count - 1


class Modality(enum.Enum):
    HANDS = "hands"
    FACE = "face"
    HEAD = "head"


class _Taxonomy(enum.Enum):
    """Closed label set; definition order is the canonical taxonomy order."""

    @classmethod
    def parse(cls, text: str):
        try:
            return cls(text)
        except ValueError:
            raise ValueError(f"{text!r} is not a {cls.__name__}") from None

    @property
    def index(self) -> int:
        return _ORDER[self]


class GestureLabel(_Taxonomy):
    CONDITIONAL = "conditional"
    NEGATIVE = "negative"
    YNQ = "ynq"
    WHQ = "whq"
    TIME = "time"
    POINTING = "pointing"
    FINGERSPELLING = "fingerspelling"
    CLAUSE_BOUNDARY = "clause_boundary"
    OTHERS = "others"


class FaceLabel(_Taxonomy):
    COND_TOPIC_RHQ = "cond_topic_rhq"
    NEGATIVE = "negative"
    YNQ = "ynq"
    WHQ = "whq"
    OTHERS = "others"


class HeadLabel(_Taxonomy):
    SHAKE_SIDE_TO_SIDE = "shake_side_to_side"
    TILT_FORWARD = "tilt_forward"
    TILT_SLIGHT_SIDE = "tilt_slight_side"
    OTHERS = "others"


Label = Union[GestureLabel, FaceLabel, HeadLabel]

_ORDER = {
    label: i for cls in (GestureLabel, FaceLabel, HeadLabel) for i, label in enumerate(cls)
}

TAXONOMY = {
    Modality.HANDS: GestureLabel,
    Modality.FACE: FaceLabel,
    Modality.HEAD: HeadLabel,
}


def others(modality: Modality) -> Label:
    return TAXONOMY[modality].OTHERS


def parse_label(modality: Modality, text: str) -> Label:
    return TAXONOMY[modality].parse(text)


class ErrorType(enum.Enum):
    WHQ_LEXICAL = "whq_lexical"
    YNQ_LEXICAL = "ynq_lexical"
    NEG_LEXICAL = "neg_lexical"
    COND_LEXICAL = "cond_lexical"
    YNQ_BEGINNING = "ynq_beginning"
    YNQ_END = "ynq_end"
    COND_BEGINNING = "cond_beginning"
    TOPIC_BEGINNING = "topic_beginning"

    @property
    def is_lexical(self) -> bool:
        return self.value.endswith("_lexical")


ERROR_ORDER = {t: i for i, t in enumerate(ErrorType)}


@dataclass(frozen=True, order=True)
class Interval:
    """Inclusive frame range."""

    start: int
    end: int

    def __post_init__(self):
        if self.start < 0 or self.end < self.start:
            raise ValueError(f"invalid interval [{self.start}, {self.end}]")

    def __len__(self) -> int:
        return self.end - self.start + 1

    def fits(self, meta: VideoMeta) -> bool:
        return self.end < meta.frame_count

    def contains(self, other: "Interval") -> bool:
        return self.start <= other.start and other.end <= self.end

    def overlaps(self, other: "Interval") -> bool:
        return self.start <= other.end and other.start <= self.end

    @classmethod
    def point(cls, frame: int) -> "Interval":
        return cls(frame, frame)


def frames_to_ms(k: int, meta: VideoMeta) -> float:
    if k < 0:
        raise ValueError("frame count must be non-negative")
    return float(Fraction(k * 1000) / meta.fps)


def within_ms(k: int, limit_ms, meta: VideoMeta) -> bool:
    """Exact test of ``frames_to_ms(k) <= limit_ms`` (no float rounding at the boundary)."""
    return Fraction(k * 1000) <= _as_fraction(limit_ms) * meta.fps


def ms_to_frames_ceil(ms, meta: VideoMeta) -> int:
    """Smallest frame count whose duration is at least ``ms``."""
    exact = _as_fraction(ms) * meta.fps / 1000
    return -((-exact.numerator) // exact.denominator)


def round_ms(k: int, meta: VideoMeta) -> int:
    """Duration of ``k`` frames rounded half-up to whole milliseconds."""
    exact = Fraction(k * 1000) / meta.fps
    return int((exact + Fraction(1, 2)) // 1)


def interval_gap(a: Interval, b: Interval) -> int:
    """Frames separating two intervals: 0 when they overlap, 1 when adjacent."""
    return max(0, max(a.start, b.start) - min(a.end, b.end))


@dataclass(frozen=True)
class Segment:
    modality: Modality
    label: Label
    interval: Interval
    peak_confidence: float

    @property
    def start(self) -> int:
        return self.interval.start

    @property
    def end(self) -> int:
        return self.interval.end


@dataclass(frozen=True)
class RuleThresholds:
    lexical_ms: float = 200
    timing_ms: float = 1000
    evidence_confidence: float = 0.8
    implicit_boundaries: bool = True
    # "any": face OR head evidence satisfies a trigger; "all": both are required
    evidence_mode: str = "any"
    # proximity linking a Cond/Topic/RHQ face to a Conditional sign
    ctr_link_ms: float = 200

    def __post_init__(self):
        if self.lexical_ms < 0 or self.timing_ms < 0 or self.ctr_link_ms < 0:
            raise ValueError("durations must be non-negative")
        if self.evidence_mode not in ("any", "all"):
            raise ValueError(f"evidence_mode must be 'any' or 'all', got {self.evidence_mode!r}")


@dataclass(frozen=True)
class DetectedError:
    error_type: ErrorType
    interval: Interval
    trigger_segment: Segment
    nearest_counterevidence: Optional[Segment] = None
    message: str = ""

    @property
    def key(self):
        return (self.error_type, self.interval)

    def sort_key(self):
        return (self.interval.start, self.interval.end, ERROR_ORDER[self.error_type])
