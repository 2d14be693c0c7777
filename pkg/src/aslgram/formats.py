"""Line-oriented annotation and prediction files, JSON error reports, feedback text.

Both text formats are whitespace separated; ``#`` starts a comment. The first
non-comment line is the header ``video <frame_count> <fps>``.

Annotation lines::

    <tier> <label> <start_frame> <end_frame>

Prediction lines::

    window <modality> <size> <stride>
    <modality> <window_start> <label> <confidence>
    <modality> <window_start> <label>=<p> <label>=<p> ...
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .core import (
    ERROR_ORDER,
    DetectedError,
    ErrorType,
    FaceLabel,
    GestureLabel,
    HeadLabel,
    Interval,
    Modality,
    Segment,
    TAXONOMY,
    VideoMeta,
    round_ms,
)
from .errors import (
    ConfidenceRange,
    DuplicateWindow,
    OutOfRange,
    OverlapError,
    ParseError,
    UnknownLabel,
)
from .windows import DEFAULT_SPECS, WindowPrediction, WindowSpec

FACE_ALIASES = {
    "conditional": FaceLabel.COND_TOPIC_RHQ,
    "topic": FaceLabel.COND_TOPIC_RHQ,
    "rhq": FaceLabel.COND_TOPIC_RHQ,
}

TIER_LABELS = {
    "clause": frozenset({GestureLabel.CLAUSE_BOUNDARY.value}),
    "wanted_words": frozenset(g.value for g in GestureLabel),
    "facial_expressions": frozenset(f.value for f in FaceLabel) | frozenset(FACE_ALIASES),
    "fingerspelling": frozenset({GestureLabel.FINGERSPELLING.value}),
    "lexical_pointing": frozenset({GestureLabel.POINTING.value}),
    "head_movements": frozenset(h.value for h in HeadLabel),
    "errors": frozenset(e.value for e in ErrorType),
}
KNOWN_TIERS = tuple(TIER_LABELS)


def face_label(text: str) -> FaceLabel:
    """Classifier face class for an annotation label (fine labels map to the merged class)."""
    return FACE_ALIASES.get(text) or FaceLabel(text)


@dataclass(frozen=True, order=True)
class Span:
    interval: Interval
    label: str


@dataclass
class AnnotationTimeline:
    meta: VideoMeta
    tiers: dict = field(default_factory=dict)  # tier name -> sorted list of Span

    def spans(self, tier: str) -> list:
        return self.tiers.get(tier, [])

    def copy(self) -> "AnnotationTimeline":
        return AnnotationTimeline(self.meta, {k: list(v) for k, v in self.tiers.items()})

    def validate(self) -> "AnnotationTimeline":
        for tier, spans in self.tiers.items():
            spans.sort()
            allowed = TIER_LABELS.get(tier)
            for span in spans:
                if allowed is not None and span.label not in allowed:
                    raise UnknownLabel(tier, span.label)
                if not span.interval.fits(self.meta):
                    raise OutOfRange(f"span {span.label} {span.interval} on tier {tier!r} outside video")
            for a, b in zip(spans, spans[1:]):
                if a.interval.overlaps(b.interval):
                    raise OverlapError(tier)
        return self


def format_fps(fps: Fraction) -> str:
    return str(fps.numerator) if fps.denominator == 1 else f"{fps.numerator}/{fps.denominator}"


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        tokens = raw.split("#", 1)[0].split()
        if tokens:
            yield lineno, tokens


def _int(token: str, lineno: int, what: str) -> int:
    try:
        value = int(token)
    except ValueError:
        raise ParseError(lineno, f"{what} must be an integer, got {token!r}") from None
    if value < 0:
        raise ParseError(lineno, f"{what} must be non-negative, got {value}")
    return value


def _header(lines) -> VideoMeta:
    for lineno, tokens in lines:
        if tokens[0] != "video" or len(tokens) != 3:
            raise ParseError(lineno, "expected header 'video <frame_count> <fps>'")
        n = _int(tokens[1], lineno, "frame_count")
        try:
            fps = Fraction(tokens[2])
        except (ValueError, ZeroDivisionError):
            raise ParseError(lineno, f"bad fps {tokens[2]!r}") from None
        try:
            return VideoMeta(n, fps)
        except ValueError as exc:
            raise ParseError(lineno, str(exc)) from None
    raise ParseError(0, "empty document (missing 'video' header)")


def parse_annotations(text: str) -> AnnotationTimeline:
    lines = _lines(text)
    meta = _header(lines)
    tiers: dict = {}
    origin = {}
    for lineno, tokens in lines:
        if len(tokens) == 2 and tokens[0] == "tier":
            # declares a tier that may have no spans (an empty head tier differs from a missing one)
            tiers.setdefault(tokens[1], [])
            continue
        if len(tokens) != 4:
            raise ParseError(lineno, "expected '<tier> <label> <start_frame> <end_frame>'")
        tier, label = tokens[0], tokens[1]
        if tier == "video":
            raise ParseError(lineno, "duplicate header")
        start = _int(tokens[2], lineno, "start_frame")
        end = _int(tokens[3], lineno, "end_frame")
        if end < start:
            raise ParseError(lineno, f"end frame {end} precedes start frame {start}")
        if end >= meta.frame_count:
            raise ParseError(lineno, f"span [{start}, {end}] outside a {meta.frame_count}-frame video")
        allowed = TIER_LABELS.get(tier)
        if allowed is not None and label not in allowed:
            raise UnknownLabel(tier, label, lineno)
        span = Span(Interval(start, end), label)
        tiers.setdefault(tier, []).append(span)
        origin[(tier, span)] = lineno
    for tier, spans in tiers.items():
        spans.sort()
        for a, b in zip(spans, spans[1:]):
            if a.interval.overlaps(b.interval):
                raise OverlapError(tier, origin[(tier, b)])
    return AnnotationTimeline(meta, tiers)


def serialize_annotations(timeline: AnnotationTimeline) -> str:
    out = [f"video {timeline.meta.frame_count} {format_fps(timeline.meta.fps)}"]
    for tier, spans in timeline.tiers.items():
        if not spans:
            out.append(f"tier {tier}")
        for span in sorted(spans):
            out.append(f"{tier} {span.label} {span.interval.start} {span.interval.end}")
    return "\n".join(out) + "\n"


@dataclass
class PredictionFile:
    meta: VideoMeta
    specs: dict = field(default_factory=lambda: dict(DEFAULT_SPECS))
    records: list = field(default_factory=list)

    def by_modality(self, modality: Modality) -> list:
        return [r for r in self.records if r.modality == modality]


def _modality(token: str, lineno: int) -> Modality:
    try:
        return Modality(token)
    except ValueError:
        raise ParseError(lineno, f"unknown modality {token!r}") from None


def _confidence(token: str, lineno: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ParseError(lineno, f"confidence must be a number, got {token!r}") from None
    if math.isnan(value) or not 0.0 <= value <= 1.0:
        raise ConfidenceRange(value, lineno)
    return value


def _label(modality: Modality, token: str, lineno: int):
    try:
        return TAXONOMY[modality](token)
    except ValueError:
        raise UnknownLabel(modality.value, token, lineno) from None


def load_predictions(text: str) -> PredictionFile:
    lines = _lines(text)
    meta = _header(lines)
    specs = dict(DEFAULT_SPECS)
    pending = []
    for lineno, tokens in lines:
        if tokens[0] == "window":
            if len(tokens) != 4:
                raise ParseError(lineno, "expected 'window <modality> <size> <stride>'")
            m = _modality(tokens[1], lineno)
            size, stride = _int(tokens[2], lineno, "size"), _int(tokens[3], lineno, "stride")
            if size < 1 or stride < 1:
                raise ParseError(lineno, "window size and stride must be >= 1")
            specs[m] = WindowSpec(size, stride)
            continue
        if len(tokens) < 3:
            raise ParseError(lineno, "expected '<modality> <window_start> <label> <confidence>'")
        m = _modality(tokens[0], lineno)
        start = _int(tokens[1], lineno, "window_start")
        if "=" in tokens[2]:
            dist = []
            for item in tokens[2:]:
                name, sep, p = item.partition("=")
                if not sep:
                    raise ParseError(lineno, f"expected '<label>=<p>', got {item!r}")
                dist.append((_label(m, name, lineno), _confidence(p, lineno)))
            # argmax; ties go to the earlier label in taxonomy order
            label, conf = min(dist, key=lambda lc: (-lc[1], lc[0].index))
        elif len(tokens) == 4:
            label, conf = _label(m, tokens[2], lineno), _confidence(tokens[3], lineno)
        else:
            raise ParseError(lineno, "expected '<modality> <window_start> <label> <confidence>'")
        pending.append((lineno, WindowPrediction(m, start, label, conf)))

    seen = set()
    records = []
    for lineno, rec in pending:
        key = (rec.modality, rec.start)
        if key in seen:
            raise DuplicateWindow(rec.start, rec.modality, lineno)
        seen.add(key)
        end = rec.start + specs[rec.modality].size - 1
        if end >= meta.frame_count:
            raise OutOfRange(
                f"line {lineno}: {rec.modality.value} window [{rec.start}, {end}] "
                f"outside a {meta.frame_count}-frame video"
            )
        records.append(rec)
    order = {m: i for i, m in enumerate(Modality)}
    records.sort(key=lambda r: (order[r.modality], r.start))
    return PredictionFile(meta, specs, records)


def serialize_predictions(pf: PredictionFile) -> str:
    out = [f"video {pf.meta.frame_count} {format_fps(pf.meta.fps)}"]
    for m in Modality:
        spec = pf.specs[m]
        out.append(f"window {m.value} {spec.size} {spec.stride}")
    order = {m: i for i, m in enumerate(Modality)}
    for r in sorted(pf.records, key=lambda r: (order[r.modality], r.start)):
        out.append(f"{r.modality.value} {r.start} {r.label.value} {r.confidence!r}")
    return "\n".join(out) + "\n"


def write_report(errors: Sequence[DetectedError], meta: VideoMeta) -> str:
    """Canonical JSON report: identical inputs give byte-identical output."""
    entries = []
    for e in sorted(errors, key=DetectedError.sort_key):
        entries.append(
            {
                "type": e.error_type.value,
                "start_frame": e.interval.start,
                "end_frame": e.interval.end,
                "start_ms": round_ms(e.interval.start, meta),
                "end_ms": round_ms(e.interval.end, meta),
                "trigger_modality": e.trigger_segment.modality.value,
                "trigger_label": e.trigger_segment.label.value,
                "confidence": round(e.trigger_segment.peak_confidence, 6),
                "message": e.message,
            }
        )
    summary = {t.value: 0 for t in ErrorType}
    for e in errors:
        summary[e.error_type.value] += 1
    doc = {
        "video": {"frame_count": meta.frame_count, "fps": format_fps(meta.fps)},
        "errors": entries,
        "summary": summary,
        "total": len(entries),
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def read_report(text: str) -> tuple[VideoMeta, list[DetectedError]]:
    try:
        doc = json.loads(text)
        meta = VideoMeta(int(doc["video"]["frame_count"]), Fraction(doc["video"]["fps"]))
        errors = []
        for e in doc["errors"]:
            modality = Modality(e["trigger_modality"])
            interval = Interval(int(e["start_frame"]), int(e["end_frame"]))
            trigger = Segment(modality, TAXONOMY[modality](e["trigger_label"]), interval, float(e["confidence"]))
            errors.append(DetectedError(ErrorType(e["type"]), interval, trigger, None, e.get("message", "")))
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(0, f"malformed report: {exc}") from None
    return meta, errors


ERROR_TITLES = {
    ErrorType.WHQ_LEXICAL: "WH-question lexical error",
    ErrorType.YNQ_LEXICAL: "Yes/no-question lexical error",
    ErrorType.NEG_LEXICAL: "Negation lexical error",
    ErrorType.COND_LEXICAL: "Conditional lexical error",
    ErrorType.YNQ_BEGINNING: "Yes/no-question timing error (beginning)",
    ErrorType.YNQ_END: "Yes/no-question timing error (end)",
    ErrorType.COND_BEGINNING: "Conditional timing error (beginning)",
    ErrorType.TOPIC_BEGINNING: "Topic timing error (beginning)",
}

HINTS = {
    ErrorType.WHQ_LEXICAL: "WH-signs such as WHO, WHAT, WHERE, WHY and WHEN need furrowed brows "
    "with the head tilted forward while the sign is made.",
    ErrorType.YNQ_LEXICAL: "A yes/no question needs raised brows with the head tilted forward, "
    "held over the question sign.",
    ErrorType.NEG_LEXICAL: "Negative signs such as NOT, NEVER and NONE need a side-to-side head shake "
    "with furrowed brows and a scrunched nose.",
    ErrorType.COND_LEXICAL: "A conditional such as IF-SUPPOSE needs raised brows with the head "
    "tilted slightly to the side.",
    ErrorType.YNQ_BEGINNING: "Start the yes/no-question face together with the question clause.",
    ErrorType.YNQ_END: "Hold the yes/no-question face until the question clause ends, then release it.",
    ErrorType.COND_BEGINNING: "Raise the brows as the conditional clause starts, not partway through it.",
    ErrorType.TOPIC_BEGINNING: "Mark a topic from the start of its clause: raised brows, widened eyes "
    "and the head tilted slightly to the side.",
}


def timestamp(frame: int, meta: VideoMeta) -> str:
    """``mm:ss.t`` for the start of ``frame``."""
    tenths = int((Fraction(frame * 10) / meta.fps + Fraction(1, 2)) // 1)
    minutes, rest = divmod(tenths, 600)
    return f"{minutes:02d}:{rest // 10:02d}.{rest % 10}"


def write_feedback_text(errors: Sequence[DetectedError], meta: VideoMeta) -> str:
    if not errors:
        return "No grammatical errors were found in this video. Well done.\n"
    paragraphs = []
    for e in sorted(errors, key=DetectedError.sort_key):
        when = f"{timestamp(e.interval.start, meta)}-{timestamp(e.interval.end, meta)}"
        paragraphs.append(f"[{when}] {ERROR_TITLES[e.error_type]}: {e.message}.\n{HINTS[e.error_type]}")
    return "\n\n".join(paragraphs) + "\n"
