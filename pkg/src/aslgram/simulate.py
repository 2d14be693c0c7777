"""Synthetic classifier output, error injection and a span-level reference checker.

The reference checker (``oracle_detect``) reads annotation spans directly and
shares nothing with the detection pipeline except the value types in
``core``; it is what the pipeline is measured against.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

from .core import (
    DetectedError,
    ErrorType,
    FaceLabel,
    GestureLabel,
    HeadLabel,
    Interval,
    Modality,
    RuleThresholds,
    Segment,
    TAXONOMY,
    VideoMeta,
    interval_gap,
    ms_to_frames_ceil,
    within_ms,
)
from .errors import NoEligibleInstance
from .formats import AnnotationTimeline, Span, face_label
from .windows import BATCH_SIZE, DEFAULT_SPECS, WindowPrediction, WindowSpec, batched, enumerate_windows

# Head pose implied by each face annotation label when no head tier exists.
FACE_TO_HEAD = {
    "ynq": HeadLabel.TILT_FORWARD,
    "whq": HeadLabel.TILT_FORWARD,
    "negative": HeadLabel.SHAKE_SIDE_TO_SIDE,
    "conditional": HeadLabel.TILT_SLIGHT_SIDE,
    "topic": HeadLabel.TILT_SLIGHT_SIDE,
    "rhq": HeadLabel.TILT_SLIGHT_SIDE,
    "cond_topic_rhq": HeadLabel.TILT_SLIGHT_SIDE,
}

# painted in this order, later tiers win where they overlap
HAND_TIERS = ("lexical_pointing", "fingerspelling", "wanted_words", "clause")


@dataclass(frozen=True)
class NoiseModel:
    flip: Mapping = field(default_factory=dict)  # Modality -> flip probability
    correct_range: tuple = (0.85, 1.0)
    incorrect_range: tuple = (0.5, 0.9)
    seed: int = 0
    # Modality -> {true label: {predicted label: weight}}; replaces uniform flips where given
    confusion: Optional[Mapping] = None

    def __post_init__(self):
        for p in self.flip.values():
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"flip probability {p} outside [0, 1]")
        for lo, hi in (self.correct_range, self.incorrect_range):
            if not 0.0 <= lo <= hi <= 1.0:
                raise ValueError(f"confidence range ({lo}, {hi}) invalid")

    @classmethod
    def uniform(cls, p: float, seed: int = 0, **kw) -> "NoiseModel":
        return cls(flip={m: p for m in Modality}, seed=seed, **kw)


def derive_frame_truth(timeline: AnnotationTimeline) -> dict:
    n = timeline.meta.frame_count
    hands = [GestureLabel.OTHERS] * n
    for tier in HAND_TIERS:
        for span in timeline.spans(tier):
            label = GestureLabel(span.label)
            for f in range(span.interval.start, span.interval.end + 1):
                hands[f] = label

    face = [FaceLabel.OTHERS] * n
    for span in timeline.spans("facial_expressions"):
        label = face_label(span.label)
        for f in range(span.interval.start, span.interval.end + 1):
            face[f] = label

    head = [HeadLabel.OTHERS] * n
    if "head_movements" in timeline.tiers:
        for span in timeline.spans("head_movements"):
            label = HeadLabel(span.label)
            for f in range(span.interval.start, span.interval.end + 1):
                head[f] = label
    else:
        for span in timeline.spans("facial_expressions"):
            label = FACE_TO_HEAD.get(span.label, HeadLabel.OTHERS)
            for f in range(span.interval.start, span.interval.end + 1):
                head[f] = label
    return {Modality.HANDS: hands, Modality.FACE: face, Modality.HEAD: head}


def synthesize_modality(
    truth: Sequence, modality: Modality, spec: WindowSpec, noise: NoiseModel = NoiseModel(),
    batch_size: int = BATCH_SIZE,
) -> list[WindowPrediction]:
    """One prediction per window, labeled by the truth at the window's center frame."""
    meta = VideoMeta(len(truth))
    labels = list(TAXONOMY[modality])
    rng = random.Random(f"{noise.seed}/{modality.value}")
    p = noise.flip.get(modality, 0.0)
    rows = (noise.confusion or {}).get(modality)
    out = []
    for batch in batched(enumerate_windows(meta, spec), batch_size):
        for start in batch:
            true = truth[spec.center(start)]
            label = true
            if rng.random() < p:
                if rows is not None and true in rows:
                    row = rows[true]
                    label = rng.choices(list(row), weights=list(row.values()))[0]
                else:
                    label = rng.choice([x for x in labels if x != true])
            lo, hi = noise.correct_range if label == true else noise.incorrect_range
            out.append(WindowPrediction(modality, start, label, rng.uniform(lo, hi)))
    return out


def synthesize_predictions(
    truth: Mapping, specs: Mapping = DEFAULT_SPECS, noise: NoiseModel = NoiseModel(),
    batch_size: int = BATCH_SIZE,
) -> list[WindowPrediction]:
    out = []
    for m in Modality:
        out.extend(synthesize_modality(truth[m], m, specs[m], noise, batch_size))
    return out


# ---------------------------------------------------------------------------
# reference checker over annotation spans

_LEXICAL = {
    "whq": (ErrorType.WHQ_LEXICAL, {"whq", "rhq", "conditional", "topic", "cond_topic_rhq"},
            {"tilt_forward", "tilt_slight_side"}),
    "ynq": (ErrorType.YNQ_LEXICAL, {"ynq"}, {"tilt_forward"}),
    "negative": (ErrorType.NEG_LEXICAL, {"negative"}, {"shake_side_to_side"}),
    "conditional": (ErrorType.COND_LEXICAL, {"conditional", "topic", "rhq", "cond_topic_rhq"},
                    {"tilt_slight_side"}),
}
_CTR_FAMILY = {"conditional", "topic", "rhq", "cond_topic_rhq"}


def _head_spans(timeline: AnnotationTimeline) -> list:
    if "head_movements" in timeline.tiers:
        return list(timeline.spans("head_movements"))
    return [
        Span(s.interval, FACE_TO_HEAD[s.label].value)
        for s in timeline.spans("facial_expressions")
        if s.label in FACE_TO_HEAD
    ]


def _boundaries(timeline: AnnotationTimeline, t: RuleThresholds) -> list:
    points = [s.interval for s in timeline.spans("clause")]
    if t.implicit_boundaries:
        points += [Interval.point(0), Interval.point(timeline.meta.last_frame)]
    return points


def face_reading(span: Span, timeline: AnnotationTimeline, t: RuleThresholds = RuleThresholds()) -> str:
    """Fine reading of a face span; merged-class spans are resolved from the signs around them."""
    if span.label != "cond_topic_rhq":
        return span.label
    words = timeline.spans("wanted_words")
    if any(w.label == "conditional" and within_ms(interval_gap(w.interval, span.interval), t.ctr_link_ms, timeline.meta)
           for w in words):
        return "conditional"
    if any(w.label in ("whq", "ynq") and span.interval.contains(w.interval) for w in words):
        return "rhq"
    return "topic"


def _seg(modality: Modality, label: str, interval: Interval) -> Segment:
    if modality is Modality.FACE:
        parsed = face_label(label)
    else:
        parsed = TAXONOMY[modality](label)
    return Segment(modality, parsed, interval, 1.0)


def oracle_detect(timeline: AnnotationTimeline, t: RuleThresholds = RuleThresholds()) -> list[DetectedError]:
    meta = timeline.meta
    faces = timeline.spans("facial_expressions")
    heads = _head_spans(timeline)
    found = {}

    def close(a: Interval, b: Interval, ms) -> bool:
        return within_ms(interval_gap(a, b), ms, meta)

    for w in timeline.spans("wanted_words"):
        if w.label not in _LEXICAL:
            continue
        kind, face_ok, head_ok = _LEXICAL[w.label]
        by_face = any(f.label in face_ok and close(w.interval, f.interval, t.lexical_ms) for f in faces)
        by_head = any(h.label in head_ok and close(w.interval, h.interval, t.lexical_ms) for h in heads)
        satisfied = (by_face or by_head) if t.evidence_mode == "any" else (by_face and by_head)
        if not satisfied:
            found.setdefault((kind, w.interval), DetectedError(kind, w.interval, _seg(Modality.HANDS, w.label, w.interval)))

    boundaries = _boundaries(timeline, t)

    def far(frame: int) -> bool:
        return not any(close(Interval.point(frame), b, t.timing_ms) for b in boundaries)

    def add(kind, modality, span):
        found.setdefault((kind, span.interval), DetectedError(kind, span.interval, _seg(modality, span.label, span.interval)))

    for f in faces:
        reading = face_reading(f, timeline, t)
        if reading == "ynq":
            if far(f.interval.start):
                add(ErrorType.YNQ_BEGINNING, Modality.FACE, f)
            if far(f.interval.end):
                add(ErrorType.YNQ_END, Modality.FACE, f)
        elif reading == "conditional" and far(f.interval.start):
            add(ErrorType.COND_BEGINNING, Modality.FACE, f)
        elif reading == "topic" and far(f.interval.start):
            add(ErrorType.TOPIC_BEGINNING, Modality.FACE, f)

    for h in heads:
        if h.label != "tilt_slight_side":
            continue
        if any(f.label in _CTR_FAMILY and f.interval.overlaps(h.interval) for f in faces):
            continue
        if far(h.interval.start):
            add(ErrorType.TOPIC_BEGINNING, Modality.HEAD, h)

    return sorted(found.values(), key=DetectedError.sort_key)


# ---------------------------------------------------------------------------
# error injection

_TRIGGER_WORD = {
    ErrorType.WHQ_LEXICAL: "whq",
    ErrorType.YNQ_LEXICAL: "ynq",
    ErrorType.NEG_LEXICAL: "negative",
    ErrorType.COND_LEXICAL: "conditional",
}
_TIMING_READING = {
    ErrorType.YNQ_BEGINNING: "ynq",
    ErrorType.YNQ_END: "ynq",
    ErrorType.COND_BEGINNING: "conditional",
    ErrorType.TOPIC_BEGINNING: "topic",
}
INJECTION_MARGIN_MS = 500


def _keys(errors) -> list:
    return sorted((e.error_type.value, e.interval.start, e.interval.end) for e in errors)


def _lexical_candidate(timeline, word: Span, t: RuleThresholds):
    meta = timeline.meta
    out = timeline.copy()
    for tier in ("facial_expressions", "head_movements"):
        if tier in out.tiers:
            out.tiers[tier] = [
                s for s in out.tiers[tier]
                if not within_ms(interval_gap(s.interval, word.interval), t.lexical_ms, meta)
            ]
    return out, word.interval


def _timing_candidate(timeline, face: Span, target: ErrorType, t: RuleThresholds):
    meta = timeline.meta
    need = ms_to_frames_ceil(t.timing_ms + INJECTION_MARGIN_MS, meta)
    boundaries = _boundaries(timeline, t)

    def clear(frame):
        return all(interval_gap(Interval.point(frame), b) >= need for b in boundaries)

    start, end = face.interval.start, face.interval.end
    if target is ErrorType.YNQ_END:
        moved = next((q for q in range(end, start - 1, -1) if clear(q)), None)
        if moved is None:
            return None
        new = Interval(start, moved)
    else:
        moved = next((p for p in range(start, end + 1) if clear(p)), None)
        if moved is None:
            return None
        new = Interval(moved, end)
    out = timeline.copy()
    out.tiers["facial_expressions"] = sorted(
        Span(new, s.label) if s == face else s for s in out.tiers["facial_expressions"]
    )
    if "head_movements" in out.tiers:
        out.tiers["head_movements"] = sorted(
            Span(new, s.label) if s.interval == face.interval else s for s in out.tiers["head_movements"]
        )
    return out, new


def inject_error(
    timeline: AnnotationTimeline, target: ErrorType, seed: int = 0, t: RuleThresholds = RuleThresholds()
) -> AnnotationTimeline:
    """Introduce one error of ``target`` and record it on the "errors" tier.

    Lexical targets delete every face and head span near one trigger sign.
    Timing targets shrink one face span so its start (or its end, for
    YNQ_END) lies at least the timing threshold plus 500 ms from every clause
    boundary. A candidate edit is kept only if the reference checker then
    reports exactly the previous errors plus the injected one, which also
    keeps injections into different sentences independent of each other.
    """
    rng = random.Random(f"{seed}/{target.value}")
    taken = [s.interval for s in timeline.spans("errors")]
    if target.is_lexical:
        pool = [w for w in timeline.spans("wanted_words") if w.label == _TRIGGER_WORD[target]]
    else:
        want = _TIMING_READING[target]
        pool = [f for f in timeline.spans("facial_expressions") if face_reading(f, timeline, t) == want]
    pool = sorted(pool)
    rng.shuffle(pool)

    before = _keys(oracle_detect(timeline, t))
    for span in pool:
        if any(span.interval.overlaps(iv) for iv in taken):
            continue
        made = _lexical_candidate(timeline, span, t) if target.is_lexical else _timing_candidate(timeline, span, target, t)
        if made is None:
            continue
        out, where = made
        if any(where.overlaps(iv) for iv in taken):
            continue
        expected = sorted(before + [(target.value, where.start, where.end)])
        if _keys(oracle_detect(out, t)) != expected:
            continue
        out.tiers.setdefault("errors", [])
        out.tiers["errors"] = sorted(out.tiers["errors"] + [Span(where, target.value)])
        return out
    raise NoEligibleInstance(target)


# ---------------------------------------------------------------------------
# synthetic passages

# sentence templates at 30 fps: (length, face span or None, [(tier, label, start, end), ...])
SENTENCES = {
    "neutral": (90, None, [("lexical_pointing", "pointing", 10, 19), ("wanted_words", "time", 40, 51)]),
    "whq": (120, ("whq", 0, 119), [("lexical_pointing", "pointing", 12, 21), ("wanted_words", "whq", 50, 61)]),
    "rhq": (150, ("rhq", 0, 149), [("lexical_pointing", "pointing", 20, 29), ("wanted_words", "whq", 60, 71)]),
    "ynq": (150, ("ynq", 0, 149), [("lexical_pointing", "pointing", 15, 24), ("wanted_words", "ynq", 70, 81)]),
    # question-final sign held under a sentence-long nonmanual
    "ynq_final": (150, ("ynq", 0, 149), [("lexical_pointing", "pointing", 15, 24), ("wanted_words", "ynq", 128, 139)]),
    "neg": (120, ("negative", 0, 119), [("lexical_pointing", "pointing", 12, 21), ("wanted_words", "negative", 50, 61)]),
    "cond": (150, ("conditional", 0, 149), [("wanted_words", "conditional", 60, 71), ("wanted_words", "time", 100, 111)]),
    "topic": (150, ("topic", 0, 89), [("fingerspelling", "fingerspelling", 20, 35), ("lexical_pointing", "pointing", 110, 119)]),
}

# eight disjoint sentences able to host one error of each type, plus fillers
DEFAULT_KINDS = (
    "neutral", "whq", "ynq", "ynq", "ynq", "neg", "cond", "cond", "topic", "rhq", "neutral", "ynq_final", "topic",
)

LEAD_FRAMES = 30
BOUNDARY_FRAMES = 20


def _scale(frames: int, fps) -> int:
    return int(round(frames * float(fps) / 30))


def build_passage(
    kinds: Sequence[str] = DEFAULT_KINDS, fps=30, seed: Optional[int] = None, frame_count: Optional[int] = None,
) -> AnnotationTimeline:
    """A multi-sentence annotation timeline with every sentence bracketed by clause boundaries.

    ``seed`` shuffles the sentence order and jitters sign placement by a few
    frames; ``frame_count`` pads the passage with trailing rest frames.
    """
    kinds = list(kinds)
    rng = random.Random(seed) if seed is not None else None
    if rng is not None:
        rng.shuffle(kinds)
    tiers: dict = {}

    def put(tier, label, a, b):
        tiers.setdefault(tier, []).append(Span(Interval(a, b), label))

    pos = _scale(LEAD_FRAMES, fps)
    gap = _scale(BOUNDARY_FRAMES, fps)
    put("clause", "clause_boundary", pos, pos + gap - 1)
    pos += gap
    for kind in kinds:
        length, face, signs = SENTENCES[kind]
        shift = rng.randint(-4, 4) if rng is not None else 0
        extra = rng.randint(0, 10) if rng is not None else 0
        if face is not None:
            label, a, b = face
            b = length - 1 + extra if b == length - 1 else b
            put("facial_expressions", label, pos + _scale(a, fps), pos + _scale(b, fps))
        for tier, label, a, b in signs:
            put(tier, label, pos + _scale(a + shift, fps), pos + _scale(b + shift, fps))
        pos += _scale(length + extra, fps)
        put("clause", "clause_boundary", pos, pos + gap - 1)
        pos += gap
    n = pos + _scale(LEAD_FRAMES, fps)
    if frame_count is not None:
        if frame_count < n:
            raise ValueError(f"passage needs {n} frames, only {frame_count} requested")
        n = frame_count
    timeline = AnnotationTimeline(VideoMeta(n, fps), {k: sorted(v) for k, v in tiers.items()})
    return timeline.validate()


def build_workload(frame_count: int, fps=30, seed: int = 0) -> AnnotationTimeline:
    """Passage of cycled sentence kinds filling ``frame_count`` frames (rest frames if too short)."""
    cycle = [k for k in DEFAULT_KINDS]
    kinds: list = []
    while True:
        trial = kinds + [cycle[len(kinds) % len(cycle)]]
        needed = _scale(2 * LEAD_FRAMES + BOUNDARY_FRAMES, fps) + sum(
            _scale(SENTENCES[k][0] + 10, fps) + _scale(BOUNDARY_FRAMES, fps) for k in trial
        )
        if needed > frame_count:
            break
        kinds = trial
    if not kinds:
        return AnnotationTimeline(VideoMeta(frame_count, fps), {})
    return build_passage(kinds, fps, seed, frame_count=frame_count)


def inject_all(timeline: AnnotationTimeline, targets: Sequence[ErrorType], seed: int = 0,
               t: RuleThresholds = RuleThresholds()) -> AnnotationTimeline:
    for i, target in enumerate(targets):
        timeline = inject_error(timeline, target, seed * 1000 + i, t)
    return timeline


# timing edits first: they need specific sentence shapes that lexical edits would consume
INJECTION_ORDER = (
    ErrorType.YNQ_END, ErrorType.YNQ_BEGINNING, ErrorType.COND_BEGINNING, ErrorType.TOPIC_BEGINNING,
    ErrorType.WHQ_LEXICAL, ErrorType.YNQ_LEXICAL, ErrorType.NEG_LEXICAL, ErrorType.COND_LEXICAL,
)
