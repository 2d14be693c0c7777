"""Lexical and timing grammar rules over pruned segments of the three modalities."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import (
    DetectedError,
    ErrorType,
    FaceLabel,
    GestureLabel,
    HeadLabel,
    Interval,
    RuleThresholds,
    Segment,
    VideoMeta,
    interval_gap,
    within_ms,
)


@dataclass(frozen=True)
class EvidenceRule:
    trigger: GestureLabel
    error_type: ErrorType
    acceptable_face: frozenset
    acceptable_head: frozenset

    def __post_init__(self):
        if self.trigger not in LEXICAL_TRIGGERS:
            raise ValueError(f"{self.trigger} is not a lexical trigger")


LEXICAL_TRIGGERS = (GestureLabel.WHQ, GestureLabel.YNQ, GestureLabel.NEGATIVE, GestureLabel.CONDITIONAL)

DEFAULT_RULES = (
    EvidenceRule(
        GestureLabel.WHQ,
        ErrorType.WHQ_LEXICAL,
        # RHQ is only observable through the merged class, so the whole class is accepted
        frozenset({FaceLabel.WHQ, FaceLabel.COND_TOPIC_RHQ}),
        frozenset({HeadLabel.TILT_FORWARD, HeadLabel.TILT_SLIGHT_SIDE}),
    ),
    EvidenceRule(
        GestureLabel.YNQ,
        ErrorType.YNQ_LEXICAL,
        frozenset({FaceLabel.YNQ}),
        frozenset({HeadLabel.TILT_FORWARD}),
    ),
    EvidenceRule(
        GestureLabel.NEGATIVE,
        ErrorType.NEG_LEXICAL,
        frozenset({FaceLabel.NEGATIVE}),
        frozenset({HeadLabel.SHAKE_SIDE_TO_SIDE}),
    ),
    EvidenceRule(
        GestureLabel.CONDITIONAL,
        ErrorType.COND_LEXICAL,
        frozenset({FaceLabel.COND_TOPIC_RHQ}),
        frozenset({HeadLabel.TILT_SLIGHT_SIDE}),
    ),
)

RULE_FOR = {rule.error_type: rule for rule in DEFAULT_RULES}


class CtrReading(enum.Enum):
    CONDITIONAL = "conditional"
    TOPIC = "topic"
    RHQ = "rhq"


_SIGN_NAMES = {
    GestureLabel.WHQ: "WH-question sign",
    GestureLabel.YNQ: "yes/no-question sign",
    GestureLabel.NEGATIVE: "negative sign",
    GestureLabel.CONDITIONAL: "conditional sign",
}

_EXPECTED = {
    ErrorType.WHQ_LEXICAL: "a WH-question or rhetorical-question nonmanual",
    ErrorType.YNQ_LEXICAL: "a yes/no-question nonmanual",
    ErrorType.NEG_LEXICAL: "a negation nonmanual",
    ErrorType.COND_LEXICAL: "a conditional nonmanual",
}

_TIMING_WHAT = {
    ErrorType.YNQ_BEGINNING: "yes/no-question nonmanual begins",
    ErrorType.YNQ_END: "yes/no-question nonmanual ends",
    ErrorType.COND_BEGINNING: "conditional nonmanual begins",
    ErrorType.TOPIC_BEGINNING: "topic nonmanual begins",
}


def _nearest(target: Interval, candidates: Sequence):
    """(gap, candidate) of the closest candidate, earliest on ties; (None, None) if empty."""
    best = (None, None)
    for c in candidates:
        iv = c.interval if isinstance(c, Segment) else c
        gap = interval_gap(target, iv)
        if best[0] is None or gap < best[0]:
            best = (gap, c)
    return best


def clause_boundary_points(
    hand_segments: Sequence[Segment], meta: VideoMeta, t: RuleThresholds = RuleThresholds()
) -> list[Interval]:
    points = {s.interval for s in hand_segments if s.label == GestureLabel.CLAUSE_BOUNDARY}
    if t.implicit_boundaries:
        points.add(Interval.point(0))
        points.add(Interval.point(meta.last_frame))
    return sorted(points)


def check_lexical(
    rule: EvidenceRule,
    hands: Sequence[Segment],
    face: Sequence[Segment],
    head: Sequence[Segment],
    meta: VideoMeta,
    t: RuleThresholds = RuleThresholds(),
) -> list[DetectedError]:
    face_ev = [s for s in face if s.label in rule.acceptable_face]
    head_ev = [s for s in head if s.label in rule.acceptable_head]
    found = []
    for sign in hands:
        if sign.label != rule.trigger or not sign.peak_confidence > t.evidence_confidence:
            continue

        def near(segs):
            return any(within_ms(interval_gap(sign.interval, s.interval), t.lexical_ms, meta) for s in segs)

        face_ok, head_ok = near(face_ev), near(head_ev)
        ok = (face_ok or head_ok) if t.evidence_mode == "any" else (face_ok and head_ok)
        if ok:
            continue
        gap, closest = _nearest(sign.interval, face_ev + head_ev)
        message = f"{_SIGN_NAMES[rule.trigger]} without {_EXPECTED[rule.error_type]} within {t.lexical_ms:g} ms"
        if closest is not None:
            message += f" (closest is {gap} frames away)"
        found.append(DetectedError(rule.error_type, sign.interval, sign, closest, message))
    return found


def disambiguate_ctr(
    face_segment: Segment, hands: Sequence[Segment], meta: VideoMeta, t: RuleThresholds = RuleThresholds()
) -> CtrReading:
    """Decide whether a Cond/Topic/RHQ face segment marks a conditional, a rhetorical question or a topic."""
    if face_segment.label != FaceLabel.COND_TOPIC_RHQ:
        raise ValueError(f"expected a cond_topic_rhq segment, got {face_segment.label}")
    for h in hands:
        if h.label == GestureLabel.CONDITIONAL and within_ms(
            interval_gap(h.interval, face_segment.interval), t.ctr_link_ms, meta
        ):
            return CtrReading.CONDITIONAL
    for h in hands:
        if h.label in (GestureLabel.WHQ, GestureLabel.YNQ) and face_segment.interval.contains(h.interval):
            return CtrReading.RHQ
    return CtrReading.TOPIC


def check_timing(
    face: Sequence[Segment],
    head: Sequence[Segment],
    hands: Sequence[Segment],
    meta: VideoMeta,
    t: RuleThresholds = RuleThresholds(),
) -> list[DetectedError]:
    boundaries = clause_boundary_points(hands, meta, t)
    boundary_segs = [s for s in hands if s.label == GestureLabel.CLAUSE_BOUNDARY]
    found = []

    def test(kind: ErrorType, seg: Segment, frame: int):
        # with no boundaries at all, every anchor is "too far"
        point = Interval.point(frame)
        if any(within_ms(interval_gap(point, b), t.timing_ms, meta) for b in boundaries):
            return
        gap, _ = _nearest(point, boundaries)
        _, closest_seg = _nearest(point, boundary_segs)
        message = f"{_TIMING_WHAT[kind]} more than {t.timing_ms:g} ms from a clause boundary"
        if gap is not None:
            message += f" (nearest is {gap} frames away)"
        found.append(DetectedError(kind, seg.interval, seg, closest_seg, message))

    for seg in face:
        if not seg.peak_confidence > t.evidence_confidence:
            continue
        if seg.label == FaceLabel.YNQ:
            test(ErrorType.YNQ_BEGINNING, seg, seg.start)
            test(ErrorType.YNQ_END, seg, seg.end)
        elif seg.label == FaceLabel.COND_TOPIC_RHQ:
            reading = disambiguate_ctr(seg, hands, meta, t)
            if reading is CtrReading.CONDITIONAL:
                test(ErrorType.COND_BEGINNING, seg, seg.start)
            elif reading is CtrReading.TOPIC:
                test(ErrorType.TOPIC_BEGINNING, seg, seg.start)

    ctr_faces = [s for s in face if s.label == FaceLabel.COND_TOPIC_RHQ]
    for seg in head:
        if seg.label != HeadLabel.TILT_SLIGHT_SIDE or not seg.peak_confidence > t.evidence_confidence:
            continue
        if any(interval_gap(seg.interval, f.interval) == 0 for f in ctr_faces):
            continue
        test(ErrorType.TOPIC_BEGINNING, seg, seg.start)
    return found


def detect_errors(
    hands: Sequence[Segment],
    face: Sequence[Segment],
    head: Sequence[Segment],
    meta: VideoMeta,
    t: RuleThresholds = RuleThresholds(),
    rules: Sequence[EvidenceRule] = DEFAULT_RULES,
) -> list[DetectedError]:
    found: list[DetectedError] = []
    for rule in rules:
        found.extend(check_lexical(rule, hands, face, head, meta, t))
    found.extend(check_timing(face, head, hands, meta, t))
    unique = {}
    for err in found:
        unique.setdefault(err.key, err)
    return sorted(unique.values(), key=DetectedError.sort_key)
