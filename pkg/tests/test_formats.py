import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from aslgram.core import DetectedError, ErrorType as E, GestureLabel as G, Interval, Modality, Segment, VideoMeta
from aslgram.errors import ConfidenceRange, DuplicateWindow, OutOfRange, OverlapError, ParseError, UnknownLabel
from aslgram.formats import (
    TIER_LABELS, AnnotationTimeline, PredictionFile, Span, load_predictions, parse_annotations, read_report,
    serialize_annotations, serialize_predictions, timestamp, write_feedback_text, write_report,
)
from aslgram.windows import WindowPrediction, WindowSpec

META = VideoMeta(1800, 30)


def test_parse_wanted_word():
    tl = parse_annotations("# demo\nvideo 1800 30\nwanted_words whq 95 112\n")
    assert tl.meta == META
    assert tl.spans("wanted_words") == [Span(Interval(95, 112), "whq")]


def test_parse_reversed_interval():
    with pytest.raises(ParseError) as info:
        parse_annotations("video 1800 30\nfacial_expressions ynq 200 150\n")
    assert info.value.line == 2


def test_parse_overlap():
    with pytest.raises(OverlapError) as info:
        parse_annotations("video 1800 30\nclause clause_boundary 10 12\nclause clause_boundary 11 14\n")
    assert info.value.tier == "clause"


def test_parse_unknown_label():
    with pytest.raises(UnknownLabel) as info:
        parse_annotations("video 100 30\nwanted_words maybe 1 2\n")
    assert (info.value.tier, info.value.label, info.value.line) == ("wanted_words", "maybe", 2)


@pytest.mark.parametrize(
    "text, line",
    [
        ("", 0),
        ("wanted_words whq 1 2\n", 1),
        ("video x 30\n", 1),
        ("video 100 30\nwanted_words whq 1\n", 2),
        ("video 100 30\nwanted_words whq a 2\n", 2),
        ("video 100 30\nwanted_words whq 90 100\n", 2),
        ("video 100 30\nvideo 100 30\n", 2),
    ],
)
def test_parse_malformed(text, line):
    with pytest.raises(ParseError) as info:
        parse_annotations(text)
    assert info.value.line == line


def test_face_aliases_and_unknown_tiers():
    tl = parse_annotations("video 100 29.97\nfacial_expressions topic 1 20\ngloss WILL 3 9\n")
    assert tl.meta.fps == Fraction(2997, 100)
    assert tl.spans("gloss") == [Span(Interval(3, 9), "WILL")]


@st.composite
def timelines(draw):
    n = draw(st.integers(10, 400))
    fps = draw(st.sampled_from([Fraction(30), Fraction(25), Fraction(30000, 1001)]))
    tiers = {}
    for tier in draw(st.lists(st.sampled_from(list(TIER_LABELS) + ["notes"]), unique=True, max_size=5)):
        spans, pos = [], draw(st.integers(0, 5))
        while pos < n - 1 and draw(st.booleans()):
            end = min(n - 1, pos + draw(st.integers(0, 30)))
            labels = sorted(TIER_LABELS.get(tier, {"free_text"}))
            spans.append(Span(Interval(pos, end), draw(st.sampled_from(labels))))
            pos = end + 1 + draw(st.integers(0, 10))
        tiers[tier] = spans
    return AnnotationTimeline(VideoMeta(n, fps), tiers)


@given(timelines())
def test_annotation_round_trip(tl):
    assert parse_annotations(serialize_annotations(tl)) == tl


def test_load_prediction_line():
    pf = load_predictions("video 1800 30\nhands 42 whq 0.93\n")
    assert pf.records == [WindowPrediction(Modality.HANDS, 42, G.WHQ, 0.93)]


def test_load_distribution_line():
    pf = load_predictions("video 100 30\nhands 2 whq=0.2 ynq=0.7 others=0.1\n")
    assert pf.records == [WindowPrediction(Modality.HANDS, 2, G.YNQ, 0.7)]


def test_confidence_range():
    with pytest.raises(ConfidenceRange):
        load_predictions("video 1800 30\nface 0 ynq 1.2\n")


def test_duplicate_window():
    with pytest.raises(DuplicateWindow) as info:
        load_predictions("video 1800 30\nhead 10 others 0.9\nhead 10 tilt_forward 0.9\n")
    assert info.value.line == 3


def test_window_out_of_video():
    with pytest.raises(OutOfRange):
        load_predictions("video 40 30\nface 10 ynq 0.9\n")


@pytest.mark.parametrize(
    "line",
    ["hands 4 whq", "hand 4 whq 0.9", "hands -4 whq 0.9", "hands 4 whq high", "window hands 8", "hands 4 whq 0.5 x"],
)
def test_prediction_malformed(line):
    with pytest.raises(ParseError):
        load_predictions("video 100 30\n" + line + "\n")


def test_prediction_unknown_label():
    with pytest.raises(UnknownLabel):
        load_predictions("video 100 30\nhead 4 nod 0.9\n")


@st.composite
def prediction_files(draw):
    n = draw(st.integers(40, 200))
    specs = {m: WindowSpec(draw(st.sampled_from([4, 8, 32])), draw(st.integers(1, 3))) for m in Modality}
    records = []
    for m in Modality:
        starts = draw(st.lists(st.integers(0, n - specs[m].size), unique=True, max_size=10))
        for s in starts:
            label = draw(st.sampled_from(list(type(G.OTHERS) if m is Modality.HANDS else __import__("aslgram.core").core.TAXONOMY[m])))
            records.append(WindowPrediction(m, s, label, draw(st.floats(0, 1))))
    pf = load_predictions(serialize_predictions(PredictionFile(VideoMeta(n, 30), specs, records)))
    return pf


@given(prediction_files())
def test_prediction_round_trip(pf):
    assert load_predictions(serialize_predictions(pf)) == pf


def _err(kind, a, b, label=G.WHQ, conf=0.9):
    iv = Interval(a, b)
    return DetectedError(kind, iv, Segment(Modality.HANDS, label, iv, conf), None, "msg")


def test_report_empty():
    doc = json.loads(write_report([], META))
    assert doc["summary"] == {t.value: 0 for t in E}
    assert doc["errors"] == [] and doc["total"] == 0


def test_report_ms_rounding():
    doc = json.loads(write_report([_err(E.WHQ_LEXICAL, 100, 110)], META))
    entry = doc["errors"][0]
    assert (entry["start_ms"], entry["end_ms"]) == (3333, 3667)
    assert entry["type"] == "whq_lexical" and entry["trigger_label"] == "whq"


def test_report_byte_identical_and_readable():
    errs = [_err(E.WHQ_LEXICAL, 100, 110), _err(E.NEG_LEXICAL, 10, 20, G.NEGATIVE)]
    text = write_report(errs, META)
    assert text == write_report(list(reversed(errs)), META)
    meta, back = read_report(text)
    assert meta == META
    assert [(e.error_type, e.interval) for e in back] == [(E.NEG_LEXICAL, Interval(10, 20)), (E.WHQ_LEXICAL, Interval(100, 110))]


def test_read_report_malformed():
    with pytest.raises(ParseError):
        read_report("{}")


def test_timestamp():
    assert timestamp(100, META) == "00:03.3"
    assert timestamp(1800, META) == "01:00.0"


def test_feedback():
    assert "No grammatical errors" in write_feedback_text([], META)
    text = write_feedback_text([_err(E.WHQ_LEXICAL, 100, 110)], META)
    assert "00:03.3" in text and "furrowed brows" in text and "tilted forward" in text
    many = [_err(kind, 100 * i, 100 * i + 5) for i, kind in enumerate(reversed(list(E)), start=1)]
    paragraphs = write_feedback_text(many, META).strip().split("\n\n")
    assert len(paragraphs) == 8
    assert [p.split("]")[0] for p in paragraphs] == sorted(p.split("]")[0] for p in paragraphs)


def test_empty_tier_declaration():
    tl = parse_annotations("video 100 30\ntier head_movements\n")
    assert tl.tiers == {"head_movements": []}
    assert "tier head_movements" in serialize_annotations(tl)
