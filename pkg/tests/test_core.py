import pytest
from fractions import Fraction
from hypothesis import given, strategies as st

from aslgram.core import (
    ErrorType, FaceLabel, GestureLabel, HeadLabel, Interval, Modality, VideoMeta,
    frames_to_ms, interval_gap, ms_to_frames_ceil, parse_label, round_ms, within_ms,
)


@pytest.mark.parametrize("k, expected", [(0, 0.0), (30, 1000.0), (6, 200.0)])
def test_frames_to_ms(k, expected):
    assert frames_to_ms(k, VideoMeta(100, 30)) == expected


def test_frames_to_ms_rejects_negative():
    with pytest.raises(ValueError):
        frames_to_ms(-1, VideoMeta(10))


@pytest.mark.parametrize(
    "a, b, expected",
    [((10, 20), (15, 30), 0), ((0, 4), (5, 9), 1), ((0, 10), (17, 20), 7)],
)
def test_interval_gap_examples(a, b, expected):
    assert interval_gap(Interval(*a), Interval(*b)) == expected


intervals = st.builds(
    lambda a, d: Interval(a, a + d), st.integers(0, 10_000), st.integers(0, 500)
)


@given(intervals, intervals)
def test_gap_symmetric(a, b):
    assert interval_gap(a, b) == interval_gap(b, a)


@given(intervals)
def test_gap_self_is_zero(a):
    assert interval_gap(a, a) == 0


@given(st.integers(0, 10**6), st.integers(0, 10**6), st.sampled_from([24, 25, 30, 60, Fraction(30000, 1001), 29.97]))
def test_frames_to_ms_additive(a, b, fps):
    meta = VideoMeta(1, fps)
    assert frames_to_ms(a + b, meta) == pytest.approx(frames_to_ms(a, meta) + frames_to_ms(b, meta), abs=1e-9, rel=1e-12)


@given(st.integers(0, 10_000), st.integers(0, 10_000))
def test_frames_to_ms_monotone(a, b):
    meta = VideoMeta(1, 30)
    if a <= b:
        assert frames_to_ms(a, meta) <= frames_to_ms(b, meta)


def test_within_ms_is_exact_at_boundary():
    meta = VideoMeta(100, 30)
    assert within_ms(6, 200, meta)
    assert not within_ms(7, 200, meta)
    assert within_ms(30, 1000, meta)
    assert not within_ms(31, 1000, meta)


def test_ms_conversions():
    meta = VideoMeta(100, 30)
    assert ms_to_frames_ceil(1500, meta) == 45
    assert ms_to_frames_ceil(1001, meta) == 31
    assert round_ms(100, meta) == 3333
    assert round_ms(110, meta) == 3667


def test_video_meta_validation():
    with pytest.raises(ValueError):
        VideoMeta(0, 30)
    with pytest.raises(ValueError):
        VideoMeta(10, 0)
    assert VideoMeta(10, 29.97).fps == Fraction(2997, 100)


def test_interval_validation():
    with pytest.raises(ValueError):
        Interval(5, 4)
    with pytest.raises(ValueError):
        Interval(-1, 4)
    assert len(Interval(3, 3)) == 1
    assert Interval(0, 9).fits(VideoMeta(10))
    assert not Interval(0, 10).fits(VideoMeta(10))


def test_taxonomy_sizes():
    assert len(GestureLabel) == 9
    assert len(FaceLabel) == 5
    assert len(HeadLabel) == 4
    assert len(ErrorType) == 8
    assert [t.is_lexical for t in ErrorType] == [True] * 4 + [False] * 4


@given(st.text(max_size=20))
def test_label_parsing_is_closed(text):
    for m in Modality:
        valid = {label.value for label in type(parse_label(m, "others"))}
        if text in valid:
            assert parse_label(m, text).value == text
        else:
            with pytest.raises(ValueError):
                parse_label(m, text)


def test_canonical_spellings():
    assert [g.value for g in GestureLabel] == [
        "conditional", "negative", "ynq", "whq", "time", "pointing", "fingerspelling", "clause_boundary", "others"]
    assert [f.value for f in FaceLabel] == ["cond_topic_rhq", "negative", "ynq", "whq", "others"]
    assert [h.value for h in HeadLabel] == ["shake_side_to_side", "tilt_forward", "tilt_slight_side", "others"]
