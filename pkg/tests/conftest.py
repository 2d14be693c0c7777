import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from aslgram.core import FaceLabel, GestureLabel, HeadLabel, Interval, Modality, Segment, VideoMeta

DATA = Path(__file__).parent / "data"

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)


@pytest.fixture
def meta30():
    return VideoMeta(1000, 30)


def seg(modality, label, start, end, peak=0.95):
    return Segment(modality, label, Interval(start, end), peak)


def hands(label, start, end, peak=0.95):
    return seg(Modality.HANDS, label, start, end, peak)


def face(label, start, end, peak=0.95):
    return seg(Modality.FACE, label, start, end, peak)


def head(label, start, end, peak=0.95):
    return seg(Modality.HEAD, label, start, end, peak)


@st.composite
def segment_lists(draw, modality, labels, n_max=300, max_count=12):
    """Arbitrary (not necessarily tiling) segment lists inside an n_max-frame video."""
    count = draw(st.integers(0, max_count))
    out = []
    for _ in range(count):
        a = draw(st.integers(0, n_max - 1))
        b = draw(st.integers(a, min(n_max - 1, a + 60)))
        label = draw(st.sampled_from(labels))
        peak = draw(st.sampled_from([0.5, 0.8, 0.81, 0.9, 1.0]))
        out.append(Segment(modality, label, Interval(a, b), peak))
    return out


HAND_LABELS = [GestureLabel.WHQ, GestureLabel.YNQ, GestureLabel.NEGATIVE, GestureLabel.CONDITIONAL,
               GestureLabel.CLAUSE_BOUNDARY, GestureLabel.POINTING]
FACE_LABELS = list(FaceLabel)
HEAD_LABELS = list(HeadLabel)
