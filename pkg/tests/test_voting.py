import random

import pytest
from hypothesis import given, settings, strategies as st

from aslgram.core import GestureLabel as G
from aslgram.errors import EmptyVotes
from aslgram.voting import VotingConfig, majority_vote_frame, vote_stream
from aslgram.windows import FrameVoteList

from reference import reference_vote

LOWEST = VotingConfig(tie_break="lowest")


def fv(frame, *labels):
    return FrameVoteList(frame, [(lab, 0.9) for lab in labels])


def test_unique_majority():
    assert majority_vote_frame(fv(4, G.WHQ, G.WHQ, G.YNQ), [G.YNQ] * 4).label == G.WHQ


def test_tie_uses_previous_final():
    out = majority_vote_frame(fv(3, G.WHQ, G.YNQ), [G.OTHERS, G.OTHERS, G.YNQ])
    assert out.label == G.YNQ and out.tie_broken


def test_tie_without_history_match_lowest_index():
    # CONDITIONAL precedes NEGATIVE in taxonomy order
    out = majority_vote_frame(fv(3, G.NEGATIVE, G.CONDITIONAL), [G.TIME] * 3, LOWEST)
    assert out.label == G.CONDITIONAL


def test_lookback_stops_at_three():
    previous = [G.YNQ, G.OTHERS, G.OTHERS, G.OTHERS]
    assert majority_vote_frame(fv(4, G.WHQ, G.YNQ), previous, LOWEST).label == G.YNQ  # YNQ < WHQ anyway
    assert majority_vote_frame(fv(4, G.WHQ, G.NEGATIVE), [G.WHQ] + [G.OTHERS] * 3, LOWEST).label == G.NEGATIVE


def test_first_match_at_smallest_lag():
    previous = [G.WHQ, G.YNQ]
    assert majority_vote_frame(fv(2, G.WHQ, G.YNQ), previous, LOWEST).label == G.YNQ


def test_empty_votes():
    with pytest.raises(EmptyVotes) as info:
        vote_stream([fv(0, G.WHQ), FrameVoteList(1, [])])
    assert info.value.frame == 1


def test_constant_stream():
    finals = vote_stream([fv(i, G.TIME) for i in range(10)])
    assert [f.label for f in finals] == [G.TIME] * 10


def test_tie_inherits_through_lookback():
    finals = vote_stream([fv(0, G.CONDITIONAL, G.NEGATIVE), fv(1, G.CONDITIONAL, G.NEGATIVE)], LOWEST)
    assert [f.label for f in finals] == [G.CONDITIONAL, G.CONDITIONAL]


def test_config_validation():
    with pytest.raises(ValueError):
        VotingConfig(lookback=0)
    with pytest.raises(ValueError):
        VotingConfig(tie_break="coin")


def _random_stream(rng, n, labels=(G.WHQ, G.YNQ, G.NEGATIVE, G.OTHERS)):
    return [[rng.choice(labels) for _ in range(rng.randint(1, 6))] for _ in range(n)]


def test_matches_reference_on_1000_frames():
    rng = random.Random(11)
    stream = _random_stream(rng, 1000)
    for mode, seed in (("seeded", 5), ("lowest", 0)):
        got = vote_stream([fv(i, *labels) for i, labels in enumerate(stream)], VotingConfig(3, mode, seed))
        assert [f.label for f in got] == reference_vote(stream, 3, seed, mode)


label_lists = st.lists(st.lists(st.sampled_from([G.WHQ, G.YNQ, G.OTHERS]), min_size=1, max_size=5), min_size=1, max_size=60)


@given(label_lists, st.integers(0, 1000))
def test_determinism(stream, seed):
    votes = [fv(i, *labels) for i, labels in enumerate(stream)]
    config = VotingConfig(seed=seed)
    assert vote_stream(votes, config) == vote_stream(votes, config)


@given(label_lists)
def test_majority_soundness_and_membership(stream):
    finals = vote_stream([fv(i, *labels) for i, labels in enumerate(stream)])
    for labels, final in zip(stream, finals):
        assert final.label in labels
        for lab in set(labels):
            if labels.count(lab) * 2 > len(labels):
                assert final.label == lab


@settings(max_examples=200)
@given(label_lists, st.data())
def test_lookback_bound(stream, data):
    """Finals older than the lookback window never influence the current frame."""
    i = len(stream) - 1
    votes = fv(i, *stream[i])
    finals = [f.label for f in vote_stream([fv(k, *labels) for k, labels in enumerate(stream)], LOWEST)]
    mutated = list(finals)
    for k in range(max(0, i - 3)):
        mutated[k] = data.draw(st.sampled_from([G.WHQ, G.YNQ, G.OTHERS, G.TIME]))
    assert majority_vote_frame(votes, finals, LOWEST) == majority_vote_frame(votes, mutated, LOWEST)
