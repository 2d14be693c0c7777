"""Per-frame majority voting with history-based tie resolution."""

from __future__ import annotations

import random
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Sequence

from .core import Label
from .errors import EmptyVotes
from .windows import FrameVoteList

TIE_BREAKS = ("seeded", "lowest")


@dataclass(frozen=True)
class VotingConfig:
    lookback: int = 3
    # "seeded": uniform draw from the tied labels; "lowest": first in taxonomy order
    tie_break: str = "seeded"
    seed: int = 0

    def __post_init__(self):
        if self.lookback < 1:
            raise ValueError("lookback must be >= 1")
        if self.tie_break not in TIE_BREAKS:
            raise ValueError(f"tie_break must be one of {TIE_BREAKS}, got {self.tie_break!r}")


@dataclass(frozen=True)
class FrameLabel:
    frame: int
    label: Label
    tie_broken: bool = False


def majority_vote_frame(
    votes: FrameVoteList,
    previous: Sequence[Label],
    config: VotingConfig = VotingConfig(),
    rng: Optional[random.Random] = None,
) -> FrameLabel:
    """Final label of frame ``votes.frame`` given the final labels of frames before it.

    ``previous[k]`` is the final label of frame k. When several labels share
    the top count, the most recent of the last ``lookback`` finals that is
    among them wins; otherwise the configured tie-break decides. Tied
    candidates are put in taxonomy order before any random draw so a shared
    seed gives a shared answer.
    """
    if not votes.votes:
        raise EmptyVotes(votes.frame)
    counts = Counter(label for label, _ in votes.votes)
    top = max(counts.values())
    tied = [label for label, c in counts.items() if c == top]
    if len(tied) == 1:
        return FrameLabel(votes.frame, tied[0])

    i = votes.frame
    for j in range(1, config.lookback + 1):
        if i - j < 0:
            break
        if previous[i - j] in tied:
            return FrameLabel(votes.frame, previous[i - j], tie_broken=True)

    tied.sort(key=lambda label: label.index)
    if config.tie_break == "lowest":
        return FrameLabel(votes.frame, tied[0], tie_broken=True)
    if rng is None:
        rng = random.Random(config.seed)
    return FrameLabel(votes.frame, rng.choice(tied), tie_broken=True)


def vote_stream(all_votes: Sequence[FrameVoteList], config: VotingConfig = VotingConfig()) -> list[FrameLabel]:
    rng = random.Random(config.seed)
    finals: list[Label] = []
    out: list[FrameLabel] = []
    for expected, frame_votes in enumerate(all_votes):
        if frame_votes.frame != expected:
            raise ValueError(f"vote lists out of order at position {expected}")
        result = majority_vote_frame(frame_votes, finals, config, rng)
        finals.append(result.label)
        out.append(result)
    return out
