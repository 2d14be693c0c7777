"""End-to-end detection: window predictions -> votes -> finals -> segments -> errors."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .core import DetectedError, Modality, RuleThresholds, Segment, VideoMeta
from .rules import detect_errors
from .segments import PruneConfig, extract_segments, prune_segments
from .voting import VotingConfig, vote_stream
from .windows import DEFAULT_SPECS, WindowPrediction, WindowSpec, accumulate_votes


@dataclass(frozen=True)
class PipelineConfig:
    specs: Mapping[Modality, WindowSpec] = field(default_factory=lambda: dict(DEFAULT_SPECS))
    voting: VotingConfig = VotingConfig()
    prune: PruneConfig = PruneConfig()
    thresholds: RuleThresholds = RuleThresholds()


@dataclass
class PipelineResult:
    segments: dict  # Modality -> pruned segments
    errors: list


def modality_segments(
    predictions: Iterable[WindowPrediction], spec: WindowSpec, meta: VideoMeta, modality: Modality,
    voting: VotingConfig = VotingConfig(), prune: PruneConfig = PruneConfig(),
) -> list[Segment]:
    votes = accumulate_votes(predictions, spec, meta)
    finals = vote_stream(votes, voting)
    return prune_segments(extract_segments(finals, votes, modality), prune)


def run_pipeline(
    predictions: Iterable[WindowPrediction],
    meta: VideoMeta,
    config: PipelineConfig = PipelineConfig(),
    parallel: bool = False,
) -> PipelineResult:
    by_modality = {m: [] for m in Modality}
    for p in predictions:
        by_modality[p.modality].append(p)

    def one(m):
        return modality_segments(by_modality[m], config.specs[m], meta, m, config.voting, config.prune)

    if parallel:
        with ThreadPoolExecutor(max_workers=3) as pool:
            segments = dict(zip(Modality, pool.map(one, Modality)))
    else:
        segments = {m: one(m) for m in Modality}
    errors = detect_errors(
        segments[Modality.HANDS], segments[Modality.FACE], segments[Modality.HEAD], meta, config.thresholds
    )
    return PipelineResult(segments, errors)


def detect(predictions, meta: VideoMeta, config: PipelineConfig = PipelineConfig()) -> list[DetectedError]:
    return run_pipeline(predictions, meta, config).errors
