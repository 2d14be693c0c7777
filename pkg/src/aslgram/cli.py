"""Command-line entry point.

Exit codes: 0 success with no grammar errors, 3 grammar errors detected,
1 input fault (bad file, invalid option, no eligible injection site).
"""

from __future__ import annotations

import argparse
import dataclasses
import sys
import time
from fractions import Fraction
from pathlib import Path

from .core import ErrorType, Modality, RuleThresholds, VideoMeta
from .errors import GrammarCheckError
from .evaluate import MatchConfig, match_errors
from .formats import (
    PredictionFile,
    load_predictions,
    parse_annotations,
    read_report,
    serialize_annotations,
    serialize_predictions,
    write_feedback_text,
    write_report,
)
from .pipeline import PipelineConfig, run_pipeline
from .segments import PruneConfig
from .simulate import NoiseModel, build_passage, build_workload, derive_frame_truth, inject_error, synthesize_predictions
from .voting import VotingConfig
from .windows import DEFAULT_SPECS, WindowSpec

EXIT_OK = 0
EXIT_FAULT = 1
EXIT_ERRORS_FOUND = 3


class CliFault(Exception):
    pass


def _add_engine_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--fps", type=Fraction, help="override the frame rate from the file header")
    p.add_argument("--conf-threshold", type=float, default=0.8, help="segment pruning and trigger confidence gate")
    p.add_argument("--lexical-ms", type=float, default=200)
    p.add_argument("--timing-ms", type=float, default=1000)
    p.add_argument("--window-hands", type=int)
    p.add_argument("--window-face", type=int)
    p.add_argument("--window-head", type=int)
    p.add_argument("--stride", type=int)
    p.add_argument("--lookback", type=int, default=3)
    p.add_argument("--tie-break", choices=("seeded", "lowest"), default="seeded")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--implicit-boundaries", choices=("on", "off"), default="on")


def _specs(args, base) -> dict:
    specs = dict(base)
    sizes = {Modality.HANDS: args.window_hands, Modality.FACE: args.window_face, Modality.HEAD: args.window_head}
    for m, spec in specs.items():
        size = sizes[m] if sizes[m] is not None else spec.size
        stride = args.stride if args.stride is not None else spec.stride
        specs[m] = WindowSpec(size, stride)
    return specs


def _thresholds(args) -> RuleThresholds:
    return RuleThresholds(
        lexical_ms=args.lexical_ms,
        timing_ms=args.timing_ms,
        evidence_confidence=args.conf_threshold,
        implicit_boundaries=args.implicit_boundaries == "on",
    )


def _pipeline_config(args, base_specs) -> PipelineConfig:
    return PipelineConfig(
        specs=_specs(args, base_specs),
        voting=VotingConfig(args.lookback, args.tie_break, args.seed),
        prune=PruneConfig(args.conf_threshold),
        thresholds=_thresholds(args),
    )


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CliFault(f"{path}: {exc.strerror}") from None


def _emit(text: str, path) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _with_fps(meta: VideoMeta, fps) -> VideoMeta:
    return meta if fps is None else VideoMeta(meta.frame_count, fps)


def cmd_detect(args) -> int:
    try:
        pf = load_predictions(_read(args.predictions))
    except GrammarCheckError as exc:
        raise CliFault(f"{args.predictions}: {exc}") from None
    meta = _with_fps(pf.meta, args.fps)
    result = run_pipeline(pf.records, meta, _pipeline_config(args, pf.specs))
    _emit(write_report(result.errors, meta), args.report)
    if args.feedback:
        _emit(write_feedback_text(result.errors, meta), args.feedback)
    return EXIT_ERRORS_FOUND if result.errors else EXIT_OK


def cmd_simulate(args) -> int:
    try:
        timeline = parse_annotations(_read(args.annotations))
    except GrammarCheckError as exc:
        raise CliFault(f"{args.annotations}: {exc}") from None
    if args.fps is not None:
        timeline = dataclasses.replace(timeline, meta=_with_fps(timeline.meta, args.fps))
    t = _thresholds(args)
    for i, name in enumerate(args.inject or []):
        timeline = inject_error(timeline, ErrorType(name), args.seed * 1000 + i, t)
    specs = _specs(args, DEFAULT_SPECS)
    noise = NoiseModel.uniform(args.flip, seed=args.seed)
    records = synthesize_predictions(derive_frame_truth(timeline), specs, noise)
    _emit(serialize_predictions(PredictionFile(timeline.meta, specs, records)), args.predictions)
    if args.truth:
        _emit(serialize_annotations(timeline), args.truth)
    return EXIT_OK


def cmd_evaluate(args) -> int:
    try:
        meta, detected = read_report(_read(args.report))
    except GrammarCheckError as exc:
        raise CliFault(f"{args.report}: {exc}") from None
    try:
        truth = parse_annotations(_read(args.truth))
    except GrammarCheckError as exc:
        raise CliFault(f"{args.truth}: {exc}") from None
    config = MatchConfig(args.tolerance_ms, not args.any_type)
    report = match_errors(detected, truth.spans("errors"), truth.meta, config)
    sys.stdout.write(report.format_table())
    if args.json:
        _emit(report.to_json(), args.json)
    return EXIT_OK


def bench(frame_count: int = 1800, fps=30, seed: int = 0, repeat: int = 5, config: PipelineConfig = PipelineConfig()):
    """Best-of-``repeat`` wall time (seconds) of the detection pipeline on a synthetic workload."""
    timeline = build_workload(frame_count, fps, seed)
    records = synthesize_predictions(derive_frame_truth(timeline), config.specs, NoiseModel(seed=seed))
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        run_pipeline(records, timeline.meta, config)
        best = min(best, time.perf_counter() - t0)
    return best


def cmd_bench(args) -> int:
    config = _pipeline_config(args, DEFAULT_SPECS)
    fps = args.fps if args.fps is not None else 30
    seconds = bench(args.frames, fps, args.seed, args.repeat, config)
    print(f"frames: {args.frames}")
    print(f"wall_ms: {seconds * 1000:.2f}")
    print(f"frames_per_second: {args.frames / seconds:.0f}")
    return EXIT_OK


def cmd_passage(args) -> int:
    fps = args.fps if args.fps is not None else 30
    _emit(serialize_annotations(build_passage(fps=fps, seed=args.seed)), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="aslgram", description="Nonmanual grammar error detection for ASL videos")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("detect", help="detect grammar errors from a window prediction file")
    p.add_argument("predictions")
    p.add_argument("--report", help="JSON report path (default: stdout)")
    p.add_argument("--feedback", help="plain-text feedback path")
    _add_engine_flags(p)
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("simulate", help="synthesize window predictions from an annotation file")
    p.add_argument("annotations")
    p.add_argument("--predictions", help="prediction file path (default: stdout)")
    p.add_argument("--truth", help="write the (possibly injected) annotations here")
    p.add_argument("--inject", action="append", choices=[t.value for t in ErrorType])
    p.add_argument("--flip", type=float, default=0.0, help="per-window label flip probability")
    _add_engine_flags(p)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("evaluate", help="score a report against an annotation errors tier")
    p.add_argument("report")
    p.add_argument("truth")
    p.add_argument("--tolerance-ms", type=float, default=1000)
    p.add_argument("--any-type", action="store_true", help="match detections regardless of error type")
    p.add_argument("--json", help="also write the evaluation as JSON")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("bench", help="time the detection pipeline on a synthetic workload")
    p.add_argument("--frames", type=int, default=1800)
    p.add_argument("--repeat", type=int, default=5)
    _add_engine_flags(p)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("passage", help="write the built-in multi-sentence demo annotation")
    p.add_argument("--out")
    p.add_argument("--seed", type=int)
    p.add_argument("--fps", type=Fraction)
    p.set_defaults(func=cmd_passage)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (CliFault, GrammarCheckError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAULT


if __name__ == "__main__":
    sys.exit(main())
