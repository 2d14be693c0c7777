"""Grammar-error detection for continuous ASL videos from per-window classifier output."""

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
    VideoMeta,
    frames_to_ms,
    interval_gap,
)
from .pipeline import PipelineConfig, detect, run_pipeline

__version__ = "0.1.0"
