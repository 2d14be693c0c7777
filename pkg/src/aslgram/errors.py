"""Exception types raised for invalid inputs."""

from __future__ import annotations


class GrammarCheckError(ValueError):
    """Base class for every input fault the engine reports."""


class ShortVideo(GrammarCheckError):
    def __init__(self, frame_count: int, size: int):
        super().__init__(f"video has {frame_count} frames, shorter than window size {size}")
        self.frame_count = frame_count
        self.size = size


class DuplicateWindow(GrammarCheckError):
    def __init__(self, start: int, modality=None, line: int | None = None):
        where = f" ({modality.value})" if modality is not None else ""
        at = f"line {line}: " if line is not None else ""
        super().__init__(f"{at}duplicate window prediction at start {start}{where}")
        self.start = start
        self.modality = modality
        self.line = line


class OutOfRange(GrammarCheckError):
    pass


class EmptyVotes(GrammarCheckError):
    def __init__(self, frame: int):
        super().__init__(f"frame {frame} has no window votes")
        self.frame = frame


class ParseError(GrammarCheckError):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class OverlapError(GrammarCheckError):
    def __init__(self, tier: str, line: int | None = None):
        at = f"line {line}: " if line is not None else ""
        super().__init__(f"{at}overlapping spans in tier {tier!r}")
        self.tier = tier
        self.line = line


class UnknownLabel(GrammarCheckError):
    def __init__(self, tier: str, label: str, line: int | None = None):
        at = f"line {line}: " if line is not None else ""
        super().__init__(f"{at}unknown label {label!r} on tier {tier!r}")
        self.tier = tier
        self.label = label
        self.line = line


class ConfidenceRange(GrammarCheckError):
    def __init__(self, value: float, line: int | None = None):
        at = f"line {line}: " if line is not None else ""
        super().__init__(f"{at}confidence {value} outside [0, 1]")
        self.value = value
        self.line = line


class NoEligibleInstance(GrammarCheckError):
    def __init__(self, target):
        name = getattr(target, "value", target)
        super().__init__(f"timeline has no eligible instance for {name}")
        self.target = target
