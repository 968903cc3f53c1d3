from pathlib import Path
from typing import Optional


class ToolkitError(Exception):
    """Base error: carries the process exit code and a human readable detail."""

    exit_code = 1

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


# exit code 2
class UsageError(ToolkitError):
    exit_code = 2


# exit code 3
class DataError(ToolkitError):
    exit_code = 3


# exit code 4
class InvariantError(ToolkitError):
    exit_code = 4


class InputError(DataError):
    pass


class AlignmentError(DataError):
    def __init__(self, source_count: int, target_count: int):
        super().__init__(f"Source and target are not aligned: {source_count} vs {target_count} lines")
        self.source_count = source_count
        self.target_count = target_count


class CorpusDecodeError(DataError):
    def __init__(self, path: Path, line_no: int, reason: str):
        super().__init__(f"{path}:{line_no}: invalid UTF-8 ({reason})")
        self.path = path
        self.line_no = line_no


class SplitSizeError(DataError):
    pass


class ParseError(DataError):
    def __init__(self, path: Optional[Path], line_no: int, reason: str):
        where = f"{path}:{line_no}" if path is not None else f"line {line_no}"
        super().__init__(f"{where}: {reason}")
        self.path = path
        self.line_no = line_no


class GenerationError(DataError):
    def __init__(self, rule_name: str, reason: str):
        super().__init__(f"Rule '{rule_name}' cannot apply: {reason}")
        self.rule_name = rule_name


class ComparisonError(DataError):
    pass


class PipelineStageError(ToolkitError):
    """Wraps an error raised inside a pipeline stage; keeps the wrapped exit code."""

    def __init__(self, stage: str, cause: Exception):
        detail = cause.detail if isinstance(cause, ToolkitError) else f"{type(cause).__name__}: {cause}"
        super().__init__(f"stage '{stage}' failed: {detail}")
        self.stage = stage
        self.cause = cause
        self.exit_code = cause.exit_code if isinstance(cause, ToolkitError) else InvariantError.exit_code
