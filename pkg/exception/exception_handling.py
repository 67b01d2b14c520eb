"""
Error hierarchy shared by every package.

Library code raises these; only the CLI turns them into exit codes.
"""
from typing import Optional


class SwitchGraphError(Exception):
    """Root of all domain errors"""


class ConfigError(SwitchGraphError):
    """Invalid or inconsistent configuration"""


class GraphValidationError(SwitchGraphError, ValueError):
    """A sentence graph violates a structural invariant

    Also a ValueError so pydantic validators report it as a field error.
    """

    def __init__(self, reason: str, message: str, node: Optional[int] = None):
        self.reason = reason
        self.node = node
        super().__init__(message)


class DatasetFormatError(SwitchGraphError):
    """A dataset file record could not be parsed or validated"""

    def __init__(self, path: str, line: int, message: str):
        self.path = path
        self.line = line
        super().__init__(f"{path}:{line}: {message}")


class CheckpointError(SwitchGraphError):
    """A checkpoint file is malformed"""


class CheckpointMismatchError(CheckpointError):
    """A checkpoint does not match the requested model configuration"""


class TrainingError(SwitchGraphError):
    """Training could not proceed (empty split, non-finite loss)"""


class StatisticsError(SwitchGraphError):
    """Invalid input to a statistical procedure"""


class AmbiguousPairError(SwitchGraphError):
    """Both or neither candidate of a synthetic pair satisfies its rule"""


class UnsatisfiableRuleError(SwitchGraphError):
    """The generator could not realise a rule at the configured lengths"""
