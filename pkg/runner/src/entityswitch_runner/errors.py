class RunnerError(Exception):
    """Invalid input, unusable model, or broken manifest."""


class LengthMismatch(RunnerError):
    """Word-level predictions could not be aligned with the gold tokens."""
