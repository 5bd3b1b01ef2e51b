"""Exception types shared across the package."""


class IngestError(ValueError):
    """Raised when an input file is malformed.

    The message names the offending file and, where possible, the line.
    """

    def __init__(self, message, path=None, line=None):
        if path is not None and line is not None:
            message = f"{path}:{line}: {message}"
        elif path is not None:
            message = f"{path}: {message}"
        super().__init__(message)
        self.path = path
        self.line = line


class UnknownImageError(LookupError):
    """Raised when a score is requested for an image id the bank has never seen."""


class NotDetectableError(ValueError):
    """Raised when a detector score is requested for a word outside the vocabulary,
    or a stem-based estimate for a word with no stem-matching detector."""


class EvaluationError(ValueError):
    """Raised on evaluation protocol violations (empty query set, missing ground truth)."""


class SnapshotError(ValueError):
    """Raised when a snapshot file cannot be loaded (corruption, version mismatch)."""
