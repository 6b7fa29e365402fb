"""Exception hierarchy.

Everything raised for bad input or a violated domain contract derives from
:class:`MsrcgrError`; the CLI maps these to exit code 1.
"""


class MsrcgrError(ValueError):
    """Base class for validation and domain errors."""


class InvalidAlphabetError(MsrcgrError):
    pass


class OutOfRangeError(MsrcgrError):
    pass


class AlphabetTooLargeError(MsrcgrError):
    pass


class InvalidTokenError(MsrcgrError):
    def __init__(self, message, position=None):
        super().__init__(message)
        self.position = position


class SequenceTooShortError(MsrcgrError):
    def __init__(self, message, scale=None):
        super().__init__(message)
        self.scale = scale


class CorruptedTrajectoryError(MsrcgrError):
    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class InconsistentStreamError(MsrcgrError):
    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class EmptyTrajectoryError(MsrcgrError):
    pass


class DimensionError(MsrcgrError):
    pass


class DegenerateClassError(MsrcgrError):
    pass


class ParseError(MsrcgrError):
    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class AlignmentError(MsrcgrError):
    def __init__(self, message, record_id=None):
        super().__init__(message)
        self.record_id = record_id


class EmptyEmbeddingError(MsrcgrError):
    pass


class DivergenceError(MsrcgrError):
    pass


class DegenerateLabelsError(MsrcgrError):
    pass
