"""Exception hierarchy.

Every error carries an ``exit_code`` so the CLI can map failures onto
its documented codes (1 usage/config, 2 data, 3 numerical/degenerate).
"""


class MNSError(Exception):
    exit_code = 1


class InvalidParameter(MNSError, ValueError):
    exit_code = 1


class IndexOutOfRange(MNSError, IndexError):
    exit_code = 1


class SelfLoopRejected(MNSError, ValueError):
    exit_code = 2


class ShapeMismatch(MNSError, ValueError):
    exit_code = 2


class TooFewLayers(MNSError, ValueError):
    exit_code = 3


class TooFewNodes(MNSError, ValueError):
    exit_code = 3


class ZeroDenominator(MNSError, ArithmeticError):
    exit_code = 3


class EmptySet(MNSError, ValueError):
    exit_code = 3


class DegenerateHoldout(MNSError, ValueError):
    exit_code = 3


class ParseError(MNSError, ValueError):
    exit_code = 2

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class EmptyFile(MNSError, ValueError):
    exit_code = 2


class EmptyAfterFilter(MNSError, ValueError):
    exit_code = 2


class ManifestMismatch(MNSError, ValueError):
    exit_code = 2


class IoError(MNSError, OSError):
    exit_code = 2
