class KontsevichError(Exception):
    """Base class for every error raised on purpose by kontsevich_check."""


class DegreeCapError(KontsevichError):
    def __init__(self, degree, cap):
        super(DegreeCapError, self).__init__(
            'degree {} is above the configured cap {}'.format(degree, cap))
        self.degree = degree
        self.cap = cap


class InvalidDiagramError(KontsevichError):
    pass


class SkeletonMismatchError(KontsevichError):
    pass


class PreconditionError(KontsevichError):
    pass


class InconsistentSystemError(KontsevichError):
    """A linear system that must be solvable was not.  This always points at
    a sign or convention bug, never at bad input."""
    pass


class MissingBasisError(KontsevichError):
    pass


class TruncationError(KontsevichError):
    pass


class TangleParseError(KontsevichError):
    def __init__(self, line_no, message):
        super(TangleParseError, self).__init__(
            'line {}: {}'.format(line_no, message))
        self.line_no = line_no


class MalformedTangleError(KontsevichError):
    pass


class InvalidCurveError(KontsevichError):
    pass
