class JetError(Exception):
    """Base class for errors raised by the jet engine."""


class DimensionMismatch(JetError, ValueError):
    pass


class ReliabilityExhausted(JetError):
    """A derivative or operator asked for more degrees than a jet reliably carries."""


class NotInvertible(JetError, ZeroDivisionError):
    pass


class SingularMatrix(JetError, ValueError):
    pass


class NotEllipticPosition(JetError):
    """The coefficient of ``D^beta`` with ``beta = (0, ..., 0, m)`` vanishes at 0."""


class NoStabilization(JetError):
    pass


class SolveError(JetError):
    """A constructed solution jet failed one of its postconditions."""


class CertificateError(JetError):
    def __init__(self, stage: str, message: str):
        super().__init__(f"[{stage}] {message}")
        self.stage = stage


class InputError(ValueError):
    """Malformed input file; ``field`` names the offending location."""

    def __init__(self, message: str, field: str | None = None):
        super().__init__(f"{field}: {message}" if field else message)
        self.field = field
