from typing import ClassVar

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_FORMAT = 3
EXIT_NUMERICAL = 4


class AudletError(Exception):
    exit_code: ClassVar[int] = 1


class DomainError(AudletError, ValueError):
    """Invalid parameters or violated preconditions."""

    exit_code = EXIT_USAGE


class RankError(DomainError):
    pass


class FormatError(AudletError, ValueError):
    """Unsupported audio encoding or a corrupt binary container."""

    exit_code = EXIT_FORMAT


class FrameError(AudletError, ArithmeticError):
    """The filter bank does not form a usable frame for the requested route."""

    exit_code = EXIT_NUMERICAL


class NotPainlessError(FrameError):
    pass


class CapacityError(FrameError):
    pass


class ConvergenceError(AudletError, ArithmeticError):
    exit_code = EXIT_NUMERICAL
