"""Exception hierarchy.

Two roots: ``NumericalError`` for conditions the numerics could not meet and
``InputError`` for arguments outside a formula's domain. The CLI maps them to
exit codes 3 and 2 respectively.
"""


class WSKernelsError(Exception):
    """Base class for every error raised by the package."""


class InputError(WSKernelsError, ValueError):
    pass


class NumericalError(WSKernelsError, ArithmeticError):
    pass


class PoleError(InputError):
    """Argument sits on a pole of a gamma factor."""


class DomainError(InputError):
    pass


class RangeError(InputError):
    """Parameters fall outside the strip where an integral converges."""


class SectorError(InputError):
    """Argument outside the sector where an asymptotic expansion holds."""


class DegenerateError(InputError):
    """Hypergeometric parameters hit a logarithmic case."""


class ParityError(InputError):
    pass


class ConfigError(InputError):
    pass


class UnknownEvaluator(ConfigError, KeyError):
    def __str__(self):
        return Exception.__str__(self)


class SingularityError(NumericalError):
    pass


class ConvergenceError(NumericalError):
    pass


class AccuracyError(NumericalError):
    pass


class AliasingError(NumericalError):
    pass


class TailDivergence(NumericalError):
    pass


class DecayError(NumericalError):
    pass
