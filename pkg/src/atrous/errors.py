"""Exception hierarchy.

Every error carries a short machine-readable ``code`` that the command line
tool prints after its ``error:`` prefix.
"""


class AtrousError(Exception):
    code = "AtrousError"
    exit_status = 4


class InputError(AtrousError):
    """Malformed user input (files, parameters)."""

    code = "MalformedInput"
    exit_status = 1


class InvalidFilterBank(InputError):
    code = "InvalidFilterBank"


class BadBounds(InputError):
    code = "BadBounds"


class BadParams(InputError):
    code = "BadParams"


class PyramidShape(InputError):
    code = "PyramidShape"


class ZeroSequence(InputError):
    code = "ZeroSequence"


class NumericalError(AtrousError):
    code = "NumericalFailure"
    exit_status = 4


class GridTooSmall(NumericalError):
    code = "GridTooSmall"


class DepthLimit(NumericalError):
    code = "DepthLimit"


class NotLowPass(NumericalError):
    code = "NotLowPass"


class NoConvergence(NumericalError):
    code = "NoConvergence"


class EmptyFeasibleSet(NumericalError):
    code = "EmptyFeasibleSet"


class SingularSystem(NumericalError):
    code = "SingularSystem"


class NotCoprime(SingularSystem):
    code = "NotCoprime"


class NotNonnegative(NumericalError):
    code = "NotNonnegative"


class OddCircleRoot(NumericalError):
    code = "OddCircleRoot"


class NegativeFactor(NumericalError):
    code = "NegativeFactor"


class IOFailure(AtrousError):
    """A file could not be read or written."""

    code = "IOFailure"
    exit_status = 2
