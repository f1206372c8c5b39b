"""Exception hierarchy shared by every nimtree module."""


class NimTreeError(Exception):
    """Base class for all errors raised by nimtree."""


class MalformedInput(NimTreeError, ValueError):
    pass


class NotATree(NimTreeError, ValueError):
    pass


class VertexOutOfRange(NimTreeError, IndexError):
    pass


class SizeLimitExceeded(NimTreeError, ValueError):
    pass


class InvalidK(NimTreeError, ValueError):
    pass


class InvalidRange(NimTreeError, ValueError):
    pass


class NotNimTree(NimTreeError, ValueError):
    pass


# series algebra


class TruncationMismatch(NimTreeError, ValueError):
    pass


class NonUnitConstantTerm(NimTreeError, ZeroDivisionError):
    pass


class NonZeroConstantTerm(NimTreeError, ValueError):
    pass


class DivisionRemainder(NimTreeError, ArithmeticError):
    pass


class BeyondTruncation(NimTreeError, IndexError):
    pass


# verification failures; each one means an internal bug, not bad input


class NonConvergence(NimTreeError, RuntimeError):
    pass


class IntegralityViolation(NimTreeError, ArithmeticError):
    pass


class RootNotBracketed(NimTreeError, ArithmeticError):
    pass


class MultiplicityShortfall(NimTreeError, ArithmeticError):
    pass
