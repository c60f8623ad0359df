"""Exception hierarchy shared by every module."""


class ShortIBSError(Exception):
    pass


class ZeroInverse(ShortIBSError, ZeroDivisionError):
    pass


class NoRoot(ShortIBSError, ValueError):
    """Raised when a square root is requested for a quadratic non-residue."""


class ParseError(ShortIBSError, ValueError):
    pass


class ValidationError(ShortIBSError, ValueError):
    pass


class GenerationTimeout(ShortIBSError):
    pass


class InfinityInput(ShortIBSError, ValueError):
    pass


class DegeneratePair(ShortIBSError, ArithmeticError):
    """A Miller line evaluation vanished; the caller should re-randomize."""


class ZeroInput(ShortIBSError, ValueError):
    pass


class UnsupportedCurve(ShortIBSError, ValueError):
    pass


class EmptyIdentity(ShortIBSError, ValueError):
    pass


class MalformedSignature(ShortIBSError, ValueError):
    pass


class UnknownHashMode(ShortIBSError, ValueError):
    pass


class InfinityNotCompressible(ShortIBSError, ValueError):
    pass


class InvalidPrefix(ShortIBSError, ValueError):
    pass


class NotOnCurve(ShortIBSError, ValueError):
    pass


class BadLength(ShortIBSError, ValueError):
    pass


class UnknownScheme(ShortIBSError, ValueError):
    pass


class UnknownCurve(ShortIBSError, ValueError):
    pass
