"""Exception hierarchy shared by every layer of the codec."""


class FNTCodeError(Exception):
    """Base class for all errors raised by :mod:`fntec`."""


class ZeroInverse(FNTCodeError, ZeroDivisionError):
    pass


class InvalidTransformSize(FNTCodeError, ValueError):
    pass


class SizeMismatch(FNTCodeError, ValueError):
    pass


class ProductTooLarge(FNTCodeError, ValueError):
    pass


class DuplicatePoint(FNTCodeError, ValueError):
    pass


class DuplicatePosition(DuplicatePoint):
    pass


class PositionOutOfRange(FNTCodeError, ValueError):
    pass


class TooFewPositions(FNTCodeError, ValueError):
    pass


class NotEnoughSymbols(FNTCodeError, ValueError):
    pass


class LengthMismatch(FNTCodeError, ValueError):
    pass


class ShardFormatError(FNTCodeError, ValueError):
    """A shard or manifest byte string could not be parsed."""


class BadMagic(ShardFormatError):
    pass


class BadVersion(ShardFormatError):
    pass


class TruncatedShard(ShardFormatError):
    pass


class MalformedEscapes(ShardFormatError):
    pass


class MalformedHeader(ShardFormatError):
    pass


class TooManyEscapes(FNTCodeError, ValueError):
    pass
