"""Exception hierarchy shared by every btstab module."""


class BtStabError(Exception):
    """Base class for all library errors."""


class NotEisenstein(BtStabError, ValueError):
    pass


class ResidueReducible(BtStabError, ValueError):
    pass


class PrecisionTooSmall(BtStabError, ValueError):
    pass


class CtxMismatch(BtStabError, TypeError):
    pass


class NotAUnit(BtStabError, ZeroDivisionError):
    pass


class LevelOutOfRange(BtStabError, ValueError):
    pass


class InvalidDescriptor(BtStabError, ValueError):
    pass


class NotRamified(BtStabError, ValueError):
    pass


class NotUnimodular(BtStabError, ValueError):
    pass


class PointIsRational(BtStabError, ValueError):
    pass


class RationalLine(BtStabError, ValueError):
    pass


class NotNormalized(BtStabError, ValueError):
    pass


class BudgetExceeded(BtStabError, RuntimeError):
    """An enumeration or closure would exceed its configured size cap."""
