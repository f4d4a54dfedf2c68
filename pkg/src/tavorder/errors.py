"""Exception hierarchy shared by every subsystem."""


class TavError(Exception):
    """Base class for all toolkit errors."""


class DataError(TavError):
    """Input data (tables, catalogs, certificates) is malformed or inconsistent."""


# laurent
class NotSquare(TavError):
    pass


class ZeroAtNegativeExponent(TavError):
    pass


class NotDivisible(TavError):
    pass


class InterpolationError(TavError):
    pass


# finite groups
class OrderBoundExceeded(TavError):
    pass


class EnumerationBoundExceeded(TavError):
    pass


class PrimePowerInput(TavError):
    pass


# knots
class MalformedPD(DataError):
    pass


class MultiComponentLink(DataError):
    pass


class NotCyclicAbelianization(DataError):
    pass


class DeficiencyError(DataError):
    pass


class NotCoprime(TavError):
    pass


class MissingLongitude(TavError):
    pass


class KnotNotFound(TavError):
    pass


class GroupNotFound(TavError):
    pass


class ParseError(DataError):
    def __init__(self, message, path=None, line=None):
        where = ""
        if path is not None:
            where = f"{path}:{line}: " if line is not None else f"{path}: "
        elif line is not None:
            where = f"line {line}: "
        super().__init__(where + message)
        self.message = message
        self.path = path
        self.line = line


# fox / search
class NormalizationFailure(TavError):
    pass


class InvalidHom(TavError):
    def __init__(self, message, relator_index=None):
        super().__init__(message)
        self.relator_index = relator_index


class NotClosedUnderAction(TavError):
    pass


class CatalogIncomplete(TavError, UserWarning):
    """Issued as a warning; the report is still produced and flagged."""


class CacheCorrupt(TavError, UserWarning):
    """Issued as a warning; the record is ignored and recomputed."""


class Mismatch(TavError):
    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class ProvenanceError(TavError):
    pass
