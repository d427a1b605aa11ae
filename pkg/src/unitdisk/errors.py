"""Exception types raised by the unitdisk package."""


class UnitDiskError(Exception):
    """Base class for every error raised by this package."""


class DegenerateTerminals(UnitDiskError, ValueError):
    pass


class DuplicatePoints(UnitDiskError, ValueError):
    pass


class IndexOutOfRange(UnitDiskError, IndexError):
    pass


class EmptySet(UnitDiskError, ValueError):
    pass


class OnAxis(UnitDiskError, ValueError):
    """A point with x == 0 was given where the dual slopes are undefined."""


class WrongSide(UnitDiskError, ValueError):
    pass


class TerminalCovered(UnitDiskError, ValueError):
    """s or t lies inside (or on the boundary of) one of the disks."""


class TooLarge(UnitDiskError, ValueError):
    pass


class InvalidDimensions(UnitDiskError, ValueError):
    pass


class ParseError(UnitDiskError, ValueError):
    pass
