"""Exception types shared across the package.

Every error carries an ``exit_code`` so the command line can map failures to
distinct process exit statuses.
"""


class HullbaysError(Exception):
    exit_code = 1


class DegenerateHull(HullbaysError):
    """Fewer than three points, or all points collinear."""

    exit_code = 3


class ZeroArea(HullbaysError):
    exit_code = 3


class EmptyImage(HullbaysError):
    exit_code = 3


class IdxError(HullbaysError):
    exit_code = 4


class BadMagic(IdxError):
    exit_code = 4


class TruncatedFile(IdxError):
    exit_code = 5


class DimensionMismatch(IdxError):
    exit_code = 6


class CountMismatch(HullbaysError):
    exit_code = 7


class LayoutVersionMismatch(HullbaysError):
    exit_code = 8


class VersionMismatch(HullbaysError):
    exit_code = 9


class CorruptFile(HullbaysError):
    exit_code = 10
