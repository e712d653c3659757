"""Exception types shared across the package.

Every error carries a short machine-readable ``code`` so the HTTP layer can
surface a stable reason string without parsing prose.
"""


class SeacoreError(Exception):
    """Base class for all package errors."""

    code = "error"

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class DegenerateFrameError(SeacoreError):
    """Local metric frame cannot be built (origin too close to a pole)."""

    code = "degenerate-frame"


class EmptySelectionError(SeacoreError):
    """A selection rectangle contained no cores."""

    code = "empty-selection"


class NotFoundError(SeacoreError):
    """An id (core, map layer, job, parameter) is unknown."""

    code = "not-found"


class InvalidGridError(SeacoreError):
    """Grid cell size violates the 7 cm-multiple policy or is non-positive."""

    code = "invalid-grid"


class GridTooLargeError(SeacoreError):
    """Requested grid exceeds the voxel cap; carries the offending count."""

    code = "grid-too-large"

    def __init__(self, message: str, voxel_count: int):
        super().__init__(message)
        self.voxel_count = voxel_count


class DegeneracyError(SeacoreError):
    """Point geometry unsuitable for linear interpolation (coplanar/<4 points)."""

    code = "degenerate-geometry"


class NoDataError(SeacoreError):
    """No sample point carries the requested parameter."""

    code = "no-data"


class OutOfBoundsError(SeacoreError):
    """A query location lies outside the grid extent."""

    code = "out-of-bounds"
