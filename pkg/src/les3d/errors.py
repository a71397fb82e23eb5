"""Exception hierarchy shared by all les3d modules.

The CLI maps these onto process exit codes: validation/input problems
exit with 2, degenerate geometry with 3, and I/O failures with 4.
"""


class Les3dError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(Les3dError):
    """Invalid argument, spec, or configuration value."""


class TooFewPointsError(ValidationError):
    """An input cloud has fewer points than the operation requires."""


class ParseError(ValidationError):
    """A cloud file could not be parsed; carries a 1-based line number."""

    def __init__(self, path, line, message):
        super().__init__(f"{path}:{line}: {message}")
        self.path = str(path)
        self.line = line


class DegenerateGeometryError(Les3dError):
    """Input geometry is degenerate (collinear/coplanar/too flat) for the
    requested construction. The message names the detected degeneracy."""


class DegenerateSimplexError(DegenerateGeometryError):
    """Four points are too close to coplanar for a circumsphere solve."""


class EmptyInteriorError(Les3dError):
    """Every cloud point is a hull vertex, so the segment score over
    non-hull points is undefined. Callers should fall back to scoring
    against the full cloud."""
