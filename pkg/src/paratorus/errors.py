"""Exception types shared across the library."""


class ParatorusError(Exception):
    """Base class for all library errors."""


class NonZeroMean(ParatorusError):
    """Operation requires a zero-mean function but the 0-mode is too large."""


class GridMismatch(ParatorusError):
    """Operands live on different grids."""


class BadParams(ParatorusError):
    """Parameters outside the admissible range (e.g. cutoff with B <= 1)."""


class StepTooLarge(ParatorusError):
    """Flow substep does not resolve the largest lattice phase."""


class DepthExceeded(ParatorusError):
    """Nested-commutator depth beyond the supported cap."""


class CflViolation(ParatorusError):
    """Transport CFL condition failed during time stepping."""


class BlowupDetected(ParatorusError):
    """Solution amplitude exceeded the blow-up guard threshold."""


class UnresolvedBump(ParatorusError):
    """Dilated bump too fine for the grid."""


class NotDiffeo(ParatorusError):
    """Change of variables is not orientation-preserving everywhere."""


class CancellationViolated(ParatorusError):
    """Bracket relation between gauge symbols fails beyond tolerance."""
