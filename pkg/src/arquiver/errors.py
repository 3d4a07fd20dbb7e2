"""Exception types shared across the package."""


class ArquiverError(Exception):
    """Base class for domain errors raised by this package."""


class InvalidTypeError(ArquiverError):
    """Unsupported (family, rank) pair."""


class NotReducedError(ArquiverError):
    """A word that was required to be reduced is not."""


class RootNotFoundError(ArquiverError):
    """A root that was required to label a quiver vertex does not."""


class NotLongestClassError(ArquiverError):
    """An operation defined only for classes of the longest element."""


class NotAutomorphismError(ArquiverError):
    """A permutation of the vertex set that does not preserve the diagram."""


class WeightMismatchError(ArquiverError):
    """Two multiplicity sequences compared across different weights."""


class BudgetExceededError(ArquiverError):
    """An enumeration grew past its configured cap."""


class InconsistentSkeletonError(ArquiverError):
    """A partially labeled quiver admits no completion."""


class AmbiguousLabelingError(ArquiverError):
    """A partially labeled quiver admits more than one completion."""
