class DergraphError(Exception):
    pass


class PermutationParseError(DergraphError, ValueError):
    """Malformed permutation text or a non-bijective image list."""


class GroupError(DergraphError, ValueError):
    pass


class OrderCapExceeded(DergraphError):
    """Group closure grew past the configured ``max_order``."""


class VertexCapExceeded(DergraphError):
    """The group is too large for a packed adjacency bitmap."""


class IntransitiveGroupError(DergraphError, ValueError):
    """Raised by analyses that are only defined for transitive actions."""


class InvariantViolation(DergraphError, AssertionError):
    """Two independent computations disagreed. Always a bug, never valid data."""
