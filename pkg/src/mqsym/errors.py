"""Error types shared across the package, the service and the CLI."""


class ParseError(ValueError):
    """A state or density-matrix document is malformed."""


class DimensionLimitError(ValueError):
    """Requested Hilbert-space dimension exceeds the dense-storage ceiling."""


class ZeroStateError(ValueError):
    """An operation that needs a nonzero state received the zero vector."""


class PartitionError(ValueError):
    """Blocks do not form a valid partition of the site labels."""


class FactorizationError(RuntimeError):
    """Factorization output is inconsistent with the requested tolerance."""
