"""Exception types shared across the package."""


class EmptyBatchError(ValueError):
    """An operation that needs observation rows received none."""


class CardinalityMismatchError(ValueError):
    """Data carries a state label the model does not know."""


class ImpossibleEvidenceError(ValueError):
    """The supplied evidence has probability zero under the model."""


class IncompatibleModelsError(ValueError):
    """Two models cannot be combined cell-wise."""


class NotNormalizedError(ValueError):
    """A model document contains a CPT row that does not sum to one."""
