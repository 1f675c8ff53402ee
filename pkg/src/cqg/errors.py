"""Exception hierarchy shared by all cqg modules."""


class CQGError(Exception):
    """Base class for all errors raised by this package."""


class ModelSchemaError(CQGError):
    """A model document is malformed: missing field, wrong type, bad reference."""


class ModelConsistencyError(CQGError):
    """Model data violates a structural invariant (trace balance, fusion
    dimension counts, conjugation involution, ...)."""


class TruncationError(CQGError):
    """An operation needs a fusion pair that the finite model fragment does
    not ingest.

    The offending pair is carried in ``pair`` so callers can report exactly
    where the fragment ends.
    """

    def __init__(self, message: str, pair: tuple[str, str] | None = None):
        super().__init__(message)
        self.pair = pair


class CGUnavailableError(CQGError):
    """The model supplies no Clebsch-Gordan data for a requested pair."""


class PreconditionError(CQGError):
    """A named hypothesis of an operation does not hold for the given input."""
