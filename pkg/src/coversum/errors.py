"""Exception hierarchy shared across the toolkit.

Each class maps to a distinct CLI exit code (see cli.EXIT_CODES).
"""


class CoversumError(Exception):
    """Base class for all toolkit errors."""


class EmptyDocumentError(CoversumError):
    """A document has no usable units under the requested scheme."""


class ZeroBudgetError(CoversumError):
    """A size budget of zero (or negative) was requested."""


class UnknownMetricError(CoversumError):
    """An unrecognized sentence-scoring metric name."""


class ResourceLimitError(CoversumError):
    """An exact-solver resource cap was hit before optimality was proven."""


class EmptyReferenceError(CoversumError):
    """A reference summary has no n-grams after preprocessing."""


class MissingReferencesError(CoversumError):
    """A cluster or document has no reference summaries to score against."""


class ManifestError(CoversumError):
    """A corpus manifest failed to parse or violates the schema."""


class MissingFileError(CoversumError):
    """A file referenced by a manifest does not exist."""
