"""Exception hierarchy and process exit codes."""

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INCONCLUSIVE = 2
EXIT_EMPTY = 3
EXIT_USAGE = 64
EXIT_DATA_FORMAT = 65


class TcsForgeError(Exception):
    """Base class for all errors raised by tcs_forge."""

    exit_code = EXIT_FAIL


class InputError(TcsForgeError):
    """Malformed arguments, e.g. a vector of the wrong length."""

    exit_code = EXIT_USAGE


class LatticeError(TcsForgeError):
    """A Gram matrix or sublattice violates its structural invariants."""


class HypothesisViolationError(TcsForgeError):
    """An operation was called outside the hypotheses it certifies."""


class UnsupportedRankError(TcsForgeError):
    """The requested check is only implemented for a smaller rank."""


class ChartError(TcsForgeError):
    """Intersection-ring data is inconsistent or cannot be constructed."""


class ConfigurationError(TcsForgeError):
    """Gluing data does not define a valid configuration."""


class InconsistencyError(TcsForgeError):
    """Two independent formulas for the same quantity disagree."""


class InconclusiveError(TcsForgeError):
    """The available data cannot decide the check."""

    exit_code = EXIT_INCONCLUSIVE


class SearchOverflowError(TcsForgeError):
    """The candidate scan would exceed the configured cap."""


class DataFormatError(TcsForgeError):
    """An input file does not match its JSON schema."""

    exit_code = EXIT_DATA_FORMAT
