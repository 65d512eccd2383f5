# Exception hierarchy shared by every module of the package.
# The CLI maps INPUT_ERRORS to exit code 2.


class QncError(Exception):
    """Base class for all errors raised by quantum_network_code."""


# --- Field and linear algebra ---

class InvalidField(QncError):
    """Field parameters are not a prime / irreducible modulus pair."""


class FieldMismatch(QncError):
    """Operands live in different finite fields."""


class DivisionByZero(QncError, ZeroDivisionError):
    """Inversion of the zero element."""


class DimensionError(QncError, ValueError):
    """Shapes or register counts do not agree."""


class SingularMatrix(QncError):
    """A matrix that must be invertible is not."""


class DegenerateSpan(QncError):
    """Spanning vectors are linearly dependent."""


class DegenerateForm(QncError):
    """The symplectic form restricted to a subspace is degenerate."""


class InternalError(QncError):
    """A construction produced output violating its own post-conditions."""


# --- Operators and networks ---

class NotSymplectic(QncError):
    """Matrix fails g^T J g = J."""


class SynthesisFailed(QncError):
    """No unitary satisfying the intertwining relation was found."""


class NotADag(QncError):
    """Network graph contains a cycle."""


class DegreeError(QncError):
    """Node degrees do not match the unicast network model."""


class NotClifford(QncError):
    """A symplectic description was needed but a layer is a dense unitary."""


class InvalidChannel(QncError):
    """Kraus set is not trace preserving or a distribution is invalid."""


class InvalidState(QncError):
    """Matrix is not a density matrix."""


class ResourceLimit(QncError):
    """Exact simulation would exceed the desk-scale budget."""


# --- Code construction and verification ---

class NoCapacity(QncError):
    """The code would have no message registers."""


class ConverseMismatch(QncError):
    """Decoded mix-substitution channel does not have the expected product form."""


class InvalidTriple(QncError):
    """Rank triple violates m1 >= l1, l2 >= l3 >= 1 and m0 >= l1 + l2 - l3."""


class NotInvertible(QncError):
    """A classical node map is not a permutation."""


class ConfigError(QncError):
    """Scenario configuration failed validation."""


INPUT_ERRORS = (
    ConfigError,
    InvalidTriple,
    InvalidField,
    DimensionError,
    NotADag,
    DegreeError,
    NotClifford,
    NotSymplectic,
    NoCapacity,
    ResourceLimit,
    NotInvertible,
    InvalidChannel,
    InvalidState,
)
