"""Exception hierarchy for the gibbscert toolkit.

Every failure mode that callers are expected to handle has its own class;
all inherit from :class:`GibbsCertError` so a bare ``except GibbsCertError``
catches anything raised by the library itself.
"""


class GibbsCertError(Exception):
    """Base class for all gibbscert errors."""


# -- linear algebra ----------------------------------------------------------

class NonHermitianError(GibbsCertError):
    """Input matrix fails the Hermitian symmetry check."""


class NegativeEigenvalueError(GibbsCertError):
    """Matrix square root requested for an operator with a genuinely
    negative eigenvalue (below the clipping tolerance)."""


class DimensionMismatchError(GibbsCertError):
    """Operand dimensions are incompatible."""


# -- states and channels -----------------------------------------------------

class ZeroOverlapError(GibbsCertError):
    """Overlap Tr(psi tau) vanished; the min-relative entropy is undefined."""


class BetaMismatchError(GibbsCertError):
    """Input and output systems carry different inverse temperatures."""


class NotPSDError(GibbsCertError):
    """A matrix required to be positive semidefinite is not."""


class NotTracePreservingError(GibbsCertError):
    """A Choi matrix does not have the identity input marginal."""


class NotOrthogonalError(GibbsCertError):
    """The two states of a would-be reversible pair are not orthogonal."""


class CoherentEnvironmentStateError(GibbsCertError):
    """Dilation environment state carries energetic coherence where an
    incoherent one is required."""


# -- constructions -----------------------------------------------------------

class InfeasibleEtaError(GibbsCertError):
    """The chosen eta makes the complementary prepared state non-PSD."""


class PreconditionViolatedError(GibbsCertError):
    """An entropy-equality or coherence precondition of the general
    pairwise construction failed; the message names the residual."""


class ConditionNotMetError(GibbsCertError):
    """The strict Gibbs-weight ordering required by the construction does
    not hold for the requested indices."""


class InvalidSpectrumError(GibbsCertError):
    """Energy list violates the construction's spectrum requirements."""


class InvalidIndexError(GibbsCertError):
    """Level index outside the range admitted by the construction."""


class NonPositiveAError(GibbsCertError):
    """Scale parameter of the tightness construction must be positive."""


class MissingRecoveryError(GibbsCertError):
    """Operation requires a pair with an explicit recovery channel."""


# -- scenario / CLI ----------------------------------------------------------

class ScenarioParseError(GibbsCertError):
    """Scenario file is malformed."""


class UnknownConstructionError(GibbsCertError):
    """Scenario names a construction that is not registered."""


class UnknownParameterError(GibbsCertError):
    """Sweep requested over a parameter the construction does not take."""


class CheckFailedError(GibbsCertError):
    """A requested certification check failed."""
