"""Exception types shared across the package.

Every error raised deliberately by this package derives from RelbellError,
so callers (including the command line front end) can map library failures
to a single exit path without matching on built-in exception types.
"""


class RelbellError(Exception):
    """Base class for all package-specific errors."""


# --- linear algebra kernel ---

class NonHermitianInput(RelbellError):
    """A matrix handed to the Hermitian eigensolver was not Hermitian."""


class DimensionMismatch(RelbellError):
    """Operands of a matrix operation have incompatible shapes."""


# --- kinematics ---

class GammaInconsistent(RelbellError):
    """A supplied Lorentz factor disagrees with the supplied velocity."""


class ZeroHelicity(RelbellError):
    """A helicity value of zero where a nonzero one is required."""


# --- observables and CHSH scans ---

class DegenerateObservable(RelbellError):
    """The projected spin direction collapsed to zero length, so the
    normalized observable is undefined (happens only at light speed with
    the analyzer axis orthogonal to the motion)."""


class EmptyGrid(RelbellError):
    """A scan was requested over an empty coordinate grid."""


# --- Dirac-equation cross checks ---

class NullContext(RelbellError):
    """Momentum and mass both zero: no four-spinor dynamics to build."""


class CheckFailed(RelbellError):
    """A Dirac-operator identity check exceeded its tolerance.

    The failing :class:`~relbell.dirac.CheckReport` is attached as
    ``report`` so callers can still serialize the residuals.
    """

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class SpectrumMismatch(CheckFailed):
    """Eigenvalues of a projected spin operator missed their closed form."""


class EigenstateResidual(CheckFailed):
    """A constructed simultaneous eigenstate failed its residual test."""


class PrecessionMismatch(CheckFailed):
    """The Heisenberg spin derivative deviated from omega x s."""


class IdentityMismatch(CheckFailed):
    """An operator identity (Hamiltonian, Casimir, evenness, or the
    agreement of equivalent operator forms) exceeded tolerance."""


# --- velocity-distribution audits ---

class ParseError(RelbellError):
    """A velocity-distribution table could not be parsed."""


class SuperluminalSample(RelbellError):
    """A velocity sample at or above the speed of light."""


class EmptyDistribution(RelbellError):
    """A velocity distribution with no samples."""
