"""Exception hierarchy for qghot.

Validation errors (bad input graphs, bad points, bad parameters) derive from
``ValidationError``; numerical failures of the solvers derive from
``SolverError``.  The CLI maps the former to exit code 2 and the latter to
exit code 3.
"""


class QghotError(Exception):
    """Base class for all qghot errors."""


class ValidationError(QghotError):
    """Invalid input: graphs, points, parameters, files."""


class SolverError(QghotError):
    """A numerical routine failed or its cross-checks disagree."""


# -- graph construction / validation ---------------------------------------

class DisconnectedGraph(ValidationError):
    pass


class NonpositiveLength(ValidationError):
    pass


class DuplicateId(ValidationError):
    pass


class DanglingEndpoint(ValidationError):
    pass


class InvalidPoint(ValidationError):
    pass


# -- spectral solvers -------------------------------------------------------

class ScanExhausted(SolverError):
    """Fewer eigenvalues than requested were found in the scanned window."""


class BackendDisagreement(SolverError):
    """Secular and FEM backends disagree beyond tolerance."""


class NullspaceDimensionMismatch(SolverError):
    pass


class MeshTooCoarse(ValidationError):
    """An edge would receive fewer than 2 mesh intervals."""


class ZeroFunction(ValidationError):
    pass


class ZeroEigenfunction(ValidationError):
    pass


# -- hotspot machinery ------------------------------------------------------

class TooFarApart(ValidationError):
    """Two extrema are farther apart than a quarter period."""


class NotMaxima(ValidationError):
    pass


class NotAStar(ValidationError):
    pass


# -- catalog ----------------------------------------------------------------

class UnknownExample(ValidationError):
    pass


class BadParameter(ValidationError):
    pass


class NotSimple(SolverError):
    """An operation requires a simple eigenvalue."""


class ExtremumAtVertexValueZero(SolverError):
    pass


class ShorteningTooLarge(ValidationError):
    pass


class NoBoundary(ValidationError):
    pass


class LimitEigenvalueMultiple(SolverError):
    """The tracked eigenvalue of the limit graph is not simple."""


class PreconditionUnmet(ValidationError):
    pass


class NoWitnessFound(SolverError):
    """The shrinking-edge ladder hit its floor without a witness."""


class MultiplicityChange(SolverError):
    """A tracked eigenvalue changed multiplicity along a sweep."""


class InapplicableCheck(ValidationError):
    """A verifier check does not apply to the given graph."""
