"""Exception taxonomy shared by all qst_toolkit modules.

Validation failures raise eagerly with a message naming the offending
quantity; numerical-quality failures (under-resolved quadrature, degenerate
ground sector) get their own types so callers can map them to distinct
exit codes.
"""


class QstError(Exception):
    """Base class for all toolkit errors."""


class ConstraintViolation(QstError):
    """A commutator-manifold point violates |e|^2 = |m|^2 or e.m = +-1."""


class InvalidTransform(QstError):
    """A matrix fails the Lorentz-group membership check."""


class UnsupportedTransform(QstError):
    """The transform is a valid Lorentz matrix but outside the supported subgroup."""


class DimensionTooSmall(QstError):
    """Requested truncation dimension below the documented minimum."""


class DimensionMismatch(QstError):
    """Operand shapes disagree with the declared mode dimensions."""


class IndexOutOfRange(QstError):
    """A coordinate or level index is outside its valid range."""


class DegenerateGround(QstError):
    """The ground sector is not separated well enough to define a unique state."""


class BruteForceTooLarge(QstError):
    """Full-space diagonalization was requested beyond the supported size."""


class NotFactorizable(QstError):
    """An observable cannot be processed in the barycenter/difference frame."""


class ConstraintViolated(QstError):
    """Kernel evaluation points do not satisfy the zero-sum constraint."""


class QuadratureUnderResolved(QstError):
    """Doubling the quadrature grid moved the result more than the tolerance."""


class EdgeSupportWarning(UserWarning):
    """A state carries non-negligible weight near the truncation edge.

    Non-fatal: reported as a flag on results; never raised as an error.
    """
