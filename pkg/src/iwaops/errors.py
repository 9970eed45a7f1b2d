"""Exception types shared across the package."""


class FormError(ValueError):
    """Base class for malformed exterior-algebra input."""


class DegreeOverflow(FormError):
    """Wedge product would exceed the top degree."""


class GradeMismatch(FormError):
    """Operation requires forms of matching (or specific) grade."""


class FormParseError(FormError):
    """A form literal could not be parsed."""


class NotSimple(ValueError):
    """A 2-form expected to be decomposable is not, at the given tolerance."""


class ZeroForm(ValueError):
    """A nonzero form was required."""


class InternalInvariantViolation(RuntimeError):
    """A mathematical identity the implementation guarantees was violated.

    Raised e.g. when the covariant derivative of a plane form leaves the
    orbit tangent space; this always indicates a bug, never bad user input.
    """
