"""Exception hierarchy.  Every library error derives from NcballError."""


class NcballError(Exception):
    pass


class InputError(NcballError, ValueError):
    """Malformed user input (bad shapes, letters out of range, bad JSON)."""


class ShapeMismatch(InputError):
    pass


class ArityMismatch(InputError):
    pass


class UnknownCheckId(InputError):
    pass


class CapExceeded(NcballError):
    """A word enumeration or Fock model would exceed the configured size cap."""


class NumericalError(NcballError):
    """The instance is numerically unusable; generators resample on this."""


class NotHermitian(NumericalError):
    pass


class NegativeSpectrum(NumericalError):
    pass


class NormExceedsOne(NumericalError):
    pass


class NotStrictContraction(NumericalError):
    pass


class NotContraction(NumericalError):
    pass


class NotInBall(NumericalError):
    pass


class NotIsometry(NumericalError):
    pass


class Singular(NumericalError):
    pass


class IllConditioned(NumericalError):
    pass


class SingularConstantTerm(NumericalError):
    pass


class DegreeExceeded(InputError):
    pass


class LowDegreeTermsPresent(InputError):
    pass
