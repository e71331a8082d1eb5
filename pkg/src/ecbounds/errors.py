"""Exception hierarchy. Everything raised on purpose derives from `EcBoundsError`."""


class EcBoundsError(Exception):
    """Base class for domain errors (the CLI maps these to exit code 1)."""


class SingularCurve(EcBoundsError):
    pass


class CurveMismatch(EcBoundsError):
    pass


class NotOnCurve(EcBoundsError):
    pass


class TorsionDenominator(EcBoundsError):
    """psi_m vanishes at the point, so [m]P is the identity or undefined."""


class DegreeLawViolation(EcBoundsError):
    pass


class AllZero(EcBoundsError):
    pass


class PrecisionUnreachable(EcBoundsError):
    pass


class EnvelopeViolation(EcBoundsError):
    """A height inequality failed beyond interval width. Means a bug, not a theorem failure."""


class BudgetExceeded(EcBoundsError):
    pass


class NotSquare(EcBoundsError):
    pass


class CertificateViolation(EcBoundsError):
    pass


class AllTorsion(EcBoundsError):
    pass


class SearchExhausted(EcBoundsError):
    pass


class BadParams(EcBoundsError):
    pass
