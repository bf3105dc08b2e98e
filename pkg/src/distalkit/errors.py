"""Exception types raised across the package."""


class DistalKitError(ValueError):
    pass


# pl_core
class NotMonotone(DistalKitError):
    pass


class EndpointViolation(DistalKitError):
    pass


class DuplicateParameter(DistalKitError):
    pass


class OutOfDomain(DistalKitError):
    pass


class OutOfRange(DistalKitError):
    pass


class EmptyInput(DistalKitError):
    pass


class NonCanonicalRational(DistalKitError):
    pass


# type_chains
class InvalidChain(DistalKitError):
    pass


class DimensionMismatch(DistalKitError):
    pass


class MissingPair(DistalKitError):
    pass


class InconsistentAverages(DistalKitError):
    pass


# indiscernibles
class TooShort(DistalKitError):
    pass


class ArityMismatch(DistalKitError):
    pass


class DiagonalConditionFailed(DistalKitError):
    pass


class PreconditionFailed(DistalKitError):
    pass


# distal_cells
class BTooSmall(DistalKitError):
    pass


# seh
class NotUltrametric(DistalKitError):
    pass


class CertificateInvalid(DistalKitError):
    """A homogeneity claim failed its exhaustive re-check."""


class CutterContractViolation(DistalKitError):
    pass


class FinderContractViolation(DistalKitError):
    pass


class NoSuchN(DistalKitError):
    pass


class DuplicatePoints(DistalKitError):
    pass


class NotPrime(DistalKitError):
    pass


class ZeroElement(DistalKitError):
    pass
