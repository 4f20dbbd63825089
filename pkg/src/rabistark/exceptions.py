"""Exception hierarchy used across the package."""


class RabiStarkError(Exception):
    """Base class for all errors raised by rabistark."""


class ParameterError(RabiStarkError, ValueError):
    """Invalid physical parameters."""


class ChiOutOfRange(ParameterError):
    """Stark ratio outside the physical window |chi| <= 1."""


class NonPositiveFrequency(ParameterError):
    """Boson frequency or qubit splitting is not strictly positive."""


class DomainError(RabiStarkError, ValueError):
    """A closed-form expression was evaluated outside its domain of validity."""


class CommutatorViolation(RabiStarkError):
    """The Hamiltonian does not commute with the parity operator."""


class ConvergenceFailure(RabiStarkError):
    """An eigen-decomposition missed its residual bound."""


class TruncationCeiling(RabiStarkError):
    """Fock-space truncation would have to exceed the configured hard cap."""


class ImpureParity(RabiStarkError):
    """A state is not a parity eigenstate to the required accuracy."""


class GridTooSmall(RabiStarkError):
    """The position grid does not cover the support of a wavefunction."""


class DegeneratePeak(RabiStarkError):
    """A wavepacket maximum sits on the edge of the sampling grid."""


class ReconstructionMismatch(RabiStarkError):
    """Energy parts do not add back up to the eigenvalue."""
