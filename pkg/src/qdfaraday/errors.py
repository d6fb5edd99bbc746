"""Exception types raised by the simulator.

All of them derive from ``ValueError`` so callers that only care about bad
input can catch a single type.
"""


class SimulationError(ValueError):
    """Base class for every error raised by qdfaraday."""


class ZeroNormState(SimulationError):
    pass


class TooManySpins(SimulationError):
    pass


class NegligibleProbability(SimulationError):
    """Raised when a measurement outcome is too unlikely to renormalize.

    The offending probability is kept on ``self.probability``.
    """

    def __init__(self, probability, message=None):
        self.probability = float(probability)
        super().__init__(message or f"outcome probability {probability:.3e} is negligible")


class WrongArity(SimulationError):
    pass


class BadPartition(SimulationError):
    pass


class DimensionMismatch(SimulationError):
    pass


class InvalidParams(SimulationError):
    pass


class BadRange(SimulationError):
    pass


class NoSolutionInBracket(SimulationError):
    pass


class BadNodeIndex(SimulationError):
    pass


class BadWeights(SimulationError):
    pass
