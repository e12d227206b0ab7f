"""Exception types raised across the library."""


class BlisError(Exception):
    """Base class for every library-specific error."""


# graph construction and queries
class SelfLoop(BlisError):
    pass


class NegativeWeight(BlisError):
    pass


class DuplicateEdgeConflict(BlisError):
    pass


class DisconnectedGraph(BlisError):
    pass


class DuplicatePoints(BlisError):
    pass


class KTooLarge(BlisError):
    pass


# spectral machinery
class EigSolverFailure(BlisError):
    pass


class SpectrumOutOfRange(BlisError):
    pass


class InvalidG(BlisError):
    pass


class NonPositiveWeight(BlisError):
    pass


class LengthMismatch(BlisError):
    pass


# wavelets and transforms
class NegativeUnderSqrt(BlisError):
    pass


class BadPathIndex(BlisError):
    pass


class OrderTooLarge(BlisError):
    pass


class ShapeMismatch(BlisError):
    pass


# counterexample construction
class NotBipartite(BlisError):
    pass


class EigenvalueMissing(BlisError):
    pass


class DiameterTooSmall(BlisError):
    pass


class SetsTooClose(BlisError):
    pass


# data generation and experiments
class GraphDisconnected(BlisError):
    pass


class DegenerateLabels(BlisError):
    pass


class MissingDataset(BlisError):
    pass


class DimMismatch(BlisError):
    pass
