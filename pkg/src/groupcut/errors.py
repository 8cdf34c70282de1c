"""Exception hierarchy shared by all groupcut modules."""


class GroupCutError(Exception):
    """Base class for every error raised by groupcut."""


class ConstructionError(GroupCutError):
    """A function could not be built from the supplied data."""


class LengthMismatch(ConstructionError):
    pass


class NotSorted(ConstructionError):
    pass


class PeriodicityViolated(ConstructionError):
    pass


class InconsistentLimits(ConstructionError):
    pass


class ParamOutOfRange(ConstructionError):
    pass


class SeriesDiverges(ConstructionError):
    pass


class NotMinimal(GroupCutError):
    pass


class NoCandidateF(GroupCutError):
    pass


class VertexNotInFace(GroupCutError):
    pass


class NoValidEpsilon(GroupCutError):
    pass


class NotContinuous(GroupCutError):
    pass


class GridTooCoarse(GroupCutError):
    pass


class NotMinimalFinite(GroupCutError):
    pass


class InternalInconsistency(GroupCutError):
    pass


class BadFamilySpec(GroupCutError):
    pass
