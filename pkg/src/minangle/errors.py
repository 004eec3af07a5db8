"""Exception hierarchy shared by every module."""


class MinAngleError(Exception):
    """Base class for all errors raised by this package."""


class FactorizationError(MinAngleError):
    pass


class RankDeficiencyError(MinAngleError):
    def __init__(self, message, singular_value=None):
        super().__init__(message)
        self.singular_value = singular_value


class DimensionMismatchError(MinAngleError, ValueError):
    pass


class NormalizationError(MinAngleError, ValueError):
    pass


class InvalidObjectError(MinAngleError, ValueError):
    """A subspace, projection or isometry failed its structural checks."""


class IllConditionedProjectionError(MinAngleError):
    pass


class ZeroProjectionError(MinAngleError, ValueError):
    pass


class ToleranceConflictError(MinAngleError):
    """Two independent numerical routes disagreed on a yes/no question."""


class UndefinedRelationError(MinAngleError, ValueError):
    pass


class DomainError(MinAngleError, KeyError):
    pass


class SelectorContractError(MinAngleError):
    pass


class PreserverViolationError(MinAngleError):
    def __init__(self, message, evidence=None):
        super().__init__(message)
        self.evidence = evidence or {}


class NotAWignerMapError(MinAngleError):
    def __init__(self, message, line=None):
        super().__init__(message)
        self.line = line


class CertificateFailure(MinAngleError):
    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = point


class RegimeError(MinAngleError, ValueError):
    """Arguments fall outside the dimension regime an operation is defined for."""


class HypothesisInfeasibleError(MinAngleError):
    pass
