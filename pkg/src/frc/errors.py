"""Exception hierarchy shared by every layer of the package."""


class FrcError(Exception):
    """Base class for all package errors."""


# fuzzy core
class EmptyKeywordSet(FrcError, ValueError):
    pass


class AllZeroWeights(FrcError, ValueError):
    def __init__(self, class_name):
        super().__init__(f"all raw weights are zero for class {class_name!r}")
        self.class_name = class_name


class DimensionMismatch(FrcError, ValueError):
    pass


# backends
class TransportError(FrcError):
    """Network failure, timeout or non-retryable HTTP status after all attempts."""


class MalformedResponse(FrcError):
    """Model output could not be parsed into the schema for its request kind."""

    def __init__(self, message, raw=None):
        super().__init__(message)
        self.raw = raw


class SchemaViolation(FrcError):
    """Output parsed but holds values that cannot be clamped into range."""


class SimplexViolation(MalformedResponse):
    """A probability vector drifts too far from summing to one to renormalize."""


# pipeline
class DegenerateInput(FrcError, ValueError):
    pass


class EmptyTraceSet(FrcError, ValueError):
    pass


# perturb
class GenerationFailed(FrcError):
    pass


class NoSwapCandidates(FrcError):
    pass


class NoSentimentToken(FrcError):
    pass


# eval
class EmptyPairSet(FrcError, ValueError):
    pass


class MissingShiftLabels(FrcError, ValueError):
    pass


class WrongClassCount(FrcError, ValueError):
    pass


class LengthMismatch(FrcError, ValueError):
    pass


class ZeroDistancePairOnly(FrcError, ValueError):
    pass


# cli
class ConfigError(FrcError):
    pass
