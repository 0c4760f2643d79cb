"""Exception types shared across the package.

Every error raised by knowctx derives from KnowctxError so callers can
catch the whole family at a single choke point (the CLI does exactly
that to map failures onto exit codes).
"""


class KnowctxError(Exception):
    """Base class for all knowctx errors."""


class ShapeMismatch(KnowctxError):
    """Array dimensions disagree with the declared layer sizes."""


class FinalLayerNotObservable(KnowctxError):
    """The last alternative set of a context must be will-be-known (level 3)."""


class NormalizationViolation(KnowctxError):
    """A row of amplitudes fails normalization under the active rule."""


class IllegalObservation(KnowctxError):
    """An event targets a layer whose knowability level forbids it."""


class OutOfOrderEvent(KnowctxError):
    """Event timestamps must be strictly increasing."""


class AlreadyResolved(KnowctxError):
    """The targeted layer has already been observed."""


class KnowabilityMismatch(KnowctxError):
    """An evaluator's knowability precondition does not hold."""


class RuleContractViolation(KnowctxError):
    """The requested computation is undefined for the active rule."""


class UnsupportedRule(KnowctxError):
    """No constraint system exists for this rule."""


class UnsupportedShape(KnowctxError):
    """The analysis is only worked out for specific layer sizes."""


class PaddingInsufficient(KnowctxError):
    """Padding did not reach the admissible alternative count."""


class ZeroAmplitudeProjection(KnowctxError):
    """Projection onto an alternative with exactly zero amplitude."""


class UnsupportedLayerCount(KnowctxError):
    """The operation is defined only for a fixed number of layers."""


class PathLimitExceeded(KnowctxError):
    """Exhaustive path enumeration would exceed the safety limit."""


class ScenarioFormatError(KnowctxError):
    """A scenario document is malformed or carries unknown fields."""
