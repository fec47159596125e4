"""
Exception hierarchy shared by the samplers, numerics and the bench harness
"""


class SamplingError(Exception):
    """Base class for every library error"""


class TapeExhausted(SamplingError):
    """A replay source was read past the end of its tape"""


# Samplers propagate the replay error under this name
SourceExhausted = TapeExhausted


class DigitUndecidable(SamplingError):
    """A binary digit stayed ambiguous within the refinement budget (dyadic value modeled as an enclosure)"""


class EnclosureBudgetExceeded(SamplingError):
    """An enclosure could not be narrowed enough, or a boundary comparison stayed undecided"""


class NonterminatingQuantile(SamplingError):
    """Inversion did not reach the stopping width within the configured bit budget"""


class InvalidLeaf(SamplingError, ValueError):
    """Symbol or exit-leaf index not present in the conditional model"""


class DepthCapTooSmall(SamplingError):
    """Tree enumeration left more unresolved mass than allowed"""


class TooFewBits(SamplingError, ValueError):
    """Statistical bit tests need more input bits"""


class UnknownLaw(SamplingError, ValueError):
    """Law or catalog name not recognized"""


class InvalidDistribution(SamplingError, ValueError):
    """Probability vector malformed or not summing to one"""


class InvalidEpsilon(SamplingError, ValueError):
    """Accuracy parameter not a positive dyadic rational"""
