"""Exception hierarchy shared by every module."""


class ZeroSumError(Exception):
    """Base class for all errors raised by this package."""


class InvalidGroupError(ZeroSumError, ValueError):
    pass


class InvalidElementError(ZeroSumError, ValueError):
    pass


class NotSubsequenceError(ZeroSumError, ValueError):
    pass


class EmptySetError(ZeroSumError, ValueError):
    pass


class TooSmallError(ZeroSumError, ValueError):
    pass


class EmptySequenceError(ZeroSumError, ValueError):
    pass


class SequenceTooShortError(ZeroSumError, ValueError):
    pass


class OutOfRangeError(ZeroSumError, ValueError):
    pass


class NoWitnessError(ZeroSumError, ValueError):
    pass


class PreconditionError(ZeroSumError, ValueError):
    """A lemma checker was handed an input outside the lemma's hypotheses."""


class StaleCheckpointError(ZeroSumError):
    pass


class ConditionOneError(ZeroSumError):
    """The instance already has 0 in its n-sum set; the proof construction does not apply."""


class TraceFailure(ZeroSumError):
    """A claim of the proof construction failed on a concrete instance.

    Carries the name of the violated step and the objects involved so the
    failure can be reproduced.
    """

    def __init__(self, step, message, objects=None):
        super().__init__(f"{step}: {message}")
        self.step = step
        self.objects = dict(objects or {})


class LiteralParseError(ZeroSumError, ValueError):
    def __init__(self, message, text, offset):
        super().__init__(f"{message} at offset {offset} in {text!r}")
        self.text = text
        self.offset = offset
