"""Exception types shared across the package."""


class ParseError(ValueError):
    """Malformed textual expression, config entry, or function file."""


class BracketOverflowError(OverflowError):
    """Norm bracketing left the representable float range; the input is ill-posed."""


class HypothesisNotEstablished(RuntimeError):
    """A verifier refused to run because a required certificate could not be found.

    ``evidence`` carries the counterexample or failed check report that blocked
    the hypothesis, so callers can echo it.
    """

    def __init__(self, message, evidence=None):
        super().__init__(message)
        self.evidence = evidence
