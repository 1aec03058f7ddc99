"""Exception types shared across the package."""


class PresentationError(ValueError):
    """A presentation (or an argument tied to one) is structurally invalid."""


class InconsistentPresentation(PresentationError):
    """A presentation failed its overlap consistency test."""


class HomCheckFailed(ValueError):
    """Generator images violate a defining relation.

    Carries the relation that failed, so callers can report a witness.
    """

    def __init__(self, relation: str):
        super().__init__(f"relation does not hold under the images: {relation}")
        self.relation = relation


class ValidationFailed(ValueError):
    """Candidate derivation images do not extend to an endomorphism.

    A legal outcome for arbitrary inputs; theorem drivers convert it into
    TheoremViolation.
    """


class TheoremViolation(RuntimeError):
    """A verification driver found a counterexample to an asserted statement."""


class PreconditionRefused(RuntimeError):
    """A driver refused to run because its hypotheses are not met."""
