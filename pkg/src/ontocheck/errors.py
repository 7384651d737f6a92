"""Exception hierarchy shared by all ontocheck modules."""


class OntocheckError(Exception):
    """Base class for library errors."""


class ValidationError(OntocheckError, ValueError):
    """An object violates one of its type invariants.

    ``problems`` lists every violated invariant, not only the first one.
    """

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class UnknownVariableError(OntocheckError, NameError):
    """A variable name does not resolve in a distribution."""


class SupportError(OntocheckError, ValueError):
    """Conditioning on an event with (numerically) zero probability."""


class ShapeError(OntocheckError, ValueError):
    """Dimensions or variable spaces of two operands do not match."""


class ArgumentError(OntocheckError, ValueError):
    """Invalid combination of arguments (overlapping sets, bad sizes, ...)."""


class CompletenessError(OntocheckError, ValueError):
    """The measurement set is not tomographically complete."""


class NotPureError(OntocheckError, ValueError):
    """Reconstructed density operator is too far from a pure state."""


class InsufficientDataError(OntocheckError, ValueError):
    """No conditioning cell has enough records for an estimate."""
