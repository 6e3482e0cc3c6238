"""Exception hierarchy.

Validation problems (bad inputs, malformed files) derive from
``ValidationError``; failures of the numerics themselves derive from
``NumericalError``. The CLI maps the two families to exit codes 1 and 2.
"""


class LudwickError(Exception):
    pass


class ValidationError(LudwickError, ValueError):
    pass


class DomainError(ValidationError):
    """An argument lies outside the domain of the operation."""


class InsufficientDataError(ValidationError):
    pass


class UnknownMaterialError(ValidationError):
    def __init__(self, name):
        super().__init__(f"unknown material: {name!r}")
        self.name = name


class SpanError(ValidationError):
    pass


class GridMismatchError(ValidationError):
    pass


class NumericalError(LudwickError, ArithmeticError):
    pass


class SingularFitError(NumericalError):
    pass


class InstabilityError(NumericalError):
    pass


class BracketError(NumericalError):
    pass
