"""Exception hierarchy shared by every mvkit module.

Three families are distinguished because the command-line front end maps
them onto different exit codes:

* :class:`ValidationError` -- the input data is malformed (exit code 3)
* :class:`ParameterError` -- a hyperparameter is invalid (usage, exit code 2)
* :class:`NumericalError` -- a solver failed or did not converge (exit code 4)
"""


class MvkitError(Exception):
    """Base class for all mvkit errors."""


class ValidationError(MvkitError, ValueError):
    """Input data violates the multiview data contract."""


class ParameterError(MvkitError, ValueError):
    """A hyperparameter or configuration object is invalid."""


class NumericalError(MvkitError, ArithmeticError):
    """A numerical routine failed."""


class ShapeMismatch(ValidationError):
    pass


class NonFinite(ValidationError):
    pass


class ViewCountError(ValidationError):
    pass


class EmptyInput(ValidationError):
    pass


class LengthMismatch(ValidationError):
    pass


class RankError(ValidationError):
    """Requested rank or component count exceeds what the data supports."""


class ZeroRow(ValidationError):
    pass


class NotBinary(ValidationError):
    pass


class NoLabeled(ValidationError):
    pass


class DegenerateInput(ValidationError):
    pass


class IoError(ValidationError):
    pass


class ParseError(ValidationError):
    def __init__(self, message, path=None, line=None, column=None):
        loc = ""
        if path is not None:
            loc = f"{path}"
            if line is not None:
                loc += f":{line}"
                if column is not None:
                    loc += f":{column}"
            loc += ": "
        super().__init__(loc + message)
        self.path = path
        self.line = line
        self.column = column


class BadSpec(ParameterError):
    pass


class BadBoundaries(ParameterError):
    pass


class BadParams(ParameterError):
    pass


class KernelError(ParameterError):
    pass


class NotFitted(MvkitError, AttributeError):
    """Raised when transform/predict is called before fit."""


class NumericalFailure(NumericalError):
    pass


class ConvergenceFailure(NumericalError):
    pass


class ConvergenceWarning(UserWarning):
    """An iterative solver stopped at max_iter; the result is flagged."""
