class BlockmodelError(Exception):
    pass


class DataError(BlockmodelError, ValueError):
    """Malformed or inconsistent input data."""


class UndefinedCriterionError(BlockmodelError, ArithmeticError):
    """The correlation is undefined because X or Y has zero weighted variance.

    ``which`` is ``"x"``, ``"y"`` or ``"xy"``.
    """

    def __init__(self, which: str, message: str | None = None):
        self.which = which
        if message is None:
            if which == "y":
                message = "ideal values are constant (trivial blockimage)"
            elif which == "x":
                message = "observed values are constant"
            else:
                message = "observed and ideal values are both constant"
        super().__init__(message)


class NotApplicableError(BlockmodelError):
    """The penalty criterion was requested on valued data."""


class SearchLimitExceeded(BlockmodelError):
    pass
