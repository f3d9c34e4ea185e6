"""Exception hierarchy shared by every module of the package."""


class DmccrfError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(DmccrfError, ValueError):
    pass


class MissingColumn(DmccrfError, ValueError):
    def __init__(self, columns):
        self.columns = list(columns)
        super().__init__(f"missing column(s): {', '.join(self.columns)}")


class ParseError(DmccrfError, ValueError):
    """A data cell could not be parsed as a finite real.

    ``row`` is the 1-based data row (the header is not counted).
    """

    def __init__(self, row, col, value):
        self.row = row
        self.col = col
        self.value = value
        super().__init__(f"cannot parse {value!r} at row {row}, column {col!r}")


class EmptyDataset(DmccrfError, ValueError):
    pass


class DegenerateSplit(DmccrfError, ValueError):
    pass


class SolveFailure(DmccrfError, ArithmeticError):
    pass


class NotPositiveDefinite(DmccrfError, ArithmeticError):
    pass


class SequenceTooShort(DmccrfError, ValueError):
    pass


class NonFiniteObjective(DmccrfError, ArithmeticError):
    pass


class ZeroTarget(DmccrfError, ValueError):
    def __init__(self, index):
        self.index = index
        super().__init__(f"MAPE undefined: true target is zero at index {index}")


class EmptyInput(DmccrfError, ValueError):
    pass


class GridTooCoarse(DmccrfError, ArithmeticError):
    pass


class ScenarioError(DmccrfError):
    """Wraps a failure raised while running one benchmark scenario."""

    def __init__(self, scenario, cause):
        self.scenario = scenario
        self.cause = cause
        super().__init__(f"scenario {scenario}: {type(cause).__name__}: {cause}")
