"""Exception hierarchy shared by all modules."""


class GogError(Exception):
    """Base class for every error raised by gogfold."""


class TrivialWord(GogError, ValueError):
    pass


class DimensionMismatch(GogError, ValueError):
    pass


class InvalidGraph(GogError, ValueError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("; ".join(str(d) for d in self.diagnostics) or "invalid graph")


class TypeMismatch(GogError, TypeError):
    pass


class PreconditionFailed(GogError, ValueError):
    pass


class UnsupportedVertexGroup(GogError, NotImplementedError):
    pass


class EdgeInTree(GogError, ValueError):
    pass


class ProtectedSet(GogError, ValueError):
    pass


class NotClosed(GogError, ValueError):
    pass


class IllTyped(GogError, TypeError):
    pass


class NotApplicable(GogError, ValueError):
    pass


class NotFolded(GogError, ValueError):
    pass


class BudgetExceeded(GogError, RuntimeError):
    def __init__(self, budget, trace):
        self.budget = budget
        self.trace = list(trace)
        super().__init__(f"folding exceeded budget of {budget} moves")


class ParseError(GogError, ValueError):
    def __init__(self, message, line=0, column=0):
        self.line = line
        self.column = column
        super().__init__(f"{message} (line {line}, column {column})")
