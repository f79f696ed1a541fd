"""Exception hierarchy shared across the package.

Every error raised by the library derives from :class:`ColliderLabError`,
so callers (CLI, HTTP service) can map library failures to exit codes or
status codes with a single except clause.
"""


class ColliderLabError(Exception):
    """Base class for all errors raised by colliderlab."""


# --- graph errors ---------------------------------------------------------

class GraphError(ColliderLabError):
    pass


class CycleError(GraphError):
    """The edge set contains a directed cycle."""

    def __init__(self, cycle):
        self.cycle = tuple(cycle)
        super().__init__("directed cycle: " + " -> ".join(self.cycle))


class DuplicateEdge(GraphError):
    pass


class UnknownNode(GraphError):
    pass


class NodeNotOnPath(GraphError):
    pass


# --- structural model errors ----------------------------------------------

class SemError(ColliderLabError):
    pass


class ForwardReference(SemError):
    """An assignment references a variable defined later (or never)."""


class DuplicateVariable(SemError):
    pass


class NegativeSd(SemError):
    pass


class UnknownVariable(SemError):
    pass


class ConstantColumn(SemError):
    """Rank correlation is undefined for a constant column."""


class SingularDesign(SemError):
    """Population second-moment matrix is numerically rank-deficient."""


class SpecFormatError(SemError):
    """A model spec file failed to parse or validate."""


# --- estimator errors ------------------------------------------------------

class FitError(ColliderLabError):
    pass


class RankDeficient(FitError):
    """Design matrix is collinear beyond the singular-value tolerance."""


class InsufficientData(FitError):
    pass


class PerfectFit(FitError):
    """Residuals are numerically zero; standard errors are undefined."""


class Separation(FitError):
    """Logistic likelihood is unbounded (coefficients diverging)."""


class NotBinary(FitError):
    pass


class UnknownRegressor(FitError):
    pass


class TermMissing(FitError):
    pass


# --- simulation errors -----------------------------------------------------

class NoRoot(ColliderLabError):
    """Bisection bracket contained no sign change."""
