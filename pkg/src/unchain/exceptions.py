"""Exception hierarchy.

Everything raised for bad input derives from :class:`ValidationError` so the
CLI can map it to a single exit code.
"""


class ValidationError(ValueError):
    """Base class for rejected inputs."""


class MetricError(ValidationError):
    """The distance matrix is not a valid finite metric."""


class ShapeError(MetricError):
    pass


class NegativeDistanceError(MetricError):
    pass


class NonFiniteDistanceError(MetricError):
    pass


class AsymmetryError(MetricError):
    def __init__(self, i, j, dij, dji):
        self.i, self.j = i, j
        super().__init__(f"d[{i}][{j}] = {dij} but d[{j}][{i}] = {dji}")


class NonzeroDiagonalError(MetricError):
    def __init__(self, i, value):
        self.i = i
        super().__init__(f"d[{i}][{i}] = {value}, expected 0")


class ZeroOffDiagonalError(MetricError):
    """Two distinct labels at distance zero (duplicate points)."""

    def __init__(self, i, j):
        self.i, self.j = i, j
        super().__init__(f"d[{i}][{j}] = 0 for distinct points {i} and {j}")


class TriangleViolation(MetricError):
    """``d[i][k] > d[i][j] + d[j][k]``."""

    def __init__(self, i, j, k, lhs, rhs):
        self.i, self.j, self.k = i, j, k
        self.indices = (i, j, k)
        super().__init__(
            f"triangle inequality fails: d[{i}][{k}] = {lhs} > d[{i}][{j}] + d[{j}][{k}] = {rhs}"
        )


class NotUltrametricError(MetricError):
    pass


class DisconnectedGraphError(ValidationError):
    pass


class IndexSetMismatch(ValidationError):
    pass


class InvalidPartitionError(ValidationError):
    pass


class InvalidDendrogramError(ValidationError):
    pass


class EmptySubsetError(ValidationError):
    pass


class OverlappingBlocksError(ValidationError):
    pass


class CoverageError(ValidationError):
    """A relation that fails to cover one of the two point sets."""


class LabelMismatch(ValidationError):
    pass


class ParseError(ValidationError):
    def __init__(self, message, line=None, column=None):
        self.line, self.column = line, column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column})" if column is not None else ")")
        super().__init__(message + where)


class BudgetExceeded(RuntimeError):
    """Search stopped before certifying an exact value.

    ``lower`` and ``upper`` bracket the true value; both are certified.
    """

    def __init__(self, lower, upper, nodes):
        self.lower, self.upper, self.nodes = lower, upper, nodes
        super().__init__(f"node budget exhausted after {nodes} nodes; value in [{lower}, {upper}]")
