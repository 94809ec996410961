"""Exception classes raised across the package."""


class DatasetError(ValueError):
    """Raised when a collection of labeled series cannot form a dataset."""


class ShapeMismatchError(DatasetError):
    """Raised when a sample's shape differs from the first sample's shape.

    Attributes
    ----------
    index : int
        Position of the first offending sample.
    """

    def __init__(self, index, expected, got):
        self.index = index
        self.expected = tuple(expected)
        self.got = tuple(got)
        super().__init__(
            f"sample {index} has shape {self.got}, expected {self.expected}"
        )


class NonFiniteError(DatasetError):
    """Raised when a series contains NaN or infinite values."""


class InsufficientNeighborsError(ValueError):
    """Raised when a class has too few members for a k-neighbor query."""


class EnumerationBudgetError(ValueError):
    """Raised when exhaustive warping-path enumeration would be too large."""


class TrainingDivergedError(RuntimeError):
    """Raised when a training loss becomes non-finite.

    Attributes
    ----------
    last_finite_epoch : int
        Last epoch whose mean loss was finite (0 means the initial evaluation).
    history : list of float
        Epoch-mean losses recorded up to the divergence.
    """

    def __init__(self, last_finite_epoch, history=()):
        self.last_finite_epoch = last_finite_epoch
        self.history = list(history)
        super().__init__(
            f"training loss became non-finite after epoch {last_finite_epoch}"
        )


class ModelFormatError(ValueError):
    """Raised when a model file is malformed or has an unsupported version."""


class ParseError(DatasetError):
    """Raised when a delimited dataset file cannot be parsed.

    Attributes
    ----------
    lineno : int
        1-based line number of the offending row.
    """

    def __init__(self, lineno, message):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}")
