"""
Exception hierarchy for greenvar
"""

from typing import Optional


class GreenvarError(Exception):
    """Base class for all greenvar errors"""


class EmptyDataset(GreenvarError, ValueError):
    """Raised when a dataset holds no records"""

    def __init__(self, message: str = "no records"):
        super().__init__(message)


class InvalidRecord(GreenvarError, ValueError):
    """Raised for a record violating the time/status contract"""

    def __init__(self, index: int, reason: str, line: Optional[int] = None):
        self.index = index
        self.reason = reason
        self.line = line
        where = f"line {line}" if line is not None else f"record {index}"
        super().__init__(f"{where}: {reason}")


class InvalidAlpha(GreenvarError, ValueError):
    """Raised when alpha lies outside (0, 1)"""


class InvalidVariance(GreenvarError, ValueError):
    """Raised when a variance argument is negative"""


class InvalidBins(GreenvarError, ValueError):
    """Raised when diagnostic time bins are empty or overlap"""


class DegenerateBin(GreenvarError, ValueError):
    """Raised when a diagnostic bin has zero variance across replications"""


class InvalidConfig(GreenvarError, ValueError):
    """Raised when a configuration value fails validation"""

    def __init__(self, field: str, reason: str):
        self.field = field
        self.reason = reason
        super().__init__(f"{field}: {reason}")


class DatasetUnreadable(GreenvarError, OSError):
    """Raised when an input file cannot be opened or decoded"""
