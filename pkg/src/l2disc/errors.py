class DomainError(ValueError):
    """Argument outside the mathematical domain of an operation."""


class SizeLimitError(ValueError):
    """Requested size exceeds a cost guard."""


class PointParseError(ValueError):
    def __init__(self, lineno, message):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class ConsistencyError(RuntimeError):
    """A numerical certificate contradicted a claimed property."""
