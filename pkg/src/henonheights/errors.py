"""Exception types raised across the package."""


class ParseError(ValueError):
    """Malformed polynomial expression.

    ``position`` is the 0-based character offset where parsing failed.
    """

    def __init__(self, message, text="", position=0):
        self.message = message
        self.text = text
        self.position = position
        super().__init__(f"{message} at position {position}")

    def pointer(self):
        return f"{self.text}\n{' ' * self.position}^"


class ConfigError(ValueError):
    pass


class NotRegular(ValueError):
    """The family violates the regularity normalization (or has degree < 2)."""

    def __init__(self, condition, detail=""):
        self.condition = condition
        self.detail = detail
        msg = condition if not detail else f"{condition}: {detail}"
        super().__init__(msg)


class BadParameter(ValueError):
    pass


class NearBadParam(BadParameter):
    pass


class DegreeCapExceeded(RuntimeError):
    """Raised when h(f^n z) exceeds the configured cap.

    ``degrees`` holds the partial sequence including the offending value.
    """

    def __init__(self, step, degrees, cap):
        self.step = step
        self.degrees = list(degrees)
        self.cap = cap
        super().__init__(f"degree {self.degrees[-1]} exceeds cap {cap} at step {step}")


class ResultantDegenerate(ArithmeticError):
    pass


class NotACycle(ValueError):
    pass


class Unresolved(RuntimeError):
    """Arithmetic degree could not be decided; ``data`` carries what was gathered."""

    def __init__(self, message, data=None):
        self.data = data or {}
        super().__init__(message)


class InsufficientGrid(ValueError):
    pass
