"""Exception types shared across commutclass."""


class CommutclassError(Exception):
    """Base exception for commutclass errors."""

    pass


class InvalidInputError(CommutclassError, ValueError):
    """Raised when an argument violates an operation's precondition."""

    pass


class NyquistError(InvalidInputError):
    """Raised when an evolution time is beyond what the energy grid resolves."""

    def __init__(self, t: float, bound: float) -> None:
        super().__init__(f"|t|={abs(t):.6g} exceeds the Nyquist bound {bound:.6g} (pass allow_aliasing=True to force)")
        self.t = t
        self.bound = bound


class ExprError(CommutclassError, ValueError):
    """Base exception for kernel expression errors."""

    pass


class ExprSyntaxError(ExprError):
    """Raised when an expression cannot be parsed."""

    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


class UnknownIdentifierError(ExprError):
    """Raised for identifiers that are neither variables, constants nor functions."""

    def __init__(self, name: str, offset: int) -> None:
        super().__init__(f"Unknown identifier '{name}' at offset {offset}")
        self.name = name
        self.offset = offset


class ArityError(ExprError):
    """Raised when a function is called with the wrong number of arguments."""

    def __init__(self, name: str, expected: int, got: int, offset: int) -> None:
        super().__init__(f"Function '{name}' takes {expected} argument(s), got {got} at offset {offset}")
        self.name = name
        self.offset = offset


class ExprEvaluationError(ExprError):
    """Raised when evaluation produces a non-finite value."""

    def __init__(self, node: str) -> None:
        super().__init__(f"Non-finite value while evaluating '{node}'")
        self.node = node


class CheckFailedError(CommutclassError):
    """Raised when a numerical invariant check fails."""

    def __init__(self, name: str, residual: float, tolerance: float) -> None:
        super().__init__(f"Invariant '{name}' failed: residual {residual:.3e} > tolerance {tolerance:.3e}")
        self.name = name
        self.residual = residual
        self.tolerance = tolerance
