class BadRequestError(Exception):
    """Custom exception for bad client requests."""

    def __init__(self, message: str = "Bad request"):
        self.message = message
        super().__init__(self.message)


class SizeMismatchError(BadRequestError):
    """Raised when two objects live in symmetric groups or flag contexts of different size."""

    def __init__(self, message: str = "Size mismatch"):
        super().__init__(message)


class RingMismatchError(BadRequestError):
    """Raised when polynomials over incompatible coefficient rings are combined."""

    def __init__(self, message: str = "Coefficient rings do not match"):
        super().__init__(message)


class NonUnitError(BadRequestError):
    """Raised when a series with a non-unit constant term is inverted."""

    def __init__(self, message: str = "Constant term is not a unit"):
        super().__init__(message)


class UnboundVariableError(BadRequestError):
    """Raised by strict substitution when a variable has no binding."""

    def __init__(self, variable: str = "variable"):
        super().__init__(f"Unbound variable: {variable}")


class ParseError(BadRequestError):
    """Raised when permutation, polynomial or law text cannot be parsed."""

    def __init__(self, message: str = "Could not parse input"):
        super().__init__(message)


class AxiomError(BadRequestError):
    """Raised when a formal group law violates a precondition."""

    def __init__(self, message: str = "Formal group law axiom violated"):
        super().__init__(message)


class CapExceededError(BadRequestError):
    """Raised when a request exceeds the enumeration caps."""

    def __init__(self, message: str = "Requested size exceeds the supported cap"):
        super().__init__(message)


class NonPermissibleError(BadRequestError):
    """Raised when a rank table is not produced by any permutation."""

    def __init__(self, message: str = "Rank table is not permissible"):
        super().__init__(message)


class NonDivisibleError(Exception):
    """Exact division left a nonzero remainder. Never truncated silently."""

    def __init__(self, message: str = "NON-DIVISIBLE: remainder is nonzero"):
        self.message = message
        super().__init__(self.message)


class WhitneyDivisionError(Exception):
    """A factor multiset was divided by one it does not contain."""

    def __init__(self, message: str = "Factor multiset is not contained in the dividend"):
        self.message = message
        super().__init__(self.message)


class PostconditionError(Exception):
    """An operation produced a result that breaks its own guarantee."""

    def __init__(self, message: str = "Result violates the operation's guarantee"):
        self.message = message
        super().__init__(self.message)
