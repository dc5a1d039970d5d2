"""Exception types raised by the engine."""


class DiffAlgError(Exception):
    """Base class for every error raised by this package."""


class UndefinedSymbol(DiffAlgError):
    """An expression referenced a name that is not declared."""


class NonCommutingTable(DiffAlgError):
    """A derivation table fails the commutation check on a generator."""

    def __init__(self, generator, first, second, residual):
        self.generator = generator
        self.first = first
        self.second = second
        self.residual = residual
        super().__init__(
            f"derivations {first} and {second} do not commute on {generator}: "
            f"bracket residual {residual}"
        )


class DivisionByZero(DiffAlgError):
    """A denominator is identically zero (directly or after substitution)."""


class ConstantPolynomial(DiffAlgError):
    """Leader, initial or separant requested for an element of the coefficient field."""


class NotOnVariety(DiffAlgError):
    """A point does not satisfy the presentation it was evaluated against."""


class NotOnGroup(DiffAlgError):
    """A point does not lie on the declared group."""


class DimensionMismatch(DiffAlgError):
    """Tuple lengths disagree (section arity, matrix sizes, point arity)."""


class CertificateError(DiffAlgError):
    """A reduction certificate failed to replay; indicates an internal bug."""


class ParseError(DiffAlgError):
    """Syntax error in an expression or session file."""

    def __init__(self, message, line=1, column=1):
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class SessionError(DiffAlgError):
    """Semantic error in a session file (unknown object, bad declaration)."""
