"""Exception hierarchy.

Every error raised on purpose by the library derives from
:class:`SymSpringerError`.  The three top-level families map onto CLI exit
codes: invalid input (2), precision failure (3), resource guard (4).
"""


class SymSpringerError(Exception):
    exit_code = 1


class InvalidInput(SymSpringerError, ValueError):
    exit_code = 2


class NotPrime(InvalidInput):
    pass


class EvenCharacteristic(InvalidInput):
    pass


class FieldMismatch(InvalidInput):
    pass


class NoEmbedding(InvalidInput):
    pass


class SeriesSyntaxError(InvalidInput, SyntaxError):
    def __str__(self):
        return str(self.args[0]) if self.args else ""


class ShapeMismatch(InvalidInput):
    pass


class Singular(InvalidInput):
    pass


class NotRegular(InvalidInput):
    pass


class ValuationOfZero(InvalidInput):
    pass


class OddDiscriminantValuation(InvalidInput):
    """v(disc) is odd, so the eigenvalues do not all lie in F."""


class WindowExceeded(InvalidInput):
    pass


class DivisionByZero(InvalidInput, ZeroDivisionError):
    pass


class InsufficientPrecision(SymSpringerError, ArithmeticError):
    exit_code = 3


class TooLarge(SymSpringerError):
    exit_code = 4


class Undetermined(SymSpringerError):
    """Point counts do not pin down a growth degree."""
