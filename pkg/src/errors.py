"""
Exception hierarchy shared by the engine, the CLI and the HTTP service
"""


class HodgeError(Exception):
    """Base class for all engine errors"""


class DimensionMismatch(HodgeError):
    """Blow-up center has the wrong dimension for the given codimension"""


class OutOfRange(HodgeError):
    """Argument outside the domain of an operation"""


class InconsistentChi(HodgeError):
    """A middle row reconstructed from Euler characteristics is not a Hodge row"""


class IndexOutOfI(HodgeError):
    """(r, s) is not an inner index for the current dimension"""


class MalformedRecipe(HodgeError):
    """Recipe violates its structural invariants"""


class ZeroPolynomial(HodgeError):
    """Polynomial has no nonzero monomial"""


class ConstructionError(HodgeError):
    """A produced diamond failed verification"""


class ParseError(HodgeError):
    """Text input could not be parsed"""

    def __init__(self, line: int, message: str):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}")
