"""Exact multivariate polynomials, mod-p images and certificates."""
from .errors import (ExactPolyError, NotDivisible, NotHomogeneous, RingError,
                     SubstitutionError, ZeroPolyError)
from .poly import (AB, ABC, GAUGE, HomoPoly, Ring, divide_exact, evaluate,
                   from_text, substitute, to_text)
from .modp import UniPolyModP, Modulus, specialize_modp, word_primes

__all__ = [
    "AB", "ABC", "GAUGE", "HomoPoly", "Ring", "UniPolyModP", "Modulus",
    "divide_exact", "evaluate", "from_text", "substitute", "to_text",
    "specialize_modp", "word_primes", "ExactPolyError", "NotDivisible",
    "NotHomogeneous", "RingError", "SubstitutionError", "ZeroPolyError",
]
