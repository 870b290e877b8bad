"""x_n written as a reduced product of chain entries.

The exponent of p'_{n-j} is beta_j - k(beta_0 + ... + beta_{j-1}).  For even k
this leaves p'_n p'_{n-3} over (p'_{n-1} p'_{n-2})^k; for odd k the pattern is
(1, -k, -k) repeating.  The symbol for this pattern collides with the gauge
units elsewhere, hence the name `exp_pattern`.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ..exactpoly import HomoPoly
from ..sequences import beta_seq


def exp_pattern(k, n):
    """Exponents (mu_0, ..., mu_n) of p'_n, p'_{n-1}, ..., p'_0 in c*x_n."""
    beta = beta_seq(k, n).values
    out, acc = [], 0
    for j in range(n + 1):
        out.append(beta[j] - k * acc)
        acc += beta[j]
    return tuple(out)


def periodic_pattern(k, n):
    return tuple(1 if j % 3 == 0 else -k for j in range(n + 1))


@dataclass(frozen=True)
class ReducedFraction:
    k: int
    n: int
    numerator: tuple    # ((chain index, HomoPoly, exponent), ...)
    denominator: tuple
    c_power: int        # power of c in the denominator (0 at c = 1)

    def pattern(self):
        out = {}
        for j, _, e in self.numerator:
            out[j] = e
        for j, _, e in self.denominator:
            out[j] = -e
        return out

    def evaluate(self, point):
        num = Fraction(1)
        for _, f, e in self.numerator:
            num *= f.evaluate(point) ** e
        den = Fraction(point["c"]) ** self.c_power if self.c_power else Fraction(1)
        for _, f, e in self.denominator:
            den *= f.evaluate(point) ** e
        if den == 0:
            raise ZeroDivisionError("denominator vanishes at this point")
        return num / den

    def degrees(self):
        """(numerator degree, denominator degree) as homogeneous degrees."""
        dn = sum(f.homogeneous_degree() * e for _, f, e in self.numerator)
        dd = self.c_power + sum(f.homogeneous_degree() * e for _, f, e in self.denominator)
        return dn, dd

    def expand(self):
        ring = (self.numerator or self.denominator)[0][1].ring
        num = HomoPoly.constant(1, ring)
        for _, f, e in self.numerator:
            num = num * f ** e
        den = ring.gen("c") ** self.c_power if self.c_power else HomoPoly.constant(1, ring)
        for _, f, e in self.denominator:
            den = den * f ** e
        return num, den

    def to_json(self):
        return {
            "k": self.k, "n": self.n, "c_power": self.c_power,
            "numerator": [{"index": j, "exponent": e} for j, _, e in self.numerator],
            "denominator": [{"index": j, "exponent": e} for j, _, e in self.denominator],
        }


def x_reduced(chain, n):
    if chain.convention == "gauge":
        raise ValueError("x_reduced needs the homogeneous or plane chain")
    if n > chain.n:
        raise IndexError(f"chain only reaches n = {chain.n}")
    mu = exp_pattern(chain.k, n)
    num, den = [], []
    for j, e in enumerate(mu):
        idx = n - j
        if e > 0:
            num.append((idx, chain[idx], e))
        elif e < 0:
            den.append((idx, chain[idx], -e))
    cp = 1 if chain.convention == "homogeneous" else 0
    return ReducedFraction(chain.k, n, tuple(num), tuple(den), cp)
