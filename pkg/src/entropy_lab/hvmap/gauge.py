"""Gauge units u_n with u_n u_{n-3} = (u_{n-1} u_{n-2})^k.

Each u_n is a monomial in mu1, mu2, mu3; the exponent vectors obey the same
linear recurrence additively, so they are tracked exactly as integer triples.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ..exactpoly import AB, GAUGE, HomoPoly
from .projective import check_k


class DegenerateGauge(ValueError):
    pass


def gauge_exponents(k, n_max):
    """{n: (e1, e2, e3)} for -4 <= n <= n_max with u_n = mu1^e1 mu2^e2 mu3^e3."""
    check_k(k)
    ex = {-4: (-1, k, k), -3: (0, 0, 1), -2: (0, 1, 0)}
    for n in range(-1, n_max + 1):
        u1, u2, u3 = ex[n - 1], ex[n - 2], ex[n - 3]
        ex[n] = tuple(k * (x + y) - z for x, y, z in zip(u1, u2, u3))
    return ex


@dataclass(frozen=True)
class GaugeSeq:
    k: int
    n_max: int
    mu: tuple
    exponents: dict = field(repr=False)

    def monomial(self, n):
        e = self.exponents[n]
        return GAUGE.gen("mu1") ** e[0] * GAUGE.gen("mu2") ** e[1] * GAUGE.gen("mu3") ** e[2]

    def value(self, n):
        e = self.exponents[n]
        out = 1
        for m, x in zip(self.mu, e):
            out = out * m ** x
        return out

    def values(self):
        return {n: self.value(n) for n in sorted(self.exponents)}


def gauge_sequence(k, n_max, mu=None):
    """u_{-4}..u_{n_max}; mu defaults to the symbolic units of the gauge ring."""
    if mu is None:
        mu = (GAUGE.gen("mu1"), GAUGE.gen("mu2"), GAUGE.gen("mu3"))
    else:
        mu = tuple(Fraction(m) if isinstance(m, (int, Fraction)) else m for m in mu)
    if len(mu) != 3:
        raise ValueError("three units mu1, mu2, mu3 are needed")
    for m in mu:
        if (isinstance(m, HomoPoly) and m.is_zero()) or (not isinstance(m, HomoPoly) and m == 0):
            raise DegenerateGauge("a gauge unit is zero")
    return GaugeSeq(k, n_max, mu, gauge_exponents(k, n_max))


def transformed_arguments(k, mu):
    """(a mu3 / (mu1 mu2)^k, mu1 b / (mu2 mu3)^k) for symbolic or numeric mu."""
    m1, m2, m3 = mu
    return (m3 / (m1 * m2) ** k, m1 / (m2 * m3) ** k)


def covariant_image(P, k, n, gseq=None):
    """u_n * P(a mu3/(mu1 mu2)^k, mu1 b/(mu2 mu3)^k) in the gauge ring, for P in Z[a,b]."""
    if P.ring != AB:
        raise ValueError("expected a polynomial in a, b")
    g = GAUGE.gen
    m1, m2, m3 = g("mu1"), g("mu2"), g("mu3")
    xa = g("a") * m3 * m1 ** (-k) * m2 ** (-k)
    xb = g("b") * m1 * m2 ** (-k) * m3 ** (-k)
    gseq = gseq or gauge_sequence(k, n)
    return gseq.monomial(n) * P.substitute({"a": xa, "b": xb}, GAUGE)
