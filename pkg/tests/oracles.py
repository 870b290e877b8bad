"""Independent reference computations used by the tests.

Nothing here imports entropy_lab.  The degree oracle iterates the map with
sympy polynomials over GF(p), the entropy oracle uses mpmath, and the orbit
oracle is a plain Fraction loop.
"""
from __future__ import annotations

from fractions import Fraction

import mpmath
import sympy

T = sympy.Symbol("t")


def _gf(expr, p):
    return sympy.Poly(expr, T, modulus=p)


def line_degrees(k, n_max, p=1_000_003, b0=12345, b1=67891):
    """deg x_n along x_0 = t, x_{-1} = b0 + b1 t, reduced fractions over GF(p)."""
    one = _gf(1, p)
    prev = (_gf(b0 + b1 * T, p), one)
    cur = (_gf(T, p), one)
    degs = [1]
    for _ in range(n_max):
        (N, D), (R, S) = cur, prev
        Nk = N ** k
        # -R/S + N/D + D^k/N^k over the common denominator S D N^k
        num = -R * D * Nk + N * S * Nk + D ** k * S * D
        den = S * D * Nk
        g = num.gcd(den)
        num, den = num.quo(g), den.quo(g)
        prev, cur = cur, (num, den)
        degs.append(max(num.degree(), den.degree()))
    return degs


def entropy_mp(k, branch, digits=40):
    mpmath.mp.dps = digits
    if branch == "even":
        return mpmath.log((k + 1 + mpmath.sqrt((k - 1) * (k + 3))) / 2)
    return mpmath.log((k + mpmath.sqrt(k * (k + 4))) / 2)


def largest_real_root(charpoly, digits=40):
    mpmath.mp.dps = digits
    roots = mpmath.polyroots([int(c) for c in charpoly], maxsteps=200, extraprec=200)
    return max(mpmath.re(r) for r in roots if abs(mpmath.im(r)) < mpmath.mpf(10) ** (-20))


def fraction_orbit(k, x_prev, x_cur, n):
    prev, cur = Fraction(x_prev), Fraction(x_cur)
    out = [cur]
    for _ in range(n):
        prev, cur = cur, -prev + cur + 1 / cur ** k
        out.append(cur)
    return out


def to_sympy(f):
    """A HomoPoly (or anything with to_text) as a sympy expression."""
    return sympy.sympify(f.to_text().replace("^", "**"))


def map_line_degrees(fn, n_max, b0=sympy.Rational(3, 7), b1=sympy.Rational(-5, 2)):
    """deg x_n over Q for any order-2 map fn(cur, prev) on sympy expressions."""
    prev, cur = b0 + b1 * T, T
    degs = [1]
    for _ in range(n_max):
        prev, cur = cur, sympy.cancel(fn(cur, prev))
        num, den = sympy.fraction(cur)
        degs.append(max(sympy.degree(num, T), sympy.degree(den, T)))
    return degs
