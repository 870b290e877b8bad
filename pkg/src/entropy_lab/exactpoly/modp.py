"""Dense univariate polynomials over a prime field and mod-p specialisation.

Coefficients are Python ints in [0, p).  Products of long operands go
through Kronecker packing into a single big integer, and remainders modulo a
fixed polynomial use a precomputed power-series inverse (Barrett style), which
keeps repeated squaring modulo f cheap in pure Python.
"""
from __future__ import annotations

import random
from functools import lru_cache

import flint

from .errors import RingError
from .kron import _degs

_SCHOOLBOOK = 24


@lru_cache(maxsize=None)
def word_primes(count=64, bits=62):
    """The `count` largest primes below 2**bits, in decreasing order."""
    out = []
    n = (1 << bits) - 1
    while len(out) < count:
        if flint.fmpz(n).is_prime():
            out.append(n)
        n -= 2
    return tuple(out)


def pick_prime(rng):
    return rng.choice(word_primes())


def _trim(c):
    while c and c[-1] == 0:
        c.pop()
    return c


def _pack(c, nb):
    return int.from_bytes(b"".join(x.to_bytes(nb, "little") for x in c), "little")


def _mul(f, g, p):
    if not f or not g:
        return []
    lf, lg = len(f), len(g)
    if min(lf, lg) < _SCHOOLBOOK:
        out = [0] * (lf + lg - 1)
        if lf < lg:
            f, g, lf, lg = g, f, lg, lf
        for j, y in enumerate(g):
            if y:
                for i, x in enumerate(f):
                    out[i + j] += x * y
        return _trim([x % p for x in out])
    nb = (2 * p.bit_length() + min(lf, lg).bit_length() + 8) // 8
    n = lf + lg - 1
    raw = (_pack(f, nb) * _pack(g, nb)).to_bytes(nb * n + nb, "little")
    return _trim([int.from_bytes(raw[i * nb:(i + 1) * nb], "little") % p for i in range(n)])


def _divmod(a, b, p):
    """Schoolbook quotient and remainder of coefficient lists."""
    a = list(a)
    db = len(b) - 1
    if db < 0:
        raise ZeroDivisionError("polynomial division by zero")
    inv = pow(b[-1], -1, p)
    if len(a) <= db:
        return [], a
    q = [0] * (len(a) - db)
    for i in range(len(a) - 1 - db, -1, -1):
        c = a[i + db] * inv % p
        q[i] = c
        if c:
            seg = a[i:i + db]
            a[i:i + db] = [(x - c * y) % p for x, y in zip(seg, b)]
        a[i + db] = 0
    return _trim(q), _trim(a[:db])


class UniPolyModP:
    """Immutable dense polynomial over GF(p); coefficients low degree first."""

    __slots__ = ("p", "c")

    def __init__(self, coeffs, p):
        self.p = p
        self.c = tuple(_trim([int(x) % p for x in coeffs]))

    @classmethod
    def _raw(cls, coeffs, p):
        obj = cls.__new__(cls)
        obj.p = p
        obj.c = tuple(coeffs)
        return obj

    @classmethod
    def x(cls, p):
        return cls._raw((0, 1), p)

    @classmethod
    def one(cls, p):
        return cls._raw((1,), p)

    def degree(self):
        return len(self.c) - 1

    def is_zero(self):
        return not self.c

    def lead(self):
        return self.c[-1] if self.c else 0

    def _chk(self, other):
        if isinstance(other, int):
            return UniPolyModP([other], self.p)
        if other.p != self.p:
            raise RingError("moduli differ")
        return other

    def __eq__(self, other):
        return isinstance(other, UniPolyModP) and other.p == self.p and other.c == self.c

    def __hash__(self):
        return hash((self.p, self.c))

    def __add__(self, other):
        other = self._chk(other)
        n = max(len(self.c), len(other.c))
        a = list(self.c) + [0] * (n - len(self.c))
        for i, y in enumerate(other.c):
            a[i] = (a[i] + y) % self.p
        return UniPolyModP._raw(_trim(a), self.p)

    def __neg__(self):
        return UniPolyModP._raw([(-x) % self.p for x in self.c], self.p)

    def __sub__(self, other):
        return self + (-self._chk(other))

    def __mul__(self, other):
        other = self._chk(other)
        return UniPolyModP._raw(_mul(self.c, other.c, self.p), self.p)

    def __divmod__(self, other):
        other = self._chk(other)
        q, r = _divmod(self.c, other.c, self.p)
        return UniPolyModP._raw(q, self.p), UniPolyModP._raw(r, self.p)

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def monic(self):
        if not self.c:
            return self
        inv = pow(self.c[-1], -1, self.p)
        return UniPolyModP._raw([x * inv % self.p for x in self.c], self.p)

    def derivative(self):
        return UniPolyModP._raw(_trim([i * x % self.p for i, x in enumerate(self.c)][1:]), self.p)

    def __call__(self, x):
        acc = 0
        for co in reversed(self.c):
            acc = (acc * x + co) % self.p
        return acc

    def gcd(self, other):
        a, b = self, self._chk(other)
        while b.c:
            a, b = b, a % b
        return a.monic()

    def is_squarefree(self):
        return self.gcd(self.derivative()).degree() == 0

    def powmod(self, e, mod):
        return Modulus(mod).pow(self, e)

    def is_irreducible(self):
        """Rabin's test."""
        n = self.degree()
        if n < 1:
            return False
        if n == 1:
            return True
        f = self.monic()
        M = Modulus(f)
        x = UniPolyModP.x(self.p)
        # x^(p^i) for the needed i by repeated Frobenius
        need = {n // r for r in _prime_factors(n)}
        frob = {0: M.reduce(x)}
        h = frob[0]
        for i in range(1, n + 1):
            h = M.pow(h, self.p)
            if i in need or i == n:
                frob[i] = h
        if frob[n] != frob[0]:
            return False
        for r in _prime_factors(n):
            g = (frob[n // r] - x).gcd(f)
            if g.degree() != 0:
                return False
        return True

    def ddf_degrees(self):
        """Degrees of the irreducible factors via distinct-degree factorisation.

        Requires a squarefree input.  Returns a sorted list with multiplicity.
        """
        f = self.monic()
        x = UniPolyModP.x(self.p)
        out = []
        i = 0
        h = x
        M = Modulus(f)
        while f.degree() >= 2 * (i + 1):
            i += 1
            h = M.pow(h, self.p)
            g = (h - x).gcd(f)
            if g.degree() > 0:
                out.extend([i] * (g.degree() // i))
                f = f // g
                M = Modulus(f)
                h = M.reduce(h)
        if f.degree() > 0:
            out.append(f.degree())
        return sorted(out)

    def __repr__(self):
        return f"UniPolyModP({list(self.c)}, p={self.p})"


def _prime_factors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class Modulus:
    """Fast reduction modulo a fixed monic-able polynomial f."""

    def __init__(self, f):
        f = f.monic()
        self.f = f
        self.p = f.p
        self.d = f.degree()
        # inverse of reversed f to precision d
        rev = list(reversed(f.c))
        self.inv = _series_inverse(rev, max(self.d, 1), self.p)

    def reduce(self, a):
        c = a.c
        d, p = self.d, self.p
        if d == 0:
            return UniPolyModP._raw((), p)
        if len(c) <= d:
            return a
        if len(c) > 2 * d - 1:
            return UniPolyModP._raw(_divmod(c, self.f.c, p)[1], p)
        n = len(c) - 1
        m = n - d + 1
        rev = list(reversed(c))[:m]
        qrev = _mul(rev, list(self.inv[:m]), p)[:m]
        qrev += [0] * (m - len(qrev))
        qf = _mul(_trim(list(reversed(qrev))), self.f.c, p)
        r = [(x - (qf[i] if i < len(qf) else 0)) % p for i, x in enumerate(c[:d])]
        return UniPolyModP._raw(_trim(r), p)

    def mulmod(self, a, b):
        return self.reduce(a * b)

    def pow(self, a, e):
        a = self.reduce(a)
        res = UniPolyModP.one(self.p)
        if self.d == 0:
            return UniPolyModP._raw((), self.p)
        for bit in bin(e)[2:]:
            res = self.reduce(res * res)
            if bit == "1":
                res = self.reduce(res * a)
        return res


def _series_inverse(a, n, p):
    """1/a mod x^n for a[0] != 0, by Newton iteration."""
    inv = [pow(a[0], -1, p)]
    k = 1
    while k < n:
        k = min(2 * k, n)
        t = _mul(list(a[:k]), inv, p)[:k]
        t += [0] * (k - len(t))
        t = [(-x) % p for x in t]
        t[0] = (t[0] + 2) % p
        inv = _mul(inv, _trim(t), p)[:k]
        inv += [0] * (k - len(inv))
    return inv


# -- specialisation of HomoPoly values ---------------------------------------
def _power_tables(f, point, p):
    ring = f.ring
    degs = _degs(f.raw())
    tables = {}
    for nm, val in point.items():
        v = ring.index(nm)
        x = int(val) % p
        sh = f.shift[v]
        if x == 0 and sh < 0:
            raise ZeroDivisionError(f"{nm} = 0 in a negative power")
        t = [1] * (degs[v] + 1)
        for i in range(1, degs[v] + 1):
            t[i] = t[i - 1] * x % p
        if sh:
            s = pow(x, sh, p) if sh > 0 else pow(pow(x, -1, p), -sh, p)
            t = [y * s % p for y in t]
        tables[v] = t
    return tables


def reduce_modp(f, point, p):
    """Image of f with the listed variables specialised; {free exponents: residue}."""
    ring = f.ring
    tables = _power_tables(f, point, p)
    free = [v for v in range(ring.nvars) if v not in tables]
    out = {}
    fixed = list(tables.items())
    for e, c in zip(f.raw().monoms(), f.raw().coeffs()):
        t = int(c) % p
        if not t:
            continue
        for v, tab in fixed:
            t = t * tab[e[v]] % p
        key = tuple(e[v] + f.shift[v] for v in free)
        out[key] = (out.get(key, 0) + t) % p
    return {k: v for k, v in out.items() if v}, [ring.names[v] for v in free]


def specialize_modp(f, point, p):
    """Residue when every variable is fixed, UniPolyModP when exactly one is free."""
    for nm in point:
        f.ring.index(nm)
    terms, free = reduce_modp(f, point, p)
    if not free:
        return sum(terms.values()) % p
    if len(free) > 1:
        raise RingError(f"{len(free)} variables left free; fix all but one")
    if any(e[0] < 0 for e in terms):
        raise RingError("negative exponent in the free variable")
    deg = max((e[0] for e in terms), default=-1)
    coeffs = [0] * (deg + 1)
    for (e,), v in terms.items():
        coeffs[e] = v
    return UniPolyModP._raw(_trim(coeffs), p)


def random_point(names, p, rng):
    return {nm: rng.randrange(1, p) for nm in names}


def default_rng(seed=0):
    return random.Random(seed)
