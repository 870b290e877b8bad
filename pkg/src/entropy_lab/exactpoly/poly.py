"""Exact multivariate integer polynomials.

HomoPoly wraps a flint fmpz_mpoly together with a ring descriptor.  In a
Laurent ring the value is stored as (polynomial part, monomial shift) with the
polynomial part kept free of monomial factors, so equality is structural.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import flint
from flint.utils.flint_exceptions import DomainError

from . import kron
from .kron import _degs
from .errors import (NotDivisible, NotHomogeneous, RingError,
                     SubstitutionError, ZeroPolyError)


@lru_cache(maxsize=None)
def _context(names):
    return flint.fmpz_mpoly_ctx.get(names, "deglex")


@dataclass(frozen=True)
class Ring:
    names: tuple
    laurent: bool = False

    def __post_init__(self):
        if len(set(self.names)) != len(self.names) or not self.names:
            raise RingError(f"bad variable list {self.names!r}")
        for nm in self.names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", nm):
                raise RingError(f"bad variable name {nm!r}")

    @property
    def nvars(self):
        return len(self.names)

    @property
    def ctx(self):
        return _context(self.names)

    def index(self, name):
        try:
            return self.names.index(name)
        except ValueError:
            raise RingError(f"{name!r} is not a variable of {self}") from None

    def gens(self):
        return tuple(HomoPoly.variable(nm, self) for nm in self.names)

    def gen(self, name):
        return HomoPoly.variable(name, self)

    def __str__(self):
        kind = "Laurent" if self.laurent else "poly"
        return f"{kind}[{','.join(self.names)}]"


ABC = Ring(("a", "b", "c"))
AB = Ring(("a", "b"))
GAUGE = Ring(("a", "b", "mu1", "mu2", "mu3"), laurent=True)


def _isdeg(x):
    return isinstance(x, int) and not isinstance(x, bool)


class HomoPoly:
    """Immutable polynomial (or Laurent polynomial) with integer coefficients.

    `_hdeg` caches homogeneity: an int is the common total degree, False means
    known to be inhomogeneous, None means not yet computed.
    """

    __slots__ = ("ring", "_p", "_shift", "_hdeg", "_hash")

    def __init__(self, ring, raw, shift=None, hdeg=None):
        self.ring = ring
        self._p = raw
        self._shift = shift if shift is not None else (0,) * ring.nvars
        self._hdeg = hdeg
        self._hash = None

    # -- construction ---------------------------------------------------
    @classmethod
    def _wrap(cls, ring, raw, shift=None, hdeg=None):
        """Build a value, normalising the Laurent representation."""
        if raw.is_zero():
            return cls(ring, raw, None, None)
        if ring.laurent:
            tc = _degs(raw.term_content())
            if any(tc):
                raw = raw / ring.ctx.from_dict({tuple(tc): 1})
                base = shift or (0,) * ring.nvars
                shift = tuple(s + t for s, t in zip(base, tc))
        elif shift is not None and any(shift):
            raise RingError("negative or shifted exponents outside a Laurent ring")
        return cls(ring, raw, shift, hdeg)

    @classmethod
    def from_terms(cls, terms, ring=ABC):
        """Build from {exponent tuple: integer coefficient}."""
        n = ring.nvars
        clean = {}
        for e, c in terms.items():
            e = tuple(int(x) for x in e)
            if len(e) != n:
                raise RingError(f"exponent {e} has wrong length for {ring}")
            c = int(c)
            if c:
                clean[e] = clean.get(e, 0) + c
        clean = {e: c for e, c in clean.items() if c}
        if not clean:
            return cls(ring, ring.ctx.from_dict({}), None, None)
        low = tuple(min(e[v] for e in clean) for v in range(n))
        if not ring.laurent:
            if any(x < 0 for x in low):
                raise RingError("negative exponent outside a Laurent ring")
            return cls._wrap(ring, ring.ctx.from_dict(clean))
        shifted = {tuple(x - l for x, l in zip(e, low)): c for e, c in clean.items()}
        return cls._wrap(ring, ring.ctx.from_dict(shifted), low)

    @classmethod
    def constant(cls, value, ring=ABC):
        value = int(value)
        return cls(ring, ring.ctx.from_dict({(0,) * ring.nvars: value} if value else {}),
                   None, 0 if value else None)

    @classmethod
    def variable(cls, name, ring=ABC):
        e = [0] * ring.nvars
        e[ring.index(name)] = 1
        return cls._wrap(ring, ring.ctx.from_dict({tuple(e): 1}), None, 1)

    @classmethod
    def monomial(cls, exps, coeff=1, ring=ABC):
        return cls.from_terms({tuple(exps): coeff}, ring)

    # -- inspection -----------------------------------------------------
    def is_zero(self):
        return self._p.is_zero()

    def __bool__(self):
        return not self._p.is_zero()

    def nterms(self):
        return len(self._p)

    __len__ = nterms

    def raw(self):
        """The underlying flint polynomial part (shift not applied)."""
        return self._p

    @property
    def shift(self):
        return self._shift

    def terms(self):
        """{exponent tuple: int} with the Laurent shift applied."""
        sh = self._shift
        if any(sh):
            return {tuple(int(x) + s for x, s in zip(e, sh)): int(c)
                    for e, c in zip(self._p.monoms(), self._p.coeffs())}
        return {tuple(int(x) for x in e): int(c) for e, c in zip(self._p.monoms(), self._p.coeffs())}

    def sorted_terms(self):
        """Terms in canonical degree-lexicographic order (highest first)."""
        items = list(self.terms().items())
        items.sort(key=lambda t: (sum(t[0]), t[0]), reverse=True)
        return items

    def is_monomial(self):
        return len(self._p) == 1

    def is_constant(self):
        return self.is_zero() or (len(self._p) == 1 and not any(self._shift)
                                  and not any(self._p.monoms()[0]))

    def constant_value(self):
        if not self.is_constant():
            raise ValueError("not a constant")
        return int(self._p.coeffs()[0]) if len(self._p) else 0

    def degrees(self):
        """Largest exponent of each variable."""
        if self.is_zero():
            raise ZeroPolyError("degrees of the zero polynomial")
        return tuple(int(d + s) for d, s in zip(_degs(self._p), self._shift))

    def degree(self, var):
        return self.degrees()[self.ring.index(var)]

    def total_degree(self):
        if self.is_zero():
            raise ZeroPolyError("degree of the zero polynomial")
        return int(self._p.total_degree()) + sum(self._shift)

    def ord_var(self, var):
        """Largest e such that var^e divides self (the minimal exponent)."""
        v = self.ring.index(var)
        if self.is_zero():
            raise ZeroPolyError("ord of the zero polynomial")
        if self.ring.laurent:
            return self._shift[v]
        return _degs(self._p.term_content())[v]

    def _homog(self):
        if self._hdeg is None and not self.is_zero():
            degs = {int(sum(e)) for e in self._p.monoms()}
            self._hdeg = degs.pop() + sum(self._shift) if len(degs) == 1 else False
        return self._hdeg

    def is_homogeneous(self):
        return _isdeg(self._homog())

    def homogeneous_degree(self):
        if self.is_zero():
            raise ZeroPolyError("homogeneous degree of the zero polynomial")
        h = self._homog()
        if not _isdeg(h):
            raise NotHomogeneous("terms have different total degrees")
        return h

    def content(self):
        """Non-negative gcd of the coefficients."""
        return abs(int(self._p.content())) if not self.is_zero() else 0

    def max_coeff_bits(self):
        return max((abs(int(c)).bit_length() for c in self._p.coeffs()), default=0)

    # -- arithmetic -----------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, HomoPoly):
            if other.ring != self.ring:
                raise RingError(f"ring mismatch: {self.ring} vs {other.ring}")
            return other
        if isinstance(other, int):
            return HomoPoly.constant(other, self.ring)
        return NotImplemented

    def _aligned(self, other):
        """Polynomial parts of self and other over a common shift."""
        if not self.ring.laurent or self._shift == other._shift:
            return self._p, other._p, self._shift
        if self.is_zero():
            return self._p, other._p, other._shift
        if other.is_zero():
            return self._p, other._p, self._shift
        low = tuple(min(x, y) for x, y in zip(self._shift, other._shift))
        ctx = self.ring.ctx
        f = self._p * ctx.from_dict({tuple(x - l for x, l in zip(self._shift, low)): 1})
        g = other._p * ctx.from_dict({tuple(x - l for x, l in zip(other._shift, low)): 1})
        return f, g, low

    def _addsub(self, other, sign):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        f, g, sh = self._aligned(other)
        raw = f + g if sign > 0 else f - g
        h1, h2 = self._hdeg, other._hdeg
        if other.is_zero():
            hd = h1
        elif self.is_zero():
            hd = h2
        else:
            hd = h1 if (_isdeg(h1) and h1 == h2) else None
        if raw.is_zero():
            hd = None
        return HomoPoly._wrap(self.ring, raw, sh if self.ring.laurent else None, hd)

    def __add__(self, other):
        return self._addsub(other, 1)

    def __radd__(self, other):
        return self._addsub(other, 1)

    def __sub__(self, other):
        return self._addsub(other, -1)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other._addsub(self, -1)

    def __neg__(self):
        return HomoPoly(self.ring, -self._p, self._shift, self._hdeg)

    def __pos__(self):
        return self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.is_zero() or other.is_zero():
            return HomoPoly.constant(0, self.ring)
        h1, h2 = self._homog_hint(), other._homog_hint()
        raw = kron.mul(self._p, other._p, self.ring.ctx, h1, h2)
        if raw is None:
            raw = self._p * other._p
        hd = h1 + h2 if (_isdeg(h1) and _isdeg(h2)) else None
        sh = tuple(x + y for x, y in zip(self._shift, other._shift))
        # a product of monomial-free parts is monomial-free, no renormalisation
        return HomoPoly(self.ring, raw, sh, hd)

    __rmul__ = __mul__

    def _homog_hint(self):
        """Homogeneity for kernel selection; computed only for large operands."""
        if self._hdeg is None and len(self._p) > 24:
            self._homog()
        h = self._hdeg
        if _isdeg(h):
            # the kernel works on the polynomial part
            return h - sum(self._shift)
        return None

    def __pow__(self, m):
        if not isinstance(m, int):
            return NotImplemented
        if m < 0:
            if not self.ring.laurent or not self.is_monomial() or abs(int(self._p.coeffs()[0])) != 1:
                raise RingError("negative power of a non-unit")
            c = int(self._p.coeffs()[0]) ** (-m)
            sh = tuple(s * m for s in self._shift)
            return HomoPoly(self.ring, self.ring.ctx.from_dict({(0,) * self.ring.nvars: c}), sh,
                            self._hdeg * m if _isdeg(self._hdeg) else None)
        if m == 0:
            return HomoPoly.constant(1, self.ring)
        if m == 1:
            return self
        h = self._homog_hint()
        raw = kron.power(self._p, m, self.ring.ctx, h)
        if raw is None:
            raw = self._p ** m
        hd = self._hdeg * m if _isdeg(self._hdeg) else None
        return HomoPoly(self.ring, raw, tuple(s * m for s in self._shift), hd)

    def __eq__(self, other):
        if isinstance(other, int):
            other = HomoPoly.constant(other, self.ring)
        if not isinstance(other, HomoPoly):
            return NotImplemented
        if self.ring != other.ring:
            return False
        if self.is_zero() or other.is_zero():
            return self.is_zero() and other.is_zero()
        return self._shift == other._shift and self._p == other._p

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring, self._shift, frozenset(self.terms().items())))
        return self._hash

    # -- division -------------------------------------------------------
    def divide_exact(self, other):
        return divide_exact(self, other)

    def __truediv__(self, other):
        return divide_exact(self, other)

    # -- substitution and evaluation ------------------------------------
    def substitute(self, assignment, target=None):
        return substitute(self, assignment, target)

    def evaluate(self, point):
        return evaluate(self, point)

    def specialize_modp(self, point, p):
        from .modp import specialize_modp
        return specialize_modp(self, point, p)

    # -- text -----------------------------------------------------------
    def to_text(self):
        return to_text(self)

    def __str__(self):
        return to_text(self)

    def __repr__(self):
        s = to_text(self)
        if len(s) > 80:
            s = s[:77] + "..."
        return f"HomoPoly({s!r}, {self.ring})"


def _same_ring(f, g):
    if f.ring != g.ring:
        raise RingError(f"ring mismatch: {f.ring} vs {g.ring}")


def divide_exact(f, g):
    """Return q with f == g*q, raising NotDivisible otherwise."""
    if isinstance(g, int):
        g = HomoPoly.constant(g, f.ring)
    _same_ring(f, g)
    if g.is_zero():
        raise ZeroDivisionError("division by the zero polynomial")
    if f.is_zero():
        return f
    ring = f.ring
    sh = tuple(x - y for x, y in zip(f._shift, g._shift))
    hd = None
    if _isdeg(f._hdeg) and _isdeg(g._hdeg):
        hd = f._hdeg - g._hdeg
    if g.is_monomial():
        # fast path: exponent shift plus coefficient check
        (ge,), (gc,) = g._p.monoms(), g._p.coeffs()
        gc = int(gc)
        if ring.laurent:
            if any(ge):
                raise AssertionError("unnormalised Laurent value")
            q = f._p
            if gc != 1:
                if gc == -1:
                    q = -q
                else:
                    try:
                        q = q / gc
                    except DomainError:
                        raise NotDivisible("coefficient not divisible") from None
            return HomoPoly._wrap(ring, q, sh, hd)
        tc = _degs(f._p.term_content())
        if any(x < y for x, y in zip(tc, ge)):
            raise NotDivisible("monomial divisor does not divide")
        try:
            q = f._p / g._p
        except DomainError:
            raise NotDivisible("coefficient not divisible") from None
        return HomoPoly(ring, q, None, hd)
    hf = f._homog_hint()
    hg = g._homog_hint()
    try:
        q = kron.divexact(f._p, g._p, ring.ctx, hf, hg)
    except kron.Inexact:
        raise NotDivisible("divisor does not divide") from None
    if q is None:
        try:
            q = f._p / g._p
        except DomainError:
            raise NotDivisible("divisor does not divide") from None
    return HomoPoly._wrap(ring, q, sh if ring.laurent else None, hd)


def _monomial_image(img):
    """(coefficient, exponent tuple) if img is a single term, else None."""
    if img.is_zero():
        return (0, (0,) * img.ring.nvars)
    if not img.is_monomial():
        return None
    (e,), (c,) = img._p.monoms(), img._p.coeffs()
    return int(c), tuple(x + s for x, s in zip(e, img._shift))


def substitute(f, assignment, target=None):
    """Compose f with images given per variable name.

    Variables that occur in f must all have images; images share one ring,
    which is the ring of the result.  Monomial images are applied term by
    term; polynomial images are handled by Horner's rule in that variable.
    """
    imgs = {}
    for name, val in assignment.items():
        f.ring.index(name)
        imgs[name] = val
    used = [nm for nm, d in zip(f.ring.names, _degs(f._p)) if d > 0] if not f.is_zero() else []
    if f.ring.laurent:
        used = [nm for nm, d, s in zip(f.ring.names, _degs(f._p), f._shift) if d > 0 or s != 0] \
            if not f.is_zero() else []
    missing = [nm for nm in used if nm not in imgs]
    if missing:
        raise SubstitutionError(f"no image for {', '.join(missing)}")
    rings = {v.ring for v in imgs.values() if isinstance(v, HomoPoly)}
    if target is None:
        if len(rings) > 1:
            raise RingError("images live in different rings")
        target = rings.pop() if rings else f.ring
    elif rings and rings != {target}:
        raise RingError("images are not in the target ring")
    conv = {}
    for nm, v in imgs.items():
        conv[nm] = v if isinstance(v, HomoPoly) else HomoPoly.constant(v, target)
    if f.is_zero():
        return HomoPoly.constant(0, target)
    return _subst(f.terms(), f.ring.names, conv, target)


def _subst(terms, names, conv, target):
    mono = {}
    poly = []
    for v, nm in enumerate(names):
        if not any(e[v] for e in terms):
            continue
        im = _monomial_image(conv[nm])
        if im is None:
            poly.append(v)
        else:
            mono[v] = im
    nt = target.nvars

    def mono_part(items):
        out = {}
        for e, c in items:
            ex = [0] * nt
            for v, (mc, me) in mono.items():
                k = e[v]
                if k:
                    if k < 0 and abs(mc) != 1:
                        raise SubstitutionError("negative power of a non-unit image")
                    if mc == 0:
                        c = 0
                        break
                    c = c * (mc ** k if k > 0 else mc ** (-k))
                    for i, x in enumerate(me):
                        ex[i] += k * x
            if c:
                key = tuple(ex)
                out[key] = out.get(key, 0) + c
        return HomoPoly.from_terms(out, target) if out else HomoPoly.constant(0, target)

    if not poly:
        return mono_part(terms.items())
    v = poly[0]
    img = conv[names[v]]
    groups = {}
    for e, c in terms.items():
        if e[v] < 0:
            raise SubstitutionError(f"negative power of {names[v]} with a non-monomial image")
        groups.setdefault(e[v], {})[tuple(0 if i == v else x for i, x in enumerate(e))] = c
    zero = HomoPoly.constant(0, target)
    parts = {}
    for d, part in groups.items():
        parts[d] = _subst(part, names, conv, target) if len(poly) > 1 else mono_part(part.items())
    return _compose(parts, max(groups) + 1, img, zero)


def _compose(parts, length, img, zero):
    """Sum of parts[d] * img^d for d < length.

    Short ranges use Horner's rule; long ones split in halves so that the
    expensive products are balanced (which the packed kernel handles well).
    """
    powers = {1: img}

    def power(m):
        if m not in powers:
            h = m // 2
            powers[m] = power(h) * power(m - h)
        return powers[m]

    def rec(lo, hi):
        if hi - lo <= 16:
            acc = zero
            for d in range(hi - 1, lo - 1, -1):
                acc = acc * img
                if d in parts:
                    acc = acc + parts[d]
            return acc
        half = 1 << ((hi - lo - 1).bit_length() - 1)
        low = rec(lo, lo + half)
        high = rec(lo + half, hi)
        if high.is_zero():
            return low
        return low + power(half) * high

    return rec(0, length)


def _scaled_point(ring, point):
    out = []
    for nm in ring.names:
        if nm not in point:
            raise SubstitutionError(f"no value for {nm}")
        out.append(Fraction(point[nm]))
    return out


def evaluate(f, point):
    """Exact value at rational point {name: value} (int or Fraction)."""
    vals = _scaled_point(f.ring, point)
    if f.is_zero():
        return Fraction(0)
    if all(x.denominator == 1 for x in vals) and not any(f._shift):
        return Fraction(int(f._p(*[flint.fmpz(int(x)) for x in vals])))
    # clear denominators: x_v = n_v/d_v, multiply by prod d_v^{deg_v}
    degs = list(_degs(f._p))
    nums = [x.numerator for x in vals]
    dens = [x.denominator for x in vals]
    tables = []
    for v in range(f.ring.nvars):
        D = degs[v]
        pn = [1] * (D + 1)
        pd = [1] * (D + 1)
        for i in range(1, D + 1):
            pn[i] = pn[i - 1] * nums[v]
            pd[i] = pd[i - 1] * dens[v]
        tables.append([pn[e] * pd[D - e] for e in range(D + 1)])
    total = 0
    for e, c in zip(f._p.monoms(), f._p.coeffs()):
        t = int(c)
        for v, x in enumerate(e):
            t *= tables[v][x]
        total += t
    den = 1
    for v in range(f.ring.nvars):
        den *= dens[v] ** degs[v]
    res = Fraction(total, den)
    for v, s in enumerate(f._shift):
        if s:
            if vals[v] == 0:
                raise ZeroDivisionError(f"{f.ring.names[v]} = 0 in a negative power")
            res *= vals[v] ** s
    return res


# -- canonical text ------------------------------------------------------
def _term_text(ring, e, c, first):
    sign = "-" if c < 0 else "+"
    c = abs(c)
    parts = []
    for nm, x in zip(ring.names, e):
        if x == 1:
            parts.append(nm)
        elif x:
            parts.append(f"{nm}^{x}")
    if c != 1 or not parts:
        parts.insert(0, str(c))
    body = "*".join(parts)
    if first:
        return body if sign == "+" else "-" + body
    return f" {sign} {body}"


def to_text(f):
    if f.is_zero():
        return "0"
    return "".join(_term_text(f.ring, e, c, i == 0)
                   for i, (e, c) in enumerate(f.sorted_terms()))


def from_text(text, ring=ABC):
    """Parse the canonical text form (and mild variations of spacing)."""
    s = text.strip()
    if s == "0":
        return HomoPoly.constant(0, ring)
    # split on +/- that are not part of an exponent
    tokens = re.split(r"(?<![\^])\s*([+-])\s*", s)
    terms = {}
    sign = 1
    for tok in tokens:
        if tok in ("+", "-"):
            sign = -1 if tok == "-" else 1
            continue
        if tok == "":
            continue
        coeff = 1
        e = [0] * ring.nvars
        for factor in tok.split("*"):
            factor = factor.strip()
            if re.fullmatch(r"\d+", factor):
                coeff *= int(factor)
                continue
            m = re.fullmatch(r"([A-Za-z_][A-Za-z_0-9]*)(?:\^(-?\d+))?", factor)
            if not m:
                raise ValueError(f"cannot parse factor {factor!r}")
            e[ring.index(m.group(1))] += int(m.group(2) or 1)
        key = tuple(e)
        terms[key] = terms.get(key, 0) + sign * coeff
        sign = 1
    return HomoPoly.from_terms(terms, ring)
