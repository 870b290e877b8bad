"""Kronecker substitution kernels on top of flint's univariate integer polynomials.

A multivariate polynomial whose exponents fit in a box is packed into one
univariate polynomial by x_v -> X^{stride_v}.  When both operands are
homogeneous one variable is dropped (dehomogenised) and recovered from the
total degree afterwards, which shrinks the packed length considerably.

Every function returns None when packing would be too large or when the
result cannot be certified, so callers fall back to the sparse kernel.
"""
from __future__ import annotations

from math import gcd

import flint
from flint.utils.flint_exceptions import DomainError

# below this many term pairs the sparse kernel is already fast
MIN_WORK = 1 << 18
# packed length ceiling (coefficient slots)
MAX_LEN = 1 << 25


def _degs(f):
    """Per-variable degrees as Python ints."""
    return tuple(int(d) for d in f.degrees())


def _layout(bounds, drop):
    """Mixed-radix strides for the kept variables."""
    keep = [v for v in range(len(bounds)) if v != drop]
    strides = []
    s = 1
    for v in keep:
        strides.append(s)
        s *= bounds[v]
    return keep, strides, s


def exponent_gcds(f):
    """Per-variable gcd of the exponents occurring in f (0 if never positive)."""
    out = [0] * f.context().nvars()
    for e in f.monoms():
        for v, x in enumerate(e):
            if x and out[v] != 1:
                out[v] = gcd(out[v], x)
    return out


def _pack(f, keep, strides, scale=None):
    monoms = f.monoms()
    coeffs = f.coeffs()
    if scale is not None and any(s > 1 for s in scale):
        monoms = [tuple(x // s if s > 1 else x for x, s in zip(e, scale)) for e in monoms]
    if len(keep) == 1:
        v0 = keep[0]
        idx = [e[v0] for e in monoms]
    elif len(keep) == 2:
        v0, v1 = keep
        s1 = strides[1]
        idx = [e[v0] + s1 * e[v1] for e in monoms]
    else:
        idx = [sum(e[v] * s for v, s in zip(keep, strides)) for e in monoms]
    arr = [0] * (max(idx) + 1 if idx else 1)
    for i, c in zip(idx, coeffs):
        arr[i] = c
    return flint.fmpz_poly(arr)


def _unpack(up, nv, keep, strides, bounds, drop, total, scale=None):
    out = {}
    cs = up.coeffs()
    if scale is None:
        scale = [1] * nv
    if len(keep) == 2 and drop is not None:
        v0, v1 = keep
        g0, g1 = scale[v0], scale[v1]
        s1 = strides[1]
        for i, c in enumerate(cs):
            if c:
                e = [0] * nv
                j, r = divmod(i, s1)
                e[v0] = r * g0
                e[v1] = j * g1
                e[drop] = total - r * g0 - j * g1
                out[tuple(e)] = c
        return out
    for i, c in enumerate(cs):
        if not c:
            continue
        e = [0] * nv
        rest = i
        # decode from the slowest-varying slot down
        for v, s in zip(reversed(keep), reversed(strides)):
            q, rest = divmod(rest, s)
            e[v] = q * scale[v]
        if drop is not None:
            e[drop] = total - sum(e)
        out[tuple(e)] = c
    return out


def _isdeg(x):
    return isinstance(x, int) and not isinstance(x, bool)


def _choose_drop(bounds, homogeneous):
    if not homogeneous or len(bounds) < 2:
        return None
    return max(range(len(bounds)), key=lambda v: (bounds[v], -v))


def mul(f, g, ctx, hdeg_f=None, hdeg_g=None):
    lf, lg = len(f), len(g)
    if lf * lg < MIN_WORK:
        return None
    scale = [max(1, gcd(x, y)) for x, y in zip(exponent_gcds(f), exponent_gcds(g))]
    df, dg = _degs(f), _degs(g)
    bounds = [(x + y) // s + 1 for x, y, s in zip(df, dg, scale)]
    homog = _isdeg(hdeg_f) and _isdeg(hdeg_g)
    drop = _choose_drop(bounds, homog)
    keep, strides, length = _layout(bounds, drop)
    if length > MAX_LEN or 4 * length > lf * lg:
        return None
    prod = _pack(f, keep, strides, scale) * _pack(g, keep, strides, scale)
    total = (hdeg_f + hdeg_g) if drop is not None else None
    return ctx.from_dict(_unpack(prod, len(bounds), keep, strides, bounds, drop, total, scale))


def power(f, m, ctx, hdeg=None):
    if len(f) < 32 or m < 2:
        return None
    scale = [max(1, s) for s in exponent_gcds(f)]
    bounds = [m * x // s + 1 for x, s in zip(_degs(f), scale)]
    homog = _isdeg(hdeg)
    drop = _choose_drop(bounds, homog)
    keep, strides, length = _layout(bounds, drop)
    if length > MAX_LEN:
        return None
    res = _pack(f, keep, strides, scale) ** m
    total = m * hdeg if drop is not None else None
    return ctx.from_dict(_unpack(res, len(bounds), keep, strides, bounds, drop, total, scale))


class Inexact(Exception):
    """Packed division proved that the divisor does not divide."""


def divexact(f, g, ctx, hdeg_f=None, hdeg_g=None):
    """Exact quotient f/g, None if inconclusive, raises Inexact on proof of non-divisibility."""
    if len(f) < 4096 or len(g) < 16:
        return None
    df, dg = _degs(f), _degs(g)
    if any(y > x for x, y in zip(df, dg)):
        raise Inexact
    # if f and g only involve v^s then so does the quotient
    scale = [max(1, gcd(x, y)) for x, y in zip(exponent_gcds(f), exponent_gcds(g))]
    bounds = [x // s + 1 for x, s in zip(df, scale)]
    homog = _isdeg(hdeg_f) and _isdeg(hdeg_g)
    if homog and hdeg_g > hdeg_f:
        raise Inexact
    drop = _choose_drop(bounds, homog)
    keep, strides, length = _layout(bounds, drop)
    if length > MAX_LEN:
        return None
    try:
        qp = _pack(f, keep, strides, scale) / _pack(g, keep, strides, scale)
    except DomainError:
        raise Inexact from None
    total = (hdeg_f - hdeg_g) if drop is not None else None
    terms = _unpack(qp, len(bounds), keep, strides, bounds, drop, total, scale)
    if not terms:
        return None
    # the packing is injective only if g*q stays inside the box
    qdeg = [0] * len(bounds)
    for e in terms:
        for v, x in enumerate(e):
            if x < 0:
                return None
            if x > qdeg[v]:
                qdeg[v] = x
    for v in keep:
        if (dg[v] + qdeg[v]) // scale[v] >= bounds[v]:
            return None
    return ctx.from_dict(terms)
