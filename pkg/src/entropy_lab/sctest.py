"""Truncated Laurent series in eps and the singularity confinement test.

A series is known modulo eps^prec: it stores the valuation v and the exact
coefficients of eps^v .. eps^(prec-1).  Operations shrink that window as the
error terms dictate and never report a coefficient they cannot vouch for.

Confinement, operationally: start from x_{-1} = u, x_0 = eps, iterate, and
look for the first step m at which the orbit is regular again, i.e.
val(x_{m-1}) >= 0 and val(x_m) = 0 after some pole.  The limit x_m(0) must
depend on u, which is checked by a second run at a different seed.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

CONFINED = "confined"
NON_CONFINED = "non_confined"
INDETERMINATE = "indeterminate"

DEFAULT_ORDER = 48
DEFAULT_HORIZON = 12
MAX_WIDENINGS = 4


class TruncationError(ArithmeticError):
    """The answer lies outside the window of guaranteed coefficients."""


def _q(x):
    return x if isinstance(x, Fraction) else Fraction(x)


class LaurentSeries:
    """sum_{i} coeffs[i] eps^(val + i) + O(eps^prec); prec None means exact."""

    __slots__ = ("val", "coeffs", "prec")

    def __init__(self, val, coeffs, prec=None):
        coeffs = [_q(c) for c in coeffs]
        i = 0
        while i < len(coeffs) and coeffs[i] == 0:
            i += 1
        coeffs = coeffs[i:]
        val += i
        if prec is not None:
            keep = max(0, prec - val)
            coeffs = coeffs[:keep]
        while coeffs and coeffs[-1] == 0 and prec is None:
            coeffs.pop()
        if not coeffs:
            val = prec if prec is not None else 0
        self.val, self.coeffs, self.prec = val, coeffs, prec

    # -- constructors
    @classmethod
    def constant(cls, c):
        return cls(0, [c])

    @classmethod
    def eps(cls, power=1):
        return cls(power, [1])

    @classmethod
    def coerce(cls, x):
        return x if isinstance(x, LaurentSeries) else cls.constant(x)

    # -- inspection
    def is_exact(self):
        return self.prec is None

    def is_zero(self):
        """True only for the exact zero."""
        return not self.coeffs and self.prec is None

    def known(self):
        return bool(self.coeffs) or self.prec is None

    @property
    def valuation(self):
        if not self.coeffs:
            if self.prec is None:
                raise ValueError("the zero series has no valuation")
            raise TruncationError(f"all coefficients below eps^{self.prec} cancelled")
        return self.val

    @property
    def lead(self):
        self.valuation
        return self.coeffs[0]

    def relative_length(self):
        return None if self.prec is None else self.prec - self.val

    def coefficient(self, e):
        if self.prec is not None and e >= self.prec:
            raise TruncationError(f"eps^{e} is beyond the window (prec {self.prec})")
        i = e - self.val
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def limit(self):
        """Value at eps = 0 for valuation >= 0."""
        if self.coeffs and self.val < 0:
            raise ValueError("series has a pole")
        return self.coefficient(0)

    def truncate(self, prec):
        if self.prec is not None and prec > self.prec:
            raise TruncationError("cannot extend a window")
        return LaurentSeries(self.val, self.coeffs, prec)

    def evaluate(self, e0):
        """Truncated sum at a rational eps (the O term is dropped)."""
        e0 = _q(e0)
        return sum((c * e0 ** (self.val + i) for i, c in enumerate(self.coeffs)), Fraction(0))

    # -- arithmetic
    def __add__(self, other):
        other = LaurentSeries.coerce(other)
        precs = [p for p in (self.prec, other.prec) if p is not None]
        prec = min(precs) if precs else None
        lo = min(self._lo(), other._lo())
        hi = max(self.val + len(self.coeffs), other.val + len(other.coeffs))
        if prec is not None:
            hi = min(hi, prec)
        co = [self.coefficient_raw(e) + other.coefficient_raw(e) for e in range(lo, max(lo, hi))]
        return LaurentSeries(lo, co, prec)

    __radd__ = __add__

    def _lo(self):
        return self.val if self.coeffs else (self.prec if self.prec is not None else 0)

    def coefficient_raw(self, e):
        i = e - self.val
        return self.coeffs[i] if 0 <= i < len(self.coeffs) else Fraction(0)

    def __neg__(self):
        return LaurentSeries(self.val, [-c for c in self.coeffs], self.prec)

    def __sub__(self, other):
        return self + (-LaurentSeries.coerce(other))

    def __rsub__(self, other):
        return LaurentSeries.coerce(other) - self

    def __mul__(self, other):
        other = LaurentSeries.coerce(other)
        if self.is_zero() or other.is_zero():
            return LaurentSeries(0, [])
        if not self.known() or not other.known():
            raise TruncationError("multiplying a series with no known coefficient")
        val = self.val + other.val
        # relative accuracy is the smaller relative window
        rel = [r for r in (self.relative_length(), other.relative_length()) if r is not None]
        prec = val + min(rel) if rel else None
        n = len(self.coeffs) + len(other.coeffs) - 1
        if prec is not None:
            n = min(n, prec - val)
        co = [Fraction(0)] * max(n, 0)
        for i, x in enumerate(self.coeffs):
            if i >= n:
                break
            for j, y in enumerate(other.coeffs[:n - i]):
                co[i + j] += x * y
        return LaurentSeries(val, co, prec)

    __rmul__ = __mul__

    def inverse(self, length=None):
        """1/self; exact inputs get `length` coefficients (default the order of the run)."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero series")
        if not self.known():
            raise TruncationError("leading coefficient lost to truncation")
        if self.prec is None:
            if len(self.coeffs) == 1:
                return LaurentSeries(-self.val, [1 / self.coeffs[0]])
            if length is None:
                raise TruncationError("exact non-monomial inverse needs a window length")
            n = length
        else:
            n = self.prec - self.val
        a = self.coeffs + [Fraction(0)] * max(0, n - len(self.coeffs))
        inv0 = 1 / a[0]
        out = [inv0]
        for m in range(1, n):
            s = sum((a[i] * out[m - i] for i in range(1, m + 1)), Fraction(0))
            out.append(-s * inv0)
        return LaurentSeries(-self.val, out, -self.val + n)

    def __truediv__(self, other):
        return self * LaurentSeries.coerce(other).inverse()

    def __rtruediv__(self, other):
        return LaurentSeries.coerce(other) * self.inverse()

    def __pow__(self, m):
        if not isinstance(m, int):
            raise TypeError("integer powers only")
        if m < 0:
            return self.inverse() ** (-m)
        out = LaurentSeries.constant(1)
        base = self
        while m:
            if m & 1:
                out = out * base
            m >>= 1
            if m:
                base = base * base
        return out

    def __eq__(self, other):
        other = LaurentSeries.coerce(other)
        if self.prec != other.prec:
            return False
        # known trailing zeros inside the window do not distinguish two series
        a, b = self._trimmed(), other._trimmed()
        return a == b

    def _trimmed(self):
        co = list(self.coeffs)
        while co and co[-1] == 0:
            co.pop()
        return (self.val if co else None, co)

    __hash__ = None

    def __repr__(self):
        terms = " + ".join(f"({c})e^{self.val + i}" for i, c in enumerate(self.coeffs[:6]))
        more = " + ..." if len(self.coeffs) > 6 else ""
        tail = "" if self.prec is None else f" + O(e^{self.prec})"
        return f"LaurentSeries({terms or '0'}{more}{tail})"

    def to_json(self, n=8):
        return {"valuation": self.val if self.coeffs else None,
                "coefficients": [str(c) for c in self.coeffs[:n]],
                "precision": self.prec}


def series_arith(x, y=None, op="add", m=None):
    """Dispatch for add, mul, inv and pow."""
    if op == "add":
        return x + y
    if op == "mul":
        return x * y
    if op == "inv":
        return x.inverse()
    if op == "pow":
        return x ** m
    raise ValueError(f"unknown operation {op!r}")


# -- the map -------------------------------------------------------------------
def hv_step(k):
    """x_{n+1} = -x_{n-1} + x_n + 1/x_n^k on series."""
    def step(prev, cur):
        return -prev + cur + cur.inverse() ** k
    return step


@dataclass
class SCReport:
    k: object
    u: Fraction
    order: int
    horizon: int
    valuations: list = field(default_factory=list)
    leads: list = field(default_factory=list)
    verdict: str = INDETERMINATE
    step: int | None = None
    limit: Fraction | None = None
    companion: dict | None = None
    widenings: int = 0
    note: str = ""

    def to_json(self):
        return {"k": self.k, "u": str(self.u), "order": self.order, "horizon": self.horizon,
                "valuations": self.valuations, "leading": [str(c) for c in self.leads],
                "verdict": self.verdict, "step": self.step,
                "limit": None if self.limit is None else str(self.limit),
                "companion": self.companion, "widenings": self.widenings, "note": self.note}

    def dumps(self):
        return json.dumps(self.to_json(), sort_keys=True)

    def table(self):
        rows = ["n  valuation  leading"]
        for i, (v, c) in enumerate(zip(self.valuations, self.leads)):
            rows.append(f"{i:<2} {v:>9}  {c}")
        return "\n".join(rows)


# once the orbit is regular it stays analytic in eps; a few extra steps are
# recorded and then the run stops, since regular orbits have exploding heights
SETTLE = 2


def _trace(step, u, order, horizon):
    """x_0..x_m as series, stopping SETTLE steps after confinement or at the horizon."""
    eps = LaurentSeries(1, [1], order + 1)
    prev, cur = LaurentSeries(0, [u], order), eps
    xs = [cur]
    for _ in range(horizon):
        prev, cur = cur, step(prev, cur)
        xs.append(cur)
        m = _find_confinement(xs)
        if m is not None and len(xs) - 1 >= m + SETTLE:
            break
    return xs


def _find_confinement(xs):
    """First m >= 2 with val(x_{m-1}) >= 0, val(x_m) = 0 after a pole; None if absent."""
    seen_pole = False
    for m in range(1, len(xs)):
        v = xs[m].valuation
        if v < 0:
            seen_pole = True
        elif seen_pole and v == 0 and xs[m - 1].valuation >= 0:
            return m
    return None


def _run_once(step, u, order, horizon):
    """(xs, widenings) with order doubled on TruncationError up to MAX_WIDENINGS times."""
    w = 0
    while True:
        try:
            return _trace(step, u, order, horizon), order, w
        except TruncationError:
            if w >= MAX_WIDENINGS:
                raise
            order *= 2
            w += 1


def _companion_seed(u):
    for cand in (Fraction(2, 9), Fraction(5, 7), u + 1, u + 2):
        if cand != u and cand != 0:
            return cand


def sc_run(k, u=Fraction(5, 7), order=DEFAULT_ORDER, horizon=DEFAULT_HORIZON, step=None,
           check_companion=True):
    """Iterate from x_{-1} = u, x_0 = eps and classify the singularity pattern."""
    u = _q(u)
    if u == 0:
        raise ValueError("u must be nonzero")
    step = step or hv_step(k)
    rep = SCReport(k, u, order, horizon)
    try:
        xs, used, rep.widenings = _run_once(step, u, order, horizon)
    except TruncationError as exc:
        rep.verdict = INDETERMINATE
        rep.note = str(exc)
        return rep
    rep.order = used
    rep.valuations = [x.valuation for x in xs]
    rep.leads = [x.lead for x in xs]
    m = _find_confinement(xs)
    if m is None:
        rep.verdict = NON_CONFINED
        rep.note = f"no regular pair through step {horizon}"
        return rep
    rep.step, rep.limit = m, xs[m].limit()
    if not check_companion:
        rep.verdict = CONFINED
        return rep
    u2 = _companion_seed(u)
    other = sc_run(k, u2, order, horizon, step, check_companion=False)
    rep.companion = {"u": str(u2), "step": other.step,
                     "limit": None if other.limit is None else str(other.limit)}
    if other.verdict == CONFINED and other.step == m and other.limit != rep.limit:
        rep.verdict = CONFINED
    elif other.verdict == CONFINED and other.step == m:
        rep.verdict = INDETERMINATE
        rep.note = "limit does not depend on u"
    else:
        rep.verdict = INDETERMINATE
        rep.note = "companion seed behaves differently"
    return rep


@dataclass
class Classification:
    k: object
    verdict: str
    step: int | None
    reports: list

    def to_json(self):
        return {"k": self.k, "verdict": self.verdict, "step": self.step,
                "runs": [r.to_json() for r in self.reports]}


def classify(k, seeds=(Fraction(5, 7), Fraction(2, 9)), order=DEFAULT_ORDER,
             horizon=DEFAULT_HORIZON, step=None):
    """Conjunction over seeds; mixed outcomes are indeterminate."""
    seeds = [_q(s) for s in seeds]
    if len(set(seeds)) < 2:
        raise ValueError("at least two distinct seeds are needed")
    reps = [sc_run(k, u, order, horizon, step) for u in seeds]
    verdicts = {r.verdict for r in reps}
    if verdicts == {CONFINED}:
        steps = {r.step for r in reps}
        limits = [r.limit for r in reps]
        if len(steps) == 1 and len(set(limits)) == len(limits):
            return Classification(k, CONFINED, steps.pop(), reps)
        return Classification(k, INDETERMINATE, None, reps)
    if verdicts == {NON_CONFINED}:
        return Classification(k, NON_CONFINED, None, reps)
    return Classification(k, INDETERMINATE, None, reps)


__all__ = ["LaurentSeries", "TruncationError", "series_arith", "hv_step", "SCReport",
           "Classification", "sc_run", "classify", "CONFINED", "NON_CONFINED", "INDETERMINATE"]
