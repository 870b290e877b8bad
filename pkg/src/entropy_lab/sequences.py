"""Integer sequences of the map family, recurrence fitting and entropy.

Everything here is exact: recurrences are fitted over the rationals with
Berlekamp-Massey, and dominant roots are isolated with Sturm sequences and
refined by rational bisection before being rendered as Decimals.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from decimal import Decimal, localcontext
from fractions import Fraction
from math import lcm

LABELS = ("s", "t", "d", "beta", "alpha", "custom")


class FitUnstable(ValueError):
    pass


class RootNotFound(ValueError):
    pass


def parity(k):
    """Branch selector: k = 1 follows the even branch."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return "even" if (k % 2 == 0 or k == 1) else "odd"


@dataclass(frozen=True)
class DegreeSeq:
    label: str
    values: tuple
    k: int | None = None

    def __post_init__(self):
        if self.label not in LABELS:
            raise ValueError(f"unknown label {self.label!r}")
        vals = tuple(int(v) for v in self.values)
        object.__setattr__(self, "values", vals)
        if self.label != "custom" and any(v < 0 for v in vals):
            raise ValueError(f"negative entry in {self.label}")
        if self.label == "d" and any(vals[i] > vals[i + 1] for i in range(1, len(vals) - 1)):
            raise ValueError("d must be non-decreasing from index 1")

    def __getitem__(self, i):
        return self.values[i]

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)

    def to_json(self):
        out = {"label": self.label}
        if self.k is not None:
            out["k"] = self.k
        out["values"] = [str(v) for v in self.values]
        return out

    def dumps(self):
        return json.dumps(self.to_json(), separators=(",", ":"))

    @classmethod
    def from_json(cls, obj):
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(obj["label"], tuple(int(v) for v in obj["values"]), obj.get("k"))


@dataclass(frozen=True)
class LinearRecurrence:
    """u_n = sum_i coefficients[i-1] * u_{n-i} + constant."""

    coefficients: tuple
    constant: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "coefficients", tuple(Fraction(c) for c in self.coefficients))
        object.__setattr__(self, "constant", Fraction(self.constant))

    @property
    def order(self):
        return len(self.coefficients)

    def charpoly(self):
        """Monic characteristic polynomial, highest degree first.

        Entries are ints when integral, otherwise Fractions.
        """
        out = [Fraction(1)] + [-c for c in self.coefficients]
        return tuple(int(c) if c.denominator == 1 else c for c in out)

    def integer_charpoly(self):
        cp = [Fraction(c) for c in self.charpoly()]
        m = lcm(*(c.denominator for c in cp))
        return tuple(int(c * m) for c in cp)

    def next_value(self, history):
        return sum(c * history[-i] for i, c in enumerate(self.coefficients, 1)) + self.constant

    def satisfied_by(self, values):
        m = self.order
        return all(self.next_value(values[n - m:n]) == values[n] for n in range(m, len(values)))

    def extend(self, seeds, n_total):
        out = [Fraction(x) for x in seeds]
        while len(out) < n_total:
            out.append(self.next_value(out))
        return [int(x) if x.denominator == 1 else x for x in out]

    def to_json(self):
        return {"order": self.order, "coefficients": [str(c) for c in self.coefficients],
                "constant": str(self.constant), "charpoly": [str(c) for c in self.charpoly()]}


# -- degree sequences --------------------------------------------------------
def beta_seq(k, n_max):
    br = parity(k)
    b = [1, 0, 0]
    for n in range(3, n_max + 1):
        if br == "even":
            b.append(k + 1 if n == 3 else k * (k + 2) * (k + 1) ** (n - 4))
        else:
            b.append(k * (b[n - 1] + b[n - 2]) + (k + 1) * b[n - 3])
    return DegreeSeq("beta", tuple(b[:n_max + 1]), k)


def alpha_seq(k, n_max):
    """alpha_0 is stored as 0 (p'_0 = a is a seed, not a T-image); alpha_1 = 0."""
    beta = beta_seq(k, max(n_max, 1)).values
    al = [0, 0]
    for n in range(2, n_max + 1):
        al.append(beta[n] - sum(beta[n - j] * al[j] for j in range(1, n)))
    return DegreeSeq("alpha", tuple(al[:n_max + 1]), k)


def b_bounds(k, n):
    """The two upper bounds for ord_a of the odd-k numerator terms and which one is attained."""
    if k % 2 == 0 or k < 3:
        raise ValueError("b_bounds needs odd k >= 3")
    if n < 3:
        raise ValueError("n must be >= 3")
    beta = beta_seq(k, n).values
    b2 = k * beta[n - 1] + k * (k + 1) * sum(beta[:n - 2])
    b3 = k * (k + 1) * sum(beta[:n - 1])
    bn = beta[n]
    if bn < b2 and bn < b3:
        cls = "strict"
    elif bn == b3 and b3 < b2:
        cls = "eq_beta_via_B3"
    elif bn == b2 and b2 < b3:
        cls = "eq_beta_via_B2"
    else:
        cls = "unexpected"
    return b2, b3, cls


def expected_b_class(n):
    return ("strict", "eq_beta_via_B3", "eq_beta_via_B2")[n % 3]


def degree_seqs(k, n_max):
    """(s, d) for the even branch, (t, d) for the odd branch."""
    if parity(k) == "even":
        s = [1, k + 1, (k + 1) ** 2]
        while len(s) <= n_max:
            n = len(s)
            s.append(k * (s[n - 1] + s[n - 2]) - s[n - 3] + 1)
        d = [1, k + 1, (k + 1) ** 2, k * (k + 1) * (k + 2) + 1]
        while len(d) <= n_max:
            n = len(d)
            d.append((k + 1) * d[n - 1] - (k + 1) * d[n - 3] + d[n - 4])
        return DegreeSeq("s", tuple(s[:n_max + 1]), k), DegreeSeq("d", tuple(d[:n_max + 1]), k)
    t = [1, k + 1, (k + 1) ** 2, k * (k + 1) * (k + 2)]
    while len(t) <= n_max:
        n = len(t)
        t.append((k + 1) * t[n - 1] - k * t[n - 3])
    d = [1, k + 1, (k + 1) ** 2]
    while len(d) <= n_max:
        n = len(d)
        d.append((k + 1) * d[n - 1] - k * d[n - 3])
    return DegreeSeq("t", tuple(t[:n_max + 1]), k), DegreeSeq("d", tuple(d[:n_max + 1]), k)


def stated_recurrence(k):
    """The stated linear recurrence for d_n: four terms (even branch) or three (odd)."""
    if parity(k) == "even":
        return LinearRecurrence((k + 1, 0, -(k + 1), 1))
    return LinearRecurrence((k + 1, 0, -k))


# -- fitting ------------------------------------------------------------------
def fit_recurrence(seq, checks=2):
    """Minimal homogeneous recurrence by Berlekamp-Massey over Q.

    An order-L fit is accepted only with at least 2L + checks terms, the
    extra ones serving as confirmation beyond the 2L that determine it.
    """
    vals = [Fraction(v) for v in (seq.values if isinstance(seq, DegreeSeq) else seq)]
    C = [Fraction(1)]
    B = [Fraction(1)]
    L, m, b = 0, 1, Fraction(1)
    for n, s in enumerate(vals):
        delta = s + sum(C[i] * vals[n - i] for i in range(1, L + 1))
        if delta == 0:
            m += 1
            continue
        coef = delta / b
        T = list(C)
        need = len(B) + m
        if len(C) < need:
            C = C + [Fraction(0)] * (need - len(C))
        for i, x in enumerate(B):
            C[i + m] -= coef * x
        if 2 * L <= n:
            L, B, b, m = n + 1 - L, T, delta, 1
        else:
            m += 1
    C = (C + [Fraction(0)] * (L + 1))[:L + 1]
    if L == 0 or len(vals) < 2 * L + max(1, checks):
        raise FitUnstable(f"{len(vals)} terms cannot pin down a recurrence of order {L}")
    rec = LinearRecurrence(tuple(-c for c in C[1:]))
    if not rec.satisfied_by(vals):
        raise FitUnstable("fitted recurrence does not reproduce the data")
    return rec


# -- polynomials over Q (highest degree first) and root isolation --------------
def _strip(p):
    p = list(p)
    while p and p[0] == 0:
        p.pop(0)
    return p


def _peval(p, x):
    acc = Fraction(0)
    for c in p:
        acc = acc * x + c
    return acc


def _pdiv(a, b):
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]
    q = []
    while len(a) >= len(b) and a:
        c = a[0] / b[0]
        q.append(c)
        for i in range(len(b)):
            a[i] -= c * b[i]
        a.pop(0)
    return q, _strip(a)


def _pgcd(a, b):
    a, b = _strip(a), _strip(b)
    while b:
        a, b = b, _pdiv(a, b)[1]
    return [x / a[0] for x in a]


def _deriv(p):
    n = len(p) - 1
    return [c * (n - i) for i, c in enumerate(p[:-1])]


def _sturm(p):
    chain = [p, _deriv(p)]
    while True:
        r = _pdiv(chain[-2], chain[-1])[1]
        if not r:
            return chain
        chain.append([-x for x in r])


def _sign_changes(chain, x):
    signs = [v for v in (_peval(q, x) for q in chain) if v != 0]
    return sum(1 for u, v in zip(signs, signs[1:]) if (u > 0) != (v > 0))


def squarefree_part(p):
    p = [Fraction(c) for c in _strip(p)]
    g = _pgcd(p, _deriv(p))
    return _pdiv(p, g)[0] if len(g) > 1 else p


def dominant_root(rec, precision=60):
    """Largest real root of the characteristic polynomial as a Decimal.

    `rec` may be a LinearRecurrence or a coefficient list (highest first).
    The returned value is within 10^-(precision+5) of the root.
    """
    cp = rec.charpoly() if isinstance(rec, LinearRecurrence) else tuple(rec)
    p = squarefree_part(cp)
    if len(p) < 2:
        raise RootNotFound("constant characteristic polynomial")
    p = [c / p[0] for c in p]
    bound = 1 + max(abs(c) for c in p[1:])
    chain = _sturm(p)
    if _sign_changes(chain, Fraction(0)) - _sign_changes(chain, bound) == 0:
        raise RootNotFound("no positive real root")
    lo, hi = -bound, bound
    tol = Fraction(1, 10 ** (precision + 8))
    top = _sign_changes(chain, bound)
    # invariant: (lo, bound] contains a root, (hi, bound] does not
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if _sign_changes(chain, mid) - top > 0:
            lo = mid
        else:
            hi = mid
    with localcontext() as ctx:
        ctx.prec = precision + 10
        root = Decimal(hi.numerator) / Decimal(hi.denominator)
    return root


# -- entropy ---------------------------------------------------------------
@dataclass(frozen=True)
class EntropyResult:
    k: int
    root: Decimal
    entropy: Decimal
    charpoly: tuple
    source: str
    meta: dict = field(default_factory=dict, compare=False)

    def to_json(self, digits=30):
        return {"k": self.k, "source": self.source,
                "root": _fmt(self.root, digits), "entropy": _fmt(self.entropy, digits),
                "charpoly": [str(c) for c in self.charpoly]}


def _fmt(x, digits):
    return format(x, f".{digits}f")


def closed_form_root(k, precision=60, branch=None):
    branch = branch or parity(k)
    with localcontext() as ctx:
        ctx.prec = precision + 10
        if branch == "even":
            r = (Decimal(k + 1) + Decimal((k - 1) * (k + 3)).sqrt()) / 2
        else:
            r = (Decimal(k) + Decimal(k * (k + 4)).sqrt()) / 2
    return r


def closed_form_entropy(k, precision=60, branch=None):
    r = closed_form_root(k, precision, branch)
    with localcontext() as ctx:
        ctx.prec = precision + 10
        return r.ln()


def entropy(k, seq=None, precision=60):
    """Closed form when seq is None, otherwise from a fitted recurrence of seq."""
    if seq is None:
        root = closed_form_root(k, precision)
        ent = closed_form_entropy(k, precision)
        cp = stated_recurrence(k).charpoly()
        source = "closed_form"
    else:
        rec = fit_recurrence(seq)
        root = dominant_root(rec, precision)
        with localcontext() as ctx:
            ctx.prec = precision + 10
            ent = root.ln()
        cp = rec.charpoly()
        source = "fitted"
    with localcontext() as ctx:
        ctx.prec = precision + 10
        lnk = Decimal(k).ln()
    if ent < lnk - Decimal(10) ** (-precision):
        raise AssertionError(f"entropy {ent} below ln k for k={k}")
    return EntropyResult(k, root, ent, tuple(cp), source)
