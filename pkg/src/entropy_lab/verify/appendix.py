"""The sign recursion for z_n (odd k) and the two congruences modulo R_m."""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass

import numpy as np

from ..exactpoly import ABC, NotDivisible, UniPolyModP, Modulus, word_primes
from ..exactpoly.modp import reduce_modp, _trim
from ..exactpoly.poly import _compose
from ..hvmap import factor_chain
from ..sequences import alpha_seq, parity
from .report import UNKNOWN, VACUOUS, VERIFIED, VIOLATED, CheckReport
from .structural import mix

# -- z_n ------------------------------------------------------------------
SIGN_TABLE = {  # n mod 3 -> signs of (z, z1, z2, z3)
    0: (-1, -1, 1, 1),
    1: (1, 1, -1, 1),
    2: (1, 1, 1, 1),
}
MARGIN = 10.0


@dataclass
class ZState:
    n: int
    sign: tuple             # signs of z, z1, z2, z3
    log: tuple              # natural logs of |z|, |z1|, |z2|, |z3| (longdouble)
    exact: tuple = None     # (z, z1, z2, z3) as ints, when known

    def to_json(self):
        out = {"n": self.n, "sign": list(self.sign), "log": [float(x) for x in self.log]}
        if self.exact is not None:
            out["bits"] = [abs(v).bit_length() for v in self.exact]
        return out


def _sgn(x):
    return (x > 0) - (x < 0)


def z_exact(k, n_max):
    """Exact z_n with auxiliaries for 3 <= n <= n_max (seeds z_0 = z_1 = z_2 = 1)."""
    z = [1, 1, 1]
    aux = {}
    # prefix products P[j] = z_0 ... z_{j}
    pref = [1, 1, 1]
    for n in range(3, n_max + 1):
        z1 = -(z[n - 1] ** k) * z[n - 2] ** k * z[n - 3] ** (k + 1)
        z2 = z[n - 1] ** k * (pref[n - 3] if n >= 3 else 1) ** (k * (k + 1))
        z3 = pref[n - 2] ** (k * (k + 1))
        r = n % 3
        zn = z1 if r == 0 else (z1 + z3 if r == 1 else z1 + z2)
        z.append(zn)
        pref.append(pref[-1] * zn)
        aux[n] = (zn, z1, z2, z3)
    return z, aux


def _log_abs(x):
    """Natural log of |x| for a big int, without overflowing a float."""
    b = abs(x).bit_length()
    if b < 1000:
        return np.longdouble(math.log(abs(x)))
    shift = b - 64
    return np.longdouble(math.log(abs(x) >> shift)) + np.longdouble(shift) * np.longdouble(math.log(2))


def _ladd(s1, l1, s2, l2):
    """Sign and log|.| of s1 e^l1 + s2 e^l2; None when the sum is too close to cancel safely."""
    if s1 == s2:
        hi, lo = max(l1, l2), min(l1, l2)
        return s1, hi + np.log1p(np.exp(lo - hi))
    if abs(l1 - l2) < MARGIN:
        return None
    if l1 > l2:
        return s1, l1 + np.log1p(-np.exp(l2 - l1))
    return s2, l2 + np.log1p(-np.exp(l1 - l2))


def z_shadow(k, n_max, exact_upto=10):
    """(sign, log-magnitude) recursion; exact ints feed in wherever they are known.

    A cancelling sum without the required margin is recomputed exactly.
    """
    zs, aux = z_exact(k, exact_upto)
    lk = np.longdouble(k)
    sign = [1, 1, 1]
    logz = [np.longdouble(0)] * 3
    states = []
    escalated = []
    kk = k * (k + 1)
    for n in range(3, n_max + 1):
        # auxiliaries from the shadow values only
        s1 = -sign[n - 1] ** k * sign[n - 2] ** k * sign[n - 3] ** (k + 1)
        l1 = lk * logz[n - 1] + lk * logz[n - 2] + (lk + 1) * logz[n - 3]
        s2 = sign[n - 1] ** k * math.prod(sign[:n - 2]) ** kk
        l2 = lk * logz[n - 1] + np.longdouble(kk) * sum(logz[:n - 2], np.longdouble(0))
        s3 = math.prod(sign[:n - 1]) ** kk
        l3 = np.longdouble(kk) * sum(logz[:n - 1], np.longdouble(0))
        r = n % 3
        if r == 0:
            res = (s1, l1)
        else:
            res = _ladd(s1, l1, *((s3, l3) if r == 1 else (s2, l2)))
            if res is None:
                if n > exact_upto:
                    zs, aux = z_exact(k, n)
                escalated.append(n)
                zn = aux[n][0]
                res = (_sgn(zn), _log_abs(zn))
        sign.append(res[0])
        logz.append(res[1])
        states.append(ZState(n, (res[0], s1, s2, s3), (res[1], l1, l2, l3),
                             aux.get(n) if n <= exact_upto else None))
    return states, escalated


def z_signs(k, n_max=20, exact_upto=10):
    """Check the sign table of z_n and its auxiliaries (odd k)."""
    if parity(k) != "odd" or k < 3:
        raise ValueError("the sign recursion is stated for odd k >= 3")
    rep = CheckReport("z_signs", k, (3, n_max))
    t0 = time.perf_counter()
    _, aux = z_exact(k, exact_upto)
    states, escalated = z_shadow(k, n_max, exact_upto)
    seeds_ok = aux[3][0] == -1 and aux[4][0] == 2
    for st in states:
        n = st.n
        want = SIGN_TABLE[n % 3]
        ev = st.to_json()
        ok = st.sign == want
        if n in aux:
            ex = aux[n]
            ev["exact_sign"] = [_sgn(v) for v in ex]
            ok = ok and tuple(_sgn(v) for v in ex) == want
            # overlap agreement of the two representations
            agree = all(abs(float(l) - float(_log_abs(v))) <= 1e-9 * max(1.0, abs(float(l)))
                        for l, v in zip(st.log, ex) if v)
            ev["shadow_agrees"] = bool(agree) and tuple(_sgn(v) for v in ex) == st.sign
            ok = ok and ev["shadow_agrees"]
        if n in (3, 4):
            ok = ok and seeds_ok
        if n in escalated:
            ev["escalated"] = True
        rep.add(n, VERIFIED if ok else VIOLATED, ev)
    rep.seconds = time.perf_counter() - t0
    return rep


# -- congruences -------------------------------------------------------------
def _R_index_ok(n, lag):
    # the right-hand side reaches down to R_{n-lag-2}
    return n - lag - 2 >= 0


def congruence_parts(P, R, n, k, m, lag, c, offset=0):
    """(lhs, rhs, modulus index) of the congruence modulo R_{n-lag}, lag in {3, 4}.

    A nonzero offset perturbs the multiplier on the right (negative control).
    """
    ck = c ** (k + 1)
    m1 = m + 1 + offset
    if lag == 3:
        lhs = -(P(n) * P(n - 1)) ** k + m * ck * R(n - 1) ** (k * (k + 1)) * R(n - 2) ** (k * k - 1)
        rhs = P(n - 1) ** (k * (k + 1)) * P(n - 2) ** (k * k - 1) * (
            -(P(n - 3) * P(n - 4)) ** k
            + m1 * ck * R(n - 4) ** (k * (k + 1)) * R(n - 5) ** (k * k - 1))
        return lhs, rhs, n - 3
    lhs = -P(n - 1) ** k + m * ck * R(n - 2) ** (k * k - 1) * R(n - 3) ** (k * (k + 1))
    rhs = P(n - 2) ** (k * k - 1) * P(n - 3) ** (k * (k + 1)) * (
        -P(n - 4) ** k + m1 * ck * R(n - 5) ** (k * k - 1) * R(n - 6) ** (k * (k + 1)))
    return lhs, rhs, n - 4


def congruence_exact(k, n, m, lag=3, offset=0):
    """True iff R_mod divides lhs - rhs, by exact division."""
    ch = factor_chain(k, n)
    lhs, rhs, mod = congruence_parts(ch.__getitem__, ch.R, n, k, m, lag, ABC.gen("c"), offset)
    diff = lhs - rhs
    try:
        diff / ch.R(mod)
    except NotDivisible:
        return False, {"terms": diff.nterms()}
    return True, {"terms": diff.nterms()}


class _Residues:
    """Images of p'_j at (b, c) = (b0, c0) mod p, reduced modulo a fixed polynomial in a."""

    def __init__(self, k, images, modulus):
        self.k = k
        self.images = images
        self.M = Modulus(modulus)
        self.p = modulus.p
        self.red = {}

    def P(self, j):
        if j not in self.red:
            self.red[j] = self.M.reduce(self.images[j])
        return self.red[j]

    def R(self, m):
        out = UniPolyModP.one(self.p)
        while m >= 0:
            out = self.M.mulmod(out, self.P(m))
            m -= 3
        return out


class _ResidueRing:
    """Elements of GF(p)[a]/(M) with the operators the congruence formulas use."""

    def __init__(self, M, v):
        self.M, self.v = M, v

    def _w(self, v):
        return _ResidueRing(self.M, v)

    def __mul__(self, o):
        if isinstance(o, int):
            return self._w(self.M.reduce(self.v * (o % self.v.p)))
        return self._w(self.M.mulmod(self.v, o.v))

    __rmul__ = __mul__

    def __pow__(self, e):
        return self._w(self.M.pow(self.v, e))

    def __add__(self, o):
        return self._w(self.v + o.v)

    def __sub__(self, o):
        return self._w(self.v - o.v)

    def __neg__(self):
        return self._w(-self.v)


def _uni_in_a(f, b0, c0, p):
    terms, free = reduce_modp(f, {"b": b0, "c": c0}, p)
    deg = max((e[0] for e in terms), default=-1)
    co = [0] * (deg + 1)
    for (e,), x in terms.items():
        co[e] = x
    return UniPolyModP._raw(_trim(co), p)


def _T_image(f, k, b0, c0, p):
    """T(f)(a, b0, c0) mod p as a polynomial in a, for f in Z[a,b,c]."""
    p1 = UniPolyModP([c0 ** (k + 1) % p] + [0] * (k - 1) + [(-b0) % p, 1], p)
    groups = {}
    for (ea, eb, ec), co in f.terms().items():
        e = (k + 1) * eb + k * ec
        groups.setdefault(ea, {})
        g = groups[ea]
        g[e] = (g.get(e, 0) + co * pow(c0, ec, p)) % p
    parts = {}
    for ea, g in groups.items():
        arr = [0] * (max(g) + 1)
        for e, v in g.items():
            arr[e] = v
        parts[ea] = UniPolyModP._raw(_trim(arr), p)
    zero = UniPolyModP._raw((), p)
    return _compose(parts, max(groups) + 1, p1, zero)


def congruence_residue(k, n, m, lag=3, trials=3, seed=0, offset=0):
    """Residue-ring test of R_mod | lhs - rhs at random (b, c) modulo word primes.

    Entries beyond the exact chain come from T applied to the last exact entry,
    evaluated directly in GF(p)[a].  A non-multiple survives a random
    specialisation with probability at most deg/p per trial.
    """
    exact_top = n if n <= _exact_ceiling(k) else n - 1
    ch = factor_chain(k, exact_top)
    rng = random.Random(mix(seed, k, n, m, lag))
    primes = word_primes()
    evidence = []
    for _ in range(trials):
        while True:
            p = rng.choice(primes)
            b0, c0 = rng.randrange(1, p), rng.randrange(1, p)
            images = {j: _uni_in_a(ch[j], b0, c0, p) for j in range(exact_top + 1)}
            if n > exact_top:
                img = _T_image(ch[n - 1], k, b0, c0, p)
                al = alpha_seq(k, n)[n]
                if any(img.c[:al]):
                    return False, {"reason": f"a^{al} does not divide T(p'_{n - 1}) mod {p}"}
                images[n] = UniPolyModP._raw(img.c[al:], p)
            # the modulus must keep its a-degree under specialisation
            rm = UniPolyModP.one(p)
            want = 0
            j = n - lag
            while j >= 0:
                rm = rm * images[j]
                want += ch[j].degree("a")
                j -= 3
            if rm.degree() == want:
                break
        res = _Residues(k, images, rm)
        ring = lambda v: _ResidueRing(res.M, v)
        P = lambda j: ring(res.P(j))
        R = lambda j: ring(res.R(j))
        cval = ring(res.M.reduce(UniPolyModP([c0], p)))
        lhs, rhs, _ = congruence_parts(P, R, n, k, m, lag, cval, offset)
        diff = (lhs - rhs).v
        evidence.append({"prime": p, "b": b0, "c": c0, "modulus_degree": rm.degree(),
                         "zero": diff.is_zero()})
        if not diff.is_zero():
            return False, {"trials": evidence}
    return True, {"trials": evidence}


def _exact_ceiling(k):
    return 5 if k <= 3 else 4


def check_congruences(k, ns, ms=(1, 2), lags=(3, 4), seed=0, exact=None, trials=3):
    """Divisibility of lhs - rhs by R_{n-lag}, for lag 3 and lag 4.

    Exact division is used inside the exact-chain ceiling; beyond it the
    residue-ring test is used.  `exact` forces one route.
    """
    if parity(k) != "odd" or k < 3:
        raise ValueError("the congruences are stated for odd k >= 3")
    ns = list(ns)
    rep = CheckReport("congruences", k, (min(ns), max(ns)))
    for n in ns:
        for lag in lags:
            for m in ms:
                t = time.perf_counter()
                label = f"lag{lag}-m{m}"
                if not _R_index_ok(n, lag):
                    rep.add(n, VACUOUS, {"reason": "an R index is negative", "lag": lag, "m": m},
                            label=label)
                    continue
                use_exact = (n <= _exact_ceiling(k)) if exact is None else exact
                if use_exact:
                    ok, ev = congruence_exact(k, n, m, lag)
                    ev["method"] = "exact_division"
                else:
                    ok, ev = congruence_residue(k, n, m, lag, trials=trials, seed=seed)
                    ev["method"] = "residue_ring"
                ev.update({"lag": lag, "m": m})
                rep.add(n, VERIFIED if ok else VIOLATED, ev, time.perf_counter() - t, label=label)
    return rep


__all__ = ["ZState", "z_exact", "z_shadow", "z_signs", "congruence_exact", "congruence_residue",
           "check_congruences", "SIGN_TABLE", "UNKNOWN"]
