"""One-sided certificates: coprimality and irreducibility.

Both work through images modulo word-size primes.  A certificate only fires
when the images carry a proof; otherwise the verdict is "unknown".

Coprime.  If f and g share a factor h with deg_v h > 0, then for every
specialisation of the other variables that keeps deg_v f and deg_v g, the
images share the image of h, which still has positive degree in v.  A gcd of
degree 0 for one such specialisation therefore rules out common factors
involving v.  Doing this for every variable, plus coprime integer content,
leaves only units.

Irreducible (bivariate, in a and b).  With integer content 1 and no factor in
b alone, any factorisation f = g*h has deg_a g, deg_a h > 0.  Specialising
b = beta without dropping the a-degree gives F = f(a, beta) = g(a,beta)*h(a,beta)
with both factors of positive degree, so F irreducible over Q is a proof.  F
is shown irreducible over Q by factor degree patterns modulo primes q that do
not divide lc(F) and keep F squarefree: a factor of degree d over Q would
appear as a subset sum d in every pattern.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import gcd

from .modp import UniPolyModP, reduce_modp, word_primes, _trim
from .poly import HomoPoly

COPRIME = "coprime"
IRREDUCIBLE = "irreducible"
UNKNOWN = "unknown"


@dataclass
class Certificate:
    verdict: str
    evidence: dict = field(default_factory=dict)

    def __bool__(self):
        return self.verdict != UNKNOWN

    def to_json(self):
        return {"verdict": self.verdict, "evidence": self.evidence}


def _rng(seed):
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def _uni(terms, p):
    """Univariate image from a {(e,): residue} dict."""
    if not terms:
        return UniPolyModP._raw((), p)
    deg = max(e[0] for e in terms)
    co = [0] * (deg + 1)
    for (e,), x in terms.items():
        co[e] = x
    return UniPolyModP._raw(_trim(co), p)


def _var_check(f, g, v, degf, degg, budget, rng, ring):
    """Search for a degree-preserving specialisation with gcd 1 in variable v."""
    others = [nm for nm in ring.names if nm != v]
    primes = word_primes()
    for trial in range(1, budget + 1):
        p = rng.choice(primes)
        pt = {nm: rng.randrange(1, p) for nm in others}
        F = _uni(reduce_modp(f, pt, p)[0], p)
        if F.degree() != degf:
            continue
        G = _uni(reduce_modp(g, pt, p)[0], p)
        if G.degree() != degg:
            continue
        if F.gcd(G).degree() == 0:
            return {"prime": p, "point": pt, "trials": trial}
    return None


def _laurent_fix(f):
    # monomials are units in a Laurent ring, so only the polynomial part matters
    if f.ring.laurent and any(f.shift):
        return HomoPoly(f.ring, f.raw(), None, None)
    return f


def coprime_certificate(f, g, budget=16, seed=0):
    """Certify that f and g share no non-unit factor (never a false positive)."""
    if f.ring != g.ring:
        raise ValueError("ring mismatch")
    if f.is_zero() or g.is_zero():
        raise ValueError("zero input")
    rng = _rng(seed)
    f, g = _laurent_fix(f), _laurent_fix(g)
    ring = f.ring
    ev = {"variables": {}}
    if gcd(f.content(), g.content()) != 1:
        return Certificate(UNKNOWN, {"reason": "common integer content"})
    df, dg = f.raw().degrees(), g.raw().degrees()
    active = []
    for i, v in enumerate(ring.names):
        a, b = int(df[i]), int(dg[i])
        if a == 0 or b == 0:
            ev["variables"][v] = "absent from one side"
            continue
        active.append(v)
        w = _var_check(f, g, v, a, b, budget, rng, ring)
        if w is None:
            ev["variables"][v] = f"no witness in {budget} trials"
            return Certificate(UNKNOWN, ev)
        ev["variables"][v] = w
    # extra bivariate check on two active variables
    if len(active) >= 2 or (len(active) == 1 and ring.nvars >= 2):
        pair = active[:2] if len(active) >= 2 else [active[0], next(n for n in ring.names if n != active[0])]
        w = _bivariate_check(f, g, pair, budget, rng)
        if w is None:
            ev["bivariate"] = f"no witness in {budget} trials"
            return Certificate(UNKNOWN, ev)
        ev["bivariate"] = w
    return Certificate(COPRIME, ev)


def _bivariate_check(f, g, pair, budget, rng):
    ring = f.ring
    others = [nm for nm in ring.names if nm not in pair]
    primes = word_primes()
    for trial in range(1, budget + 1):
        p = rng.choice(primes)
        pt = {nm: rng.randrange(1, p) for nm in others}
        F, free = reduce_modp(f, pt, p)
        G, _ = reduce_modp(g, pt, p)
        if not F or not G:
            continue
        if _bivariate_coprime(F, G, p, rng, budget):
            return {"pair": list(free), "prime": p, "point": pt, "trials": trial}
    return None


def _bivariate_coprime(F, G, p, rng, budget):
    """Coprimality over GF(p) of two bivariate images given as dicts."""
    for axis in (0, 1):
        dF = max(e[axis] for e in F)
        dG = max(e[axis] for e in G)
        if dF == 0 or dG == 0:
            continue
        other = 1 - axis
        ok = False
        for _ in range(budget):
            t = rng.randrange(1, p)
            fu = _collapse(F, axis, other, t, p)
            gu = _collapse(G, axis, other, t, p)
            if fu.degree() != dF or gu.degree() != dG:
                continue
            if fu.gcd(gu).degree() == 0:
                ok = True
                break
        if not ok:
            return False
    return True


def _collapse(F, axis, other, t, p):
    co = {}
    for e, x in F.items():
        co[e[axis]] = (co.get(e[axis], 0) + x * pow(t, e[other], p)) % p
    deg = max(co) if co else -1
    arr = [0] * (deg + 1)
    for i, x in co.items():
        arr[i] = x
    return UniPolyModP._raw(_trim(arr), p)


# -- irreducibility ---------------------------------------------------------
def _subset_sums(degs):
    sums = {0}
    for d in degs:
        sums |= {s + d for s in sums}
    return sums


def univariate_irreducible_over_q(coeffs, budget=16, seed=0):
    """Certify an integer polynomial (low-degree-first coefficients) irreducible over Q."""
    rng = _rng(seed)
    n = len(coeffs) - 1
    if n < 1:
        return Certificate(UNKNOWN, {"reason": "constant"})
    if n == 1:
        return Certificate(IRREDUCIBLE, {"reason": "linear"})
    lc = coeffs[-1]
    possible = set(range(1, n))
    patterns = []
    primes = list(word_primes())
    rng.shuffle(primes)
    used = 0
    for q in primes:
        if used >= budget:
            break
        if lc % q == 0:
            continue
        F = UniPolyModP(coeffs, q)
        if F.degree() != n or not F.is_squarefree():
            continue
        used += 1
        degs = F.ddf_degrees()
        patterns.append({"prime": q, "degrees": degs})
        if len(degs) == 1:
            return Certificate(IRREDUCIBLE, {"patterns": patterns, "reason": "irreducible mod q"})
        possible &= _subset_sums(degs)
        if not possible:
            return Certificate(IRREDUCIBLE, {"patterns": patterns,
                                             "reason": "incompatible factor degree patterns"})
    return Certificate(UNKNOWN, {"patterns": patterns, "possible_factor_degrees": sorted(possible)})


def _coeffs_in(f, main, other):
    """f as {deg_main: {deg_other: int}} for a bivariate f."""
    im, io = f.ring.index(main), f.ring.index(other)
    out = {}
    for e, c in f.terms().items():
        out.setdefault(e[im], {})[e[io]] = c
    return out


def _no_factor_in(f, main, other, budget, rng):
    """Certify that no non-constant polynomial in `other` alone divides f."""
    coeffs = _coeffs_in(f, main, other)
    polys = list(coeffs.values())
    if any(len(p) == 1 and 0 in p for p in polys):
        return {"reason": "a coefficient is a nonzero constant"}
    # reference: the coefficient of least degree in `other`
    ref = min(polys, key=lambda p: max(p))
    dref = max(ref)
    primes = word_primes()
    for trial in range(1, budget + 1):
        p = rng.choice(primes)
        if ref[dref] % p == 0:
            continue
        acc = _uni({(e,): x % p for e, x in ref.items()}, p)
        for poly in polys:
            if acc.degree() == 0:
                break
            acc = acc.gcd(_uni({(e,): x % p for e, x in poly.items()}, p))
        if acc.degree() == 0:
            return {"prime": p, "trials": trial}
    return None


def irreducible_certificate(f, budget=16, seed=0):
    """Certify a polynomial in a, b (other variables absent) irreducible over Z."""
    rng = _rng(seed)
    if f.is_zero() or f.is_constant():
        raise ValueError("irreducibility of a constant")
    ring = f.ring
    degs = dict(zip(ring.names, f.degrees()))
    live = [nm for nm, d in degs.items() if d > 0]
    if len(live) > 2 or any(s for s in f.shift):
        return Certificate(UNKNOWN, {"reason": "needs a bivariate polynomial"})
    if f.content() != 1:
        return Certificate(UNKNOWN, {"reason": f"integer content {f.content()}"})
    if len(live) == 1:
        v = live[0]
        co = [0] * (degs[v] + 1)
        for e, c in f.terms().items():
            co[e[ring.index(v)]] = c
        cert = univariate_irreducible_over_q(co, budget, rng)
        cert.evidence["variable"] = v
        return cert
    main, other = ("a", "b") if set(live) == {"a", "b"} else tuple(live)
    ev = {"main": main}
    w = _no_factor_in(f, main, other, budget, rng)
    if w is None:
        ev["content"] = "not certified"
        return Certificate(UNKNOWN, ev)
    ev["content"] = w
    coeffs = _coeffs_in(f, main, other)
    n = max(coeffs)
    lead = coeffs[n]
    tried = []
    remaining = budget
    while remaining > 0:
        beta = rng.randrange(-64, 65)
        if sum(c * beta ** j for j, c in lead.items()) == 0:
            continue
        F = [sum(c * beta ** j for j, c in coeffs.get(i, {}).items()) for i in range(n + 1)]
        per = min(remaining, 8)
        cert = univariate_irreducible_over_q(F, per, rng)
        remaining -= max(1, len(cert.evidence.get("patterns", [])))
        tried.append({"beta": beta, "result": cert.verdict,
                      "patterns": cert.evidence.get("patterns", [])})
        if cert.verdict == IRREDUCIBLE:
            ev["beta"] = beta
            ev["univariate"] = cert.evidence
            ev["attempts"] = len(tried)
            return Certificate(IRREDUCIBLE, ev)
    ev["attempts"] = tried
    return Certificate(UNKNOWN, ev)
