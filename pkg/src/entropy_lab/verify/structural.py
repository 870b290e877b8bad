"""Exact structural checks on p_n and the factor chain."""
from __future__ import annotations

import random
import time
from fractions import Fraction

from ..exactpoly import ABC, HomoPoly
from ..exactpoly.certify import (COPRIME, IRREDUCIBLE, coprime_certificate,
                                 irreducible_certificate)
from ..hvmap import (factor_chain, iterate_pn, orbit, periodic_pattern, exp_pattern,
                     product_identity_check, x_reduced)
from ..sequences import beta_seq, degree_seqs, parity
from .report import UNKNOWN, VERIFIED, VIOLATED, CheckReport


def mix(*parts):
    """Deterministic seed from small integers."""
    h = 0x9E3779B97F4A7C15
    for p in parts:
        h = ((h ^ (p & 0xFFFFFFFFFFFF)) * 0x100000001B3) % (1 << 64)
    return h


def _short(f, limit=200):
    s = f.to_text()
    return s if len(s) <= limit else f"<{f.nterms()} terms>"


def _range(ns):
    ns = list(ns)
    return (min(ns), max(ns)) if ns else (0, -1)


def check_ord_a(k, ns):
    """ord_a(p_n) = beta_n exactly and (a^{-beta_n} p_n)(0, b, c) != 0."""
    ns = list(ns)
    rep = CheckReport("ord_a", k, _range(ns))
    beta = beta_seq(k, max(ns, default=0)).values
    a = ABC.gen("a")
    for n in ns:
        t = time.perf_counter()
        p = iterate_pn(k, n)
        o = p.ord_var("a")
        tilde = p / a ** o
        at0 = tilde.substitute({"a": 0, "b": ABC.gen("b"), "c": ABC.gen("c")})
        ok = o == beta[n] and not at0.is_zero()
        rep.add(n, VERIFIED if ok else VIOLATED,
                {"ord_a": o, "beta": beta[n], "tilde_at_a0": _short(at0)},
                time.perf_counter() - t)
    return rep


def check_unit_factors(k, ns):
    """No factor a or c in p'_n; no factor b in the c = 1 chain (even k and k = 1)."""
    ns = list(ns)
    rep = CheckReport("unit_factors", k, _range(ns))
    top = max(ns, default=0)
    ch = factor_chain(k, top)
    plane = factor_chain(k, top, "plane") if parity(k) == "even" else None
    for n in ns:
        t = time.perf_counter()
        f = ch[n]
        ev = {"ord_a": f.ord_var("a"), "ord_c": f.ord_var("c")}
        bad = (n >= 1 and ev["ord_a"] != 0) or ev["ord_c"] != 0
        if plane is not None:
            ev["ord_b_plane"] = plane[n].ord_var("b")
            bad = bad or ev["ord_b_plane"] != 0
        rep.add(n, VIOLATED if bad else VERIFIED, ev, time.perf_counter() - t)
    return rep


def coprime_pairs(k, n_max, n_min=0):
    """Pairs the theory asserts coprime: consecutive triples (even k), all pairs (odd k)."""
    out = []
    for j in range(n_min, n_max + 1):
        for i in range(n_min, j):
            if parity(k) == "odd" or j - i <= 2:
                out.append((i, j))
    return out


def check_coprime(k, ns, budget=16, seed=0, retries=3):
    ns = list(ns)
    rep = CheckReport("coprime", k, _range(ns))
    ch = factor_chain(k, max(ns, default=0))
    for i, j in coprime_pairs(k, max(ns, default=0), min(ns, default=0)):
        t = time.perf_counter()
        attempts = []
        cert = None
        for r in range(retries):
            cert = coprime_certificate(ch[i], ch[j], budget=budget, seed=mix(seed, k, i, j, r))
            attempts.append(cert.verdict)
            if cert.verdict == COPRIME:
                break
        ev = {"pair": [i, j], "attempts": attempts, "certificate": cert.evidence}
        rep.add(j, VERIFIED if cert.verdict == COPRIME else UNKNOWN, ev,
                time.perf_counter() - t, label=f"{i}-{j}")
    return rep


def check_irreducible(k, ns, budget=16, seed=0, retries=2):
    """Irreducibility of p'_n(a, b, 1) with the boundary value p'_{-4} = b."""
    if parity(k) != "even":
        raise ValueError("irreducibility is only asserted for even k")
    ns = list(ns)
    rep = CheckReport("irreducible", k, _range(ns))
    ch = factor_chain(k, max(ns, default=0), "plane")
    for n in ns:
        t = time.perf_counter()
        attempts = []
        cert = None
        for r in range(retries):
            cert = irreducible_certificate(ch[n], budget=budget, seed=mix(seed, k, n, r))
            attempts.append(cert.verdict)
            if cert.verdict == IRREDUCIBLE:
                break
        rep.add(n, VERIFIED if cert.verdict == IRREDUCIBLE else UNKNOWN,
                {"attempts": attempts, "certificate": cert.evidence, "degree": ch[n].total_degree()},
                time.perf_counter() - t)
    return rep


def check_product_identity(k, ns):
    ns = list(ns)
    rep = CheckReport("product_identity", k, _range(ns))
    ch = factor_chain(k, max(ns, default=0))
    for n in ns:
        t = time.perf_counter()
        r = product_identity_check(ch, n)
        rep.add(n, VERIFIED if r.ok else VIOLATED, r.to_json(), time.perf_counter() - t)
    return rep


def check_degrees(k, ns):
    """Chain and x_n degrees against the degree recurrences.

    Even k: deg p'_n = s_n and deg x_n = s_n + s_{n-3} = 1 + k(s_{n-1} + s_{n-2}).
    Odd k: deg p'_n = t_n, deg x_n = d_n and t_n = d_n - d_{n-3}.
    """
    ns = list(ns)
    rep = CheckReport("degrees", k, _range(ns))
    top = max(ns, default=0)
    ch = factor_chain(k, top)
    first, d = degree_seqs(k, top)
    s = first.values
    for n in ns:
        t = time.perf_counter()
        xr = x_reduced(ch, n)
        dn, dd = xr.degrees()
        deg = ch[n].homogeneous_degree()
        ev = {"deg_p": deg, "expected_p": s[n], "deg_num": dn, "deg_den": dd, "d_n": d[n]}
        ok = deg == s[n] and dn == dd == d[n]
        if n >= 3:
            if parity(k) == "even":
                ev["s_n+s_n-3"] = s[n] + s[n - 3]
                ev["1+k(s_n-1+s_n-2)"] = 1 + k * (s[n - 1] + s[n - 2])
                ok = ok and dn == ev["s_n+s_n-3"] == ev["1+k(s_n-1+s_n-2)"]
            else:
                ev["d_n-d_n-3"] = d[n] - d[n - 3]
                ok = ok and deg == ev["d_n-d_n-3"]
        rep.add(n, VERIFIED if ok else VIOLATED, ev, time.perf_counter() - t)
    return rep


def check_exp_pattern(k, ns, points=3, seed=0):
    """The exponent of p'_{n-j} in c x_n: 1, -k, -k repeating (odd k), or
    p'_n p'_{n-3} over (p'_{n-1} p'_{n-2})^k (even k).  The factored form is also
    evaluated against the exact orbit at random rational points."""
    ns = list(ns)
    rep = CheckReport("exp_pattern", k, _range(ns))
    ch = factor_chain(k, max(ns, default=0))
    rng = random.Random(mix(seed, k))
    for n in ns:
        t = time.perf_counter()
        got = exp_pattern(k, n)
        want = periodic_pattern(k, n) if parity(k) == "odd" else \
            tuple({0: 1, 1: -k, 2: -k, 3: 1}.get(j, 0) for j in range(n + 1))
        xr = x_reduced(ch, n)
        done = 0
        ok = got == want
        while done < points:
            pt = {v: Fraction(rng.randint(-30, 30), rng.randint(1, 12)) for v in "abc"}
            try:
                xs = orbit(k, pt["b"] / pt["c"], pt["a"] / pt["c"], n)
                val = xr.evaluate(pt)
            except ZeroDivisionError:
                continue
            ok = ok and val == xs[n]
            done += 1
        rep.add(n, VERIFIED if ok else VIOLATED, {"pattern": list(got), "points": points},
                time.perf_counter() - t)
    return rep


def planted_pair(f, g, h):
    """Negative control: (f h, g h) share h."""
    return f * h, g * h


__all__ = ["check_ord_a", "check_unit_factors", "check_coprime", "check_irreducible",
           "check_product_identity", "check_degrees", "check_exp_pattern", "coprime_pairs",
           "planted_pair", "HomoPoly"]
