"""Gauge covariance: Q_n from seeds (b, mu3, mu2, mu1, a) is u_n P_n at rescaled arguments."""
from __future__ import annotations

import random
import time
from fractions import Fraction

from ..hvmap import (covariant_image, even_step, factor_chain, gauge_sequence,
                     transformed_arguments)
from ..hvmap.chain import LOW
from ..sequences import parity
from .report import VERIFIED, VIOLATED, CheckReport
from .structural import mix


def _rand_nonzero(rng, lo=-9, hi=9, den=7):
    while True:
        x = Fraction(rng.randint(lo, hi), rng.randint(1, den))
        if x:
            return x


def random_mu(rng):
    return tuple(_rand_nonzero(rng) for _ in range(3))


def gauge_values(k, n, a, b, mu):
    """Q_{-4}..Q_n at a numeric point by the three-term recurrence on rationals."""
    m1, m2, m3 = mu
    vals = [Fraction(b), m3, m2, m1, Fraction(a)]
    for j in range(0, n):
        vals.append(even_step(_Idx(vals), j, k))
    return vals


class _Idx:
    def __init__(self, vals):
        self.vals = vals

    def __getitem__(self, j):
        return self.vals[j - LOW]


def symbolic_match(k, n):
    """Full comparison in the Laurent ring (practical for n <= 3)."""
    q = factor_chain(k, n, "gauge")[n]
    p = factor_chain(k, n, "plane")[n]
    return q == covariant_image(p, k, n)


def numeric_match(k, n, mu, points, rng):
    """Compare at `points` random (a, b); points where the recurrence divides by zero are resampled."""
    plane = factor_chain(k, n, "plane")
    g = gauge_sequence(k, n, mu)
    sa, sb = transformed_arguments(k, mu)
    ok, done, skipped = True, 0, 0
    while done < points:
        a, b = _rand_nonzero(rng, -20, 20, 9), _rand_nonzero(rng, -20, 20, 9)
        try:
            q = gauge_values(k, n, a, b, mu)[n - LOW]
        except ZeroDivisionError:
            skipped += 1
            if skipped > 50 * points:
                raise
            continue
        want = g.value(n) * plane[n].evaluate({"a": a * sa, "b": b * sb})
        ok = ok and q == want
        done += 1
    return ok, skipped


def check_gauge_covariance(k, ns, mus=None, seed=0, points=10, symbolic_upto=3):
    if parity(k) != "even":
        raise ValueError("gauge covariance is only asserted for even k")
    ns = list(ns)
    rng = random.Random(mix(seed, k, 7))
    if mus is None:
        mus = [random_mu(rng) for _ in range(2)]
    rep = CheckReport("gauge_covariance", k, (min(ns, default=0), max(ns, default=-1)))
    for n in ns:
        t = time.perf_counter()
        ev = {}
        ok = True
        if n <= symbolic_upto:
            ev["symbolic"] = symbolic_match(k, n)
            ok = ev["symbolic"]
        runs = []
        for mu in mus:
            good, skipped = numeric_match(k, n, tuple(Fraction(m) for m in mu), points, rng)
            runs.append({"mu": [str(Fraction(m)) for m in mu], "match": good, "resampled": skipped})
            ok = ok and good
        ev["numeric"] = runs
        ev["points"] = points
        rep.add(n, VERIFIED if ok else VIOLATED, ev, time.perf_counter() - t)
    return rep


__all__ = ["check_gauge_covariance", "gauge_values", "symbolic_match", "numeric_match", "random_mu"]
