"""Three evaluators for a MapDef: exact orbit, mod-p degree profile, series step."""
from __future__ import annotations

import csv
import io
import json
import random
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction

import flint

from ..exactpoly import word_primes
from ..sctest import LaurentSeries
from .parser import Neg, Num, Pow, Var

# the profiler stops once an iterate's reduced degree exceeds this; gcd cost
# grows with it; 4.5e4 keeps the built-in family (k <= 7) under a minute in total
DEFAULT_DEGREE_BUDGET = 45_000
PROFILE_RETRIES = 4

GENERIC_LINE_NOTE = (
    "degrees are measured on the line x_0 = t, x_{-1} = b0 + b1 t with random b0, b1 mod p; "
    "an unlucky line or prime can only lower a degree, never raise it")


class SingularOrbit(ZeroDivisionError):
    def __init__(self, m):
        self.m = m
        super().__init__(f"division by zero computing x_{m}")


class DenominatorVanished(ArithmeticError):
    pass


# -- exact orbit ---------------------------------------------------------------
def eval_exact(m, x_prev, x_cur, n):
    """[x_0, ..., x_n] from x_{-1} = x_prev, x_0 = x_cur."""
    prev, cur = Fraction(x_prev), Fraction(x_cur)
    xs = [cur]
    for step in range(1, n + 1):
        try:
            nxt = m(cur, prev)
        except ZeroDivisionError:
            raise SingularOrbit(step) from None
        prev, cur = cur, nxt
        xs.append(cur)
    return xs


# -- mod-p degree profile ------------------------------------------------------------
@dataclass
class DegreeProfile:
    prime: int
    seed: int
    degrees: tuple
    note: str = GENERIC_LINE_NOTE
    retries: int = 0
    stopped: str = ""
    line: tuple = field(default=())

    def to_json(self):
        return {"prime": self.prime, "seed": self.seed, "degrees": list(self.degrees),
                "note": self.note, "retries": self.retries, "stopped": self.stopped,
                "line": [str(x) for x in self.line]}

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "degree"])
        for i, d in enumerate(self.degrees):
            w.writerow([i, d])
        return buf.getvalue()


def _terms(f):
    return [(e[0], e[1], int(c)) for e, c in f.terms().items()]


def _powers(x, top, one):
    out = [one]
    for _ in range(top):
        out.append(out[-1] * x)
    return out


def _homogenized(terms, P, Q, R, S, dx, dy, p):
    """sum c P^i Q^(dx-i) R^j S^(dy-j), i.e. F(P/Q, R/S) Q^dx S^dy."""
    one = flint.nmod_poly([1], p)
    pp, qp = _powers(P, dx, one), _powers(Q, dx, one)
    rp, sp = _powers(R, dy, one), _powers(S, dy, one)
    acc = flint.nmod_poly([], p)
    for i, j, c in terms:
        acc += (pp[i] * qp[dx - i]) * (rp[j] * sp[dy - j]) * (c % p)
    return acc


def _block_gcd(N, blocks):
    """gcd(N, prod F^e) for blocks [(F, e)], one factor copy at a time.

    Each pass removes h^min(v_h(N), v_h(F)) for every irreducible h, so the
    product of the pieces is the full gcd while every gcd call stays at the
    size of a single block.  After the first copy only factors of the last
    piece g can recur, with multiplicity at most theirs in g, so later copies
    are taken against g instead of F.
    """
    G = flint.nmod_poly([1], N.modulus())
    for F, e in blocks:
        if F.degree() <= 0:
            continue
        for _ in range(e):
            g = F.gcd(N % F)
            if g.degree() <= 0:
                break
            N = N // g
            G = G * g
            F = g
    return G


def _profile_once(m, n_max, p, rng, budget):
    b0, b1 = rng.randrange(1, p), rng.randrange(1, p)
    dx, dy = m.degrees()
    num_t, den_t = _terms(m.numerator), _terms(m.denominator)
    # a monomial denominator c x^a y^b homogenizes to c P^a Q^(dx-a) R^b S^(dy-b)
    mono = den_t[0][:2] if len(den_t) == 1 else None
    one = flint.nmod_poly([1], p)
    prev = (flint.nmod_poly([b0, b1], p), one)
    cur = (flint.nmod_poly([0, 1], p), one)
    degs = [1]
    stopped = ""
    for n in range(1, n_max + 1):
        dcur = max(cur[0].degree(), cur[1].degree())
        dprev = max(prev[0].degree(), prev[1].degree())
        if max(dcur, dprev) > budget:
            stopped = f"degree budget {budget} reached before n = {n}"
            break
        P, Q = cur
        R, S = prev
        N = _homogenized(num_t, P, Q, R, S, dx, dy, p)
        D = _homogenized(den_t, P, Q, R, S, dx, dy, p)
        if D.is_zero():
            raise DenominatorVanished(n)
        if mono is not None:
            a, b = mono
            g = _block_gcd(N, [(P, a), (Q, dx - a), (R, b), (S, dy - b)])
        else:
            g = N.gcd(D)
        if g.degree() > 0:
            N, D = N // g, D // g
        if N.is_zero():
            # x_n == 0 on the line; the next step would divide by it or stall
            degs.append(0)
            prev, cur = cur, (N, one)
            continue
        prev, cur = cur, (N, D)
        degs.append(max(N.degree(), D.degree()))
    return tuple(degs), stopped, (b0, b1)


def degree_profile_modp(m, n_max=10, prime=None, seed=0, budget=DEFAULT_DEGREE_BUDGET):
    """Degrees d_0..d_n of the iterates along a random line over GF(prime).

    A line on which some denominator vanishes identically is redrawn (bounded).
    """
    rng = random.Random(seed)
    p = prime or rng.choice(word_primes())
    retries = 0
    while True:
        try:
            degs, stopped, line = _profile_once(m, n_max, p, rng, budget)
            return DegreeProfile(p, seed, degs, retries=retries, stopped=stopped, line=line)
        except DenominatorVanished:
            retries += 1
            if retries > PROFILE_RETRIES:
                raise


def profile_pairs(count=2, seed=0):
    """`count` distinct (prime, seed) pairs derived from a master seed."""
    rng = random.Random(seed)
    primes = word_primes()
    picked = rng.sample(primes, count)
    return [(p, rng.randrange(1 << 30)) for p in picked]


@dataclass
class CombinedProfile:
    degrees: tuple
    runs: list
    disagreements: list

    @property
    def agree(self):
        return not self.disagreements

    def to_json(self):
        return {"degrees": list(self.degrees), "agree": self.agree,
                "disagreements": self.disagreements, "runs": [r.to_json() for r in self.runs],
                "note": GENERIC_LINE_NOTE}

    def to_csv(self):
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["n", "degree"])
        for i, d in enumerate(self.degrees):
            w.writerow([i, d])
        return buf.getvalue()


def profile(m, n_max=10, pairs=None, seed=0, threads=1, budget=DEFAULT_DEGREE_BUDGET):
    """Run several (prime, seed) pairs and keep the elementwise maximum."""
    pairs = pairs or profile_pairs(2, seed)
    if len(pairs) < 2:
        raise ValueError("at least two (prime, seed) pairs are needed")

    def one(ps):
        return degree_profile_modp(m, n_max, ps[0], ps[1], budget)

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            runs = list(ex.map(one, pairs))
    else:
        runs = [one(ps) for ps in pairs]
    length = min(len(r.degrees) for r in runs)
    degs, dis = [], []
    for i in range(length):
        vals = [r.degrees[i] for r in runs]
        degs.append(max(vals))
        if len(set(vals)) > 1:
            dis.append({"n": i, "degrees": vals})
    return CombinedProfile(tuple(degs), runs, dis)


# -- Laurent stepper ------------------------------------------------------------
def _series_eval(node, cur, prev):
    if isinstance(node, Num):
        return LaurentSeries.constant(node.value)
    if isinstance(node, Var):
        return cur if node.lag == 0 else prev
    if isinstance(node, Neg):
        return -_series_eval(node.operand, cur, prev)
    if isinstance(node, Pow):
        return _series_eval(node.base, cur, prev) ** node.exponent
    a = _series_eval(node.left, cur, prev)
    b = _series_eval(node.right, cur, prev)
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    return a * b.inverse()


def laurent_stepper(m):
    """step(prev, cur) -> next on LaurentSeries, following the map's expression tree."""
    def step(prev, cur):
        return _series_eval(m.ast, cur, prev)
    return step


def dumps_profile(prof):
    return json.dumps(prof.to_json(), sort_keys=True)


__all__ = ["SingularOrbit", "DenominatorVanished", "eval_exact", "DegreeProfile",
           "CombinedProfile", "degree_profile_modp", "profile", "profile_pairs",
           "laurent_stepper", "GENERIC_LINE_NOTE"]
