"""The reduced factor chain p'_n.

Entries with index -4..-1 are explicit boundary values so that the three
initial-value settings share one code path:

  homogeneous  Z[a,b,c], p'_{-4} = b, p'_{-3} = p'_{-2} = p'_{-1} = 1, p'_0 = a
  plane        Z[a,b] at c = 1, same boundary values
  gauge        Laurent ring in a, b, mu1..mu3 at c = 1, boundary (b, mu3, mu2, mu1)

Two independent ways to extend a chain:

  "T"           p'_n = a^{-alpha_n} T(p'_{n-1}) with T f = f(p_1, a^{k+1}, a^k c)
  "recurrence"  the three-term rational recurrence (even k; also the first two
                steps for odd k) or the R-product recurrence (odd k, n >= 3)
"""
from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass

from ..exactpoly import AB, ABC, GAUGE, HomoPoly, NotDivisible, to_text
from ..sequences import alpha_seq, beta_seq, degree_seqs, parity
from .projective import check_k

CONVENTIONS = ("homogeneous", "plane", "gauge")
MODES = ("T", "recurrence")
RINGS = {"homogeneous": ABC, "plane": AB, "gauge": GAUGE}
LOW = -4


class IdentityViolation(ArithmeticError):
    """An exact division the construction relies on failed."""

    def __init__(self, k, n, mode, detail=""):
        self.k, self.n, self.mode, self.detail = k, n, mode, detail
        super().__init__(f"identity violated at k={k}, n={n}, mode={mode}: {detail}")


def boundary(convention):
    ring = RINGS[convention]
    g = ring.gen
    one = HomoPoly.constant(1, ring)
    if convention == "gauge":
        return (g("b"), g("mu3"), g("mu2"), g("mu1"), g("a"))
    return (g("b"), one, one, one, g("a"))


@dataclass(frozen=True)
class FactorChain:
    k: int
    convention: str
    entries: tuple  # p'_{-4} .. p'_n

    @property
    def n(self):
        return len(self.entries) + LOW - 1

    @property
    def ring(self):
        return RINGS[self.convention]

    @property
    def c(self):
        return self.ring.gen("c") if self.convention == "homogeneous" else 1

    def __getitem__(self, j):
        if not LOW <= j <= self.n:
            raise IndexError(f"p'_{j} not in chain (range {LOW}..{self.n})")
        return self.entries[j - LOW]

    def __len__(self):
        return self.n + 1

    @property
    def beta(self):
        return beta_seq(self.k, self.n)

    @property
    def alpha(self):
        return alpha_seq(self.k, max(self.n, 1))

    def R(self, m):
        """p'_m p'_{m-3} ... down to index 0 or 1 or 2; 1 for m < 0."""
        out = HomoPoly.constant(1, self.ring)
        while m >= 0:
            out = out * self[m]
            m -= 3
        return out

    def degrees(self):
        """Degree of each p'_0..p'_n (homogeneous degree, total degree otherwise)."""
        if self.convention == "homogeneous":
            return [self[j].homogeneous_degree() for j in range(self.n + 1)]
        return [self[j].total_degree() for j in range(self.n + 1)]

    def truncate(self, n):
        if n > self.n:
            raise IndexError("cannot truncate upwards")
        return FactorChain(self.k, self.convention, self.entries[:n - LOW + 1])

    def manifest(self):
        k, n = self.k, self.n
        seq = degree_seqs(k, n)[0]
        return {
            "k": k, "n": n, "convention": self.convention,
            "ring": list(self.ring.names),
            "degrees": [{"j": j, "degree": d, "expected": seq[j]}
                        for j, d in enumerate(self.degrees())] if self.convention == "homogeneous"
            else [{"j": j, "degree": d} for j, d in enumerate(self.degrees())],
            "beta": [str(x) for x in self.beta.values],
            "alpha": [str(x) for x in alpha_seq(k, max(n, 1)).values[:n + 1]],
            "files": {str(j): f"p{j}.txt" for j in range(n + 1)},
        }

    def dump(self, directory):
        """Write manifest.json and one canonical-text file per p'_j."""
        os.makedirs(directory, exist_ok=True)
        for j in range(self.n + 1):
            with open(os.path.join(directory, f"p{j}.txt"), "w") as fh:
                fh.write(to_text(self[j]) + "\n")
        with open(os.path.join(directory, "manifest.json"), "w") as fh:
            json.dump(self.manifest(), fh, indent=2, sort_keys=True)
            fh.write("\n")


def seed_chain(k, convention="homogeneous"):
    check_k(k)
    if convention not in CONVENTIONS:
        raise ValueError(f"unknown convention {convention!r}")
    if convention == "gauge" and parity(k) == "odd":
        raise ValueError("the gauge setting is only defined for even k (and k = 1)")
    return FactorChain(k, convention, boundary(convention))


# -- the operator T ----------------------------------------------------------
def apply_T(f, k):
    """(T f)(a,b,c) = f(p_1, a^{k+1}, a^k c) on Z[a,b,c]."""
    a, b, c = ABC.gens()
    p1 = a ** (k + 1) - a ** k * b + c ** (k + 1)
    return f.substitute({"a": p1, "b": a ** (k + 1), "c": a ** k * c}, ABC)


# -- generic recurrence steps (work on polynomials and on field elements) ------
def even_step(P, n, k, c=1):
    """p'_{n+1} from p'_{n-4}..p'_n; P is indexable by the chain index."""
    num = (P[n - 3] ** (k + 1) * P[n] ** (k + 1)
           - P[n - 4] * P[n - 1] ** (k + 1) * P[n] ** k
           + c ** (k + 1) * (P[n - 2] * P[n - 1]) ** (k * (k + 1)))
    return num / (P[n - 3] ** k * P[n - 2] ** (k + 1))


def R_product(P, m, one=1):
    out = one
    while m >= 0:
        out = out * P[m]
        m -= 3
    return out


def odd_step(P, n, k, c=1, one=1):
    """p'_{n+1} = -(p'_n p'_{n-1})^k + c^{k+1} p'_n^k R_{n-2}^{k^2-1} R_{n-3}^{k(k+1)}
    + c^{k+1} R_{n-1}^{k(k+1)} R_{n-2}^{k^2-1}; valid for n >= 2."""
    r1, r2, r3 = (R_product(P, n - i, one) for i in (1, 2, 3))
    ck = c ** (k + 1)
    r2p = r2 ** (k * k - 1)
    return (-(P[n] * P[n - 1]) ** k + ck * P[n] ** k * r2p * r3 ** (k * (k + 1))
            + ck * r1 ** (k * (k + 1)) * r2p)


def recurrence_step(P, n, k, c=1, one=1):
    """p'_{n+1} by the recurrence appropriate for k and n."""
    if parity(k) == "odd" and n >= 2:
        return odd_step(P, n, k, c, one)
    return even_step(P, n, k, c)


class _View:
    def __init__(self, entries):
        self.entries = entries

    def __getitem__(self, j):
        return self.entries[j - LOW]


def _next_T(chain):
    k, n = chain.k, chain.n + 1
    if chain.convention == "gauge":
        raise ValueError("T mode is not available in the gauge setting")
    if chain.convention == "plane":
        hom = factor_chain(k, n, "homogeneous", "T")
        return hom[n].substitute({"a": AB.gen("a"), "b": AB.gen("b"), "c": 1}, AB)
    img = apply_T(chain[n - 1], k)
    al = alpha_seq(k, n)[n]
    try:
        return img / ABC.gen("a") ** al
    except NotDivisible as exc:
        raise IdentityViolation(k, n, "T", f"a^{al} does not divide T(p'_{n - 1})") from exc


def _next_recurrence(chain):
    k, n = chain.k, chain.n
    one = HomoPoly.constant(1, chain.ring)
    try:
        return recurrence_step(_View(chain.entries), n, k, chain.c, one)
    except NotDivisible as exc:
        raise IdentityViolation(k, n + 1, "recurrence", "denominator does not divide") from exc


def extend_chain(chain, mode="T"):
    """Append p'_{n+1}.  mode "both" computes it twice and compares."""
    if mode == "both":
        x = _next_T(chain)
        y = _next_recurrence(chain)
        if x != y:
            raise IdentityViolation(chain.k, chain.n + 1, "both", "T and recurrence modes disagree")
        nxt = x
    elif mode == "T":
        nxt = _next_T(chain)
    elif mode == "recurrence":
        nxt = _next_recurrence(chain)
    else:
        raise ValueError(f"unknown mode {mode!r}")
    return FactorChain(chain.k, chain.convention, chain.entries + (nxt,))


_CHAINS = {}
_LOCKS = {}
_GLOBAL = threading.Lock()


def factor_chain(k, n, convention="homogeneous", mode="T"):
    """Memoised chain p'_0..p'_n.  In the gauge setting only the recurrence exists."""
    if convention == "gauge":
        mode = "recurrence"
    key = (k, convention, mode)
    with _GLOBAL:
        lock = _LOCKS.setdefault(key, threading.RLock())
    with lock:
        ch = _CHAINS.get(key)
        if ch is None:
            ch = seed_chain(k, convention)
        while ch.n < n:
            ch = extend_chain(ch, mode)
            _CHAINS[key] = ch
        _CHAINS[key] = ch
        return ch.truncate(n) if ch.n > n else ch


def clear_cache():
    with _GLOBAL:
        _CHAINS.clear()
