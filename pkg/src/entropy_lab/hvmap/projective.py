"""Projective iteration of x_{n+1} = -x_{n-1} + x_n + 1/x_n^k.

With [p_n : q_n : r_n] = [x_n : x_{n-1} : 1] and initial values (a, b, c) the
map becomes polynomial; no common factors are cancelled.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction

from ..exactpoly import ABC, HomoPoly


@dataclass(frozen=True)
class MapParams:
    k: int

    def __post_init__(self):
        if not isinstance(self.k, int) or self.k < 1:
            raise ValueError(f"k must be an integer >= 1, got {self.k!r}")


def check_k(k):
    return MapParams(k).k


@dataclass(frozen=True)
class ProjectiveState:
    n: int
    p: HomoPoly
    q: HomoPoly
    r: HomoPoly

    @classmethod
    def initial(cls, ring=ABC):
        a, b, c = (ring.gen(v) for v in ("a", "b", "c"))
        return cls(0, a, b, c)

    def degree(self):
        return self.p.homogeneous_degree()


def step_projective(state, k):
    check_k(k)
    p, q, r = state.p, state.q, state.r
    pk = p ** k
    return ProjectiveState(state.n + 1, pk * (p - q) + r ** (k + 1), pk * p, r * pk)


def orbit(k, x_prev, x_cur, n):
    """Exact rational orbit x_0..x_n of the map (x_{-1} = x_prev, x_0 = x_cur)."""
    check_k(k)
    xs = [Fraction(x_cur)]
    prev = Fraction(x_prev)
    for _ in range(n):
        cur = xs[-1]
        if cur == 0:
            raise ZeroDivisionError(f"x_{len(xs) - 1} = 0")
        nxt = -prev + cur + 1 / cur ** k
        prev = cur
        xs.append(nxt)
    return xs


class _PnStore:
    """p_0, p_1, ... for one k, plus the running product of p_j^{k(k+1)}."""

    def __init__(self, k):
        a, b, c = ABC.gens()
        self.k = k
        self.c_pow = c ** (k + 1)
        self.p = [a, a ** (k + 1) - a ** k * b + c ** (k + 1)]
        # prod[j] = (p_0 ... p_j)^{k(k+1)}; filled lazily
        self.prod = [a ** (k * (k + 1))]
        self.lock = threading.Lock()

    def _product_upto(self, j):
        e = self.k * (self.k + 1)
        while len(self.prod) <= j:
            i = len(self.prod)
            self.prod.append(self.prod[-1] * self.p[i] ** e)
        return self.prod[j]

    def get(self, n):
        with self.lock:
            k = self.k
            while len(self.p) <= n:
                m = len(self.p) - 1
                pm, prev = self.p[m], self.p[m - 1]
                nxt = pm ** k * (pm - prev ** (k + 1)) + self.c_pow * self._product_upto(m - 1)
                self.p.append(nxt)
            return self.p[n]


_STORES = {}
_STORES_LOCK = threading.Lock()


def _store(k):
    with _STORES_LOCK:
        if k not in _STORES:
            _STORES[k] = _PnStore(k)
        return _STORES[k]


def iterate_pn(k, n):
    """p_n through the product form p_{n+1} = p_n^k (p_n - p_{n-1}^{k+1}) + c^{k+1} (p_{n-1}...p_0)^{k(k+1)}."""
    check_k(k)
    if n < 0:
        raise ValueError("n must be >= 0")
    return _store(k).get(n)


def iterate_projective(k, n):
    """States 0..n by repeated step_projective."""
    st = ProjectiveState.initial()
    out = [st]
    for _ in range(n):
        st = step_projective(st, k)
        out.append(st)
    return out


def r_value(k, n, point):
    """r_n = c (p_{n-1} ... p_0)^k evaluated at a rational point."""
    val = Fraction(point["c"])
    for j in range(n):
        val *= iterate_pn(k, j).evaluate(point) ** k
    return val
