"""Named verification suites and a parallel runner with deterministic output."""
from __future__ import annotations

import os
import time
from concurrent.futures import ThreadPoolExecutor

from ..sequences import parity
from . import appendix, gauge_check, structural
from .report import UNKNOWN, VIOLATED, merge

# default top index per k for the exact suites
N_TOP = {1: 6, 2: 6, 3: 5, 4: 5, 5: 4, 6: 4, 7: 4}


def _top(k, n):
    return n if n is not None else N_TOP.get(k, 3)


def _even_jobs(k, n, seed):
    top = _top(k, n)
    ns = range(0, top + 1)
    return [
        ("ord_a", lambda: structural.check_ord_a(k, ns)),
        ("unit_factors", lambda: structural.check_unit_factors(k, ns)),
        ("product_identity", lambda: structural.check_product_identity(k, ns)),
        ("degrees", lambda: structural.check_degrees(k, ns)),
        ("coprime", lambda: structural.check_coprime(k, ns, seed=seed)),
    ]


def _odd_jobs(k, n, seed):
    top = _top(k, n)
    ns = range(0, top + 1)
    return [
        ("ord_a", lambda: structural.check_ord_a(k, ns)),
        ("unit_factors", lambda: structural.check_unit_factors(k, ns)),
        ("exp_pattern", lambda: structural.check_exp_pattern(k, ns, seed=seed)),
        ("degrees", lambda: structural.check_degrees(k, ns)),
        ("coprime", lambda: structural.check_coprime(k, ns, seed=seed)),
    ]


def _structural(ks, n, seed):
    jobs = []
    for k in ks:
        jobs += _odd_jobs(k, n, seed) if parity(k) == "odd" else _even_jobs(k, n, seed)
    return jobs


def _irreducible(ks, n, seed):
    ks = [k for k in ks if parity(k) == "even"]
    return [("irreducible", lambda k=k: structural.check_irreducible(
        k, range(1, (n or 5) + 1), seed=seed)) for k in ks]


def _appendix(ks, n, seed):
    jobs = []
    for k in ks:
        if parity(k) == "odd" and k >= 3:
            jobs.append(("z_signs", lambda k=k: appendix.z_signs(k, 20)))
            jobs.append(("congruences", lambda k=k: appendix.check_congruences(
                k, range(5, (n or 6) + 1), lags=(3,), seed=seed)))
        elif parity(k) == "even":
            jobs.append(("gauge_covariance", lambda k=k: gauge_check.check_gauge_covariance(
                k, range(0, (n or 5) + 1), seed=seed)))
    return jobs


SUITES = {
    "structural": (_structural, (2, 3, 4, 5)),
    "irreducible": (_irreducible, (2,)),
    "appendix": (_appendix, (2, 3)),
}
SUITES["all"] = (None, None)


def default_threads():
    env = os.environ.get("ENTROPY_LAB_THREADS")
    if env:
        return max(1, int(env))
    return min(4, os.cpu_count() or 1)


def suite_jobs(name, ks=None, n=None, seed=0):
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    if name == "all":
        out = []
        for sub in ("structural", "irreducible", "appendix"):
            out += suite_jobs(sub, ks, n, seed)
        return out
    build, default_ks = SUITES[name]
    return build(tuple(ks) if ks else default_ks, n, seed)


def run_suite(name, ks=None, n=None, seed=0, threads=None):
    """Run the jobs of a suite; reports come back sorted by (check, k)."""
    jobs = suite_jobs(name, ks, n, seed)
    threads = threads or default_threads()

    def timed(fn):
        t = time.perf_counter()
        rep = fn()
        rep.seconds = rep.seconds or time.perf_counter() - t
        return rep

    if threads <= 1:
        reports = [timed(fn) for _, fn in jobs]
    else:
        with ThreadPoolExecutor(max_workers=threads) as ex:
            reports = list(ex.map(timed, [fn for _, fn in jobs]))
    reports.sort(key=lambda r: (r.check, r.k))
    return reports


def exit_status(reports):
    """Nonzero iff any instance is violated."""
    return 1 if any(i.outcome == VIOLATED for i in merge(reports)) else 0


def unknown_count(reports):
    return sum(1 for i in merge(reports) if i.outcome == UNKNOWN)


__all__ = ["SUITES", "run_suite", "suite_jobs", "exit_status", "unknown_count", "default_threads"]
