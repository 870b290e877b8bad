"""Command-line interface: entropy-lab <command> [options].

Every command prints JSON (default), CSV or a plain table.  JSON output
carries "schema": "entropy-lab/1" and never includes timings unless asked,
so repeated runs with the same arguments are byte-identical.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import random
import sys
from decimal import Decimal
from fractions import Fraction

SCHEMA = "entropy-lab/1"
EXIT_OK, EXIT_VIOLATED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# -- output -------------------------------------------------------------------
def _jsonable(x):
    if isinstance(x, (Fraction, Decimal)):
        return str(x)
    raise TypeError(f"cannot serialise {type(x).__name__}")


def render(command, config, result, rows, fmt, columns=None):
    if fmt == "json":
        doc = {"schema": SCHEMA, "command": command, "config": config, "result": result}
        return json.dumps(doc, indent=2, sort_keys=True, default=_jsonable) + "\n"
    columns = columns or (list(rows[0]) if rows else [])
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.DictWriter(buf, fieldnames=columns, lineterminator="\n", extrasaction="ignore")
        w.writeheader()
        for r in rows:
            w.writerow({c: _cell(r.get(c)) for c in columns})
        return buf.getvalue()
    table = [columns] + [[_cell(r.get(c)) for c in columns] for r in rows]
    widths = [max(len(str(row[i])) for row in table) for i in range(len(columns))]
    return "".join("  ".join(str(v).rjust(w) for v, w in zip(row, widths)).rstrip() + "\n"
                   for row in table)


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, (list, tuple)):
        return " ".join(str(x) for x in v)
    return str(v)


def emit(text, out):
    if out:
        with open(out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def threads_from(args):
    if args.threads:
        return args.threads
    env = os.environ.get("ENTROPY_LAB_THREADS")
    return int(env) if env else 1


def _ks(args, default):
    ks = args.k or list(default)
    for k in ks:
        if k < 1:
            raise UsageError(f"--k must be >= 1 (got {k})")
    return ks


def _rational(text):
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


# -- commands -----------------------------------------------------------------------
def cmd_iterate(args):
    from .hvmap import iterate_pn, orbit, r_value
    from .sequences import beta_seq

    n = 4 if args.n is None else args.n
    rng = random.Random(args.seed)
    result, rows = [], []
    for k in _ks(args, (2,)):
        beta = beta_seq(k, n).values
        pt = None
        while pt is None:
            cand = {v: Fraction(rng.randint(-9, 9), rng.randint(1, 9)) for v in "abc"}
            try:
                xs = orbit(k, cand["b"] / cand["c"], cand["a"] / cand["c"], n)
                pt = cand
            except ZeroDivisionError:
                continue
        steps = []
        for j in range(n + 1):
            p = iterate_pn(k, j)
            via_p = p.evaluate(pt) / r_value(k, j, pt)
            row = {"k": k, "n": j, "degree": p.homogeneous_degree(), "terms": p.nterms(),
                   "ord_a": p.ord_var("a"), "beta": beta[j], "x": str(xs[j]),
                   "agrees": via_p == xs[j]}
            steps.append(row)
            rows.append(row)
        result.append({"k": k, "point": {v: str(x) for v, x in pt.items()}, "steps": steps})
    ok = all(r["agrees"] and r["ord_a"] == r["beta"] for r in rows)
    return result, rows, EXIT_OK if ok else EXIT_VIOLATED


def cmd_chain(args):
    from .hvmap import factor_chain

    n = 4 if args.n is None else args.n
    result, rows = [], []
    for k in _ks(args, (2,)):
        ch = factor_chain(k, n, args.convention, args.mode)
        entries = []
        for j in range(n + 1):
            f = ch[j]
            row = {"k": k, "j": j, "terms": f.nterms(),
                   "degree": f.homogeneous_degree() if args.convention == "homogeneous"
                   else f.total_degree() if args.convention == "plane" else None}
            entries.append(row)
            rows.append(row)
        item = {"k": k, "convention": args.convention, "mode": args.mode, "entries": entries}
        if args.dump:
            target = os.path.join(args.dump, f"k{k}") if len(_ks(args, (2,))) > 1 else args.dump
            ch.dump(target)
            item["dumped_to"] = target
        result.append(item)
    return result, rows, EXIT_OK


def cmd_degrees(args):
    from .hvmap import factor_chain, x_reduced
    from .mapdsl import builtin_map, profile
    from .sequences import degree_seqs

    n = 10 if args.n is None else args.n
    result, rows = [], []
    for k in _ks(args, (2,)):
        item = {"k": k, "method": args.method}
        if args.method == "recurrence":
            degs = list(degree_seqs(k, n)[1].values)
        elif args.method == "exact":
            ch = factor_chain(k, n)
            degs = [x_reduced(ch, j).degrees()[0] for j in range(n + 1)]
        else:
            pairs = _pairs(args)
            prof = profile(builtin_map(k), n, pairs, threads=threads_from(args))
            degs = list(prof.degrees)
            item.update({"agree": prof.agree, "disagreements": prof.disagreements,
                         "pairs": [[p, s] for p, s in pairs],
                         "stopped": sorted({r.stopped for r in prof.runs if r.stopped})})
        item["degrees"] = degs
        result.append(item)
        for j, d in enumerate(degs):
            row = {"k": k, "n": j, "degree": d}
            if args.plot_data:
                row["log_degree"] = f"{math.log(d):.12f}" if d > 0 else ""
            rows.append(row)
    cols = ["k", "n", "degree"] + (["log_degree"] if args.plot_data else [])
    return result, rows, EXIT_OK, cols


def _pairs(args):
    from .mapdsl import profile_pairs

    if args.prime:
        rng = random.Random(args.seed)
        primes = list(args.prime) if len(args.prime) > 1 else [args.prime[0]] * 2
        return [(p, rng.randrange(1 << 30)) for p in primes]
    return profile_pairs(2, args.seed)


def cmd_entropy(args):
    from .mapdsl import builtin_map, profile
    from .sequences import closed_form_entropy, dominant_root, fit_recurrence

    result, rows = [], []
    for k in _ks(args, (2,)):
        closed = closed_form_entropy(k, 40)
        item = {"k": k, "closed_form": format(closed, ".15f")}
        if not args.closed_only:
            prof = profile(builtin_map(k), 10 if args.n is None else args.n, _pairs(args),
                           threads=threads_from(args))
            rec = fit_recurrence(prof.degrees, checks=1)
            fitted = dominant_root(rec, 40).ln()
            item.update({"fitted": format(fitted, ".15f"),
                         "delta": format(abs(fitted - closed), ".3e"),
                         "recurrence": [str(c) for c in rec.coefficients],
                         "profile": list(prof.degrees)})
        result.append(item)
        rows.append({c: item.get(c) for c in ("k", "closed_form", "fitted", "delta")})
    return result, rows, EXIT_OK, ["k", "closed_form", "fitted", "delta"]


def cmd_sc_test(args):
    from .sctest import classify

    seeds = args.u or [Fraction(5, 7), Fraction(2, 9)]
    result, rows = [], []
    for k in _ks(args, (2,)):
        c = classify(k, seeds, args.order, args.horizon)
        result.append(c.to_json())
        for r in c.reports:
            for j, (v, lead) in enumerate(zip(r.valuations, r.leads)):
                rows.append({"k": k, "u": str(r.u), "n": j, "valuation": v, "leading": str(lead),
                             "verdict": c.verdict})
    return result, rows, EXIT_OK, ["k", "u", "n", "valuation", "leading", "verdict"]


def cmd_verify(args):
    from .verify import exit_status, merge, run_suite, to_csv

    reports = run_suite(args.suite, args.k or None, args.n, args.seed, threads_from(args))
    status = exit_status(reports)
    if args.format == "csv":
        return None, to_csv(reports), status
    insts = merge(reports)
    if args.format == "jsonl":
        text = "".join(json.dumps({"schema": SCHEMA, **i.to_json(args.timing)}, sort_keys=True,
                                  default=_jsonable) + "\n" for i in insts)
        return None, text, status
    result = {"suite": args.suite, "summary": [r.summary_row() for r in reports],
              "instances": [i.to_json(args.timing) for i in insts],
              "violated": sum(1 for i in insts if i.outcome == "violated")}
    rows = [r.summary_row() for r in reports]
    return result, rows, status


def cmd_profile(args):
    from .mapdsl import parse_map, profile
    from .sequences import FitUnstable, RootNotFound, dominant_root, fit_recurrence

    src = args.map
    if os.path.isfile(src):
        with open(src) as fh:
            src = fh.read()
    m = parse_map(src)
    n = 10 if args.n is None else args.n
    prof = profile(m, n, _pairs(args), threads=threads_from(args))
    result = {"map": m.to_json(), "profile": prof.to_json()}
    try:
        rec = fit_recurrence(prof.degrees, checks=1)
        root = dominant_root(rec, 30)
        result["fit"] = {"recurrence": [str(c) for c in rec.coefficients],
                         "dynamical_degree": format(root, ".15f"),
                         "entropy": format(root.ln() if root > 0 else Decimal(0), ".15f")}
    except (FitUnstable, RootNotFound) as exc:
        result["fit"] = {"status": "FitUnstable", "reason": str(exc)}
    rows = [{"n": j, "degree": d} for j, d in enumerate(prof.degrees)]
    return result, rows, EXIT_OK, ["n", "degree"]


COMMANDS = {
    "iterate": cmd_iterate, "chain": cmd_chain, "degrees": cmd_degrees, "entropy": cmd_entropy,
    "sc-test": cmd_sc_test, "verify": cmd_verify, "profile": cmd_profile,
}


# -- argument parsing ------------------------------------------------------------
FORMATS = ("json", "csv", "table")


def _common(p, formats=FORMATS):
    p.add_argument("--k", type=int, action="append", help="map parameter (repeatable)")
    p.add_argument("--n", type=int, help="largest index")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--prime", type=int, action="append", help="prime for mod-p work (repeatable)")
    p.add_argument("--format", choices=formats, default="json")
    p.add_argument("--out", help="write output to this file")
    p.add_argument("--threads", type=int, help="worker threads (env ENTROPY_LAB_THREADS)")
    return p


def build_parser():
    top = argparse.ArgumentParser(prog="entropy-lab",
                                  description="Exact experiments on x[n+1] = -x[n-1] + x[n] + 1/x[n]^k.")
    sub = top.add_subparsers(dest="command", metavar="command")
    sub.required = True

    _common(sub.add_parser("iterate", help="projective iterates p_n and exact orbit"))

    p = _common(sub.add_parser("chain", help="reduced factor chain p'_n"))
    p.add_argument("--convention", choices=("homogeneous", "plane", "gauge"), default="homogeneous")
    p.add_argument("--mode", choices=("T", "recurrence", "both"), default="T")
    p.add_argument("--dump", metavar="DIR", help="write manifest.json and p<j>.txt files")

    p = _common(sub.add_parser("degrees", help="degree sequence d_n"))
    p.add_argument("--method", choices=("recurrence", "modp", "exact"), default="recurrence")
    p.add_argument("--plot-data", action="store_true", help="add a log(degree) column")

    p = _common(sub.add_parser("entropy", help="closed-form and fitted entropy"))
    p.add_argument("--closed-only", action="store_true", help="skip the mod-p fit")

    p = _common(sub.add_parser("sc-test", help="singularity confinement test"))
    p.add_argument("--order", type=int, default=48)
    p.add_argument("--horizon", type=int, default=12)
    p.add_argument("--u", type=_rational, action="append", help="seed x_{-1} (repeatable)")

    p = _common(sub.add_parser("verify", help="run a verification suite"),
                ("json", "jsonl", "csv", "table"))
    p.add_argument("--suite", choices=("structural", "irreducible", "appendix", "all"),
                   default="all")
    p.add_argument("--timing", action="store_true", help="include timings (not reproducible)")

    p = _common(sub.add_parser("profile", help="mod-p degree profile of a map"))
    p.add_argument("map", help="file containing a map definition, or the definition itself")
    return top


def _config(args):
    cfg = {k: v for k, v in sorted(vars(args).items()) if k not in ("out", "threads")}
    return json.loads(json.dumps(cfg, default=_jsonable))


def run_command(argv):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.n is not None and args.n < 0:
        parser.print_usage(sys.stderr)
        print("entropy-lab: error: --n must be >= 0", file=sys.stderr)
        return EXIT_USAGE
    try:
        out = COMMANDS[args.command](args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"entropy-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        # malformed inputs: map syntax, unsupported k for a check, bad seeds
        print(f"entropy-lab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    result, rows, status = out[:3]
    cols = out[3] if len(out) > 3 else None
    if isinstance(rows, str):
        text = rows
    else:
        text = render(args.command, _config(args), result, rows, args.format, cols)
    emit(text, args.out)
    return status


def main(argv=None):
    sys.exit(run_command(sys.argv[1:] if argv is None else argv))


if __name__ == "__main__":
    main()
