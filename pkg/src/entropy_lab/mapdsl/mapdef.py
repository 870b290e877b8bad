"""MapDef: a parsed map with its normalized numerator/denominator pair."""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from fractions import Fraction

from ..exactpoly import HomoPoly, Ring
from .parser import (DEFAULT_MAX_DEPTH, DEFAULT_MAX_NODES, Neg, Num, Pow, SemanticError,
                     Var, parse_ast, pretty, pretty_map)

# cur = x[n], prev = x[n-1]
STATE = Ring(("cur", "prev"))
MAX_EXPONENT = 1000


class DegenerateMapWarning(UserWarning):
    pass


def _const(v):
    return HomoPoly.constant(v, STATE)


def _frac(node):
    """(numerator, denominator) with integer polynomial entries, not yet reduced."""
    if isinstance(node, Num):
        return _const(node.value.numerator), _const(node.value.denominator)
    if isinstance(node, Var):
        return STATE.gen("cur" if node.lag == 0 else "prev"), _const(1)
    if isinstance(node, Neg):
        n, d = _frac(node.operand)
        return -n, d
    if isinstance(node, Pow):
        if abs(node.exponent) > MAX_EXPONENT:
            raise SemanticError(f"exponent {node.exponent} exceeds {MAX_EXPONENT}")
        n, d = _frac(node.base)
        e = node.exponent
        if e < 0:
            if n.is_zero():
                raise SemanticError("negative power of zero")
            n, d, e = d, n, -e
        return n ** e, d ** e
    ln, ld = _frac(node.left)
    rn, rd = _frac(node.right)
    if node.op == "+":
        return ln * rd + rn * ld, ld * rd
    if node.op == "-":
        return ln * rd - rn * ld, ld * rd
    if node.op == "*":
        return ln * rn, ld * rd
    if rn.is_zero():
        raise SemanticError("division by an expression that is identically zero")
    return ln * rd, ld * rn


def normalize(num, den):
    """Cancel the gcd and make the leading coefficient of the denominator positive."""
    if den.is_zero():
        raise SemanticError("denominator is identically zero")
    if num.is_zero():
        return num, _const(1)
    g = HomoPoly._wrap(STATE, num.raw().gcd(den.raw()))
    num, den = num / g, den / g
    lead = den.sorted_terms()[0][1]
    if lead < 0:
        num, den = -num, -den
    return num, den


def _uses(f, name):
    return not f.is_zero() and f.degree(name) > 0


@dataclass(frozen=True)
class MapDef:
    source: str
    ast: object
    numerator: HomoPoly
    denominator: HomoPoly
    warnings: tuple = field(default=())

    @property
    def uses_prev(self):
        return _uses(self.numerator, "prev") or _uses(self.denominator, "prev")

    @property
    def uses_cur(self):
        return _uses(self.numerator, "cur") or _uses(self.denominator, "cur")

    def pretty(self):
        return pretty_map(self.ast)

    def rhs_text(self):
        return pretty(self.ast)

    def normal_form_text(self):
        def txt(f):
            return f.to_text().replace("prev", "x[n-1]").replace("cur", "x[n]")
        return f"({txt(self.numerator)}) / ({txt(self.denominator)})"

    def degrees(self):
        """Largest power of x[n] and of x[n-1] in the normalized fraction."""
        out = []
        for v in ("cur", "prev"):
            out.append(max(f.degree(v) if not f.is_zero() else 0
                           for f in (self.numerator, self.denominator)))
        return tuple(out)

    def __call__(self, cur, prev):
        """One exact step; raises ZeroDivisionError when the denominator vanishes."""
        pt = {"cur": Fraction(cur), "prev": Fraction(prev)}
        d = self.denominator.evaluate(pt)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes")
        return self.numerator.evaluate(pt) / d

    def to_json(self):
        return {"map": self.pretty(), "normal_form": self.normal_form_text(),
                "degrees": list(self.degrees()), "warnings": list(self.warnings)}


def parse_map(text, max_nodes=DEFAULT_MAX_NODES, max_depth=DEFAULT_MAX_DEPTH):
    """Parse `x[n+1] = <expr>`; warns (DegenerateMapWarning) for maps that ignore x[n-1]."""
    ast = parse_ast(text, max_nodes, max_depth)
    num, den = normalize(*_frac(ast))
    notes = []
    m = MapDef(text, ast, num, den)
    if not m.uses_prev:
        notes.append("the map does not depend on x[n-1]; it is order-degenerate")
    if not m.uses_cur:
        notes.append("the map does not depend on x[n]")
    for note in notes:
        warnings.warn(note, DegenerateMapWarning, stacklevel=2)
    return MapDef(text, ast, num, den, tuple(notes))


def builtin_map(k):
    """The family member x[n+1] = -x[n-1] + x[n] + 1/x[n]^k."""
    return parse_map(f"x[n+1] = -x[n-1] + x[n] + 1/x[n]^{k}")


__all__ = ["MapDef", "parse_map", "builtin_map", "normalize", "STATE", "DegenerateMapWarning"]
