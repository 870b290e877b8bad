"""Tokenizer, recursive-descent parser and pretty-printer for map definitions.

Grammar (EBNF):

    map      = target "=" expr ;
    target   = "x" "[" "n" "+" "1" "]" ;
    expr     = term { ( "+" | "-" ) term } ;
    term     = unary { ( "*" | "/" ) unary } ;
    unary    = ( "+" | "-" ) unary | power ;
    power    = atom [ "^" exponent ] ;
    exponent = [ "+" | "-" ] integer [ "^" exponent ] | "(" exponent ")" ;
    atom     = number | state | "(" expr ")" ;
    state    = "x" "[" "n" [ ( "+" | "-" ) integer ] "]" ;
    number   = digit { digit } [ "." digit { digit } ] ;

Binary operators are parsed by precedence climbing.  `^` binds tightest and
is right-associative; exponents are integer constants.  Whitespace and
newlines are free, `#` starts a comment running to the end of the line.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

DEFAULT_MAX_NODES = 10_000
DEFAULT_MAX_DEPTH = 200


class MapSyntaxError(ValueError):
    pass


class ParseError(MapSyntaxError):
    def __init__(self, message, line, column, expected=()):
        self.line, self.column = line, column
        self.expected = tuple(sorted(set(expected)))
        exp = f"; expected one of {', '.join(self.expected)}" if self.expected else ""
        super().__init__(f"line {line}, column {column}: {message}{exp}")


class SemanticError(MapSyntaxError):
    def __init__(self, message, line=None, column=None):
        self.line, self.column = line, column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


# -- AST -----------------------------------------------------------------------
@dataclass(frozen=True)
class Num:
    value: Fraction


@dataclass(frozen=True)
class Var:
    lag: int  # 0 for x[n], 1 for x[n-1]


@dataclass(frozen=True)
class Neg:
    operand: object


@dataclass(frozen=True)
class Bin:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Pow:
    base: object
    exponent: int


def count_nodes(node):
    if isinstance(node, (Num, Var)):
        return 1
    if isinstance(node, (Neg, Pow)):
        return 1 + count_nodes(node.operand if isinstance(node, Neg) else node.base)
    return 1 + count_nodes(node.left) + count_nodes(node.right)


# -- tokens --------------------------------------------------------------------
@dataclass(frozen=True)
class Token:
    kind: str   # "num", "x", "n", "op", "bad", "eof"
    text: str
    line: int
    column: int


SINGLE = set("+-*/^()[]=")


def tokenize(text):
    toks = []
    line, col, i = 1, 1, 0
    while i < len(text):
        ch = text[i]
        if ch == "\n":
            line, col, i = line + 1, 1, i + 1
            continue
        if ch.isspace():
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < len(text) and text[i] != "\n":
                i += 1
            continue
        if ch.isdigit():
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            if j < len(text) and text[j] == "." and j + 1 < len(text) and text[j + 1].isdigit():
                j += 1
                while j < len(text) and text[j].isdigit():
                    j += 1
            toks.append(Token("num", text[i:j], line, col))
            col += j - i
            i = j
            continue
        if ch in SINGLE:
            toks.append(Token("op", ch, line, col))
        elif ch == "x":
            toks.append(Token("x", ch, line, col))
        elif ch == "n":
            toks.append(Token("n", ch, line, col))
        else:
            # reported by the parser, which knows what it expected here
            toks.append(Token("bad", ch, line, col))
        i += 1
        col += 1
    toks.append(Token("eof", "", line, col))
    return toks


BINARY = {"+": 1, "-": 1, "*": 2, "/": 2}


class _Parser:
    def __init__(self, text, max_nodes, max_depth):
        self.toks = tokenize(text)
        self.i = 0
        self.max_nodes, self.max_depth = max_nodes, max_depth
        self.nodes = 0
        self.depth = 0

    # helpers
    @property
    def tok(self):
        return self.toks[self.i]

    def _is(self, kind, text=None):
        t = self.tok
        return t.kind == kind and (text is None or t.text == text)

    def _fail(self, expected, message=None):
        t = self.tok
        if t.kind == "eof":
            got = "end of input"
        elif t.kind == "bad":
            got = f"character {t.text!r}"
        else:
            got = repr(t.text)
        raise ParseError(message or f"unexpected {got}", t.line, t.column, expected)

    def _expect(self, kind, text=None):
        if not self._is(kind, text):
            self._fail([text or kind])
        t = self.tok
        self.i += 1
        return t

    def _node(self, node):
        self.nodes += 1
        if self.nodes > self.max_nodes:
            raise SemanticError(f"expression exceeds {self.max_nodes} nodes")
        return node

    def _enter(self):
        self.depth += 1
        if self.depth > self.max_depth:
            t = self.tok
            raise SemanticError(f"expression nested deeper than {self.max_depth}", t.line, t.column)

    # grammar
    def parse_map(self):
        t = self.tok
        lag = self._state()
        if lag != -1:
            raise SemanticError("the left-hand side must be x[n+1]", t.line, t.column)
        self._expect("op", "=")
        body = self._expr(1)
        if not self._is("eof"):
            self._fail(["+", "-", "*", "/", "^", "end of input"])
        return body

    def _state(self):
        """Parse x[n +- c]; returns the lag (0 for x[n], 1 for x[n-1], -1 for x[n+1])."""
        start = self._expect("x")
        self._expect("op", "[")
        self._expect("n")
        shift = 0
        if self._is("op", "+") or self._is("op", "-"):
            sign = 1 if self.tok.text == "+" else -1
            self.i += 1
            if not self._is("num") or not self.tok.text.isdigit():
                self._fail(["integer"])
            shift = sign * int(self.tok.text)
            self.i += 1
        self._expect("op", "]")
        if shift not in (-1, 0, 1):
            raise SemanticError(f"x[n{shift:+d}] is out of range: only order-2 maps "
                                "in x[n] and x[n-1] are supported", start.line, start.column)
        return -shift

    def _expr(self, min_prec):
        self._enter()
        left = self._unary()
        while self._is("op") and self.tok.text in BINARY and BINARY[self.tok.text] >= min_prec:
            op = self.tok.text
            self.i += 1
            right = self._expr(BINARY[op] + 1)
            left = self._node(Bin(op, left, right))
        self.depth -= 1
        return left

    def _unary(self):
        if self._is("op", "-") or self._is("op", "+"):
            op = self.tok.text
            self.i += 1
            self._enter()
            inner = self._unary()
            self.depth -= 1
            return self._node(Neg(inner)) if op == "-" else inner
        return self._power()

    def _power(self):
        base = self._atom()
        if self._is("op", "^"):
            self.i += 1
            base = self._node(Pow(base, self._exponent()))
        return base

    def _exponent(self):
        if self._is("op", "("):
            self.i += 1
            e = self._exponent()
            self._expect("op", ")")
            return e
        sign = 1
        if self._is("op", "-") or self._is("op", "+"):
            sign = -1 if self.tok.text == "-" else 1
            self.i += 1
        if not self._is("num") or not self.tok.text.isdigit():
            self._fail(["integer", "(", "-"], "exponents must be integer constants")
        t = self.tok
        e = sign * int(t.text)
        self.i += 1
        if self._is("op", "^"):
            self.i += 1
            inner = self._exponent()
            if inner < 0:
                raise SemanticError("a negative power inside an exponent is not an integer",
                                    t.line, t.column)
            e = sign * int(t.text) ** inner
        return e

    def _atom(self):
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return self._node(Num(Fraction(t.text)))
        if t.kind == "x":
            lag = self._state()
            if lag == -1:
                raise SemanticError("x[n+1] cannot appear on the right-hand side", t.line, t.column)
            return self._node(Var(lag))
        if self._is("op", "("):
            self.i += 1
            e = self._expr(1)
            self._expect("op", ")")
            return e
        self._fail(["number", "x", "(", "-"])


def parse_ast(text, max_nodes=DEFAULT_MAX_NODES, max_depth=DEFAULT_MAX_DEPTH):
    """The right-hand side of `x[n+1] = ...` as an AST."""
    return _Parser(text, max_nodes, max_depth).parse_map()


# -- pretty printing -------------------------------------------------------------
PREC = {"+": 1, "-": 1, "*": 2, "/": 2}
NEG_PREC, POW_PREC, ATOM_PREC = 3, 4, 5


def _prec(node):
    if isinstance(node, Bin):
        return PREC[node.op]
    if isinstance(node, Neg):
        return NEG_PREC
    if isinstance(node, Pow):
        return POW_PREC
    return ATOM_PREC


def _num_text(q):
    if q.denominator == 1:
        return str(q.numerator)
    d, twos, fives = q.denominator, 0, 0
    while d % 2 == 0:
        d, twos = d // 2, twos + 1
    while d % 5 == 0:
        d, fives = d // 5, fives + 1
    if d != 1 or q < 0:
        return f"({q.numerator}/{q.denominator})"
    m = max(twos, fives)
    digits = str(q.numerator * 10 ** m // q.denominator).rjust(m + 1, "0")
    return f"{digits[:-m]}.{digits[-m:]}"


def pretty(node):
    if isinstance(node, Num):
        return _num_text(node.value)
    if isinstance(node, Var):
        return "x[n]" if node.lag == 0 else "x[n-1]"
    if isinstance(node, Neg):
        inner = pretty(node.operand)
        return "-" + (f"({inner})" if _prec(node.operand) < NEG_PREC else inner)
    if isinstance(node, Pow):
        base = pretty(node.base)
        if _prec(node.base) < ATOM_PREC:
            base = f"({base})"
        return f"{base}^{node.exponent}"
    p = PREC[node.op]
    left, right = pretty(node.left), pretty(node.right)
    if _prec(node.left) < p:
        left = f"({left})"
    if _prec(node.right) <= p or isinstance(node.right, Neg):
        right = f"({right})"
    sep = " " if p == 1 else ""
    return f"{left}{sep}{node.op}{sep}{right}"


def pretty_map(node):
    return f"x[n+1] = {pretty(node)}"


__all__ = ["ParseError", "SemanticError", "MapSyntaxError", "Num", "Var", "Neg", "Bin", "Pow",
           "Token", "tokenize", "parse_ast", "pretty", "pretty_map", "count_nodes",
           "DEFAULT_MAX_NODES"]
