import warnings
from fractions import Fraction

import pytest
from hypothesis import assume, given, strategies as st

from entropy_lab.mapdsl import (Bin, DegenerateMapWarning, Neg, Num, ParseError, Pow,
                                SemanticError, SingularOrbit, Var, builtin_map,
                                degree_profile_modp, eval_exact, laurent_stepper, parse_ast,
                                parse_map, pretty, profile, profile_pairs)
from entropy_lab.sctest import LaurentSeries, hv_step, sc_run
from oracles import fraction_orbit, map_line_degrees
from reference import DEGREES


# -- parsing -------------------------------------------------------------------------
def test_builtin_normal_form():
    m = builtin_map(2)
    assert m.normal_form_text() == "(x[n]^3 - x[n]^2*x[n-1] + 1) / (x[n]^2)"
    assert m.degrees() == (3, 1)
    assert m.uses_prev and m.uses_cur and not m.warnings


def test_precedence_and_associativity():
    assert parse_ast("x[n+1] = 1 - 2 - 3") == Bin("-", Bin("-", Num(1), Num(2)), Num(3))
    assert parse_ast("x[n+1] = 2^3^2") == Pow(Num(2), 9)
    assert parse_ast("x[n+1] = -x[n]^2") == Neg(Pow(Var(0), 2))
    assert parse_ast("x[n+1] = x[n] * x[n-1] / 2") == \
        Bin("/", Bin("*", Var(0), Var(1)), Num(2))
    assert parse_ast("x[n+1] = x[n]^-2") == Pow(Var(0), -2)


def test_comments_whitespace_and_decimals():
    m = parse_map("x[n+1] = # the map\n  0.5*x[n]  \n + x[n-1]  # done")
    assert m(Fraction(2), Fraction(1)) == 2


@pytest.mark.parametrize("text,line,col,expect", [
    ("x[n+1] = x[n] +", 1, 16, "number"),
    ("x[n+1] = x[n] $ 2", 1, 15, "end of input"),
    ("x[n+1] = (x[n]", 1, 15, ")"),
    ("x[n+1] x[n]", 1, 8, "="),
    ("x[n+1] =\n  x[n] ^ x[n-1]", 2, 10, "integer"),
])
def test_parse_errors_locate_the_problem(text, line, col, expect):
    with pytest.raises(ParseError) as ei:
        parse_map(text)
    err = ei.value
    assert (err.line, err.column) == (line, col)
    assert expect in err.expected


@pytest.mark.parametrize("text,fragment", [
    ("x[n+1] = x[n-2]", "out of range"),
    ("x[n+1] = x[n+1] + 1", "right-hand side"),
    ("x[n] = x[n-1]", "left-hand side"),
    ("x[n+1] = x[n] / (x[n-1] - x[n-1])", "identically zero"),
    ("x[n+1] = (x[n] - x[n])^-1", "negative power of zero"),
    ("x[n+1] = x[n]^5000", "exceeds"),
])
def test_semantic_errors(text, fragment):
    with pytest.raises(SemanticError, match=fragment):
        parse_map(text)


def test_size_limits():
    with pytest.raises(SemanticError, match="nested"):
        parse_map("x[n+1] = " + "(" * 300 + "x[n]" + ")" * 300)
    with pytest.raises(SemanticError, match="nodes"):
        parse_map("x[n+1] = " + " + ".join(["x[n]"] * 60), max_nodes=50)


def test_degenerate_maps_warn():
    with pytest.warns(DegenerateMapWarning):
        m = parse_map("x[n+1] = x[n]^2 + 1")
    assert not m.uses_prev
    with pytest.warns(DegenerateMapWarning):
        parse_map("x[n+1] = x[n] - x[n] + x[n-1]")


def test_common_factors_cancel():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        m = parse_map("x[n+1] = (x[n]^2 - x[n-1]^2) / (x[n] - x[n-1])")
    assert m.normal_form_text() == "(x[n] + x[n-1]) / (1)"


# -- round trip (property) -------------------------------------------------------------
leaves = st.one_of(st.integers(0, 9).map(lambda v: Num(Fraction(v))),
                   st.sampled_from([Var(0), Var(1)]),
                   st.sampled_from([Num(Fraction(1, 4)), Num(Fraction(3, 2))]))


def _tree(children):
    return st.one_of(
        st.builds(Bin, st.sampled_from("+-*/"), children, children),
        st.builds(Neg, children),
        st.builds(Pow, children, st.integers(-2, 3)))


asts = st.recursive(leaves, _tree, max_leaves=10)


def ast_eval(node, cur, prev):
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return cur if node.lag == 0 else prev
    if isinstance(node, Neg):
        return -ast_eval(node.operand, cur, prev)
    if isinstance(node, Pow):
        return ast_eval(node.base, cur, prev) ** node.exponent
    x, y = ast_eval(node.left, cur, prev), ast_eval(node.right, cur, prev)
    return {"+": x + y, "-": x - y, "*": x * y}[node.op] if node.op != "/" else x / y


@given(asts)
def test_pretty_parse_round_trip(tree):
    text = pretty(tree)
    again = parse_ast("x[n+1] = " + text)
    assert pretty(again) == text
    assert again == tree


@given(asts, st.fractions(-4, 4, max_denominator=5), st.fractions(-4, 4, max_denominator=5))
def test_normal_form_evaluates_like_the_tree(tree, cur, prev):
    try:
        want = ast_eval(tree, cur, prev)
    except ZeroDivisionError:
        assume(False)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        try:
            m = parse_map("x[n+1] = " + pretty(tree))
        except SemanticError:
            assume(False)
    try:
        got = m(cur, prev)
    except ZeroDivisionError:
        # the normal form only vanishes where the tree itself was singular or
        # cancelled a factor that vanishes here; both are fine to skip
        assume(False)
    assert got == want


# -- evaluators ----------------------------------------------------------------------
def test_exact_orbit_example():
    assert eval_exact(builtin_map(2), 0, 1, 3) == [1, 2, Fraction(5, 4), Fraction(-11, 100)]
    with pytest.raises(SingularOrbit) as ei:
        eval_exact(builtin_map(2), 3, 0, 3)
    assert ei.value.m == 1


@pytest.mark.parametrize("k", [1, 2, 3])
def test_exact_orbit_matches_plain_loop(k):
    u, v = Fraction(2, 3), Fraction(-7, 5)
    assert eval_exact(builtin_map(k), u, v, 5) == fraction_orbit(k, u, v, 5)


@pytest.mark.parametrize("k,n", [(1, 9), (2, 7), (3, 6), (4, 5)])
def test_profile_matches_oracle(k, n):
    prof = profile(builtin_map(k), n)
    assert prof.agree
    assert list(prof.degrees) == DEGREES[k][:n + 1]


def test_rewritten_map_has_the_same_profile():
    m = parse_map("x[n+1] = (x[n]^3 - x[n]^2*x[n-1] + 1)/x[n]^2")
    assert degree_profile_modp(m, 6, seed=3).degrees == degree_profile_modp(builtin_map(2), 6,
                                                                           seed=3).degrees


@pytest.mark.parametrize("text,fn", [
    ("x[n+1] = (x[n] + 1) / x[n-1]", lambda c, p: (c + 1) / p),            # period 5
    ("x[n+1] = x[n-1] * (x[n] + 1) / (x[n] - 1)", lambda c, p: p * (c + 1) / (c - 1)),
    ("x[n+1] = x[n]^2 / x[n-1] + 1", lambda c, p: c ** 2 / p + 1),
])
def test_general_denominators_match_oracle(text, fn):
    n = 6
    want = map_line_degrees(fn, n)
    assert list(degree_profile_modp(parse_map(text), n, seed=1).degrees) == want


def test_profile_stops_at_the_budget():
    prof = degree_profile_modp(builtin_map(3), 10, seed=0, budget=500)
    assert prof.stopped and list(prof.degrees) == DEGREES[3][:len(prof.degrees)]


def test_profile_pairs_and_outputs():
    pairs = profile_pairs(3, seed=5)
    assert len({p for p, _ in pairs}) == 3
    assert profile_pairs(3, seed=5) == pairs
    with pytest.raises(ValueError):
        profile(builtin_map(2), 4, pairs=pairs[:1])
    prof = profile(builtin_map(2), 4, pairs=pairs, threads=2)
    assert prof.to_csv().splitlines() == ["n,degree", "0,1", "1,3", "2,9", "3,25", "4,67"]
    assert prof.to_json()["agree"] is True


@pytest.mark.parametrize("k", [2, 3])
def test_series_stepper_matches_the_built_in_step(k):
    a = sc_run(k, step=laurent_stepper(builtin_map(k)))
    b = sc_run(k, step=hv_step(k))
    assert a.to_json() == b.to_json()


def test_series_stepper_on_a_single_step():
    step = laurent_stepper(parse_map("x[n+1] = x[n-1]/x[n] + 2"))
    cur = LaurentSeries(1, [1], 6)
    out = step(LaurentSeries.constant(3), cur)
    assert out.valuation == -1 and out.lead == 3
