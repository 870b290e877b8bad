import json
import random
from fractions import Fraction
from itertools import combinations

import pytest
import sympy

from entropy_lab.exactpoly import ABC
from entropy_lab.hvmap import (IdentityViolation, covariant_image, exp_pattern, factor_chain,
                               gauge_exponents, gauge_sequence, iterate_pn, iterate_projective,
                               orbit, periodic_pattern, product_identity_check, r_value,
                               seed_chain, transformed_arguments, x_reduced)
from entropy_lab.sequences import beta_seq, degree_seqs
from oracles import fraction_orbit, to_sympy

a, b, c = sympy.symbols("a b c")


def rand_q(rng, lo=-20, hi=20):
    while True:
        q = Fraction(rng.randint(lo, hi), rng.randint(1, 9))
        if q:
            return q


def test_orbit_matches_plain_loop():
    rng = random.Random(4)
    for k in (1, 2, 3, 4):
        for _ in range(5):
            u, v = rand_q(rng), rand_q(rng)
            assert orbit(k, u, v, 6) == fraction_orbit(k, u, v, 6)


def test_orbit_reports_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        orbit(2, 1, 0, 3)
    with pytest.raises(ValueError):
        orbit(0, 1, 1, 3)


@pytest.mark.parametrize("k", [2, 3])
def test_product_form_equals_projective_step(k):
    states = iterate_projective(k, 4)
    for n, st in enumerate(states):
        assert iterate_pn(k, n) == st.p
        assert st.p.homogeneous_degree() == st.r.homogeneous_degree()


@pytest.mark.parametrize("k", [2, 3])
def test_p_over_r_reproduces_the_orbit(k):
    rng = random.Random(k)
    for _ in range(4):
        pt = {v: rand_q(rng) for v in "abc"}
        xs = fraction_orbit(k, pt["b"] / pt["c"], pt["a"] / pt["c"], 4)
        for n in range(5):
            assert iterate_pn(k, n).evaluate(pt) / r_value(k, n, pt) == xs[n]


@pytest.mark.parametrize("k", [2, 3, 4])
def test_ord_a_matches_sympy(k):
    beta = beta_seq(k, 3).values
    for n in range(4):
        P = sympy.Poly(to_sympy(iterate_pn(k, n)), a, b, c)
        assert min(m[0] for m in P.monoms()) == beta[n]


@pytest.mark.parametrize("k,n", [(1, 5), (2, 5), (4, 4), (3, 4), (5, 3)])
def test_two_chain_constructions_agree(k, n):
    t = factor_chain(k, n, mode="T")
    r = factor_chain(k, n, mode="recurrence")
    assert all(t[j] == r[j] for j in range(n + 1))


@pytest.mark.parametrize("k,n", [(2, 5), (3, 4), (4, 4)])
def test_chain_degrees(k, n):
    ch = factor_chain(k, n)
    assert ch.degrees() == list(degree_seqs(k, n)[0])


@pytest.mark.parametrize("k,n", [(2, 4), (3, 4)])
def test_product_identity(k, n):
    ch = factor_chain(k, n)
    for m in range(n + 1):
        rep = product_identity_check(ch, m)
        assert rep.ok and rep.degree_pn == rep.degree_product


def test_product_identity_detects_a_wrong_polynomial():
    ch = factor_chain(2, 3)
    p3 = iterate_pn(2, 3)
    wrong = p3 + ABC.gen("c") ** p3.homogeneous_degree()
    assert not product_identity_check(ch, 3, pn=wrong).ok


@pytest.mark.parametrize("k", [2, 3])
def test_reduced_form_evaluates_to_the_orbit(k):
    ch = factor_chain(k, 5)
    rng = random.Random(10 + k)
    done = 0
    while done < 5:
        pt = {v: rand_q(rng) for v in "abc"}
        try:
            xs = fraction_orbit(k, pt["b"] / pt["c"], pt["a"] / pt["c"], 5)
            vals = [x_reduced(ch, n).evaluate(pt) for n in range(6)]
        except ZeroDivisionError:
            continue
        assert vals == xs
        done += 1


def test_exponent_patterns():
    assert exp_pattern(3, 7) == periodic_pattern(3, 7) == (1, -3, -3, 1, -3, -3, 1, -3)
    assert exp_pattern(2, 6) == (1, -2, -2, 1, 0, 0, 0)


def test_plane_chain_is_irreducible_by_sympy():
    ch = factor_chain(2, 3, "plane")
    for n in range(1, 4):
        f = to_sympy(ch[n])
        _, factors = sympy.factor_list(f)
        assert len(factors) == 1 and factors[0][1] == 1, n


def test_consecutive_entries_are_coprime_by_sympy():
    ch = factor_chain(2, 4)
    for i, j in combinations(range(5), 2):
        if j - i <= 2:
            assert sympy.gcd(to_sympy(ch[i]), to_sympy(ch[j])) == 1, (i, j)


def test_odd_entries_are_pairwise_coprime_by_sympy():
    ch = factor_chain(3, 3)
    for i, j in combinations(range(4), 2):
        assert sympy.gcd(to_sympy(ch[i]), to_sympy(ch[j])) == 1, (i, j)


def test_gauge_units_obey_their_recurrence():
    for k in (2, 4):
        ex = gauge_exponents(k, 10)
        for n in range(-1, 11):
            lhs = tuple(x + y for x, y in zip(ex[n], ex[n - 3]))
            rhs = tuple(k * (x + y) for x, y in zip(ex[n - 1], ex[n - 2]))
            assert lhs == rhs


def test_gauge_chain_is_covariant():
    plane = factor_chain(2, 3, "plane")
    gauge = factor_chain(2, 3, "gauge")
    for n in range(4):
        assert gauge[n] == covariant_image(plane[n], 2, n)


def test_numeric_gauge_arguments():
    mu = (Fraction(2), Fraction(3), Fraction(5))
    ta, tb = transformed_arguments(2, mu)
    assert ta == Fraction(5, 36) and tb == Fraction(2, 225)
    assert gauge_sequence(2, 3, mu).value(-3) == 5


def test_gauge_setting_rejects_odd_k():
    with pytest.raises(ValueError):
        seed_chain(3, "gauge")


def test_dump_writes_a_json_manifest(tmp_path):
    ch = factor_chain(2, 3, "plane")
    ch.dump(tmp_path)
    man = json.loads((tmp_path / "manifest.json").read_text())
    assert [e["degree"] for e in man["degrees"]] == [1, 3, 9, 24]
    assert (tmp_path / "p3.txt").read_text().strip() == ch[3].to_text()


def test_identity_violation_message():
    err = IdentityViolation(2, 5, "T", "remainder")
    assert "k=2" in str(err) and "n=5" in str(err)
