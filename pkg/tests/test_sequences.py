from decimal import Decimal
from fractions import Fraction

import mpmath
import pytest
from hypothesis import assume, given, strategies as st

from entropy_lab.sequences import (DegreeSeq, FitUnstable, LinearRecurrence, RootNotFound,
                                   alpha_seq, b_bounds, beta_seq, closed_form_entropy,
                                   degree_seqs, dominant_root, entropy, expected_b_class,
                                   fit_recurrence, stated_recurrence, parity)
from oracles import entropy_mp, largest_real_root
from reference import (DEGREES, ENTROPY, QUOTED_ENTROPY_PREFIX, STATED_EVEN_RECURRENCE,
                       STATED_ODD_RECURRENCE)


def test_parity_groups_k1_with_even():
    assert [parity(k) for k in range(1, 8)] == ["even", "even", "odd", "even", "odd", "even", "odd"]
    with pytest.raises(ValueError):
        parity(0)


@pytest.mark.parametrize("k", sorted(DEGREES))
def test_degree_sequence_matches_oracle(k):
    want = DEGREES[k]
    assert list(degree_seqs(k, len(want) - 1)[1]) == want


@pytest.mark.parametrize("k", range(1, 8))
def test_stated_recurrences_hold(k):
    first, d = degree_seqs(k, 14)
    if parity(k) == "even":
        assert LinearRecurrence(STATED_EVEN_RECURRENCE(k)).satisfied_by(list(d))
        s = first.values
        for n in range(3, 15):
            assert d[n] == s[n] + s[n - 3] == 1 + k * (s[n - 1] + s[n - 2])
    else:
        # d_{n+1} = (k+1) d_n - k d_{n-2} from n = 2 on
        assert all(d[n + 1] == (k + 1) * d[n] - k * d[n - 2] for n in range(2, 14))
        t = first.values
        assert all(t[n] == d[n] - d[n - 3] for n in range(3, 15))


def test_stated_recurrence_shape():
    assert stated_recurrence(2).coefficients == tuple(Fraction(c) for c in STATED_EVEN_RECURRENCE(2))
    assert stated_recurrence(3).coefficients == tuple(Fraction(c) for c in STATED_ODD_RECURRENCE(3))


@pytest.mark.parametrize("k", range(1, 8))
def test_fit_is_the_minimal_factor_of_the_stated_recurrence(k):
    d = degree_seqs(k, 12)[1]
    rec = fit_recurrence(d)
    stated = stated_recurrence(k).integer_charpoly()
    if parity(k) == "even":
        # (x - 1)(x^2 - (k+1)x + 1); the stated quartic carries an extra (x + 1)
        assert rec.order == 3
        prod = [0] * 5
        for i, x in enumerate(rec.integer_charpoly()):
            prod[i] += x
            prod[i + 1] += x
        assert tuple(prod) == stated
    else:
        assert rec.integer_charpoly() == stated


def test_beta_and_alpha():
    assert list(beta_seq(2, 6)) == [1, 0, 0, 3, 8, 24, 72]
    b = beta_seq(3, 8).values
    assert all(b[n] == 3 * (b[n - 1] + b[n - 2]) + 4 * b[n - 3] for n in range(4, 9))
    al = alpha_seq(2, 8).values
    # beta is the convolution of itself with alpha plus alpha
    for n in range(2, 9):
        assert b_conv(beta_seq(2, 8).values, al, n) == beta_seq(2, 8).values[n]


def b_conv(beta, al, n):
    return al[n] + sum(beta[n - j] * al[j] for j in range(1, n))


@pytest.mark.parametrize("k", [3, 5, 7])
def test_b_bounds_cycle(k):
    for n in range(3, 12):
        assert b_bounds(k, n)[2] == expected_b_class(n)
    with pytest.raises(ValueError):
        b_bounds(2, 4)


def test_degree_seq_validation_and_json():
    s = DegreeSeq("d", (1, 3, 9), 2)
    assert DegreeSeq.from_json(s.dumps()) == s
    with pytest.raises(ValueError):
        DegreeSeq("d", (1, 5, 3))
    with pytest.raises(ValueError):
        DegreeSeq("nope", (1,))


# -- Berlekamp-Massey ---------------------------------------------------------------
@given(st.lists(st.integers(-3, 3), min_size=1, max_size=3),
       st.lists(st.integers(-5, 5), min_size=3, max_size=3))
def test_fit_recovers_a_planted_recurrence(coeffs, seeds):
    assume(coeffs[-1] != 0)
    L = len(coeffs)
    rec = LinearRecurrence(tuple(coeffs))
    vals = rec.extend(seeds[:L], 2 * L + 4)
    assume(any(vals))
    fitted = fit_recurrence(vals)
    assert fitted.order <= L
    assert fitted.satisfied_by(vals)
    # continuing both recurrences gives the same sequence
    assert fitted.extend(vals[:fitted.order], 20) == rec.extend(seeds[:L], 20)


def test_fit_refuses_short_data():
    with pytest.raises(FitUnstable):
        fit_recurrence([1, 3, 9, 25, 67])
    # checks=1 accepts one confirming term beyond the 2L that pin down the fit
    assert fit_recurrence([1, 3, 9, 25, 67, 177, 465], checks=1).order == 3


# -- roots and entropy --------------------------------------------------------------
@given(st.lists(st.integers(-6, 6), min_size=2, max_size=5))
def test_dominant_root_matches_mpmath(tail):
    cp = [1] + tail
    try:
        got = dominant_root(cp, precision=30)
    except RootNotFound:
        mpmath.mp.dps = 30
        roots = mpmath.polyroots(cp, maxsteps=200, extraprec=200)
        assert all(mpmath.re(r) <= 0 or abs(mpmath.im(r)) > 1e-12 for r in roots)
        return
    want = largest_real_root(cp)
    assert abs(mpmath.mpf(str(got)) - want) < mpmath.mpf(10) ** -20


@pytest.mark.parametrize("k", sorted(ENTROPY))
def test_closed_form_matches_mpmath(k):
    got = closed_form_entropy(k, precision=40)
    want = entropy_mp(k, parity(k), digits=50)
    assert abs(mpmath.mpf(str(got)) - want) < mpmath.mpf(10) ** -35
    assert str(got).startswith(ENTROPY[k]) or (k == 1 and got == 0)


@pytest.mark.parametrize("k", sorted(QUOTED_ENTROPY_PREFIX))
def test_quoted_entropy_prefixes(k):
    assert str(entropy(k).entropy).startswith(QUOTED_ENTROPY_PREFIX[k])


@pytest.mark.parametrize("k", range(1, 8))
def test_fitted_entropy_agrees_with_closed_form(k):
    res = entropy(k, degree_seqs(k, 12)[1])
    assert res.source == "fitted"
    assert abs(res.entropy - entropy(k).entropy) < Decimal(10) ** -40


@pytest.mark.parametrize("k", range(1, 13))
def test_entropy_lower_bound(k):
    ent = entropy(k).entropy
    assert ent >= Decimal(k).ln() - Decimal(10) ** -50
    assert closed_form_entropy(k, branch="even") < closed_form_entropy(k, branch="odd")
