import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from iacprob.counting import (
    PeriodTooSmallError,
    ProbabilityRecipe,
    UndefinedProbabilityError,
    count_points,
    find_period,
    interpolate_quasipolynomial,
    probability,
    weighted_count,
)
from iacprob.numerics import QuasiPolynomial
from iacprob.presets import preset
from iacprob.reduction import reduce, runoff_reduced_system
from iacprob.voting import (
    ConstraintSystem,
    event_condorcet_efficiency_violation,
    event_condorcet_winner,
    event_cycle,
    event_runoff_reversal,
    full_orthant,
)

from oracles import brute_count
from test_numerics import CONDORCET_BLOCK_EVEN, CONDORCET_BLOCK_ODD

# brute-force enumeration, frozen
CW3_COUNTS = [0, 2, 3, 18, 24, 80]
CW4_COUNTS = [0, 6, 21, 586, 1686, 21450]


def test_brute_force_reference_values():
    s3 = event_condorcet_winner(3)
    assert [brute_count(s3.rows, s3.strict, 6, n) for n in range(6)] == CW3_COUNTS
    s4 = event_condorcet_winner(4)
    assert [brute_count(s4.rows, s4.strict, 24, n) for n in range(4)] == CW4_COUNTS[:4]


def test_condorcet_counts():
    assert [count_points(event_condorcet_winner(3), n) for n in range(6)] == CW3_COUNTS
    assert [count_points(event_condorcet_winner(4), n) for n in range(6)] == CW4_COUNTS


def test_full_orthant():
    assert count_points(full_orthant(6), 2) == 21
    assert [count_points(full_orthant(4), n) for n in range(8)] == [math.comb(n + 3, 3) for n in range(8)]


rows_strategy = st.integers(1, 5).flatmap(
    lambda d: st.tuples(
        st.just(d),
        st.lists(st.tuples(*[st.integers(-2, 2)] * d), min_size=0, max_size=3),
        st.lists(st.booleans(), min_size=3, max_size=3),
        st.integers(0, 6),
    )
)


@given(rows_strategy)
@settings(max_examples=80, deadline=None)
def test_dp_matches_brute_force(case):
    d, rows, strict, n = case
    strict = tuple(strict[: len(rows)])
    s = ConstraintSystem(d, tuple(rows), strict)
    assert count_points(s, n) == brute_count(rows, strict, d, n)


@given(rows_strategy)
@settings(max_examples=40, deadline=None)
def test_weighted_count_identity_random(case):
    d, rows, strict, n = case
    s = ConstraintSystem(d, tuple(rows), tuple(strict[: len(rows)]))
    assert weighted_count(reduce(s), n) == count_points(s, n)


@pytest.mark.parametrize(
    "system",
    [event_condorcet_winner(3), event_condorcet_efficiency_violation(3), event_runoff_reversal(3)],
    ids=["cw", "cev", "runoff"],
)
def test_weighted_equals_unweighted_three(system):
    red = reduce(system)
    for n in range(13):
        assert weighted_count(red, n) == count_points(system, n)


def test_weighted_equals_unweighted_four_small():
    red = reduce(event_condorcet_winner(4))
    assert weighted_count(red, 3) == count_points(event_condorcet_winner(4), 3) == 586
    assert weighted_count(runoff_reduced_system(4), 3) == count_points(event_runoff_reversal(4), 3)


def test_singleton_grouping_is_plain_count():
    s = ConstraintSystem(3, ((1, 2, -1),))
    red = reduce(s)
    assert red.weight.sizes == (1, 1, 1)
    assert all(weighted_count(red, n) == count_points(s, n) for n in range(8))


def test_probability_over_full_orthant():
    r = ProbabilityRecipe(event_condorcet_winner(3))
    assert probability(r, 3) == Fraction(CW3_COUNTS[3], 56)
    assert probability(r, 3, reduced=True) == Fraction(18, 56)


def test_paradox_assembly_odd_n():
    cw = ProbabilityRecipe(event_condorcet_winner(3))
    paradox = preset("condorcet-paradox", 3).recipe
    for n in (1, 3, 5, 7, 9):
        assert probability(paradox, n) == 1 - 3 * probability(cw, n)


def test_efficiency_assembly():
    r = preset("condorcet-efficiency-violation", 3).recipe
    num = count_points(event_condorcet_efficiency_violation(3), 9)
    den = count_points(event_condorcet_winner(3), 9)
    assert probability(r, 9) == Fraction(6 * num, 3 * den)


def test_undefined_probability():
    r = preset("condorcet-efficiency-violation", 3).recipe
    with pytest.raises(UndefinedProbabilityError):
        probability(r, 0)


def test_odd_n_partition():
    cw = event_condorcet_winner(3)
    for n in range(1, 20, 2):
        cycles = count_points(event_cycle(3, "abc"), n) + count_points(event_cycle(3, "acb"), n)
        assert 3 * count_points(cw, n) + cycles == math.comb(n + 5, 5)


def test_quasipolynomial_full_orthant_is_binomial():
    q = interpolate_quasipolynomial(lambda n: count_points(full_orthant(6), n), 5, 1)
    assert q.period == 1
    assert all(q(n) == math.comb(n + 5, 5) for n in range(30))


def condorcet_sampler():
    red = reduce(event_condorcet_winner(3))
    return lambda n: weighted_count(red, n)


def test_condorcet_quasipolynomial_matches_reference():
    q = interpolate_quasipolynomial(condorcet_sampler(), 5, 2)
    assert q == QuasiPolynomial([CONDORCET_BLOCK_EVEN, CONDORCET_BLOCK_ODD])
    assert q.leading_coefficients() == [Fraction(1, 384)] * 2
    assert q.polys[1][0] == Fraction(45, 128)


def test_condorcet_fractional_form_text():
    q = interpolate_quasipolynomial(condorcet_sampler(), 5, 2)
    assert q.fractional_form() == "\n".join(
        [
            "   1/384 * n^5",
            " + ( 1/64 * { 1/2 * n } + 1/32 ) * n^4",
            " + ( 17/96 * { 1/2 * n } + 13/96 ) * n^3",
            " + ( 23/32 * { 1/2 * n } + 1/4 ) * n^2",
            " + ( 233/192 * { 1/2 * n } + 1/6 ) * n",
            " + ( 45/64 * { 1/2 * n } + 0 )",
        ]
    )


def test_quasipolynomial_predicts_fresh_counts():
    sampler = condorcet_sampler()
    q = interpolate_quasipolynomial(sampler, 5, 2)
    for n in range(40, 50):
        assert q(n) == count_points(event_condorcet_winner(3), n)


def test_small_period_detected():
    with pytest.raises(PeriodTooSmallError, match="period too small"):
        interpolate_quasipolynomial(condorcet_sampler(), 5, 1)


def test_find_period_picks_two():
    assert find_period(condorcet_sampler(), 5).period == 2


def test_runoff_period_twelve():
    red = reduce(event_runoff_reversal(3))
    sampler = lambda n: weighted_count(red, n)
    q = interpolate_quasipolynomial(sampler, 5, 12)
    assert q.period == 12 and q.degree == 5
    assert all(q(n) == sampler(n) for n in (0, 1, 5, 11, 130, 131))
    with pytest.raises(PeriodTooSmallError):
        interpolate_quasipolynomial(sampler, 5, 6)


def test_efficiency_period_six():
    red = reduce(event_condorcet_efficiency_violation(3))
    sampler = lambda n: weighted_count(red, n)
    q = interpolate_quasipolynomial(sampler, 5, 6)
    assert q(101) == count_points(event_condorcet_efficiency_violation(3), 101)


def test_workers_do_not_change_counts():
    s = event_condorcet_winner(4)
    red = reduce(s)
    assert count_points(s, 6, workers=1) == count_points(s, 6, workers=2)
    assert weighted_count(red, 9, workers=1) == weighted_count(red, 9, workers=3)


def test_negative_n_rejected():
    with pytest.raises(ValueError):
        count_points(event_condorcet_winner(3), -1)
