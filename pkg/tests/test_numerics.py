import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from iacprob.numerics import (
    Monomial,
    QuasiPolynomial,
    SingularSystemError,
    SparsePolynomial,
    format_rational,
    integer_det,
    integer_kernel_vector,
    integer_rank,
    solve_linear_system,
    to_decimal,
)
from iacprob.reduction import reduce
from iacprob.voting import event_condorcet_winner

from oracles import leibniz_det


def test_solve_identity():
    assert solve_linear_system([[1, 0], [0, 1]], [3, 5]) == [3, 5]


def test_solve_symmetric():
    assert solve_linear_system([[1, 1], [1, -1]], [2, 0]) == [1, 1]


def test_solve_singular_reports_no_unique_solution():
    with pytest.raises(SingularSystemError, match="no unique solution"):
        solve_linear_system([[1, 1], [2, 2]], [1, 3])


def test_solve_exact_fractions():
    x = solve_linear_system([[3, 1], [1, 2]], [1, 0])
    assert x == [Fraction(2, 5), Fraction(-1, 5)]


small_ints = st.integers(-4, 4)


@given(st.integers(1, 4).flatmap(lambda n: st.lists(st.lists(small_ints, min_size=n, max_size=n), min_size=n, max_size=n)))
def test_bareiss_matches_leibniz(M):
    assert integer_det(M) == leibniz_det(M)
    assert (integer_rank(M) == len(M)) == (leibniz_det(M) != 0)


@given(
    st.integers(1, 4).flatmap(
        lambda n: st.tuples(
            st.lists(st.lists(small_ints, min_size=n, max_size=n), min_size=n, max_size=n),
            st.lists(small_ints, min_size=n, max_size=n),
        )
    )
)
def test_solve_roundtrip(case):
    A, b = case
    if leibniz_det(A) == 0:
        with pytest.raises(SingularSystemError):
            solve_linear_system(A, b)
        return
    x = solve_linear_system(A, b)
    assert [sum(a * v for a, v in zip(row, x)) for row in A] == b


def test_kernel_vector_primitive():
    v = integer_kernel_vector([[1, 1, 0], [0, 2, 2]])
    assert v in ([1, -1, 1], [-1, 1, -1])


def test_format_and_decimal():
    assert format_rational(Fraction(5, 16)) == "5/16"
    assert format_rational(Fraction(4, 2)) == "2"
    assert to_decimal(Fraction(5, 16)) == "0.3125000000"
    assert to_decimal(Fraction(1, 3), 4) == "0.3333"


def polys(nvars=2):
    coeff = st.builds(Fraction, st.integers(-9, 9), st.integers(1, 6))
    term = st.tuples(st.tuples(*[st.integers(0, 3)] * nvars), coeff)
    return st.lists(term, max_size=4).map(lambda ts: SparsePolynomial(nvars, ts))


@given(polys(), polys(), polys())
@settings(max_examples=60)
def test_ring_laws(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert p * (q + r) == p * q + p * r
    assert p - p == SparsePolynomial(2)


@given(polys(), st.tuples(st.integers(-3, 3), st.integers(-3, 3)))
@settings(max_examples=60)
def test_evaluation_is_a_homomorphism(p, pt):
    q = p * p + p
    assert q(pt) == p(pt) ** 2 + p(pt)


def test_canonical_form_drops_zero_terms():
    p = SparsePolynomial(1, [((1,), 2), ((1,), -2), ((0,), 1)])
    assert p.terms == {(0,): 1}
    assert p == SparsePolynomial.constant(1)


def test_leading_part_of_binomial():
    p = SparsePolynomial.binomial(1, 0, 6)
    assert p.degree == 5
    assert p.leading_part() == SparsePolynomial(1, {(5,): Fraction(1, 120)})
    assert all(p((N,)) == math.comb(N + 5, 5) for N in range(10))


def test_leading_part_of_product():
    x, y = SparsePolynomial.variable(2, 0), SparsePolynomial.variable(2, 1)
    assert ((x + 1) * (y + 1)).leading_part() == x * y


def test_leading_part_of_zero_raises():
    with pytest.raises(ValueError):
        SparsePolynomial(2).leading_part()


def test_four_candidate_weight_leading_part():
    red = reduce(event_condorcet_winner(4))
    lead = red.weight.polynomial.leading_part()
    exps = tuple(5 if k == 6 else 1 for k in red.weight.sizes)
    assert lead == SparsePolynomial(8, {exps: Fraction(1, 14400)})
    assert red.weight.leading_term == Monomial(exps, Fraction(1, 14400))


# reference m=3 Condorcet quasi-polynomial, expanded from its fractional-part form
CONDORCET_BLOCK_EVEN = [0, Fraction(1, 6), Fraction(1, 4), Fraction(13, 96), Fraction(1, 32), Fraction(1, 384)]
CONDORCET_BLOCK_ODD = [
    Fraction(45, 128),
    Fraction(1, 6) + Fraction(233, 384),
    Fraction(1, 4) + Fraction(23, 64),
    Fraction(13, 96) + Fraction(17, 192),
    Fraction(1, 32) + Fraction(1, 128),
    Fraction(1, 384),
]


def test_quasi_eval_small_n():
    q = QuasiPolynomial([CONDORCET_BLOCK_EVEN, CONDORCET_BLOCK_ODD])
    assert [q(n) for n in range(3)] == [0, 2, 3]


def test_fractional_form_roundtrip():
    q = QuasiPolynomial([CONDORCET_BLOCK_EVEN, CONDORCET_BLOCK_ODD])
    fc = q.fractional_coefficients()
    assert fc[5] == [Fraction(1, 384), 0]
    assert fc[0] == [0, Fraction(45, 64)]
    assert fc[1] == [Fraction(1, 6), Fraction(233, 192)]


def test_monomial_scaling():
    m = Monomial((1, 2), 3) * Fraction(1, 3)
    assert m == Monomial((1, 2))
    assert m.degree == 3
