"""Exact lattice-point counting on sliced cones, and quasi-polynomial fitting.

Counting runs a dynamic program over the variables. The state after fixing a
prefix of variables is ``(remaining voters, partial row values)``; distinct
prefixes reaching the same state are merged, which keeps the work far below
plain enumeration. Each variable's range is cut to the values that can
still satisfy every row given the remaining budget.
"""
from __future__ import annotations

import math
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

from .numerics import QuasiPolynomial, SingularSystemError, solve_linear_system
from .reduction import ReducedSystem, reduce
from .voting import ConstraintSystem, full_orthant

__all__ = [
    "UndefinedProbabilityError",
    "PeriodTooSmallError",
    "ProbabilityRecipe",
    "count_points",
    "weighted_count",
    "probability",
    "interpolate_quasipolynomial",
    "find_period",
    "DEFAULT_PERIODS",
]

DEFAULT_PERIODS = (1, 2, 3, 4, 6, 12, 24)


class UndefinedProbabilityError(ZeroDivisionError):
    """The denominator event is empty at this n."""


class PeriodTooSmallError(ValueError):
    pass


def _variable_order(system: ConstraintSystem) -> list[int]:
    cols = system.columns
    return sorted(range(system.d), key=lambda j: -sum(abs(v) for v in cols[j]))


def _x_range(partial, col, suffix_max, lower, rem):
    """Values x for the current variable that keep every row satisfiable.

    After choosing x, the rest contributes between ``(rem-x)*min`` and
    ``(rem-x)*max`` of the remaining column entries, so row ``i`` needs
    ``partial_i + x*c_i + (rem-x)*M_i >= lower_i``.
    """
    lo, hi = 0, rem
    for p, c, M, low in zip(partial, col, suffix_max, lower):
        rhs = low - p - rem * M
        slope = c - M
        if slope > 0:
            lo = max(lo, -((-rhs) // slope))
        elif slope < 0:
            hi = min(hi, rhs // slope)
        elif rhs > 0:
            return range(0)
        if lo > hi:
            return range(0)
    return range(lo, hi + 1)


def _run_dp(rows, lower, n, order, factors, first_values=None) -> int:
    """Weighted count with the first variable of ``order`` limited to ``first_values``."""
    d = len(order)
    nrows = len(rows)
    cols = [tuple(r[j] for r in rows) for j in order]
    # max entry per row over variables at positions >= t
    suffix_max = [[0] * nrows for _ in range(d + 1)]
    for t in range(d - 1, -1, -1):
        suffix_max[t] = [
            cols[t][i] if t == d - 1 else max(cols[t][i], suffix_max[t + 1][i]) for i in range(nrows)
        ]

    states: dict = {(n, (0,) * nrows): 1}
    for t in range(d - 1):
        col = cols[t]
        fac = factors[t]
        nxt: dict = defaultdict(int)
        smax = suffix_max[t + 1]
        for (rem, partial), acc in states.items():
            xs = _x_range(partial, col, smax, lower, rem)
            if t == 0 and first_values is not None:
                xs = [x for x in xs if x in first_values]
            for x in xs:
                w = fac(x) if fac else 1
                if not w:
                    continue
                key = (rem - x, tuple(p + x * c for p, c in zip(partial, col)))
                nxt[key] += acc * w
        states = nxt
        if not states:
            return 0

    col = cols[d - 1]
    fac = factors[d - 1]
    total = 0
    for (rem, partial), acc in states.items():
        if d == 1 and first_values is not None and rem not in first_values:
            continue
        if all(p + rem * c >= low for p, c, low in zip(partial, col, lower)):
            total += acc * (fac(rem) if fac else 1)
    return total


def _binomial_factor(k: int):
    if k == 1:
        return None
    return lambda x: math.comb(x + k - 1, k - 1)


def _dp_task(args) -> int:
    rows, lower, n, order, sizes, values = args
    factors = [_binomial_factor(k) for k in sizes] if sizes else [None] * len(order)
    return _run_dp(rows, lower, n, order, factors, set(values))


def _count(system: ConstraintSystem, n: int, sizes=None, workers: int = 1) -> int:
    if n < 0:
        raise ValueError("n must be nonnegative")
    if system.d == 0:
        return 1 if n == 0 and all(lo <= 0 for lo in system.lower_bounds()) else 0
    order = _variable_order(system)
    lower = system.lower_bounds()
    ordered_sizes = [sizes[j] for j in order] if sizes else None
    if workers <= 1 or n == 0:
        factors = [_binomial_factor(k) for k in ordered_sizes] if ordered_sizes else [None] * system.d
        return _run_dp(system.rows, lower, n, order, factors)
    # split the first variable's range; integer sums make the result order-independent
    chunks = [list(range(w, n + 1, workers)) for w in range(workers)]
    tasks = [(system.rows, lower, n, order, ordered_sizes, c) for c in chunks if c]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return sum(pool.map(_dp_task, tasks))


def count_points(system: ConstraintSystem, n: int, workers: int = 1) -> int:
    """Number of ``x in Z^d``, ``x >= 0``, ``sum(x) = n`` satisfying every row."""
    return _count(system, n, None, workers)


def weighted_count(reduced: ReducedSystem, n: int, workers: int = 1) -> int:
    """Sum of the multiplicity weight over lattice points of the reduced slice."""
    return _count(reduced.base, n, reduced.weight.sizes, workers)


@dataclass(frozen=True)
class ProbabilityRecipe:
    """``num_mult * #num(n) / (den_mult * #den(n))``, optionally complemented.

    ``numerator_reduced``/``denominator_reduced`` override the equal-column
    reduction when a hand-built reduced system is available.
    """

    numerator: ConstraintSystem
    denominator: ConstraintSystem | None = None
    numerator_multiplier: int = 1
    denominator_multiplier: int = 1
    complement: bool = False
    numerator_reduced: ReducedSystem | None = None
    denominator_reduced: ReducedSystem | None = None

    @property
    def denominator_system(self) -> ConstraintSystem:
        if self.denominator is None:
            return full_orthant(self.numerator.d, self.numerator.labels)
        return self.denominator

    def reduced_numerator(self) -> ReducedSystem:
        return self.numerator_reduced or reduce(self.numerator)

    def reduced_denominator(self) -> ReducedSystem:
        return self.denominator_reduced or reduce(self.denominator_system)

    def assemble(self, num, den) -> Fraction:
        if den == 0:
            raise UndefinedProbabilityError("undefined at this n: denominator event is empty")
        value = Fraction(self.numerator_multiplier * num, self.denominator_multiplier * den)
        return 1 - value if self.complement else value


def probability(recipe: ProbabilityRecipe, n: int, reduced: bool = False, workers: int = 1) -> Fraction:
    if reduced:
        num = weighted_count(recipe.reduced_numerator(), n, workers)
        den = weighted_count(recipe.reduced_denominator(), n, workers)
    else:
        num = count_points(recipe.numerator, n, workers)
        den = count_points(recipe.denominator_system, n, workers)
    return recipe.assemble(num, den)


def interpolate_quasipolynomial(
    sampler: Callable[[int], int],
    degree: int,
    period: int,
    validation: int = 2,
    start: int | None = None,
) -> QuasiPolynomial:
    """Fit one degree-``degree`` polynomial per residue class mod ``period``.

    Class ``r`` is sampled at ``n = start + r + period*t``; the first
    ``degree + 1`` samples determine the polynomial exactly and the next
    ``validation`` samples must be reproduced, otherwise
    :class:`PeriodTooSmallError` is raised.
    """
    if period < 1 or degree < 0:
        raise ValueError("period must be >= 1 and degree >= 0")
    if validation < 0:
        raise ValueError("validation count must be nonnegative")
    start = period if start is None else start
    polys = []
    for r in range(period):
        ns = [start + r + period * t for t in range(degree + 1 + validation)]
        values = [sampler(n) for n in ns]
        fit_ns, fit_vals = ns[: degree + 1], values[: degree + 1]
        V = [[Fraction(x) ** e for e in range(degree + 1)] for x in fit_ns]
        try:
            coeffs = solve_linear_system(V, fit_vals)
        except SingularSystemError as exc:
            raise SingularSystemError(f"interpolation failed: {exc}") from None
        for x, v in zip(ns[degree + 1:], values[degree + 1:]):
            got = sum(c * x ** e for e, c in enumerate(coeffs))
            if got != v:
                raise PeriodTooSmallError(
                    f"period too small: period {period} misses n={x} ({got} != {v})"
                )
        polys.append(coeffs)
    # reorder so polys[i] serves n = i (mod period)
    ordered = [None] * period
    for r, p in enumerate(polys):
        ordered[(start + r) % period] = p
    return QuasiPolynomial(ordered)


def find_period(
    sampler: Callable[[int], int],
    degree: int,
    candidates: Sequence[int] = DEFAULT_PERIODS,
    validation: int = 2,
) -> QuasiPolynomial:
    """Smallest candidate period whose fit reproduces the held-out samples."""
    cached = lru_cache(maxsize=None)(sampler)
    for k in candidates:
        try:
            return interpolate_quasipolynomial(cached, degree, k, validation)
        except PeriodTooSmallError:
            continue
    raise PeriodTooSmallError(f"no period among {tuple(candidates)} validates")
