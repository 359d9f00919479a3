"""Equal-column symmetry reduction with binomial multiplicity weights.

Variables whose columns agree across every row of a system can be replaced
by their sum ``N``; each reduced point then stands for
``binom(N + k - 1, k - 1)`` original points, ``k`` being the group size.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import permutations

from .numerics import Monomial, SparsePolynomial
from .voting import ConstraintSystem, OrderIndexing, candidates, event_runoff_reversal

__all__ = [
    "Grouping",
    "WeightSpec",
    "ReducedSystem",
    "group_equal_columns",
    "reduce",
    "reduce_system",
    "runoff_reduced_system",
    "group_name",
]


@dataclass(frozen=True)
class Grouping:
    partition: tuple[tuple[int, ...], ...]

    @property
    def sizes(self) -> tuple[int, ...]:
        return tuple(len(g) for g in self.partition)

    @property
    def D(self) -> int:
        return len(self.partition)

    @property
    def d(self) -> int:
        return sum(self.sizes)

    def group_sums(self, x) -> tuple[int, ...]:
        return tuple(sum(x[j] for j in g) for g in self.partition)


@dataclass(frozen=True)
class WeightSpec:
    """``p(N) = prod binom(N_i + k_i - 1, k_i - 1)`` kept in factored form.

    Expanding the product is only done on request: for five-candidate runoff
    the expansion would have over a billion terms.
    """

    sizes: tuple[int, ...]

    @property
    def degree(self) -> int:
        return sum(k - 1 for k in self.sizes)

    def __call__(self, point) -> int:
        return math.prod(math.comb(int(N) + k - 1, k - 1) for N, k in zip(point, self.sizes))

    def factor(self, i: int, N: int) -> int:
        k = self.sizes[i]
        return math.comb(N + k - 1, k - 1)

    @cached_property
    def polynomial(self) -> SparsePolynomial:
        D = len(self.sizes)
        p = SparsePolynomial.constant(D)
        for i, k in enumerate(self.sizes):
            if k > 1:
                p = p * SparsePolynomial.binomial(D, i, k)
        return p

    @property
    def leading_term(self) -> Monomial:
        coeff = Fraction(1, math.prod(math.factorial(k - 1) for k in self.sizes))
        return Monomial([k - 1 for k in self.sizes], coeff)

    def to_string(self, names) -> str:
        factors = []
        for name, k in zip(names, self.sizes):
            if k == 2:
                factors.append(f"({name}+1)")
            elif k > 2:
                factors.append(f"binom({name}+{k - 1},{k - 1})")
        return "*".join(factors) if factors else "1"


@dataclass(frozen=True)
class ReducedSystem:
    base: ConstraintSystem
    weight: WeightSpec
    grouping: Grouping
    names: tuple[str, ...]

    @property
    def D(self) -> int:
        return self.base.d

    def summary(self) -> dict:
        return {
            "D": self.D,
            "d": self.grouping.d,
            "group_sizes": list(self.weight.sizes),
            "weight_degree": self.weight.degree,
            "names": list(self.names),
        }


def group_equal_columns(system: ConstraintSystem) -> Grouping:
    """Group columns that are identical across all explicit rows.

    Groups are ordered by their lowest original index.
    """
    groups: dict[tuple[int, ...], list[int]] = {}
    for j, col in enumerate(system.columns):
        groups.setdefault(col, []).append(j)
    return Grouping(tuple(sorted((tuple(g) for g in groups.values()), key=lambda g: g[0])))


def _is_permutation_labels(labels) -> bool:
    if not labels:
        return False
    m = len(labels[0])
    if math.factorial(m) != len(labels):
        return False
    letters = candidates(m)
    return all(sorted(o) == list(letters) for o in labels)


def group_name(orders) -> str | None:
    """Index-style name for a set of preference orders, or None if no pattern fits.

    ``a`` = orders starting with a, ``*a`` = orders ending with a,
    ``b*a`` = starting with b and ending with a, ``c.a.b`` = starting with c
    and ranking a before b. A single order drops its (implied) last letter.
    """
    orders = sorted(orders)
    m = len(orders[0])
    if len(orders) == 1:
        return orders[0][:-1] if m > 1 else orders[0]
    prefix = _common_prefix(orders)
    suffix = _common_prefix([o[::-1] for o in orders])[::-1]
    if len(prefix) + len(suffix) <= m:
        middle = m - len(prefix) - len(suffix)
        if len(orders) == math.factorial(middle):
            if not suffix:
                return prefix
            return f"{prefix}*{suffix}"
    rest = sorted(set(orders[0][len(prefix):]))
    expected_size = math.factorial(len(rest)) // 2
    if len(orders) == expected_size:
        for y, z in permutations(rest, 2):
            if all(o.index(y) < o.index(z) for o in orders):
                return f"{prefix}·{y}·{z}"
    return None


def _common_prefix(words) -> str:
    first = words[0]
    i = 0
    while i < len(first) and all(len(w) > i and w[i] == first[i] for w in words):
        i += 1
    return first[:i]


def _names_for(system: ConstraintSystem, grouping: Grouping) -> tuple[str, ...]:
    generic = tuple(f"G{i}" for i in range(grouping.D))
    if not _is_permutation_labels(system.labels):
        return generic
    names = []
    for g in grouping.partition:
        name = group_name([system.labels[j] for j in g])
        if name is None:
            return generic
        names.append(f"n_{name}")
    if len(set(names)) != len(names):
        return generic
    return tuple(names)


def reduce(system: ConstraintSystem, grouping: Grouping | None = None) -> ReducedSystem:
    """Collapse each group to one variable using its lowest-index column."""
    if grouping is None:
        grouping = group_equal_columns(system)
    flat = sorted(j for g in grouping.partition for j in g)
    if flat != list(range(system.d)) or any(not g for g in grouping.partition):
        raise ValueError("grouping is not a partition of the variables")
    cols = system.columns
    for g in grouping.partition:
        if any(cols[j] != cols[g[0]] for j in g):
            raise ValueError("grouping inconsistent with columns")
    reps = [g[0] for g in grouping.partition]
    rows = tuple(tuple(r[j] for j in reps) for r in system.rows)
    names = _names_for(system, grouping)
    base = ConstraintSystem(grouping.D, rows, system.strict, names)
    return ReducedSystem(base, WeightSpec(grouping.sizes), grouping, names)


reduce_system = reduce


def runoff_reduced_system(m: int) -> ReducedSystem:
    """The ``2(m-1)``-variable runoff reversal system, built directly.

    Variables: ``a`` (a first), ``b`` (b first), then for every other
    candidate ``c`` the pair ``c.a.b`` / ``c.b.a`` (c first, a before / after b).
    """
    if m < 3:
        raise ValueError("runoff reversal needs at least three candidates")
    idx = OrderIndexing(m)
    others = idx.candidates[2:]
    groups: list[list[int]] = [[], []]
    for c in others:
        groups += [[], []]
    for j, o in enumerate(idx.orders):
        if o[0] == "a":
            groups[0].append(j)
        elif o[0] == "b":
            groups[1].append(j)
        else:
            i = others.index(o[0])
            groups[2 + 2 * i + (0 if o.index("a") < o.index("b") else 1)].append(j)
    grouping = Grouping(tuple(tuple(g) for g in groups))

    D = 2 * (m - 1)
    rows = []
    row = [0] * D
    row[0], row[1] = -1, 1
    rows.append(tuple(row))
    for i in range(m - 2):
        row = [0] * D
        row[0] = 1
        row[2 + 2 * i] = row[3 + 2 * i] = -1
        rows.append(tuple(row))
    row = [1, -1] + [1, -1] * (m - 2)
    rows.append(tuple(row))

    names = _names_for(event_runoff_reversal(m), grouping)
    base = ConstraintSystem(D, tuple(rows), (True,) * len(rows), names)
    return ReducedSystem(base, WeightSpec(grouping.sizes), grouping, names)
