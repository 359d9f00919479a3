"""Voting events as integer constraint systems over preference-order tallies.

A voting situation for ``m`` candidates is a vector of ``m!`` nonnegative
integers (voters per preference order) summing to ``n``. Orders are indexed
lexicographically by their label strings, so for four candidates the columns
run ``abcd, abdc, ..., dcba``.
"""
from __future__ import annotations

import json
import string
from dataclasses import dataclass, field
from itertools import permutations
from pathlib import Path

__all__ = [
    "EventError",
    "OrderIndexing",
    "ConstraintSystem",
    "candidates",
    "pairwise_row",
    "plurality_row",
    "event_condorcet_winner",
    "event_condorcet_efficiency_violation",
    "event_runoff_reversal",
    "event_cycle",
    "full_orthant",
    "system_from_dict",
    "load_event_file",
]


class EventError(ValueError):
    """Malformed event description (unknown candidate, bad JSON, ...)."""


def candidates(m: int) -> str:
    if not 1 <= m <= 26:
        raise EventError(f"candidate count must be in 1..26, got {m}")
    return string.ascii_lowercase[:m]


@dataclass(frozen=True)
class OrderIndexing:
    m: int
    orders: tuple[str, ...] = field(init=False)

    def __post_init__(self):
        labels = candidates(self.m)
        object.__setattr__(self, "orders", tuple("".join(p) for p in permutations(labels)))

    @property
    def candidates(self) -> str:
        return candidates(self.m)

    def __len__(self) -> int:
        return len(self.orders)

    def index(self, order: str) -> int:
        return self.orders.index(order)

    def check(self, *labels: str) -> None:
        for x in labels:
            if x not in self.candidates or len(x) != 1:
                raise EventError(f"unknown candidate {x!r} for m={self.m}")


@dataclass(frozen=True)
class ConstraintSystem:
    """Rows ``a . x > 0`` (strict) or ``a . x >= 0`` over ``x >= 0, sum(x) = n``."""

    d: int
    rows: tuple[tuple[int, ...], ...] = ()
    strict: tuple[bool, ...] = ()
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in r) for r in self.rows)
        strict = tuple(bool(s) for s in self.strict) if self.strict else (True,) * len(rows)
        if len(strict) != len(rows):
            raise ValueError("one strictness flag per row")
        if any(len(r) != self.d for r in rows):
            raise ValueError("row length must equal the variable count")
        if self.labels is not None and len(self.labels) != self.d:
            raise ValueError("one label per variable")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "strict", strict)

    @property
    def columns(self) -> list[tuple[int, ...]]:
        return [tuple(r[j] for r in self.rows) for j in range(self.d)]

    def lower_bounds(self) -> tuple[int, ...]:
        # integer rows: a.x > 0  <=>  a.x >= 1
        return tuple(1 if s else 0 for s in self.strict)

    def contains(self, x) -> bool:
        if len(x) != self.d or any(v < 0 for v in x):
            return False
        for row, lo in zip(self.rows, self.lower_bounds()):
            if sum(a * v for a, v in zip(row, x)) < lo:
                return False
        return True

    def stack(self, other: ConstraintSystem) -> ConstraintSystem:
        if other.d != self.d:
            raise ValueError("variable count mismatch")
        return ConstraintSystem(self.d, self.rows + other.rows, self.strict + other.strict, self.labels)

    def permuted(self, perm) -> ConstraintSystem:
        """Reorder variables: new column ``j`` is old column ``perm[j]``."""
        rows = tuple(tuple(r[p] for p in perm) for r in self.rows)
        labels = tuple(self.labels[p] for p in perm) if self.labels else None
        return ConstraintSystem(self.d, rows, self.strict, labels)


def pairwise_row(indexing: OrderIndexing, x: str, y: str) -> tuple[int, ...]:
    """+1 on orders ranking ``x`` above ``y``, -1 elsewhere."""
    indexing.check(x, y)
    if x == y:
        raise EventError("pairwise comparison needs two distinct candidates")
    return tuple(1 if o.index(x) < o.index(y) else -1 for o in indexing.orders)


def plurality_row(indexing: OrderIndexing, x: str, y: str) -> tuple[int, ...]:
    """+1 on orders with ``x`` first, -1 on orders with ``y`` first."""
    indexing.check(x, y)
    if x == y:
        raise EventError("plurality comparison needs two distinct candidates")
    return tuple(1 if o[0] == x else -1 if o[0] == y else 0 for o in indexing.orders)


def _system(indexing: OrderIndexing, rows) -> ConstraintSystem:
    rows = tuple(rows)
    return ConstraintSystem(len(indexing), rows, (True,) * len(rows), indexing.orders)


def event_condorcet_winner(m: int, w: str = "a") -> ConstraintSystem:
    idx = OrderIndexing(m)
    idx.check(w)
    return _system(idx, (pairwise_row(idx, w, y) for y in idx.candidates if y != w))


def event_condorcet_efficiency_violation(m: int, cw: str = "a", pw: str = "b") -> ConstraintSystem:
    """``cw`` is the Condorcet winner while ``pw`` wins plurality."""
    idx = OrderIndexing(m)
    idx.check(cw, pw)
    if cw == pw:
        raise EventError("Condorcet winner and plurality winner must differ")
    rows = [pairwise_row(idx, cw, y) for y in idx.candidates if y != cw]
    rows += [plurality_row(idx, pw, y) for y in idx.candidates if y != pw]
    return _system(idx, rows)


def event_runoff_reversal(m: int) -> ConstraintSystem:
    """b wins plurality with a as runner-up, yet a beats b head to head."""
    if m < 3:
        raise EventError("runoff reversal needs at least three candidates")
    idx = OrderIndexing(m)
    rows = [plurality_row(idx, "b", "a")]
    rows += [plurality_row(idx, "a", c) for c in idx.candidates[2:]]
    rows.append(pairwise_row(idx, "a", "b"))
    return _system(idx, rows)


def event_cycle(m: int, cycle: str) -> ConstraintSystem:
    """Majority cycle: each candidate of ``cycle`` beats the next, last beats first."""
    idx = OrderIndexing(m)
    idx.check(*cycle)
    pairs = zip(cycle, cycle[1:] + cycle[:1])
    return _system(idx, (pairwise_row(idx, x, y) for x, y in pairs))


def full_orthant(d: int, labels=None) -> ConstraintSystem:
    return ConstraintSystem(d, (), (), labels)


def system_from_dict(data: dict) -> ConstraintSystem:
    """Build a system from the JSON event schema.

    ``{"m": 3, "rows": [{"pairwise": ["a", "b"]}, {"plurality": ["b", "a"]}], "strict": true}``
    """
    if not isinstance(data, dict):
        raise EventError("event specification must be a JSON object")
    try:
        m = int(data["m"])
        raw_rows = data["rows"]
    except (KeyError, TypeError, ValueError) as exc:
        raise EventError(f"event specification needs 'm' and 'rows': {exc}") from None
    strict = data.get("strict", True)
    if not isinstance(strict, bool):
        raise EventError("'strict' must be a boolean")
    idx = OrderIndexing(m)
    rows = []
    for entry in raw_rows:
        if not isinstance(entry, dict) or len(entry) != 1:
            raise EventError(f"each row needs exactly one of 'pairwise'/'plurality': {entry!r}")
        (kind, pair), = entry.items()
        if kind not in ("pairwise", "plurality") or not isinstance(pair, list) or len(pair) != 2:
            raise EventError(f"bad row {entry!r}")
        build = pairwise_row if kind == "pairwise" else plurality_row
        rows.append(build(idx, str(pair[0]), str(pair[1])))
    return ConstraintSystem(len(idx), tuple(rows), (strict,) * len(rows), idx.orders)


def load_event_file(path) -> ConstraintSystem:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise EventError(f"cannot read event file {path}: {exc}") from None
    return system_from_dict(data)
