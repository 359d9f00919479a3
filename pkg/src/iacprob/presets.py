"""Named voting events with their probability assembly.

Multipliers account for relabelling: the systems fix concrete candidates
(a is the Condorcet winner, b the plurality winner, ...), and the recipe
multiplies by the number of equivalent labellings.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Callable

from .counting import ProbabilityRecipe
from .reduction import runoff_reduced_system
from .voting import (
    EventError,
    event_condorcet_efficiency_violation,
    event_condorcet_winner,
    event_runoff_reversal,
    load_event_file,
)

__all__ = ["Event", "PRESETS", "preset", "resolve_event"]


@dataclass(frozen=True)
class Event:
    name: str
    m: int | None
    recipe: ProbabilityRecipe
    period: int | None = None
    derived: Callable[[Fraction], dict[str, Fraction]] = field(default=lambda p: {})
    description: str = ""


def _condorcet_winner(m: int) -> Event:
    return Event(
        "condorcet-winner",
        m,
        ProbabilityRecipe(event_condorcet_winner(m, "a")),
        period=2,
        derived=lambda p: {"condorcet-existence": m * p, "condorcet-paradox": 1 - m * p},
        description="candidate a beats every other candidate pairwise",
    )


def _condorcet_paradox(m: int) -> Event:
    return Event(
        "condorcet-paradox",
        m,
        ProbabilityRecipe(event_condorcet_winner(m, "a"), None, m, 1, complement=True),
        period=2,
        derived=lambda p: {"condorcet-existence": 1 - p},
        description="no Condorcet winner exists",
    )


def _efficiency(m: int, complement: bool) -> Event:
    # m(m-1) ordered (Condorcet winner, plurality winner) pairs over m choices of winner
    recipe = ProbabilityRecipe(
        event_condorcet_efficiency_violation(m, "a", "b"),
        event_condorcet_winner(m, "a"),
        m * (m - 1),
        m,
        complement=complement,
    )
    if complement:
        return Event(
            "condorcet-efficiency",
            m,
            recipe,
            period=6,
            derived=lambda p: {"condorcet-efficiency-violation": 1 - p},
            description="plurality elects the Condorcet winner, given one exists",
        )
    return Event(
        "condorcet-efficiency-violation",
        m,
        recipe,
        period=6,
        derived=lambda p: {"condorcet-efficiency": 1 - p},
        description="a Condorcet winner exists but loses the plurality vote",
    )


def _runoff(m: int) -> Event:
    return Event(
        "runoff-reversal",
        m,
        ProbabilityRecipe(event_runoff_reversal(m), None, m * (m - 1), 1, numerator_reduced=runoff_reduced_system(m)),
        period=12,
        description="the plurality winner loses the runoff against the runner-up",
    )


PRESETS: dict[str, Callable[[int], Event]] = {
    "condorcet-winner": _condorcet_winner,
    "condorcet-paradox": _condorcet_paradox,
    "condorcet-efficiency-violation": lambda m: _efficiency(m, False),
    "condorcet-efficiency": lambda m: _efficiency(m, True),
    "runoff-reversal": _runoff,
}


def preset(name: str, m: int) -> Event:
    try:
        build = PRESETS[name]
    except KeyError:
        raise EventError(f"unknown event preset {name!r}; known: {', '.join(PRESETS)}") from None
    if m < 2 or (name == "runoff-reversal" and m < 3):
        raise EventError(f"preset {name!r} is not defined for m={m}")
    if name.startswith("condorcet-efficiency") and m < 3:
        raise EventError("Condorcet efficiency needs at least three candidates")
    return build(m)


def resolve_event(name_or_path: str, m: int | None = None) -> Event:
    """A preset name (needs ``m``) or a path to a JSON event file."""
    if name_or_path in PRESETS:
        if m is None:
            raise EventError(f"preset {name_or_path!r} needs --m")
        return preset(name_or_path, m)
    path = Path(name_or_path)
    if not path.exists():
        raise EventError(f"{name_or_path!r} is neither a preset nor an event file")
    system = load_event_file(path)
    file_m = len(system.labels[0]) if system.labels else None
    if m is not None and file_m is not None and m != file_m:
        raise EventError(f"--m {m} disagrees with m={file_m} in {path}")
    return Event(path.stem, file_m, ProbabilityRecipe(system), description=f"custom event from {path}")
