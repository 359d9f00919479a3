"""Command-line front end.

    iacprob limit --event condorcet-winner --m 3
    iacprob count --event runoff-reversal --m 4 --n 5 --reduced
    iacprob quasipoly --event condorcet-winner --m 3

Exit status is 2 on bad input and 3 when the geometry is empty or degenerate.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction

from .counting import (
    DEFAULT_PERIODS,
    PeriodTooSmallError,
    UndefinedProbabilityError,
    count_points,
    find_period,
    interpolate_quasipolynomial,
    probability,
    weighted_count,
)
from .geometry import DegenerateGeometryError, Polytope, relative_volume
from .integration import event_integral, limiting_probability
from .numerics import format_rational, to_decimal
from .presets import Event, resolve_event
from .voting import EventError

EXIT_OK, EXIT_BAD_INPUT, EXIT_GEOMETRY = 0, 2, 3


@dataclass
class RunReport:
    command: str
    inputs: dict
    result: object
    digits: int = 10
    reduction: dict = field(default_factory=dict)
    derived: dict = field(default_factory=dict)
    details: list[str] = field(default_factory=list)
    ms: int = 0

    def _show(self, value) -> str:
        if isinstance(value, Fraction):
            if value.denominator == 1:
                return str(value.numerator)
            return f"{format_rational(value)} ({to_decimal(value, self.digits)})"
        if isinstance(value, int):
            return str(value)
        return str(value)

    def decimal(self) -> str | None:
        if isinstance(self.result, (Fraction, int)):
            return to_decimal(self.result, self.digits)
        return None

    def text(self) -> str:
        lines = [self._show(self.result)]
        for name, value in self.derived.items():
            lines.append(f"{name}: {self._show(value)}")
        lines.extend(self.details)
        lines.append(f"command: {self.command} " + " ".join(f"{k}={v}" for k, v in self.inputs.items()))
        if self.reduction:
            r = self.reduction
            lines.append(
                f"reduction: D={r['D']} (from d={r['d']}), group sizes {tuple(r['group_sizes'])}, "
                f"weight degree {r['weight_degree']}"
            )
        lines.append(f"time: {self.ms} ms")
        return "\n".join(lines)

    def json(self) -> str:
        def enc(v):
            if isinstance(v, Fraction):
                return format_rational(v)
            return v

        payload = {
            "command": self.command,
            "inputs": self.inputs,
            "result": enc(self.result) if not isinstance(self.result, int) else str(self.result),
            "decimal": self.decimal(),
            "reduction": self.reduction,
            "derived": {k: enc(v) for k, v in self.derived.items()},
            "details": self.details,
            "ms": self.ms,
        }
        return json.dumps(payload)


def _reduction_for(event: Event) -> dict:
    return event.recipe.reduced_numerator().summary()


def _cmd_count(event: Event, args) -> RunReport:
    recipe = event.recipe
    if args.reduced:
        value = weighted_count(recipe.reduced_numerator(), args.n, args.threads)
    else:
        value = count_points(recipe.numerator, args.n, args.threads)
    return RunReport("count", {}, value, reduction=_reduction_for(event) if args.reduced else {})


def _cmd_prob(event: Event, args) -> RunReport:
    value = probability(event.recipe, args.n, reduced=True, workers=args.threads)
    return RunReport("prob", {}, value, derived=event.derived(value), reduction=_reduction_for(event))


def _cmd_limit(event: Event, args) -> RunReport:
    value = limiting_probability(event.recipe, workers=args.threads)
    return RunReport("limit", {}, value, derived=event.derived(value), reduction=_reduction_for(event))


def _cmd_volume(event: Event, args) -> RunReport:
    recipe = event.recipe
    if args.unreduced:
        value = relative_volume(Polytope.from_system(recipe.numerator))
        if value == 0:
            raise DegenerateGeometryError("numerator polytope is empty or lower-dimensional")
        return RunReport("volume", {"unreduced": True}, value)
    value = event_integral(recipe.reduced_numerator(), args.threads)
    return RunReport("volume", {"unreduced": False}, value, reduction=_reduction_for(event))


def _cmd_reduce(event: Event, args) -> RunReport:
    red = event.recipe.reduced_numerator()
    labels = event.recipe.numerator.labels
    details = ["groups:"]
    for name, group in zip(red.names, red.grouping.partition):
        members = ", ".join(labels[j] for j in group) if labels else ", ".join(map(str, group))
        details.append(f"  {name} [{len(group)}]: {members}")
    details.append("reduced rows:")
    for row, strict in zip(red.base.rows, red.base.strict):
        terms = " ".join(f"{'+' if c > 0 else '-'}{'' if abs(c) == 1 else abs(c)}{n}" for c, n in zip(row, red.names) if c)
        details.append(f"  {terms} {'>' if strict else '>='} 0")
    lt = red.weight.leading_term
    lt_str = lt.as_polynomial().to_string(list(red.names))
    details.append(f"leading term: {lt_str}")
    result = red.weight.to_string(red.names)
    return RunReport("reduce", {}, result, details=details, reduction=red.summary())


def _cmd_quasipoly(event: Event, args) -> RunReport:
    red = event.recipe.reduced_numerator()
    degree = red.grouping.d - 1
    sampler = lambda n: weighted_count(red, n)
    period = args.period or event.period
    if period:
        q = interpolate_quasipolynomial(sampler, degree, period)
    else:
        q = find_period(sampler, degree, DEFAULT_PERIODS)
    details = q.residue_strings()
    return RunReport(
        "quasipoly",
        {"period": q.period, "degree": degree},
        q.fractional_form(),
        details=details,
        reduction=red.summary(),
    )


COMMANDS = {
    "count": _cmd_count,
    "prob": _cmd_prob,
    "limit": _cmd_limit,
    "volume": _cmd_volume,
    "reduce": _cmd_reduce,
    "quasipoly": _cmd_quasipoly,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="iacprob", description=__doc__.splitlines()[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("event_arg", nargs="?", metavar="EVENT", help="same as --event")
    common.add_argument("--event", help="preset name or path to a JSON event file")
    common.add_argument("--m", type=int, help="number of candidates")
    common.add_argument("--threads", type=int, default=os.cpu_count() or 1, help="worker processes")
    common.add_argument("--json", action="store_true", help="emit one JSON object")
    common.add_argument("--digits", type=int, default=10, help="decimal places in renderings")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("count", parents=[common], help="lattice points at n voters")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--reduced", action="store_true", help="weighted count on the reduced system")
    p = sub.add_parser("quasipoly", parents=[common], help="fit the counting quasi-polynomial")
    p.add_argument("--period", type=int)
    p = sub.add_parser("prob", parents=[common], help="exact probability at n voters")
    p.add_argument("--n", type=int, required=True)
    sub.add_parser("limit", parents=[common], help="limiting probability as n grows")
    sub.add_parser("reduce", parents=[common], help="equal-column grouping and weight")
    p = sub.add_parser("volume", parents=[common], help="relative volume of the event polytope")
    p.add_argument("--unreduced", action="store_true")
    return parser


def run(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.event is None:
        args.event = args.event_arg
    elif args.event_arg is not None and args.event_arg != args.event:
        parser.error("event given twice")
    if args.event is None:
        parser.error("an event is required (--event NAME or a positional EVENT)")
    if args.threads < 1:
        parser.error("--threads must be positive")
    if getattr(args, "n", 0) is not None and getattr(args, "n", 0) < 0:
        parser.error("--n must be nonnegative")
    start = time.perf_counter()
    try:
        event = resolve_event(args.event, args.m)
        report = COMMANDS[args.command](event, args)
    except (EventError, PeriodTooSmallError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except (DegenerateGeometryError, UndefinedProbabilityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GEOMETRY
    report.inputs = {"event": args.event, "m": event.m, **({"n": args.n} if hasattr(args, "n") else {}), **report.inputs}
    report.digits = args.digits
    report.ms = int((time.perf_counter() - start) * 1000)
    print(report.json() if args.json else report.text(), file=out)
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
