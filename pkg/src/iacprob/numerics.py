"""Exact rational linear algebra and polynomial containers.

Everything value-bearing is an ``int`` or a :class:`fractions.Fraction`.
"""
from __future__ import annotations

import math
from decimal import ROUND_HALF_EVEN, Decimal, localcontext
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

Rational = Fraction

__all__ = [
    "Rational",
    "SingularSystemError",
    "to_decimal",
    "format_rational",
    "solve_linear_system",
    "integer_rank",
    "integer_det",
    "integer_kernel_vector",
    "SparsePolynomial",
    "QuasiPolynomial",
    "Monomial",
]


class SingularSystemError(ValueError):
    """Raised when a linear system has no unique solution."""


def format_rational(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def to_decimal(q, digits: int = 10) -> str:
    """Render ``q`` with ``digits`` places after the point (display only)."""
    q = Fraction(q)
    with localcontext() as ctx:
        ctx.prec = digits + len(str(abs(q.numerator) // q.denominator)) + 10
        value = Decimal(q.numerator) / Decimal(q.denominator)
        return str(value.quantize(Decimal(1).scaleb(-digits), rounding=ROUND_HALF_EVEN))


def solve_linear_system(A: Sequence[Sequence], b: Sequence) -> list[Fraction]:
    """Solve ``A x = b`` exactly.

    ``A`` may have more rows than columns as long as the system is consistent
    and has full column rank. Raises :class:`SingularSystemError` otherwise.
    """
    rows = len(A)
    if rows != len(b):
        raise ValueError("A and b have incompatible shapes")
    cols = len(A[0]) if rows else 0
    M = [[Fraction(v) for v in A[i]] + [Fraction(b[i])] for i in range(rows)]
    if any(len(r) != cols + 1 for r in M):
        raise ValueError("ragged matrix")

    pivot_row = 0
    for c in range(cols):
        p = next((r for r in range(pivot_row, rows) if M[r][c] != 0), None)
        if p is None:
            raise SingularSystemError("no unique solution: rank deficient")
        M[pivot_row], M[p] = M[p], M[pivot_row]
        piv = M[pivot_row][c]
        prow = [v / piv for v in M[pivot_row]]
        M[pivot_row] = prow
        for r in range(rows):
            if r != pivot_row and M[r][c] != 0:
                f = M[r][c]
                M[r] = [x - f * y for x, y in zip(M[r], prow)]
        pivot_row += 1
    for r in range(pivot_row, rows):
        if M[r][cols] != 0:
            raise SingularSystemError("no unique solution: inconsistent system")
    return [M[i][cols] for i in range(cols)]


def _bareiss(M: list[list[int]]) -> tuple[list[list[int]], int, int]:
    """Fraction-free elimination in place; returns (matrix, rank, sign)."""
    rows = len(M)
    cols = len(M[0]) if rows else 0
    prev = 1
    rank = 0
    sign = 1
    for c in range(cols):
        if rank == rows:
            break
        p = next((r for r in range(rank, rows) if M[r][c] != 0), None)
        if p is None:
            continue
        if p != rank:
            M[rank], M[p] = M[p], M[rank]
            sign = -sign
        piv = M[rank][c]
        for r in range(rank + 1, rows):
            mr = M[r]
            f = mr[c]
            pr = M[rank]
            for j in range(c + 1, cols):
                mr[j] = (mr[j] * piv - f * pr[j]) // prev
            mr[c] = 0
        prev = piv
        rank += 1
    return M, rank, sign


def integer_rank(M: Sequence[Sequence[int]]) -> int:
    if not M:
        return 0
    return _bareiss([list(map(int, r)) for r in M])[1]


def integer_det(M: Sequence[Sequence[int]]) -> int:
    n = len(M)
    if n == 0:
        return 1
    work, rank, sign = _bareiss([list(map(int, r)) for r in M])
    if rank < n:
        return 0
    return sign * work[n - 1][n - 1]


def integer_kernel_vector(M: Sequence[Sequence[int]]) -> list[int]:
    """Primitive integer vector spanning the kernel of a rank ``c-1`` matrix.

    ``M`` has ``c`` columns; raises ValueError when the kernel is not a line.
    """
    cols = len(M[0])
    F = [[Fraction(v) for v in r] for r in M]
    pivots = []
    r = 0
    for c in range(cols):
        p = next((i for i in range(r, len(F)) if F[i][c] != 0), None)
        if p is None:
            continue
        F[r], F[p] = F[p], F[r]
        piv = F[r][c]
        F[r] = [v / piv for v in F[r]]
        for i in range(len(F)):
            if i != r and F[i][c] != 0:
                f = F[i][c]
                F[i] = [x - f * y for x, y in zip(F[i], F[r])]
        pivots.append(c)
        r += 1
    free = [c for c in range(cols) if c not in pivots]
    if len(free) != 1:
        raise ValueError("kernel is not one-dimensional")
    fc = free[0]
    x = [Fraction(0)] * cols
    x[fc] = Fraction(1)
    for i, pc in enumerate(pivots):
        x[pc] = -F[i][fc]
    den = math.lcm(*(v.denominator for v in x))
    ints = [int(v * den) for v in x]
    g = math.gcd(*ints)
    return [v // g for v in ints]


class SparsePolynomial:
    """Multivariate polynomial over Q stored as ``{exponents: coefficient}``."""

    __slots__ = ("nvars", "_terms")

    def __init__(self, nvars: int, terms: Mapping[tuple, object] | Iterable = ()):
        self.nvars = nvars
        clean: dict[tuple, Fraction] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for exps, coeff in items:
            exps = tuple(int(e) for e in exps)
            if len(exps) != nvars or any(e < 0 for e in exps):
                raise ValueError(f"bad exponent vector {exps!r}")
            c = clean.get(exps, Fraction(0)) + Fraction(coeff)
            if c:
                clean[exps] = c
            else:
                clean.pop(exps, None)
        self._terms = clean

    @classmethod
    def constant(cls, nvars: int, c=1) -> SparsePolynomial:
        return cls(nvars, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> SparsePolynomial:
        e = [0] * nvars
        e[i] = 1
        return cls(nvars, {tuple(e): 1})

    @classmethod
    def binomial(cls, nvars: int, i: int, k: int) -> SparsePolynomial:
        """``binom(N_i + k - 1, k - 1)`` as a polynomial in ``N_i``."""
        if k < 1:
            raise ValueError("group size must be positive")
        x = cls.variable(nvars, i)
        p = cls.constant(nvars)
        for j in range(1, k):
            p = p * (x + j) * Fraction(1, j)
        return p

    @property
    def terms(self) -> dict[tuple, Fraction]:
        return dict(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        if not self._terms:
            return -1
        return max(sum(e) for e in self._terms)

    def coefficient(self, exps) -> Fraction:
        return self._terms.get(tuple(exps), Fraction(0))

    def leading_part(self) -> SparsePolynomial:
        if not self._terms:
            raise ValueError("zero polynomial has no leading part")
        deg = self.degree
        return SparsePolynomial(self.nvars, {e: c for e, c in self._terms.items() if sum(e) == deg})

    def __call__(self, point: Sequence) -> Fraction:
        total = Fraction(0)
        for exps, c in self._terms.items():
            term = c
            for x, e in zip(point, exps):
                if e:
                    term *= Fraction(x) ** e
            total += term
        return total

    def _coerce(self, other) -> SparsePolynomial:
        if isinstance(other, SparsePolynomial):
            if other.nvars != self.nvars:
                raise ValueError("variable count mismatch")
            return other
        return SparsePolynomial.constant(self.nvars, other)

    def __add__(self, other) -> SparsePolynomial:
        other = self._coerce(other)
        return SparsePolynomial(self.nvars, list(self._terms.items()) + list(other._terms.items()))

    __radd__ = __add__

    def __neg__(self) -> SparsePolynomial:
        return SparsePolynomial(self.nvars, {e: -c for e, c in self._terms.items()})

    def __sub__(self, other) -> SparsePolynomial:
        return self + (-self._coerce(other))

    def __rsub__(self, other) -> SparsePolynomial:
        return self._coerce(other) - self

    def __mul__(self, other) -> SparsePolynomial:
        if not isinstance(other, SparsePolynomial):
            c = Fraction(other)
            return SparsePolynomial(self.nvars, {e: v * c for e, v in self._terms.items()})
        other = self._coerce(other)
        out: dict[tuple, Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return SparsePolynomial(self.nvars, out)

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, SparsePolynomial):
            return self.nvars == other.nvars and self._terms == other._terms
        return NotImplemented

    def __hash__(self):
        return hash((self.nvars, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"SparsePolynomial({self.nvars}, {self._terms!r})"

    def to_string(self, names: Sequence[str] | None = None) -> str:
        names = names or [f"x{i}" for i in range(self.nvars)]
        if not self._terms:
            return "0"
        parts = []
        for exps in sorted(self._terms, key=lambda e: (-sum(e), [-x for x in e])):
            c = self._terms[exps]
            factors = []
            for name, e in zip(names, exps):
                if e == 1:
                    factors.append(name)
                elif e > 1:
                    factors.append(f"{name}^{e}")
            if not factors:
                parts.append(format_rational(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append(f"{format_rational(c)}*" + "*".join(factors))
        return " + ".join(parts)


class QuasiPolynomial:
    """Univariate quasi-polynomial: one polynomial per residue class mod ``period``.

    ``polys[r]`` holds coefficients in increasing degree for ``n = r (mod period)``.
    """

    __slots__ = ("period", "polys")

    def __init__(self, polys: Sequence[Sequence]):
        if not polys:
            raise ValueError("need at least one residue class")
        width = max(len(p) for p in polys)
        self.period = len(polys)
        self.polys = tuple(
            tuple(Fraction(c) for c in p) + (Fraction(0),) * (width - len(p)) for p in polys
        )

    @property
    def degree(self) -> int:
        deg = -1
        for p in self.polys:
            for i, c in enumerate(p):
                if c:
                    deg = max(deg, i)
        return deg

    def __call__(self, n: int) -> Fraction:
        coeffs = self.polys[n % self.period]
        acc = Fraction(0)
        for c in reversed(coeffs):
            acc = acc * n + c
        return acc

    def leading_coefficients(self) -> list[Fraction]:
        d = self.degree
        return [p[d] for p in self.polys]

    def __eq__(self, other) -> bool:
        if isinstance(other, QuasiPolynomial):
            return self.polys == other.polys
        return NotImplemented

    def __repr__(self) -> str:
        return f"QuasiPolynomial({[list(map(format_rational, p)) for p in self.polys]})"

    def residue_strings(self, var: str = "n") -> list[str]:
        out = []
        for r, p in enumerate(self.polys):
            poly = SparsePolynomial(1, {(i,): c for i, c in enumerate(p)})
            out.append(f"n = {r} mod {self.period}: {poly.to_string([var])}")
        return out

    def fractional_coefficients(self) -> list[list[Fraction]]:
        """Coefficient of ``n^j`` as a polynomial in ``{n / period}``.

        Entry ``[j][t]`` multiplies ``{n/period}^t`` in the coefficient of ``n^j``.
        """
        k = self.period
        nodes = [Fraction(r, k) for r in range(k)]
        V = [[x ** t for t in range(k)] for x in nodes]
        width = len(self.polys[0])
        return [solve_linear_system(V, [self.polys[r][j] for r in range(k)]) for j in range(width)]

    def fractional_form(self) -> str:
        """Closed form using the fractional-part bracket ``{ 1/k * n }``."""
        k = self.period
        frac = f"{{ 1/{k} * n }}"
        lines = []
        fc = self.fractional_coefficients()
        for j in range(len(fc) - 1, -1, -1):
            b = fc[j]
            if not any(b):
                continue
            power = "" if j == 0 else (" * n" if j == 1 else f" * n^{j}")
            if not any(b[1:]):
                lines.append(f"{format_rational(b[0])}{power}")
                continue
            pieces = []
            for t in range(len(b) - 1, 0, -1):
                if b[t]:
                    bracket = frac if t == 1 else f"{frac}^{t}"
                    pieces.append(f"{format_rational(b[t])} * {bracket}")
            pieces.append(format_rational(b[0]))
            lines.append(f"( {' + '.join(pieces)} ){power}")
        if not lines:
            return "0"
        return "\n".join(("   " if i == 0 else " + ") + line for i, line in enumerate(lines))


class Monomial:
    """``coefficient * prod(z_i ** exponents[i])``."""

    __slots__ = ("exponents", "coefficient")

    def __init__(self, exponents: Sequence[int], coefficient=1):
        self.exponents = tuple(int(e) for e in exponents)
        if any(e < 0 for e in self.exponents):
            raise ValueError("exponents must be nonnegative")
        self.coefficient = Fraction(coefficient)

    @property
    def degree(self) -> int:
        return sum(self.exponents)

    def __mul__(self, c) -> Monomial:
        return Monomial(self.exponents, self.coefficient * Fraction(c))

    __rmul__ = __mul__

    def __eq__(self, other) -> bool:
        if isinstance(other, Monomial):
            return self.exponents == other.exponents and self.coefficient == other.coefficient
        return NotImplemented

    def __hash__(self):
        return hash((self.exponents, self.coefficient))

    def __repr__(self) -> str:
        return f"Monomial({self.exponents}, {format_rational(self.coefficient)})"

    def as_polynomial(self) -> SparsePolynomial:
        return SparsePolynomial(len(self.exponents), {self.exponents: self.coefficient})
