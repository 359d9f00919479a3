"""Exact integration of monomials over simplices and sliced polytopes.

Two independent simplex integrators are provided:

* ``"barycentric"`` substitutes ``z = sum_j lambda_j v_j``, expands the product
  in the barycentric variables with like terms merged, and applies
  ``int lambda^a = vol * (D-1)! * a! / (|a| + D - 1)!``;
* ``"linear-forms"`` writes the monomial as a signed sum of powers of linear
  forms and uses ``int l^M = vol * M! (D-1)! / (M+D-1)! * h_M(l(v_1), ..., l(v_D))``
  with ``h_M`` the complete homogeneous symmetric polynomial.

The second is much faster for high degree and is the default.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from itertools import product

from .counting import ProbabilityRecipe, UndefinedProbabilityError
from .geometry import DegenerateGeometryError, Polytope, Simplex, triangulate, vertex_enumeration
from .numerics import Monomial

__all__ = [
    "Monomial",
    "integrate_monomial_simplex",
    "integrate_monomial_polytope",
    "limiting_probability",
    "event_integral",
]

METHODS = ("linear-forms", "barycentric")


def _scaled_vertices(simplex: Simplex):
    """Integer points ``u_j = T * v_j`` sharing one denominator ``T``."""
    sums = [sum(r) for r in simplex.rays]
    T = math.lcm(*sums)
    return [tuple(x * (T // s) for x in r) for r, s in zip(simplex.rays, sums)], T


def _dirichlet_prefactor(simplex: Simplex, M: int) -> Fraction:
    D = simplex.D
    vol = simplex.volume
    if vol == 0:
        raise DegenerateGeometryError("degenerate simplex")
    return vol * Fraction(math.factorial(D - 1), math.factorial(M + D - 1))


def _barycentric_sum(points, exponents) -> int:
    """``sum_a a! [lambda^a] prod_i (sum_j u_ji lambda_j)^e_i`` with merged terms."""
    D = len(points)
    poly = {(0,) * D: 1}
    for i, e in enumerate(exponents):
        coeffs = [p[i] for p in points]
        for _ in range(e):
            nxt: dict = {}
            for alpha, c in poly.items():
                for j, u in enumerate(coeffs):
                    if u:
                        beta = alpha[:j] + (alpha[j] + 1,) + alpha[j + 1:]
                        nxt[beta] = nxt.get(beta, 0) + c * u
            poly = nxt
    return sum(c * math.prod(math.factorial(a) for a in alpha) for alpha, c in poly.items())


def _complete_homogeneous(values, M: int) -> int:
    h = [1] + [0] * M
    for x in values:
        if x:
            for k in range(1, M + 1):
                h[k] += x * h[k - 1]
    return h[M]


def _linear_forms_sum(points, exponents) -> int:
    """``M! * sum_a a! [lambda^a] ...`` computed via power-of-linear-forms."""
    M = sum(exponents)
    support = [i for i, e in enumerate(exponents) if e]
    if not support:
        return 1
    # x^e = 1/M! sum_{0<=p<=e} (-1)^(M-|p|) prod binom(e_i, p_i) <p, x>^M
    cols = [[u[i] for u in points] for i in support]
    es = [exponents[i] for i in support]
    total = 0
    for ps in product(*(range(e + 1) for e in es)):
        k = sum(ps)
        if k == 0:
            continue
        coeff = math.prod(math.comb(e, p) for e, p in zip(es, ps))
        if (M - k) % 2:
            coeff = -coeff
        values = [0] * len(points)
        for p, col in zip(ps, cols):
            if p:
                for j, u in enumerate(col):
                    values[j] += p * u
        total += coeff * _complete_homogeneous(values, M)
    return total


def integrate_monomial_simplex(s: Simplex, m: Monomial, method: str = "linear-forms") -> Fraction:
    """``int_s coefficient * prod z_i^e_i`` under the drop-last-coordinate measure."""
    if len(m.exponents) != s.D:
        raise ValueError("monomial and simplex live in different dimensions")
    M = m.degree
    pre = _dirichlet_prefactor(s, M)
    if m.coefficient == 0:
        return Fraction(0)
    points, T = _scaled_vertices(s)
    if method == "barycentric":
        raw = _barycentric_sum(points, m.exponents)
    elif method == "linear-forms":
        # the M! from h_M cancels the 1/M! of the decomposition
        raw = _linear_forms_sum(points, m.exponents)
    else:
        raise ValueError(f"unknown method {method!r}; expected one of {METHODS}")
    return m.coefficient * pre * Fraction(raw, T ** M)


def _integrate_batch(args) -> Fraction:
    simplices, monomial, method = args
    return sum((integrate_monomial_simplex(s, monomial, method) for s in simplices), Fraction(0))


def integrate_monomial_polytope(
    p: Polytope,
    m: Monomial,
    workers: int = 1,
    method: str = "linear-forms",
    triangulation: list[Simplex] | None = None,
) -> Fraction:
    """Integral over the slice; raises DegenerateGeometryError if it is not full-dimensional."""
    pieces = triangulation if triangulation is not None else triangulate(vertex_enumeration(p), p)
    if workers <= 1 or len(pieces) < 2 * workers:
        return _integrate_batch((pieces, m, method))
    batches = [(pieces[w::workers], m, method) for w in range(workers)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        partials = list(pool.map(_integrate_batch, batches))
    return sum(partials, Fraction(0))


def event_integral(reduced, workers: int = 1, method: str = "linear-forms") -> Fraction:
    """Integral of the weight's leading term over a reduced system's closed slice.

    Equals the leading coefficient of the event's counting quasi-polynomial.
    """
    return integrate_monomial_polytope(
        Polytope.from_system(reduced.base), reduced.weight.leading_term, workers, method
    )


def limiting_probability(recipe: ProbabilityRecipe, workers: int = 1, reduced: bool = True) -> Fraction:
    """``lim Prob(n)`` as a ratio of exact integrals (or unreduced relative volumes)."""
    if reduced:
        num = event_integral(recipe.reduced_numerator(), workers)
        den = event_integral(recipe.reduced_denominator(), workers)
    else:
        one = lambda sys: Monomial((0,) * sys.d)
        num = integrate_monomial_polytope(Polytope.from_system(recipe.numerator), one(recipe.numerator), workers)
        den_sys = recipe.denominator_system
        den = integrate_monomial_polytope(Polytope.from_system(den_sys), one(den_sys), workers)
    if den == 0:
        raise UndefinedProbabilityError("denominator integral vanishes")
    return recipe.assemble(num, den)
