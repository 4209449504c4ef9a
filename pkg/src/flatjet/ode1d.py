"""One variable: ``f^(n) + a_{n-1} f^(n-1) + ... + a_0 f = g`` with zero Cauchy data.

Solved degree by degree on jets.  Flat data gives a flat solution, which is
the contrast with dimension two and higher.
"""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

from .jets import Jet
from .operator import DiffOperator
from .scalar import ZERO, Scalar


@dataclass(frozen=True)
class OdeProblem:
    order: int
    coeffs: tuple[Jet, ...]  # a_0 .. a_{n-1}
    data: Jet
    trunc_degree: int

    def __post_init__(self):
        if self.order < 1:
            raise ValueError("order must be positive")
        if len(self.coeffs) != self.order:
            raise ValueError(f"expected {self.order} coefficient jets a_0..a_{self.order - 1}")
        for j in (*self.coeffs, self.data):
            if j.dim != 1:
                raise ValueError("all jets must be one-dimensional")
            if j.trunc_degree != self.trunc_degree:
                raise ValueError("all jets must share trunc_degree")
        if self.trunc_degree < self.order:
            raise ValueError("trunc_degree must be at least the order")

    def operator(self) -> DiffOperator:
        """The same equation as a generic 1-D ``DiffOperator`` (used as an independent check)."""
        N = self.trunc_degree
        terms = {(self.order,): Jet.constant(1, 1, N)}
        for j, a in enumerate(self.coeffs):
            terms[(j,)] = a
        return DiffOperator(1, self.order, terms)


def ode_jet_solve(problem: OdeProblem) -> Jet:
    n = problem.order
    N = problem.trunc_degree
    a = [[c[(d,)] for d in range(N + 1)] for c in problem.coeffs]
    g = [problem.data[(d,)] for d in range(N + 1)]
    f = [ZERO] * (N + 1)

    def deriv_coeff(j: int, s: int) -> Scalar:
        # coefficient of x^s in f^(j)
        idx = s + j
        if idx > N or not f[idx]:
            return ZERO
        return f[idx] * math.perm(idx, j)

    # degree-r coefficient of f^(n) is f[r+n] (r+n)!/r!; it only involves f up to degree r+n-1
    for r in range(N - n + 1):
        rhs = g[r]
        for j in range(n):
            for s in range(r + 1):
                if a[j][r - s]:
                    rhs = rhs - a[j][r - s] * deriv_coeff(j, s)
        f[r + n] = rhs / math.perm(r + n, n)
    return Jet(1, N, {(d,): c for d, c in enumerate(f) if c})


def problem_from_constants(coeffs: Sequence, data: Jet) -> OdeProblem:
    """Constant-coefficient problem; ``coeffs`` lists ``a_0 .. a_{n-1}``."""
    N = data.trunc_degree
    return OdeProblem(
        len(coeffs),
        tuple(Jet.constant(c, 1, N) for c in coeffs),
        data,
        N,
    )

