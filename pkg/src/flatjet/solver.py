"""Exact construction of solutions ``u_k = p_k + v_k`` of ``L u = 0`` with ``u_k = p_k`` on ``x_n = 0``.

The correction ``v_k`` is the fixed point of

    D^beta v_{nu+1} = sum_alpha a_alpha D^alpha v_nu - L p_k,      v_0 = 0,

written for the canonical form ``L = D^beta - sum a_alpha D^alpha``.  Each step
inverts ``D^beta`` monomial by monomial and the differences
``w_nu = v_{nu+1} - v_nu`` gain at least one power of ``x_n`` per step, so at
a fixed truncation degree the iteration stops after finitely many steps with
an exactly zero difference.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import NoStabilization, ReliabilityExhausted, SolveError
from .jets import INF, Jet, jet_derive, jet_linear_combination, jet_mul, jet_ord
from .jets import jet_restrict_last_zero
from .operator import CanonicalOperator, DiffOperator, canonical_form, op_apply
from .scalar import ONE


@dataclass(frozen=True)
class SolverConfig:
    trunc_degree: int
    max_iterations: int | None = None
    radii: tuple[Fraction, ...] | None = None
    normalize: bool = False

    def __post_init__(self):
        if self.trunc_degree < 0:
            raise ValueError("trunc_degree must be natural")
        if self.radii is not None:
            radii = tuple(Fraction(r) for r in self.radii)
            if any(not 0 < r < 1 for r in radii):
                raise ValueError("polydisc radii must lie in (0, 1)")
            object.__setattr__(self, "radii", radii)

    def iterations_for(self, order: int) -> int:
        if self.trunc_degree < order:
            raise ReliabilityExhausted(f"trunc_degree {self.trunc_degree} < operator order {order}")
        if self.max_iterations is not None:
            return self.max_iterations
        return self.trunc_degree - order + 2

    def radii_for(self, dim: int) -> tuple[Fraction, ...]:
        if self.radii is None:
            return (Fraction(1, 2),) * dim
        if len(self.radii) != dim:
            raise ValueError(f"expected {dim} polydisc radii, got {len(self.radii)}")
        return self.radii


@dataclass(frozen=True)
class SolveTrace:
    iterates: list[Jet]
    differences: list[Jet]
    stabilized_at: int
    order: int

    def xn_orders(self) -> list[float]:
        """Minimal ``x_n`` exponent of each difference (``inf`` for zero)."""
        return [xn_adic_order(w) for w in self.differences]


def xn_adic_order(f: Jet):
    if f.is_zero():
        return INF
    return min(g[-1] for g in f.coeffs)


def solve_dbeta(rhs: Jet, m: int) -> Jet:
    """The solution of ``D_{x_n}^m v = rhs`` whose monomials all carry ``x_n^j`` with ``j >= m``.

    Coefficient ``c`` of ``x^gamma`` becomes ``c * gamma_n! / (gamma_n + m)!`` on
    ``x^(gamma + beta)``; reliability rises by ``m``.
    """
    if m < 1:
        raise ValueError("order m must be positive")
    out = {}
    for gamma, c in rhs.coeffs.items():
        gn = gamma[-1]
        out[gamma[:-1] + (gn + m,)] = c * Fraction(1, math.perm(gn + m, m))
    return Jet._wrap(rhs.dim, rhs.trunc_degree + m, out)


def _check_boundary_polynomial(p: Jet, N: int) -> Jet:
    if p.is_zero():
        raise ValueError("boundary polynomial p_k must be nonzero")
    degrees = {sum(g) for g in p.coeffs}
    if len(degrees) != 1:
        raise ValueError(f"p_k must be homogeneous, found degrees {sorted(degrees)}")
    if any(g[-1] for g in p.coeffs):
        raise ValueError("p_k must not depend on the last variable x_n")
    k = degrees.pop()
    if k > N:
        raise ReliabilityExhausted(f"p_k has degree {k} > trunc_degree {N}")
    if p.trunc_degree < N:
        # p_k is a polynomial, so it is exact in every degree
        p = Jet(p.dim, N, p.coeffs)
    return p.truncate(N)


def picard_iterate(canon: CanonicalOperator, p_k: Jet, cfg: SolverConfig) -> SolveTrace:
    N = cfg.trunc_degree
    m = canon.order
    if p_k.dim != canon.dim:
        raise ValueError(f"p_k has dim {p_k.dim}, operator has dim {canon.dim}")
    max_iter = cfg.iterations_for(m)
    if canon.trunc_degree < N - m:
        raise ReliabilityExhausted(
            f"operator coefficients reliable through {canon.trunc_degree}, need {N - m}"
        )
    p = _check_boundary_polynomial(p_k, N)
    forcing = op_apply(canon.as_operator(), p)  # L p_k for the normalized operator

    v = Jet.zero(canon.dim, N)
    iterates = [v]
    differences = []
    for nu in range(max_iter):
        pieces = [(-ONE, forcing)]
        for alpha, coeff in canon.remainder.items():
            pieces.append((ONE, jet_mul(coeff, jet_derive(v, alpha))))
        v_next = solve_dbeta(jet_linear_combination(pieces), m)
        w = v_next - v
        iterates.append(v_next)
        differences.append(w)
        if w.is_zero():
            return SolveTrace(iterates, differences, nu, m)
        v = v_next
    raise NoStabilization(f"recursion did not stabilize within {max_iter} iterations")


def majorant_bound(L: DiffOperator, p_k: Jet, radii) -> Fraction:
    """Rational majorant ``sum |c_gamma| R^gamma`` of ``L p_k`` over the polydisc of radii ``R``.

    ``|c|`` is bounded by ``|re| + |im|``.  Only the truncated coefficients are counted.
    """
    radii = [Fraction(r) for r in radii]
    total = Fraction(0)
    for gamma, c in op_apply(L, p_k).coeffs.items():
        mono = Fraction(1)
        for r, e in zip(radii, gamma):
            mono *= r**e
        total += c.sup_bound() * mono
    return total


def normalized_pk(L: DiffOperator, p_k: Jet, cfg: SolverConfig) -> Jet:
    """Rescale ``p_k`` so that the majorant of ``L p_k`` equals 1 (identity if it is 0)."""
    p = _check_boundary_polynomial(p_k, cfg.trunc_degree)
    bound = majorant_bound(L, p, cfg.radii_for(L.dim))
    if not bound:
        return p
    return p * (1 / bound)


def solve_uk(L: DiffOperator, p_k: Jet, cfg: SolverConfig) -> tuple[Jet, SolveTrace]:
    """Build ``u_k`` and return it with the recursion trace; postconditions are checked."""
    canon = canonical_form(L)
    trace = picard_iterate(canon, p_k, cfg)
    p = _check_boundary_polynomial(p_k, cfg.trunc_degree)
    u = p + trace.iterates[-1]
    k = sum(next(iter(p.coeffs)))

    residual = op_apply(L, u)
    if not residual.is_zero():
        raise SolveError(f"L u_{k} is not zero through degree {residual.trunc_degree}: {residual}")
    if jet_ord(u) != k:
        raise SolveError(f"u_{k} vanishes to order {jet_ord(u)}, expected {k}")
    if jet_restrict_last_zero(u) != p:
        raise SolveError(f"u_{k} does not restrict to p_{k} on x_n = 0")
    return u, trace


def build_uk(L: DiffOperator, p_k: Jet, cfg: SolverConfig) -> Jet:
    return solve_uk(L, p_k, cfg)[0]
