"""Linear differential operators ``L = sum a_alpha D^alpha`` with jet coefficients."""

from __future__ import annotations

import itertools
from collections.abc import Mapping
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import DimensionMismatch, NotEllipticPosition, ReliabilityExhausted
from .jets import Jet, MultiIndex, _check_index, grlex_key, jet_derive, jet_linear_combination
from .jets import jet_mul, jet_reciprocal
from .scalar import ONE, ZERO, Scalar


@dataclass(frozen=True, eq=True)
class DiffOperator:
    dim: int
    order: int
    terms: Mapping[MultiIndex, Jet]

    def __post_init__(self):
        if self.dim < 1 or self.order < 1:
            raise ValueError("operator needs dim >= 1 and order >= 1")
        terms = {}
        truncs = set()
        for alpha, coeff in self.terms.items():
            alpha = _check_index(alpha, self.dim)
            if sum(alpha) > self.order:
                raise ValueError(f"term {alpha} exceeds the operator order {self.order}")
            if not isinstance(coeff, Jet):
                raise TypeError(f"coefficient of {alpha} must be a Jet")
            if coeff.dim != self.dim:
                raise DimensionMismatch(f"coefficient of {alpha} has dim {coeff.dim}")
            truncs.add(coeff.trunc_degree)
            if not coeff.is_zero():
                terms[alpha] = coeff
        if len(truncs) > 1:
            raise ValueError(f"coefficient jets must share trunc_degree, got {sorted(truncs)}")
        if not any(sum(a) == self.order for a in terms):
            raise ValueError(f"no nonzero coefficient of order {self.order}")
        object.__setattr__(self, "terms", dict(sorted(terms.items(), key=lambda t: grlex_key(t[0]))))

    @property
    def trunc_degree(self) -> int:
        return next(iter(self.terms.values())).trunc_degree

    @classmethod
    def from_constants(cls, coeffs: Mapping, dim: int, trunc_degree: int, order: int | None = None):
        """Operator with constant coefficients, e.g. ``{(2, 0): 1, (0, 2): 1}`` for the Laplacian."""
        if order is None:
            order = max(sum(a) for a in coeffs)
        terms = {tuple(a): Jet.constant(c, dim, trunc_degree) for a, c in coeffs.items()}
        return cls(dim, order, terms)

    def scaled(self, c) -> DiffOperator:
        c = Scalar.coerce(c)
        return DiffOperator(self.dim, self.order, {a: j * c for a, j in self.terms.items()})

    def principal_symbol(self, xi) -> Scalar:
        """``sum_{|alpha| = m} a_alpha(0) xi^alpha``."""
        total = ZERO
        origin = (0,) * self.dim
        for alpha, coeff in self.terms.items():
            if sum(alpha) != self.order:
                continue
            mono = ONE
            for x, e in zip(xi, alpha):
                if e:
                    mono = mono * Scalar.coerce(x) ** e
            total = total + coeff[origin] * mono
        return total


def laplacian(dim: int = 2, trunc_degree: int = 64) -> DiffOperator:
    coeffs = {}
    for j in range(dim):
        alpha = [0] * dim
        alpha[j] = 2
        coeffs[tuple(alpha)] = 1
    return DiffOperator.from_constants(coeffs, dim, trunc_degree)


def cauchy_riemann(trunc_degree: int = 64) -> DiffOperator:
    """``d/dx + i d/dy`` on R^2."""
    return DiffOperator.from_constants({(1, 0): 1, (0, 1): Scalar(0, 1)}, 2, trunc_degree)


def op_apply(L: DiffOperator, f: Jet) -> Jet:
    """Apply ``L`` to a jet; the result is reliable through ``f.trunc_degree - m``."""
    if f.dim != L.dim:
        raise DimensionMismatch(f"operator dim {L.dim} vs jet dim {f.dim}")
    if f.trunc_degree < L.order:
        raise ReliabilityExhausted(
            f"order-{L.order} operator applied to a jet reliable only through {f.trunc_degree}"
        )
    target = f.trunc_degree - L.order
    pieces = [(ONE, Jet.zero(L.dim, target))]
    for alpha, coeff in L.terms.items():
        pieces.append((ONE, jet_mul(coeff, jet_derive(f, alpha))))
    return jet_linear_combination(pieces)


# -- ellipticity -----------------------------------------------------------------


@dataclass(frozen=True)
class EllipticityReport:
    sampled_directions: list[tuple[Fraction, ...]]
    symbol_values: list[Scalar]
    failed_direction: tuple[Fraction, ...] | None
    caveat: str = (
        "principal symbol sampled at x = 0 on finitely many rational directions; "
        "this is evidence, not a proof of ellipticity"
    )

    @property
    def passed(self) -> bool:
        return self.failed_direction is None

    @property
    def verdict(self) -> str:
        if self.passed:
            return "passed"
        return "failed(" + ", ".join(str(x) for x in self.failed_direction) + ")"


def _axis_grid(samples: int) -> list[Fraction]:
    # rational parameters in [-1, 1]; together with the homogeneity of the symbol
    # this sweeps the whole sphere up to sign
    return [Fraction(-1) + Fraction(2 * j, samples - 1) for j in range(samples)]


def sphere_directions(dim: int, samples_per_axis: int) -> list[tuple[Fraction, ...]]:
    """Rational points on the unit sphere via inverse stereographic projection."""
    if dim == 1:
        return [(Fraction(1),)]
    grid = _axis_grid(samples_per_axis)
    out = []
    for t in itertools.product(grid, repeat=dim - 1):
        s = sum(x * x for x in t)
        out.append(((1 - s) / (1 + s),) + tuple(2 * x / (1 + s) for x in t))
    return out


def ellipticity_check(L: DiffOperator, samples_per_axis: int = 9) -> EllipticityReport:
    if samples_per_axis < 2:
        raise ValueError("samples_per_axis must be at least 2")
    directions = sphere_directions(L.dim, samples_per_axis)
    values = []
    failed = None
    for xi in directions:
        value = L.principal_symbol(xi)
        values.append(value)
        if failed is None and not value:
            failed = xi
    return EllipticityReport(directions, values, failed)


# -- canonical form ----------------------------------------------------------------


@dataclass(frozen=True)
class CanonicalOperator:
    """``L / a_beta = D^beta - sum remainder[alpha] D^alpha`` with ``beta = (0, ..., 0, m)``."""

    dim: int
    order: int
    beta: MultiIndex
    remainder: Mapping[MultiIndex, Jet]
    leading: Jet = field(compare=False)  # a_beta, kept for reconstruction

    @property
    def trunc_degree(self) -> int:
        return self.leading.trunc_degree

    def as_operator(self, scale: Jet | None = None) -> DiffOperator:
        """Rebuild ``scale * (D^beta - sum remainder D^alpha)`` as a plain operator."""
        N = self.trunc_degree
        one = Jet.constant(1, self.dim, N)
        terms = {self.beta: one}
        for alpha, coeff in self.remainder.items():
            terms[alpha] = -coeff
        if scale is not None:
            terms = {a: jet_mul(scale, c) for a, c in terms.items()}
            N = min(N, scale.trunc_degree)
        terms = {a: c.truncate(N) if c.trunc_degree > N else c for a, c in terms.items()}
        return DiffOperator(self.dim, self.order, terms)


def canonical_form(L: DiffOperator) -> CanonicalOperator:
    beta = (0,) * (L.dim - 1) + (L.order,)
    lead = L.terms.get(beta)
    if lead is None or not lead[(0,) * L.dim]:
        raise NotEllipticPosition(
            f"coefficient of D^{beta} vanishes at the origin; "
            "present the operator with x_n non-characteristic"
        )
    inv = jet_reciprocal(lead)
    remainder = {}
    for alpha, coeff in L.terms.items():
        if alpha == beta:
            continue
        r = -jet_mul(coeff, inv)
        if not r.is_zero():
            remainder[alpha] = r
    return CanonicalOperator(L.dim, L.order, beta, remainder, lead)
