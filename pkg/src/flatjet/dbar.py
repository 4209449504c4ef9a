"""Wirtinger coordinates, formal holomorphy and the flat d-bar obstruction at jet level.

Real coordinates are ordered ``(x_1, y_1, ..., x_n, y_n)`` and complex slots
``(z_1, zbar_1, ..., z_n, zbar_n)``.  Derivatives follow the convention
``d/dzbar_j = d/dx_j + i d/dy_j`` (no factor 1/2), so ``d/dzbar (zbar) = 2``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import DimensionMismatch
from .jets import INF, Jet, jet_derive, jet_linear_combination, jet_substitute_linear
from .scalar import I, ONE, ZERO, Scalar

HALF = Fraction(1, 2)


def _pairs(dim: int) -> int:
    if dim % 2:
        raise DimensionMismatch(f"expected an even number of real variables, got {dim}")
    return dim // 2


def _to_wirtinger_matrix(n: int):
    # x_j = (z_j + zbar_j) / 2,  y_j = (z_j - zbar_j) / (2i)
    size = 2 * n
    rows = [[ZERO] * size for _ in range(size)]
    for j in range(n):
        x, y = 2 * j, 2 * j + 1
        rows[x][x] = Scalar(HALF)
        rows[x][y] = Scalar(HALF)
        rows[y][x] = Scalar(0, -HALF)
        rows[y][y] = Scalar(0, HALF)
    return rows


def _from_wirtinger_matrix(n: int):
    # z_j = x_j + i y_j,  zbar_j = x_j - i y_j
    size = 2 * n
    rows = [[ZERO] * size for _ in range(size)]
    for j in range(n):
        z, zb = 2 * j, 2 * j + 1
        rows[z][z] = ONE
        rows[z][zb] = I
        rows[zb][z] = ONE
        rows[zb][zb] = -I
    return rows


@dataclass(frozen=True)
class WirtingerJet:
    """A jet whose variables are the slots ``(z_1, zbar_1, ..., z_n, zbar_n)``."""

    jet: Jet

    def __post_init__(self):
        _pairs(self.jet.dim)

    @property
    def n(self) -> int:
        return self.jet.dim // 2

    @property
    def holomorphic_slots(self) -> tuple[int, ...]:
        return tuple(range(0, self.jet.dim, 2))

    @property
    def antiholomorphic_slots(self) -> tuple[int, ...]:
        return tuple(range(1, self.jet.dim, 2))


@dataclass(frozen=True)
class ZeroOneForm:
    """``sum_j phi_j dzbar_j`` with components in real coordinates."""

    components: tuple[Jet, ...]

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.components)

    def is_closed(self) -> bool:
        """Jet-level ``d/dzbar_k phi_j == d/dzbar_j phi_k`` through the shared degree."""
        n = len(self.components)
        for j in range(n):
            for k in range(j + 1, n):
                if self.components[j].trunc_degree < 1 or self.components[k].trunc_degree < 1:
                    continue
                if dbar_component(self.components[j], k) != dbar_component(self.components[k], j):
                    return False
        return True


def wirtinger(f: Jet) -> WirtingerJet:
    return WirtingerJet(jet_substitute_linear(f, _to_wirtinger_matrix(_pairs(f.dim))))


def from_wirtinger(w: WirtingerJet) -> Jet:
    """Back to real coordinates (the inverse substitution)."""
    return jet_substitute_linear(w.jet, _from_wirtinger_matrix(w.n))


def is_formally_holomorphic(w: WirtingerJet) -> bool:
    slots = w.antiholomorphic_slots
    return all(not any(g[s] for s in slots) for g in w.jet.coeffs)


def dbar_component(f: Jet, j: int) -> Jet:
    """``(d/dx_j + i d/dy_j) f``."""
    dx = [0] * f.dim
    dy = [0] * f.dim
    dx[2 * j] = 1
    dy[2 * j + 1] = 1
    return jet_linear_combination([(ONE, jet_derive(f, dx)), (I, jet_derive(f, dy))])


def dbar_apply(f: Jet) -> ZeroOneForm:
    n = _pairs(f.dim)
    form = ZeroOneForm(tuple(dbar_component(f, j) for j in range(n)))
    if not form.is_closed():  # pragma: no cover - mixed partials commute exactly
        raise AssertionError("dbar of a jet failed to be closed")
    return form


@dataclass(frozen=True)
class Classification:
    kind: str  # "flat" | "formally_holomorphic" | "mixed"
    order: int | None = None

    def __str__(self):
        return f"mixed({self.order})" if self.kind == "mixed" else self.kind


def classify_solution(f: Jet) -> Classification:
    """Classify the jet of a solution ``u`` of ``dbar u = phi`` with ``phi`` flat.

    * zero jet: the solution itself is flat;
    * nonzero and free of ``zbar``: formally holomorphic, so ``phi`` has no flat
      preimage at all;
    * otherwise the lowest degree of a monomial containing ``zbar`` is reported;
      such a term makes some derivative of ``dbar u`` nonzero at 0, which is
      incompatible with ``phi`` being flat.
    """
    if f.is_zero():
        return Classification("flat")
    order = order_of_mixed_terms(wirtinger(f))
    if order == INF:
        return Classification("formally_holomorphic")
    return Classification("mixed", order)


def multidim_G(G1: WirtingerJet, n: int) -> WirtingerJet:
    """``F(z_1, ..., z_n) = sum_j G1(z_j)`` for a formally holomorphic one-variable ``G1``."""
    if G1.n != 1:
        raise DimensionMismatch("G1 must live in one complex variable")
    if n < 1:
        raise ValueError("n must be positive")
    if not is_formally_holomorphic(G1):
        raise ValueError("G1 is not formally holomorphic")
    N = G1.jet.trunc_degree
    coeffs = {}
    for (a, _), c in G1.jet.coeffs.items():
        for j in range(n):
            gamma = [0] * (2 * n)
            gamma[2 * j] = a
            gamma = tuple(gamma)
            coeffs[gamma] = coeffs.get(gamma, ZERO) + c
    F = WirtingerJet(Jet(2 * n, N, coeffs))

    if not is_formally_holomorphic(F):  # pragma: no cover
        raise AssertionError("sum of holomorphic pieces lost holomorphy")
    for (a, _), c in G1.jet.coeffs.items():
        if a and F.jet[(a,) + (0,) * (2 * n - 1)] != c:  # pragma: no cover
            raise AssertionError(f"coefficient of z_1^{a} was not preserved")
    if N >= 1 and not dbar_apply(from_wirtinger(F)).is_zero():  # pragma: no cover
        raise AssertionError("dbar F is not the zero form")
    return F


def order_of_mixed_terms(w: WirtingerJet):
    """Lowest degree of a monomial with a ``zbar`` factor (``INF`` if none)."""
    slots = w.antiholomorphic_slots
    return min((sum(g) for g in w.jet.coeffs if any(g[s] for s in slots)), default=INF)
