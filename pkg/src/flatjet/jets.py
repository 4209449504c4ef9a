"""Sparse truncated multivariate power series ("jets") over Gaussian rationals.

A :class:`Jet` stores the Taylor coefficients of a germ at the origin up to a
*reliability degree* ``trunc_degree``: coefficients of total degree ``<= N``
are exact, everything above is unknown (not zero).  Derivatives lower the
reliability degree, products take the minimum of their inputs, and every
operation keeps that bookkeeping honest.

Monomials are keyed by exponent tuples.  Iteration and serialization use the
graded lexicographic order: total degree first, then ``x1`` before ``x2``
before ... within a degree.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping, Sequence
from fractions import Fraction
from operator import add
from types import MappingProxyType

from .errors import DimensionMismatch, NotInvertible, ReliabilityExhausted, SingularMatrix
from .scalar import ONE, ZERO, Scalar

MultiIndex = tuple[int, ...]

#: order of vanishing reported for the zero jet
INF = math.inf


def grlex_key(gamma: MultiIndex):
    return (sum(gamma), tuple(-g for g in gamma))


def _check_index(gamma, dim: int) -> MultiIndex:
    gamma = tuple(gamma)
    if len(gamma) != dim:
        raise DimensionMismatch(f"multi-index {gamma} has length {len(gamma)}, expected {dim}")
    for g in gamma:
        if not isinstance(g, int) or isinstance(g, bool) or g < 0:
            raise ValueError(f"multi-index entries must be natural numbers, got {gamma}")
    return gamma


class Jet:
    """Immutable sparse jet: ``dim`` variables, reliable through ``trunc_degree``."""

    __slots__ = ("dim", "trunc_degree", "_coeffs")

    def __init__(self, dim: int, trunc_degree: int, coeffs: Mapping | None = None):
        if not isinstance(dim, int) or dim < 1:
            raise ValueError(f"dim must be a positive integer, got {dim!r}")
        if not isinstance(trunc_degree, int) or trunc_degree < 0:
            raise ValueError(f"trunc_degree must be a natural number, got {trunc_degree!r}")
        data: dict[MultiIndex, Scalar] = {}
        for gamma, c in (coeffs or {}).items():
            gamma = _check_index(gamma, dim)
            if sum(gamma) > trunc_degree:
                raise ValueError(
                    f"monomial {gamma} has degree {sum(gamma)} > trunc_degree {trunc_degree}"
                )
            c = Scalar.coerce(c)
            if c:
                data[gamma] = c
        self.dim = dim
        self.trunc_degree = trunc_degree
        self._coeffs = data

    @classmethod
    def _wrap(cls, dim: int, trunc_degree: int, data: dict) -> Jet:
        # trusted constructor: keys valid, no zero values
        obj = object.__new__(cls)
        obj.dim = dim
        obj.trunc_degree = trunc_degree
        obj._coeffs = data
        return obj

    @classmethod
    def zero(cls, dim: int, trunc_degree: int) -> Jet:
        return cls(dim, trunc_degree)

    @classmethod
    def constant(cls, value, dim: int, trunc_degree: int) -> Jet:
        return cls(dim, trunc_degree, {(0,) * dim: value})

    @classmethod
    def monomial(cls, gamma, dim: int, trunc_degree: int, coeff=1) -> Jet:
        return cls(dim, trunc_degree, {tuple(gamma): coeff})

    @classmethod
    def variable(cls, index: int, dim: int, trunc_degree: int) -> Jet:
        gamma = [0] * dim
        gamma[index] = 1
        return cls(dim, trunc_degree, {tuple(gamma): 1})

    # -- inspection -----------------------------------------------------------

    @property
    def coeffs(self) -> Mapping[MultiIndex, Scalar]:
        return MappingProxyType(self._coeffs)

    def __getitem__(self, gamma) -> Scalar:
        return self._coeffs.get(tuple(gamma), ZERO)

    def __len__(self):
        return len(self._coeffs)

    def __iter__(self):
        return iter(sorted(self._coeffs, key=grlex_key))

    def items(self) -> list[tuple[MultiIndex, Scalar]]:
        """Terms in graded lexicographic order."""
        return [(g, self._coeffs[g]) for g in self]

    def is_zero(self) -> bool:
        return not self._coeffs

    def degree(self) -> int:
        """Largest total degree of a stored monomial (-1 for the zero jet)."""
        return max((sum(g) for g in self._coeffs), default=-1)

    def truncate(self, trunc_degree: int) -> Jet:
        """Forget everything above ``trunc_degree`` (which may not exceed the current one)."""
        if trunc_degree > self.trunc_degree:
            raise ReliabilityExhausted(
                f"cannot raise reliability from {self.trunc_degree} to {trunc_degree}"
            )
        if trunc_degree == self.trunc_degree:
            return self
        data = {g: c for g, c in self._coeffs.items() if sum(g) <= trunc_degree}
        return Jet._wrap(self.dim, trunc_degree, data)

    def homogeneous_part(self, degree: int) -> dict[MultiIndex, Scalar]:
        return {g: c for g, c in self._coeffs.items() if sum(g) == degree}

    # -- arithmetic sugar -----------------------------------------------------

    def __add__(self, other):
        if isinstance(other, Jet):
            return jet_linear_combination([(ONE, self), (ONE, other)])
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, Jet):
            return jet_linear_combination([(ONE, self), (-ONE, other)])
        return NotImplemented

    def __neg__(self):
        return Jet._wrap(self.dim, self.trunc_degree, {g: -c for g, c in self._coeffs.items()})

    def __mul__(self, other):
        if isinstance(other, Jet):
            return jet_mul(self, other)
        try:
            other = Scalar.coerce(other)
        except TypeError:
            return NotImplemented
        return jet_linear_combination([(other, self)])

    def __rmul__(self, other):
        if isinstance(other, Jet):
            return NotImplemented
        return self.__mul__(other)

    def __truediv__(self, other):
        if isinstance(other, Jet):
            return jet_mul(self, jet_reciprocal(other))
        return self * Scalar.coerce(other).inverse()

    def __eq__(self, other):
        if not isinstance(other, Jet):
            return NotImplemented
        return (
            self.dim == other.dim
            and self.trunc_degree == other.trunc_degree
            and self._coeffs == other._coeffs
        )

    def __hash__(self):
        return hash((self.dim, self.trunc_degree, frozenset(self._coeffs.items())))

    def __reduce__(self):
        return (Jet, (self.dim, self.trunc_degree, self._coeffs))

    def __repr__(self):
        body = ", ".join(f"{g}: {c!r}" for g, c in self.items())
        return f"Jet({self.dim}, {self.trunc_degree}, {{{body}}})"

    def __str__(self):
        names = ["x", "y"] if self.dim == 2 else [f"x{i + 1}" for i in range(self.dim)]
        if self.dim == 1:
            names = ["x"]
        parts = []
        for gamma, c in self.items():
            mono = "*".join(
                names[i] if e == 1 else f"{names[i]}^{e}" for i, e in enumerate(gamma) if e
            )
            coeff = str(c) if c.is_real or not c.re else f"({c})"
            if not mono:
                parts.append(coeff)
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append(f"-{mono}")
            else:
                parts.append(f"{coeff}*{mono}")
        poly = " + ".join(parts).replace("+ -", "- ") if parts else "0"
        return f"{poly} + O({self.trunc_degree + 1})"


# -- core operations -------------------------------------------------------------


def _same_dim(jets: Sequence[Jet]) -> int:
    dims = {j.dim for j in jets}
    if len(dims) > 1:
        raise DimensionMismatch(f"jets of different dimensions: {sorted(dims)}")
    return dims.pop()


def jet_linear_combination(terms: Iterable[tuple[object, Jet]]) -> Jet:
    """Exact ``sum(c * f)``; the result is reliable through the smallest input degree."""
    terms = [(Scalar.coerce(c), f) for c, f in terms]
    if not terms:
        raise ValueError("empty linear combination has no dimension")
    dim = _same_dim([f for _, f in terms])
    trunc = min(f.trunc_degree for _, f in terms)
    out: dict[MultiIndex, Scalar] = {}
    for c, f in terms:
        if not c:
            continue
        for g, v in f._coeffs.items():
            if sum(g) > trunc:
                continue
            prev = out.get(g)
            out[g] = c * v if prev is None else prev + c * v
    return Jet._wrap(dim, trunc, {g: v for g, v in out.items() if v})


def _dict_mul(p: Mapping, q: Mapping, limit: int | None = None) -> dict:
    out: dict = {}
    qs = [(g, sum(g), c) for g, c in q.items()]
    for g1, c1 in p.items():
        d1 = sum(g1)
        for g2, d2, c2 in qs:
            if limit is not None and d1 + d2 > limit:
                continue
            g = tuple(map(add, g1, g2))
            prev = out.get(g)
            out[g] = c1 * c2 if prev is None else prev + c1 * c2
    return {g: v for g, v in out.items() if v}


def jet_mul(a: Jet, b: Jet) -> Jet:
    """Cauchy product truncated to ``min(a.trunc_degree, b.trunc_degree)``."""
    dim = _same_dim([a, b])
    trunc = min(a.trunc_degree, b.trunc_degree)
    return Jet._wrap(dim, trunc, _dict_mul(a._coeffs, b._coeffs, trunc))


def jet_derive(a: Jet, alpha) -> Jet:
    """Formal derivative ``D^alpha``; reliability drops by ``|alpha|``."""
    alpha = _check_index(alpha, a.dim)
    order = sum(alpha)
    if order > a.trunc_degree:
        raise ReliabilityExhausted(
            f"D^{alpha} needs {order} reliable degrees, jet only has {a.trunc_degree}"
        )
    if not order:
        return a
    out = {}
    for g, c in a._coeffs.items():
        if any(gi < ai for gi, ai in zip(g, alpha)):
            continue
        factor = 1
        for gi, ai in zip(g, alpha):
            if ai:
                factor *= math.perm(gi, ai)
        out[tuple(gi - ai for gi, ai in zip(g, alpha))] = c * factor
    return Jet._wrap(a.dim, a.trunc_degree - order, out)


def jet_eval(a: Jet, point: Sequence) -> Scalar:
    """Evaluate the truncated series (a polynomial) exactly at ``point``."""
    if len(point) != a.dim:
        raise DimensionMismatch(f"point has {len(point)} coordinates, jet has dim {a.dim}")
    point = [Scalar.coerce(p) for p in point]
    powers: list[dict[int, Scalar]] = [{0: ONE} for _ in range(a.dim)]

    def power(i: int, e: int) -> Scalar:
        cache = powers[i]
        if e not in cache:
            cache[e] = point[i] ** e
        return cache[e]

    total = ZERO
    for g, c in a._coeffs.items():
        term = c
        for i, e in enumerate(g):
            if e:
                term = term * power(i, e)
        total = total + term
    return total


def jet_ord(a: Jet):
    """Order of vanishing at 0: smallest total degree present, ``INF`` for the zero jet."""
    if not a._coeffs:
        return INF
    return min(sum(g) for g in a._coeffs)


def jet_restrict_last_zero(a: Jet) -> Jet:
    """Restriction to the hyperplane ``x_n = 0`` (the last variable is kept, with exponent 0)."""
    return Jet._wrap(a.dim, a.trunc_degree, {g: c for g, c in a._coeffs.items() if not g[-1]})


def jet_reciprocal(a: Jet) -> Jet:
    """Multiplicative inverse of a jet with nonzero constant term."""
    a0 = a[(0,) * a.dim]
    if not a0:
        raise NotInvertible("jet has zero constant term and is not invertible")
    inv0 = a0.inverse()
    N = a.trunc_degree
    parts = [a.homogeneous_part(d) for d in range(N + 1)]
    result: list[dict] = [{(0,) * a.dim: inv0}]
    # degree-d part of a*r vanishes for d >= 1:  a0*r_d = -sum_{j>=1} a_j r_{d-j}
    for d in range(1, N + 1):
        acc: dict = {}
        for j in range(1, d + 1):
            if not parts[j] or not result[d - j]:
                continue
            for g, v in _dict_mul(parts[j], result[d - j]).items():
                prev = acc.get(g)
                acc[g] = v if prev is None else prev + v
        result.append({g: -v * inv0 for g, v in acc.items() if v})
    data = {}
    for part in result:
        data.update(part)
    return Jet._wrap(a.dim, N, data)


# -- linear algebra over Gaussian rationals -------------------------------------------


def _as_matrix(matrix, n: int) -> list[list[Scalar]]:
    rows = [[Scalar.coerce(x) for x in row] for row in matrix]
    if len(rows) != n or any(len(r) != n for r in rows):
        raise DimensionMismatch(f"expected a {n}x{n} matrix")
    return rows


def determinant(matrix) -> Scalar:
    rows = _as_matrix(matrix, len(matrix))
    n = len(rows)
    det = ONE
    for col in range(n):
        pivot = next((r for r in range(col, n) if rows[r][col]), None)
        if pivot is None:
            return ZERO
        if pivot != col:
            rows[col], rows[pivot] = rows[pivot], rows[col]
            det = -det
        p = rows[col][col]
        det = det * p
        inv = p.inverse()
        for r in range(col + 1, n):
            f = rows[r][col] * inv
            if f:
                rows[r] = [x - f * y for x, y in zip(rows[r], rows[col])]
    return det


def matrix_inverse(matrix) -> list[list[Scalar]]:
    n = len(matrix)
    rows = _as_matrix(matrix, n)
    aug = [row + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(rows)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if aug[r][col]), None)
        if pivot is None:
            raise SingularMatrix("matrix is singular")
        aug[col], aug[pivot] = aug[pivot], aug[col]
        inv = aug[col][col].inverse()
        aug[col] = [x * inv for x in aug[col]]
        for r in range(n):
            if r != col and aug[r][col]:
                f = aug[r][col]
                aug[r] = [x - f * y for x, y in zip(aug[r], aug[col])]
    return [row[n:] for row in aug]


def jet_substitute_linear(a: Jet, matrix) -> Jet:
    """Substitute ``x_i = sum_j matrix[i][j] * t_j`` and return the jet in the ``t`` variables.

    Linear substitutions preserve total degree, so the reliability degree is unchanged.
    """
    n = a.dim
    rows = _as_matrix(matrix, n)
    if not determinant(rows):
        raise SingularMatrix("substitution matrix is singular")
    forms = []
    for row in rows:
        form = {}
        for j, c in enumerate(row):
            if c:
                e = [0] * n
                e[j] = 1
                form[tuple(e)] = c
        forms.append(form)
    cache: dict[tuple[int, int], dict] = {}

    def power(i: int, e: int) -> dict:
        key = (i, e)
        if key not in cache:
            if e == 0:
                cache[key] = {(0,) * n: ONE}
            else:
                cache[key] = _dict_mul(power(i, e - 1), forms[i])
        return cache[key]

    out: dict = {}
    for g, c in a._coeffs.items():
        prod = {(0,) * n: c}
        for i, e in enumerate(g):
            if e:
                prod = _dict_mul(prod, power(i, e))
        for h, v in prod.items():
            prev = out.get(h)
            out[h] = v if prev is None else prev + v
    return Jet._wrap(n, a.trunc_degree, {g: v for g, v in out.items() if v})


def polynomial(dim: int, trunc_degree: int, terms: Mapping) -> Jet:
    """Convenience constructor accepting ints, Fractions or ``(re, im)`` pairs as coefficients."""
    data = {}
    for g, c in terms.items():
        if isinstance(c, tuple):
            c = Scalar(Fraction(c[0]), Fraction(c[1]))
        data[tuple(g)] = c
    return Jet(dim, trunc_degree, data)
