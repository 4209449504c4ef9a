"""Assembly of the divergent series ``G = sum b_k u_k`` and its flatness certificate.

Given an operator ``L`` the pipeline

1. builds ``u_k`` (``L u_k = 0``, ``u_k = p_k`` on ``x_n = 0``) for ``k = 1..K``,
2. picks a rational point ``x`` with ``p_k(x) != 0`` for all ``k``,
3. sets ``b_k = k! / p_k(x)`` so that ``b_k u_k(t x) = k! t^k`` on the line through ``x``,
4. sums the jet of ``G`` and re-applies ``L`` from scratch to confirm that ``L G``
   has a vanishing jet through degree ``N - m``.

The factorial diagonal is what makes the Taylor series of ``G`` divergent
on that line, so no flat solution of ``L u = L G`` can exist.
"""

from __future__ import annotations

import logging
import math
import os
from collections.abc import Callable, Sequence
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .errors import CertificateError, JetError
from .jets import Jet, jet_eval, jet_linear_combination, jet_ord, jet_restrict_last_zero
from .operator import DiffOperator, canonical_form, ellipticity_check, op_apply
from .scalar import ONE, Scalar
from .solver import SolverConfig, build_uk, normalized_pk

log = logging.getLogger(__name__)

WORKERS_ENV = "FLATJET_MAX_WORKERS"


def default_pk(k: int, dim: int) -> Jet:
    """``x_1^k`` as a polynomial jet in ``dim`` variables."""
    if dim < 2 and k:
        raise ValueError("boundary polynomials need dim >= 2")
    gamma = (k,) + (0,) * (dim - 1)
    return Jet.monomial(gamma, dim, k)


@dataclass(frozen=True)
class BairePoint:
    coords: tuple[Fraction, ...]
    witness_values: tuple[Scalar, ...]

    def point(self) -> tuple[Fraction, ...]:
        """The full point ``(x_1, ..., x_{n-1}, 0)``."""
        return self.coords + (Fraction(0),)


def _graded_lex_points(size: int, count: int):
    """Index tuples in ``{1..size}^count``, by increasing sum then lexicographically."""
    for total in range(count, size * count + 1):
        yield from _compositions(total, count, size)


def _compositions(total: int, count: int, size: int):
    if count == 1:
        if 1 <= total <= size:
            yield (total,)
        return
    for first in range(1, min(size, total - (count - 1)) + 1):
        for rest in _compositions(total - first, count - 1, size):
            yield (first,) + rest


def baire_point(p_list: Sequence[Jet], denominator_hint: int | None = None) -> BairePoint:
    """First grid point (graded-lex) where every ``p_k`` is nonzero.

    The grid is ``{j / (D + 2) : j = 1..D+1}^(n-1)`` with ``D = sum deg p_k``
    (or ``denominator_hint`` if larger).  A nonzero polynomial of degree
    ``<= D`` in each variable cannot vanish on a product of ``D + 1`` points
    per axis, so the search always succeeds.
    """
    if not p_list:
        raise ValueError("need at least one polynomial")
    dim = p_list[0].dim
    for p in p_list:
        if p.is_zero():
            raise ValueError("baire_point needs nonzero polynomials")
        if any(g[-1] for g in p.coeffs):
            raise ValueError("polynomials must not depend on x_n")
    D = sum(p.degree() for p in p_list)
    if denominator_hint is not None:
        D = max(D, denominator_hint)
    den = D + 2
    for idx in _graded_lex_points(D + 1, dim - 1):
        coords = tuple(Fraction(j, den) for j in idx)
        point = coords + (Fraction(0),)
        values = []
        for p in p_list:
            v = jet_eval(p, point)
            if not v:
                break
            values.append(v)
        else:
            return BairePoint(coords, tuple(values))
    raise AssertionError("grid exhausted; counting argument violated")  # pragma: no cover


def _full_point(x, dim: int) -> tuple:
    point = x.point() if isinstance(x, BairePoint) else tuple(Fraction(c) for c in x)
    if len(point) == dim - 1:
        point += (Fraction(0),)
    return point


def compute_bk(p_k: Jet, x: BairePoint | Sequence, k: int) -> Scalar:
    """``b_k = k! / p_k(x)`` (complex division keeps everything rational)."""
    value = jet_eval(p_k, _full_point(x, p_k.dim))
    if not value:
        raise ZeroDivisionError(f"p_{k} vanishes at the chosen point")
    return Scalar(math.factorial(k)) / value


def assemble_G(
    u_list: Sequence[Jet],
    b_list: Sequence,
    N: int,
    *,
    first_k: int = 1,
    dim: int | None = None,
) -> Jet:
    """Jet of ``sum_k b_k u_k`` through degree ``N``; ``u_list[i]`` is ``u_{first_k + i}``."""
    if len(u_list) != len(b_list):
        raise ValueError(f"misaligned lists: {len(u_list)} jets vs {len(b_list)} weights")
    if not u_list:
        if dim is None:
            raise ValueError("dim is required to assemble an empty series")
        return Jet.zero(dim, N)
    for i, u in enumerate(u_list):
        k = first_k + i
        # degree-j coefficients may only come from u_k with k <= j
        if jet_ord(u) != k:
            raise ValueError(f"u_{k} vanishes to order {jet_ord(u)}, expected exactly {k}")
    pieces = [(ONE, Jet.zero(u_list[0].dim, N))]
    pieces += [(b, u) for b, u in zip(b_list, u_list)]
    return jet_linear_combination(pieces)


def verify_flatness(L: DiffOperator, G: Jet) -> Jet:
    """``L G`` recomputed from scratch; the zero jet means ``L G`` is flat through its degree."""
    return op_apply(L, G)


@dataclass(frozen=True)
class DivergenceRow:
    k: int
    diagonal: Fraction  # b_k p_k(x), which must be k!
    partial_sums: tuple[Fraction, ...]  # sum_{j<=k} |b_j u_j(t x)| for each t


@dataclass(frozen=True)
class DivergenceTable:
    t_values: tuple[Fraction, ...]
    rows: tuple[DivergenceRow, ...]

    @property
    def diagonal(self) -> list[Fraction]:
        return [r.diagonal for r in self.rows]


def _real(value: Scalar, what: str) -> Fraction:
    if not value.is_real:
        raise ValueError(f"{what} = {value} is not real")
    return value.re


def divergence_table(b_list, p_list, x: BairePoint | Sequence, t_values) -> DivergenceTable:
    """Rows ``k = 0..K`` of the comparison series ``sum |t|^k k!``.

    Row 0 is the constant term ``0! = 1`` of that series; rows ``k >= 1`` are
    computed from ``b_k`` and ``p_k``: the diagonal is ``b_k p_k(x)`` and the
    partial sums accumulate ``|b_k p_k(t x)|``, which equals ``|b_k u_k(t x)|``
    because ``u_k = p_k`` on ``x_n = 0``.
    """
    if len(b_list) != len(p_list):
        raise ValueError("misaligned b_list and p_list")
    if not p_list:
        point = ()
    else:
        point = _full_point(x, p_list[0].dim)
    t_values = tuple(Fraction(t) for t in t_values)
    sums = [Fraction(1)] * len(t_values)
    rows = [DivergenceRow(0, Fraction(1), tuple(sums))]
    for k, (b, p) in enumerate(zip(b_list, p_list), start=1):
        b = Scalar.coerce(b)
        diag = _real(b * jet_eval(p, point), f"b_{k} p_{k}(x)")
        for i, t in enumerate(t_values):
            value = _real(b * jet_eval(p, [t * c for c in point]), f"b_{k} p_{k}(t x)")
            sums[i] += abs(value)
        rows.append(DivergenceRow(k, diag, tuple(sums)))
    return DivergenceTable(t_values, tuple(rows))


@dataclass(frozen=True)
class CounterexampleCertificate:
    operator_digest: str
    dim: int
    order: int
    K: int
    N: int
    u_list: tuple[Jet, ...]
    baire: BairePoint
    b_list: tuple[Scalar, ...]
    G: Jet
    residual: Jet
    verified_through_degree: int
    divergence_diagonal: tuple[Fraction, ...]

    def failures(self) -> list[str]:
        """Human-readable list of violated invariants (empty for a valid certificate)."""
        out = []
        if not self.residual.is_zero():
            out.append(f"residual L(G) is not the zero jet: {self.residual}")
        expected = tuple(Fraction(math.factorial(k)) for k in range(1, self.K + 1))
        if self.divergence_diagonal != expected:
            out.append("divergence diagonal differs from k!")
        if len(self.u_list) != self.K or len(self.b_list) != self.K:
            out.append("u/b lists do not have K entries")
        for k, u in enumerate(self.u_list, start=1):
            if jet_ord(u) != k:
                out.append(f"u_{k} has order {jet_ord(u)}")
        for v in self.baire.witness_values:
            if not v:
                out.append("zero witness value at the Baire point")
        return out

    @property
    def valid(self) -> bool:
        return not self.failures()

    @property
    def diverges(self) -> bool:
        return self.valid


def _worker_count(workers: int | None) -> int:
    if workers is None:
        try:
            workers = int(os.environ.get(WORKERS_ENV, "1"))
        except ValueError:
            workers = 1
    return max(1, workers)


def _solve_one(args):
    L, p, cfg = args
    return build_uk(L, p, cfg)


def build_certificate(
    L: DiffOperator,
    K: int,
    cfg: SolverConfig,
    pk_factory: Callable[[int, int], Jet] = default_pk,
    *,
    samples_per_axis: int = 9,
    workers: int | None = None,
    digest: str | None = None,
) -> CounterexampleCertificate:
    """Run the whole pipeline and return a certificate; any broken invariant raises."""
    from .serialize import operator_digest  # local: serialize imports this module

    N = cfg.trunc_degree
    m = L.order
    if K < 1 or K > N:
        raise CertificateError("setup", f"need 1 <= K <= N, got K={K}, N={N}")
    if L.dim < 2:
        raise CertificateError("setup", "the construction needs dimension n >= 2")

    report = ellipticity_check(L, samples_per_axis)
    if not report.passed:
        raise CertificateError("ellipticity", f"principal symbol vanishes: {report.verdict}")
    try:
        canonical_form(L)
    except JetError as exc:
        raise CertificateError("canonical_form", str(exc)) from exc

    try:
        p_list = [pk_factory(k, L.dim) for k in range(1, K + 1)]
        if cfg.normalize:
            p_list = [normalized_pk(L, p, cfg) for p in p_list]
    except (JetError, ValueError) as exc:
        raise CertificateError("default_pk", str(exc)) from exc

    n_workers = _worker_count(workers)
    jobs = [(L, p, cfg) for p in p_list]
    try:
        if n_workers > 1 and K > 1:
            with ProcessPoolExecutor(max_workers=min(n_workers, K)) as pool:
                u_list = list(pool.map(_solve_one, jobs))
        else:
            u_list = [_solve_one(job) for job in jobs]
    except (JetError, ValueError) as exc:
        raise CertificateError("build_uk", str(exc)) from exc
    log.debug("built u_1..u_%d at N=%d", K, N)

    for k, (u, p) in enumerate(zip(u_list, p_list), start=1):
        if jet_restrict_last_zero(u) != Jet(p.dim, N, p.coeffs):
            raise CertificateError("build_uk", f"u_{k} does not restrict to p_{k}")

    try:
        baire = baire_point(p_list)
    except ValueError as exc:
        raise CertificateError("baire_point", str(exc)) from exc
    try:
        b_list = [compute_bk(p, baire, k) for k, p in enumerate(p_list, start=1)]
    except ZeroDivisionError as exc:
        raise CertificateError("compute_bk", str(exc)) from exc
    try:
        G = assemble_G(u_list, b_list, N)
    except ValueError as exc:
        raise CertificateError("assemble_G", str(exc)) from exc

    residual = verify_flatness(L, G)
    if not residual.is_zero():
        raise CertificateError("verify_flatness", f"L(G) has a nonzero jet: {residual}")

    table = divergence_table(b_list, p_list, baire, [1])
    diagonal = tuple(table.diagonal[1:])

    cert = CounterexampleCertificate(
        operator_digest=digest or operator_digest(L),
        dim=L.dim,
        order=m,
        K=K,
        N=N,
        u_list=tuple(u_list),
        baire=baire,
        b_list=tuple(b_list),
        G=G,
        residual=residual,
        verified_through_degree=residual.trunc_degree,
        divergence_diagonal=diagonal,
    )
    problems = cert.failures()
    if problems:
        raise CertificateError("divergence_table", "; ".join(problems))
    return cert
