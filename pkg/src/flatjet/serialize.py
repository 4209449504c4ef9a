"""JSON forms of jets, operators and certificates.

Rationals are always strings (``"p/q"`` or ``"p"``) so no float can sneak in;
terms are written in graded lexicographic order, which makes every file
byte-stable for identical inputs.
"""

from __future__ import annotations

import hashlib
import json
from fractions import Fraction
from pathlib import Path

from .certificate import BairePoint, CounterexampleCertificate
from .errors import InputError
from .jets import Jet
from .operator import DiffOperator
from .scalar import Scalar, format_rational, parse_rational


def dumps(obj) -> str:
    return json.dumps(obj, indent=2, ensure_ascii=False) + "\n"


def jet_to_json(f: Jet) -> list[dict]:
    out = []
    for gamma, c in f.items():
        out.append({"gamma": list(gamma), **c.to_json()})
    return out


def _scalar(obj, field: str) -> Scalar:
    try:
        return Scalar.from_json(obj)
    except ValueError as exc:
        raise InputError(str(exc), field) from None


def _rational(text, field: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise InputError(str(exc), field) from None


def _natural(value, field: str) -> int:
    if not isinstance(value, int) or isinstance(value, bool) or value < 0:
        raise InputError(f"expected a natural number, got {value!r}", field)
    return value


def jet_from_json(terms, dim: int, trunc_degree: int, field: str = "jet") -> Jet:
    if not isinstance(terms, list):
        raise InputError("jet must be a list of {gamma, re, im} terms", field)
    coeffs = {}
    for i, term in enumerate(terms):
        where = f"{field}[{i}]"
        if not isinstance(term, dict) or "gamma" not in term:
            raise InputError("term must be an object with 'gamma', 're', 'im'", where)
        gamma = term["gamma"]
        if not isinstance(gamma, list) or len(gamma) != dim:
            raise InputError(f"gamma must be a list of {dim} naturals, got {gamma!r}", f"{where}.gamma")
        gamma = tuple(_natural(g, f"{where}.gamma") for g in gamma)
        if sum(gamma) > trunc_degree:
            raise InputError(f"degree {sum(gamma)} exceeds trunc_degree {trunc_degree}", f"{where}.gamma")
        if gamma in coeffs:
            raise InputError(f"duplicate monomial {list(gamma)}", f"{where}.gamma")
        coeffs[gamma] = _scalar({k: v for k, v in term.items() if k != "gamma"}, where)
    return Jet(dim, trunc_degree, coeffs)


# -- operators ------------------------------------------------------------------------


def operator_to_json(L: DiffOperator) -> dict:
    return {
        "dim": L.dim,
        "order": L.order,
        "trunc_degree": L.trunc_degree,
        "terms": [{"alpha": list(a), "coeff": jet_to_json(c)} for a, c in L.terms.items()],
    }


def operator_from_json(obj) -> DiffOperator:
    if not isinstance(obj, dict):
        raise InputError("operator file must hold a JSON object")
    for key in ("dim", "order", "trunc_degree", "terms"):
        if key not in obj:
            raise InputError("missing field", key)
    unknown = set(obj) - {"dim", "order", "trunc_degree", "terms", "name", "description"}
    if unknown:
        raise InputError(f"unknown fields {sorted(unknown)}")
    dim = _natural(obj["dim"], "dim")
    order = _natural(obj["order"], "order")
    N = _natural(obj["trunc_degree"], "trunc_degree")
    if dim < 1 or order < 1:
        raise InputError("dim and order must be positive")
    if not isinstance(obj["terms"], list) or not obj["terms"]:
        raise InputError("expected a nonempty list", "terms")
    terms = {}
    for i, term in enumerate(obj["terms"]):
        where = f"terms[{i}]"
        if not isinstance(term, dict) or "alpha" not in term or "coeff" not in term:
            raise InputError("term must be an object with 'alpha' and 'coeff'", where)
        alpha = term["alpha"]
        if not isinstance(alpha, list) or len(alpha) != dim:
            raise InputError(
                f"alpha has length {len(alpha) if isinstance(alpha, list) else '?'}, "
                f"operator dim is {dim}",
                f"{where}.alpha",
            )
        alpha = tuple(_natural(a, f"{where}.alpha") for a in alpha)
        if sum(alpha) > order:
            raise InputError(f"|alpha| = {sum(alpha)} exceeds order {order}", f"{where}.alpha")
        if alpha in terms:
            raise InputError(f"duplicate alpha {list(alpha)}", f"{where}.alpha")
        terms[alpha] = jet_from_json(term["coeff"], dim, N, f"{where}.coeff")
    if not any(sum(a) == order and not c.is_zero() for a, c in terms.items()):
        raise InputError(f"no nonzero term of order {order}", "order")
    return DiffOperator(dim, order, terms)


def operator_digest(L: DiffOperator) -> str:
    blob = json.dumps(operator_to_json(L), sort_keys=True, separators=(",", ":"))
    return "sha256:" + hashlib.sha256(blob.encode()).hexdigest()


def _load_json(path) -> object:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}", str(path)) from None


def parse_operator_file(path) -> DiffOperator:
    return operator_from_json(_load_json(path))


def write_operator_file(L: DiffOperator, path) -> None:
    Path(path).write_text(dumps(operator_to_json(L)))


# -- certificates -----------------------------------------------------------------------


def certificate_to_json(cert: CounterexampleCertificate) -> dict:
    return {
        "operator_digest": cert.operator_digest,
        "dim": cert.dim,
        "order": cert.order,
        "K": cert.K,
        "N": cert.N,
        "verified_through_degree": cert.verified_through_degree,
        "baire": {
            "coords": [format_rational(c) for c in cert.baire.coords],
            "witnesses": [w.to_json() for w in cert.baire.witness_values],
        },
        "b": [b.to_json() for b in cert.b_list],
        "u": [jet_to_json(u) for u in cert.u_list],
        "G": jet_to_json(cert.G),
        "residual": jet_to_json(cert.residual),
        # the file lists the full table diagonal, starting with the k = 0 row (0! = 1)
        "diagonal": ["1"] + [format_rational(d) for d in cert.divergence_diagonal],
        "diverges": cert.diverges,
    }


def certificate_from_json(obj) -> CounterexampleCertificate:
    if not isinstance(obj, dict):
        raise InputError("certificate file must hold a JSON object")
    required = ("operator_digest", "dim", "order", "K", "N", "verified_through_degree",
                "baire", "b", "u", "G", "residual", "diagonal", "diverges")
    for key in required:
        if key not in obj:
            raise InputError("missing field", key)
    dim = _natural(obj["dim"], "dim")
    N = _natural(obj["N"], "N")
    through = _natural(obj["verified_through_degree"], "verified_through_degree")
    baire = obj["baire"]
    diagonal = obj["diagonal"]
    if not isinstance(diagonal, list) or not diagonal or diagonal[0] != "1":
        raise InputError("expected a list starting with the k = 0 entry \"1\"", "diagonal")
    if not isinstance(baire, dict) or "coords" not in baire or "witnesses" not in baire:
        raise InputError("expected {coords, witnesses}", "baire")
    cert = CounterexampleCertificate(
        operator_digest=str(obj["operator_digest"]),
        dim=dim,
        order=_natural(obj["order"], "order"),
        K=_natural(obj["K"], "K"),
        N=N,
        u_list=tuple(jet_from_json(u, dim, N, f"u[{i}]") for i, u in enumerate(obj["u"])),
        baire=BairePoint(
            tuple(_rational(c, f"baire.coords[{i}]") for i, c in enumerate(baire["coords"])),
            tuple(_scalar(w, f"baire.witnesses[{i}]") for i, w in enumerate(baire["witnesses"])),
        ),
        b_list=tuple(_scalar(b, f"b[{i}]") for i, b in enumerate(obj["b"])),
        G=jet_from_json(obj["G"], dim, N, "G"),
        residual=jet_from_json(obj["residual"], dim, through, "residual"),
        verified_through_degree=through,
        divergence_diagonal=tuple(
            _rational(d, f"diagonal[{i}]") for i, d in enumerate(diagonal) if i > 0
        ),
    )
    if obj["diverges"] is not cert.diverges:
        raise InputError("flag disagrees with the recorded invariants", "diverges")
    return cert


def parse_certificate_file(path) -> CounterexampleCertificate:
    return certificate_from_json(_load_json(path))


def emit_certificate(cert: CounterexampleCertificate, path) -> None:
    """Write the certificate; refuses (``ValueError``) if any invariant fails."""
    problems = cert.failures()
    if problems:
        raise ValueError("refusing to write an invalid certificate: " + "; ".join(problems))
    Path(path).write_text(dumps(certificate_to_json(cert)))
