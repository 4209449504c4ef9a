"""Command-line entry point: ``flatjet <subcommand> ...``.

Exit codes: 0 success, 1 invariant failure, 2 input error.
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

from . import bench
from .cauchy import AnnulusDatum, QuadratureNotConverged, cauchy_transform, support_demo
from .certificate import build_certificate, default_pk, divergence_table
from .dbar import classify_solution, dbar_apply, from_wirtinger, multidim_G, wirtinger
from .errors import CertificateError, InputError, JetError
from .ode1d import OdeProblem, ode_jet_solve
from .operator import canonical_form, cauchy_riemann, ellipticity_check
from .serialize import (
    _load_json,
    certificate_to_json,
    dumps,
    emit_certificate,
    jet_from_json,
    jet_to_json,
    operator_from_json,
)
from .solver import SolverConfig, solve_uk

EXIT_OK, EXIT_INVARIANT, EXIT_INPUT = 0, 1, 2

BUILTIN_OPERATORS = ("laplacian_2d", "cauchy_riemann", "laplacian_drift")

log = logging.getLogger("flatjet")


def load_operator(name: str):
    """Load an operator from a JSON path or one of the shipped fixture names."""
    if name in BUILTIN_OPERATORS:
        text = resources.files("flatjet").joinpath("data", f"{name}.json").read_text()
        return operator_from_json(json.loads(text))
    path = Path(name)
    if not path.is_file():
        raise InputError(f"operator file not found: {name}")
    return operator_from_json(_load_json(path))


def _check_output(path: str | None) -> None:
    if path and not Path(path).resolve().parent.is_dir():
        raise InputError(f"output directory does not exist: {Path(path).parent}")


def _natural_arg(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("expected a natural number")
    return value


# -- subcommands ----------------------------------------------------------------------


def cmd_check(args) -> int:
    L = load_operator(args.operator)
    report = ellipticity_check(L, args.samples)
    print(f"dim={L.dim} order={L.order} trunc_degree={L.trunc_degree}")
    print(f"ellipticity at 0: {report.verdict} ({len(report.sampled_directions)} directions)")
    print(f"  caveat: {report.caveat}")
    try:
        canon = canonical_form(L)
    except JetError as exc:
        print(f"canonical form: FAILED ({exc})")
        return EXIT_INVARIANT
    print(f"canonical form: D^{canon.beta} - sum a_alpha D^alpha")
    for alpha, coeff in canon.remainder.items():
        print(f"  a{alpha} = {coeff}")
    return EXIT_OK if report.passed else EXIT_INVARIANT


def cmd_uk(args) -> int:
    L = load_operator(args.operator)
    _check_output(args.trace)
    if args.pk == "default":
        p = default_pk(args.k, L.dim)
    else:
        path = Path(args.pk)
        if not path.is_file():
            raise InputError(f"p_k file not found: {args.pk}")
        p = jet_from_json(_load_json(path), L.dim, args.N, "pk")
    u, trace = solve_uk(L, p, SolverConfig(args.N))
    if args.json:
        sys.stdout.write(dumps(jet_to_json(u)))
    else:
        print(f"u = {u}")
        print(f"stabilized_at = {trace.stabilized_at}, x_n-adic orders of w: {trace.xn_orders()}")
    if args.trace:
        Path(args.trace).write_text(
            dumps(
                {
                    "stabilized_at": trace.stabilized_at,
                    "iterates": [jet_to_json(v) for v in trace.iterates],
                    "differences": [jet_to_json(w) for w in trace.differences],
                }
            )
        )
    return EXIT_OK


def cmd_certify(args) -> int:
    L = load_operator(args.operator)
    _check_output(args.output)
    cfg = SolverConfig(args.N, normalize=args.normalize)
    try:
        cert = build_certificate(L, args.K, cfg, workers=args.workers)
    except CertificateError as exc:
        print(f"certificate FAILED: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    p_list = [default_pk(k, L.dim) for k in range(1, args.K + 1)]
    if args.normalize:
        from .solver import normalized_pk

        p_list = [normalized_pk(L, p, cfg) for p in p_list]
    table = divergence_table(cert.b_list, p_list, cert.baire, [Fraction(1, 10), Fraction(1, 2), 1])
    print(f"operator {cert.operator_digest}")
    print(f"Baire point x = ({', '.join(str(c) for c in cert.baire.coords)}, 0)")
    print(f"L(G) vanishes through degree {cert.verified_through_degree}: {cert.residual.is_zero()}")
    print("  k   b_k p_k(x)   partial sums of |b_k u_k(t x)| for t = " + ", ".join(str(t) for t in table.t_values))
    for row in table.rows:
        sums = "  ".join(f"{float(s):.6g}" for s in row.partial_sums)
        print(f"{row.k:3d}  {str(row.diagonal):>10}   {sums}")
    if args.output:
        try:
            emit_certificate(cert, args.output)
        except ValueError as exc:
            print(str(exc), file=sys.stderr)
            return EXIT_INVARIANT
        print(f"wrote {args.output}")
    elif args.json:
        sys.stdout.write(dumps(certificate_to_json(cert)))
    return EXIT_OK if cert.valid else EXIT_INVARIANT


def cmd_dbar_demo(args) -> int:
    _check_output(args.output)
    L = cauchy_riemann(max(args.N, 1))
    try:
        cert = build_certificate(L, args.K, SolverConfig(args.N))
    except CertificateError as exc:
        print(f"certificate FAILED: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    kind = classify_solution(cert.G)
    print(f"G = {cert.G}")
    print(f"classification of G: {kind}")
    F = multidim_G(wirtinger(cert.G), 2)
    form = dbar_apply(from_wirtinger(F))
    print(f"F(z1, z2) = G(z1) + G(z2) in (z1, zbar1, z2, zbar2): {F.jet}")
    print(f"dbar F is the zero form: {form.is_zero()}")
    if args.output:
        Path(args.output).write_text(
            dumps({"classification": str(kind), "G": jet_to_json(cert.G), "F": jet_to_json(F.jet)})
        )
    ok = kind.kind == "formally_holomorphic" and form.is_zero()
    return EXIT_OK if ok else EXIT_INVARIANT


def parse_ode_problem(obj) -> OdeProblem:
    if not isinstance(obj, dict):
        raise InputError("problem file must hold a JSON object")
    for key in ("order", "trunc_degree", "coeffs", "data"):
        if key not in obj:
            raise InputError("missing field", key)
    order, N = obj["order"], obj["trunc_degree"]
    if not isinstance(order, int) or order < 1:
        raise InputError("expected a positive integer", "order")
    if not isinstance(N, int) or N < order:
        raise InputError("expected an integer >= order", "trunc_degree")
    if not isinstance(obj["coeffs"], list) or len(obj["coeffs"]) != order:
        raise InputError(f"expected {order} coefficient jets a_0..a_{order - 1}", "coeffs")
    coeffs = tuple(jet_from_json(c, 1, N, f"coeffs[{i}]") for i, c in enumerate(obj["coeffs"]))
    return OdeProblem(order, coeffs, jet_from_json(obj["data"], 1, N, "data"), N)


def cmd_ode1d(args) -> int:
    path = Path(args.problem)
    if not path.is_file():
        raise InputError(f"problem file not found: {args.problem}")
    f = ode_jet_solve(parse_ode_problem(_load_json(path)))
    sys.stdout.write(dumps(jet_to_json(f)))
    return EXIT_OK


def cmd_cauchy_demo(args) -> int:
    _check_output(args.csv)
    datum = AnnulusDatum(resolution=args.resolution)
    try:
        cauchy_transform(datum, 0.0, tol=args.tol)
    except QuadratureNotConverged as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_INVARIANT
    report = support_demo(datum)
    print("\n".join(report.lines()))
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["x", "y", "re_u", "im_u"])
            steps = args.grid
            for i in range(steps):
                for j in range(steps):
                    x = -2.0 + 4.0 * i / (steps - 1)
                    y = -2.0 + 4.0 * j / (steps - 1)
                    u = cauchy_transform(datum, complex(x, y))
                    writer.writerow([f"{x:.6f}", f"{y:.6f}", f"{u.real:.12e}", f"{u.imag:.12e}"])
    return EXIT_OK if report.relative_error < 1e-3 and report.nonzero_in_hole else EXIT_INVARIANT


def cmd_bench(args) -> int:
    print("\n".join(bench.run(tuple(args.dims), tuple(args.degrees), args.repeat)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="flatjet", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="ellipticity sample and canonical form")
    p.add_argument("operator", help="operator JSON file or builtin name")
    p.add_argument("--samples", type=int, default=9)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("uk", help="build one solution u_k")
    p.add_argument("operator", nargs="?", default="laplacian_2d")
    p.add_argument("--k", type=_natural_arg, required=True)
    p.add_argument("--N", type=_natural_arg, required=True)
    p.add_argument("--pk", default="default", help="'default' (x_1^k) or a jet JSON file")
    p.add_argument("--trace", help="write the recursion trace to this file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_uk)

    p = sub.add_parser("certify", help="build the flatness/divergence certificate")
    p.add_argument("operator")
    p.add_argument("--K", type=_natural_arg, required=True)
    p.add_argument("--N", type=_natural_arg, required=True)
    p.add_argument("-o", "--output")
    p.add_argument("--json", action="store_true")
    p.add_argument("--normalize", action="store_true", help="rescale p_k by the majorant of L p_k")
    p.add_argument("--workers", type=int, default=None)
    p.set_defaults(func=cmd_certify)

    p = sub.add_parser("dbar-demo", help="Cauchy-Riemann certificate, classification and n=2 lift")
    p.add_argument("--K", type=_natural_arg, default=6)
    p.add_argument("--N", type=_natural_arg, default=8)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_dbar_demo)

    p = sub.add_parser("ode1d", help="jet solution of a 1-D Cauchy problem with zero data")
    p.add_argument("problem")
    p.set_defaults(func=cmd_ode1d)

    p = sub.add_parser("cauchy-demo", help="Cauchy transform of an annulus datum")
    p.add_argument("--resolution", type=int, default=128)
    p.add_argument("--tol", type=float, default=1e-8)
    p.add_argument("--csv")
    p.add_argument("--grid", type=int, default=21)
    p.set_defaults(func=cmd_cauchy_demo)

    p = sub.add_parser("bench", help="series convolution micro-benchmark")
    p.add_argument("--dims", type=int, nargs="+", default=[1, 2, 3])
    p.add_argument("--degrees", type=int, nargs="+", default=[4, 8, 12])
    p.add_argument("--repeat", type=int, default=3)
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except (InputError, ValueError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except JetError as exc:
        print(f"failed: {exc}", file=sys.stderr)
        return EXIT_INVARIANT


if __name__ == "__main__":
    sys.exit(main())
