"""Command-line front end.

Every subcommand prints a deterministic report to stdout (plain text, or a
JSON object with --json) and exits 0; domain errors print the error name
on stderr and exit 1; usage errors exit 2.  Polynomials use the x<i> /
x<i>_<j> grammar, points are flat comma-separated coordinate lists in
canonical order (all base coordinates, then all order-1 coordinates, and
so on), and the number of base variables is inferred from the highest
variable index mentioned.
"""

from __future__ import annotations

import argparse
import json
import re
import sys

from .field import FieldError, FieldSpec
from .hasse import NotBasePolynomial, check_commutation, hs_components
from .jacobian import EmptyInput, PolyMatrix, jac_m
from .jetmatrix import check_fdbd, dn_matrix
from .jetscheme import (
    ConstantPolynomial,
    NoSmoothPointFound,
    NotSingularBase,
    PointNotOnScheme,
    higher_rank_test,
    jet_equations,
    nobile_certificate,
    on_jet_scheme,
    rank_counterexample_check,
)
from .linalg import TooManyMinors, eval_matrix, generic_rank, minors, rank
from .poly import MissingCoordinate, ParseError, Point, Polynomial, parse_poly

DOMAIN_ERRORS = (
    FieldError,
    ParseError,
    NotBasePolynomial,
    EmptyInput,
    TooManyMinors,
    MissingCoordinate,
    ConstantPolynomial,
    PointNotOnScheme,
    NotSingularBase,
    NoSmoothPointFound,
    ValueError,
    ArithmeticError,
)

_VAR_MENTION = re.compile(r"x(\d+)(?:_\d+)?")


def infer_base_count(source: str) -> int:
    """Number of base variables: the highest index mentioned (at least 1)."""
    indices = [int(m.group(1)) for m in _VAR_MENTION.finditer(source)]
    return max(indices, default=1)


def parse_field(text: str) -> FieldSpec:
    try:
        return FieldSpec.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def parse_polys(text: str, spec: FieldSpec) -> list[Polynomial]:
    s = infer_base_count(text)
    return [parse_poly(part, s, spec) for part in text.split(",")]


def parse_point(text: str, s: int, n: int, spec: FieldSpec) -> Point:
    values = [v.strip() for v in text.split(",")]
    return Point.from_flat(values, s, n, spec)


def matrix_dims(mx: PolyMatrix) -> tuple[int, int]:
    """(s, max jet order) across all entries of the matrix."""
    variables = mx.variables()
    s = max((v.base for v in variables), default=1)
    order = max((v.order for v in variables), default=0)
    return s, order


def build_matrix(spec_text: str, field: FieldSpec) -> PolyMatrix:
    """Materialize a matrix argument: "jacm:<m>:<polys>",
    "dnl:<n>:<m>:<polys>", or an inline JSON {rows, cols, entries}."""
    if spec_text.startswith("jacm:"):
        _, m_text, polys_text = spec_text.split(":", 2)
        return jac_m(parse_polys(polys_text, field), int(m_text))
    if spec_text.startswith("dnl:"):
        _, n_text, m_text, polys_text = spec_text.split(":", 3)
        return dn_matrix(jac_m(parse_polys(polys_text, field), int(m_text)), int(n_text))
    obj = json.loads(spec_text)
    rows, cols = obj["rows"], obj["cols"]
    flat = [entry for row in obj["entries"] for entry in row]
    s = max(infer_base_count(entry) for entry in flat)
    entries = tuple(parse_poly(entry, s, field) for entry in flat)
    return PolyMatrix(rows, cols, entries, provenance="json")


def matrix_json(mx: PolyMatrix) -> dict:
    return {
        "rows": mx.rows,
        "cols": mx.cols,
        "entries": [[str(e) for e in mx.row(i)] for i in range(mx.rows)],
    }


def emit(args, text: str, payload: dict):
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


# -- subcommand handlers ----------------------------------------------


def cmd_hs_derive(args) -> int:
    f = parse_poly(args.f, infer_base_count(args.f), args.field)
    expansion = hs_components(f, args.n)
    text = "\n".join(f"d_{k} = {expansion[k]}" for k in range(args.n + 1))
    emit(args, text, {"n": args.n, "components": [str(c) for c in expansion]})
    return 0


def cmd_verify_identities(args) -> int:
    f = parse_poly(args.f, infer_base_count(args.f), args.field)
    report = check_commutation(f, args.n)
    payload = {
        "ok": report.ok,
        "cases_checked": report.cases_checked,
        "counterexample": list(report.counterexample) if report.counterexample else None,
    }
    emit(args, str(report), payload)
    return 0


def cmd_jacm(args) -> int:
    mx = jac_m(parse_polys(args.f, args.field), args.m)
    emit(args, str(mx), matrix_json(mx))
    return 0


def cmd_dnl(args) -> int:
    mx = dn_matrix(jac_m(parse_polys(args.f, args.field), args.m), args.n)
    emit(args, str(mx), matrix_json(mx))
    return 0


def cmd_check_fdbd(args) -> int:
    fs = parse_polys(args.f, args.field)
    report = check_fdbd(fs, args.n)
    payload = {
        "ok": report.ok,
        "n": report.n,
        "block_shape": list(report.block_shape),
        "permutation": report.permutation,
        "first_mismatch": list(report.first_mismatch) if report.first_mismatch else None,
    }
    emit(args, str(report), payload)
    return 0


def cmd_jet_equations(args) -> int:
    f = parse_poly(args.f, infer_base_count(args.f), args.field)
    desc = jet_equations(f, args.n)
    text = "\n".join(f"d_{k} = {eq}" for k, eq in enumerate(desc.equations))
    emit(
        args,
        text,
        {"s": desc.s, "n": desc.n, "equations": [str(eq) for eq in desc.equations]},
    )
    return 0


def cmd_rank_at_point(args) -> int:
    mx = build_matrix(args.matrix, args.field)
    s, order = matrix_dims(mx)
    point = parse_point(args.point, s, order, args.field)
    r = rank(eval_matrix(mx, point))
    emit(args, f"rank = {r}", {"rank": r})
    return 0


def cmd_minors(args) -> int:
    mx = build_matrix(args.matrix, args.field)
    found = minors(mx, args.k)
    lines = [f"count = {len(found)}"]
    for (rows_sel, cols_sel), value in zip(found.selections, found.values):
        lines.append(f"rows {list(rows_sel)} cols {list(cols_sel)}: {value}")
    payload = {
        "k": found.k,
        "count": len(found),
        "minors": [
            {"rows": list(r), "cols": list(c), "value": str(v)}
            for (r, c), v in zip(found.selections, found.values)
        ],
    }
    emit(args, "\n".join(lines), payload)
    return 0


def cmd_generic_rank(args) -> int:
    mx = build_matrix(args.matrix, args.field)
    r = generic_rank(mx, trials=args.trials, seed=args.seed)
    emit(
        args,
        f"generic rank = {r} (probabilistic; trials={args.trials}, seed={args.seed})",
        {"generic_rank": r, "probabilistic": True, "trials": args.trials, "seed": args.seed},
    )
    return 0


def cmd_singular_check(args) -> int:
    f = parse_poly(args.f, infer_base_count(args.f), args.field)
    desc = jet_equations(f, args.n)
    point = parse_point(args.point, desc.s, desc.n, args.field)
    member = on_jet_scheme(desc, point)
    report = higher_rank_test(desc, point, args.m)
    text = "\n".join(
        [
            f"on_scheme = {str(member).lower()}",
            f"rank = {report.rank}",
            f"bound = {report.bound}",
            f"full = {str(report.full).lower()}",
            "assumptions: " + "; ".join(report.assumptions),
        ]
    )
    payload = {
        "on_scheme": member,
        "rank": report.rank,
        "bound": report.bound,
        "full": report.full,
        "assumptions": list(report.assumptions),
    }
    emit(args, text, payload)
    return 0


def cmd_nobile(args) -> int:
    f = parse_poly(args.f, infer_base_count(args.f), args.field)
    base = parse_point(args.base, f.base_count, 0, args.field)
    cert = nobile_certificate(
        f, args.n, args.m, base, trials=args.trials, seed=args.seed
    )
    payload = {
        "f": str(cert.f),
        "n": cert.n,
        "m": cert.m,
        "base": [str(cert.base.coords[v]) for v in sorted(cert.base.coords)],
        "membership": cert.membership,
        "rank": cert.rank,
        "bound": cert.bound,
        "full": cert.full,
        "cokernel_rank": cert.cokernel.cokernel_rank,
        "expected": cert.cokernel.expected,
        "cokernel_samples": list(cert.cokernel.samples),
        "rank_jump": cert.rank_jump,
        "witness_rank": cert.witness_rank,
        "assumptions": list(cert.assumptions),
        "verdict": cert.verdict,
        "trials": cert.trials,
        "seed": cert.seed,
    }
    emit(args, str(cert), payload)
    return 0


def cmd_rank_remark(args) -> int:
    report = rank_counterexample_check(args.n, args.m)
    payload = {
        "n": report.n,
        "m": report.m,
        "jet_ring_rank": report.jet_ring_rank,
        "tensor_rank": report.tensor_rank,
        "isomorphic": report.isomorphic,
        "verdict": "consistent with an isomorphism" if report.isomorphic else "not isomorphic",
    }
    emit(args, str(report), payload)
    return 0


# -- parser wiring -----------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jetjac",
        description="Exact jet-scheme equations, blocked higher-order Jacobians, "
        "and singularity rank certificates over Q and GF(p).",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, poly_flag=True, seeded=False):
        if poly_flag:
            p.add_argument("--f", required=True, help="polynomial(s), comma separated")
        p.add_argument(
            "--field",
            type=parse_field,
            default=FieldSpec.rationals(),
            help="Q (default) or Fp:<prime>",
        )
        p.add_argument("--json", action="store_true", help="emit a JSON report")
        if seeded:
            p.add_argument("--seed", type=int, default=0)
            p.add_argument("--trials", type=int, default=20)

    p = sub.add_parser("hs-derive", help="derivation components d_0..d_n of f")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_hs_derive)

    p = sub.add_parser("verify-identities", help="derivative interchange report")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_verify_identities)

    p = sub.add_parser("jacm", help="order-m Jacobian matrix")
    common(p)
    p.add_argument("--m", type=int, required=True)
    p.set_defaults(func=cmd_jacm)

    p = sub.add_parser("dnl", help="block matrix of the order-m Jacobian")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=1)
    p.set_defaults(func=cmd_dnl)

    p = sub.add_parser("check-fdbd", help="block matrix vs jet Jacobian equality")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_check_fdbd)

    p = sub.add_parser("jet-equations", help="equations of the order-n jet scheme")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(func=cmd_jet_equations)

    p = sub.add_parser("rank-at-point", help="exact rank of a matrix at a point")
    common(p, poly_flag=False)
    p.add_argument("--matrix", required=True, help="jacm:<m>:<polys> | dnl:<n>:<m>:<polys> | inline JSON")
    p.add_argument("--point", required=True, help="comma-separated coordinates")
    p.set_defaults(func=cmd_rank_at_point)

    p = sub.add_parser("minors", help="all k x k minors of a matrix")
    common(p, poly_flag=False)
    p.add_argument("--matrix", required=True)
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_minors)

    p = sub.add_parser("generic-rank", help="probabilistic rank at random points")
    common(p, poly_flag=False, seeded=True)
    p.add_argument("--matrix", required=True)
    p.set_defaults(func=cmd_generic_rank)

    p = sub.add_parser("singular-check", help="rank criterion at a point of the jet scheme")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--point", required=True)
    p.set_defaults(func=cmd_singular_check)

    p = sub.add_parser("nobile", help="singularity certificate over a singular base point")
    common(p, seeded=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--m", type=int, default=1)
    p.add_argument("--base", required=True, help="base-point coordinates")
    p.set_defaults(func=cmd_nobile)

    p = sub.add_parser("rank-remark", help="free-rank comparison for the affine line")
    p.add_argument("--n", type=int, default=1)
    p.add_argument("--m", type=int, default=2)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_rank_remark)

    return parser


def run(argv: list[str]) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return args.func(args)
    except DOMAIN_ERRORS as exc:
        print(f"{type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
