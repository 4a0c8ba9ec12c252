"""Command-line front end.

Subcommands:

* ``temp`` — single-system temperature report from a JSON input document;
* ``bipartite`` — full bipartite report (local, global, correlation and
  tilde temperatures, relation coefficients and residual);
* ``sweep`` — two-qubit model parameter sweep to CSV;
* ``verify`` — run a named invariant suite.

Exit codes: 0 ok, 1 input/validation error, 2 numerical failure,
3 verification-suite failure. All outputs are deterministic functions of the
input document, flags and seed.
"""

from __future__ import annotations

import argparse
import math
import sys

from .exceptions import NumericalError, ValidationError
from .io import (
    build_bipartite_system,
    correlation_report_dict,
    load_input_document,
    relation_dict,
    report_document,
    temperature_report_dict,
)
from .linalg import DensityMatrix, HermitianOperator

SWEEP_HEADER = (
    "param,beta_S,beta_B,beta_SB,beta_chi,beta_tilde_S,beta_tilde_B,"
    "K_SB,b_S,b_B,K_chi,residual"
)

SWEEP_AXES = ("beta", "lambda", "omega_S", "omega_B")


def _csv_num(x: float) -> str:
    if math.isnan(x):
        return "undefined"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return f"{x:.17g}"


def _write_out(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def cmd_temp(args) -> int:
    doc = load_input_document(args.input)
    if doc.kind != "single":
        raise ValidationError(f"temp expects kind = single, got {doc.kind!r}")
    from .thermometry import inverse_temperature

    clip = args.clip if args.clip is not None else doc.clip
    rho = DensityMatrix(doc.matrices["rho"])
    h = HermitianOperator(doc.matrices["H"], tol_herm=doc.tol)
    report = inverse_temperature(rho, h, clip)
    if args.strict and (report.rank_deficient or report.clipped):
        raise NumericalError("strict mode: state is rank deficient or the log was clipped")
    _write_out(report_document(doc, {"temperature_report": temperature_report_dict(report)}), args.out)
    return 0


def cmd_bipartite(args) -> int:
    doc = load_input_document(args.input)
    if doc.kind not in ("bipartite", "model"):
        raise ValidationError(f"bipartite expects kind = bipartite or model, got {doc.kind!r}")
    from .correlation import correlation_inverse_temperature
    from .relation import verify_universal_relation
    from .thermometry import inverse_temperature

    clip = args.clip if args.clip is not None else doc.clip
    sys_ = build_bipartite_system(doc)
    corr = correlation_inverse_temperature(sys_, clip)
    rel = verify_universal_relation(sys_, clip)
    local_s = inverse_temperature(sys_.rho_S, sys_.effective.H_S_eff, clip)
    local_b = inverse_temperature(sys_.rho_B, sys_.effective.H_B_eff, clip)
    if args.strict and corr.clipped:
        raise NumericalError("strict mode: a logarithm was clipped")
    body = {
        "local_S": temperature_report_dict(local_s),
        "local_B": temperature_report_dict(local_b),
        "correlation": correlation_report_dict(corr),
        "relation": relation_dict(rel),
    }
    _write_out(report_document(doc, body), args.out)
    return 0


def cmd_sweep(args) -> int:
    from .models import TwoQubitXYParams, build_two_qubit_xy
    from .relation import verify_universal_relation
    from .thermometry import DEFAULT_CLIP, inverse_temperature

    if args.model != "two-qubit-xy":
        raise ValidationError(f"unknown model {args.model!r}; only two-qubit-xy is supported")
    if args.axis not in SWEEP_AXES:
        raise ValidationError(f"axis must be one of {', '.join(SWEEP_AXES)}, got {args.axis!r}")
    try:
        values = [float(v) for v in args.values.split(",") if v.strip() != ""]
    except ValueError as exc:
        raise ValidationError(f"bad sweep values: {exc}") from exc
    if not values:
        raise ValidationError("no sweep values given")
    base = {
        "omega_S": args.omega_s,
        "omega_B": args.omega_b,
        "lambda": args.lam,
        "beta": args.beta,
    }
    rows = [SWEEP_HEADER]
    for v in values:
        params = dict(base)
        params[args.axis] = v
        p = TwoQubitXYParams(
            omega_S=params["omega_S"], omega_B=params["omega_B"],
            lam=params["lambda"], beta=params["beta"],
        )
        sys_ = build_two_qubit_xy(p)
        rel = verify_universal_relation(sys_, args.clip if args.clip is not None else DEFAULT_CLIP)
        beta_s = inverse_temperature(sys_.rho_S, sys_.effective.H_S_eff).beta
        beta_b = inverse_temperature(sys_.rho_B, sys_.effective.H_B_eff).beta
        cols = [
            v, beta_s, beta_b, rel.beta_SB, rel.beta_chi,
            rel.beta_tilde_S, rel.beta_tilde_B,
            rel.K_SB, rel.b_S, rel.b_B, rel.K_chi, rel.residual,
        ]
        rows.append(",".join(_csv_num(c) for c in cols))
    _write_out("\n".join(rows) + "\n", args.out)
    return 0


def cmd_verify(args) -> int:
    from .verify import SUITES, format_results, run_suites

    if args.suite != "all" and args.suite not in SUITES:
        raise ValidationError(
            f"unknown suite {args.suite!r}; choose from {', '.join([*SUITES, 'all'])}"
        )
    results = run_suites(args.suite, args.seed, args.count)
    _write_out(format_results(results), args.out)
    return 0 if all(r.passed for r in results) else 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="neqtemp",
        description="Nonequilibrium temperatures of finite-dimensional quantum states.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        p.add_argument("--clip", type=float, default=None,
                       help="eigenvalue clip for matrix logarithms (default from input document)")
        p.add_argument("--out", default=None, help="write output to this file instead of stdout")

    p_temp = sub.add_parser("temp", help="single-system temperature report")
    p_temp.add_argument("input", help="JSON input document ('-' for stdin)")
    p_temp.add_argument("--strict", action="store_true",
                        help="treat rank deficiency / clipping as an error (exit 2)")
    add_common(p_temp)
    p_temp.set_defaults(fn=cmd_temp)

    p_bi = sub.add_parser("bipartite", help="bipartite temperature and relation report")
    p_bi.add_argument("input", help="JSON input document ('-' for stdin)")
    p_bi.add_argument("--strict", action="store_true",
                      help="treat clipping as an error (exit 2)")
    add_common(p_bi)
    p_bi.set_defaults(fn=cmd_bipartite)

    p_sw = sub.add_parser("sweep", help="two-qubit model parameter sweep to CSV")
    p_sw.add_argument("--model", default="two-qubit-xy")
    p_sw.add_argument("--axis", required=True, help="parameter to sweep: beta, lambda, omega_S, omega_B")
    p_sw.add_argument("--values", required=True, help="comma-separated sweep values")
    p_sw.add_argument("--omega-s", dest="omega_s", type=float, default=2.0)
    p_sw.add_argument("--omega-b", dest="omega_b", type=float, default=1.0)
    p_sw.add_argument("--lam", type=float, default=0.1, help="coupling strength lambda")
    p_sw.add_argument("--beta", type=float, default=1.0)
    add_common(p_sw)
    p_sw.set_defaults(fn=cmd_sweep)

    p_vf = sub.add_parser("verify", help="run a named invariant suite")
    p_vf.add_argument("suite", help="gibbs, passivity, basis-invariance, extension, relation, heat, all")
    p_vf.add_argument("--seed", type=int, default=0)
    p_vf.add_argument("--count", type=int, default=None)
    p_vf.add_argument("--out", default=None)
    p_vf.set_defaults(fn=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    raise SystemExit(main())
