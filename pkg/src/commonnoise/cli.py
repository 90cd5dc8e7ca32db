"""Command-line front end.

Subcommands ``bounds``, ``fuse``, ``verify`` and ``figures``. Exit codes:
0 success, 2 unreadable or malformed input, 3 invalid parameters,
4 input matrix not positive definite, 5 dominance violation found.

The output directory is ``--out``, else ``$COMMONNOISE_OUT``, else
``./commonnoise-out``.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from . import bounds as bd
from .errors import InputError, NotPositiveDefiniteError, ParameterError
from .families import family_sampler
from .figures import EXAMPLE_P1, EXAMPLE_P2, figure_data
from .fusion import CRITERIA, fuse
from .linalg import min_eig, pd_pair
from .matrixio import matrix_doc, read_matrix, write_json, write_matrix, write_polylines

OUT_ENV = "COMMONNOISE_OUT"
DEFAULT_OUT = "commonnoise-out"

EXIT_OK, EXIT_INPUT, EXIT_PARAM, EXIT_NOT_PD, EXIT_VIOLATION = 0, 2, 3, 4, 5

MU_GRID = (0.1, 1 / 3, 1.0, 3.0, 10.0)
OMEGA_GRID = (0.0, 0.25, 0.5, 0.75, 1.0)
LAMBDA_GRID = (1 / 3, 1.0, 3.0)
DEFAULT_FAMILIES = {"dual": ("rank1", "omega"), "ci": ("ci_general",), "ici": ("ici",)}


def out_dir(args) -> Path:
    return Path(args.out or os.environ.get(OUT_ENV) or DEFAULT_OUT)


def load_pair(args, default_example: bool = False):
    if args.p1 is None and args.p2 is None and default_example:
        return pd_pair(EXAMPLE_P1, EXAMPLE_P2)
    if args.p1 is None or args.p2 is None:
        raise InputError("both --p1 and --p2 are required")
    _, P1 = read_matrix(args.p1)
    _, P2 = read_matrix(args.p2)
    return pd_pair(P1, P2)


def check_seed(seed: int) -> int:
    if not 0 <= seed < 2**64:
        raise ParameterError(f"seed must be a 64-bit unsigned integer, got {seed}")
    return seed


def _params(args, rule: str) -> bd.BoundParams | None:
    if rule == "ci":
        if args.lam is None and args.w is None:
            return None
        lam = args.lam if args.lam is not None else bd.w_to_lam(args.w)
        return bd.BoundParams(lam=lam, w=bd.lam_to_w(lam))
    if args.mu is None and args.omega is None:
        return None
    return bd.BoundParams(mu=1.0 if args.mu is None else args.mu,
                          omega=0.5 if args.omega is None else args.omega)


def cmd_bounds(args) -> int:
    P1, P2 = load_pair(args)
    rule = args.rule
    if rule == "lower":
        M, params = bd.lower_bound(P1, P2), bd.BoundParams()
    else:
        params = _params(args, rule) or (bd.BoundParams(lam=1.0, w=0.5) if rule == "ci"
                                         else bd.BoundParams(mu=1.0, omega=0.5))
        if rule == "ci":
            M = bd.ci_upper_bound(P1, P2, params.lam)
        elif rule == "dual":
            M = bd.dual_upper_bound(P1, P2, params.mu, params.omega)
        else:
            M = bd.ici_upper_bound(P1, P2, params.mu, params.omega)
    L = bd.lower_bound(P1, P2)
    report = {
        "rule": rule,
        "params": params.as_dict(),
        "min_eig": min_eig(M),
        "margin_over_lower_bound": min_eig(M - L),
    }
    out = out_dir(args)
    write_matrix(out / f"bound_{rule}.json", M, f"bound_{rule}")
    write_json(out / f"bound_{rule}_report.json", report)
    print(f"{rule} bound written to {out / f'bound_{rule}.json'}; min eig {report['min_eig']:.6g}")
    return EXIT_OK


def cmd_fuse(args) -> int:
    P1, P2 = load_pair(args)
    rule = args.rule
    if rule == "lower":
        raise ParameterError("fuse needs an upper-bound rule")
    params = _params(args, rule)
    res = fuse(P1, P2, rule, params, args.criterion, args.w)
    doc = {
        "rule": rule,
        "criterion": args.criterion,
        "criterion_value": res.criterion_value,
        "params": res.params.as_dict() if res.params else {},
        "weight": [[float(v) for v in r] for r in res.weight.matrix],
        "fused_bound": matrix_doc(res.fused_bound, "fused_bound"),
        "fused_lower": None if res.fused_lower is None else matrix_doc(res.fused_lower, "fused_lower"),
    }
    path = write_json(out_dir(args) / f"fuse_{rule}.json", doc)
    print(f"{rule} fusion written to {path}; {args.criterion} {res.criterion_value:.10g}")
    return EXIT_OK


def _verify_points(args, rule):
    if rule == "ci":
        lams = (args.lam,) if args.lam is not None else (
            (bd.w_to_lam(args.w),) if args.w is not None else LAMBDA_GRID)
        return [dict(lam=l) for l in lams]
    mus = (args.mu,) if args.mu is not None else MU_GRID
    omegas = (args.omega,) if args.omega is not None else OMEGA_GRID
    return [dict(mu=m, omega=o) for m in mus for o in omegas]


def cmd_verify(args) -> int:
    P1, P2 = load_pair(args)
    seed = check_seed(args.seed)
    rules = ("dual", "ci", "ici") if args.rule == "all" else (args.rule,)
    rows = []
    for rule in rules:
        if rule == "lower":
            raise ParameterError("verify checks upper-bound rules; the lower bound is checked with --rule dual")
        families = (args.family,) if args.family else DEFAULT_FAMILIES[rule]
        for fam in families:
            joints = bd.sample_joints(family_sampler(P1, P2, fam), args.samples, seed)
            for pt in _verify_points(args, rule):
                if rule == "ci":
                    M = bd.ci_upper_bound(P1, P2, pt["lam"])
                elif rule == "dual":
                    M = bd.dual_upper_bound(P1, P2, pt["mu"], pt["omega"])
                else:
                    M = bd.ici_upper_bound(P1, P2, pt["mu"], pt["omega"])
                rep = bd.verify_upper(M, None, args.samples, seed, joints=joints)
                rows.append(_row(rule, fam, pt, rep))
            if rule == "dual" and fam in ("rank1", "omega", "common"):
                rep = bd.verify_lower(bd.lower_bound(P1, P2), None, args.samples, seed, joints=joints)
                rows.append(_row("lower", fam, {}, rep))
    violated = any(r["violated"] for r in rows)
    doc = {"seed": seed, "samples": args.samples, "violated": violated, "rows": rows}
    path = write_json(out_dir(args) / "verify_report.json", doc)
    worst = min(rows, key=lambda r: r["min_margin"])
    print(f"{len(rows)} checks written to {path}; worst margin {worst['min_margin']:.3g} "
          f"({worst['rule']} vs {worst['family']})")
    if violated:
        print("dominance violation found", file=sys.stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def _row(rule, fam, pt, rep) -> dict:
    return {"rule": rule, "family": fam, **pt, "min_margin": float(rep.min_margin),
            "threshold": float(rep.threshold), "worst_index": int(rep.worst_index),
            "violated": bool(rep.violated)}


def cmd_figures(args) -> int:
    P1, P2 = load_pair(args, default_example=True)
    seed = check_seed(args.seed)
    data = figure_data(P1, P2, n_samples=args.samples, seed=seed, m=args.points)
    out = out_dir(args)
    for name, polylines in data.items():
        path = write_polylines(out / f"{name}.csv", polylines)
        print(f"{name}: {len(polylines)} polylines -> {path}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--p1", help="matrix file for the first estimate's covariance")
    common.add_argument("--p2", help="matrix file for the second estimate's covariance")
    common.add_argument("--out", help=f"output directory (default ${OUT_ENV} or ./{DEFAULT_OUT})")
    common.add_argument("--mu", type=float)
    common.add_argument("--omega", type=float)
    common.add_argument("--lambda", dest="lam", type=float)
    common.add_argument("--w", type=float)
    common.add_argument("--seed", type=int, default=42)

    parser = argparse.ArgumentParser(prog="commonnoise", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("bounds", parents=[common], help="write a joint bound matrix")
    p.add_argument("--rule", choices=("dual", "ci", "ici", "lower"), default="dual")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("fuse", parents=[common], help="compute a fusion weight and fused bounds")
    p.add_argument("--rule", choices=("dual", "ci", "ici"), default="ci")
    p.add_argument("--criterion", choices=CRITERIA, default="trace")
    p.set_defaults(func=cmd_fuse)

    p = sub.add_parser("verify", parents=[common], help="Monte-Carlo dominance checks")
    p.add_argument("--rule", choices=("dual", "ci", "ici", "all"), default="all")
    p.add_argument("--family", choices=("rank1", "omega", "common", "ci_general", "ici"))
    p.add_argument("--samples", type=int, default=1000)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("figures", parents=[common], help="write figure polylines as CSV")
    p.add_argument("--samples", type=int, default=200, help="sampled fused matrices per family and weight")
    p.add_argument("--points", type=int, default=128, help="points per ellipse")
    p.set_defaults(func=cmd_figures)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParameterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAM
    except NotPositiveDefiniteError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NOT_PD
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
