"""Command-line interface: ``measdisc <subcommand> ...``.

Exit codes: 0 success, 1 a check or reproduction row failed, 2 usage error.
The default seed comes from ``MEASDISC_SEED`` (0 if unset); ``--seed``
overrides it.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys

from . import constructions as C
from .catalog import TagError, ensemble_entry, parse_state
from .entangled import SolverConfig, b_value_optimal, b_value_with_bob, steering_witness
from .measurements import ensemble_to_dict, matrix_to_json, validate
from .reproduce import TABLES, reproduce
from .single_system import OptimizerConfig, optimize_d

SEED_ENV = "MEASDISC_SEED"


class UsageError(Exception):
    pass


def _default_seed() -> int:
    raw = os.environ.get(SEED_ENV)
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise UsageError(f"{SEED_ENV} must be an integer, got {raw!r}") from None


def _fmt(x) -> str:
    if isinstance(x, float):
        return f"{x:.6g}"
    return str(x)


def _table(headers: list[str], rows: list[list]) -> str:
    cells = [headers] + [[_fmt(c) for c in row] for row in rows]
    widths = [max(len(r[i]) for r in cells) for i in range(len(headers))]
    lines = ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in cells]
    lines.insert(1, "  ".join("-" * w for w in widths))
    return "\n".join(lines)


def _dump(doc) -> str:
    return json.dumps(doc, indent=2, sort_keys=True)


def _optimizer_args(p: argparse.ArgumentParser):
    p.add_argument("--restarts", type=int, default=None, help="local searches (default 50*(d-1))")
    p.add_argument("--max-evals", type=int, default=5000, help="evaluations per local search")
    p.add_argument("--tol", type=float, default=1e-9, help="simplex diameter stopping tolerance")
    p.add_argument("--seed", type=int, default=None, help=f"root seed (default ${SEED_ENV} or 0)")


def _cfg(args) -> OptimizerConfig:
    seed = args.seed if args.seed is not None else _default_seed()
    return OptimizerConfig(args.restarts, args.max_evals, args.tol, seed)


def cmd_reproduce(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    rows = reproduce(args.table, restarts=args.restarts, seed=seed)
    if args.json:
        print(_dump([r.to_dict(timing=args.timing) for r in rows]))
    elif args.csv:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["table", "label", "paper_value", "computed", "tolerance", "pass", "runtime_ms"])
        for r in rows:
            writer.writerow([r.table, r.label, _fmt(r.paper_value), _fmt(r.computed),
                             _fmt(r.tolerance), r.passed, r.runtime_ms])
        sys.stdout.write(buf.getvalue())
    else:
        print(_table(
            ["table", "label", "paper", "computed", "tol", "pass", "ms"],
            [[r.table, r.label, r.paper_value, r.computed, r.tolerance,
              "PASS" if r.passed else "FAIL", r.runtime_ms] for r in rows],
        ))
    return 0 if all(r.passed for r in rows) else 1


def cmd_validate(args) -> int:
    entry = ensemble_entry(args.tag)
    cert = validate(entry.ensemble, args.tol)
    conditions = entry.conditions()
    ok = cert.ok and all(c.satisfied for c in list(conditions.values())[:1])
    if args.json:
        print(_dump({"tag": args.tag, "certificate": cert.to_dict(),
                     "conditions": {k: v.to_dict() for k, v in conditions.items()}, "ok": ok}))
    else:
        print(f"ensemble {args.tag}: dim={entry.ensemble.dim} settings={entry.ensemble.n_settings} "
              f"outcomes={entry.ensemble.n_outcomes}")
        print(f"  valid POVMs:          {list(cert.povm_valid)}")
        print(f"  projective:           {list(cert.projective)}")
        print(f"  completeness residual {cert.max_completeness_residual:.3e}")
        print(f"  negative eigenvalue   {cert.max_negative_eigenvalue:.3e}")
        for name, rep in conditions.items():
            print(f"  condition {name}: {'satisfied' if rep.satisfied else 'NOT satisfied'} "
                  f"witness={rep.witness} overlap={_fmt(rep.overlap)} ({rep.detail})")
        print("OK" if ok else "FAILED")
    return 0 if ok else 1


def cmd_compute_d(args) -> int:
    entry = ensemble_entry(args.tag)
    report = optimize_d(entry.ensemble, _cfg(args))
    if args.json:
        print(_dump({"tag": args.tag, **report.to_dict()}))
    else:
        print(f"D({args.tag}) = {report.value:.6g}  restarts={report.restarts_used} "
              f"spread={report.spread:.3g} converged={report.converged}")
    return 0


def cmd_compute_b(args) -> int:
    entry = ensemble_entry(args.ensemble)
    rho = parse_state(args.state)
    if args.bob == "proof":
        report = b_value_with_bob(rho, entry.ensemble, entry.proof_bob())
    else:
        report = b_value_optimal(rho, entry.ensemble, SolverConfig())
    if args.json:
        print(_dump({"state": args.state, "ensemble": args.ensemble, **report.to_dict()}))
    else:
        print(f"B({args.state}, {args.ensemble}) = {report.value:.6g}  method={report.method} "
              f"gap={report.gap:.3g} iterations={report.iterations}")
    return 0 if report.converged else 1


def cmd_witness(args) -> int:
    entry = ensemble_entry(args.ensemble)
    rho = parse_state(args.state)
    if args.d_value is not None:
        d_value = args.d_value
    else:
        d_value = optimize_d(entry.ensemble, _cfg(args)).value
    verdict = steering_witness(rho, entry.ensemble, d_value, margin=args.margin)
    if args.json:
        print(_dump({"state": args.state, "ensemble": args.ensemble, **verdict.to_dict()}))
    else:
        print(f"{verdict.verdict}: B={verdict.b_value:.6g} D={verdict.d_value:.6g} "
              f"gap={verdict.gap:.6g} margin={verdict.margin:g}")
    return 0


def cmd_export(args) -> int:
    entry = ensemble_entry(args.tag)
    if args.basis:
        if entry.basis is not None:
            vectors = [matrix_to_json(entry.basis.vectors)]
        elif entry.bases is not None:
            vectors = [matrix_to_json(b.vectors) for b in entry.bases]
        else:
            raise UsageError(f"{args.tag} has no basis to export")
        doc = {"dim": entry.ensemble.dim, "bases": vectors}
    else:
        doc = ensemble_to_dict(entry.ensemble)
        if entry.kind == "weyl":
            doc["outcome_index"] = "a = k*d + l for X^k Z^l"
    text = json.dumps(doc, indent=1)
    if args.output:
        with open(args.output, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="measdisc",
        description="Single-system and entanglement-assisted discrimination of quantum measurements.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("reproduce", help="recompute the reported values")
    p.add_argument("--table", default="all", choices=("all",) + TABLES)
    p.add_argument("--restarts", type=int, default=None, help="override restarts for every D row")
    p.add_argument("--seed", type=int, default=None)
    fmt = p.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true")
    fmt.add_argument("--csv", action="store_true")
    p.add_argument("--timing", action="store_true", help="include runtime_ms in JSON output")
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("validate", help="check POVM axioms and construction conditions")
    p.add_argument("tag")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_validate)

    p = sub.add_parser("compute-d", help="single-system distinguishability")
    p.add_argument("tag")
    _optimizer_args(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_compute_d)

    p = sub.add_parser("compute-b", help="entanglement-assisted distinguishability")
    p.add_argument("--state", required=True, help="maxent:d | werner:p | pure2q:alpha | file.json")
    p.add_argument("--ensemble", required=True)
    p.add_argument("--bob", choices=("proof", "optimal"), default="optimal")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_compute_b)

    p = sub.add_parser("witness", help="steering witness B > D + margin")
    p.add_argument("--state", required=True)
    p.add_argument("--ensemble", required=True)
    p.add_argument("--margin", type=float, default=1e-4)
    p.add_argument("--d-value", type=float, default=None, help="known D; computed when omitted")
    _optimizer_args(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_witness)

    p = sub.add_parser("export", help="write an ensemble (or its basis) as JSON")
    p.add_argument("tag")
    p.add_argument("--basis", action="store_true")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_export)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (TagError, UsageError, ValueError) as exc:
        # ValueError here means inputs that do not fit together, e.g. dimensions
        print(f"measdisc: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
