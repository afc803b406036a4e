"""Command line front end: ``pair``, ``phi``, ``candidates`` and ``verify``."""
from __future__ import annotations

import argparse
import json
import sys
from typing import Optional, Sequence

from .campaign import CheckpointMismatch, run_campaign
from .config import SolverConfig, default_jobs
from .cyclotomic import ResourceLimitError, phi_eval_exact
from .cycint import DEPENDENT, TORSION, decide_pair
from .search import subset_plans, y_candidates

EXIT_OK = 0
EXIT_DEPENDENT = 10
EXIT_TORSION = 11
EXIT_USAGE = 64
EXIT_DATA = 65
EXIT_IO = 74


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _base(m: int, k: int) -> str:
    if m == 0:
        return f"z{k}"
    return f"({-m} + z{k})"


def cmd_pair(args) -> int:
    m, n, k = args.m, args.n, args.k
    if k < 3:
        raise UsageError(f"k must be at least 3, got {k}")
    if m == n:
        raise UsageError("m and n must differ")
    notes = []
    if k % 4 == 2:
        notes.append(f"k={k} is 2 mod 4: using k={k // 2} with bases negated")
        k, m, n = k // 2, -m, -n
    verdict = decide_pair(m, n, k)
    report = {"m": m, "n": n, "k": k, "a": abs(n - m), "verdict": verdict.kind, "notes": notes}
    if verdict.kind == DEPENDENT:
        w = verdict.witness
        r, s = w.full_exponents
        report.update(r0=w.r0, s0=w.s0, sign=w.sign, j=w.j, full_r=r, full_s=s)
    elif verdict.kind == TORSION:
        report["torsion_base"] = verdict.torsion_base
    if verdict.audit:
        report["audit"] = "both bases are units"
        if verdict.kind == DEPENDENT:
            notes.append("both bases are units and yet dependent")

    if args.json:
        print(json.dumps(report))
    else:
        for note in notes:
            print(f"note: {note}")
        alpha, beta = _base(m, k), _base(n, k)
        if verdict.kind == DEPENDENT:
            sgn = "-" if report["sign"] < 0 else "+"
            print(f"dependent: {alpha}^{report['r0']} = {sgn}z{k}^{report['j']} * {beta}^{report['s0']}")
            print(f"witness (r0,s0,sign,j) = ({report['r0']},{report['s0']},{sgn},{report['j']})")
            print(f"full relation: {alpha}^{report['full_r']} = {beta}^{report['full_s']}")
        elif verdict.kind == TORSION:
            print(f"torsion base: {verdict.torsion_base} is a root of unity")
        else:
            print(f"independent: {alpha} and {beta}")
    return {DEPENDENT: EXIT_DEPENDENT, TORSION: EXIT_TORSION}.get(verdict.kind, EXIT_OK)


def cmd_phi(args) -> int:
    if args.k < 3:
        raise UsageError(f"k must be at least 3, got {args.k}")
    try:
        value = phi_eval_exact(args.k, args.x, SolverConfig().bit_ceiling)
    except ResourceLimitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    print(value)
    return EXIT_OK


def candidate_rows(a: int) -> list[dict]:
    rows = []
    for plan in subset_plans(a):
        row = plan.to_record()
        row["Y"] = {str(k): y_candidates(k, plan.S, plan.nu) for k in plan.candidate_k}
        rows.append(row)
    return rows


def cmd_candidates(args) -> int:
    if args.a < 1:
        raise UsageError(f"a must be positive, got {args.a}")
    rows = candidate_rows(args.a)
    if args.json:
        print(json.dumps({"a": args.a, "subsets": rows}))
        return EXIT_OK
    print(f"{'S':<20} {'M':>8} {'G':>8} {'K':>10}  candidate k / Y")
    for row in rows:
        S = "{" + ",".join(map(str, row["S"])) + "}"
        G = "-" if row["G"] is None else str(row["G"])
        ks = ", ".join(f"{k}:{row['Y'][str(k)]}" for k in row["candidate_k"]) or "-"
        print(f"{S:<20} {row['M']:>8} {G:>8} {row['K']:>10}  {ks}")
    return EXIT_OK


def _parse_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(t) for t in text.split(":"))
    except ValueError:
        raise UsageError(f"range must look like lo:hi, got {text!r}") from None
    if lo < 1 or hi < lo:
        raise UsageError(f"invalid range {lo}:{hi}")
    return lo, hi


def cmd_verify(args) -> int:
    if args.a is not None:
        if args.a < 1:
            raise UsageError(f"a must be positive, got {args.a}")
        lo = hi = args.a
    else:
        lo, hi = _parse_range(args.range)
    try:
        jobs = args.jobs if args.jobs is not None else default_jobs()
        cfg = SolverConfig(
            exact_degree_threshold=args.exact_degree_threshold,
            sieve_prime_bound=args.sieve_prime_bound,
            jobs=jobs,
            checkpoint_path=args.checkpoint,
            output_path=args.out,
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None

    def progress(a: int) -> None:
        print(f"progress: a={a} ({a - lo + 1}/{hi - lo + 1})", file=sys.stderr, flush=True)

    try:
        summary = run_campaign(
            lo, hi, cfg,
            out=args.out,
            checkpoint=args.checkpoint,
            timing=not args.no_timing,
            progress=progress,
        )
    except CheckpointMismatch as exc:
        raise UsageError(str(exc)) from None
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO

    dest = sys.stdout if args.out else sys.stderr
    print(summary.line(), file=dest)
    for a, m, k in summary.exception_values:
        print(f"exception: a={a} m={m} k={k}", file=dest)
    return EXIT_DEPENDENT if summary.exceptions else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="cycdep", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("pair", help="decide dependence of -m+zeta_k and -n+zeta_k")
    p.add_argument("-m", type=int, required=True)
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-k", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_pair)

    p = sub.add_parser("phi", help="print Phi_k(x) exactly")
    p.add_argument("-k", type=int, required=True)
    p.add_argument("-x", type=int, required=True)
    p.set_defaults(func=cmd_phi)

    p = sub.add_parser("candidates", help="per-subset candidate k and Y for a gap a")
    p.add_argument("-a", type=int, required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_candidates)

    p = sub.add_parser("verify", help="search a gap or a range of gaps for dependent pairs")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("-a", type=int)
    g.add_argument("--range", metavar="LO:HI")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: $CYCDEP_JOBS or 1)")
    p.add_argument("--checkpoint", metavar="PATH")
    p.add_argument("--out", metavar="PATH")
    p.add_argument("--exact-degree-threshold", type=int, default=20000)
    p.add_argument("--sieve-prime-bound", type=int, default=1000)
    p.add_argument("--no-timing", action="store_true", help="write elapsed_ms as null")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"cycdep {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
