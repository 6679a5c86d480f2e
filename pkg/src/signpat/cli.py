"""``signpat`` command line: classify, verify and census."""

from __future__ import annotations

import argparse
import sys
from typing import List, Optional, Sequence

from .census import (DEFAULT_SAMPLES, DISAGREE, CensusConfig, CensusError, report_row, run_census,
                     summarize, write_csv)
from .oracle import DEFAULT_TOLERANCES
from .pattern import PatternParseError, SignPattern, parse_patterns

EXIT_OK, EXIT_DISAGREE, EXIT_USAGE = 0, 1, 2


def _load(path: str) -> List[SignPattern]:
    """Parse every pattern in ``path``; errors carry ``file:line`` context."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise CensusError(f"{path}: {exc.strerror}") from None
    try:
        patterns = parse_patterns(text)
    except PatternParseError as exc:
        raise CensusError(f"{path}: {exc}") from None
    if not patterns:
        raise CensusError(f"{path}: no patterns found")
    return patterns


def cmd_classify(args) -> int:
    patterns = _load(args.file)
    rows = [report_row(k, p) for k, p in enumerate(patterns)]
    write_csv(rows, sys.stdout, args.flags)
    return EXIT_OK


def cmd_verify(args) -> int:
    if args.samples < 1:
        raise CensusError("--samples must be >= 1")
    patterns = _load(args.file)
    tols = DEFAULT_TOLERANCES.scaled(args.tol)
    rows = [report_row(k, p, args.samples, args.seed, tols, corrupt=args.invert_verdicts)
            for k, p in enumerate(patterns)]
    write_csv(rows, sys.stdout, args.flags)
    return EXIT_DISAGREE if any(r.oracle == DISAGREE for r in rows) else EXIT_OK


def cmd_census(args) -> int:
    cfg = CensusConfig(n=args.n, zero_diag=args.zero_diag, forward_positive=args.forward_positive,
                       random=args.random, dedupe=args.dedupe, samples=args.samples, seed=args.seed,
                       tolerances=DEFAULT_TOLERANCES.scaled(args.tol), jobs=args.jobs)
    rows = run_census(cfg)
    with open(args.out, "w", encoding="utf-8", newline="") as fh:
        write_csv(rows, fh, args.flags)
    print(f"{len(rows)} patterns written to {args.out}")
    for (verdict, rule, oracle), count in sorted(summarize(rows).items()):
        print(f"{verdict:12s} {rule or '-':10s} {oracle:12s} {count}")
    return EXIT_DISAGREE if any(r.oracle == DISAGREE for r in rows) else EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="signpat", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--flags", action="store_true", help="append a flags column to the CSV")

    p = sub.add_parser("classify", help="classify every pattern in a file")
    p.add_argument("file")
    common(p)
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("verify", help="classify and cross-check against the numerical oracle")
    p.add_argument("file")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1.0, help="multiplier on the default tolerances")
    p.add_argument("--invert-verdicts", action="store_true", help=argparse.SUPPRESS)
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("census", help="enumerate cycle patterns of one order")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--zero-diag", action="store_true")
    p.add_argument("--forward-positive", action="store_true")
    p.add_argument("--dedupe", action="store_true", help="one row per dihedral/negation orbit")
    p.add_argument("--random", type=int, default=None, metavar="M", help="sample M patterns instead")
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, help="oracle samples (0 skips the oracle)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=1.0, help="multiplier on the default tolerances")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", required=True)
    common(p)
    p.set_defaults(func=cmd_census)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CensusError, ValueError) as exc:
        print(f"signpat: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
