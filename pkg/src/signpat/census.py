"""Batch classification, oracle cross-checks and census enumeration.

Census patterns have the cycle ``0 -> 1 -> ... -> n-1 -> 0`` as their graph:
each edge ``{i, i+1}`` takes one of the eight sign pairs that are not both
zero and each diagonal entry one of three signs.  Patterns are addressed by
a mixed-radix index so work can be split by index range and merged back in
order.
"""

from __future__ import annotations

import csv
import io
import itertools
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, fields, replace
from typing import Iterable, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from .classifier import Outcome, Verdict, classify
from .oracle import DEFAULT_TOLERANCES, OracleOutcome, Tolerances, counterexample_search, mc_requires
from .pattern import MINUS, PLUS, ZERO, QSampleConfig, Sign, SignPattern

EXHAUSTIVE_MAX_ORDER = 4
DEFAULT_SAMPLES = 50

AGREE, DISAGREE, SKIPPED, INCONCLUSIVE = "agree", "disagree", "skipped", "inconclusive"

_EDGE_PAIRS: Tuple[Tuple[Sign, Sign], ...] = tuple(
    (f, g) for f in (MINUS, ZERO, PLUS) for g in (MINUS, ZERO, PLUS) if f or g)
_FORWARD_PLUS_PAIRS = tuple(p for p in _EDGE_PAIRS if p[0] is PLUS)
_DIAGONAL = (MINUS, ZERO, PLUS)


class CensusError(ValueError):
    pass


@dataclass(frozen=True)
class ReportRow:
    id: int
    n: int
    pattern: str
    verdict: str
    rule: str
    gate: str
    oracle: str
    samples: int
    seed: int
    flags: str = ""

    @classmethod
    def columns(cls, with_flags: bool = False) -> List[str]:
        names = [f.name for f in fields(cls)]
        return names if with_flags else names[:-1]

    def values(self, with_flags: bool = False) -> list:
        return [getattr(self, c) for c in self.columns(with_flags)]


@dataclass(frozen=True)
class CensusConfig:
    n: int
    zero_diag: bool = False
    forward_positive: bool = False
    random: Optional[int] = None
    dedupe: bool = False
    samples: int = DEFAULT_SAMPLES
    seed: int = 0
    tolerances: Tolerances = DEFAULT_TOLERANCES
    jobs: int = 1

    def __post_init__(self):
        if self.n < 3:
            raise CensusError("census orders start at 3 (smaller graphs are not cycles)")
        if self.random is None and self.n > EXHAUSTIVE_MAX_ORDER:
            raise CensusError(f"exhaustive census is limited to n <= {EXHAUSTIVE_MAX_ORDER}; "
                              "use --random")
        if self.random is not None and self.random < 1:
            raise CensusError("random count must be >= 1")
        if self.samples < 0:
            raise CensusError("samples must be >= 0")


# --- enumeration --------------------------------------------------------------------

def _choices(cfg: CensusConfig):
    pairs = _FORWARD_PLUS_PAIRS if cfg.forward_positive else _EDGE_PAIRS
    diag = (ZERO,) if cfg.zero_diag else _DIAGONAL
    return pairs, diag


def census_size(cfg: CensusConfig) -> int:
    """Number of raw patterns before deduplication."""
    if cfg.random is not None:
        return cfg.random
    pairs, diag = _choices(cfg)
    return len(pairs) ** cfg.n * len(diag) ** cfg.n


def assemble(n: int, pairs: Sequence[Tuple[Sign, Sign]], diag: Sequence[Sign]) -> SignPattern:
    """Pattern with ``a[i, i+1] , a[i+1, i] = pairs[i]`` and ``a[i, i] = diag[i]``."""
    e = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        j = (i + 1) % n
        e[i][i] = diag[i]
        e[i][j], e[j][i] = pairs[i]
    return SignPattern(tuple(map(tuple, e)))


def pattern_at(cfg: CensusConfig, index: int) -> SignPattern:
    """Decode the exhaustive-census pattern with the given index.

    The last diagonal entry varies fastest, then the earlier diagonal
    entries, then the edges from the last to the first.
    """
    pairs, diag = _choices(cfg)
    n = cfg.n
    d = []
    for _ in range(n):
        index, r = divmod(index, len(diag))
        d.append(diag[r])
    p = []
    for _ in range(n):
        index, r = divmod(index, len(pairs))
        p.append(pairs[r])
    return assemble(n, p[::-1], d[::-1])


def random_patterns(cfg: CensusConfig) -> Iterator[SignPattern]:
    """``cfg.random`` patterns drawn uniformly (with replacement) from the census space."""
    pairs, diag = _choices(cfg)
    rng = np.random.default_rng(cfg.seed)
    for _ in range(cfg.random):
        pi = rng.integers(len(pairs), size=cfg.n)
        di = rng.integers(len(diag), size=cfg.n)
        yield assemble(cfg.n, [pairs[k] for k in pi], [diag[k] for k in di])


def enumerate_patterns(cfg: CensusConfig) -> Iterator[SignPattern]:
    if cfg.random is not None:
        yield from random_patterns(cfg)
    else:
        for k in range(census_size(cfg)):
            yield pattern_at(cfg, k)


def dihedral_images(pattern: SignPattern) -> Iterator[SignPattern]:
    """The ``4n`` relabelings of the cycle ``0..n-1`` (rotations, reflections) with and without negation."""
    n = pattern.n
    e = pattern.entries
    for start in range(n):
        for step in (1, -1):
            perm = [(start + step * k) % n for k in range(n)]
            image = SignPattern(tuple(tuple(e[perm[i]][perm[j]] for j in range(n)) for i in range(n)))
            yield image
            yield -image


def canonical_form(pattern: SignPattern) -> SignPattern:
    """Orbit representative: least compact text over the dihedral and negation images."""
    return min(dihedral_images(pattern), key=lambda p: p.compact())


def census_patterns(cfg: CensusConfig) -> List[SignPattern]:
    """Patterns to classify, in index order; one canonical representative per
    orbit when ``cfg.dedupe`` is set."""
    if not cfg.dedupe:
        return list(enumerate_patterns(cfg))
    seen = set()
    out = []
    for p in enumerate_patterns(cfg):
        c = canonical_form(p)
        key = c.compact()
        if key not in seen:
            seen.add(key)
            out.append(c)
    return out


# --- rows -------------------------------------------------------------------------------

def oracle_check(pattern: SignPattern, verdict: Verdict, samples: int, seed: int,
                 tols: Tolerances = DEFAULT_TOLERANCES) -> str:
    """Compare a verdict with the numerical oracle.

    Requires is checked by sampling ``Q(A)``; NotRequires by searching for a
    non-AP member.  NotCycle verdicts and ``samples == 0`` are skipped.
    """
    if samples == 0 or verdict.outcome is Outcome.NOT_CYCLE:
        return SKIPPED
    cfg = QSampleConfig(seed=seed)
    if verdict.outcome is Outcome.REQUIRES:
        res = mc_requires(pattern, samples, cfg, tols)
        if res.outcome is OracleOutcome.INCONCLUSIVE:
            return INCONCLUSIVE
        return AGREE if res.outcome is OracleOutcome.ALL_SAMPLES_AP else DISAGREE
    found = counterexample_search(pattern, cfg, tols)
    return AGREE if found is not None else DISAGREE


def invert(verdict: Verdict) -> Verdict:
    """Swap Requires and NotRequires; used to self-test the verify harness."""
    flipped = {Outcome.REQUIRES: Outcome.NOT_REQUIRES, Outcome.NOT_REQUIRES: Outcome.REQUIRES}
    return replace(verdict, outcome=flipped.get(verdict.outcome, verdict.outcome))


def make_row(index: int, pattern: SignPattern, verdict: Verdict, oracle: str = SKIPPED,
             samples: int = 0, seed: int = 0) -> ReportRow:
    return ReportRow(index, pattern.n, pattern.compact(), verdict.outcome.value, verdict.rule_name,
                     verdict.gate_name, oracle, samples, seed, ";".join(sorted(verdict.flags)))


def report_row(index: int, pattern: SignPattern, samples: int = 0, seed: int = 0,
               tols: Tolerances = DEFAULT_TOLERANCES, corrupt: bool = False) -> ReportRow:
    verdict = classify(pattern)
    if corrupt:
        verdict = invert(verdict)
    oracle = oracle_check(pattern, verdict, samples, seed, tols) if samples else SKIPPED
    return make_row(index, pattern, verdict, oracle, samples, seed)


def _rows_chunk(args) -> List[ReportRow]:
    start, texts, samples, seed, tols = args
    return [report_row(start + k, SignPattern.from_compact(t), samples, seed, tols)
            for k, t in enumerate(texts)]


def run_rows(patterns: Sequence[SignPattern], samples: int, seed: int,
             tols: Tolerances = DEFAULT_TOLERANCES, jobs: int = 1) -> List[ReportRow]:
    """Rows for every pattern; with ``jobs > 1`` index ranges go to worker
    processes and come back in index order."""
    if jobs <= 1 or len(patterns) < 2:
        return [report_row(k, p, samples, seed, tols) for k, p in enumerate(patterns)]
    size = max(1, -(-len(patterns) // (jobs * 8)))
    chunks = [(s, [p.compact() for p in patterns[s:s + size]], samples, seed, tols)
              for s in range(0, len(patterns), size)]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(itertools.chain.from_iterable(pool.map(_rows_chunk, chunks)))


def run_census(cfg: CensusConfig) -> List[ReportRow]:
    return run_rows(census_patterns(cfg), cfg.samples, cfg.seed, cfg.tolerances, cfg.jobs)


def summarize(rows: Iterable[ReportRow]) -> Counter:
    """Row counts keyed by (verdict, rule or gate, oracle)."""
    return Counter((r.verdict, r.rule or r.gate, r.oracle) for r in rows)


# --- CSV ----------------------------------------------------------------------------------

def write_csv(rows: Iterable[ReportRow], out, with_flags: bool = False) -> None:
    writer = csv.writer(out, lineterminator="\n")
    writer.writerow(ReportRow.columns(with_flags))
    for row in rows:
        writer.writerow(row.values(with_flags))


def rows_to_csv(rows: Iterable[ReportRow], with_flags: bool = False) -> str:
    buf = io.StringIO()
    write_csv(rows, buf, with_flags)
    return buf.getvalue()


def read_csv(text: str) -> List[ReportRow]:
    out = []
    for rec in csv.DictReader(io.StringIO(text)):
        out.append(ReportRow(int(rec["id"]), int(rec["n"]), rec["pattern"], rec["verdict"], rec["rule"],
                             rec["gate"], rec["oracle"], int(rec["samples"]), int(rec["seed"]),
                             rec.get("flags", "") or ""))
    return out
