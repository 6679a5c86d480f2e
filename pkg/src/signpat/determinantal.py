"""Determinant expansion over sign patterns.

Everything here enumerates the nonzero terms of the standard determinant
expansion by backtracking over the nonzero support, so cost grows like the
permanent of the support matrix.  Orders above ``DET_ENUMERATION_BOUND``
are refused.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, List, Sequence, Tuple

from .digraph import EnumerationBoundError, signed_paths
from .pattern import MINUS, PLUS, ZERO, ExtendedSign, ExtendedSignPattern, Sign, SignPattern

DET_ENUMERATION_BOUND = 10


class NotSnsError(ValueError):
    pass


@dataclass(frozen=True)
class PermTerm:
    """One term ``sgn(sigma) * prod a[i, sigma(i)]`` of the expansion."""

    sigma: Tuple[int, ...]
    sign: Sign


@dataclass(frozen=True)
class SnsReport:
    is_sns: bool
    witness_terms: Tuple[PermTerm, ...] = ()


@dataclass(frozen=True)
class AdjSignReport:
    """Sign of each entry of ``adj(B)`` over ``B in Q(A)``; ``ANY`` if it varies."""

    entries: ExtendedSignPattern

    def __getitem__(self, ij: Tuple[int, int]) -> ExtendedSign:
        return self.entries[ij]


def permutation_parity(sigma: Sequence[int]) -> Sign:
    """+ for even permutations, - for odd ones (cycle count)."""
    n = len(sigma)
    seen = [False] * n
    transpositions = 0
    for i in range(n):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = sigma[j]
            length += 1
        transpositions += length - 1
    return MINUS if transpositions % 2 else PLUS


def _grid_terms(grid: Sequence[Sequence[Sign]]) -> Iterator[PermTerm]:
    n = len(grid)
    if n == 0:
        yield PermTerm((), PLUS)
        return
    support = [[j for j in range(n) if grid[i][j]] for i in range(n)]
    used = [False] * n
    sigma = [0] * n

    def rec(i: int, prod: Sign) -> Iterator[PermTerm]:
        if i == n:
            yield PermTerm(tuple(sigma), permutation_parity(sigma) * prod)
            return
        for j in support[i]:
            if not used[j]:
                used[j] = True
                sigma[i] = j
                yield from rec(i + 1, prod * grid[i][j])
                used[j] = False

    yield from rec(0, PLUS)


def _check_bound(n: int, bound: int) -> None:
    if n > bound:
        raise EnumerationBoundError(f"order {n} exceeds determinant enumeration bound {bound}")


def det_terms(pattern: SignPattern, bound: int = DET_ENUMERATION_BOUND) -> Iterator[PermTerm]:
    """Yield the nonzero terms of the determinant expansion of ``pattern``."""
    _check_bound(pattern.n, bound)
    return _grid_terms(pattern.entries)


def _sns_of_terms(terms: Iterator[PermTerm]) -> SnsReport:
    first = None
    for term in terms:
        if first is None:
            first = term
        elif term.sign is not first.sign:
            return SnsReport(False, (first, term))
    if first is None:
        return SnsReport(False, ())
    return SnsReport(True, (first,))


def is_sns(pattern: SignPattern, bound: int = DET_ENUMERATION_BOUND) -> SnsReport:
    """Sign-nonsingularity: a nonzero term exists and all share its sign."""
    return _sns_of_terms(det_terms(pattern, bound))


def requires_singularity(pattern: SignPattern, bound: int = DET_ENUMERATION_BOUND) -> bool:
    # A single nonzero term can always be made to dominate, so the
    # pattern requires singularity exactly when no nonzero term exists.
    return next(det_terms(pattern, bound), None) is None


def _aggregate(signs) -> ExtendedSign:
    seen = set()
    for s in signs:
        if s is not ZERO:
            seen.add(s)
            if len(seen) > 1:
                return ExtendedSign.ANY
    if not seen:
        return ExtendedSign.ZERO
    return ExtendedSign.exact(seen.pop())


def adjugate_sign(pattern: SignPattern, bound: int = DET_ENUMERATION_BOUND) -> AdjSignReport:
    """Qualitative adjugate of an SNS pattern.

    Entry ``(s, r)`` with ``s != r`` collects ``(-1)^l sign(path) sign(term)``
    over every directed path ``s -> r`` of length ``l`` and every nonzero
    term of the complementary principal submatrix.  Diagonal entries use the
    terms of the principal minor with row and column ``r`` removed.
    """
    _check_bound(pattern.n, bound)
    if not is_sns(pattern, bound).is_sns:
        raise NotSnsError("adjugate_sign requires a sign-nonsingular pattern")
    n = pattern.n
    grid: List[List[ExtendedSign]] = [[ExtendedSign.ZERO] * n for _ in range(n)]
    for r in range(n):
        keep = [k for k in range(n) if k != r]
        minor = [[pattern.entries[i][j] for j in keep] for i in keep]
        grid[r][r] = _aggregate(t.sign for t in _grid_terms(minor))
    for s in range(n):
        for r in range(n):
            if s == r:
                continue

            def contributions(s=s, r=r):
                for path in signed_paths(pattern, s, r, bound=max(bound, n)):
                    covered = set(path.vertices)
                    rest = [k for k in range(n) if k not in covered]
                    sub = [[pattern.entries[i][j] for j in rest] for i in rest]
                    lead = (MINUS if path.length % 2 else PLUS) * path.sign
                    for term in _grid_terms(sub):
                        yield lead * term.sign

            grid[s][r] = _aggregate(contributions())
    return AdjSignReport(ExtendedSignPattern(tuple(tuple(row) for row in grid)))
