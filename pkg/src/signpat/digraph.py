"""Signed digraphs of sign patterns and recognition of cycle-graph patterns.

A pattern is in *cycle form* when its nonzero entries sit on the diagonal,
the super- and subdiagonal and the corners ``(0, n-1)``, ``(n-1, 0)``, with
every edge ``{i, i+1 mod n}`` carrying a nonzero entry in at least one
direction.  Forward arcs are ``i -> i+1 mod n``, backward arcs ``i+1 -> i``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import FrozenSet, List, Sequence, Set, Tuple

from .pattern import PLUS, ZERO, PermuteSimilar, Sign, SignPattern, apply_symmetry, split_parts

PATH_ENUMERATION_BOUND = 12


class NotCycleFormError(ValueError):
    pass


class EnumerationBoundError(ValueError):
    pass


@dataclass(frozen=True)
class SignedDigraph:
    n: int
    arcs: FrozenSet[Tuple[int, int, Sign]]

    def successors(self, i: int, loops: bool = False) -> List[int]:
        return sorted(j for (u, j, _) in self.arcs if u == i and (loops or j != i))


@dataclass(frozen=True)
class SignedPath:
    vertices: Tuple[int, ...]
    sign: Sign

    @property
    def length(self) -> int:
        return len(self.vertices) - 1


class Orientation(enum.Enum):
    FORWARD = "forward"
    BACKWARD = "backward"


@dataclass(frozen=True, order=True)
class CycleLabeling:
    """Relabeling that puts a cycle-graph pattern into cycle form.

    ``perm[k]`` is the original vertex placed at position ``k`` of the
    cycle; ``reflected`` records the traversal direction relative to the
    first discovered orientation.
    """

    perm: Tuple[int, ...]
    reflected: bool = False

    def apply(self, pattern: SignPattern) -> SignPattern:
        return apply_symmetry(pattern, PermuteSimilar(self.perm))

    def original(self, k: int) -> int:
        return self.perm[k]


def build_digraph(pattern: SignPattern) -> SignedDigraph:
    return SignedDigraph(pattern.n, frozenset(pattern.nonzero()))


def _reachable(adj: Sequence[Sequence[int]], start: int) -> Set[int]:
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    return seen


def is_irreducible(pattern: SignPattern) -> bool:
    """True iff ``D(A)`` is strongly connected."""
    n = pattern.n
    if n == 1:
        return True
    e = pattern.entries
    out_adj = [[j for j in range(n) if j != i and e[i][j]] for i in range(n)]
    in_adj = [[j for j in range(n) if j != i and e[j][i]] for i in range(n)]
    return len(_reachable(out_adj, 0)) == n and len(_reachable(in_adj, 0)) == n


def is_ap_irreducible(pattern: SignPattern) -> bool:
    """Every row and column has a ``+`` and both ``A`` and ``B_A`` are irreducible."""
    e, n = pattern.entries, pattern.n
    if any(PLUS not in row for row in e):
        return False
    if any(all(e[i][j] is not PLUS for i in range(n)) for j in range(n)):
        return False
    _, _, b = split_parts(pattern)
    return is_irreducible(pattern) and is_irreducible(b)


def two_cycle_signs(pattern: SignPattern) -> List[Tuple[int, int, Sign]]:
    """Directed 2-cycles ``(i, j, sign)`` with ``i < j``."""
    e, n = pattern.entries, pattern.n
    return [(i, j, e[i][j] * e[j][i]) for i in range(n) for j in range(i + 1, n)
            if e[i][j] and e[j][i]]


# --- cycle form ------------------------------------------------------------------

def is_cycle_form(pattern: SignPattern) -> bool:
    n = pattern.n
    if n < 3:
        return False
    e = pattern.entries
    for i in range(n):
        for j in range(n):
            d = (j - i) % n
            if e[i][j] and d not in (0, 1, n - 1):
                return False
    return all(e[i][(i + 1) % n] or e[(i + 1) % n][i] for i in range(n))


def forward_signs(pattern: SignPattern) -> Tuple[Sign, ...]:
    """``a[i, i+1 mod n]`` for ``i = 0..n-1``."""
    n = pattern.n
    return tuple(pattern.entries[i][(i + 1) % n] for i in range(n))


def backward_signs(pattern: SignPattern) -> Tuple[Sign, ...]:
    """``a[i+1 mod n, i]`` for ``i = 0..n-1``; the last one is the corner ``a[0, n-1]``."""
    n = pattern.n
    return tuple(pattern.entries[(i + 1) % n][i] for i in range(n))


def monotone_n_cycles(pattern: SignPattern) -> Set[Tuple[Orientation, Sign]]:
    """Hamiltonian directed cycles of one sign in a cycle-form pattern."""
    if not is_cycle_form(pattern):
        raise NotCycleFormError("pattern is not in cycle form")
    found = set()
    for orient, word in ((Orientation.FORWARD, forward_signs(pattern)),
                         (Orientation.BACKWARD, backward_signs(pattern))):
        if word[0] is not ZERO and all(s is word[0] for s in word):
            found.add((orient, word[0]))
    return found


def _cycle_order(pattern: SignPattern) -> List[int] | None:
    """Vertex order of ``G(A)`` when it is a single n-cycle, else None."""
    n = pattern.n
    if n < 3:
        return None
    e = pattern.entries
    nbrs = [[j for j in range(n) if j != i and (e[i][j] or e[j][i])] for i in range(n)]
    if any(len(nb) != 2 for nb in nbrs):
        return None
    order = [0]
    prev, cur = None, 0
    while True:
        a, b = nbrs[cur]
        nxt = a if a != prev else b
        if nxt == 0:
            break
        if nxt in order:
            return None
        order.append(nxt)
        prev, cur = cur, nxt
    return order if len(order) == n else None


def cycle_form_labelings(pattern: SignPattern) -> List[CycleLabeling]:
    """All ``2n`` rotation/reflection labelings into cycle form, sorted.

    Empty when ``G(A)`` is not an n-cycle (always empty for ``n < 3``).
    """
    order = _cycle_order(pattern)
    if order is None:
        return []
    n = len(order)
    labelings = []
    for reflected, seq in ((False, order), (True, [order[0]] + order[:0:-1])):
        for k in range(n):
            perm = tuple(seq[k:] + seq[:k])
            lab = CycleLabeling(perm, reflected)
            if not is_cycle_form(lab.apply(pattern)):
                raise AssertionError(f"labeling {perm} failed to produce cycle form")
            labelings.append(lab)
    labelings.sort(key=lambda lab: lab.perm)
    return labelings


# --- paths -------------------------------------------------------------------------

def signed_paths(pattern: SignPattern, s: int, r: int,
                 bound: int = PATH_ENUMERATION_BOUND) -> List[SignedPath]:
    """All simple directed paths from ``s`` to ``r`` in lexicographic order.

    Loops are ignored.  Exhaustive DFS, so the order is capped at ``bound``.
    """
    n = pattern.n
    if n > bound:
        raise EnumerationBoundError(f"order {n} exceeds path enumeration bound {bound}")
    if s == r:
        raise ValueError("path endpoints must differ")
    e = pattern.entries
    out: List[SignedPath] = []
    path = [s]
    on_path = [False] * n
    on_path[s] = True

    def dfs(u: int, sign: Sign) -> None:
        for v in range(n):
            if v == u or on_path[v] or not e[u][v]:
                continue
            nsign = sign * e[u][v]
            path.append(v)
            if v == r:
                out.append(SignedPath(tuple(path), nsign))
            else:
                on_path[v] = True
                dfs(v, nsign)
                on_path[v] = False
            path.pop()

    dfs(s, PLUS)
    return out

