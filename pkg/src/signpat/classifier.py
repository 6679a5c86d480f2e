"""Decide whether a cycle-graph sign pattern requires algebraic positivity.

The decision runs in two stages.  Necessary conditions ("gates") are
checked first and any violation refutes the pattern.  Survivors are
dispatched on their loop and 2-cycle structure to one of four criteria:

* no loops: a monotone Hamiltonian cycle plus no vertex on 2-cycles of
  both signs (``LOOPLESS``);
* 2-cycles of both signs: the tridiagonal block criterion
  (``MIXED_TWO_CYCLES``);
* loops, and every 2-cycle negative: positive off-diagonal part, or an SNS
  pattern with nonpositive loops, or a positive loop
  (``NEG_TWO_CYCLES_*``);
* loops, and every 2-cycle positive: all off-diagonal entries of one sign
  (``SAME_SIGN_OFF_DIAGONAL``).

Rule and gate values are the short identifiers written to reports.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import FrozenSet, Iterator, List, Optional, Tuple

from .determinantal import is_sns, requires_singularity
from .digraph import (CycleLabeling, NotCycleFormError, backward_signs, cycle_form_labelings,
                      forward_signs, is_cycle_form, is_irreducible, monotone_n_cycles, two_cycle_signs)
from .pattern import (MINUS, PLUS, ZERO, ExtendedSign, ExtendedSignPattern, Sign, SignPattern,
                      matches_template)


class Outcome(enum.Enum):
    REQUIRES = "Requires"
    NOT_REQUIRES = "NotRequires"
    NOT_CYCLE = "NotCycle"


class Rule(enum.Enum):
    SAME_SIGN_OFF_DIAGONAL = "L3_9"
    LOOPLESS = "T3_10"
    NEG_TWO_CYCLES_POSITIVE_OFF_DIAGONAL = "T3_15_c1"
    NEG_TWO_CYCLES_SNS = "T3_15_c2"
    NEG_TWO_CYCLES_POSITIVE_LOOP = "T3_15_c3"
    MIXED_TWO_CYCLES = "T3_18"


class Gate(enum.Enum):
    REDUCIBLE = "L3_1_1"
    BA_REDUCIBLE = "L3_1_2"
    NO_MONOTONE_CYCLE = "L3_2"
    VERTEX_ON_BOTH_SIGNS = "L3_3"
    POSITIVE_LOOP_ON_NEGATIVE_TWO_CYCLE = "L3_4"


# Failed-criterion names reported when every gate passes but the
# dispatched criterion does not.
FAILED_LOOPLESS = "T3_10"
FAILED_MIXED = "T3_18_c2"
FAILED_NEGATIVE = "T3_15"
FAILED_SAME_SIGN = "L3_9"

FLAG_DERIVED = "derived_rule"
FLAG_CONDITION3 = "condition3_ambiguous"
FLAG_ISOLATED_LOOP = "isolated_positive_loop"
FLAG_MATCHING = "negative_perfect_matching"


@dataclass(frozen=True)
class GateViolation:
    """A violated necessary condition.

    ``detail`` holds vertex indices in the cycle-form frame the gates were
    evaluated in; ``negated`` is set when the condition was checked on ``-A``.
    """

    rule: Gate
    detail: Tuple[int, ...]
    negated: bool = False


class BlockKind(enum.Enum):
    TYPE_I = "I"
    TYPE_II = "II"


@dataclass(frozen=True)
class Block:
    vertices: Tuple[int, ...]
    kind: BlockKind

    @property
    def size(self) -> int:
        return len(self.vertices)


@dataclass(frozen=True)
class BlockDecomposition:
    """Contiguous tridiagonal blocks along the cycle.

    ``exact`` is False when a nonzero backward entry joins two blocks (a
    vertex lies on 2-cycles of both signs); then the blocks do not give a
    block upper-triangular split with single-entry couplings.
    """

    blocks: Tuple[Block, ...]
    exact: bool = True


@dataclass(frozen=True)
class Verdict:
    outcome: Outcome
    rule: Optional[Rule] = None
    violation: Optional[GateViolation] = None
    failed: Optional[str] = None
    labeling: Optional[CycleLabeling] = None
    negated: bool = False
    flags: FrozenSet[str] = field(default_factory=frozenset)

    @property
    def rule_name(self) -> str:
        """Rule that decided a Requires verdict, or the criterion that failed."""
        if self.rule is not None:
            return self.rule.value
        return self.failed or ""

    @property
    def gate_name(self) -> str:
        return self.violation.rule.value if self.violation else ""


# --- templates -----------------------------------------------------------------------

_P0, _ANY = ExtendedSign.PLUS_ZERO, ExtendedSign.ANY
_POS_LOOP_TEMPLATES = (
    ExtendedSignPattern(((_P0, ExtendedSign.PLUS), (ExtendedSign.PLUS, _ANY))),
    ExtendedSignPattern(((_ANY, ExtendedSign.PLUS), (ExtendedSign.PLUS, _P0))),
)


def type_one_template(k: int) -> ExtendedSignPattern:
    """Tridiagonal ``k x k``: ``-0`` diagonal, ``+`` above, ``-`` below."""
    rows = []
    for i in range(k):
        row = []
        for j in range(k):
            if i == j:
                row.append(ExtendedSign.MINUS_ZERO)
            elif j == i + 1:
                row.append(ExtendedSign.PLUS)
            elif j == i - 1:
                row.append(ExtendedSign.MINUS)
            else:
                row.append(ExtendedSign.ZERO)
        rows.append(tuple(row))
    return ExtendedSignPattern(tuple(rows))


def type_two_template(k: int) -> ExtendedSignPattern:
    """Tridiagonal ``k x k``: ``#`` diagonal, ``+`` above and below."""
    rows = []
    for i in range(k):
        rows.append(tuple(ExtendedSign.ANY if i == j else
                          ExtendedSign.PLUS if abs(i - j) == 1 else ExtendedSign.ZERO
                          for j in range(k)))
    return ExtendedSignPattern(tuple(rows))


# --- helpers -------------------------------------------------------------------------

def _require_cycle_form(pattern: SignPattern) -> None:
    if not is_cycle_form(pattern):
        raise NotCycleFormError("pattern is not in cycle form")


def _covered(pattern: SignPattern, sign: Sign) -> set:
    out = set()
    for i, j, s in two_cycle_signs(pattern):
        if s is sign:
            out.update((i, j))
    return out


def _forward_positive(pattern: SignPattern) -> bool:
    return all(s is PLUS for s in forward_signs(pattern))


def _oriented(pattern: SignPattern) -> Iterator[Tuple[CycleLabeling, bool, SignPattern]]:
    """Every labeling and negation, in (labeling, unnegated first) order."""
    for lab in cycle_form_labelings(pattern):
        m = lab.apply(pattern)
        yield lab, False, m
        yield lab, True, -m


def _off_diagonal_signs(pattern: SignPattern) -> set:
    return {s for i, j, s in pattern.nonzero() if i != j}


# --- gates ---------------------------------------------------------------------------------

def necessary_gates(pattern: SignPattern) -> List[GateViolation]:
    """Every violated necessary condition of a cycle-form pattern.

    Conditions that presuppose a positive monotone cycle are evaluated on
    whichever of ``A`` and ``-A`` has one.
    """
    _require_cycle_form(pattern)
    n = pattern.n
    fwd, bwd = forward_signs(pattern), backward_signs(pattern)
    out: List[GateViolation] = []

    zero_f = [i for i in range(n) if fwd[i] is ZERO]
    zero_b = [j for j in range(n) if bwd[j] is ZERO]
    if zero_f and zero_b:
        out.append(GateViolation(Gate.REDUCIBLE, (zero_f[0], zero_b[0])))

    # B_A loses edge i -> i+1 when a_{i,i+1} <= 0 and a_{i+1,i} >= 0
    lose_f = [i for i in range(n) if fwd[i] is not PLUS and bwd[i] is not MINUS]
    lose_b = [j for j in range(n) if bwd[j] is not PLUS and fwd[j] is not MINUS]
    if lose_f and lose_b:
        out.append(GateViolation(Gate.BA_REDUCIBLE, (lose_f[0], lose_b[0])))

    cycles = monotone_n_cycles(pattern)
    if not cycles:
        out.append(GateViolation(Gate.NO_MONOTONE_CYCLE, ()))
        return out

    pos_cov, neg_cov = _covered(pattern, PLUS), _covered(pattern, MINUS)
    both = sorted(pos_cov & neg_cov)
    cycle_signs = sorted({s for _, s in cycles}, reverse=True)
    if both:
        out.append(GateViolation(Gate.VERTEX_ON_BOTH_SIGNS, (both[0],),
                                 negated=cycle_signs[0] is MINUS))
    for cyc_sign in cycle_signs:
        # positive loop relative to the orientation where the cycle is positive
        bad_loop = PLUS if cyc_sign is PLUS else MINUS
        for i, j, s in two_cycle_signs(pattern):
            if s is not MINUS:
                continue
            hit = [v for v in (i, j) if pattern[v, v] is bad_loop]
            if hit:
                out.append(GateViolation(Gate.POSITIVE_LOOP_ON_NEGATIVE_TWO_CYCLE,
                                         (hit[0], j if hit[0] == i else i),
                                         negated=cyc_sign is MINUS))
                break
        else:
            continue
        break
    return out


# --- block decomposition --------------------------------------------------------------------

def decompose_blocks(pattern: SignPattern) -> BlockDecomposition:
    """Split a cycle-form pattern with positive forward arcs and ``a[0, n-1] = 0``.

    Runs of ``+`` backward entries form Type-II blocks and runs of ``-``
    form Type-I blocks; a zero backward entry or a sign change ends a block.
    Single vertices are recorded as Type-II.
    """
    _require_cycle_form(pattern)
    n = pattern.n
    if pattern[0, n - 1] is not ZERO or not _forward_positive(pattern):
        raise ValueError("decompose_blocks needs positive forward arcs and a zero corner a[0, n-1]")
    bwd = backward_signs(pattern)
    blocks: List[Block] = []
    exact = True
    start, sign = 0, ZERO
    for i in range(n - 1):
        g = bwd[i]
        if g is not ZERO and (sign is ZERO or g is sign):
            sign = g
            continue
        if g is not ZERO:
            exact = False
        blocks.append(_block(start, i, sign))
        start, sign = i + 1, ZERO
    blocks.append(_block(start, n - 1, sign))
    return BlockDecomposition(tuple(blocks), exact)


def _block(first: int, last: int, sign: Sign) -> Block:
    kind = BlockKind.TYPE_I if sign is MINUS else BlockKind.TYPE_II
    return Block(tuple(range(first, last + 1)), kind)


def maximal_type_one_blocks(pattern: SignPattern) -> List[Tuple[int, ...]]:
    """Contiguous index runs whose principal submatrix has Type-I form and
    that are not contained in a longer such run (1x1 runs included)."""
    n = pattern.n

    def fits(lo, hi):
        idx = tuple(range(lo, hi + 1))
        return matches_template(pattern.principal(idx), type_one_template(len(idx)))

    runs = []
    for lo in range(n):
        for hi in range(lo, n):
            if not fits(lo, hi):
                break
            if (lo == 0 or not fits(lo - 1, hi)) and (hi == n - 1 or not fits(lo, hi + 1)):
                runs.append(tuple(range(lo, hi + 1)))
    return runs


# --- criteria ---------------------------------------------------------------------------------

Match = Tuple[Rule, CycleLabeling, bool, FrozenSet[str]]


def negative_perfect_matching(pattern: SignPattern) -> Optional[Tuple[Tuple[int, int], ...]]:
    """Disjoint negative 2-cycles covering every vertex, if any exist."""
    n = pattern.n
    nbrs = {i: [] for i in range(n)}
    for i, j, s in two_cycle_signs(pattern):
        if s is MINUS:
            nbrs[i].append(j)
            nbrs[j].append(i)

    def match(free: FrozenSet[int]):
        if not free:
            return ()
        u = min(free)
        for v in nbrs[u]:
            if v in free:
                rest = match(free - {u, v})
                if rest is not None:
                    return ((u, v),) + rest
        return None

    return match(frozenset(range(n)))


def loopless_criterion(pattern: SignPattern) -> Optional[Match]:
    """Zero-diagonal criterion.

    A one-signed Hamiltonian cycle and no vertex on 2-cycles of both signs
    are necessary.  At even order they are not enough: if negative 2-cycles
    match up all vertices, scaling them up gives a determinant dominated by
    the matching and a spectrum with no real eigenvalue, so that is excluded
    as well.
    """
    if _covered(pattern, PLUS) & _covered(pattern, MINUS):
        return None
    if negative_perfect_matching(pattern) is not None:
        return None
    for lab, neg, m in _oriented(pattern):
        if _forward_positive(m):
            return Rule.LOOPLESS, lab, neg, frozenset()
    return None


def _positive_loop_condition(m: SignPattern, blocks: BlockDecomposition) -> Tuple[bool, bool]:
    """(2x2 nonnegative-loop template present, isolated vertex with + loop)."""
    n = m.n
    template = any(matches_template(m.principal((i, j)), t)
                   for i in range(n) for j in range(i + 1, n) for t in _POS_LOOP_TEMPLATES)
    isolated = any(b.size == 1 and m[b.vertices[0], b.vertices[0]] is PLUS for b in blocks.blocks)
    return template, isolated


def mixed_two_cycle_criterion(pattern: SignPattern) -> Optional[Match]:
    """Criterion for patterns with 2-cycles of both signs.

    Needs an orientation with positive forward arcs and zero corner whose
    block split is exact, and then either a nonnegative loop inside a
    positive 2-cycle, a positive loop on an isolated vertex, or a maximal
    Type-I run that requires singularity.
    """
    for lab, neg, m in _oriented(pattern):
        if m[0, m.n - 1] is not ZERO or not _forward_positive(m):
            continue
        blocks = decompose_blocks(m)
        if not blocks.exact:
            continue
        template, isolated = _positive_loop_condition(m, blocks)
        singular = any(requires_singularity(m.principal(run)) for run in maximal_type_one_blocks(m))
        if template or singular:
            return Rule.MIXED_TWO_CYCLES, lab, neg, frozenset()
        if isolated:
            return Rule.MIXED_TWO_CYCLES, lab, neg, frozenset({FLAG_ISOLATED_LOOP, FLAG_DERIVED})
    return None


def _neg_two_cycle_readings(m: SignPattern) -> dict:
    """Loop conditions for an orientation with positive forward arcs and
    no negative Hamiltonian cycle, under three readings of the positive-loop
    condition."""
    n = m.n
    covered = _covered(m, MINUS)
    uncovered = [i for i in range(n) if i not in covered]
    loops = m.diagonal()
    covered_ok = all(loops[i] is not PLUS for i in covered)
    any_plus = any(s is PLUS for s in loops)
    uncovered_nonneg = all(loops[i] is not MINUS for i in uncovered)
    return {
        "used": covered_ok and any_plus,
        "literal": uncovered_nonneg,
        "strict": covered_ok and uncovered_nonneg and any(loops[i] is PLUS for i in uncovered),
    }


def negative_two_cycle_criterion(pattern: SignPattern) -> Tuple[Optional[Match], FrozenSet[str]]:
    """Criterion for patterns with loops whose 2-cycles are all negative.

    Returns the match (or None) together with report flags; the flags mark
    patterns where the readings of the positive-loop condition disagree.
    """
    if not is_irreducible(pattern):
        return None, frozenset()
    if len(_off_diagonal_signs(pattern)) == 1:
        for lab, neg, m in _oriented(pattern):
            if _off_diagonal_signs(m) == {PLUS} and _forward_positive(m):
                return (Rule.NEG_TWO_CYCLES_POSITIVE_OFF_DIAGONAL, lab, neg, frozenset()), frozenset()
    best: Optional[Match] = None
    disagreement = False
    for lab, neg, m in _oriented(pattern):
        if not _forward_positive(m) or all(s is MINUS for s in backward_signs(m)):
            continue
        sns_ok = all(s is not PLUS for s in m.diagonal()) and is_sns(m).is_sns
        readings = _neg_two_cycle_readings(m)
        decided = sns_ok or readings["used"]
        if any((sns_ok or readings[k]) != decided for k in ("literal", "strict")):
            disagreement = True
        if best is None and decided:
            rule = Rule.NEG_TWO_CYCLES_SNS if sns_ok else Rule.NEG_TWO_CYCLES_POSITIVE_LOOP
            best = (rule, lab, neg, frozenset())
    flags = frozenset({FLAG_CONDITION3}) if disagreement else frozenset()
    return best, flags


def same_sign_criterion(pattern: SignPattern) -> Optional[Match]:
    """Irreducible with all off-diagonal entries of one sign."""
    if is_irreducible(pattern) and len(_off_diagonal_signs(pattern)) == 1:
        for lab, neg, m in _oriented(pattern):
            if _off_diagonal_signs(m) == {PLUS} and _forward_positive(m):
                return Rule.SAME_SIGN_OFF_DIAGONAL, lab, neg, frozenset({FLAG_DERIVED})
    return None


# --- dispatch ------------------------------------------------------------------------------------

def classify(pattern: SignPattern) -> Verdict:
    """Requires / NotRequires / NotCycle, with the rule or gate that decided."""
    labelings = cycle_form_labelings(pattern)
    if not labelings:
        return Verdict(Outcome.NOT_CYCLE)
    canonical = labelings[0]
    form = canonical.apply(pattern)
    gates = necessary_gates(form)
    if gates:
        g = gates[0]
        return Verdict(Outcome.NOT_REQUIRES, violation=g, labeling=canonical, negated=g.negated)

    twos = {s for _, _, s in two_cycle_signs(form)}
    extra: FrozenSet[str] = frozenset()
    if all(s is ZERO for s in form.diagonal()):
        match, failed = loopless_criterion(pattern), FAILED_LOOPLESS
        if match is None and negative_perfect_matching(pattern) is not None:
            extra = frozenset({FLAG_MATCHING})
    elif twos == {PLUS, MINUS}:
        match, failed = mixed_two_cycle_criterion(pattern), FAILED_MIXED
    elif PLUS not in twos:
        match, extra = negative_two_cycle_criterion(pattern)
        failed = FAILED_NEGATIVE
    else:
        match, failed = same_sign_criterion(pattern), FAILED_SAME_SIGN
        extra = frozenset({FLAG_DERIVED})

    if match is not None:
        rule, lab, neg, flags = match
        return Verdict(Outcome.REQUIRES, rule=rule, labeling=lab, negated=neg, flags=flags | extra)
    return Verdict(Outcome.NOT_REQUIRES, failed=failed, labeling=canonical, flags=extra)
