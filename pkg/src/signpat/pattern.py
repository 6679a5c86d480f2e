"""Sign algebra, sign pattern matrices and their qualitative classes.

Indices are 0-based throughout the Python API.  Human-facing messages
(parse errors, report text) use 1-based row/column positions.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from itertools import permutations as _permutations
from typing import Iterable, Iterator, Sequence, Tuple, Union

import numpy as np


class Sign(enum.IntEnum):
    """An element of {+, -, 0} with the usual product table."""

    MINUS = -1
    ZERO = 0
    PLUS = 1

    @property
    def symbol(self) -> str:
        return _SIGN_SYMBOLS[self]

    @classmethod
    def from_symbol(cls, token: str) -> "Sign":
        try:
            return _SYMBOL_SIGNS[token]
        except KeyError:
            raise ValueError(f"unknown sign symbol {token!r}") from None

    @classmethod
    def of(cls, value: float) -> "Sign":
        """Sign of a real number."""
        return cls.PLUS if value > 0 else cls.MINUS if value < 0 else cls.ZERO

    def __neg__(self) -> "Sign":  # type: ignore[override]
        return _SIGNS[-int(self)]

    def __mul__(self, other: object) -> "Sign":  # type: ignore[override]
        if isinstance(other, Sign):
            return _SIGNS[int(self) * int(other)]
        return NotImplemented

    __rmul__ = __mul__

    def __str__(self) -> str:
        return self.symbol


_SIGNS = {-1: Sign.MINUS, 0: Sign.ZERO, 1: Sign.PLUS}
_SIGN_SYMBOLS = {Sign.PLUS: "+", Sign.MINUS: "-", Sign.ZERO: "0"}
_SYMBOL_SIGNS = {"+": Sign.PLUS, "-": Sign.MINUS, "0": Sign.ZERO}

PLUS, MINUS, ZERO = Sign.PLUS, Sign.MINUS, Sign.ZERO


class ExtendedSign(enum.Enum):
    """Sign symbols that stand for a set of admissible signs.

    ``PLUS_ZERO`` is a nonnegative entry, ``MINUS_ZERO`` a nonpositive one
    and ``ANY`` an arbitrary real number.
    """

    PLUS = "+"
    MINUS = "-"
    ZERO = "0"
    PLUS_ZERO = "+0"
    MINUS_ZERO = "-0"
    ANY = "#"

    def admits(self, sign: Sign) -> bool:
        return sign in _ADMITS[self]

    @classmethod
    def exact(cls, sign: Sign) -> "ExtendedSign":
        return _EXACT[sign]

    @property
    def symbol(self) -> str:
        return self.value

    def __str__(self) -> str:
        return self.value


_ADMITS = {
    ExtendedSign.PLUS: frozenset({PLUS}),
    ExtendedSign.MINUS: frozenset({MINUS}),
    ExtendedSign.ZERO: frozenset({ZERO}),
    ExtendedSign.PLUS_ZERO: frozenset({PLUS, ZERO}),
    ExtendedSign.MINUS_ZERO: frozenset({MINUS, ZERO}),
    ExtendedSign.ANY: frozenset({PLUS, MINUS, ZERO}),
}
_EXACT = {PLUS: ExtendedSign.PLUS, MINUS: ExtendedSign.MINUS, ZERO: ExtendedSign.ZERO}


class PatternParseError(ValueError):
    """Malformed pattern text; ``row``/``col`` are 1-based when known."""

    def __init__(self, message: str, row: int | None = None, col: int | None = None,
                 line: int | None = None):
        self.row = row
        self.col = col
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if row is not None:
            where.append(f"row {row}" if col is None else f"({row},{col})")
        super().__init__(f"{message} at {', '.join(where)}" if where else message)


@dataclass(frozen=True)
class SignPattern:
    """A square matrix over {+, -, 0}."""

    entries: Tuple[Tuple[Sign, ...], ...]

    def __post_init__(self):
        n = len(self.entries)
        if n < 1:
            raise ValueError("sign pattern must have order >= 1")
        for row in self.entries:
            if len(row) != n:
                raise ValueError("sign pattern must be square")
            for s in row:
                if not isinstance(s, Sign):
                    raise TypeError(f"entry {s!r} is not a Sign")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[Union[Sign, int, str]]]) -> "SignPattern":
        """Build from rows of Sign, ints in {-1,0,1} or symbols."""
        return cls(tuple(tuple(_coerce(v) for v in row) for row in rows))

    @classmethod
    def from_matrix(cls, matrix) -> "SignPattern":
        """The sign pattern of a real matrix."""
        m = np.asarray(matrix, dtype=float)
        return cls(tuple(tuple(Sign.of(v) for v in row) for row in m))

    @classmethod
    def zeros(cls, n: int) -> "SignPattern":
        return cls(tuple((ZERO,) * n for _ in range(n)))

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, ij: Tuple[int, int]) -> Sign:
        i, j = ij
        return self.entries[i][j]

    def __neg__(self) -> "SignPattern":
        return SignPattern(tuple(tuple(-s for s in row) for row in self.entries))

    def transpose(self) -> "SignPattern":
        return SignPattern(tuple(zip(*self.entries)))

    def to_array(self) -> np.ndarray:
        """Entries as an ``int8`` array of -1/0/+1."""
        return np.array(self.entries, dtype=np.int8)

    def diagonal(self) -> Tuple[Sign, ...]:
        return tuple(self.entries[i][i] for i in range(self.n))

    def nonzero(self) -> Iterator[Tuple[int, int, Sign]]:
        for i, row in enumerate(self.entries):
            for j, s in enumerate(row):
                if s:
                    yield i, j, s

    def principal(self, index: Sequence[int]) -> "SignPattern":
        """Principal submatrix on ``index`` (kept in the given order)."""
        return SignPattern(tuple(tuple(self.entries[i][j] for j in index) for i in index))

    def delete(self, rows: Iterable[int] = (), cols: Iterable[int] = ()) -> Tuple[Tuple[Sign, ...], ...]:
        """Grid with the given rows and columns removed (may be non-square)."""
        rows, cols = set(rows), set(cols)
        keep_c = [j for j in range(self.n) if j not in cols]
        return tuple(tuple(self.entries[i][j] for j in keep_c)
                     for i in range(self.n) if i not in rows)

    def text(self) -> str:
        return format_pattern(self)

    def compact(self) -> str:
        """Single-line form: rows joined by '/', e.g. ``0+0/00+/+00``."""
        return "/".join("".join(s.symbol for s in row) for row in self.entries)

    @classmethod
    def from_compact(cls, text: str) -> "SignPattern":
        rows = text.strip().split("/")
        return parse_pattern("\n".join(" ".join(row) for row in rows))

    def __str__(self) -> str:
        return self.text()


def _coerce(value) -> Sign:
    if isinstance(value, Sign):
        return value
    if isinstance(value, str):
        return Sign.from_symbol(value)
    return _SIGNS[int(value)]


@dataclass(frozen=True)
class ExtendedSignPattern:
    """A rectangular grid of extended signs, used for templates and products."""

    entries: Tuple[Tuple[ExtendedSign, ...], ...]

    def __post_init__(self):
        if not self.entries or not self.entries[0]:
            raise ValueError("empty extended pattern")
        width = len(self.entries[0])
        if any(len(row) != width for row in self.entries):
            raise ValueError("extended pattern rows must have equal length")

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[Union[ExtendedSign, Sign, str]]]) -> "ExtendedSignPattern":
        def conv(v):
            if isinstance(v, ExtendedSign):
                return v
            if isinstance(v, Sign):
                return ExtendedSign.exact(v)
            return ExtendedSign(v)
        return cls(tuple(tuple(conv(v) for v in row) for row in rows))

    @property
    def rows(self) -> int:
        return len(self.entries)

    @property
    def cols(self) -> int:
        return len(self.entries[0])

    def __getitem__(self, ij: Tuple[int, int]) -> ExtendedSign:
        return self.entries[ij[0]][ij[1]]

    def __str__(self) -> str:
        return "\n".join(" ".join(e.symbol for e in row) for row in self.entries)


# --- text format -----------------------------------------------------------

def parse_pattern(text: str) -> SignPattern:
    """Parse whitespace-separated rows of ``+``, ``-`` and ``0``.

    >>> parse_pattern("0 +\\n- 0").compact()
    '0+/-0'
    """
    rows = [line.split() for line in text.splitlines() if line.strip()]
    if not rows:
        raise PatternParseError("empty pattern")
    return _rows_to_pattern(rows, [None] * len(rows))


def _rows_to_pattern(rows: list[list[str]], linenos: list[int | None]) -> SignPattern:
    n = len(rows)
    for r, row in enumerate(rows, start=1):
        for c, tok in enumerate(row, start=1):
            if tok not in _SYMBOL_SIGNS:
                raise PatternParseError(f"unknown token {tok!r}", r, c, linenos[r - 1])
    for r, row in enumerate(rows, start=1):
        if len(row) != n:
            kind = "ragged rows" if len(row) != len(rows[0]) else "non-square pattern"
            raise PatternParseError(
                f"{kind}: row has {len(row)} entries, expected {n}", r, None, linenos[r - 1])
    return SignPattern(tuple(tuple(_SYMBOL_SIGNS[t] for t in row) for row in rows))


def parse_patterns(text: str) -> list[SignPattern]:
    """Parse a file body holding one or more patterns.

    Lines starting with ``#`` are comments; blank lines separate patterns.
    Errors carry the 1-based line number within ``text``.
    """
    patterns: list[SignPattern] = []
    block: list[list[str]] = []
    linenos: list[int | None] = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if stripped.startswith("#"):
            continue
        if not stripped:
            if block:
                patterns.append(_rows_to_pattern(block, linenos))
                block, linenos = [], []
            continue
        block.append(stripped.split())
        linenos.append(lineno)
    if block:
        patterns.append(_rows_to_pattern(block, linenos))
    if not patterns:
        raise PatternParseError("empty input")
    return patterns


def format_pattern(pattern: SignPattern) -> str:
    return "\n".join(" ".join(s.symbol for s in row) for row in pattern.entries)


# --- symmetries --------------------------------------------------------------

@dataclass(frozen=True)
class Negate:
    pass


@dataclass(frozen=True)
class Transpose:
    pass


@dataclass(frozen=True)
class PermuteSimilar:
    """Permutation similarity ``P^T A P`` where ``P e_i = e_sigma(i)``.

    The result has entry ``a[sigma[i], sigma[j]]`` at ``(i, j)``.
    """

    sigma: Tuple[int, ...]

    def inverse(self) -> "PermuteSimilar":
        inv = [0] * len(self.sigma)
        for i, s in enumerate(self.sigma):
            inv[s] = i
        return PermuteSimilar(tuple(inv))


Symmetry = Union[Negate, Transpose, PermuteSimilar]


def is_permutation(sigma: Sequence[int], n: int) -> bool:
    return len(sigma) == n and sorted(sigma) == list(range(n))


def apply_symmetry(pattern: SignPattern, sym: Symmetry) -> SignPattern:
    """Apply a transformation that preserves requiring algebraic positivity."""
    if isinstance(sym, Negate):
        return -pattern
    if isinstance(sym, Transpose):
        return pattern.transpose()
    if isinstance(sym, PermuteSimilar):
        sigma = tuple(sym.sigma)
        if not is_permutation(sigma, pattern.n):
            raise ValueError(f"{sigma} is not a permutation of 0..{pattern.n - 1}")
        e = pattern.entries
        return SignPattern(tuple(tuple(e[si][sj] for sj in sigma) for si in sigma))
    raise TypeError(f"unknown symmetry {sym!r}")


def all_permutations(n: int) -> Iterator[Tuple[int, ...]]:
    return _permutations(range(n))


# --- parts, products, templates ----------------------------------------------

def split_parts(pattern: SignPattern) -> Tuple[SignPattern, SignPattern, SignPattern]:
    """Return ``(A_plus, A_minus, B_A)`` with ``B_A = A_plus - A_minus^T``.

    ``B_A`` has a ``+`` at ``(i, j)`` iff ``a_ij = +`` or ``a_ji = -``; the
    two operands never cancel.
    """
    e, n = pattern.entries, pattern.n
    plus = tuple(tuple(PLUS if s is PLUS else ZERO for s in row) for row in e)
    minus = tuple(tuple(MINUS if s is MINUS else ZERO for s in row) for row in e)
    b = tuple(tuple(PLUS if (e[i][j] is PLUS or e[j][i] is MINUS) else ZERO
                    for j in range(n)) for i in range(n))
    return SignPattern(plus), SignPattern(minus), SignPattern(b)


def matches_template(pattern: SignPattern, template: ExtendedSignPattern) -> bool:
    if (template.rows, template.cols) != (pattern.n, pattern.n):
        raise ValueError(
            f"template is {template.rows}x{template.cols}, pattern is {pattern.n}x{pattern.n}")
    return all(t.admits(s) for prow, trow in zip(pattern.entries, template.entries)
               for s, t in zip(prow, trow))


def is_subpattern(a: SignPattern, b: SignPattern) -> bool:
    """True iff ``a`` arises from ``b`` by zeroing some nonzero entries."""
    if a.n != b.n:
        raise ValueError(f"order mismatch: {a.n} vs {b.n}")
    return all(s is ZERO or s is t for ra, rb in zip(a.entries, b.entries)
               for s, t in zip(ra, rb))


def qual_product(a: SignPattern, b: SignPattern) -> ExtendedSignPattern:
    """Qualitative product: the sign of each entry of ``AB`` when it is determined.

    An entry is ``ANY`` as soon as two nonzero summands disagree.
    """
    if a.n != b.n:
        raise ValueError(f"order mismatch: {a.n} vs {b.n}")
    n = a.n
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            seen = {a.entries[i][k] * b.entries[k][j] for k in range(n)} - {ZERO}
            if not seen:
                row.append(ExtendedSign.ZERO)
            elif len(seen) == 1:
                row.append(ExtendedSign.exact(seen.pop()))
            else:
                row.append(ExtendedSign.ANY)
        out.append(tuple(row))
    return ExtendedSignPattern(tuple(out))


# --- qualitative class sampling -------------------------------------------------

@dataclass(frozen=True)
class QSampleConfig:
    """Magnitude bounds and seed for drawing members of ``Q(A)``."""

    lo: float = 0.5
    hi: float = 2.0
    seed: int = 0

    def __post_init__(self):
        if not (self.lo > 0):
            raise ValueError("lo must be positive")
        if not (self.hi >= self.lo):
            raise ValueError("hi must be >= lo")
        if not (0 <= self.seed < 2 ** 64):
            raise ValueError("seed must be a 64-bit unsigned integer")


def sample_q(pattern: SignPattern, cfg: QSampleConfig, index: int = 0) -> np.ndarray:
    """Draw a real matrix with sign pattern ``pattern``.

    Magnitudes are uniform on ``[cfg.lo, cfg.hi]``.  The stream is keyed by
    ``(cfg.seed, index)`` so sample ``k`` of a run does not depend on how
    many samples precede it.
    """
    rng = np.random.default_rng((cfg.seed, index))
    signs = pattern.to_array().astype(float)
    mags = rng.uniform(cfg.lo, cfg.hi, size=signs.shape)
    return signs * mags
