"""Numerical ground truth for algebraic positivity.

A real square matrix is algebraically positive (AP) iff it has a simple
real eigenvalue whose left and right eigenvectors can both be taken
entrywise positive.  This module tests that numerically, samples qualitative
classes, and builds explicit non-AP members of a class.
"""

from __future__ import annotations

import enum
import itertools
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np
import scipy.linalg
from scipy.optimize import minimize

from .pattern import MINUS, PLUS, ZERO, QSampleConfig, SignPattern, sample_q

log = logging.getLogger(__name__)

MAX_EIGEN_ORDER = 64
MAX_STANDARD_FORM_ROWS = 8


class EigenError(RuntimeError):
    """Eigen decomposition failed or returned non-finite values."""


class WitnessError(ValueError):
    pass


@dataclass(frozen=True)
class Tolerances:
    """Relative tolerances; ``imag``, ``sep`` and ``residual`` scale with ``||B||``."""

    imag: float = 1e-9
    sep: float = 1e-7
    pos: float = 1e-9
    residual: float = 1e-8
    inner: float = 1e-8

    def scaled(self, factor: float) -> "Tolerances":
        return Tolerances(self.imag * factor, self.sep * factor, self.pos * factor,
                          self.residual * factor, self.inner * factor)


DEFAULT_TOLERANCES = Tolerances()


class Reason(enum.Enum):
    NO_REAL_SIMPLE_EIG = "NoRealSimpleEig"
    NON_POSITIVE_EIGVEC = "NonPositiveEigvec"
    ZERO_ENTRY_EIGVEC = "ZeroEntryEigvec"
    SKEW_SYMMETRIC = "SkewSymmetric"
    COLUMN_SUM_CONSTRUCTION = "ColumnSumConstruction"
    RANDOM_SEARCH = "RandomSearch"
    SEMISTABLE_WITNESS = "SemistableWitness"


# --- eigen kernel -------------------------------------------------------------

@dataclass
class Spectrum:
    """Eigenvalues of ``B`` with left/right eigenvectors kept for later queries."""

    eigenvalues: np.ndarray
    tolerances: Tolerances
    scale: float
    _left: np.ndarray = field(repr=False, default=None)
    _right: np.ndarray = field(repr=False, default=None)

    @property
    def n(self) -> int:
        return len(self.eigenvalues)

    def is_real(self, k: int) -> bool:
        return abs(self.eigenvalues[k].imag) <= self.tolerances.imag * self.scale

    def is_simple(self, k: int) -> bool:
        if self.n == 1:
            return True
        gaps = np.abs(np.delete(self.eigenvalues, k) - self.eigenvalues[k])
        return bool(gaps.min() > self.tolerances.sep * self.scale)

    def real_simple(self) -> List[int]:
        return [k for k in range(self.n) if self.is_real(k) and self.is_simple(k)]

    def vectors(self, k: int) -> Tuple[np.ndarray, np.ndarray]:
        """Right and left eigenvectors for eigenvalue ``k``.

        Each is scaled so its largest-magnitude entry is exactly +1, then the
        (roundoff-level) imaginary part of a real eigenpair is dropped.
        """
        return _phase_normalize(self._right[:, k]), _phase_normalize(self._left[:, k].conj())


def _phase_normalize(v: np.ndarray) -> np.ndarray:
    v = v / v[np.argmax(np.abs(v))]
    return v.real if np.isrealobj(v) or np.abs(v.imag).max() < 1e-6 else v


def _as_square(b) -> np.ndarray:
    m = np.asarray(b, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValueError("matrix has non-finite entries")
    return m


def matrix_scale(b: np.ndarray) -> float:
    s = float(np.linalg.norm(b))
    return s if s > 0 else 1.0


def eigen(b, tols: Tolerances = DEFAULT_TOLERANCES) -> Spectrum:
    m = _as_square(b)
    if m.shape[0] > MAX_EIGEN_ORDER:
        raise ValueError(f"order {m.shape[0]} exceeds {MAX_EIGEN_ORDER}")
    try:
        w, vl, vr = scipy.linalg.eig(m, left=True, right=True)
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise EigenError(str(exc)) from exc
    if not (np.all(np.isfinite(w)) and np.all(np.isfinite(vl)) and np.all(np.isfinite(vr))):
        raise EigenError("eigen decomposition returned non-finite values")
    return Spectrum(w, tols, matrix_scale(m), vl, vr)


# --- algebraic positivity -----------------------------------------------------

@dataclass(frozen=True)
class APCertificate:
    lam: float
    right_vec: np.ndarray
    left_vec: np.ndarray
    tolerances: Tolerances = DEFAULT_TOLERANCES


def is_algebraically_positive(b, tols: Tolerances = DEFAULT_TOLERANCES) -> Optional[APCertificate]:
    """Return a certificate if ``b`` is AP, else None."""
    m = _as_square(b)
    spectrum = eigen(m, tols)
    for k in spectrum.real_simple():
        lam = float(spectrum.eigenvalues[k].real)
        x, y = spectrum.vectors(k)
        if np.iscomplexobj(x) or np.iscomplexobj(y):
            continue
        if x.min() <= tols.pos or y.min() <= tols.pos:
            continue
        res_tol = tols.residual * spectrum.scale
        if np.linalg.norm(m @ x - lam * x) > res_tol * np.linalg.norm(x):
            continue
        if np.linalg.norm(y @ m - lam * y) > res_tol * np.linalg.norm(y):
            continue
        # algebraic multiplicity 1 <=> y.x != 0 (geometric multiplicity is 1 here)
        if abs(y @ x) <= tols.inner * np.linalg.norm(x) * np.linalg.norm(y):
            continue
        return APCertificate(lam, x, y, tols)
    return None


def diagnose(b, tols: Tolerances = DEFAULT_TOLERANCES) -> Reason:
    """Why a non-AP matrix fails the eigenvector criterion."""
    spectrum = eigen(b, tols)
    real = [k for k in range(spectrum.n) if spectrum.is_real(k)]
    for k in real:
        for v in spectrum.vectors(k):
            if np.iscomplexobj(v):
                continue
            if v.min() >= -tols.pos and np.abs(v).min() <= tols.pos:
                return Reason.ZERO_ENTRY_EIGVEC
    if not spectrum.real_simple():
        return Reason.NO_REAL_SIMPLE_EIG
    return Reason.NON_POSITIVE_EIGVEC


def witness_polynomial(b, cert: APCertificate) -> np.ndarray:
    """Coefficients (highest degree first) of ``q`` with ``q(B)`` entrywise positive.

    ``q = +-p / (x - lam)`` where ``p`` is the characteristic polynomial;
    ``q(B)`` is then a multiple of the rank-one matrix ``x y^T``.
    """
    m = _as_square(b)
    p = np.poly(m)
    q, rem = np.polydiv(p, np.array([1.0, -cert.lam]))
    size = np.sum(np.abs(p) * np.abs(cert.lam) ** np.arange(len(p) - 1, -1, -1))
    if abs(rem[-1]) > 1e-6 * max(size, 1.0):
        raise WitnessError(f"{cert.lam} is not an eigenvalue (remainder {rem[-1]:.3g})")
    qb = poly_matrix(q, m)
    if qb.sum() < 0:
        q, qb = -q, -qb
    if qb.min() <= cert.tolerances.pos * np.abs(qb).max():
        raise WitnessError("q(B) is not entrywise positive")
    return q


def poly_matrix(coeffs: Sequence[float], m: np.ndarray) -> np.ndarray:
    """Evaluate a polynomial at a square matrix by Horner's rule."""
    out = np.zeros_like(m)
    eye = np.eye(m.shape[0])
    for c in coeffs:
        out = out @ m + c * eye
    return out


# --- Monte-Carlo over Q(A) -----------------------------------------------------

class OracleOutcome(enum.Enum):
    ALL_SAMPLES_AP = "AllSamplesAP"
    COUNTEREXAMPLE_FOUND = "CounterexampleFound"
    INCONCLUSIVE = "Inconclusive"


@dataclass(frozen=True)
class OracleVerdict:
    outcome: OracleOutcome
    count: int
    matrix: Optional[np.ndarray] = None
    reason: Optional[Reason] = None
    certificates: Tuple[Tuple[np.ndarray, APCertificate], ...] = ()


def mc_requires(pattern: SignPattern, samples: int, cfg: QSampleConfig = QSampleConfig(),
                tols: Tolerances = DEFAULT_TOLERANCES, collect: bool = False) -> OracleVerdict:
    """Test ``samples`` members of ``Q(A)``; stop at the first non-AP one.

    With ``collect`` the sampled matrices and their certificates are kept.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    failures = 0
    certs = []
    for k in range(samples):
        b = sample_q(pattern, cfg, k)
        try:
            cert = is_algebraically_positive(b, tols)
        except EigenError:
            failures += 1
            continue
        if cert is None:
            return OracleVerdict(OracleOutcome.COUNTEREXAMPLE_FOUND, k + 1, b, diagnose(b, tols))
        if collect:
            certs.append((b, cert))
    if failures > 0.01 * samples:
        return OracleVerdict(OracleOutcome.INCONCLUSIVE, samples, certificates=tuple(certs))
    return OracleVerdict(OracleOutcome.ALL_SAMPLES_AP, samples, certificates=tuple(certs))


# --- constructive counterexamples -------------------------------------------------

def is_counterexample(pattern: SignPattern, b: np.ndarray,
                      tols: Tolerances = DEFAULT_TOLERANCES) -> bool:
    """``b`` lies in ``Q(A)`` and is not AP (eigen failures count as unverified)."""
    if SignPattern.from_matrix(b) != pattern:
        return False
    try:
        return is_algebraically_positive(b, tols) is None
    except EigenError:
        return False


def _unit_instantiation(pattern: SignPattern) -> np.ndarray:
    return pattern.to_array().astype(float)


def _skew_candidate(pattern: SignPattern) -> Optional[np.ndarray]:
    a = pattern.to_array()
    if pattern.n % 2 == 0 and np.array_equal(a, -a.T):
        return a.astype(float)
    return None


def _alternating_kernel_candidate(pattern: SignPattern) -> Optional[np.ndarray]:
    a = pattern.to_array().astype(np.int64)
    n = pattern.n
    for parity in (0, 1):
        x = np.array([1 if i % 2 == parity else 0 for i in range(n)])
        if not x.any() or x.all():
            continue
        if not (a @ x).any() or not (x @ a).any():
            return a.astype(float)
    return None


def _balance_column(pos: int, neg: int, const: float, rng) -> Optional[Tuple[np.ndarray, np.ndarray]]:
    """Magnitudes ``p`` (len pos) and ``q`` (len neg) with ``sum p - sum q + const = 0``."""
    if pos and neg:
        q = rng.uniform(0.5, 2.0, neg)
        p = rng.uniform(0.5, 2.0, pos)
        target = q.sum() - const
        if target > 0:
            return p * target / p.sum(), q
        target = p.sum() + const
        return p, q * target / q.sum()
    if pos and const < 0:
        p = rng.uniform(0.5, 2.0, pos)
        return p * (-const) / p.sum(), np.zeros(0)
    if neg and const > 0:
        q = rng.uniform(0.5, 2.0, neg)
        return np.zeros(0), q * const / q.sum()
    if not pos and not neg and const == 0:
        return np.zeros(0), np.zeros(0)
    return None


def left_eigvec_construction(pattern: SignPattern, support: Sequence[int], lam: float,
                             rng) -> Optional[np.ndarray]:
    """A member ``B`` of ``Q(A)`` with ``1_S^T B = lam 1_S^T``, if one exists.

    Each column equation involves only that column's entries in rows ``S``
    (plus ``-lam`` on the diagonal), so columns are balanced independently.
    Entries outside rows ``S`` are free.
    """
    n = pattern.n
    sset = set(support)
    a = pattern.to_array()
    b = a * rng.uniform(0.5, 2.0, size=(n, n))
    for j in range(n):
        rows = [i for i in support if a[i, j]]
        pos = [i for i in rows if a[i, j] > 0]
        neg = [i for i in rows if a[i, j] < 0]
        const = -lam if j in sset else 0.0
        sol = _balance_column(len(pos), len(neg), const, rng)
        if sol is None:
            return None
        p, q = sol
        b[pos, j] = p
        b[neg, j] = -q
    return b


def _supports(n: int):
    for size in range(n - 1, 0, -1):
        yield from itertools.combinations(range(n), size)


def column_sum_candidates(pattern: SignPattern, rng):
    """Candidates with a nonnegative left or right eigenvector that has a zero entry."""
    lams = (1.0, 0.0, -1.0)
    for support in _supports(pattern.n):
        for lam in lams:
            b = left_eigvec_construction(pattern, support, lam, rng)
            if b is not None:
                yield b
            bt = left_eigvec_construction(pattern.transpose(), support, lam, rng)
            if bt is not None:
                yield bt.T


def spectral_abscissa(b: np.ndarray) -> float:
    return float(np.max(np.linalg.eigvals(b).real))


def semistable_search(pattern: SignPattern, rng, starts: int = 6,
                      maxiter: int = 400) -> Optional[np.ndarray]:
    """Look for a stable member of ``Q(A)`` by minimizing the spectral abscissa.

    Only useful as a refuter when some row or column has no ``-``: then an
    AP member would have a positive AP eigenvalue.  Magnitudes are
    optimized in log space; the objective is normalized by ``||B||``.
    """
    a = pattern.to_array().astype(float)
    idx = np.nonzero(a)
    if len(idx[0]) == 0:
        return None

    def build(z):
        b = np.zeros_like(a)
        b[idx] = a[idx] * np.exp(np.clip(z, -12, 12))
        return b

    def objective(z):
        b = build(z)
        return spectral_abscissa(b) / np.linalg.norm(b)

    best = None
    for _ in range(starts):
        z0 = rng.normal(0.0, 1.5, size=len(idx[0]))
        res = minimize(objective, z0, method="Nelder-Mead",
                       options={"maxiter": maxiter * len(z0), "xatol": 1e-6, "fatol": 1e-10})
        if res.fun < -1e-6:
            best = build(res.x)
            break
    return best


def _row_or_column_without_minus(pattern: SignPattern) -> bool:
    a = pattern.to_array()
    return bool((a >= 0).all(axis=1).any() or (a >= 0).all(axis=0).any())


def counterexample_search(pattern: SignPattern, cfg: QSampleConfig = QSampleConfig(),
                          tols: Tolerances = DEFAULT_TOLERANCES,
                          random_tries: int = 500) -> Optional[Tuple[np.ndarray, Reason]]:
    """Try to exhibit a non-AP member of ``Q(A)``.

    Strategies, cheapest first: skew-symmetric +-1 instantiation (even order),
    +-1 instantiation with an alternating 0/1 kernel vector, column-balance
    constructions with a 0/1 left or right eigenvector, random search, and
    finally a stable member when a row or column has no ``-``.  Every
    returned matrix has been re-checked for sign agreement and non-AP.
    """
    rng = np.random.default_rng((cfg.seed, 0x5EED))
    b = _skew_candidate(pattern)
    if b is not None and is_counterexample(pattern, b, tols):
        return b, Reason.SKEW_SYMMETRIC
    b = _alternating_kernel_candidate(pattern)
    if b is not None and is_counterexample(pattern, b, tols):
        return b, Reason.ZERO_ENTRY_EIGVEC
    for b in column_sum_candidates(pattern, rng):
        if is_counterexample(pattern, b, tols):
            return b, Reason.COLUMN_SUM_CONSTRUCTION
    a = pattern.to_array().astype(float)
    for _ in range(random_tries):
        b = a * np.exp(rng.uniform(np.log(1e-2), np.log(1e2), size=a.shape))
        if is_counterexample(pattern, b, tols):
            return b, Reason.RANDOM_SEARCH
    if _row_or_column_without_minus(pattern):
        b = semistable_search(pattern, rng)
        if b is not None and is_counterexample(pattern, b, tols):
            return b, Reason.SEMISTABLE_WITNESS
    return None


# --- tridiagonal propagation ---------------------------------------------------------

def propagate_positive_solution(b, alpha: float, x) -> np.ndarray:
    """Forward substitution making rows ``0..n-2`` of ``(B - alpha I) y`` vanish.

    ``y[0] = x[0]`` and each later entry is solved from the previous row by
    dividing by its (positive) superdiagonal entry.  When additionally
    ``B x = 0`` the last entry of ``(B - alpha I) y`` should be negative with
    ``y >= x``; that is checked and logged.
    """
    m = _as_square(b)
    x = np.asarray(x, dtype=float)
    n = m.shape[0]
    if x.shape != (n,):
        raise ValueError("x has the wrong length")
    if np.any(np.triu(m, 2)) or np.any(np.tril(m, -2)):
        raise ValueError("B must be tridiagonal")
    sup, sub = np.diag(m, 1), np.diag(m, -1)
    if np.any(sup <= 0):
        raise ValueError("B must have a positive superdiagonal")
    if np.any(sub <= 0):
        raise ValueError("B must have a positive subdiagonal")
    if not alpha > 0 or np.any(np.diag(m) - alpha >= 0):
        raise ValueError("diag(B) - alpha must be entrywise negative")
    if np.any(x <= 0):
        raise ValueError("x must be entrywise positive")
    shifted = m - alpha * np.eye(n)
    y = np.empty(n)
    y[0] = x[0]
    for i in range(n - 1):
        acc = shifted[i, i] * y[i] + (shifted[i, i - 1] * y[i - 1] if i else 0.0)
        y[i + 1] = -acc / shifted[i, i + 1]
    if np.allclose(m @ x, 0.0, atol=1e-12 * matrix_scale(m)):
        last = (shifted @ y)[-1]
        if not (last < 0 and np.all(y >= x)):
            log.warning("propagation conclusion fails: last=%g", last)
    return y


def propagation_residual(b, alpha: float, y) -> np.ndarray:
    m = _as_square(b)
    return (m - alpha * np.eye(m.shape[0])) @ np.asarray(y, dtype=float)


# --- standard form search ---------------------------------------------------------------

@dataclass(frozen=True)
class StandardFormWitness:
    """``rows[k]`` (negated iff ``negated[k]``) becomes staircase row ``k``;
    ``cols[c]`` is the original column placed at position ``c``."""

    rows: Tuple[int, ...]
    negated: Tuple[bool, ...]
    cols: Tuple[int, ...]


def staircase(n: int) -> np.ndarray:
    """The ``n x (n+1)`` standard form: ``-`` below/on the diagonal, ``+`` just above."""
    s = np.zeros((n, n + 1), dtype=np.int8)
    for k in range(n):
        s[k, : k + 1] = -1
        s[k, k + 1] = 1
    return s


def standard_form_transformable(pattern: SignPattern, pivot_row: int) -> Optional[StandardFormWitness]:
    """Row swaps, row negations and column swaps taking ``A`` minus one row into
    a subpattern of the staircase, if any exist.

    Depth-first over staircase rows: row ``k`` may only use the columns
    placed so far (as ``-``) plus one new column (as ``+``).  Failed
    (placed columns, used rows) states are memoized.
    """
    a = pattern.to_array()
    if not 0 <= pivot_row < pattern.n:
        raise ValueError("pivot row out of range")
    rows = [i for i in range(pattern.n) if i != pivot_row]
    n, m = len(rows), pattern.n
    if n > MAX_STANDARD_FORM_ROWS:
        raise ValueError(f"{n} rows exceeds standard form search bound {MAX_STANDARD_FORM_ROWS}")
    if n == 0:
        return StandardFormWitness((), (), tuple(range(m)))
    failed = set()

    def fits(r: int, placed: frozenset, c: int) -> Optional[bool]:
        """Negation flag making row ``r`` fit with new column ``c``, or None."""
        row = a[r]
        if any(row[j] and j not in placed and j != c for j in range(m)):
            return None
        for neg in (False, True):
            s = -1 if neg else 1
            if all(s * row[j] == -1 for j in placed if row[j]) and (row[c] == 0 or s * row[c] == 1):
                return neg
        return None

    def dfs(placed: frozenset, used: frozenset) -> Optional[list]:
        if len(used) == n:
            return []
        if (placed, used) in failed:
            return None
        for r in rows:
            if r in used:
                continue
            for c in range(m):
                if c in placed:
                    continue
                neg = fits(r, placed, c)
                if neg is None:
                    continue
                rest = dfs(placed | {c}, used | {r})
                if rest is not None:
                    return [(r, neg, c)] + rest
        failed.add((placed, used))
        return None

    for c0 in range(m):
        picks = dfs(frozenset({c0}), frozenset())
        if picks is not None:
            return StandardFormWitness(tuple(r for r, _, _ in picks),
                                       tuple(neg for _, neg, _ in picks),
                                       (c0,) + tuple(c for _, _, c in picks))
    return None
