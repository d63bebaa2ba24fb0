"""Zero-sum pursuit game: payoff construction and solvers.

Rows are evader strategies (bearing, speed) and maximise the capture time;
columns are the pursuer's speed-check orders and minimise it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import SizeError, SolverError
from .kinematics import EvaderStrategy, PursuitScenario, guaranteed_capture_time

MAX_PAYOFF_SPEEDS = 8
MAX_EXACT_DIM = 10


@dataclass
class PayoffMatrix:
    entries: np.ndarray
    row_labels: list[EvaderStrategy] = field(default_factory=list)
    col_labels: list[tuple[float, ...]] = field(default_factory=list)

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=float)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def row_names(self) -> list[str]:
        if self.row_labels:
            return [s.label() for s in self.row_labels]
        return [f"r{i + 1}" for i in range(self.shape[0])]

    def col_names(self) -> list[str]:
        if self.col_labels:
            return ["(" + ";".join(f"{v:g}" for v in c) + ")" for c in self.col_labels]
        return [f"c{j + 1}" for j in range(self.shape[1])]


@dataclass
class GameSolution:
    lower_bound: float
    upper_bound: float
    value: float | None
    evader_strategy: np.ndarray
    pursuer_strategy: np.ndarray
    iterations: int
    method: str

    @property
    def width(self) -> float:
        return self.upper_bound - self.lower_bound


def _matrix(A) -> np.ndarray:
    a = np.asarray(getattr(A, "entries", A), dtype=float)
    if a.ndim != 2 or a.size == 0:
        raise ValueError("payoff matrix must be a non-empty 2-D array")
    return a


def build_payoff_matrix(scenario: PursuitScenario) -> PayoffMatrix:
    """Capture-time matrix: rows (bearing, speed) direction-major, columns in
    lexicographic order of the speed-index permutations."""
    n = scenario.n_speeds
    if n > MAX_PAYOFF_SPEEDS:
        raise SizeError(f"{n} speeds means {math.factorial(n)} pursuer strategies; limit is {MAX_PAYOFF_SPEEDS}")
    perms = list(itertools.permutations(range(n)))
    rows = scenario.strategies()
    entries = np.array(
        [[guaranteed_capture_time(scenario, p, s)[0] for p in perms] for s in rows]
    )
    cols = [tuple(scenario.speed_set[k] for k in p) for p in perms]
    return PayoffMatrix(entries, rows, cols)


@dataclass(frozen=True)
class SaddleScan:
    maximin: float
    minimax: float
    cell: tuple[int, int, float] | None


def saddle_scan(A) -> SaddleScan:
    a = _matrix(A)
    row_min = a.min(axis=1)
    col_max = a.max(axis=0)
    maximin = float(row_min.max())
    minimax = float(col_max.min())
    cell = None
    if maximin == minimax:
        # a[i, j] is a saddle iff it is both its row's min and its column's max
        hits = np.argwhere((a == row_min[:, None]) & (a == col_max[None, :]))
        i, j = (int(k) for k in hits[0])
        cell = (i, j, float(a[i, j]))
    return SaddleScan(maximin, minimax, cell)


def pure_saddle(A) -> tuple[int, int, float] | None:
    """Lowest (row, col) saddle cell (0-based) or None when maximin < minimax."""
    return saddle_scan(A).cell


def brown_robinson(A, max_iters: int = 100_000, tol: float = 0.0) -> GameSolution:
    """Fictitious play with running value bounds.

    Round 1 plays row 0 and column 0.  Afterwards each player best-responds
    to the opponent's empirical counts; ties go to the lowest index.  The
    bounds are the best seen so far: ``max_k lower_k/k`` and ``min_k upper_k/k``.
    """
    a = _matrix(A)
    if max_iters < 1:
        raise ValueError("max_iters must be >= 1")
    if tol < 0:
        raise ValueError("tol must be >= 0")
    m, n = a.shape
    cols = np.ascontiguousarray(a.T)
    row_payoff = np.zeros(m)  # sum_j a_ij * eta_j
    col_payoff = np.zeros(n)  # sum_i a_ij * xi_i
    row_counts = np.zeros(m, dtype=np.int64)
    col_counts = np.zeros(n, dtype=np.int64)

    lo, hi = -math.inf, math.inf
    i = j = 0
    k = 0
    while k < max_iters:
        k += 1
        row_counts[i] += 1
        col_counts[j] += 1
        row_payoff += cols[j]
        col_payoff += a[i]
        i = int(row_payoff.argmax())
        j = int(col_payoff.argmin())
        hi = min(hi, row_payoff[i] / k)
        lo = max(lo, col_payoff[j] / k)
        if hi - lo <= tol:
            break
    lo, hi = float(lo), float(hi)
    return GameSolution(
        lower_bound=lo,
        upper_bound=hi,
        value=0.5 * (lo + hi),
        evader_strategy=row_counts / k,
        pursuer_strategy=col_counts / k,
        iterations=k,
        method="fictitious_play",
    )


def expected_payoff(A, x, y) -> float:
    return float(np.asarray(x) @ _matrix(A) @ np.asarray(y))


def is_equilibrium(A, x, y, value: float, tol: float = 1e-9) -> bool:
    """Check ``K(e_i, y) <= value <= K(x, e_j)`` for every pure strategy.

    ``tol`` is relative to the largest absolute entry.
    """
    a = _matrix(A)
    eps = tol * max(1.0, float(np.abs(a).max()))
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if (x < -eps).any() or (y < -eps).any():
        return False
    if abs(x.sum() - 1) > 1e-9 or abs(y.sum() - 1) > 1e-9:
        return False
    return bool((a @ y <= value + eps).all() and (x @ a >= value - eps).all())


def exact_value_support_enumeration(A) -> GameSolution:
    """Exact solution from square kernels (Shapley-Snow).

    Every matrix game has an optimal pair supported on a nonsingular square
    submatrix M with ``v = 1 / (1' M^-1 1)``, ``x = v 1' M^-1``,
    ``y = v M^-1 1`` (after shifting so all entries are positive).  Kernels
    are tried by increasing size in lexicographic order and the first pair
    that passes the equilibrium test against all pure strategies is
    returned.
    """
    a = _matrix(A)
    m, n = a.shape
    if min(m, n) > MAX_EXACT_DIM:
        raise SizeError(f"support enumeration limited to min(m, n) <= {MAX_EXACT_DIM}, got {a.shape}")
    scale = float(np.abs(a).max()) or 1.0
    b = a / scale
    # entries in [1, 3] keep every kernel well away from singular
    shift = 1.0 - float(b.min())
    b = b + shift
    tried = 0
    for k in range(1, min(m, n) + 1):
        for rows in itertools.combinations(range(m), k):
            sub_rows = b[list(rows)]
            for cols in itertools.combinations(range(n), k):
                tried += 1
                M = sub_rows[:, list(cols)]
                if k > 1 and np.linalg.cond(M) > 1e12:
                    continue
                try:
                    ones_l = np.linalg.solve(M.T, np.ones(k))  # 1' M^-1
                    ones_r = np.linalg.solve(M, np.ones(k))  # M^-1 1
                except np.linalg.LinAlgError:
                    continue
                denom = ones_l.sum()
                if not (denom > 0 and np.isfinite(ones_l).all() and np.isfinite(ones_r).all()):
                    continue
                v = 1.0 / denom
                if not np.isfinite(v):
                    continue
                xs, ys = v * ones_l, v * ones_r
                if xs.min() < -1e-12 or ys.min() < -1e-12:
                    continue
                x = np.zeros(m)
                y = np.zeros(n)
                x[list(rows)] = np.clip(xs, 0.0, None)
                y[list(cols)] = np.clip(ys, 0.0, None)
                x /= x.sum()
                y /= y.sum()
                if not is_equilibrium(b, x, y, v, tol=1e-10):
                    continue
                value = (v - shift) * scale
                return GameSolution(value, value, value, x, y, tried, "support_enumeration")
    raise SolverError("no equilibrium kernel verified; the matrix is numerically ill-conditioned")


def solve_auto(A, max_iters: int = 1_000_000, tol: float = 0.0) -> GameSolution:
    """Saddle point if one exists, else exact enumeration within its size
    guard, else fictitious play."""
    a = _matrix(A)
    cell = pure_saddle(a)
    if cell is not None:
        i, j, val = cell
        x = np.zeros(a.shape[0])
        y = np.zeros(a.shape[1])
        x[i] = y[j] = 1.0
        return GameSolution(val, val, val, x, y, 0, "saddle")
    if min(a.shape) <= MAX_EXACT_DIM:
        return exact_value_support_enumeration(a)
    return brown_robinson(a, max_iters, tol)
