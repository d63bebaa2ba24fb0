"""Interceptor-to-target assignment by the Hungarian method.

Efficiency matrices are indexed ``[target, interceptor]``.  The solver works
on a reduced copy of the matrix and tracks the row/column constants it
subtracts, which is exactly a dual solution ``(u, v)`` with
``u_i + v_j <= c_ij``; assigned cells end up at reduced cost zero, so the
duals certify optimality.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError, InfeasibleError
from .kinematics import known_target_interception_time

SENTINEL_FACTOR = 1e6


@dataclass(frozen=True)
class InterceptorSpec:
    max_speed: float

    def __post_init__(self):
        if not self.max_speed > 0:
            raise DomainError(f"interceptor max_speed must be > 0, got {self.max_speed}")


@dataclass(frozen=True)
class TargetSpec:
    initial_distance: float
    speed: float
    direction_deg: float

    def __post_init__(self):
        if not self.initial_distance > 0:
            raise DomainError(f"target initial_distance must be > 0, got {self.initial_distance}")
        if not self.speed > 0:
            raise DomainError(f"target speed must be > 0, got {self.speed}")


@dataclass
class EfficiencyMatrix:
    entries: np.ndarray
    infeasible: np.ndarray | None = None
    dummy_rows: int = 0
    dummy_cols: int = 0
    row_labels: list[str] = field(default_factory=list)
    col_labels: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=float)
        if self.entries.ndim != 2:
            raise ValueError("efficiency matrix must be 2-D")
        if self.infeasible is None:
            self.infeasible = np.zeros(self.entries.shape, dtype=bool)
        else:
            self.infeasible = np.asarray(self.infeasible, dtype=bool)
        if (self.entries < 0).any():
            raise DomainError("efficiency matrix entries must be >= 0")
        p, q = self.entries.shape
        if not self.row_labels:
            self.row_labels = [f"t{i + 1}" for i in range(p)]
        if not self.col_labels:
            self.col_labels = [f"b{j + 1}" for j in range(q)]

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape


@dataclass
class Assignment:
    pairs: tuple[int, ...]  # pairs[target] = interceptor
    total_cost: float
    u: np.ndarray
    v: np.ndarray
    iterations: int = 0

    @property
    def duals(self) -> tuple[np.ndarray, np.ndarray]:
        return self.u, self.v


def _as_efficiency(M) -> EfficiencyMatrix:
    if isinstance(M, EfficiencyMatrix):
        return M
    return EfficiencyMatrix(np.asarray(M, dtype=float))


def build_efficiency_matrix(
    interceptors: Sequence[InterceptorSpec], targets: Sequence[TargetSpec]
) -> EfficiencyMatrix:
    """Known-target interception times; a target at least as fast as a boat
    gets a large finite sentinel and is flagged infeasible."""
    if not interceptors or not targets:
        raise ValueError("need at least one interceptor and one target")
    p, q = len(targets), len(interceptors)
    entries = np.zeros((p, q))
    bad = np.zeros((p, q), dtype=bool)
    for i, tg in enumerate(targets):
        for j, boat in enumerate(interceptors):
            if tg.speed >= boat.max_speed:
                bad[i, j] = True
            else:
                entries[i, j] = known_target_interception_time(
                    tg.initial_distance, boat.max_speed, tg.speed, tg.direction_deg
                )
    if bad.all():
        raise InfeasibleError("no interceptor is faster than any target")
    if bad.any():
        entries[bad] = SENTINEL_FACTOR * entries[~bad].max()
    return EfficiencyMatrix(entries, bad)


def balance(M) -> EfficiencyMatrix:
    """Pad with zero-cost dummy targets or interceptors to a square matrix."""
    M = _as_efficiency(M)
    p, q = M.shape
    n = max(p, q)
    if p == q:
        return M
    entries = np.zeros((n, n))
    entries[:p, :q] = M.entries
    bad = np.zeros((n, n), dtype=bool)
    bad[:p, :q] = M.infeasible
    rows = M.row_labels + [f"dummy_t{k + 1}" for k in range(n - p)]
    cols = M.col_labels + [f"dummy_b{k + 1}" for k in range(n - q)]
    return EfficiencyMatrix(entries, bad, M.dummy_rows + n - p, M.dummy_cols + n - q, rows, cols)


def _max_matching(zero: np.ndarray, match_col: list[int] | None = None) -> list[int]:
    """Kuhn's augmenting paths on the zero cells; returns match_col[col] = row or -1."""
    n_rows, n_cols = zero.shape
    match_col = [-1] * n_cols if match_col is None else list(match_col)
    adj = [np.flatnonzero(zero[i]).tolist() for i in range(n_rows)]

    def augment(i, seen):
        for j in adj[i]:
            if not seen[j]:
                seen[j] = True
                if match_col[j] < 0 or augment(match_col[j], seen):
                    match_col[j] = i
                    return True
        return False

    matched_rows = set(r for r in match_col if r >= 0)
    for i in range(n_rows):
        if i not in matched_rows:
            augment(i, [False] * n_cols)
    return match_col


def _min_line_cover(zero: np.ndarray, match_col: list[int]) -> tuple[np.ndarray, np.ndarray]:
    """Koenig's construction: minimum set of row/column lines covering all zeros."""
    n = zero.shape[0]
    match_row = [-1] * n
    for j, i in enumerate(match_col):
        if i >= 0:
            match_row[i] = j
    seen_rows = np.zeros(n, dtype=bool)
    seen_cols = np.zeros(zero.shape[1], dtype=bool)
    stack = [i for i in range(n) if match_row[i] < 0]
    seen_rows[stack] = True
    while stack:
        i = stack.pop()
        for j in np.flatnonzero(zero[i] & ~seen_cols):
            seen_cols[j] = True
            r = match_col[j]
            if r >= 0 and not seen_rows[r]:
                seen_rows[r] = True
                stack.append(r)
    return ~seen_rows, seen_cols


def _lex_first_perfect_matching(zero: np.ndarray) -> tuple[int, ...]:
    n = zero.shape[0]
    chosen: list[int] = []
    used = np.zeros(n, dtype=bool)
    for i in range(n):
        for j in np.flatnonzero(zero[i] & ~used):
            used[j] = True
            rest = zero[i + 1:][:, ~used]
            if rest.shape[0] == 0 or sum(r >= 0 for r in _max_matching(rest)) == rest.shape[0]:
                chosen.append(int(j))
                break
            used[j] = False
        else:  # pragma: no cover - the caller guarantees a perfect matching
            raise AssertionError("zero cells admit no perfect matching")
    return tuple(chosen)


def hungarian(M) -> Assignment:
    """Minimum-cost perfect assignment of a square nonnegative matrix.

    Steps: subtract row minima, subtract column minima, then repeatedly
    cover all zeros with the fewest lines and shift by the smallest
    uncovered element until the zeros hold a perfect matching.  Among
    optimal assignments the lexicographically first (by target) is chosen.
    """
    M = _as_efficiency(M)
    c = M.entries
    n, q = c.shape
    if n != q:
        raise ValueError(f"hungarian needs a square matrix, got {c.shape}; call balance() first")
    for i in range(n):
        if M.infeasible[i].all():
            raise InfeasibleError(f"target row {M.row_labels[i]} has no feasible interceptor")
    for j in range(n):
        if M.infeasible[:, j].all():
            raise InfeasibleError(f"interceptor column {M.col_labels[j]} can reach no target")

    r = c.copy()
    u = r.min(axis=1)
    r -= u[:, None]
    v = r.min(axis=0)
    r -= v[None, :]

    iterations = 0
    match_col = None
    while True:
        zero = r == 0.0
        match_col = _max_matching(zero, match_col)
        if sum(k >= 0 for k in match_col) == n:
            break
        iterations += 1
        covered_rows, covered_cols = _min_line_cover(zero, match_col)
        free_r = ~covered_rows
        free_c = ~covered_cols
        delta = r[np.ix_(free_r, free_c)].min()
        r[free_r, :] -= delta
        r[:, covered_cols] += delta
        u[free_r] += delta
        v[covered_cols] -= delta
        # shifted zeros may break the previous matching; keep only surviving edges
        match_col = [i if i >= 0 and r[i, j] == 0.0 else -1 for j, i in enumerate(match_col)]

    pairs = _lex_first_perfect_matching(r == 0.0)
    for i, j in enumerate(pairs):
        if M.infeasible[i, j]:
            raise InfeasibleError(
                f"target row {M.row_labels[i]} can only be covered by an interceptor that is too slow"
            )
    total = float(sum(c[i, j] for i, j in enumerate(pairs)))
    return Assignment(pairs, total, u, v, iterations)


def assignment_cost(M, pairs: Sequence[int]) -> float:
    c = _as_efficiency(M).entries
    return float(sum(c[i, j] for i, j in enumerate(pairs)))


def verify_duals(M, assignment: Assignment, tol: float = 1e-9) -> bool:
    """Minimisation certificate: ``u_i + v_j <= c_ij`` everywhere and
    ``sum(u) + sum(v)`` equal to the claimed (and actual) cost."""
    c = _as_efficiency(M).entries
    n = c.shape[0]
    pairs = tuple(assignment.pairs)
    if c.shape[0] != c.shape[1] or sorted(pairs) != list(range(n)):
        return False
    eps = tol * max(1.0, float(np.abs(c).max()))
    u = np.asarray(assignment.u, dtype=float)
    v = np.asarray(assignment.v, dtype=float)
    if (u[:, None] + v[None, :] > c + eps).any():
        return False
    actual = assignment_cost(c, pairs)
    claimed = assignment.total_cost
    dual = float(u.sum() + v.sum())
    return abs(actual - claimed) <= eps and abs(dual - claimed) <= eps * n
