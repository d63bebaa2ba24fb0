"""Order in which speed hypotheses are checked.

The cost of an order is read off a check-duration matrix ``T``: the diagonal
entry of the first speed, then ``T[prev][next]`` for each later speed
(``open_path``).  ``closed_tour`` adds the arc from the last speed back to
the first.

Three exact solvers share that objective: exhaustive enumeration, the
subset dynamic programme (Held-Karp) and Little's reduction-based branch
and bound.  Blocked arcs are ``math.inf``.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DomainError, InfeasibleError, SizeError

OBJECTIVES = ("open_path", "closed_tour")
MAX_BRUTE = 9
MAX_HELD_KARP = 20
MAX_BNB = 15


@dataclass
class CheckCostMatrix:
    entries: np.ndarray
    labels: tuple = ()

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=float)
        e = self.entries
        if e.ndim != 2 or e.shape[0] != e.shape[1] or e.shape[0] < 1:
            raise ValueError(f"check-cost matrix must be square and non-empty, got {e.shape}")
        if not (e > 0).all():
            raise DomainError("check-cost entries must all be > 0")
        if not self.labels:
            self.labels = tuple(range(1, e.shape[0] + 1))
        self.labels = tuple(self.labels)

    @property
    def n(self) -> int:
        return self.entries.shape[0]


@dataclass
class CheckOrder:
    order: tuple[int, ...]
    total_time: float
    objective: str
    algorithm: str = ""
    nodes: int = 0
    trace: list = field(default_factory=list, repr=False)


def _entries(T) -> np.ndarray:
    if isinstance(T, CheckCostMatrix):
        return T.entries
    return CheckCostMatrix(T).entries


def _check_objective(objective: str) -> None:
    if objective not in OBJECTIVES:
        raise ValueError(f"objective must be one of {OBJECTIVES}, got {objective!r}")


def path_cost(T, order: Sequence[int], objective: str = "open_path") -> float:
    """Cost of ``order``, summed left to right."""
    t = _entries(T)
    _check_objective(objective)
    total = float(t[order[0], order[0]])
    for a, b in zip(order, order[1:]):
        total += float(t[a, b])
    if objective == "closed_tour" and len(order) > 1:
        total += float(t[order[-1], order[0]])
    return total


def brute_force_order(T, objective: str = "open_path") -> CheckOrder:
    """Exhaustive minimum; ties go to the lexicographically smallest order."""
    t = _entries(T)
    _check_objective(objective)
    n = t.shape[0]
    if n > MAX_BRUTE:
        raise SizeError(f"brute force is limited to n <= {MAX_BRUTE}, got {n}")
    best, best_cost = None, math.inf
    count = 0
    for perm in itertools.permutations(range(n)):
        count += 1
        cost = path_cost(t, perm, objective)
        if cost < best_cost:
            best, best_cost = perm, cost
    return CheckOrder(tuple(best), best_cost, objective, "brute", count)


def held_karp(T, objective: str = "open_path") -> CheckOrder:
    """Subset dynamic programme.

    ``g[S, i]`` is the cheapest way to check every speed in ``S`` starting
    with ``i`` (``i`` in ``S``): ``g[S, i] = min_j T[i, j] + g[S - {i}, j]``.
    For open paths a singleton costs nothing; for closed tours the start is
    pinned to speed 0 and a singleton costs the arc back to it, and the tour
    is then rotated to begin at the cheapest first check.
    """
    t = _entries(T)
    _check_objective(objective)
    n = t.shape[0]
    if n > MAX_HELD_KARP:
        raise SizeError(f"Held-Karp is limited to n <= {MAX_HELD_KARP}, got {n}")
    full = (1 << n) - 1
    g = np.full((1 << n, n), math.inf)
    off = t.copy()
    np.fill_diagonal(off, math.inf)
    for i in range(n):
        if objective == "open_path":
            g[1 << i, i] = 0.0
        elif i:
            g[1 << i, i] = t[i, 0]
    if n == 1:
        g[1, 0] = 0.0

    masks = np.arange(1 << n)
    popcount = np.array([bin(m).count("1") for m in range(1 << n)])
    states = n
    for size in range(2, n + 1):
        layer = masks[popcount == size]
        for i in range(n):
            bit = 1 << i
            rows = layer[(layer & bit) != 0]
            if objective == "closed_tour" and i == 0:
                # speed 0 is only ever the first check of a closed tour
                rows = rows[rows == full]
            if rows.size == 0:
                continue
            cand = off[i][None, :] + g[rows ^ bit]
            g[rows, i] = cand.min(axis=1)
            states += rows.size

    if objective == "open_path":
        starts = [t[i, i] + g[full, i] for i in range(n)]
        first = int(np.argmin(starts))
    else:
        first = 0
    order = [first]
    mask = full
    cur = first
    while mask != (1 << cur):
        rest = mask ^ (1 << cur)
        cand = off[cur] + g[rest]
        nxt = int(np.flatnonzero(cand == g[mask, cur])[0])
        order.append(nxt)
        mask, cur = rest, nxt
    if objective == "closed_tour":
        order = _rotate_to_cheapest_start(t, order)
    order = tuple(order)
    return CheckOrder(order, path_cost(t, order, objective), objective, "dp", states)


def _rotate_to_cheapest_start(t: np.ndarray, cycle: Sequence[int]) -> list[int]:
    # the cycle cost is rotation-invariant; only the first-check cost differs
    k = min(range(len(cycle)), key=lambda p: (t[cycle[p], cycle[p]], cycle[p]))
    return list(cycle[k:]) + list(cycle[:k])


def reduce_matrix(T) -> tuple[np.ndarray, float]:
    """Subtract row minima, then column minima.

    Returns the reduced matrix and the sum ``h`` of the subtracted
    constants, a lower bound on any solution that uses one entry per row
    and column.
    """
    r = np.array(T, dtype=float)
    h = 0.0
    for i in range(r.shape[0]):
        lo = r[i].min()
        if lo == math.inf:
            raise InfeasibleError(f"row {i} has no finite entry")
        r[i] -= lo
        h += lo
    for j in range(r.shape[1]):
        lo = r[:, j].min()
        if lo == math.inf:
            raise InfeasibleError(f"column {j} has no finite entry")
        r[:, j] -= lo
        h += lo
    return r, float(h)


def tour_matrix(T, objective: str = "open_path") -> np.ndarray:
    """Cyclic-tour form of the ordering problem (diagonal blocked).

    For ``open_path`` a depot node 0 is prepended: depot -> speed i costs the
    first-check entry ``T[i, i]`` and every speed returns to the depot for
    free.  For ``closed_tour`` the off-diagonal part of ``T`` is used as is.
    """
    t = _entries(T)
    _check_objective(objective)
    n = t.shape[0]
    if objective == "closed_tour":
        c = t.copy()
        np.fill_diagonal(c, math.inf)
        return c
    c = np.full((n + 1, n + 1), math.inf)
    c[1:, 1:] = t
    np.fill_diagonal(c, math.inf)
    c[0, 1:] = np.diag(t)
    c[1:, 0] = 0.0
    return c


@dataclass
class _Node:
    cost: np.ndarray  # reduced costs; inactive rows/cols are inf
    bound: float
    succ: dict  # fixed arcs i -> j
    excluded: frozenset
    rows: list
    cols: list


def _reduce_active(c: np.ndarray, rows: list, cols: list) -> float:
    sub = c[np.ix_(rows, cols)]
    rmin = sub.min(axis=1)
    if (rmin == math.inf).any():
        raise InfeasibleError("a row has no finite entry")
    sub = sub - rmin[:, None]
    cmin = sub.min(axis=0)
    if (cmin == math.inf).any():
        raise InfeasibleError("a column has no finite entry")
    sub = sub - cmin[None, :]
    c[np.ix_(rows, cols)] = sub
    return float(rmin.sum() + cmin.sum())


def _chain_ends(succ: dict, i: int, j: int) -> tuple[int, int]:
    pred = {b: a for a, b in succ.items()}
    start = i
    while start in pred:
        start = pred[start]
    end = j
    while end in succ:
        end = succ[end]
    return start, end


def _tour_cost(c0: np.ndarray, succ: dict) -> float | None:
    n = c0.shape[0]
    seen, node, total = 0, 0, 0.0
    for _ in range(n):
        nxt = succ.get(node)
        if nxt is None:
            return None
        total += c0[node, nxt]
        node = nxt
        seen += 1
        if node == 0:
            break
    if node != 0 or seen != n or total == math.inf:
        return None
    return float(total)


def _little(c0: np.ndarray, trace: bool):
    n = c0.shape[0]
    identity = {k: (k + 1) % n for k in range(n)}
    best_cost = _tour_cost(c0, identity)
    best_succ = identity if best_cost is not None else None
    if best_cost is None:
        best_cost = math.inf
    log = []
    explored = 0

    root = c0.copy()
    try:
        h = _reduce_active(root, list(range(n)), list(range(n)))
    except InfeasibleError:
        raise InfeasibleError("no finite tour: a row or column is fully blocked") from None
    stack = [_Node(root, h, {}, frozenset(), list(range(n)), list(range(n)))]

    while stack:
        node = stack.pop()
        explored += 1
        if trace:
            log.append((node.bound, dict(node.succ), node.excluded))
        if node.bound >= best_cost:
            continue
        rows, cols = node.rows, node.cols
        if len(rows) == 2:
            (r1, r2), (k1, k2) = rows, cols
            for a, b in (((r1, k1), (r2, k2)), ((r1, k2), (r2, k1))):
                succ = dict(node.succ)
                succ[a[0]] = a[1]
                succ[b[0]] = b[1]
                cost = _tour_cost(c0, succ)
                if cost is not None and cost < best_cost:
                    best_cost, best_succ = cost, succ
            continue

        c = node.cost
        sub = c[np.ix_(rows, cols)]
        best_pen, pick = -1.0, None
        for a, b in zip(*np.nonzero(sub == 0.0)):
            row = np.delete(sub[a], b)
            col = np.delete(sub[:, b], a)
            pen = row.min() + col.min()
            if pen > best_pen:
                best_pen, pick = pen, (a, b)
        if pick is None:  # pragma: no cover - a reduced matrix always has zeros
            continue
        i, j = rows[pick[0]], cols[pick[1]]

        # exclude (i, j): pushed first so the include branch is explored first
        if best_pen < math.inf:
            c_ex = c.copy()
            c_ex[i, j] = math.inf
            try:
                h_ex = _reduce_active(c_ex, rows, cols)
                stack.append(_Node(c_ex, node.bound + h_ex, node.succ, node.excluded | {(i, j)}, rows, cols))
            except InfeasibleError:
                pass

        # include (i, j): drop row i and column j, forbid the arc closing a subtour
        c_in = c.copy()
        succ = dict(node.succ)
        succ[i] = j
        start, end = _chain_ends(succ, i, j)
        new_rows = [r for r in rows if r != i]
        new_cols = [k for k in cols if k != j]
        if end in new_rows and start in new_cols:
            c_in[end, start] = math.inf
        try:
            h_in = _reduce_active(c_in, new_rows, new_cols)
            stack.append(_Node(c_in, node.bound + h_in, succ, node.excluded, new_rows, new_cols))
        except InfeasibleError:
            pass

    if best_succ is None:
        raise InfeasibleError("no finite tour exists")
    return best_cost, best_succ, explored, log


def branch_and_bound(T, objective: str = "open_path", trace: bool = False) -> CheckOrder:
    """Little's algorithm on the tour form of ``T``.

    Each node reduces its matrix (the reduction constants accumulate into
    the lower bound Y), picks the zero whose exclusion raises the bound the
    most, and branches into "include arc" and "exclude arc".  Nodes with
    Y >= Z (best known tour, seeded by the identity order) are discarded;
    nodes with two rows left are closed directly.
    """
    t = _entries(T)
    _check_objective(objective)
    n = t.shape[0]
    if n > MAX_BNB:
        raise SizeError(f"branch and bound is limited to n <= {MAX_BNB}, got {n}")
    if n == 1:
        return CheckOrder((0,), path_cost(t, (0,), objective), objective, "bnb", 1)
    if objective == "closed_tour" and n == 2:
        order = _rotate_to_cheapest_start(t, [0, 1])
        return CheckOrder(tuple(order), path_cost(t, order, objective), objective, "bnb", 1)

    c0 = tour_matrix(t, objective)
    _, succ, explored, log = _little(c0, trace)
    cycle = [0]
    while len(cycle) < c0.shape[0]:
        cycle.append(succ[cycle[-1]])
    if objective == "open_path":
        order = [k - 1 for k in cycle[1:]]
    else:
        order = _rotate_to_cheapest_start(t, cycle)
    order = tuple(order)
    return CheckOrder(order, path_cost(t, order, objective), objective, "bnb", explored, log)


def order_from_scenario(scenario, objective: str = "open_path") -> CheckOrder:
    from .kinematics import check_duration_matrix

    return held_karp(check_duration_matrix(scenario), objective)


SOLVERS = {"dp": held_karp, "bnb": branch_and_bound, "brute": brute_force_order}
