"""Optimal stopping (secretary rule) for picking a behavioural strategy.

Candidates arrive in random order.  The rule skips the first ``t`` and then
accepts the first one better than everything seen so far.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


@dataclass(frozen=True)
class StoppingPolicy:
    n: int
    threshold: int

    def __post_init__(self):
        if self.n < 1 or not 0 <= self.threshold <= self.n - 1:
            raise DomainError(f"need n >= 1 and 0 <= threshold <= n-1, got n={self.n}, t={self.threshold}")

    @property
    def success_probability(self) -> float:
        return h(self.n, self.threshold)


def g(n: int, t: int) -> float:
    """Probability that a best-so-far candidate at position ``t`` is the overall best."""
    if not 1 <= t <= n:
        raise DomainError(f"g(n, t) needs 1 <= t <= n, got n={n}, t={t}")
    return t / n


def _tail_harmonic(n: int, t: int) -> float:
    return math.fsum(1.0 / j for j in range(t, n))


def h(n: int, t: int) -> float:
    """Success probability of skipping ``t`` candidates, then taking the first record."""
    if not 0 <= t <= n - 1:
        raise DomainError(f"h(n, t) needs 0 <= t <= n-1, got n={n}, t={t}")
    if t == 0:
        return 1.0 / n
    return t / n * _tail_harmonic(n, t)


def optimal_threshold(n: int) -> tuple[int, float]:
    """Best number of candidates to skip and its success probability.

    ``h`` rises from t to t+1 exactly while ``sum_{j=t+1}^{n-1} 1/j > 1``,
    so the scan stops at the first t where that tail drops to 1 or below
    (ties keep the smaller t).
    """
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    best_t, best_p = 0, h(n, 0)
    for t in range(1, n):
        p = h(n, t)
        if p > best_p:
            best_t, best_p = t, p
    return best_t, best_p


def stopping_crossing(n: int) -> int:
    """First position t (1-based) at which accepting a record beats waiting,
    i.e. ``g_t >= h_t`` or equivalently ``sum_{j=t}^{n-1} 1/j <= 1``."""
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    for t in range(1, n + 1):
        if _tail_harmonic(n, t) <= 1.0:
            return t
    return n  # pragma: no cover - t = n gives an empty sum


def simulate(n: int, t: int, trials: int, seed: int | None = 0, chunk: int = 20_000) -> float:
    """Monte Carlo win frequency of the skip-``t`` rule over random rank orders."""
    if not 0 <= t <= n - 1:
        raise DomainError(f"need 0 <= t <= n-1, got n={n}, t={t}")
    if trials < 1:
        raise DomainError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    wins = 0
    done = 0
    while done < trials:
        k = min(chunk, trials - done)
        ranks = rng.permuted(np.tile(np.arange(n), (k, 1)), axis=1)
        best = n - 1
        if t == 0:
            wins += int((ranks[:, 0] == best).sum())
        else:
            bar = ranks[:, :t].max(axis=1)
            better = ranks[:, t:] > bar[:, None]
            found = better.any(axis=1)
            pick = ranks[np.arange(k), t + better.argmax(axis=1)]
            wins += int((found & (pick == best)).sum())
        done += k
    return wins / trials
