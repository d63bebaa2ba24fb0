"""Sequencing the pursuit of several fugitives by one pursuer.

Jobs are processed back to back without idle time; a job's completion is
the sum of the durations up to and including it.  Criteria:

    f1 = sum_k w_k (C_k - due_k)^+      total weighted tardiness
    f2 = max_k w_k (C_k - due_k)^+      worst weighted tardiness
    f3 = sum_k w_k (C_k - due_k)        signed weighted lateness
    f4 = sum_k w_k C_k                  weighted completion time
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError, SizeError

CRITERIA = ("f1", "f2", "f3", "f4")
MAX_EXACT_JOBS = 16


@dataclass(frozen=True)
class Job:
    duration: float
    weight: float = 1.0
    due: float = 0.0

    def __post_init__(self):
        if not self.duration > 0:
            raise DomainError(f"job duration must be > 0, got {self.duration}")
        if not self.weight > 0:
            raise DomainError(f"job weight must be > 0, got {self.weight}")


@dataclass(frozen=True)
class Schedule:
    order: tuple[int, ...]
    completions: tuple[float, ...]  # aligned with ``order``
    f1: float
    f2: float
    f3: float
    f4: float

    @property
    def criteria(self) -> dict[str, float]:
        return {"f1": self.f1, "f2": self.f2, "f3": self.f3, "f4": self.f4}


def evaluate_criteria(jobs: Sequence[Job], order: Sequence[int]) -> Schedule:
    order = tuple(int(k) for k in order)
    if sorted(order) != list(range(len(jobs))):
        raise ValueError(f"order must be a permutation of 0..{len(jobs) - 1}, got {order}")
    t = 0.0
    completions = []
    f1 = f2 = f3 = f4 = 0.0
    for k in order:
        job = jobs[k]
        t += job.duration
        completions.append(t)
        late = job.weight * (t - job.due)
        f1 += max(late, 0.0)
        f2 = max(f2, late)
        f3 += late
        f4 += job.weight * t
    return Schedule(order, tuple(completions), f1, f2, f3, f4)


def _ratio_cmp(a: Job, b: Job) -> int:
    # compare duration/weight without dividing
    lhs, rhs = a.duration * b.weight, b.duration * a.weight
    return (lhs > rhs) - (lhs < rhs)


def wspt_order(jobs: Sequence[Job]) -> Schedule:
    """Nondecreasing duration/weight; equal ratios keep input order."""
    idx = sorted(range(len(jobs)), key=functools.cmp_to_key(lambda i, j: _ratio_cmp(jobs[i], jobs[j])))
    return evaluate_criteria(jobs, idx)


def _job_penalty(job: Job, completion: float, criterion: str) -> float:
    late = job.weight * (completion - job.due)
    if criterion == "f1" or criterion == "f2":
        return max(late, 0.0)
    return late


def optimal_order(jobs: Sequence[Job], criterion: str = "f4") -> Schedule:
    """Schedule minimising one criterion.

    f4 is solved by the ratio rule.  f1-f3 use a dynamic programme over job
    subsets: whatever the order inside a subset S, the last job of S
    completes at sum(S), so ``best(S) = min_j best(S - j) (+ or max)
    penalty_j(sum(S))``.
    """
    if criterion not in CRITERIA:
        raise ValueError(f"criterion must be one of {CRITERIA}, got {criterion!r}")
    if criterion == "f4":
        return wspt_order(jobs)
    n = len(jobs)
    if n == 0:
        return evaluate_criteria(jobs, ())
    if n > MAX_EXACT_JOBS:
        raise SizeError(f"exact {criterion} sequencing is limited to {MAX_EXACT_JOBS} jobs, got {n}")

    combine = max if criterion == "f2" else (lambda a, b: a + b)
    size = 1 << n
    best = [math.inf] * size
    last = [-1] * size
    span = [0.0] * size
    best[0] = 0.0
    for mask in range(1, size):
        low = (mask & -mask).bit_length() - 1
        span[mask] = span[mask & (mask - 1)] + jobs[low].duration
        for j in range(n):
            bit = 1 << j
            if mask & bit:
                cand = combine(best[mask ^ bit], _job_penalty(jobs[j], span[mask], criterion))
                if cand < best[mask]:
                    best[mask], last[mask] = cand, j
    order = []
    mask = size - 1
    while mask:
        j = last[mask]
        order.append(j)
        mask ^= 1 << j
    return evaluate_criteria(jobs, order[::-1])
