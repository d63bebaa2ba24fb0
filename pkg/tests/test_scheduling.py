import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pursuitlab.errors import DomainError, SizeError
from pursuitlab.scheduling import CRITERIA, Job, evaluate_criteria, optimal_order, wspt_order


def brute_criteria(jobs, order):
    """Criteria recomputed from scratch for one order."""
    t, c = 0, {}
    for k in order:
        t += jobs[k].duration
        c[k] = t
    late = [jobs[k].weight * (c[k] - jobs[k].due) for k in range(len(jobs))]
    return {
        "f1": sum(max(x, 0) for x in late),
        "f2": max([max(x, 0) for x in late] + [0]),
        "f3": sum(late),
        "f4": sum(jobs[k].weight * c[k] for k in range(len(jobs))),
    }


def brute_min(jobs, criterion):
    return min(brute_criteria(jobs, p)[criterion] for p in itertools.permutations(range(len(jobs))))


int_jobs = st.lists(
    st.builds(Job, st.integers(1, 20), st.integers(1, 10), st.integers(0, 60)), min_size=1, max_size=6
)
float_jobs = st.lists(
    st.builds(Job, st.floats(0.1, 50.0), st.floats(0.1, 10.0), st.floats(0.0, 100.0)), min_size=1, max_size=6
)

A = Job(2, 1, 1)
B = Job(1, 2, 2)


def test_single_job():
    s = evaluate_criteria([Job(3, 2, 1)], [0])
    assert s.completions == (3,)
    assert (s.f1, s.f2, s.f3, s.f4) == (4, 4, 4, 6)


@pytest.mark.parametrize(
    "order, completions, f4, f1",
    [((1, 0), (1, 3), 5, 2), ((0, 1), (2, 3), 8, 3)],
)
def test_two_jobs(order, completions, f4, f1):
    s = evaluate_criteria([A, B], order)
    assert s.completions == completions
    assert s.f4 == f4
    assert s.f1 == f1


def test_order_must_be_permutation():
    with pytest.raises(ValueError):
        evaluate_criteria([A, B], [0, 0])


@pytest.mark.parametrize("args", [(0, 1, 0), (1, 0, 0), (-1, 1, 0)])
def test_job_validation(args):
    with pytest.raises(DomainError):
        Job(*args)


def test_wspt_two_jobs():
    s = wspt_order([A, B])
    assert s.order == (1, 0) and s.f4 == 5


def test_wspt_keeps_input_order_on_ties():
    jobs = [Job(2, 1), Job(4, 2), Job(1, 0.5)]
    s = wspt_order(jobs)
    assert s.order == (0, 1, 2)
    assert s.f4 == evaluate_criteria(jobs, (1, 0, 2)).f4 == evaluate_criteria(jobs, (2, 1, 0)).f4


def test_f4_delegates_to_wspt():
    jobs = [Job(3, 1), Job(1, 1), Job(2, 5)]
    assert optimal_order(jobs, "f4") == wspt_order(jobs)


def test_f1_no_tardiness():
    s = optimal_order([Job(2, 1, 10), Job(1, 2, 10)], "f1")
    assert s.f1 == 0


def test_f2_five_random_jobs():
    rng = np.random.default_rng(5)
    jobs = [Job(*map(float, rng.integers(1, 10, 3))) for _ in range(5)]
    assert optimal_order(jobs, "f2").f2 == brute_min(jobs, "f2")


def test_unknown_criterion():
    with pytest.raises(ValueError):
        optimal_order([A], "f5")


def test_exact_size_guard():
    with pytest.raises(SizeError):
        optimal_order([Job(1)] * 17, "f1")


def test_empty_job_list():
    assert optimal_order([], "f1").order == ()


def test_eight_random_jobs_f4():
    rng = np.random.default_rng(8)
    jobs = [Job(float(rng.integers(1, 20)), float(rng.integers(1, 10))) for _ in range(8)]
    assert wspt_order(jobs).f4 == brute_min(jobs, "f4")


# ---------------------------------------------------------------------------
# properties


@given(int_jobs, st.sampled_from(CRITERIA))
def test_optimal_matches_brute_force_exactly(jobs, criterion):
    assert optimal_order(jobs, criterion).criteria[criterion] == brute_min(jobs, criterion)


@given(float_jobs, st.sampled_from(CRITERIA))
def test_optimal_matches_brute_force_floats(jobs, criterion):
    got = optimal_order(jobs, criterion).criteria[criterion]
    want = brute_min(jobs, criterion)
    assert got == pytest.approx(want, rel=1e-9, abs=1e-9)


@given(float_jobs)
def test_adjacent_interchange(jobs):
    s = wspt_order(jobs)
    for a, b in zip(s.order, s.order[1:]):
        assert jobs[a].weight * jobs[b].duration >= jobs[b].weight * jobs[a].duration


@given(float_jobs, st.data())
def test_criteria_consistency(jobs, data):
    order = data.draw(st.permutations(range(len(jobs))))
    s = evaluate_criteria(jobs, order)
    assert s.f1 >= 0 and s.f2 >= 0
    assert s.f1 >= s.f2 - 1e-12
    assert s.f3 <= s.f1 + 1e-9
    assert s.completions[-1] == pytest.approx(sum(j.duration for j in jobs), rel=1e-12)
    ref = brute_criteria(jobs, order)
    for key in CRITERIA:
        assert s.criteria[key] == pytest.approx(ref[key], rel=1e-12, abs=1e-12)
