import itertools
from importlib import resources

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.optimize import linear_sum_assignment

from pursuitlab.assignment import (
    Assignment,
    EfficiencyMatrix,
    InterceptorSpec,
    TargetSpec,
    assignment_cost,
    balance,
    build_efficiency_matrix,
    hungarian,
    verify_duals,
)
from pursuitlab.errors import DomainError, InfeasibleError
from pursuitlab.kinematics import phase_one_time

EX3_BOATS = [74, 90, 178, 124]
EX3_TARGETS = [(100, 23, 23), (200, 50, 137), (50, 67, 187), (163, 70, 50)]
EX4_BOATS = [60, 65, 95, 105]
EX4_TARGETS = [(30, 7, 7), (11, 11, 11), (62, 30, 30), (8, 44, 44)]


def build(boats, targets):
    return build_efficiency_matrix([InterceptorSpec(b) for b in boats], [TargetSpec(*t) for t in targets])


def brute_min(c):
    c = np.asarray(c, dtype=float)
    p, q = c.shape
    best = np.inf
    if p <= q:
        for cols in itertools.permutations(range(q), p):
            best = min(best, sum(c[i, j] for i, j in enumerate(cols)))
    else:
        for rows in itertools.permutations(range(p), q):
            best = min(best, sum(c[i, j] for j, i in enumerate(rows)))
    return best


def brute_argmins(c):
    n = c.shape[0]
    costs = {perm: sum(c[i, j] for i, j in enumerate(perm)) for perm in itertools.permutations(range(n))}
    lo = min(costs.values())
    return {p for p, v in costs.items() if v == lo}


int_square = st.integers(1, 7).flatmap(lambda n: arrays(np.int64, (n, n), elements=st.integers(0, 50)))
float_square = st.integers(1, 6).flatmap(
    lambda n: arrays(np.float64, (n, n), elements=st.floats(0.0, 1000.0, allow_subnormal=False))
)
rectangular = st.tuples(st.integers(1, 5), st.integers(1, 5)).flatmap(
    lambda s: arrays(np.int64, s, elements=st.integers(0, 30))
)


# ---------------------------------------------------------------------------
# efficiency matrix


@pytest.mark.parametrize("cell, printed", [((0, 0), 1.18), ((1, 2), 1.77), ((2, 0), 373.78)])
def test_example3_cells(cell, printed):
    M = build(EX3_BOATS, EX3_TARGETS)
    assert M.entries.shape == (4, 4)
    assert M.entries[cell] == pytest.approx(printed, rel=0.01)
    assert not M.infeasible.any()


@pytest.mark.parametrize("cell, printed, tol", [((0, 0), 0.46, 0.02), ((3, 3), 0.08, 0.05)])
def test_example4_cells(cell, printed, tol):
    M = build(EX4_BOATS, EX4_TARGETS)
    assert M.entries[cell] == pytest.approx(printed, rel=tol)


def _printed_decimals(name):
    text = resources.files("pursuitlab").joinpath("fixtures", f"{name}.tsv").read_text()
    rows = [line.split("\t") for line in text.splitlines() if line and not line.startswith("#")]
    return np.array([[len(c.split(",")[1]) if "," in c else 0 for c in r] for r in rows])


@pytest.mark.parametrize(
    "name, boats, targets",
    [("assignment_example3", EX3_BOATS, EX3_TARGETS), ("assignment_example4", EX4_BOATS, EX4_TARGETS)],
)
def test_regenerated_within_printed_precision(fixtures, name, boats, targets):
    M = build(boats, targets)
    unit = 10.0 ** -_printed_decimals(name).astype(float)
    # a little over half a unit in the last printed place
    assert np.all(np.abs(M.entries - fixtures[name]) <= 0.6 * unit)


def test_single_pair_at_zero_bearing():
    M = build([100], [(200, 8, 0)])
    assert M.entries.shape == (1, 1)
    assert M.entries[0, 0] == pytest.approx(phase_one_time(200, 100, 8), rel=1e-15)


def test_slow_interceptor_is_sentinel():
    M = build([10, 100], [(50, 20, 30), (50, 5, 30)])
    assert M.infeasible.tolist() == [[True, False], [False, False]]
    assert M.entries[0, 0] == pytest.approx(1e6 * M.entries[~M.infeasible].max())
    asg = hungarian(M)
    assert asg.pairs == (1, 0)


def test_all_infeasible_row_is_reported():
    M = build([10, 20], [(50, 30, 30), (50, 5, 30)])
    with pytest.raises(InfeasibleError, match="t1"):
        hungarian(M)


def test_sentinel_forced_by_column_raises():
    M = build([10, 100], [(50, 20, 30), (50, 30, 30)])
    with pytest.raises(InfeasibleError):
        hungarian(M)


@pytest.mark.parametrize("args", [([], [TargetSpec(1, 1, 0)]), ([InterceptorSpec(1)], [])])
def test_build_requires_both_lists(args):
    with pytest.raises(ValueError):
        build_efficiency_matrix(*args)


@pytest.mark.parametrize("factory", [lambda: InterceptorSpec(0), lambda: TargetSpec(0, 1, 0), lambda: TargetSpec(1, 0, 0)])
def test_spec_validation(factory):
    with pytest.raises(DomainError):
        factory()


def test_negative_entries_rejected():
    with pytest.raises(DomainError):
        EfficiencyMatrix([[1, -1], [0, 0]])


# ---------------------------------------------------------------------------
# balance


def test_balance_pads_rows():
    M = balance([[1, 2, 3], [4, 5, 6]])
    assert M.entries.shape == (3, 3)
    assert M.entries[2].tolist() == [0, 0, 0]
    assert M.dummy_rows == 1 and M.dummy_cols == 0
    assert M.row_labels[-1].startswith("dummy")


def test_balance_square_is_identity():
    M = EfficiencyMatrix([[1.0, 2.0], [3.0, 4.0]])
    assert balance(M) is M


def test_balance_single_row():
    M = balance([[4.0, 1.0, 3.0, 2.0]])
    assert M.entries.shape == (4, 4)
    asg = hungarian(M)
    assert asg.pairs[0] == 1
    assert asg.total_cost == brute_min(M.entries) == 1.0


@given(rectangular)
def test_balancing_neutrality(c):
    asg = hungarian(balance(c))
    assert asg.total_cost == brute_min(c)


# ---------------------------------------------------------------------------
# hungarian


def test_example3_fixture(fixtures):
    asg = hungarian(fixtures["assignment_example3"])
    assert asg.total_cost == pytest.approx(8.08, abs=0.01)
    assert asg.pairs == (0, 2, 3, 1)
    assert verify_duals(fixtures["assignment_example3"], asg)


def test_example4_fixture(fixtures):
    c = fixtures["assignment_example4"]
    asg = hungarian(c)
    assert asg.total_cost == pytest.approx(1.147, abs=0.001)
    assert asg.pairs == (2, 0, 3, 1)
    assert brute_argmins(c) == {(2, 0, 3, 1)}
    assert verify_duals(c, asg)


def test_diagonal_with_zero_off_diagonal():
    # the zeros off the diagonal are the cheap cells
    asg = hungarian(np.diag([1.0, 2.0, 3.0]))
    assert asg.total_cost == 0.0
    assert asg.pairs == (1, 2, 0)


def test_diagonal_with_expensive_off_diagonal():
    c = np.full((3, 3), 100.0)
    np.fill_diagonal(c, [1.0, 2.0, 3.0])
    asg = hungarian(c)
    assert asg.pairs == (0, 1, 2)
    assert asg.total_cost == 6.0


def test_lexicographic_tie_break():
    asg = hungarian(np.zeros((3, 3)))
    assert asg.pairs == (0, 1, 2)


def test_non_square_rejected():
    with pytest.raises(ValueError, match="square"):
        hungarian([[1.0, 2.0]])


@given(int_square)
def test_oracle_equivalence_exact(c):
    asg = hungarian(c)
    assert asg.total_cost == brute_min(c)
    rows, cols = linear_sum_assignment(c)
    assert asg.total_cost == c[rows, cols].sum()
    assert sorted(asg.pairs) == list(range(c.shape[0]))
    assert verify_duals(c, asg)
    # the tie rule picks the smallest optimal permutation
    assert asg.pairs == min(brute_argmins(c))


@given(float_square)
def test_float_matrices(c):
    asg = hungarian(c)
    rows, cols = linear_sum_assignment(c)
    assert asg.total_cost == pytest.approx(c[rows, cols].sum(), rel=1e-12, abs=1e-9)
    assert verify_duals(c, asg)


@given(int_square, st.integers(0, 6), st.integers(0, 20), st.booleans())
def test_reduction_preserves_argmins(c, k, shift, on_row):
    k = k % c.shape[0]
    d = c.copy()
    if on_row:
        d[k] += shift
    else:
        d[:, k] += shift
    assert brute_argmins(c) == brute_argmins(d)
    assert hungarian(d).pairs == hungarian(c).pairs


# ---------------------------------------------------------------------------
# duals


def test_verify_duals_rejects_swapped_pair():
    c = np.full((3, 3), 100.0)
    np.fill_diagonal(c, [1.0, 2.0, 3.0])
    good = hungarian(c)
    assert verify_duals(c, good)
    bad = Assignment((1, 0, 2), 6.0, good.u, good.v)
    assert not verify_duals(c, bad)


def test_verify_duals_single_cell():
    asg = hungarian([[2.5]])
    assert asg.u.tolist() == [2.5] and asg.v.tolist() == [0.0]
    assert verify_duals([[2.5]], asg)


def test_verify_duals_rejects_infeasible_certificate():
    c = np.array([[1.0, 2.0], [3.0, 4.0]])
    asg = hungarian(c)
    forged = Assignment(asg.pairs, asg.total_cost, asg.u + 1.0, asg.v - 1.0)
    assert verify_duals(c, forged)  # still feasible and tight: the shift cancels
    forged = Assignment(asg.pairs, asg.total_cost, asg.u + 1.0, asg.v)
    assert not verify_duals(c, forged)


@given(int_square)
def test_complementary_slackness(c):
    asg = hungarian(c)
    u, v = asg.duals
    for i, j in enumerate(asg.pairs):
        assert u[i] + v[j] == pytest.approx(c[i, j], abs=1e-9)
    assert assignment_cost(c, asg.pairs) == asg.total_cost
