import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from pursuitlab import scenario_io as sio
from pursuitlab.kinematics import PursuitScenario


@pytest.mark.parametrize(
    "text, value",
    [("1,9", 1.9), ("3.05", 3.05), ("4,71 * 10^6", 4.71e6), ("10^10", 1e10), ("2*10^{-3}", 2e-3), (" 373,78 ", 373.78)],
)
def test_parse_number(text, value):
    assert sio.parse_number(text) == pytest.approx(value, rel=1e-15)


def test_parse_number_rejects_garbage():
    with pytest.raises(ValueError):
        sio.parse_number("abc")


@pytest.mark.parametrize("name", sio.FIXTURES)
def test_every_fixture_loads(name):
    a = sio.load_fixture(name)
    assert a.ndim == 2 and a.size > 0
    assert np.isfinite(a).all() and (a >= 0).all()


@pytest.mark.parametrize(
    "name, shape, cell, value",
    [
        ("game_example1", (9, 6), (0, 0), 1.9),
        ("game_example1", (9, 6), (8, 5), 58.9),
        ("game_example2", (9, 6), (0, 0), 0.6),
        ("assignment_example3", (4, 4), (2, 0), 373.78),
        ("assignment_example4", (4, 4), (3, 3), 0.08),
        ("check_six_speed", (6, 6), (5, 3), 93.13),
    ],
)
def test_fixture_cells(name, shape, cell, value):
    a = sio.load_fixture(name)
    assert a.shape == shape
    assert a[cell] == value


def test_unknown_fixture():
    with pytest.raises(sio.ScenarioError, match="matrix.fixture"):
        sio.load_fixture("nope")


def test_read_fixture_text_unequal_rows():
    with pytest.raises(sio.ScenarioError):
        sio.read_fixture_text("1\t2\n3\n")


@given(arrays(np.float64, st.tuples(st.integers(1, 5), st.integers(1, 5)), elements=st.floats(-1e9, 1e9)))
def test_csv_round_trip(a):
    back, rows, cols = sio.matrix_from_csv(sio.matrix_to_csv(a))
    np.testing.assert_array_equal(back, a)
    assert len(rows) == a.shape[0] and len(cols) == a.shape[1]


def test_csv_without_labels():
    a, rows, cols = sio.matrix_from_csv("1,2\n3,4\n")
    assert a.tolist() == [[1, 2], [3, 4]] and rows == [] and cols == []


def test_csv_errors():
    with pytest.raises(sio.ScenarioError):
        sio.matrix_from_csv("")
    with pytest.raises(sio.ScenarioError):
        sio.matrix_from_csv("1,2\n3\n")


def write(tmp_path, text):
    p = tmp_path / "s.yaml"
    p.write_text(text)
    return sio.load_scenario(p)


def test_pursuit_section(tmp_path):
    data = write(
        tmp_path,
        "pursuit: {initial_distance: 200, pursuer_speed: 100, speeds: [8, 56], directions_deg: [23]}\n",
    )
    assert sio.pursuit_scenario(data) == PursuitScenario(200, 100, (8, 56), (23,))


def test_json_is_accepted(tmp_path):
    data = write(tmp_path, '{"stopping": {"n": 12}}')
    assert sio.stopping_n(data) == 12


def test_fleet_targets_jobs(tmp_path):
    data = write(
        tmp_path,
        "fleet: [60, 65]\n"
        "targets:\n  - [30, 7, 7]\n  - {distance: 11, speed: 11, direction_deg: 11}\n"
        "jobs:\n  - [2, 1, 1]\n  - {duration: 1}\n",
    )
    assert [b.max_speed for b in sio.fleet(data)] == [60, 65]
    assert [t.initial_distance for t in sio.targets(data)] == [30, 11]
    jobs = sio.jobs(data)
    assert jobs[1].weight == 1.0 and jobs[1].due == 0.0


@pytest.mark.parametrize(
    "text, reader, match",
    [
        ("fleet: [60]\n", sio.pursuit_scenario, "pursuit"),
        ("pursuit: {pursuer_speed: 100, speeds: [8]}\n", sio.pursuit_scenario, "pursuit.initial_distance"),
        ("pursuit: {initial_distance: x, pursuer_speed: 100, speeds: [8]}\n", sio.pursuit_scenario, "initial_distance"),
        ("targets: [[1, 2]]\n", sio.targets, r"targets\[0\]"),
        ("jobs: 3\n", sio.jobs, "jobs"),
        ("matrix: [[1, 2], [3]]\n", sio.matrix, "same length"),
        ("matrix: {bogus: 1}\n", sio.matrix, "matrix"),
        ("stopping: {n: many}\n", sio.stopping_n, "stopping.n"),
    ],
)
def test_errors_name_the_field(tmp_path, text, reader, match):
    data = write(tmp_path, text)
    with pytest.raises(sio.ScenarioError, match=match):
        reader(data)


def test_missing_or_malformed_file(tmp_path):
    with pytest.raises(sio.ScenarioError, match="cannot read"):
        sio.load_scenario(tmp_path / "missing.yaml")
    bad = tmp_path / "bad.yaml"
    bad.write_text("- just\n- a list\n")
    with pytest.raises(sio.ScenarioError, match="mapping"):
        sio.load_scenario(bad)


def test_matrix_sources(tmp_path):
    (tmp_path / "m.csv").write_text(sio.matrix_to_csv([[1.5, 2.0], [3.0, 4.0]]))
    data = write(tmp_path, "matrix: {csv: m.csv}\n")
    assert sio.matrix(data)[0].tolist() == [[1.5, 2.0], [3.0, 4.0]]
    data = write(tmp_path, "matrix: {fixture: game_example2}\n")
    assert sio.matrix(data)[0].shape == (9, 6)
    data = write(tmp_path, "matrix: [['1,5', 2], [3, 4]]\n")
    assert sio.matrix(data)[0][0, 0] == 1.5
    data = write(tmp_path, "matrix: {entries: [[7]]}\n")
    assert sio.matrix(data)[0].tolist() == [[7.0]]
