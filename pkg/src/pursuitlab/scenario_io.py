"""Scenario files, matrix CSVs and the bundled example fixtures.

A scenario file is YAML (JSON works too) with optional sections::

    pursuit:   {initial_distance, pursuer_speed, speeds: [...], directions_deg: [...]}
    fleet:     {speeds: [...]}
    targets:   [{distance, speed, direction_deg}, ...]
    jobs:      [{duration, weight, due}, ...]
    matrix:    [[...], ...]  |  {fixture: name}  |  {csv: path}
    stopping:  {n: 100}

Each command states which sections it needs.
"""

from __future__ import annotations

import csv
import io
import re
from importlib import resources
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from .assignment import InterceptorSpec, TargetSpec
from .kinematics import PursuitScenario
from .scheduling import Job

FIXTURES = (
    "game_example1",
    "game_example2",
    "assignment_example3",
    "assignment_example4",
    "check_six_speed",
    "raw_intro_game_example1",
    "raw_intro_game_example3",
    "raw_intro_assignment_example2",
)

_POW = re.compile(r"^(?:(?P<m>[-+]?\d+(?:\.\d*)?)\s*\*\s*)?10\^\{?(?P<e>[-+]?\d+)\}?$")


class ScenarioError(ValueError):
    """Malformed or incomplete scenario input; names the offending field."""


def parse_number(text: str) -> float:
    """Parse a transcribed cell: ``'1,9'``, ``'3.05'``, ``'4,71 * 10^6'``, ``'10^10'``."""
    s = text.strip().replace(",", ".")
    m = _POW.match(s)
    if m:
        mant = float(m.group("m")) if m.group("m") else 1.0
        return mant * 10.0 ** int(m.group("e"))
    return float(s)


def read_fixture_text(text: str) -> np.ndarray:
    rows = []
    for line in text.splitlines():
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        rows.append([parse_number(c) for c in line.split("\t")])
    if len({len(r) for r in rows}) != 1:
        raise ScenarioError("fixture rows have unequal lengths")
    return np.array(rows)


def load_fixture(name: str) -> np.ndarray:
    """Bundled reference matrix, with decimals normalised."""
    if name not in FIXTURES:
        raise ScenarioError(f"matrix.fixture: unknown fixture {name!r}; choose from {', '.join(FIXTURES)}")
    text = resources.files("pursuitlab").joinpath("fixtures", f"{name}.tsv").read_text()
    return read_fixture_text(text)


def matrix_to_csv(entries, row_labels=None, col_labels=None) -> str:
    """CSV with a header row and a label column; full ``repr`` precision."""
    a = np.asarray(entries, dtype=float)
    row_labels = row_labels or [f"r{i + 1}" for i in range(a.shape[0])]
    col_labels = col_labels or [f"c{j + 1}" for j in range(a.shape[1])]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow([""] + list(col_labels))
    for lab, row in zip(row_labels, a):
        w.writerow([lab] + [repr(float(x)) for x in row])
    return buf.getvalue()


def _is_number(s: str) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


def matrix_from_csv(text: str) -> tuple[np.ndarray, list[str], list[str]]:
    """Read a matrix CSV, with or without a label row/column."""
    rows = [r for r in csv.reader(io.StringIO(text)) if r]
    if not rows:
        raise ScenarioError("matrix csv is empty")
    col_labels: list[str] = []
    if not all(_is_number(c) for c in rows[0][1:]) or (rows[0][0] == "" and len(rows) > 1):
        col_labels = rows[0][1:]
        rows = rows[1:]
    row_labels: list[str] = []
    if rows and not _is_number(rows[0][0]):
        row_labels = [r[0] for r in rows]
        rows = [r[1:] for r in rows]
    try:
        a = np.array([[float(c) for c in r] for r in rows])
    except ValueError as exc:
        raise ScenarioError(f"matrix csv: {exc}") from None
    if a.ndim != 2:
        raise ScenarioError("matrix csv rows have unequal lengths")
    return a, row_labels, col_labels


def load_scenario(path: str | Path) -> dict[str, Any]:
    path = Path(path)
    try:
        data = yaml.safe_load(path.read_text())
    except OSError as exc:
        raise ScenarioError(f"--scenario: cannot read {path}: {exc.strerror}") from None
    except yaml.YAMLError as exc:
        raise ScenarioError(f"--scenario: {path} is not valid YAML/JSON: {exc}") from None
    if not isinstance(data, dict):
        raise ScenarioError(f"--scenario: {path} must contain a mapping of sections")
    data["_base_dir"] = str(path.parent)
    return data


def require(data: dict, section: str) -> Any:
    if section not in data or data[section] is None:
        raise ScenarioError(f"scenario is missing required section '{section}'")
    return data[section]


def _field(section: str, mapping: dict, key: str, *aliases: str):
    for k in (key,) + aliases:
        if k in mapping:
            return mapping[k]
    raise ScenarioError(f"{section}.{key} is required")


def _float(section: str, key: str, value) -> float:
    try:
        return float(value)
    except (TypeError, ValueError):
        raise ScenarioError(f"{section}.{key} must be a number, got {value!r}") from None


def _float_list(section: str, key: str, value) -> list[float]:
    if not isinstance(value, (list, tuple)):
        raise ScenarioError(f"{section}.{key} must be a list of numbers")
    return [_float(section, f"{key}[{i}]", v) for i, v in enumerate(value)]


def pursuit_scenario(data: dict) -> PursuitScenario:
    sec = require(data, "pursuit")
    return PursuitScenario(
        initial_distance=_float("pursuit", "initial_distance", _field("pursuit", sec, "initial_distance")),
        pursuer_speed=_float("pursuit", "pursuer_speed", _field("pursuit", sec, "pursuer_speed")),
        speed_set=tuple(_float_list("pursuit", "speeds", _field("pursuit", sec, "speeds"))),
        direction_set=tuple(
            _float_list("pursuit", "directions_deg", sec.get("directions_deg", [0.0]))
        ),
    )


def fleet(data: dict) -> list[InterceptorSpec]:
    sec = require(data, "fleet")
    speeds = sec.get("speeds") if isinstance(sec, dict) else sec
    return [InterceptorSpec(v) for v in _float_list("fleet", "speeds", speeds)]


def targets(data: dict) -> list[TargetSpec]:
    sec = require(data, "targets")
    if not isinstance(sec, list):
        raise ScenarioError("targets must be a list of {distance, speed, direction_deg} entries")
    out = []
    for i, t in enumerate(sec):
        name = f"targets[{i}]"
        if isinstance(t, (list, tuple)) and len(t) == 3:
            d, v, a = (_float(name, k, x) for k, x in zip(("distance", "speed", "direction_deg"), t))
        elif isinstance(t, dict):
            d = _float(name, "distance", _field(name, t, "distance", "initial_distance"))
            v = _float(name, "speed", _field(name, t, "speed"))
            a = _float(name, "direction_deg", _field(name, t, "direction_deg"))
        else:
            raise ScenarioError(f"{name} must be a mapping or a [distance, speed, direction_deg] triple")
        out.append(TargetSpec(d, v, a))
    return out


def jobs(data: dict) -> list[Job]:
    sec = require(data, "jobs")
    if not isinstance(sec, list):
        raise ScenarioError("jobs must be a list of {duration, weight, due} entries")
    out = []
    for i, j in enumerate(sec):
        name = f"jobs[{i}]"
        if isinstance(j, (list, tuple)) and len(j) == 3:
            out.append(Job(*(_float(name, k, x) for k, x in zip(("duration", "weight", "due"), j))))
        elif isinstance(j, dict):
            out.append(
                Job(
                    _float(name, "duration", _field(name, j, "duration")),
                    _float(name, "weight", j.get("weight", 1.0)),
                    _float(name, "due", j.get("due", 0.0)),
                )
            )
        else:
            raise ScenarioError(f"{name} must be a mapping or a [duration, weight, due] triple")
    return out


def matrix(data: dict) -> tuple[np.ndarray, list[str], list[str]]:
    sec = require(data, "matrix")
    if isinstance(sec, dict):
        if "fixture" in sec:
            return load_fixture(str(sec["fixture"])), [], []
        if "csv" in sec:
            p = Path(sec["csv"])
            if not p.is_absolute():
                p = Path(data.get("_base_dir", ".")) / p
            try:
                text = p.read_text()
            except OSError as exc:
                raise ScenarioError(f"matrix.csv: cannot read {p}: {exc.strerror}") from None
            return matrix_from_csv(text)
        if "entries" in sec:
            sec = sec["entries"]
        else:
            raise ScenarioError("matrix must be a list of rows, {fixture: name}, {csv: path} or {entries: rows}")
    if not isinstance(sec, list) or not sec or not all(isinstance(r, list) for r in sec):
        raise ScenarioError("matrix must be a non-empty list of rows")
    if len({len(r) for r in sec}) != 1:
        raise ScenarioError("matrix rows must all have the same length")
    rows = [[parse_number(str(x)) if isinstance(x, str) else _float("matrix", f"[{i}]", x) for x in r]
            for i, r in enumerate(sec)]
    return np.array(rows, dtype=float), [], []


def stopping_n(data: dict) -> int:
    sec = require(data, "stopping")
    n = sec.get("n") if isinstance(sec, dict) else sec
    try:
        n = int(n)
    except (TypeError, ValueError):
        raise ScenarioError(f"stopping.n must be an integer, got {n!r}") from None
    return n
