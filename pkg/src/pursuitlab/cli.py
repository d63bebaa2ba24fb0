"""Command-line entry point.

Every command prints a short human report (4 significant digits).  With
``--out`` it also writes a machine file in ``--format`` (``structured`` is
JSON, ``csv`` is a flat table); with ``--format`` but no ``--out`` the machine
output goes to stdout instead of the report.

Exit codes: 0 success, 2 usage error, 3 domain or infeasibility error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import json
import math
import sys
import time
from pathlib import Path
from typing import Any

import numpy as np

from . import __version__
from . import scenario_io as sio
from .assignment import EfficiencyMatrix, balance, build_efficiency_matrix, hungarian, verify_duals
from .errors import PursuitError
from .game import (
    PayoffMatrix,
    brown_robinson,
    build_payoff_matrix,
    exact_value_support_enumeration,
    is_equilibrium,
    saddle_scan,
    solve_auto,
)
from .kinematics import EvaderStrategy, check_duration_matrix, guaranteed_capture_time, sample_trajectory
from .ordering import OBJECTIVES, SOLVERS, CheckCostMatrix
from .scheduling import CRITERIA, optimal_order
from .stopping import g, h, optimal_threshold, simulate, stopping_crossing

EXIT_OK, EXIT_USAGE, EXIT_DOMAIN = 0, 2, 3


class UsageError(ValueError):
    pass


def _g4(x: float) -> str:
    return f"{x:.4g}"


def _digest(payload: Any) -> str:
    blob = json.dumps(payload, sort_keys=True, default=_jsonable).encode()
    return "sha256:" + hashlib.sha256(blob).hexdigest()


def _jsonable(x):
    if isinstance(x, np.ndarray):
        return x.tolist()
    if isinstance(x, (np.floating, np.integer)):
        return x.item()
    if isinstance(x, tuple):
        return list(x)
    raise TypeError(f"not JSON serialisable: {type(x)}")


def _scenario(args) -> dict:
    if not args.scenario:
        raise UsageError("--scenario is required for this command")
    return sio.load_scenario(args.scenario)


def _inputs(data: dict) -> dict:
    return {k: v for k, v in data.items() if not k.startswith("_")}


def _rows_csv(header: list[str], rows: list[list[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(float(x)) if isinstance(x, (float, np.floating)) else x for x in r])
    return buf.getvalue()


# -- commands -----------------------------------------------------------------
# Each returns (report_text, result_payload, diagnostics, csv_text, input_payload).


def cmd_matrix(args):
    data = _scenario(args)
    if args.kind == "game":
        sc = sio.pursuit_scenario(data)
        pm = build_payoff_matrix(sc)
        entries, rows, cols = pm.entries, pm.row_names(), pm.col_names()
    elif args.kind == "assignment":
        em = build_efficiency_matrix(sio.fleet(data), sio.targets(data))
        entries = em.entries
        rows = [f"t{i + 1}" for i in range(entries.shape[0])]
        cols = [f"b{j + 1}({b.max_speed:g})" for j, b in enumerate(sio.fleet(data))]
    else:
        sc = sio.pursuit_scenario(data)
        cm = check_duration_matrix(sc)
        entries = cm.entries
        rows = cols = [f"v={v:g}" for v in cm.labels]
    text = _matrix_report(f"{args.kind} matrix {entries.shape[0]}x{entries.shape[1]}", entries, rows, cols)
    result = {"kind": args.kind, "row_labels": rows, "col_labels": cols, "entries": entries.tolist()}
    return text, result, {}, sio.matrix_to_csv(entries, rows, cols), _inputs(data)


def _matrix_report(title, entries, rows, cols) -> str:
    width = max(10, max(len(c) for c in cols) + 1)
    lw = max(len(r) for r in rows) + 1
    lines = [title, " " * lw + "".join(c.rjust(width) for c in cols)]
    for r, row in zip(rows, entries):
        lines.append(r.ljust(lw) + "".join(_g4(x).rjust(width) for x in row))
    return "\n".join(lines)


def _game_matrix(data: dict) -> tuple[np.ndarray, list[str], list[str]]:
    """Payoff matrix from the ``matrix`` section if present, else from ``pursuit``."""
    if "matrix" in data:
        entries, rows, cols = sio.matrix(data)
        pm = PayoffMatrix(entries)
        return pm.entries, rows or pm.row_names(), cols or pm.col_names()
    pm = build_payoff_matrix(sio.pursuit_scenario(data))
    return pm.entries, pm.row_names(), pm.col_names()


def cmd_solve_game(args):
    data = _scenario(args)
    a, rows, cols = _game_matrix(data)
    scan = saddle_scan(a)
    if args.method == "fp":
        sol = brown_robinson(a, args.iters, args.tol)
    elif args.method == "exact":
        sol = exact_value_support_enumeration(a)
    else:
        sol = solve_auto(a, args.iters, args.tol)
    verified = None
    if sol.method != "fictitious_play":
        verified = is_equilibrium(a, sol.evader_strategy, sol.pursuer_strategy, sol.value, tol=1e-6)
    result = {
        "method": sol.method,
        "value": sol.value,
        "lower_bound": sol.lower_bound,
        "upper_bound": sol.upper_bound,
        "maximin": scan.maximin,
        "minimax": scan.minimax,
        "evader_strategy": dict(zip(rows, sol.evader_strategy.tolist())),
        "pursuer_strategy": dict(zip(cols, sol.pursuer_strategy.tolist())),
    }
    diag = {"iterations": sol.iterations, "equilibrium_verified": verified}
    lines = [
        f"game {a.shape[0]}x{a.shape[1]}  method={sol.method}",
        f"maximin={_g4(scan.maximin)}  minimax={_g4(scan.minimax)}",
        f"bounds [{_g4(sol.lower_bound)}, {_g4(sol.upper_bound)}]  value~{_g4(sol.value)}",
        "evader:  " + "  ".join(f"{r}={p:.4g}" for r, p in zip(rows, sol.evader_strategy) if p > 0),
        "pursuer: " + "  ".join(f"{c}={p:.4g}" for c, p in zip(cols, sol.pursuer_strategy) if p > 0),
        f"iterations={sol.iterations}",
    ]
    csv_rows = [["bound", "lower", sol.lower_bound], ["bound", "upper", sol.upper_bound], ["value", "value", sol.value]]
    csv_rows += [["evader", r, p] for r, p in zip(rows, sol.evader_strategy)]
    csv_rows += [["pursuer", c, p] for c, p in zip(cols, sol.pursuer_strategy)]
    inputs = {"data": _inputs(data), "matrix": a, "method": args.method, "iters": args.iters, "tol": args.tol}
    return "\n".join(lines), result, diag, _rows_csv(["kind", "label", "value"], csv_rows), inputs


def cmd_assign(args):
    data = _scenario(args)
    if "matrix" in data:
        entries, rows, cols = sio.matrix(data)
        em = EfficiencyMatrix(entries, row_labels=rows, col_labels=cols)
    else:
        em = build_efficiency_matrix(sio.fleet(data), sio.targets(data))
    sq = balance(em)
    asg = hungarian(sq)
    ok = verify_duals(sq, asg)
    pairs = [
        {"target": sq.row_labels[i], "interceptor": sq.col_labels[j], "time": float(sq.entries[i, j])}
        for i, j in enumerate(asg.pairs)
    ]
    result = {
        "total": asg.total_cost,
        "pairs": pairs,
        "u": asg.u.tolist(),
        "v": asg.v.tolist(),
        "dual_objective": float(asg.u.sum() + asg.v.sum()),
        "dual_certificate_ok": ok,
        "dummy_rows": sq.dummy_rows,
        "dummy_cols": sq.dummy_cols,
    }
    lines = [f"assignment {em.shape[0]}x{em.shape[1]} (balanced {sq.shape[0]}x{sq.shape[1]})"]
    lines += [f"  {p['target']} -> {p['interceptor']}  {_g4(p['time'])}" for p in pairs]
    lines.append(f"total={_g4(asg.total_cost)}  dual={_g4(result['dual_objective'])}  certificate={'ok' if ok else 'FAILED'}")
    csv_rows = [[p["target"], p["interceptor"], p["time"], asg.u[i], asg.v[asg.pairs[i]]] for i, p in enumerate(pairs)]
    csv_rows.append(["total", "", asg.total_cost, "", ""])
    inputs = {"data": _inputs(data), "matrix": em.entries}
    return "\n".join(lines), result, {"iterations": asg.iterations}, _rows_csv(["target", "interceptor", "time", "u", "v"], csv_rows), inputs


def cmd_order(args):
    data = _scenario(args)
    if "matrix" in data:
        entries, rows, _ = sio.matrix(data)
        cm = CheckCostMatrix(entries, labels=tuple(rows) if rows else ())
    else:
        cm = check_duration_matrix(sio.pursuit_scenario(data))
    res = SOLVERS[args.algo](cm, args.objective)
    labels = [str(lab) if not isinstance(lab, float) else f"{lab:g}" for lab in cm.labels]
    result = {
        "algorithm": args.algo,
        "objective": args.objective,
        "order": list(res.order),
        "order_labels": [labels[k] for k in res.order],
        "total_time": res.total_time,
    }
    lines = [
        f"check order ({args.algo}, {args.objective}) over {cm.n} speeds",
        "  " + " -> ".join(labels[k] for k in res.order),
        f"total={_g4(res.total_time)}  nodes={res.nodes}",
    ]
    cum, prev, csv_rows = 0.0, None, []
    for pos, k in enumerate(res.order):
        cum += cm.entries[k, k] if prev is None else cm.entries[prev, k]
        csv_rows.append([pos + 1, k, labels[k], cum])
        prev = k
    inputs = {"data": _inputs(data), "matrix": cm.entries, "algo": args.algo, "objective": args.objective}
    return "\n".join(lines), result, {"nodes": res.nodes}, _rows_csv(["position", "index", "label", "cumulative"], csv_rows), inputs


def cmd_schedule(args):
    data = _scenario(args)
    jobs = sio.jobs(data)
    s = optimal_order(jobs, args.criterion)
    result = {
        "criterion": args.criterion,
        "order": list(s.order),
        "completions": list(s.completions),
        "criteria": s.criteria,
    }
    lines = [
        f"schedule minimising {args.criterion} over {len(jobs)} jobs",
        "  order: " + " -> ".join(f"J{k + 1}" for k in s.order),
        "  " + "  ".join(f"{k}={_g4(v)}" for k, v in s.criteria.items()),
    ]
    csv_rows = [
        [pos + 1, k + 1, jobs[k].duration, jobs[k].weight, jobs[k].due, c]
        for pos, (k, c) in enumerate(zip(s.order, s.completions))
    ]
    inputs = {"data": _inputs(data), "criterion": args.criterion}
    return "\n".join(lines), result, {}, _rows_csv(["position", "job", "duration", "weight", "due", "completion"], csv_rows), inputs


def cmd_stopping(args):
    if args.n is not None:
        n, data = args.n, {}
    else:
        if not args.scenario:
            raise UsageError("stopping needs --n or a --scenario with a stopping.n section")
        data = _scenario(args)
        n = sio.stopping_n(data)
    if n < 1:
        raise UsageError("stopping.n must be >= 1")
    t_star, p = optimal_threshold(n)
    sim = simulate(n, t_star, args.trials, args.seed)
    result = {
        "n": n,
        "threshold": t_star,
        "probability": p,
        "threshold_fraction": t_star / n,
        "first_accept_position": stopping_crossing(n),
        "simulated_probability": sim,
        "trials": args.trials,
        "seed": args.seed,
    }
    lines = [
        f"secretary rule, n={n}",
        f"skip t*={t_star} (t*/n={_g4(t_star / n)}, 1/e={_g4(1 / math.e)})",
        f"success probability {_g4(p)}  simulated {_g4(sim)} over {args.trials} trials (seed {args.seed})",
    ]
    csv_rows = [[t, g(n, t) if t >= 1 else "", h(n, t) if t <= n - 1 else ""] for t in range(0, n + 1)]
    inputs = {"data": _inputs(data), "n": n, "trials": args.trials, "seed": args.seed}
    return "\n".join(lines), result, {}, _rows_csv(["t", "g", "h"], csv_rows), inputs


def _parse_floats(text: str, flag: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"{flag} expects comma-separated numbers, got {text!r}") from None


def cmd_trajectory(args):
    data = _scenario(args)
    sc = sio.pursuit_scenario(data)
    if args.order:
        speeds = _parse_floats(args.order, "--order")
        try:
            order = [sc.speed_set.index(v) for v in speeds]
        except ValueError:
            raise UsageError(f"--order speeds {speeds} must be the scenario speeds {list(sc.speed_set)}") from None
        if sorted(order) != list(range(sc.n_speeds)):
            raise UsageError(f"--order must list every scenario speed once, got {speeds}")
    else:
        order = list(range(sc.n_speeds))
    ev = _parse_floats(args.evader, "--evader")
    if len(ev) != 2:
        raise UsageError("--evader expects 'bearing_deg,speed'")
    evader = EvaderStrategy(ev[0], ev[1])
    t_cap, events = guaranteed_capture_time(sc, order, evader)
    samples = sample_trajectory(sc, order, evader, args.dt)
    result = {
        "capture_time": t_cap,
        "order": [sc.speed_set[k] for k in order],
        "evader": {"direction_deg": evader.direction_deg, "speed": evader.speed},
        "events": [
            {
                "kind": e.kind,
                "t_start": e.t_start,
                "t_end": e.t_end,
                "radius_start": e.radius_start,
                "radius_end": e.radius_end,
                "angle_swept": e.angle_swept,
                "hypothesis": e.hypothesis,
            }
            for e in events
        ],
        "n_samples": len(samples),
    }
    lines = [f"capture at t={_g4(t_cap)} after {len(events)} phases, {len(samples)} samples (dt={args.dt:g})"]
    lines += [
        f"  {e.kind:<16} t {_g4(e.t_start)} -> {_g4(e.t_end)}  rho {_g4(e.radius_start)} -> {_g4(e.radius_end)}"
        for e in events
    ]
    csv_text = _rows_csv(
        ["t", "rho", "phi", "x", "y", "phase"], [[s.t, s.rho, s.phi, s.x, s.y, s.phase] for s in samples]
    )
    inputs = {"data": _inputs(data), "order": order, "evader": ev, "dt": args.dt}
    return "\n".join(lines), result, {}, csv_text, inputs


COMMANDS = {
    "matrix": cmd_matrix,
    "solve-game": cmd_solve_game,
    "assign": cmd_assign,
    "order": cmd_order,
    "schedule": cmd_schedule,
    "stopping": cmd_stopping,
    "trajectory": cmd_trajectory,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pursuitlab", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--scenario", type=Path, help="scenario file (YAML or JSON)")
        p.add_argument("--out", type=Path, help="write the machine-readable result here")
        p.add_argument("--format", choices=["csv", "structured"], default=None)
        return p

    p = add("matrix", "build a game, assignment or check-duration matrix")
    p.add_argument("--kind", choices=["game", "assignment", "check"], default="game")

    p = add("solve-game", "solve the pursuit game")
    p.add_argument("--method", choices=["fp", "exact", "auto"], default="auto")
    p.add_argument("--iters", type=int, default=100_000)
    p.add_argument("--tol", type=float, default=0.0)

    add("assign", "assign interceptors to targets (Hungarian method)")

    p = add("order", "order the speed checks")
    p.add_argument("--algo", choices=sorted(SOLVERS), default="dp")
    p.add_argument("--objective", choices=OBJECTIVES, default="open_path")

    p = add("schedule", "sequence several fugitives")
    p.add_argument("--criterion", choices=CRITERIA, default="f4")

    p = add("stopping", "secretary-rule threshold and Monte Carlo check")
    p.add_argument("--n", type=int, default=None, help="number of candidates (overrides stopping.n)")
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=0)

    p = add("trajectory", "sample the pursuer's path against one evader strategy")
    p.add_argument("--order", default="", help="speed check order, e.g. 8,56,78 (default: scenario order)")
    p.add_argument("--evader", required=True, help="evader bearing and speed, e.g. 23,8")
    p.add_argument("--dt", type=float, default=0.01)
    p.add_argument("--samples", type=Path, help="samples CSV path (default: next to --out)")
    return parser


def run(args) -> tuple[str, dict, str]:
    start = time.perf_counter()
    report, result, diag, csv_text, inputs = COMMANDS[args.command](args)
    diag = dict(diag, runtime_s=time.perf_counter() - start)
    doc = {
        "command": args.command,
        "input_digest": _digest(inputs),
        "result": result,
        "diagnostics": diag,
    }
    return report, doc, csv_text


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "iters", 1) < 1:
        parser.error("--iters must be >= 1")
    if getattr(args, "dt", 1.0) <= 0:
        parser.error("--dt must be > 0")
    try:
        report, doc, csv_text = run(args)
    except PursuitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (UsageError, sio.ScenarioError, ValueError) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE

    fmt = args.format or "structured"
    machine = csv_text if fmt == "csv" else json.dumps(doc, indent=2, default=_jsonable) + "\n"
    if args.out is not None:
        args.out.parent.mkdir(parents=True, exist_ok=True)
        args.out.write_text(machine)
        if args.command == "trajectory":
            samples = args.samples or args.out.with_suffix(".samples.csv")
            samples.write_text(csv_text)
        print(report)
    elif args.format is not None:
        sys.stdout.write(machine)
    else:
        print(report)
    if args.command == "trajectory" and args.out is None and args.samples is not None:
        args.samples.write_text(csv_text)
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
