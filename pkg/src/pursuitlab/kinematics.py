"""Closed-form pursuit geometry for the logarithmic interception spiral.

The frame is polar with the pole at the point where the evader was last
detected and the polar axis pointing at the pursuer's starting position.
The evader flees radially at a constant speed along a fixed bearing; the
pursuer does not know either and tests speed hypotheses one after another:

* closing   -- radial run toward the pole until both radii are equal,
* spiral    -- radial speed matched to the hypothesis, the rest of the
               pursuer's speed spent turning counterclockwise,
* realign   -- radial run (in or out) onto the next hypothesis' radius.

A correct hypothesis meets the evader before one full turn is completed.
Every routine here is a pure function; times, lengths and speeds are in
whatever consistent unit family the caller uses.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import DomainError

TWO_PI = 2.0 * math.pi

EVENT_KINDS = ("closing", "spiral", "realign_inward", "realign_outward", "capture")


@dataclass(frozen=True)
class PursuitScenario:
    initial_distance: float
    pursuer_speed: float
    speed_set: tuple[float, ...]
    direction_set: tuple[float, ...] = (0.0,)

    def __post_init__(self):
        object.__setattr__(self, "speed_set", tuple(float(v) for v in self.speed_set))
        object.__setattr__(self, "direction_set", tuple(float(a) for a in self.direction_set))
        if not self.initial_distance > 0:
            raise DomainError(f"initial_distance must be > 0, got {self.initial_distance}")
        if not self.speed_set:
            raise DomainError("speed_set must not be empty")
        for v in self.speed_set:
            _check_speeds(self.pursuer_speed, v, field="speed_set")
        if len(set(self.speed_set)) != len(self.speed_set):
            raise DomainError(f"speed_set elements must be distinct: {self.speed_set}")
        for a in self.direction_set:
            if not 0.0 <= a < 360.0:
                raise DomainError(f"direction_set entries must lie in [0, 360): {a}")

    @property
    def n_speeds(self) -> int:
        return len(self.speed_set)

    def strategies(self) -> list["EvaderStrategy"]:
        """Evader pure strategies, directions-major then speeds."""
        return [EvaderStrategy(a, v) for a in self.direction_set for v in self.speed_set]


@dataclass(frozen=True)
class EvaderStrategy:
    direction_deg: float
    speed: float

    def label(self) -> str:
        return f"({_fmt(self.direction_deg)}deg;{_fmt(self.speed)})"


@dataclass(frozen=True)
class PursuitEvent:
    kind: str
    t_start: float
    t_end: float
    radius_start: float
    radius_end: float
    angle_swept: float = 0.0
    hypothesis: float | None = None

    @property
    def duration(self) -> float:
        return self.t_end - self.t_start


@dataclass(frozen=True)
class TrajectorySample:
    t: float
    rho: float
    phi: float
    x: float
    y: float
    phase: str = ""


def _fmt(x: float) -> str:
    return f"{x:g}"


def _check_speeds(vp: float, v: float, field: str = "v") -> None:
    if not v > 0:
        raise DomainError(f"{field}: evader speed must be > 0, got {v}")
    if not v < vp:
        raise DomainError(
            f"{field}: evader speed {v} must be below pursuer speed {vp}; "
            "the spiral has no tangential component otherwise"
        )


def _tangential(vp: float, v: float) -> float:
    return math.sqrt(vp * vp - v * v)


def phase_one_time(D: float, Vp: float, v: float) -> float:
    """Time until pursuer and evader are equidistant from the pole.

    Both run along the polar axis toward each other's radius, so the gap
    ``D`` closes at ``Vp + v``.
    """
    if D < 0:
        raise DomainError(f"initial distance must be >= 0, got {D}")
    _check_speeds(Vp, v)
    return D / (Vp + v)


def spiral_time_to_angle(t_start: float, Vp: float, v: float, sweep: float) -> float:
    """Time at which the spiral started at ``t_start`` has turned by ``sweep``."""
    _check_speeds(Vp, v)
    if not 0.0 <= sweep <= TWO_PI:
        raise DomainError(f"sweep must lie in [0, 2*pi], got {sweep}")
    if not t_start > 0:
        raise DomainError(f"spiral start time must be > 0, got {t_start}")
    return t_start * math.exp(v * sweep / _tangential(Vp, v))


def known_target_interception_time(D: float, Vp: float, v: float, direction_deg: float) -> float:
    """Closing run plus a single spiral up to the target's (known) bearing."""
    t1 = phase_one_time(D, Vp, v)
    sweep = math.radians(direction_deg % 360.0)
    if t1 == 0.0:
        return 0.0
    return spiral_time_to_angle(t1, Vp, v, sweep)


def realignment_time(t_now: float, rho_pursuer: float, Vp: float, v_next: float) -> float:
    """Radial run from ``rho_pursuer`` onto the radius ``v_next * t`` of the next hypothesis."""
    if rho_pursuer < 0:
        raise DomainError(f"pursuer radius must be >= 0, got {rho_pursuer}")
    _check_speeds(Vp, v_next, field="v_next")
    rho_e = v_next * t_now
    gap = abs(rho_pursuer - rho_e)
    if rho_pursuer > rho_e:
        return gap / (Vp + v_next)
    return gap / (Vp - v_next)


def _validate_order(order: Sequence[int], n: int) -> tuple[int, ...]:
    order = tuple(int(k) for k in order)
    if sorted(order) != list(range(n)):
        raise ValueError(f"order must be a permutation of 0..{n - 1}, got {order}")
    return order


def guaranteed_capture_time(
    scenario: PursuitScenario, order: Sequence[int], evader: EvaderStrategy
) -> tuple[float, list[PursuitEvent]]:
    """Simulate the hypothesis sequence ``order`` against one evader strategy.

    Wrong hypotheses cost a full turn; full turns and radial runs leave the
    pursuer's polar angle unchanged mod 2*pi, so the correct hypothesis
    always needs a sweep equal to the evader's bearing.

    Returns the capture time and the event log; the last event is the
    capturing spiral segment.
    """
    order = _validate_order(order, scenario.n_speeds)
    if evader.speed not in scenario.speed_set:
        raise ValueError(
            f"evader speed {evader.speed} is not in the scenario speed set {scenario.speed_set}"
        )
    if not 0.0 <= evader.direction_deg < 360.0:
        raise DomainError(f"evader direction must lie in [0, 360), got {evader.direction_deg}")
    vp = scenario.pursuer_speed
    bearing = math.radians(evader.direction_deg)
    events: list[PursuitEvent] = []

    t = 0.0
    rho = scenario.initial_distance
    for step, k in enumerate(order):
        v = scenario.speed_set[k]
        if step == 0:
            dt = phase_one_time(scenario.initial_distance, vp, v)
            kind = "closing"
        else:
            dt = realignment_time(t, rho, vp, v)
            kind = "realign_inward" if rho > v * t else "realign_outward"
        events.append(PursuitEvent(kind, t, t + dt, rho, v * (t + dt), 0.0, v))
        t += dt
        rho = v * t

        caught = v == evader.speed
        sweep = bearing if caught else TWO_PI
        t_end = spiral_time_to_angle(t, vp, v, sweep) if t > 0 else 0.0
        events.append(
            PursuitEvent("capture" if caught else "spiral", t, t_end, rho, v * t_end, sweep, v)
        )
        t = t_end
        rho = v * t
        if caught:
            return t, events
    raise AssertionError("unreachable: evader speed is in the order")  # pragma: no cover


def check_step_time(t_now: float, v_prev: float, Vp: float, v_next: float) -> float:
    """End time of a full check of ``v_next`` begun right after a full turn on ``v_prev``."""
    t = t_now + realignment_time(t_now, v_prev * t_now, Vp, v_next)
    return spiral_time_to_angle(t, Vp, v_next, TWO_PI)


def check_duration_matrix(scenario: PursuitScenario):
    """Pairwise speed-check durations feeding the ordering solvers.

    Entry (i, i) is the cost of checking ``v_i`` first (closing run and one
    full turn).  Entry (i, j) is the cost of then checking ``v_j``: the
    realignment from the ``v_i`` spiral plus one full turn on ``v_j``.
    """
    from .ordering import CheckCostMatrix

    vp = scenario.pursuer_speed
    speeds = scenario.speed_set
    n = len(speeds)
    first = [
        spiral_time_to_angle(phase_one_time(scenario.initial_distance, vp, v), vp, v, TWO_PI)
        for v in speeds
    ]
    entries = [[0.0] * n for _ in range(n)]
    for i, vi in enumerate(speeds):
        entries[i][i] = first[i]
        for j, vj in enumerate(speeds):
            if i != j:
                entries[i][j] = check_step_time(first[i], vi, vp, vj) - first[i]
    return CheckCostMatrix(entries, labels=speeds)


def _position_at(event: PursuitEvent, phi0: float, vp: float, t: float) -> tuple[float, float]:
    if event.kind in ("spiral", "capture"):
        v = event.hypothesis
        if event.t_start == 0.0:
            return 0.0, phi0
        phi = phi0 + _tangential(vp, v) / v * math.log(t / event.t_start)
        return v * t, phi
    # radial phases run at full speed toward radius_end
    frac = 0.0 if event.duration == 0 else (t - event.t_start) / event.duration
    return event.radius_start + frac * (event.radius_end - event.radius_start), phi0


def _phase_angles(events: list[PursuitEvent]) -> list[float]:
    starts, phi = [], 0.0
    for ev in events:
        starts.append(phi)
        phi += ev.angle_swept
    return starts


def _sample_at(events, starts, vp: float, t: float, e: int = 0) -> tuple[TrajectorySample, int]:
    while e < len(events) - 1 and events[e].t_end < t:
        e += 1
    ev = events[e]
    rho, phi = _position_at(ev, starts[e], vp, t)
    return TrajectorySample(t, rho, phi, rho * math.cos(phi), rho * math.sin(phi), ev.kind), e


def positions_at(
    scenario: PursuitScenario, order: Sequence[int], evader: EvaderStrategy, times: Sequence[float]
) -> list[TrajectorySample]:
    """Pursuer position at arbitrary times in [0, capture time]."""
    t_cap, events = guaranteed_capture_time(scenario, order, evader)
    starts = _phase_angles(events)
    out = []
    for t in times:
        if not 0.0 <= t <= t_cap:
            raise DomainError(f"time {t} outside [0, {t_cap}]")
        out.append(_sample_at(events, starts, scenario.pursuer_speed, t)[0])
    return out


def sample_trajectory(
    scenario: PursuitScenario, order: Sequence[int], evader: EvaderStrategy, dt: float
) -> list[TrajectorySample]:
    """Pursuer positions at t = 0, dt, 2dt, ... plus the exact capture instant.

    ``phi`` is the unwrapped polar angle (it grows by 2*pi per failed turn);
    ``x``/``y`` place the pole at the origin with the pursuer starting on +x.
    """
    if not dt > 0:
        raise DomainError(f"dt must be > 0, got {dt}")
    t_cap, events = guaranteed_capture_time(scenario, order, evader)
    starts = _phase_angles(events)
    vp = scenario.pursuer_speed
    samples = []
    e = 0
    k = 0
    while k * dt < t_cap:
        sample, e = _sample_at(events, starts, vp, k * dt, e)
        samples.append(sample)
        k += 1
    samples.append(_sample_at(events, starts, vp, t_cap, len(events) - 1)[0])
    return samples
