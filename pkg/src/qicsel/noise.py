"""Calibration-style noise snapshots and time-varying drift schedules."""
from __future__ import annotations

import bisect
from dataclasses import dataclass, replace
from typing import Iterable, Mapping

import numpy as np

from .errors import InputError, MissingNoiseError

Pair = tuple[int, int]


def _edge(a: int, b: int) -> Pair:
    return (a, b) if a < b else (b, a)


def _parse_edge_key(key) -> Pair:
    if isinstance(key, str):
        parts = key.replace(",", "-").split("-")
        if len(parts) != 2:
            raise InputError(f"bad edge key {key!r}; expected 'a-b'")
        return _edge(int(parts[0]), int(parts[1]))
    a, b = key
    return _edge(int(a), int(b))


def _check_prob(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise InputError(f"{name} probability {value} outside [0, 1]")
    return value


@dataclass(frozen=True)
class NoiseSnapshot:
    """Per-qubit depolarizing (``p1``), per-edge depolarizing (``p2``) and
    per-qubit readout-flip (``pm``) probabilities at one point in time."""

    p1: dict[int, float]
    p2: dict[Pair, float]
    pm: dict[int, float]
    time: float = 0.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "p1", {int(q): _check_prob("p1", v) for q, v in self.p1.items()})
        object.__setattr__(self, "pm", {int(q): _check_prob("pm", v) for q, v in self.pm.items()})
        object.__setattr__(self, "p2", {_parse_edge_key(k): _check_prob("p2", v) for k, v in self.p2.items()})
        object.__setattr__(self, "time", float(self.time))

    def one_qubit(self, q: int) -> float:
        try:
            return self.p1[q]
        except KeyError:
            raise MissingNoiseError(f"no single-qubit error rate for qubit {q}") from None

    def two_qubit(self, a: int, b: int) -> float:
        try:
            return self.p2[_edge(a, b)]
        except KeyError:
            raise MissingNoiseError(f"no two-qubit error rate for edge {a}-{b}") from None

    def readout(self, q: int) -> float:
        try:
            return self.pm[q]
        except KeyError:
            raise MissingNoiseError(f"no readout error rate for qubit {q}") from None

    def check_covers(self, num_qubits: int, edges: Iterable[Pair]) -> None:
        for q in range(num_qubits):
            self.one_qubit(q)
            self.readout(q)
        for a, b in edges:
            self.two_qubit(a, b)

    def to_dict(self) -> dict:
        return {
            "p1": {str(q): v for q, v in sorted(self.p1.items())},
            "p2": {f"{a}-{b}": v for (a, b), v in sorted(self.p2.items())},
            "pm": {str(q): v for q, v in sorted(self.pm.items())},
            "time": self.time,
        }

    @classmethod
    def from_dict(cls, data: Mapping) -> NoiseSnapshot:
        try:
            return cls(dict(data["p1"]), dict(data["p2"]), dict(data["pm"]), data.get("time", 0.0))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed noise JSON: {exc}") from None

    @classmethod
    def uniform(cls, num_qubits: int, edges: Iterable[Pair], p1: float = 0.0, p2: float = 0.0,
                pm: float = 0.0, time: float = 0.0) -> NoiseSnapshot:
        return cls(
            {q: p1 for q in range(num_qubits)},
            {_edge(*e): p2 for e in edges},
            {q: pm for q in range(num_qubits)},
            time,
        )

    @classmethod
    def random(cls, num_qubits: int, edges: Iterable[Pair], rng: np.random.Generator,
               p1_range=(1e-3, 1e-2), p2_range=(1e-2, 1e-1), pm_range=(5e-3, 5e-2),
               time: float = 0.0) -> NoiseSnapshot:
        """Heterogeneous rates drawn log-uniformly from the given ranges."""

        def draw(lo, hi):
            return float(np.exp(rng.uniform(np.log(lo), np.log(hi))))

        edges = sorted({_edge(*e) for e in edges})
        return cls(
            {q: draw(*p1_range) for q in range(num_qubits)},
            {e: draw(*p2_range) for e in edges},
            {q: draw(*pm_range) for q in range(num_qubits)},
            time,
        )

    def with_overrides(self, p1: Mapping | None = None, p2: Mapping | None = None,
                       pm: Mapping | None = None, time: float | None = None) -> NoiseSnapshot:
        new_p2 = dict(self.p2)
        new_p2.update({_parse_edge_key(k): v for k, v in (p2 or {}).items()})
        return replace(
            self,
            p1={**self.p1, **(p1 or {})},
            p2=new_p2,
            pm={**self.pm, **(pm or {})},
            time=self.time if time is None else time,
        )


@dataclass(frozen=True)
class DriftSchedule:
    snapshots: tuple[NoiseSnapshot, ...]
    interpolation: str = "step"

    def __post_init__(self) -> None:
        snaps = tuple(self.snapshots)
        object.__setattr__(self, "snapshots", snaps)
        if not snaps:
            raise InputError("drift schedule needs at least one snapshot")
        if self.interpolation not in ("step", "linear"):
            raise InputError(f"interpolation must be 'step' or 'linear', got {self.interpolation!r}")
        times = [s.time for s in snaps]
        if any(t1 >= t2 for t1, t2 in zip(times, times[1:])):
            raise InputError("drift snapshot times must be strictly increasing")
        if self.interpolation == "linear":
            first = snaps[0]
            for s in snaps[1:]:
                if s.p1.keys() != first.p1.keys() or s.p2.keys() != first.p2.keys() or s.pm.keys() != first.pm.keys():
                    raise InputError("linear drift needs every snapshot to cover the same qubits and edges")

    @property
    def times(self) -> list[float]:
        return [s.time for s in self.snapshots]

    @property
    def first_time(self) -> float:
        return self.snapshots[0].time

    @property
    def last_time(self) -> float:
        return self.snapshots[-1].time

    def to_dict(self) -> dict:
        return {"interpolation": self.interpolation, "snapshots": [s.to_dict() for s in self.snapshots]}

    @classmethod
    def from_dict(cls, data: Mapping) -> DriftSchedule:
        try:
            snaps = [NoiseSnapshot.from_dict(s) for s in data["snapshots"]]
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed drift JSON: {exc}") from None
        return cls(tuple(snaps), data.get("interpolation", "step"))

    @classmethod
    def static(cls, snapshot: NoiseSnapshot) -> DriftSchedule:
        return cls((snapshot,))


def snapshot_at(schedule: DriftSchedule, t: float) -> NoiseSnapshot:
    """Noise in effect at time ``t``. Times past the last snapshot hold its value."""
    times = schedule.times
    if t < times[0]:
        raise InputError(f"time {t} precedes the first snapshot at {times[0]}")
    i = bisect.bisect_right(times, t) - 1
    lo = schedule.snapshots[i]
    if schedule.interpolation == "step" or i == len(times) - 1 or t == lo.time:
        return replace(lo, time=float(t))
    hi = schedule.snapshots[i + 1]
    w = (t - lo.time) / (hi.time - lo.time)

    def mix(a: Mapping, b: Mapping) -> dict:
        return {k: min(1.0, max(0.0, (1 - w) * a[k] + w * b[k])) for k in a}

    return NoiseSnapshot(mix(lo.p1, hi.p1), mix(lo.p2, hi.p2), mix(lo.pm, hi.pm), float(t))


def load_noise(data: Mapping) -> NoiseSnapshot | DriftSchedule:
    """Decode either a snapshot or a drift schedule from its JSON form."""
    if "snapshots" in data:
        return DriftSchedule.from_dict(data)
    return NoiseSnapshot.from_dict(data)
