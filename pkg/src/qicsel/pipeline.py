"""End-to-end layout selection and execution-count accounting."""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .circuit import UserCircuit, make_qaoa_path
from .coupling import CouplingMap
from .errors import InputError, NoEmbeddingError
from .layouts import Layout, find_isomorphic_layouts, interaction_graph
from .noise import DriftSchedule, NoiseSnapshot, snapshot_at
from .partition import PartitionPlan, partition_basic, partition_disjoint, partition_with_distortion
from .qic import Qic, build_qic
from .scoring import LayoutScore, mapomatic_score, mapomatic_score_circuit, qic_score_counts, qic_score_zz
from .sim import marginalize, run_qic

DEFAULT_JIT_EXECUTIONS = 132
MODES = ("basic", "disjoint", "distortion")


@dataclass
class SelectionReport:
    ranked: list[LayoutScore]
    chosen: Layout
    mapomatic_ranked: list[Layout]
    mapomatic_choice: Layout
    executions_used: int
    executions_basic: int
    executions_jit: int
    plan: PartitionPlan
    qic: Qic
    current_time: float
    stale_time: float

    @property
    def reduction_vs_jit(self) -> float:
        return 100.0 * (self.executions_jit - self.executions_used) / self.executions_jit

    def to_dict(self) -> dict:
        return {
            "chosen": list(self.chosen),
            "mapomatic_choice": list(self.mapomatic_choice),
            "executions_used": self.executions_used,
            "executions_basic": self.executions_basic,
            "executions_jit": self.executions_jit,
            "reduction_vs_jit": self.reduction_vs_jit,
            "current_time": self.current_time,
            "stale_time": self.stale_time,
            "ranked": [s.to_dict() for s in self.ranked],
            "mapomatic_ranked": [list(l) for l in self.mapomatic_ranked],
            "qic": self.qic.to_dict(),
            "partition": self.plan.to_dict(),
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["rank", "layout", "qic_score_counts", "qic_score_zz", "mapomatic_score", "set_index"])
        for rank, s in enumerate(self.ranked, 1):
            w.writerow([rank, " ".join(map(str, s.layout)), s.qic_score_counts, s.qic_score_zz,
                        s.mapomatic_score, s.set_index])
        return buf.getvalue()


def _sub_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([int(seed), int(index)]).generate_state(1)[0])


def select_layout(
    circuit: UserCircuit,
    cmap: CouplingMap,
    noise: NoiseSnapshot | DriftSchedule,
    mode: str = "distortion",
    threshold: int = 1,
    shots: int = 4096,
    seed: int = 0,
    permutations: int = 20,
    current_time: float | None = None,
    stale_time: float | None = None,
    jit_baseline: int = DEFAULT_JIT_EXECUTIONS,
    mapomatic_on_circuit: bool = False,
    workers: int | None = None,
) -> SelectionReport:
    """Pick the layout whose QIC scores best under the current noise.

    QICs run against the noise at ``current_time`` (default: the schedule's last
    snapshot). Mapomatic scores for comparison use ``stale_time`` (default: the
    first snapshot). Ranking: all-zeros frequency, then ZZ score, then layout.
    """
    if mode not in MODES:
        raise InputError(f"mode must be one of {MODES}, got {mode!r}")
    schedule = noise if isinstance(noise, DriftSchedule) else DriftSchedule.static(noise)
    now = schedule.last_time if current_time is None else current_time
    then = schedule.first_time if stale_time is None else stale_time
    current, stale = snapshot_at(schedule, now), snapshot_at(schedule, then)

    qic = build_qic(circuit)
    layouts = find_isomorphic_layouts(interaction_graph(qic), cmap)
    if not layouts:
        raise NoEmbeddingError(f"circuit interaction graph does not embed into {cmap.name or 'the coupling map'}")
    physical = {l: qic.on_layout(l) for l in layouts}

    if mode == "basic":
        plan = partition_basic(layouts, physical)
    elif mode == "disjoint":
        plan = partition_disjoint(layouts, seed, permutations, qics=physical, workers=workers)
    else:
        plan = partition_with_distortion(layouts, physical, threshold, seed, permutations, workers=workers)

    scores: list[LayoutScore] = []
    for index, (members, union) in enumerate(zip(plan.sets, plan.union_qics)):
        counts = run_qic(union, current, shots, _sub_seed(seed, index))
        for layout in members:
            marginal = marginalize(counts, layout)
            if mapomatic_on_circuit:
                mm = mapomatic_score_circuit(layout, circuit, stale)
            else:
                mm = mapomatic_score(layout, qic, stale)
            zz = qic_score_zz(marginal) if len(layout) >= 2 else float("nan")
            scores.append(LayoutScore(layout, qic_score_counts(marginal), zz, mm, shots, index))

    def zz_key(s: LayoutScore) -> float:
        return -s.qic_score_zz if s.qic_score_zz == s.qic_score_zz else 0.0

    ranked = sorted(scores, key=lambda s: (-s.qic_score_counts, zz_key(s), s.layout))
    mapomatic_ranked = [s.layout for s in sorted(scores, key=lambda s: (s.mapomatic_score, s.layout))]
    return SelectionReport(
        ranked=ranked,
        chosen=ranked[0].layout,
        mapomatic_ranked=mapomatic_ranked,
        mapomatic_choice=mapomatic_ranked[0],
        executions_used=plan.num_sets,
        executions_basic=len(layouts),
        executions_jit=jit_baseline,
        plan=plan,
        qic=qic,
        current_time=current.time,
        stale_time=stale.time,
    )


@dataclass(frozen=True)
class ResourceRow:
    mode: str
    label: str
    executions: int
    jit: int

    @property
    def reduction(self) -> float:
        return 100.0 * (self.jit - self.executions) / self.jit


@dataclass
class ResourceReport:
    rows: list[ResourceRow]
    jit_baseline: int
    mean_reduction: dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "jit_baseline": self.jit_baseline,
            "rows": [
                {"mode": r.mode, "label": r.label, "executions": r.executions, "jit": r.jit,
                 "reduction_pct": r.reduction}
                for r in self.rows
            ],
            "mean_reduction_pct": self.mean_reduction,
        }

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf)
        w.writerow(["mode", "label", "executions", "jit", "reduction_pct"])
        for r in self.rows:
            w.writerow([r.mode, r.label, r.executions, r.jit, f"{r.reduction:.3f}"])
        return buf.getvalue()


def resource_report(
    plan_counts: Mapping[str, int] | Mapping[str, Mapping[str, int]],
    jit_baseline: int = DEFAULT_JIT_EXECUTIONS,
) -> ResourceReport:
    """Compare execution counts against the JIT baseline.

    ``plan_counts`` maps a column label (e.g. circuit width) to executions, or a
    mode name to such a mapping. The mean relative reduction is reported per mode.
    """
    if jit_baseline < 1:
        raise InputError("jit_baseline must be >= 1")
    if plan_counts and all(isinstance(v, Mapping) for v in plan_counts.values()):
        nested = {str(m): dict(v) for m, v in plan_counts.items()}
    else:
        nested = {"executions": dict(plan_counts)}
    rows = [ResourceRow(mode, str(label), int(n), jit_baseline) for mode, cols in nested.items() for label, n in cols.items()]
    mean = {}
    for mode in nested:
        reductions = [r.reduction for r in rows if r.mode == mode]
        if reductions:
            mean[mode] = float(np.mean(reductions))
    return ResourceReport(rows, jit_baseline, mean)


def execution_counts(
    widths: Sequence[int],
    cmap: CouplingMap,
    threshold: int = 1,
    seed: int = 0,
    permutations: int = 20,
) -> dict[str, dict[str, int]]:
    """Executions needed by the basic, disjoint-union and distortion-threshold
    strategies for QAOA path circuits of the given widths."""
    out: dict[str, dict[str, int]] = {"basic": {}, "disjoint": {}, f"distortion-T{threshold}": {}}
    for n in widths:
        qic = build_qic(make_qaoa_path(n, 1, [1.0], [1.0]))
        layouts = find_isomorphic_layouts(interaction_graph(qic), cmap)
        if not layouts:
            raise NoEmbeddingError(f"no {n}-qubit path layout in {cmap.name or 'the coupling map'}")
        physical = [qic.on_layout(l) for l in layouts]
        key = str(n)
        out["basic"][key] = len(layouts)
        out["disjoint"][key] = partition_disjoint(layouts, seed, permutations).num_sets
        out[f"distortion-T{threshold}"][key] = partition_with_distortion(
            layouts, physical, threshold, seed, permutations
        ).num_sets
    return out
