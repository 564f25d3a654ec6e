"""Request handlers. The HTTP app and the in-process CLI both call these."""
from __future__ import annotations

import warnings
from typing import Any

import numpy as np

from .circuit import UserCircuit, parse_circuit
from .coupling import CouplingMap, fixture
from .errors import InputError, NoEmbeddingError
from .layouts import find_isomorphic_layouts, interaction_graph
from .models import (
    BuildQicRequest,
    CircuitInput,
    CouplingSpec,
    LayoutsRequest,
    NoiseSpec,
    PartitionRequest,
    ReportRequest,
    ScoreRequest,
    SelectRequest,
    SimulateRequest,
)
from .noise import DriftSchedule, NoiseSnapshot, load_noise, snapshot_at
from .partition import partition_basic, partition_disjoint, partition_with_distortion
from .pipeline import execution_counts, resource_report, select_layout
from .qic import DegenerateQicWarning, Qic, build_qic, qic_is_identity_witness
from .scoring import bootstrap_scores, mapomatic_score, qic_score_counts, qic_score_zz
from .sim import ShotCounts, run_qic


def resolve_circuit(req: CircuitInput) -> UserCircuit:
    if req.circuit is not None and req.qasm is not None:
        raise InputError("give either 'circuit' or 'qasm', not both")
    if req.qasm is not None:
        return parse_circuit(req.qasm, "qasm2")
    if req.circuit is not None:
        return UserCircuit.from_dict(req.circuit.model_dump())
    raise InputError("a circuit is required")


def resolve_coupling(spec: CouplingSpec) -> CouplingMap:
    if isinstance(spec, str):
        return fixture(spec)
    return CouplingMap.from_dict(spec.model_dump())


def resolve_noise(spec: NoiseSpec, cmap: CouplingMap) -> NoiseSnapshot | DriftSchedule:
    if isinstance(spec, str):
        kind, _, arg = spec.partition(":")
        if kind == "uniform":
            try:
                p1, p2, pm = (float(v) for v in arg.split(","))
            except ValueError:
                raise InputError("uniform noise needs 'uniform:P1,P2,PM'") from None
            return NoiseSnapshot.uniform(cmap.num_qubits, cmap.edges, p1, p2, pm)
        if kind == "random":
            seed = int(arg) if arg else 0
            return NoiseSnapshot.random(cmap.num_qubits, cmap.edges, np.random.default_rng(seed))
        raise InputError(f"unknown noise generator {spec!r}")
    noise = load_noise(spec.model_dump())
    snaps = noise.snapshots if isinstance(noise, DriftSchedule) else (noise,)
    for s in snaps:
        s.check_covers(cmap.num_qubits, cmap.edges)
    return noise


def _snapshot(noise: NoiseSnapshot | DriftSchedule, t: float | None) -> NoiseSnapshot:
    if isinstance(noise, NoiseSnapshot):
        return noise
    return snapshot_at(noise, noise.last_time if t is None else t)


def _layouts(qic: Qic, cmap: CouplingMap) -> list[tuple[int, ...]]:
    layouts = find_isomorphic_layouts(interaction_graph(qic), cmap)
    if not layouts:
        raise NoEmbeddingError(f"circuit interaction graph does not embed into {cmap.name or 'the coupling map'}")
    return layouts


def _build_qic_quiet(circuit: UserCircuit) -> tuple[Qic, bool]:
    with warnings.catch_warnings(record=True) as caught:
        warnings.simplefilter("always", DegenerateQicWarning)
        qic = build_qic(circuit)
    return qic, any(issubclass(w.category, DegenerateQicWarning) for w in caught)


def handle_build_qic(req: BuildQicRequest) -> dict[str, Any]:
    qic, degenerate = _build_qic_quiet(resolve_circuit(req))
    return {
        **qic.to_dict(),
        "two_qubit_depth": qic.two_qubit_depth,
        "degenerate": degenerate,
        "identity_witness": qic_is_identity_witness(qic),
    }


def handle_layouts(req: LayoutsRequest) -> dict[str, Any]:
    qic, _ = _build_qic_quiet(resolve_circuit(req))
    layouts = _layouts(qic, resolve_coupling(req.coupling))
    return {"num_layouts": len(layouts), "layouts": [list(l) for l in layouts]}


def handle_partition(req: PartitionRequest) -> dict[str, Any]:
    qic, _ = _build_qic_quiet(resolve_circuit(req))
    layouts = _layouts(qic, resolve_coupling(req.coupling))
    physical = {l: qic.on_layout(l) for l in layouts}
    if req.mode == "basic":
        plan = partition_basic(layouts, physical)
    elif req.mode == "disjoint":
        plan = partition_disjoint(layouts, req.seed, req.permutations, qics=physical)
    else:
        plan = partition_with_distortion(layouts, physical, req.threshold, req.seed, req.permutations)
    return plan.to_dict()


def handle_simulate(req: SimulateRequest) -> dict[str, Any]:
    cmap = resolve_coupling(req.coupling)
    noise = _snapshot(resolve_noise(req.noise, cmap), req.time)
    if req.qic is not None:
        qic = Qic.from_dict(req.qic.model_dump(exclude_none=True))
    else:
        virtual, _ = _build_qic_quiet(resolve_circuit(req))
        layout = tuple(req.layout) if req.layout is not None else _layouts(virtual, cmap)[0]
        qic = virtual.on_layout(layout)
    return run_qic(qic, noise, req.shots, req.seed).to_dict()


def handle_score(req: ScoreRequest) -> dict[str, Any]:
    if req.counts is not None:
        counts = ShotCounts.from_dict(req.counts.model_dump(exclude_none=True))
        out: dict[str, Any] = {"qic_score_counts": qic_score_counts(counts)}
        if counts.width >= 2:
            out["qic_score_zz"] = qic_score_zz(counts, req.ordering)
        if req.resamples:
            out["bootstrap"] = bootstrap_scores(counts, req.resamples, req.seed, req.ordering).to_dict()
        return out
    if req.noise is None:
        raise InputError("score needs either counts, or a circuit with coupling and noise")
    cmap = resolve_coupling(req.coupling)
    noise = resolve_noise(req.noise, cmap)
    if isinstance(noise, DriftSchedule):
        noise = snapshot_at(noise, noise.first_time if req.time is None else req.time)
    qic, _ = _build_qic_quiet(resolve_circuit(req))
    scored = sorted((mapomatic_score(l, qic, noise), l) for l in _layouts(qic, cmap))
    return {"mapomatic": [{"layout": list(l), "score": s} for s, l in scored]}


def handle_select(req: SelectRequest):
    cmap = resolve_coupling(req.coupling)
    report = select_layout(
        resolve_circuit(req),
        cmap,
        resolve_noise(req.noise, cmap),
        mode=req.mode,
        threshold=req.threshold,
        shots=req.shots,
        seed=req.seed,
        permutations=req.permutations,
        current_time=req.current_time,
        stale_time=req.stale_time,
        jit_baseline=req.jit_baseline,
        mapomatic_on_circuit=req.mapomatic_on_circuit,
    )
    return report


def handle_report(req: ReportRequest):
    if req.plan_counts is not None:
        counts = req.plan_counts
    elif req.widths:
        counts = execution_counts(req.widths, resolve_coupling(req.coupling), req.threshold, req.seed, req.permutations)
    else:
        raise InputError("report needs plan_counts or widths")
    return resource_report(counts, req.jit_baseline)
