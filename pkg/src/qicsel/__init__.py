"""Noise-aware layout selection with Quality Indicator Circuits."""

__version__ = "0.1.0"

from .circuit import Gate, GateKind, UserCircuit, make_mirror, make_qaoa_path, metrics, parse_circuit
from .coupling import CouplingMap, heavy_hex_27, heavy_hex_127
from .layouts import find_isomorphic_layouts, interaction_graph, is_layout_disjoint_with_set
from .noise import DriftSchedule, NoiseSnapshot, snapshot_at
from .partition import (
    PartitionPlan,
    distortion,
    exact_min_partition,
    is_distortion_disjoint,
    partition_disjoint,
    partition_with_distortion,
    union_with_distortion,
)
from .pipeline import resource_report, select_layout
from .qic import Qic, build_qic, qic_is_identity_witness, schedule_layers
from .scoring import bootstrap_scores, mapomatic_score, qic_score_counts, qic_score_zz
from .sim import ShotCounts, marginalize, run_circuit, run_qic

__all__ = [
    "CouplingMap",
    "DriftSchedule",
    "Gate",
    "GateKind",
    "NoiseSnapshot",
    "PartitionPlan",
    "Qic",
    "ShotCounts",
    "UserCircuit",
    "bootstrap_scores",
    "build_qic",
    "distortion",
    "exact_min_partition",
    "find_isomorphic_layouts",
    "heavy_hex_127",
    "heavy_hex_27",
    "interaction_graph",
    "is_distortion_disjoint",
    "is_layout_disjoint_with_set",
    "make_mirror",
    "make_qaoa_path",
    "mapomatic_score",
    "marginalize",
    "metrics",
    "parse_circuit",
    "partition_disjoint",
    "partition_with_distortion",
    "qic_is_identity_witness",
    "qic_score_counts",
    "qic_score_zz",
    "resource_report",
    "run_circuit",
    "run_qic",
    "schedule_layers",
    "select_layout",
    "snapshot_at",
    "union_with_distortion",
]
