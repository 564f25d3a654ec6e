"""Request/response schemas shared by the HTTP service and the CLI."""
from __future__ import annotations

from typing import Any, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field


class GateModel(BaseModel):
    kind: str
    qubits: list[int] = []
    param: Optional[float] = None


class CircuitModel(BaseModel):
    num_qubits: int = Field(ge=0)
    gates: list[GateModel] = []


class CircuitInput(BaseModel):
    """A circuit given either as circuit JSON or as OpenQASM 2 source."""

    circuit: Optional[CircuitModel] = None
    qasm: Optional[str] = None


class CouplingModel(BaseModel):
    num_qubits: int = Field(ge=0)
    edges: list[list[int]]


class NoiseModel(BaseModel):
    p1: dict[str, float]
    p2: dict[str, float]
    pm: dict[str, float]
    time: float = 0.0


class DriftModel(BaseModel):
    interpolation: Literal["step", "linear"] = "step"
    snapshots: list[NoiseModel]


# A fixture name ("heavy-hex-27", "line-8", ...) or an explicit map.
CouplingSpec = Union[str, CouplingModel]
# Explicit snapshot/schedule, or a generator string: "uniform:P1,P2,PM" or "random:SEED".
NoiseSpec = Union[str, NoiseModel, DriftModel]


class QicModel(BaseModel):
    num_qubits: int
    qubits: Optional[list[int]] = None
    pairs: list[list[int]]
    layers: Optional[list[list[list[int]]]] = None


class CountsModel(BaseModel):
    width: int
    shots: int
    counts: dict[str, int]
    qubits: Optional[list[int]] = None


class BuildQicRequest(CircuitInput):
    pass


class BuildQicResponse(QicModel):
    two_qubit_depth: int
    degenerate: bool = False
    identity_witness: bool


class LayoutsRequest(CircuitInput):
    coupling: CouplingSpec = "heavy-hex-27"


class LayoutsResponse(BaseModel):
    num_layouts: int
    layouts: list[list[int]]


class PartitionRequest(CircuitInput):
    coupling: CouplingSpec = "heavy-hex-27"
    mode: Literal["basic", "disjoint", "distortion"] = "distortion"
    threshold: int = Field(1, ge=0)
    seed: int = 0
    permutations: int = Field(20, ge=1)


class SimulateRequest(CircuitInput):
    """Run a QIC: either ``qic`` (physical labels) or the circuit's QIC placed on
    ``layout`` (default: the first isomorphic layout)."""

    qic: Optional[QicModel] = None
    coupling: CouplingSpec = "heavy-hex-27"
    layout: Optional[list[int]] = None
    noise: NoiseSpec
    time: Optional[float] = None
    shots: int = Field(4096, ge=1)
    seed: int = 0


class ScoreRequest(CircuitInput):
    """QIC scores of ``counts``, or Mapomatic scores of every layout when
    ``counts`` is absent."""

    counts: Optional[CountsModel] = None
    ordering: Optional[list[int]] = None
    resamples: int = Field(0, ge=0)
    seed: int = 0
    coupling: CouplingSpec = "heavy-hex-27"
    noise: Optional[NoiseSpec] = None
    time: Optional[float] = None


class SelectRequest(CircuitInput):
    coupling: CouplingSpec = "heavy-hex-27"
    noise: NoiseSpec
    mode: Literal["basic", "disjoint", "distortion"] = "distortion"
    threshold: int = Field(1, ge=0)
    shots: int = Field(4096, ge=1)
    seed: int = 0
    permutations: int = Field(20, ge=1)
    jit_baseline: int = Field(132, ge=1)
    current_time: Optional[float] = None
    stale_time: Optional[float] = None
    mapomatic_on_circuit: bool = False


class ReportRequest(BaseModel):
    """Either explicit ``plan_counts`` or QAOA path ``widths`` to partition on ``coupling``."""

    plan_counts: Optional[dict[str, Union[int, dict[str, int]]]] = None
    widths: Optional[list[int]] = None
    coupling: CouplingSpec = "heavy-hex-27"
    threshold: int = Field(1, ge=0)
    seed: int = 0
    permutations: int = Field(20, ge=1)
    jit_baseline: int = Field(132, ge=1)


class ErrorResponse(BaseModel):
    model_config = ConfigDict(extra="allow")

    error: str
    exit_code: int
    detail: str


GenericResponse = dict[str, Any]
