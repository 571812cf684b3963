"""Request/response models for the service endpoints."""

from __future__ import annotations

from pydantic import BaseModel, Field

from ..geometry import Rect


class RectModel(BaseModel):
    x_min: float
    y_min: float
    x_max: float
    y_max: float

    @classmethod
    def from_rect(cls, rect: Rect) -> "RectModel":
        return cls(x_min=rect.x_min, y_min=rect.y_min, x_max=rect.x_max, y_max=rect.y_max)

    def to_rect(self) -> Rect:
        return Rect(self.x_min, self.y_min, self.x_max, self.y_max)


class MixtureComponent(BaseModel):
    weight: float = Field(ge=0)
    cx: float
    cy: float
    std: float = Field(gt=0)


class SynthRequest(BaseModel):
    n_points: int = Field(ge=0)
    domain: RectModel
    components: list[MixtureComponent] = []
    uniform_weight: float = Field(default=0.0, ge=0)
    seed: int = 0


class SynthResponse(BaseModel):
    points: list[tuple[float, float]]
    domain: RectModel


class WorkloadModel(BaseModel):
    qr_fracs: list[float] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.8]
    positions_per_size: int = Field(default=100, ge=1)


class TuneRequest(BaseModel):
    points: list[tuple[float, float]]
    domain: RectModel | None = None          # bounding box of the points when omitted
    grids: list[int]
    workload: list[RectModel] | None = None  # explicit regions beat the generated ones
    tune_workload: WorkloadModel = WorkloadModel()
    epsilon: float = Field(default=1.0, gt=0)
    eps1_frac: float = Field(default=0.2, gt=0, lt=1)
    delta: float = Field(default=0.1, gt=0, lt=1)
    sensitivity_mode: str = "response_dependent"
    seed: int = 0
    debug: bool = False


class TuneDiagnosticsModel(BaseModel):
    grids: list[int]
    scores: list[float]
    sensitivities: list[float]
    probabilities: list[float]


class TuneResponse(BaseModel):
    selected_g: int
    epsilon_spent: float
    diagnostics: TuneDiagnosticsModel | None = None


class ReleaseRequest(TuneRequest):
    grid_size: int | None = None  # skip tuning and spend everything on the release


class HistogramModel(BaseModel):
    domain: RectModel
    g: int = Field(ge=1)
    counts: list[float]


class ReleaseResponse(BaseModel):
    selected_g: int
    epsilon_spent: float
    histogram: HistogramModel


class QueryRequest(BaseModel):
    histogram: HistogramModel
    rect: RectModel


class QueryResponse(BaseModel):
    estimate: float


class BenchRequest(BaseModel):
    method: str
    dataset: str = "synth"
    dataset_name: str = "synth"
    points: list[tuple[float, float]] | None = None  # inline data beats dataset_path
    dataset_path: str | None = None
    domain: RectModel | None = None
    synth_points: int = 10000
    synth_mixture: list[MixtureComponent] = []
    synth_uniform: float = 1.0
    grids: list[int] = []
    epsilon: float = 1.0
    eps1_frac: float = 0.2
    delta: float = 0.1
    sensitivity_mode: str = "response_dependent"
    tune_qr_fracs: list[float] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.8]
    tune_positions: int = 100
    eval_qr_fracs: list[float] = [0.1, 0.2, 0.3, 0.4, 0.5, 0.8]
    eval_positions: int = 100
    repeats: int = 100
    seed: int = 0
    heuristic_c: float = 10.0


class BenchResponse(BaseModel):
    csv: str
    manifest: dict


class OracleRequest(BaseModel):
    seed: int = 0
    conservation_cases: int = 2000
    instances: int = 3
    trials: int = 10000


class OracleResponse(BaseModel):
    reports: list[dict]
    all_pass: bool
