from enum import Enum
from typing import List, Dict, Optional, Literal
from pydantic import BaseModel, Field, ConfigDict, computed_field, field_validator, model_validator

from . import config

U64_MAX = 2**64 - 1


class Algorithm(str, Enum):
    clonalg = "clonalg"
    ga = "ga"


class Modality(str, Enum):
    """Function classification, used for reporting only."""
    unimodal = "unimodal"
    multimodal = "multimodal"
    highly_multimodal = "highly-multimodal"

    @property
    def label(self) -> str:
        return {
            "unimodal": "Unimodal",
            "multimodal": "Multimodal",
            "highly-multimodal": "Highly Multimodal",
        }[self.value]


class Bounds(BaseModel):
    """Closed interval shared by every decoded variable."""
    model_config = ConfigDict(frozen=True)

    lo: float = Field(..., description="Lower bound of every variable")
    hi: float = Field(..., description="Upper bound of every variable")

    @model_validator(mode='after')
    def _check_order(self) -> 'Bounds':
        if not self.lo < self.hi:
            raise ValueError(f"Bounds require lo < hi, got lo={self.lo}, hi={self.hi}")
        return self


# ========== Engine Models ==========


class AlgorithmConfig(BaseModel):
    """Parameters of a single engine run."""
    algorithm: Algorithm
    clone_set_index: int = Field(..., ge=1, le=3, description="Clone set 1-3")
    mutation_group_index: Optional[int] = Field(default=None, ge=1, le=3, description="Mutation group 1-3 (clonalg only)")
    ga_mutation_rate: Optional[float] = Field(default=None, gt=0.0, lt=1.0, description="Flat per-bit mutation rate (ga only)")
    epsilon: float = Field(..., gt=0.0, description="Run stops once best affinity <= epsilon")
    max_generations: int = Field(default_factory=lambda: config.MAX_GENERATIONS, ge=0)
    seed: int = Field(..., ge=0, le=U64_MAX)

    @model_validator(mode='after')
    def _check_mutation_parameter(self) -> 'AlgorithmConfig':
        if self.algorithm == Algorithm.clonalg:
            if self.mutation_group_index is None or self.ga_mutation_rate is not None:
                raise ValueError("clonalg requires mutation_group_index and no ga_mutation_rate")
        else:
            if self.ga_mutation_rate is None or self.mutation_group_index is not None:
                raise ValueError("ga requires ga_mutation_rate and no mutation_group_index")
        return self


class ConvergenceTrace(BaseModel):
    """Per-generation best and mean affinity, generation 0 being the initial population."""
    generation: List[int] = Field(default_factory=list)
    best_affinity: List[float] = Field(default_factory=list)
    mean_affinity: List[float] = Field(default_factory=list)

    def record(self, generation: int, best: float, mean: float) -> None:
        self.generation.append(generation)
        self.best_affinity.append(best)
        self.mean_affinity.append(mean)

    def __len__(self) -> int:
        return len(self.generation)

    def to_csv(self) -> str:
        lines = ["generation,best_affinity,mean_affinity"]
        for g, b, m in zip(self.generation, self.best_affinity, self.mean_affinity):
            lines.append(f"{g},{b!r},{m!r}")
        return "\n".join(lines) + "\n"


class RunResult(BaseModel):
    iterations: int = Field(..., ge=0, description="Generations executed")
    best_affinity: float
    best_vector: List[float]
    best_genome: str = Field(..., description="200-character bit string of the all-time best individual")
    converged: bool
    trace: Optional[ConvergenceTrace] = Field(default=None, description="Absent when the run was executed without trace recording")


# ========== Experiment Models ==========


class CellParameters(BaseModel):
    """One point of the parameter grid."""
    algorithm: Algorithm
    clone_set_index: int = Field(..., ge=1, le=3)
    mutation_group_index: Optional[int] = Field(default=None, ge=1, le=3)
    ga_mutation_rate: Optional[float] = Field(default=None, gt=0.0, lt=1.0)
    epsilon: float = Field(..., gt=0.0)
    max_generations: int = Field(..., ge=0)

    @property
    def mutation_label(self) -> str:
        if self.algorithm == Algorithm.clonalg:
            return str(self.mutation_group_index)
        return repr(self.ga_mutation_rate)

    def to_algorithm_config(self, seed: int) -> AlgorithmConfig:
        return AlgorithmConfig(seed=seed, **self.model_dump())


class RunRecord(BaseModel):
    """Per-run entry of a cell.

    The trace is excluded from model_dump and JSON; it only lives in memory
    so ResultsStore.write_traces can emit it as CSV.
    """
    run_index: int = Field(..., ge=0)
    seed: int = Field(..., ge=0, le=U64_MAX)
    iterations: int = Field(..., ge=0)
    best_affinity: float
    best_vector: List[float]
    best_genome: str
    converged: bool
    trace: Optional[ConvergenceTrace] = Field(default=None, exclude=True)

    @classmethod
    def from_run(cls, run_index: int, seed: int, result: RunResult, keep_trace: bool = False) -> 'RunRecord':
        return cls(
            run_index=run_index,
            seed=seed,
            iterations=result.iterations,
            best_affinity=result.best_affinity,
            best_vector=result.best_vector,
            best_genome=result.best_genome,
            converged=result.converged,
            trace=result.trace if keep_trace else None,
        )


class AggregateStats(BaseModel):
    mean_iterations: float
    mean_proximity: float
    convergence_rate: float = Field(..., ge=0.0, le=1.0)
    min_iterations: int
    max_iterations: int

    @classmethod
    def from_runs(cls, runs: List[RunRecord]) -> 'AggregateStats':
        if not runs:
            raise ValueError("Cannot aggregate an empty list of runs")
        iterations = [r.iterations for r in runs]
        return cls(
            mean_iterations=sum(iterations) / len(runs),
            mean_proximity=sum(r.best_affinity for r in runs) / len(runs),
            convergence_rate=sum(1 for r in runs if r.converged) / len(runs),
            min_iterations=min(iterations),
            max_iterations=max(iterations),
        )


class CellResult(BaseModel):
    cell_index: int = Field(..., ge=0)
    parameters: CellParameters
    runs: List[RunRecord]
    stats: AggregateStats


class ExperimentConfig(BaseModel):
    """A grid of parameter cells over one benchmark function.

    The grid is clone_sets x mutation_groups for clonalg and
    clone_sets x ga_mutation_rates for ga; "both" concatenates the two,
    clonalg cells first.
    """
    function: str
    algorithm: Literal["clonalg", "ga", "both"]
    clone_sets: List[int] = Field(default_factory=lambda: [1, 2, 3])
    mutation_groups: List[int] = Field(default_factory=lambda: [1, 2, 3])
    ga_mutation_rates: List[float] = Field(default_factory=lambda: [0.005, 0.001, 0.01])
    runs_per_cell: int = Field(default_factory=lambda: config.RUNS_PER_CELL, ge=1)
    epsilon: Optional[float] = Field(default=None, gt=0.0, description="Overrides the function's default epsilon")
    max_generations: int = Field(default_factory=lambda: config.MAX_GENERATIONS, ge=0)
    seed: int = Field(..., ge=0, le=U64_MAX)
    keep_traces: bool = Field(default=False, description="Keep per-run convergence traces in memory")
    out_path: Optional[str] = None
    trace_dir: Optional[str] = None

    @field_validator('clone_sets', 'mutation_groups')
    @classmethod
    def _check_indices(cls, v: List[int]) -> List[int]:
        if any(i not in (1, 2, 3) for i in v):
            raise ValueError(f"Set/group indices must be in 1..3, got {v}")
        return v

    @field_validator('ga_mutation_rates')
    @classmethod
    def _check_rates(cls, v: List[float]) -> List[float]:
        if any(not 0.0 < r < 1.0 for r in v):
            raise ValueError(f"GA mutation rates must lie in (0, 1), got {v}")
        return v

    @model_validator(mode='after')
    def _check_grid(self) -> 'ExperimentConfig':
        if not self.clone_sets:
            raise ValueError("Parameter grid is empty: no clone sets")
        if self.algorithm in ("clonalg", "both") and not self.mutation_groups:
            raise ValueError("Parameter grid is empty: no mutation groups")
        if self.algorithm in ("ga", "both") and not self.ga_mutation_rates:
            raise ValueError("Parameter grid is empty: no GA mutation rates")
        return self

    def resolved_epsilon(self) -> float:
        if self.epsilon is not None:
            return self.epsilon
        return config.DEFAULT_EPSILONS[self.function]

    def cells(self) -> List[CellParameters]:
        epsilon = self.resolved_epsilon()
        cells: List[CellParameters] = []
        if self.algorithm in ("clonalg", "both"):
            for s in self.clone_sets:
                for g in self.mutation_groups:
                    cells.append(CellParameters(
                        algorithm=Algorithm.clonalg, clone_set_index=s, mutation_group_index=g,
                        epsilon=epsilon, max_generations=self.max_generations,
                    ))
        if self.algorithm in ("ga", "both"):
            for s in self.clone_sets:
                for r in self.ga_mutation_rates:
                    cells.append(CellParameters(
                        algorithm=Algorithm.ga, clone_set_index=s, ga_mutation_rate=r,
                        epsilon=epsilon, max_generations=self.max_generations,
                    ))
        return cells


class ExperimentResult(BaseModel):
    config: ExperimentConfig
    cells: List[CellResult] = Field(default_factory=list)
    best_cell: Optional[int] = Field(default=None, description="Index of the fastest fully-converged cell")
    best_cell_by_algorithm: Dict[str, int] = Field(default_factory=dict)

    @property
    def run_count(self) -> int:
        return sum(len(c.runs) for c in self.cells)


# ========== Reporting Models ==========


class ComparisonVerdict(BaseModel):
    """Which algorithm reached the function's epsilon in fewer mean generations."""
    function: str
    clonalg_best_cell: Optional[int] = None
    ga_best_cell: Optional[int] = None
    clonalg_mean_iterations: Optional[float] = None
    ga_mean_iterations: Optional[float] = None
    faster: Optional[Algorithm] = None


class Table2Row(BaseModel):
    function: str
    type: str
    algorithm: Algorithm
    clone_set: int
    mutation: str
    mean_proximity: float
    mean_iterations: float
    convergence_rate: float
    reported_proximity: float
    reported_iterations: int

    @computed_field
    @property
    def iterations_ratio(self) -> float:
        return self.mean_iterations / self.reported_iterations
