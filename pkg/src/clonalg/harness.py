"""
Experiment harness: averaged multi-run experiments, parameter sweeps and the
best-parameter comparison table.

==============================================================================
FEATURES IMPLEMENTED IN THIS MODULE:
==============================================================================

1. SEEDED, ORDER-STABLE EXPERIMENTS (Feature: reproducibility)
   - Every run's seed is derived from (experiment seed, cell, run) through
     numpy's SeedSequence, so runs are independent and can execute anywhere
   - Results are assembled in (cell, run) order regardless of completion order

2. CONCURRENT RUN EXECUTION (Feature: worker-pool)
   - asyncio.Semaphore bounds in-flight runs (MAX_CONCURRENT_RUNS)
   - Runs go to a ProcessPoolExecutor when more than one worker is configured,
     and execute inline otherwise
   - asyncio.gather joins them deterministically

3. BEST CELL SELECTION (Feature: sweep)
   - Only fully-converged cells are eligible
   - Fewest mean iterations wins; ties go to lower mean proximity, then
     lower cell index

4. COMPARISON TABLE (Feature: table2)
   - Runs each function x algorithm at its published best parameters
   - Rows carry the published proximity and iteration count for reference

==============================================================================
"""

import asyncio
from concurrent.futures import ProcessPoolExecutor
from typing import Dict, List, Optional, Tuple, Union

import numpy as np

from .benchmarks import BENCHMARKS, lookup
from .engines import run_engine
from .models import (
    Algorithm,
    AlgorithmConfig,
    AggregateStats,
    CellParameters,
    CellResult,
    ComparisonVerdict,
    ExperimentConfig,
    ExperimentResult,
    RunRecord,
    RunResult,
    Table2Row,
)
from .operators import GA_MUTATION_RATES
from . import config

import logging
logger = logging.getLogger(__name__)


# ==============================================================================
# Published best parameters and results, in table row order.
# Each entry: function -> {algorithm: (clone set, mutation group | GA rate)}
# ==============================================================================
TABLE2_PARAMETERS: Dict[str, Dict[Algorithm, Tuple[int, Union[int, float]]]] = {
    "sphere": {Algorithm.clonalg: (2, 1), Algorithm.ga: (2, 0.005)},
    "rastrigin": {Algorithm.clonalg: (3, 3), Algorithm.ga: (1, 0.001)},
    "ackley": {Algorithm.clonalg: (2, 1), Algorithm.ga: (1, 0.001)},
    "modified-sinusoidal": {Algorithm.clonalg: (3, 2), Algorithm.ga: (1, 0.001)},
    "sum-of-powers": {Algorithm.clonalg: (3, 1), Algorithm.ga: (1, 0.005)},
    "schwefel-2-22": {Algorithm.clonalg: (1, 1), Algorithm.ga: (1, 0.001)},
}

# (proximity, mean iterations over ten runs)
TABLE2_REFERENCE: Dict[str, Dict[Algorithm, Tuple[float, int]]] = {
    "sphere": {Algorithm.clonalg: (6.95e-7, 399), Algorithm.ga: (4.84e-7, 3589)},
    "rastrigin": {Algorithm.clonalg: (8.51e-3, 135226), Algorithm.ga: (4.73e-3, 4945)},
    "ackley": {Algorithm.clonalg: (8.59e-4, 417), Algorithm.ga: (2.37e-4, 2310)},
    "modified-sinusoidal": {Algorithm.clonalg: (9.71e-4, 14488), Algorithm.ga: (8.13e-4, 10474)},
    "sum-of-powers": {Algorithm.clonalg: (6.21e-6, 53), Algorithm.ga: (4.59e-6, 375)},
    "schwefel-2-22": {Algorithm.clonalg: (8.93e-4, 206), Algorithm.ga: (6.68e-4, 1422)},
}


def derive_seed(seed: int, cell_index: int, run_index: int) -> int:
    """64-bit run seed: first word of SeedSequence(seed, spawn_key=(cell, run))."""
    ss = np.random.SeedSequence(entropy=seed, spawn_key=(cell_index, run_index))
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def execute_run(cfg: AlgorithmConfig, function: str, keep_trace: bool = True) -> RunResult:
    """Worker entry point; takes the function by name so it pickles cleanly."""
    return run_engine(cfg, lookup(function), keep_trace)


def select_best_cell(cells: List[CellResult]) -> Optional[int]:
    eligible = [c for c in cells if c.stats.convergence_rate == 1.0]
    if not eligible:
        return None
    best = min(eligible, key=lambda c: (c.stats.mean_iterations, c.stats.mean_proximity, c.cell_index))
    return best.cell_index


def table2_experiment(function: str, algorithm: Algorithm, seed: int, **overrides) -> ExperimentConfig:
    clone_set, mutation = TABLE2_PARAMETERS[function][algorithm]
    if algorithm == Algorithm.clonalg:
        grid = dict(mutation_groups=[mutation])
    else:
        grid = dict(ga_mutation_rates=[mutation])
    return ExperimentConfig(
        function=function, algorithm=algorithm.value, clone_sets=[clone_set], seed=seed, **grid, **overrides
    )


class ExperimentService:
    def __init__(self, max_concurrent_runs: Optional[int] = None):
        if max_concurrent_runs is None:
            max_concurrent_runs = config.MAX_CONCURRENT_RUNS
        if max_concurrent_runs < 1:
            raise ValueError(f"max_concurrent_runs must be >= 1, got {max_concurrent_runs}")
        self.max_concurrent_runs = max_concurrent_runs
        self._executor: Optional[ProcessPoolExecutor] = None
        logger.info(f"ExperimentService initialized (max concurrent runs: {max_concurrent_runs})")

    def _get_executor(self) -> Optional[ProcessPoolExecutor]:
        if self.max_concurrent_runs == 1:
            return None
        if self._executor is None:
            self._executor = ProcessPoolExecutor(max_workers=self.max_concurrent_runs)
        return self._executor

    def close(self) -> None:
        if self._executor is not None:
            self._executor.shutdown()
            self._executor = None

    async def _run_with_semaphore(
        self,
        semaphore: asyncio.Semaphore,
        cfg: ExperimentConfig,
        cell_index: int,
        cell: CellParameters,
        run_index: int,
    ) -> RunRecord:
        async with semaphore:
            seed = derive_seed(cfg.seed, cell_index, run_index)
            run_cfg = cell.to_algorithm_config(seed)
            executor = self._get_executor()
            if executor is None:
                result = execute_run(run_cfg, cfg.function, cfg.keep_traces)
            else:
                loop = asyncio.get_running_loop()
                result = await loop.run_in_executor(executor, execute_run, run_cfg, cfg.function, cfg.keep_traces)
            return RunRecord.from_run(run_index, seed, result, keep_trace=cfg.keep_traces)

    async def run_experiment_async(self, cfg: ExperimentConfig) -> ExperimentResult:
        lookup(cfg.function)
        cells = cfg.cells()
        logger.info(
            f"Starting experiment on {cfg.function} ({cfg.algorithm}): "
            f"{len(cells)} cell(s) x {cfg.runs_per_cell} run(s), seed={cfg.seed}"
        )

        semaphore = asyncio.Semaphore(self.max_concurrent_runs)
        tasks = [
            asyncio.create_task(
                self._run_with_semaphore(semaphore, cfg, ci, cell, ri),
                name=f"{cfg.function}-cell{ci}-run{ri}",
            )
            for ci, cell in enumerate(cells)
            for ri in range(cfg.runs_per_cell)
        ]
        records = await asyncio.gather(*tasks)

        cell_results: List[CellResult] = []
        for ci, cell in enumerate(cells):
            runs = list(records[ci * cfg.runs_per_cell:(ci + 1) * cfg.runs_per_cell])
            stats = AggregateStats.from_runs(runs)
            cell_results.append(CellResult(cell_index=ci, parameters=cell, runs=runs, stats=stats))
            logger.info(
                f"Cell {ci} [{cell.algorithm.value} set={cell.clone_set_index} mut={cell.mutation_label}]: "
                f"mean_iterations={stats.mean_iterations:.1f} mean_proximity={stats.mean_proximity:.3e} "
                f"converged={stats.convergence_rate:.0%}"
            )

        best_by_algorithm: Dict[str, int] = {}
        for algorithm in Algorithm:
            best = select_best_cell([c for c in cell_results if c.parameters.algorithm == algorithm])
            if best is not None:
                best_by_algorithm[algorithm.value] = best

        result = ExperimentResult(
            config=cfg,
            cells=cell_results,
            best_cell=select_best_cell(cell_results),
            best_cell_by_algorithm=best_by_algorithm,
        )
        if result.best_cell is None:
            logger.warning(f"No fully converged cell for {cfg.function} ({cfg.algorithm})")
        else:
            logger.info(f"Best cell for {cfg.function} ({cfg.algorithm}): {result.best_cell}")
        return result

    async def emit_table2_async(self, seed: int, **overrides) -> List[Table2Row]:
        experiments = [
            table2_experiment(function, algorithm, seed, **overrides)
            for function in TABLE2_PARAMETERS
            for algorithm in (Algorithm.clonalg, Algorithm.ga)
        ]
        results = await asyncio.gather(*(self.run_experiment_async(e) for e in experiments))

        rows: List[Table2Row] = []
        for result in results:
            cell = result.cells[0]
            algorithm = cell.parameters.algorithm
            function = result.config.function
            proximity, iterations = TABLE2_REFERENCE[function][algorithm]
            rows.append(Table2Row(
                function=function,
                type=BENCHMARKS[function].modality.label,
                algorithm=algorithm,
                clone_set=cell.parameters.clone_set_index,
                mutation=cell.parameters.mutation_label,
                mean_proximity=cell.stats.mean_proximity,
                mean_iterations=cell.stats.mean_iterations,
                convergence_rate=cell.stats.convergence_rate,
                reported_proximity=proximity,
                reported_iterations=iterations,
            ))
        return rows


def compare_algorithms(result: ExperimentResult) -> ComparisonVerdict:
    """Best cell of each algorithm and which one needed fewer mean iterations."""
    verdict = ComparisonVerdict(function=result.config.function)
    by_index = {c.cell_index: c for c in result.cells}
    if "clonalg" in result.best_cell_by_algorithm:
        verdict.clonalg_best_cell = result.best_cell_by_algorithm["clonalg"]
        verdict.clonalg_mean_iterations = by_index[verdict.clonalg_best_cell].stats.mean_iterations
    if "ga" in result.best_cell_by_algorithm:
        verdict.ga_best_cell = result.best_cell_by_algorithm["ga"]
        verdict.ga_mean_iterations = by_index[verdict.ga_best_cell].stats.mean_iterations
    if verdict.clonalg_mean_iterations is not None and verdict.ga_mean_iterations is not None:
        if verdict.clonalg_mean_iterations < verdict.ga_mean_iterations:
            verdict.faster = Algorithm.clonalg
        elif verdict.ga_mean_iterations < verdict.clonalg_mean_iterations:
            verdict.faster = Algorithm.ga
    return verdict


# Global service instance
_service: Optional[ExperimentService] = None


def get_experiment_service() -> ExperimentService:
    global _service
    if not _service:
        _service = ExperimentService()
    return _service


def close_experiment_service() -> None:
    if _service:
        _service.close()


def run_experiment(cfg: ExperimentConfig) -> ExperimentResult:
    return asyncio.run(get_experiment_service().run_experiment_async(cfg))


def sweep(function: str, algorithm: str, seed: int, **overrides) -> ExperimentResult:
    """Full 3x3 grid (clone sets x mutation groups, or x GA rates) with default epsilon."""
    lookup(function)
    cfg = ExperimentConfig(
        function=function,
        algorithm=algorithm,
        clone_sets=[1, 2, 3],
        mutation_groups=[1, 2, 3],
        ga_mutation_rates=list(GA_MUTATION_RATES),
        seed=seed,
        **overrides,
    )
    return run_experiment(cfg)


def emit_table2(seed: int, **overrides) -> List[Table2Row]:
    return asyncio.run(get_experiment_service().emit_table2_async(seed, **overrides))
