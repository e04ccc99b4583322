"""
Integration Tests for the Experiment Harness

Tests seeded multi-run experiments, parameter sweeps, best-cell selection and
the comparison table, using short generation caps.
"""

import hashlib

import pytest


def _cell(index, mean_iterations, mean_proximity, convergence_rate):
    from src.clonalg.models import AggregateStats, CellParameters, CellResult
    return CellResult(
        cell_index=index,
        parameters=CellParameters(
            algorithm="clonalg", clone_set_index=1, mutation_group_index=1, epsilon=1e-3, max_generations=10,
        ),
        runs=[],
        stats=AggregateStats(
            mean_iterations=mean_iterations, mean_proximity=mean_proximity,
            convergence_rate=convergence_rate, min_iterations=0, max_iterations=0,
        ),
    )


class TestDeriveSeed:
    """Tests for per-run seed derivation."""

    def test_seeds_are_distinct(self):
        """All (cell, run) pairs of an 18 x 10 sweep get distinct seeds."""
        from src.clonalg.harness import derive_seed

        seeds = {derive_seed(7, c, r) for c in range(18) for r in range(10)}

        assert len(seeds) == 180
        assert all(0 <= s < 2**64 for s in seeds)

    def test_derivation_is_stable(self):
        """The same inputs always yield the same seed."""
        from src.clonalg.harness import derive_seed

        assert derive_seed(2**64 - 1, 3, 4) == derive_seed(2**64 - 1, 3, 4)
        assert derive_seed(1, 0, 0) != derive_seed(2, 0, 0)


class TestRunExperiment:
    """Tests for ExperimentService.run_experiment_async and run_experiment."""

    @pytest.mark.integration
    @pytest.mark.asyncio
    async def test_cells_and_runs_in_order(self, small_experiment):
        """Cells come back in grid order with runs in run order."""
        from src.clonalg.harness import ExperimentService, derive_seed

        service = ExperimentService(max_concurrent_runs=1)
        result = await service.run_experiment_async(small_experiment)

        assert [c.cell_index for c in result.cells] == [0, 1]
        assert [c.parameters.mutation_group_index for c in result.cells] == [1, 2]
        for cell in result.cells:
            assert [r.run_index for r in cell.runs] == [0, 1, 2]
            assert [r.seed for r in cell.runs] == [derive_seed(11, cell.cell_index, i) for i in range(3)]
        assert result.run_count == 6

    @pytest.mark.integration
    @pytest.mark.asyncio
    async def test_stats_are_arithmetic_means(self, small_experiment):
        """mean_iterations and mean_proximity are plain means over the cell's runs."""
        from src.clonalg.harness import ExperimentService

        result = await ExperimentService(max_concurrent_runs=1).run_experiment_async(small_experiment)

        for cell in result.cells:
            assert cell.stats.mean_iterations == pytest.approx(sum(r.iterations for r in cell.runs) / 3)
            assert cell.stats.mean_proximity == pytest.approx(sum(r.best_affinity for r in cell.runs) / 3)
            assert cell.stats.convergence_rate == sum(r.converged for r in cell.runs) / 3

    @pytest.mark.integration
    def test_single_run_matches_direct_engine_call(self):
        """runs_per_cell = 1 over one cell reproduces the engine result for the derived seed."""
        from src.clonalg.harness import derive_seed, execute_run, run_experiment
        from src.clonalg.models import ExperimentConfig

        cfg = ExperimentConfig(
            function="ackley", algorithm="ga", clone_sets=[2], ga_mutation_rates=[0.01],
            runs_per_cell=1, max_generations=30, seed=5,
        )
        result = run_experiment(cfg)
        direct = execute_run(cfg.cells()[0].to_algorithm_config(derive_seed(5, 0, 0)), "ackley")

        record = result.cells[0].runs[0]
        assert record.iterations == direct.iterations
        assert record.best_affinity == direct.best_affinity
        assert record.best_vector == direct.best_vector
        assert record.best_genome == direct.best_genome
        assert result.cells[0].stats.mean_iterations == direct.iterations

    @pytest.mark.integration
    def test_same_config_byte_identical(self, small_experiment):
        """Repeating an experiment gives byte-identical summary JSON."""
        from src.clonalg.harness import run_experiment
        from src.clonalg.storage_service import summary_to_json

        first = hashlib.sha256(summary_to_json(run_experiment(small_experiment)).encode()).hexdigest()
        second = hashlib.sha256(summary_to_json(run_experiment(small_experiment)).encode()).hexdigest()

        assert first == second

    @pytest.mark.integration
    @pytest.mark.slow
    def test_worker_pool_matches_inline(self, small_experiment):
        """Results do not depend on the number of worker processes."""
        from src.clonalg.harness import ExperimentService
        import asyncio

        inline = ExperimentService(max_concurrent_runs=1)
        pooled = ExperimentService(max_concurrent_runs=2)
        try:
            a = asyncio.run(inline.run_experiment_async(small_experiment))
            b = asyncio.run(pooled.run_experiment_async(small_experiment))
        finally:
            pooled.close()

        assert a.model_dump() == b.model_dump()

    def test_unknown_function_raises(self):
        """An unregistered function name fails before any run starts."""
        from src.clonalg.benchmarks import BenchmarkNotFoundError
        from src.clonalg.harness import run_experiment
        from src.clonalg.models import ExperimentConfig

        cfg = ExperimentConfig(function="griewank", algorithm="clonalg", epsilon=1e-3, seed=1)

        with pytest.raises(BenchmarkNotFoundError):
            run_experiment(cfg)

    def test_service_rejects_zero_workers(self):
        """max_concurrent_runs must be at least 1."""
        from src.clonalg.harness import ExperimentService

        with pytest.raises(ValueError):
            ExperimentService(max_concurrent_runs=0)

    def test_traces_kept_only_on_request(self, small_experiment):
        """Run records hold traces only when keep_traces is set."""
        from src.clonalg.harness import run_experiment

        without = run_experiment(small_experiment)
        with_traces = run_experiment(small_experiment.model_copy(update={"keep_traces": True}))

        assert all(r.trace is None for c in without.cells for r in c.runs)
        for cell in with_traces.cells:
            for run in cell.runs:
                assert len(run.trace) == run.iterations + 1


class TestSweep:
    """Tests for sweep."""

    @pytest.mark.integration
    def test_sweep_runs_nine_cells_of_ten(self):
        """A clonalg sweep covers 9 cells x 10 runs."""
        from src.clonalg.harness import sweep

        result = sweep("sphere", "clonalg", seed=3, max_generations=5)

        assert len(result.cells) == 9
        assert all(len(c.runs) == 10 for c in result.cells)
        assert result.run_count == 90

    @pytest.mark.integration
    def test_sweep_both_and_compare(self):
        """'both' gives 18 cells and a verdict per algorithm once each cell converges."""
        from src.clonalg.harness import compare_algorithms, sweep

        result = sweep("sphere", "both", seed=3, max_generations=200, epsilon=1e9, runs_per_cell=2)

        assert len(result.cells) == 18
        assert set(result.best_cell_by_algorithm) == {"clonalg", "ga"}
        verdict = compare_algorithms(result)
        assert verdict.clonalg_mean_iterations == 0.0
        assert verdict.ga_mean_iterations == 0.0
        assert verdict.faster is None
        assert result.best_cell in {result.best_cell_by_algorithm["clonalg"], result.best_cell_by_algorithm["ga"]}

    def test_unconverged_sweep_has_no_best_cell(self):
        """Without a fully converged cell, best_cell is absent."""
        from src.clonalg.harness import compare_algorithms, sweep

        result = sweep("rastrigin", "ga", seed=3, max_generations=2, runs_per_cell=1)

        assert result.best_cell is None
        assert result.best_cell_by_algorithm == {}
        assert compare_algorithms(result).faster is None


class TestSelectBestCell:
    """Tests for select_best_cell tie-breaking."""

    def test_fewest_mean_iterations_wins(self):
        """Among fully converged cells the lowest mean_iterations wins."""
        from src.clonalg.harness import select_best_cell

        cells = [_cell(0, 50.0, 1e-4, 1.0), _cell(1, 20.0, 1e-4, 1.0), _cell(2, 10.0, 1e-4, 0.9)]

        assert select_best_cell(cells) == 1

    def test_tie_goes_to_lower_proximity_then_index(self):
        """Equal iterations fall back to mean_proximity, then cell index."""
        from src.clonalg.harness import select_best_cell

        assert select_best_cell([_cell(0, 20.0, 5e-4, 1.0), _cell(1, 20.0, 1e-4, 1.0)]) == 1
        assert select_best_cell([_cell(3, 20.0, 1e-4, 1.0), _cell(2, 20.0, 1e-4, 1.0)]) == 2

    def test_no_converged_cell(self):
        """No eligible cell gives None."""
        from src.clonalg.harness import select_best_cell

        assert select_best_cell([_cell(0, 5.0, 1e-4, 0.5)]) is None
        assert select_best_cell([]) is None


class TestTable2:
    """Tests for the best-parameter comparison table."""

    def test_parameters_cover_six_functions(self):
        """Every function has best parameters and published values for both algorithms."""
        from src.clonalg.benchmarks import BENCHMARKS
        from src.clonalg.harness import TABLE2_PARAMETERS, TABLE2_REFERENCE
        from src.clonalg.models import Algorithm

        assert list(TABLE2_PARAMETERS) == list(BENCHMARKS)
        for function in BENCHMARKS:
            assert set(TABLE2_PARAMETERS[function]) == {Algorithm.clonalg, Algorithm.ga}
            assert set(TABLE2_REFERENCE[function]) == {Algorithm.clonalg, Algorithm.ga}

    @pytest.mark.integration
    def test_emit_table2_rows(self):
        """Twelve rows, function by function, clonalg before ga, at the best parameters."""
        from src.clonalg.harness import emit_table2

        rows = emit_table2(seed=9, max_generations=3, runs_per_cell=1)

        assert len(rows) == 12
        assert [r.algorithm.value for r in rows[:2]] == ["clonalg", "ga"]
        assert [r.function for r in rows[::2]] == [
            "sphere", "rastrigin", "ackley", "modified-sinusoidal", "sum-of-powers", "schwefel-2-22",
        ]
        rastrigin_clonalg = rows[2]
        assert (rastrigin_clonalg.clone_set, rastrigin_clonalg.mutation) == (3, "3")
        assert rastrigin_clonalg.type == "Highly Multimodal"
        sphere_ga = rows[1]
        assert (sphere_ga.clone_set, sphere_ga.mutation) == (2, "0.005")
        assert sphere_ga.reported_iterations == 3589
