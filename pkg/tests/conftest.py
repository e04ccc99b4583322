"""
Pytest Configuration and Fixtures

Provides shared fixtures for both unit and integration tests.
"""

import pytest
import numpy as np


# ==============================================================================
# Random Streams
# ==============================================================================

@pytest.fixture
def rng():
    """Fixed-seed generator so statistical tests are reproducible."""
    return np.random.default_rng(20240607)


# ==============================================================================
# Benchmarks and Populations
# ==============================================================================

@pytest.fixture
def sphere_spec():
    from src.clonalg.benchmarks import lookup
    return lookup("sphere")


@pytest.fixture
def evaluated_population(rng, sphere_spec):
    """Random population of 40 with every affinity filled in."""
    from src.clonalg.engines import evaluate_population
    from src.clonalg.operators import Population

    return evaluate_population(Population.random(rng), sphere_spec)


@pytest.fixture
def sorted_population(evaluated_population):
    from src.clonalg.operators import sort_population
    return sort_population(evaluated_population)


@pytest.fixture
def counting_sphere():
    """Sphere spec whose evaluate counts calls and evaluated rows."""
    from tests.mocks.counting_benchmark import counting_spec
    return counting_spec("sphere")


# ==============================================================================
# Engine and Experiment Configs
# ==============================================================================

@pytest.fixture
def clonalg_config():
    from src.clonalg.models import AlgorithmConfig
    return AlgorithmConfig(
        algorithm="clonalg",
        clone_set_index=2,
        mutation_group_index=1,
        epsilon=1e-6,
        max_generations=150,
        seed=7,
    )


@pytest.fixture
def ga_config():
    from src.clonalg.models import AlgorithmConfig
    return AlgorithmConfig(
        algorithm="ga",
        clone_set_index=1,
        ga_mutation_rate=0.005,
        epsilon=1e-6,
        max_generations=150,
        seed=7,
    )


@pytest.fixture
def small_experiment():
    """Two cells x three short runs; finishes in well under a second."""
    from src.clonalg.models import ExperimentConfig
    return ExperimentConfig(
        function="sum-of-powers",
        algorithm="clonalg",
        clone_sets=[1],
        mutation_groups=[1, 2],
        runs_per_cell=3,
        max_generations=40,
        seed=11,
    )


@pytest.fixture(autouse=True)
def _reset_experiment_service():
    """Drop the global service between tests so concurrency settings don't leak."""
    yield
    from src.clonalg import harness
    harness.close_experiment_service()
    harness._service = None
