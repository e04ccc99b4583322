"""
Generation loops for the clonal selection algorithm and the genetic algorithm.

Both engines share one skeleton:

    initial random population -> evaluate -> record generation 0
    while best > epsilon and generations < cap:
        sort -> clone the four best -> assemble next population
        -> vary (banded mutation | crossover + flat mutation)
        -> evaluate new members -> record trace point

The all-time best individual is tracked outside the population, so the
reported solution can never be lost to a later mutation.
"""

from typing import Callable, Optional

import numpy as np

from .benchmarks import BenchmarkSpec
from .encoding import decode_genome, decode_population, genome_to_str
from .models import Algorithm, AlgorithmConfig, Bounds, ConvergenceTrace, RunResult
from .operators import (
    CLONE_SETS,
    ELITE_COUNT,
    MUTATION_GROUPS,
    Population,
    assemble_next,
    banded_mutation,
    clone_elites,
    flat_mutation,
    pair_and_crossover,
    sort_population,
)
from . import config

import logging
logger = logging.getLogger(__name__)

Variation = Callable[[Population, np.random.Generator], Population]


def evaluate_population(p: Population, spec: BenchmarkSpec, bounds: Optional[Bounds] = None) -> Population:
    """Fill in affinities of unevaluated members; cached affinities are kept."""
    bounds = bounds or spec.bounds
    pending = ~p.evaluated
    if not pending.any():
        return p
    out = p.copy()
    out.affinities[pending] = spec.evaluate(decode_population(out.genomes[pending], bounds))
    return out


class _BestTracker:
    """All-time best individual of a run, scored on its own decoded vector."""

    def __init__(self, spec: BenchmarkSpec):
        self.spec = spec
        self.affinity = float("inf")
        self.genome: Optional[np.ndarray] = None
        self.vector: Optional[np.ndarray] = None

    def update(self, p: Population) -> None:
        i = int(np.argmin(p.affinities))
        if p.affinities[i] >= self.affinity:
            return
        genome = p.genomes[i].copy()
        vector = decode_genome(genome, self.spec.bounds)
        affinity = float(self.spec.evaluate(vector))
        if affinity < self.affinity:
            self.affinity, self.genome, self.vector = affinity, genome, vector


def _run(cfg: AlgorithmConfig, spec: BenchmarkSpec, vary: Variation, keep_trace: bool) -> RunResult:
    rng = np.random.default_rng(cfg.seed)
    clone_set = CLONE_SETS[cfg.clone_set_index]

    population = evaluate_population(Population.random(rng), spec)
    best = _BestTracker(spec)
    best.update(population)
    trace = ConvergenceTrace() if keep_trace else None
    if trace is not None:
        trace.record(0, best.affinity, float(population.affinities.mean()))

    iterations = 0
    while best.affinity > cfg.epsilon and iterations < cfg.max_generations:
        ranked = sort_population(population)
        clones = clone_elites(ranked, clone_set)
        population = assemble_next(ranked.take(slice(0, ELITE_COUNT)), clones, ranked)
        population = evaluate_population(vary(population, rng), spec)

        iterations += 1
        best.update(population)
        if trace is not None:
            trace.record(iterations, best.affinity, float(population.affinities.mean()))
        if iterations % config.LOG_EVERY == 0:
            logger.debug(f"{cfg.algorithm.value}/{spec.name} generation {iterations}: best={best.affinity:.3e}")

    converged = best.affinity <= cfg.epsilon
    logger.info(
        f"{cfg.algorithm.value}/{spec.name} seed={cfg.seed} finished after {iterations} generations "
        f"(best={best.affinity:.3e}, converged={converged})"
    )
    return RunResult(
        iterations=iterations,
        best_affinity=best.affinity,
        best_vector=best.vector.tolist(),
        best_genome=genome_to_str(best.genome),
        converged=converged,
        trace=trace,
    )


def run_clonalg(cfg: AlgorithmConfig, spec: BenchmarkSpec, keep_trace: bool = True) -> RunResult:
    if cfg.algorithm != Algorithm.clonalg:
        raise ValueError(f"run_clonalg called with algorithm={cfg.algorithm.value}")
    group = MUTATION_GROUPS[cfg.mutation_group_index]

    def vary(p: Population, rng: np.random.Generator) -> Population:
        return banded_mutation(p, group, rng)

    return _run(cfg, spec, vary, keep_trace)


def run_ga(cfg: AlgorithmConfig, spec: BenchmarkSpec, keep_trace: bool = True) -> RunResult:
    if cfg.algorithm != Algorithm.ga:
        raise ValueError(f"run_ga called with algorithm={cfg.algorithm.value}")
    rate = cfg.ga_mutation_rate

    def vary(p: Population, rng: np.random.Generator) -> Population:
        return flat_mutation(pair_and_crossover(p, rng), rate, rng)

    return _run(cfg, spec, vary, keep_trace)


def run_engine(cfg: AlgorithmConfig, spec: BenchmarkSpec, keep_trace: bool = True) -> RunResult:
    """Dispatch on cfg.algorithm. With keep_trace=False no per-generation trace is built."""
    if cfg.algorithm == Algorithm.clonalg:
        return run_clonalg(cfg, spec, keep_trace)
    return run_ga(cfg, spec, keep_trace)
