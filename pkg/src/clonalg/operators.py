"""
Population container and the variation/selection operators shared by the
clonal selection and genetic algorithm engines.

==============================================================================
FEATURES IMPLEMENTED IN THIS MODULE:
==============================================================================

1. ARRAY-BACKED POPULATION
   - Genomes live in one (n, 200) uint8 matrix, affinities in an (n,) float
     vector where NaN marks an unevaluated member
   - Individual is a read-only view used by callers and tests

2. RANKING AND CLONING
   - sort_population: stable ascending-affinity sort
   - clone_elites: per-rank clone counts for the four best members
   - assemble_next: elites + clones + best carry-over, truncated to size

3. VARIATION
   - banded_mutation: five rank bands over the 36 non-elites, best band
     mutated least
   - flat_mutation: one per-bit rate for all non-elites
   - single_point_crossover / pair_and_crossover

Every operator returns a new Population; inputs are never modified. The four
elite positions are never touched by mutation or crossover.

==============================================================================
"""

from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.typing import NDArray

from .encoding import GENOME_BITS, Genome, random_population, validate_genome

import logging
logger = logging.getLogger(__name__)

POPULATION_SIZE = 40
ELITE_COUNT = 4
MUTATION_BAND_SIZES = (8, 7, 7, 7, 7)

NOT_A_CLONE = -1


@dataclass(frozen=True)
class CloneSet:
    """Number of clones given to the 1st..4th best member."""
    counts: Tuple[int, ...]

    def __post_init__(self):
        if len(self.counts) != ELITE_COUNT or any(c <= 0 for c in self.counts):
            raise ValueError(f"CloneSet needs {ELITE_COUNT} positive counts, got {self.counts}")
        if any(a < b for a, b in zip(self.counts, self.counts[1:])):
            raise ValueError(f"CloneSet counts must be non-increasing, got {self.counts}")

    @property
    def total(self) -> int:
        return sum(self.counts)


@dataclass(frozen=True)
class MutationGroup:
    """Per-bit flip rates for the five rank bands, best band first."""
    rates: Tuple[float, ...]

    def __post_init__(self):
        if len(self.rates) != len(MUTATION_BAND_SIZES):
            raise ValueError(f"MutationGroup needs {len(MUTATION_BAND_SIZES)} rates, got {self.rates}")
        if any(not 0.0 < r < 1.0 for r in self.rates):
            raise ValueError(f"Mutation rates must lie in (0, 1), got {self.rates}")
        if any(a >= b for a, b in zip(self.rates, self.rates[1:])):
            raise ValueError(f"Mutation rates must be strictly ascending, got {self.rates}")


CLONE_SETS = {
    1: CloneSet((15, 7, 5, 3)),
    2: CloneSet((17, 8, 5, 4)),
    3: CloneSet((18, 9, 6, 4)),
}

MUTATION_GROUPS = {
    1: MutationGroup((0.01, 0.02, 0.03, 0.04, 0.05)),
    2: MutationGroup((0.015, 0.04, 0.065, 0.09, 0.115)),
    3: MutationGroup((0.025, 0.05, 0.075, 0.1, 0.125)),
}

GA_MUTATION_RATES = (0.005, 0.001, 0.01)


@dataclass(frozen=True)
class Individual:
    genome: Genome
    affinity: Optional[float] = None
    parent_rank: Optional[int] = None

    @property
    def evaluated(self) -> bool:
        return self.affinity is not None


class Population:
    """Ordered members; position 0 is the best once sorted."""

    __slots__ = ("genomes", "affinities", "parent_ranks")

    def __init__(
        self,
        genomes: NDArray,
        affinities: Optional[NDArray] = None,
        parent_ranks: Optional[NDArray] = None,
    ):
        genomes = np.asarray(genomes, dtype=np.uint8)
        if genomes.ndim != 2 or genomes.shape[1] != GENOME_BITS:
            raise ValueError(f"Population genomes must be (n, {GENOME_BITS}), got shape {genomes.shape}")
        n = genomes.shape[0]
        self.genomes = genomes
        self.affinities = (
            np.full(n, np.nan) if affinities is None else np.asarray(affinities, dtype=np.float64)
        )
        self.parent_ranks = (
            np.full(n, NOT_A_CLONE, dtype=np.int8) if parent_ranks is None
            else np.asarray(parent_ranks, dtype=np.int8)
        )
        if self.affinities.shape != (n,) or self.parent_ranks.shape != (n,):
            raise ValueError("Population affinities and parent ranks must have one entry per genome")

    @classmethod
    def random(cls, rng: np.random.Generator, size: int = POPULATION_SIZE) -> "Population":
        return cls(random_population(rng, size))

    @classmethod
    def from_individuals(cls, members: Sequence[Individual]) -> "Population":
        if not members:
            return cls(np.empty((0, GENOME_BITS), dtype=np.uint8))
        return cls(
            np.stack([validate_genome(m.genome) for m in members]),
            np.array([np.nan if m.affinity is None else m.affinity for m in members]),
            np.array([NOT_A_CLONE if m.parent_rank is None else m.parent_rank for m in members]),
        )

    def __len__(self) -> int:
        return self.genomes.shape[0]

    def __getitem__(self, i: int) -> Individual:
        affinity = self.affinities[i]
        rank = int(self.parent_ranks[i])
        return Individual(
            genome=self.genomes[i].copy(),
            affinity=None if np.isnan(affinity) else float(affinity),
            parent_rank=None if rank == NOT_A_CLONE else rank,
        )

    def __iter__(self) -> Iterator[Individual]:
        return (self[i] for i in range(len(self)))

    @property
    def members(self) -> List[Individual]:
        return list(self)

    @property
    def evaluated(self) -> NDArray[np.bool_]:
        return ~np.isnan(self.affinities)

    def copy(self) -> "Population":
        return Population(self.genomes.copy(), self.affinities.copy(), self.parent_ranks.copy())

    def take(self, index) -> "Population":
        return Population(self.genomes[index], self.affinities[index], self.parent_ranks[index])


def _require_size(p: Population, operator: str) -> None:
    if len(p) != POPULATION_SIZE:
        raise ValueError(f"{operator} requires a population of {POPULATION_SIZE}, got {len(p)}")


def sort_population(p: Population) -> Population:
    """Ascending affinity; equal affinities keep their original order."""
    if not p.evaluated.all():
        missing = np.flatnonzero(~p.evaluated).tolist()
        raise ValueError(f"Cannot sort a population with unevaluated members at {missing}")
    return p.take(np.argsort(p.affinities, kind="stable"))


def clone_elites(p: Population, s: CloneSet) -> Population:
    """counts[k] copies of member k for k = 0..3, in rank order.

    Clones share their parent's genome, so they also inherit its cached
    affinity. parent_rank records which elite each clone came from.
    """
    counts = np.asarray(s.counts)
    elite_index = np.arange(ELITE_COUNT)
    source = np.repeat(elite_index, counts)
    return Population(
        p.genomes[source].copy(),
        p.affinities[source].copy(),
        source.astype(np.int8),
    )


def assemble_next(elites: Population, clones: Population, previous: Population) -> Population:
    """Elites, then clones, then the best non-elites of previous, cut to len(previous).

    Clones are ordered by parent rank, so truncation drops the worst
    parent's clones first.
    """
    if len(elites) != ELITE_COUNT or not np.array_equal(elites.genomes, previous.genomes[:ELITE_COUNT]):
        raise ValueError("assemble_next expects the first four members of the sorted previous population as elites")
    size = len(previous)
    clone_slots = min(len(clones), size - ELITE_COUNT)
    carry = size - ELITE_COUNT - clone_slots
    parts = [elites, clones.take(slice(0, clone_slots)), previous.take(slice(ELITE_COUNT, ELITE_COUNT + carry))]
    return Population(
        np.concatenate([part.genomes for part in parts]),
        np.concatenate([part.affinities for part in parts]),
        np.concatenate([part.parent_ranks for part in parts]),
    )


def _flip_non_elites(p: Population, row_rates: NDArray, rng: np.random.Generator) -> Population:
    out = p.copy()
    flips = rng.random((len(row_rates), GENOME_BITS)) < row_rates[:, np.newaxis]
    out.genomes[ELITE_COUNT:] ^= flips.astype(np.uint8)
    changed = flips.any(axis=1)
    out.affinities[ELITE_COUNT:][changed] = np.nan
    return out


def banded_mutation(
    p: Population,
    g: Union[MutationGroup, Sequence[float]],
    rng: np.random.Generator,
) -> Population:
    """Flip bits of positions 4..39 at a rate set by their rank band.

    Bands are contiguous with sizes (8, 7, 7, 7, 7); band b uses rates[b].
    Members with at least one flipped bit lose their cached affinity.
    """
    _require_size(p, "banded_mutation")
    rates = g.rates if isinstance(g, MutationGroup) else tuple(g)
    if len(rates) != len(MUTATION_BAND_SIZES) or any(not 0.0 <= r <= 1.0 for r in rates):
        raise ValueError(f"banded_mutation needs {len(MUTATION_BAND_SIZES)} rates in [0, 1], got {rates}")
    row_rates = np.repeat(np.asarray(rates, dtype=np.float64), MUTATION_BAND_SIZES)
    return _flip_non_elites(p, row_rates, rng)


def flat_mutation(p: Population, rate: float, rng: np.random.Generator) -> Population:
    if not 0.0 <= rate <= 1.0:
        raise ValueError(f"Mutation rate must lie in [0, 1], got {rate}")
    row_rates = np.full(len(p) - ELITE_COUNT, float(rate))
    return _flip_non_elites(p, row_rates, rng)


def _crossover_rows(a: NDArray, b: NDArray, cuts: NDArray) -> Tuple[NDArray, NDArray]:
    head = np.arange(GENOME_BITS)[np.newaxis, :] < cuts[:, np.newaxis]
    return np.where(head, a, b), np.where(head, b, a)


def single_point_crossover(a: Genome, b: Genome, cut: int) -> Tuple[Genome, Genome]:
    """child1 = a[:cut] + b[cut:], child2 = b[:cut] + a[cut:]."""
    if not 1 <= cut <= GENOME_BITS - 1:
        raise ValueError(f"Crossover cut must lie in [1, {GENOME_BITS - 1}], got {cut}")
    a = validate_genome(a)
    b = validate_genome(b)
    c1, c2 = _crossover_rows(a[np.newaxis, :], b[np.newaxis, :], np.array([cut]))
    return c1[0], c2[0]


def pair_and_crossover(p: Population, rng: np.random.Generator) -> Population:
    """Shuffle the non-elites, pair them off and replace each pair by its children.

    Cuts are uniform on [1, 199]. Every child is marked unevaluated.
    """
    n_children = len(p) - ELITE_COUNT
    if n_children % 2:
        raise ValueError(f"pair_and_crossover needs an even number of non-elites, got {n_children}")
    order = rng.permutation(n_children) + ELITE_COUNT
    shuffled = p.genomes[order]
    cuts = rng.integers(1, GENOME_BITS, size=n_children // 2)
    c1, c2 = _crossover_rows(shuffled[0::2], shuffled[1::2], cuts)

    out = p.copy()
    out.genomes[ELITE_COUNT::2] = c1
    out.genomes[ELITE_COUNT + 1::2] = c2
    out.affinities[ELITE_COUNT:] = np.nan
    out.parent_ranks[ELITE_COUNT:] = NOT_A_CLONE
    return out
