"""
Clonal selection and genetic algorithm benchmark package
"""

from .benchmarks import BENCHMARKS, lookup
from .engines import run_clonalg, run_ga
from .harness import emit_table2, run_experiment, sweep

__all__ = ["BENCHMARKS", "lookup", "run_clonalg", "run_ga", "run_experiment", "sweep", "emit_table2"]
