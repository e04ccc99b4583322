"""
Benchmark objective functions and their registry.

Every function accepts a vector of shape (n,) and returns a float, or a
matrix of shape (m, n) and returns an (m,) array of values, one per row.
All six are minimized, with global minimum 0 on their domains.
"""

import math
from dataclasses import dataclass
from typing import Callable, Dict, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike, NDArray

from .encoding import N_VARIABLES
from .models import Bounds, Modality

import logging
logger = logging.getLogger(__name__)

Value = Union[float, NDArray[np.float64]]


def _as_points(x: ArrayLike) -> NDArray[np.float64]:
    return np.asarray(x, dtype=np.float64)


def _result(value: NDArray[np.float64]) -> Value:
    if value.ndim == 0:
        return float(value)
    return value


def sphere(x: ArrayLike) -> Value:
    x = _as_points(x)
    return _result(np.sum(x * x, axis=-1))


def rastrigin(x: ArrayLike) -> Value:
    x = _as_points(x)
    n = x.shape[-1]
    return _result(10.0 * n + np.sum(x * x - 10.0 * np.cos(2.0 * np.pi * x), axis=-1))


def ackley(x: ArrayLike) -> Value:
    x = _as_points(x)
    n = x.shape[-1]
    value = (
        -20.0 * np.exp(-0.2 * np.sqrt(np.sum(x * x, axis=-1) / n))
        - np.exp(np.sum(np.cos(2.0 * np.pi * x), axis=-1) / n)
        + 20.0
        + math.e
    )
    # rounding leaves a few ulps below zero at the origin
    return _result(np.maximum(value, 0.0))


def modified_sinusoidal(x: ArrayLike) -> Value:
    x = _as_points(x)
    n = x.shape[-1]
    return _result(np.sum(np.sin(x), axis=-1) + n)


def sum_of_different_powers(x: ArrayLike) -> Value:
    """Sum of |x_i|^(i+1) with 1-based i, i.e. exponents 2..n+1."""
    x = _as_points(x)
    exponents = np.arange(2, x.shape[-1] + 2, dtype=np.float64)
    return _result(np.sum(np.abs(x) ** exponents, axis=-1))


def schwefel_2_22(x: ArrayLike) -> Value:
    x = _as_points(x)
    ax = np.abs(x)
    return _result(np.sum(ax, axis=-1) + np.prod(ax, axis=-1))


@dataclass(frozen=True)
class BenchmarkSpec:
    name: str
    dimension: int
    bounds: Bounds
    evaluate: Callable[[ArrayLike], Value]
    optimum_value: float
    optimum_location: Tuple[float, ...]
    modality: Modality
    description: str = ""


class BenchmarkNotFoundError(LookupError):
    pass


def _spec(name, lo, hi, fn, modality, location=0.0, description=""):
    return BenchmarkSpec(
        name=name,
        dimension=N_VARIABLES,
        bounds=Bounds(lo=lo, hi=hi),
        evaluate=fn,
        optimum_value=0.0,
        optimum_location=(location,) * N_VARIABLES,
        modality=modality,
        description=description,
    )


# Modality tags follow the published comparison table and are never branched on.
BENCHMARKS: Dict[str, BenchmarkSpec] = {
    spec.name: spec
    for spec in (
        _spec("sphere", -100.0, 100.0, sphere, Modality.unimodal,
              description="Sum of squares; continuous, convex"),
        _spec("rastrigin", -5.12, 5.12, rastrigin, Modality.highly_multimodal,
              description="Sphere with cosine modulation"),
        _spec("ackley", -32.0, 32.0, ackley, Modality.multimodal,
              description="Exponential of RMS and mean cosine"),
        # Minimizer is 3*pi/2 (~4.712); commonly quoted as 4.714.
        _spec("modified-sinusoidal", 0.0, 6.0, modified_sinusoidal, Modality.highly_multimodal,
              location=3.0 * math.pi / 2.0, description="Sum of sines plus n"),
        _spec("sum-of-powers", -2.048, 2.048, sum_of_different_powers, Modality.unimodal,
              description="Sum of |x_i|^(i+1)"),
        _spec("schwefel-2-22", -10.0, 10.0, schwefel_2_22, Modality.multimodal,
              description="Sum plus product of |x_i|"),
    )
}


def lookup(name: str) -> BenchmarkSpec:
    try:
        return BENCHMARKS[name]
    except KeyError:
        valid = ", ".join(BENCHMARKS)
        raise BenchmarkNotFoundError(f"Unknown benchmark '{name}'. Valid identifiers: {valid}") from None
