"""
Binary genome encoding.

A genome is a flat uint8 array of GENOME_BITS bits holding N_VARIABLES
fixed-point variables of BITS_PER_VARIABLE bits each. Variable v occupies
bits [20*v, 20*v + 20), most significant bit first. A segment with unsigned
value u decodes to lo + (u / (2^20 - 1)) * (hi - lo), so both bounds are
attainable.
"""

from typing import Sequence, Union

import numpy as np
from numpy.typing import NDArray

from .models import Bounds

N_VARIABLES = 10
BITS_PER_VARIABLE = 20
GENOME_BITS = N_VARIABLES * BITS_PER_VARIABLE
MAX_CODE = 2**BITS_PER_VARIABLE - 1

Genome = NDArray[np.uint8]
BitsLike = Union[Sequence[int], NDArray]

# MSB-first place values of one segment
_PLACE_VALUES = (1 << np.arange(BITS_PER_VARIABLE - 1, -1, -1)).astype(np.int64)


def _scale(codes: NDArray, bounds: Bounds) -> NDArray[np.float64]:
    values = bounds.lo + (codes / MAX_CODE) * (bounds.hi - bounds.lo)
    # lo + 1.0 * (hi - lo) can land one ulp off hi
    return np.where(codes == MAX_CODE, bounds.hi, values)


def segment_code(segment: BitsLike) -> int:
    """Unsigned integer value of a 20-bit segment, MSB first."""
    bits = np.asarray(segment, dtype=np.int64)
    if bits.shape != (BITS_PER_VARIABLE,):
        raise ValueError(f"Segment must have exactly {BITS_PER_VARIABLE} bits, got shape {bits.shape}")
    if not np.isin(bits, (0, 1)).all():
        raise ValueError("Segment bits must be 0 or 1")
    return int(bits @ _PLACE_VALUES)


def decode_variable(segment: BitsLike, bounds: Bounds) -> float:
    code = segment_code(segment)
    return float(_scale(np.asarray(code), bounds))


def decode_population(bits: NDArray, bounds: Bounds) -> NDArray[np.float64]:
    """Decode an (n, 200) bit matrix into an (n, 10) matrix of variables."""
    bits = np.asarray(bits)
    if bits.ndim != 2 or bits.shape[1] != GENOME_BITS:
        raise ValueError(f"Expected an (n, {GENOME_BITS}) bit matrix, got shape {bits.shape}")
    segments = bits.reshape(bits.shape[0], N_VARIABLES, BITS_PER_VARIABLE).astype(np.int64)
    return _scale(segments @ _PLACE_VALUES, bounds)


def decode_genome(genome: BitsLike, bounds: Bounds) -> NDArray[np.float64]:
    """Decode one genome into its 10 variables, in segment order."""
    g = validate_genome(genome)
    return decode_population(g[np.newaxis, :], bounds)[0]


def random_genome(rng: np.random.Generator) -> Genome:
    """Each bit is an independent fair coin drawn from rng."""
    return rng.integers(0, 2, size=GENOME_BITS, dtype=np.uint8)


def random_population(rng: np.random.Generator, size: int) -> NDArray[np.uint8]:
    return rng.integers(0, 2, size=(size, GENOME_BITS), dtype=np.uint8)


def validate_genome(genome: BitsLike) -> Genome:
    g = np.asarray(genome)
    if g.shape != (GENOME_BITS,):
        raise ValueError(f"Genome must have exactly {GENOME_BITS} bits, got shape {g.shape}")
    if not np.isin(g, (0, 1)).all():
        raise ValueError("Genome bits must be 0 or 1")
    return g.astype(np.uint8, copy=False)


# ==============================================================================
# Text form: 200 characters of '0'/'1', variable 0 leftmost
# ==============================================================================

def genome_to_str(genome: BitsLike) -> str:
    g = validate_genome(genome)
    return "".join("1" if b else "0" for b in g.tolist())


def genome_from_str(text: str) -> Genome:
    if len(text) != GENOME_BITS or set(text) - {"0", "1"}:
        raise ValueError(f"Genome text must be {GENOME_BITS} characters of '0'/'1'")
    return (np.frombuffer(text.encode("ascii"), dtype=np.uint8) - ord("0")).astype(np.uint8)
