"""
Seeded triple generators for heightcensus benchmarks.

Every generator is deterministic so runs compare like with like:
- integral triples over ℚ of a given coordinate size
- triples with denominators that normalize has to clear
- function field triples over 𝔽_q(t) of bounded degree
"""

import random
from collections.abc import Callable
from fractions import Fraction

from heightcensus import RATIONALS
from heightcensus import GlobalFieldCtx
from heightcensus import Poly
from heightcensus import RationalFunction
from heightcensus import WeightedTriple

_SEED = 4096
_DEFAULT_COUNT = 200
_FUNCTION_FIELD_Q = 5


def generate_triples(
    kind: str, count: int = _DEFAULT_COUNT
) -> list[WeightedTriple]:
    """Generates count triples of the given kind."""
    generators: dict[str, Callable[[random.Random], WeightedTriple]] = {
        "small_integral": lambda rng: _integral(rng, 10),
        "large_integral": lambda rng: _integral(rng, 10**12),
        "fractional": _fractional,
        "function_field": _function_field,
    }

    if kind not in generators:
        raise ValueError(f"Unknown triple kind: {kind}")

    rng = random.Random(f"{_SEED}:{kind}")
    return [generators[kind](rng) for _ in range(count)]


def _integral(rng: random.Random, size: int) -> WeightedTriple:
    x0 = x1 = x2 = 0
    while not (x0 or x1 or x2):
        x0, x1, x2 = (rng.randint(-size, size) for _ in range(3))
    return WeightedTriple.of(RATIONALS, x0, x1, x2)


def _fractional(rng: random.Random) -> WeightedTriple:
    """Numerators and denominators up to 1000 exercise the prime sweep."""
    x0, x1, x2 = (
        Fraction(rng.randint(1, 1000), rng.randint(1, 1000)) for _ in range(3)
    )
    return WeightedTriple.of(RATIONALS, x0, rng.choice((-1, 1)) * x1, x2)


def _poly(rng: random.Random, degree: int) -> Poly:
    coeffs = [rng.randrange(_FUNCTION_FIELD_Q) for _ in range(degree + 1)]
    return Poly.from_coeffs(coeffs, _FUNCTION_FIELD_Q)


def _function_field(rng: random.Random) -> WeightedTriple:
    field = GlobalFieldCtx.function_field(_FUNCTION_FIELD_Q)
    den = Poly.zero(_FUNCTION_FIELD_Q)
    while not den:
        den = _poly(rng, 2)
    nums = [Poly.zero(_FUNCTION_FIELD_Q)] * 3
    while not any(nums):
        nums = [_poly(rng, 4) for _ in range(3)]
    x0, x1, x2 = (RationalFunction.from_polys(n, den) for n in nums)
    return WeightedTriple(x0, x1, x2, field)
