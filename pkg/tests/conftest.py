"""
Pytest configuration and shared fixtures for heightcensus tests.

Provides immutable test cases and field contexts shared by the height,
enumeration, curve and census tests.
"""

import random
from dataclasses import dataclass
from fractions import Fraction

import pytest

import heightcensus
from heightcensus.fields import GlobalFieldCtx


@dataclass(frozen=True)
class TorsionCase:
    """
    Immutable golden for the torsion classifier over ℚ.

    Holds a triple in the text format and the expected printed class.
    """

    description: str
    triple: str
    expected: str


@dataclass(frozen=True)
class NormalizeCase:
    """Immutable triple with its expected canonical representative."""

    description: str
    triple: str
    expected: str
    height: str


TORSION_GOLDENS = (
    TorsionCase("2-torsion on y^2 = x^3 + x", "0,0,1", "order 2"),
    TorsionCase("5-torsion from X1(5)", "-12,108,-432", "order 5"),
    TorsionCase("rank one curve y^2 = x^3 - 2", "3,5,0", "nontorsion(cap=12)"),
    TorsionCase("cusp y^2 = x^3", "1,1,0", "singular"),
    TorsionCase("3-torsion on y^2 = x^3 + 1", "0,1,0", "order 3"),
)


NORMALIZE_CASES = (
    NormalizeCase("prime 2 scales out", "4,8,16", "1,1,1", "1"),
    NormalizeCase("negative x1 flips sign", "1,-1,1", "1,1,1", "1"),
    NormalizeCase("denominators clear", "1/4,1/8,1/16", "1,1,1", "1"),
    NormalizeCase("zero coordinates", "0,0,16", "0,0,1", "1"),
    NormalizeCase("already canonical", "3,5,0", "3,5,0", "729"),
    NormalizeCase("mixed primes", "36,216,0", "1,1,0", "1"),
)


# The 17 canonical points with Ht <= 1 over ℚ and their torsion classes.
B1_CLASSES = {
    (-1, 0, -1): "order 2",
    (-1, 0, 0): "order 2",
    (-1, 0, 1): "order 2",
    (0, 0, -1): "order 2",
    (0, 0, 1): "order 2",
    (1, 0, -1): "order 2",
    (1, 0, 0): "order 2",
    (1, 0, 1): "order 2",
    (-1, 1, -1): "nontorsion(cap=12)",
    (-1, 1, 0): "nontorsion(cap=12)",
    (-1, 1, 1): "nontorsion(cap=12)",
    (0, 1, -1): "nontorsion(cap=12)",
    (0, 1, 0): "order 3",
    (0, 1, 1): "nontorsion(cap=12)",
    (1, 1, -1): "nontorsion(cap=12)",
    (1, 1, 0): "singular",
    (1, 1, 1): "nontorsion(cap=12)",
}


@pytest.fixture
def q5() -> GlobalFieldCtx:
    """Provides the function field 𝔽₅(t)."""
    return GlobalFieldCtx.function_field(5)


@pytest.fixture
def rng() -> random.Random:
    """Provides a seeded generator so random sweeps are reproducible."""
    return random.Random(20240917)


def random_rational(rng: random.Random, size: int = 10**6) -> Fraction:
    """Nonzero rational with numerator and denominator up to size."""
    num = 0
    while not num:
        num = rng.randint(-size, size)
    return Fraction(num, rng.randint(1, size))


def random_function(
    rng: random.Random, q: int, degree: int = 4
) -> heightcensus.RationalFunction:
    """Nonzero element of 𝔽_q(t) of bounded degree."""
    num = heightcensus.Poly.zero(q)
    while not num:
        num = heightcensus.Poly.from_coeffs(
            [rng.randrange(q) for _ in range(rng.randint(1, degree + 1))], q
        )
    den = heightcensus.Poly.zero(q)
    while not den:
        den = heightcensus.Poly.from_coeffs(
            [rng.randrange(q) for _ in range(rng.randint(1, degree + 1))], q
        )
    return heightcensus.RationalFunction.from_polys(num, den)


def rational_triple(
    x0: int | Fraction, x1: int | Fraction, x2: int | Fraction
) -> heightcensus.WeightedTriple:
    """Shorthand for a triple over ℚ."""
    return heightcensus.WeightedTriple.of(heightcensus.RATIONALS, x0, x1, x2)
