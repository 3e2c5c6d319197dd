"""
Global fields ℚ and 𝔽_q(t), their places, valuations and absolute values.

Elements of ℚ are ``fractions.Fraction``; elements of 𝔽_q(t) are
``RationalFunction``. Both are immutable and canonical, so equality is
structural and values are safe to share between worker processes.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache

import sympy

from .errors import ElementParseError
from .errors import FieldError
from .errors import FieldMismatchError
from .errors import NonIntegralError
from .errors import PlaceError
from .errors import ZeroElementError
from .polynomials import Poly
from .polynomials import RationalFunction
from .polynomials import irreducible_test

type FieldElem = Fraction | RationalFunction

# v(0) = +inf
INFINITE_VALUATION = math.inf

TRIAL_DIVISION_LIMIT = 10**6

_RATIONAL_PATTERN = re.compile(r"[+-]?\d+(/\d+)?")


class FieldKind(Enum):
    """The two supported families of global fields."""

    RATIONALS = "Q"
    FUNCTION_FIELD = "Fq(t)"


@dataclass(frozen=True, slots=True)
class GlobalFieldCtx:
    """
    Field context: ℚ, or 𝔽_q(t) for a prime q not in {2, 3}.

    Immutable and hashable; carried by every triple so mismatched fields can
    be detected.
    """

    kind: FieldKind
    q: int | None = None

    def __post_init__(self) -> None:
        if not isinstance(self.kind, FieldKind):
            raise TypeError("kind must be a FieldKind")
        if self.kind is FieldKind.RATIONALS:
            if self.q is not None:
                raise FieldError("the rationals carry no parameters")
            return
        if not isinstance(self.q, int) or isinstance(self.q, bool):
            raise FieldError("function fields need an integer q")
        if self.q in (2, 3):
            raise FieldError(f"characteristic {self.q} is not supported")
        if not sympy.isprime(self.q):
            raise FieldError(f"q = {self.q} is not prime")

    @classmethod
    def rationals(cls) -> GlobalFieldCtx:
        return cls(FieldKind.RATIONALS)

    @classmethod
    def function_field(cls, q: int) -> GlobalFieldCtx:
        return cls(FieldKind.FUNCTION_FIELD, q)

    @classmethod
    def from_selector(cls, selector: str | int) -> GlobalFieldCtx:
        """Parses a ``--field`` value: ``Q`` or a prime q."""
        text = str(selector).strip()
        if text.upper() == "Q":
            return cls.rationals()
        if not text.isdigit():
            raise ElementParseError("Expecting Q or a prime q", text, 0)
        return cls.function_field(int(text))

    @property
    def selector(self) -> str:
        return "Q" if self.q is None else str(self.q)

    @property
    def is_rationals(self) -> bool:
        return self.kind is FieldKind.RATIONALS

    @property
    def modulus(self) -> int:
        """The constant-field size q; function fields only."""
        if self.q is None:
            raise FieldError("the rationals have no constant field size")
        return self.q

    def __str__(self) -> str:
        return "Q" if self.q is None else f"F_{self.q}(t)"

    def zero(self) -> FieldElem:
        return self.element(0)

    def one(self) -> FieldElem:
        return self.element(1)

    def generator(self) -> RationalFunction:
        """The transcendental t of 𝔽_q(t)."""
        return RationalFunction.from_poly(Poly.monomial(1, self.modulus))

    def element(
        self, value: int | Fraction | Poly | RationalFunction
    ) -> FieldElem:
        """Coerces an int, Fraction, Poly or RationalFunction into the field."""
        if self.q is None:
            if isinstance(value, int | Fraction):
                return Fraction(value)
            raise FieldMismatchError(f"{value!r} is not an element of Q")
        if isinstance(value, bool):
            raise FieldMismatchError("booleans are not field elements")
        if isinstance(value, int):
            return RationalFunction.constant(value, self.q)
        if isinstance(value, Poly) and value.q == self.q:
            return RationalFunction.from_poly(value)
        if isinstance(value, RationalFunction) and value.q == self.q:
            return value
        raise FieldMismatchError(f"{value!r} is not an element of {self}")

    def contains(self, x: object) -> bool:
        if self.q is None:
            return isinstance(x, Fraction)
        return isinstance(x, RationalFunction) and x.q == self.q

    def check(self, x: object) -> FieldElem:
        """Returns x unchanged if it belongs to this field, else raises."""
        if not self.contains(x):
            raise FieldMismatchError(f"{x!r} is not an element of {self}")
        return x  # type: ignore[return-value]

    def is_integral(self, x: FieldElem) -> bool:
        """True for elements of ℤ or 𝔽_q[t]."""
        if isinstance(x, Fraction):
            return x.denominator == 1
        return x.is_polynomial

    def parse_element(self, text: str) -> FieldElem:
        """Parses ``n``/``n/d`` (ℚ) or ``[c0,...]``/``[..]/[..]`` (𝔽_q(t))."""
        if self.q is not None:
            return RationalFunction.parse(text, self.q)
        stripped = text.strip()
        if not _RATIONAL_PATTERN.fullmatch(stripped):
            raise ElementParseError("Expecting n or n/d", text, 0)
        num, _, den = stripped.partition("/")
        if den and int(den) == 0:
            raise ElementParseError(
                "Zero denominator", text, text.index("/") + 1
            )
        return Fraction(int(num), int(den) if den else 1)

    def format_element(self, x: FieldElem) -> str:
        return str(x)


RATIONALS = GlobalFieldCtx.rationals()


@dataclass(frozen=True, order=True, slots=True)
class FinitePrime:
    """Finite place of ℚ at the prime p."""

    p: int

    def __post_init__(self) -> None:
        if not sympy.isprime(self.p):
            raise PlaceError(f"{self.p} is not prime")

    def __str__(self) -> str:
        return str(self.p)


@dataclass(frozen=True, slots=True)
class Archimedean:
    """The real place of ℚ."""

    def __str__(self) -> str:
        return "inf"


@dataclass(frozen=True, slots=True)
class FiniteIrreducible:
    """Finite place of 𝔽_q(t) at a monic irreducible polynomial."""

    pi: Poly

    def __post_init__(self) -> None:
        if not self.pi.is_monic or not irreducible_test(self.pi):
            raise PlaceError(f"{self.pi} is not monic irreducible")

    def __str__(self) -> str:
        return str(self.pi)


@dataclass(frozen=True, slots=True)
class DegreePlace:
    """The place of 𝔽_q(t) at infinity, with uniformizer 1/t."""

    q: int

    def __str__(self) -> str:
        return "deg"


type Place = FinitePrime | Archimedean | FiniteIrreducible | DegreePlace
type NonArchimedeanPlace = FinitePrime | FiniteIrreducible | DegreePlace
type FinitePlace = FinitePrime | FiniteIrreducible


@dataclass(frozen=True, order=True, slots=True)
class PrimePower:
    """Exact magnitude ``base ** exponent``."""

    base: int
    exponent: int

    @property
    def value(self) -> Fraction:
        return Fraction(self.base) ** self.exponent

    def __str__(self) -> str:
        return f"{self.base}^{self.exponent}"


type ExactMagnitude = PrimePower | Fraction


def residue_size(v: Place) -> int:
    """Size q_v of the residue field at a nonarchimedean place."""
    match v:
        case FinitePrime(p):
            return p
        case FiniteIrreducible(pi):
            return pi.q**pi.degree
        case DegreePlace(q):
            return q
        case _:
            raise PlaceError("the archimedean place has no residue field")


def place_degree(v: NonArchimedeanPlace) -> int:
    """Degree of a place of 𝔽_q(t) (1 for places of ℚ)."""
    if isinstance(v, FiniteIrreducible):
        return v.pi.degree
    return 1


def uniformizer(v: NonArchimedeanPlace) -> FieldElem:
    """p for ℚ, π at finite places of 𝔽_q(t), 1/t at the degree place."""
    match v:
        case FinitePrime(p):
            return Fraction(p)
        case FiniteIrreducible(pi):
            return RationalFunction.from_poly(pi)
        case DegreePlace(q):
            return RationalFunction.from_polys(Poly.one(q), Poly.monomial(1, q))
    raise PlaceError(f"no uniformizer at {v!r}")


def _int_valuation(n: int, p: int) -> int:
    count = 0
    while n % p == 0:
        n //= p
        count += 1
    return count


def valuation(x: FieldElem, v: Place) -> int | float:
    """Normalized valuation with v(uniformizer) = 1 and v(0) = +inf."""
    match v:
        case Archimedean():
            raise PlaceError("valuation is undefined at the archimedean place")
        case FinitePrime(p):
            if not isinstance(x, Fraction):
                raise FieldMismatchError("prime places belong to Q")
            if not x:
                return INFINITE_VALUATION
            return _int_valuation(x.numerator, p) - _int_valuation(
                x.denominator, p
            )
        case FiniteIrreducible(pi):
            if not isinstance(x, RationalFunction) or x.q != pi.q:
                raise FieldMismatchError(f"{pi} is not a place of this field")
            if x.is_zero:
                return INFINITE_VALUATION
            return x.num.multiplicity(pi) - x.den.multiplicity(pi)
        case DegreePlace(q):
            if not isinstance(x, RationalFunction) or x.q != q:
                raise FieldMismatchError("degree place of another field")
            if x.is_zero:
                return INFINITE_VALUATION
            return x.den.degree - x.num.degree
    raise PlaceError(f"unknown place {v!r}")


def abs_value_exact(x: FieldElem, v: Place) -> ExactMagnitude:
    """|x|_v as q_v**(-v(x)), or |x| exactly at the archimedean place."""
    if not x:
        raise ZeroElementError("the absolute value of zero is not encoded")
    if isinstance(v, Archimedean):
        if not isinstance(x, Fraction):
            raise PlaceError("function fields have no archimedean place")
        return abs(x)
    return PrimePower(residue_size(v), -int(valuation(x, v)))


@lru_cache(maxsize=1 << 16)
def _factor_positive(n: int) -> tuple[tuple[int, int], ...]:
    factors: dict[int, int] = {}
    for p in (2, 3):
        if n % p == 0:
            factors[p] = _int_valuation(n, p)
            n //= p ** factors[p]
    d = 5
    while d <= TRIAL_DIVISION_LIMIT and d * d <= n:
        for p in (d, d + 2):
            if n % p == 0:
                factors[p] = _int_valuation(n, p)
                n //= p ** factors[p]
        d += 6
    if n > 1:
        if d * d > n:
            factors[n] = factors.get(n, 0) + 1
        else:
            for p, k in sympy.factorint(n).items():
                factors[int(p)] = factors.get(int(p), 0) + int(k)
    return tuple(sorted(factors.items()))


def factor_integer(n: int) -> dict[int, int]:
    """
    Prime factorization of |n| for n != 0.

    Trial division up to 10**6, then sympy's Pollard-rho based ``factorint``
    on any remaining composite cofactor.
    """
    if n == 0:
        raise ZeroElementError("zero has no factorization")
    return dict(_factor_positive(abs(n)))


def support(x: FieldElem) -> frozenset[FinitePlace]:
    """Finite places where x has nonzero valuation."""
    if not x:
        raise ZeroElementError("zero has infinite valuation everywhere")
    if isinstance(x, Fraction):
        primes = set(factor_integer(x.numerator)) | set(
            factor_integer(x.denominator)
        )
        return frozenset(FinitePrime(p) for p in primes)
    irreducibles = set(x.num.factor()) | set(x.den.factor())
    return frozenset(FiniteIrreducible(pi) for pi in irreducibles)


def as_rational(x: FieldElem) -> Fraction:
    if not isinstance(x, Fraction):
        raise FieldMismatchError(f"{x!r} is not an element of Q")
    return x


def as_integer(x: FieldElem) -> int:
    """The integer value of x in Q; raises unless x is integral."""
    r = as_rational(x)
    if r.denominator != 1:
        raise NonIntegralError(f"{r} is not an integer")
    return r.numerator


def as_function(x: FieldElem) -> RationalFunction:
    if not isinstance(x, RationalFunction):
        raise FieldMismatchError(f"{x!r} is not an element of F_q(t)")
    return x


def infinite_places(field: GlobalFieldCtx) -> tuple[Place, ...]:
    """The archimedean place of ℚ, or the degree place of 𝔽_q(t)."""
    if field.is_rationals:
        return (Archimedean(),)
    return (DegreePlace(field.modulus),)


__all__ = [
    "INFINITE_VALUATION",
    "RATIONALS",
    "TRIAL_DIVISION_LIMIT",
    "Archimedean",
    "DegreePlace",
    "ExactMagnitude",
    "FieldElem",
    "FieldKind",
    "FinitePlace",
    "FiniteIrreducible",
    "FinitePrime",
    "GlobalFieldCtx",
    "NonArchimedeanPlace",
    "Place",
    "PrimePower",
    "abs_value_exact",
    "as_function",
    "as_integer",
    "as_rational",
    "factor_integer",
    "infinite_places",
    "place_degree",
    "residue_size",
    "support",
    "uniformizer",
    "valuation",
]
