"""
Points of the weighted projective stack P(2,3,4) and their height.

The height mixes square, cube and fourth roots, so it is stored exactly:
Ht**12 as a positive rational over ℚ (12 = lcm(2, 3, 4)), and the
exponent m of Ht = q**m over 𝔽_q(t). Nothing here uses floating point.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ._profile import ProfileContext
from .errors import ElementParseError
from .errors import FieldMismatchError
from .errors import InvalidTripleError
from .errors import NonIntegralError
from .errors import PlaceError
from .errors import ZeroElementError
from .fields import Archimedean
from .fields import DegreePlace
from .fields import FieldElem
from .fields import FinitePlace
from .fields import GlobalFieldCtx
from .fields import Place
from .fields import as_function
from .fields import as_integer
from .fields import as_rational
from .fields import place_degree
from .fields import support
from .fields import uniformizer
from .fields import valuation
from .polynomials import Poly
from .polynomials import RationalFunction

WEIGHTS = (2, 3, 4)
HEIGHT_POWER = 12

type ElementLike = int | Fraction | Poly | RationalFunction


@dataclass(frozen=True, slots=True)
class WeightedTriple:
    """
    Representative (x0, x1, x2) of a K-point of P(2,3,4), not all zero.
    """

    x0: FieldElem
    x1: FieldElem
    x2: FieldElem
    field: GlobalFieldCtx

    def __post_init__(self) -> None:
        for name, x in zip(("x0", "x1", "x2"), self.coords, strict=True):
            if not self.field.contains(x):
                e = FieldMismatchError(
                    f"{x!r} is not an element of {self.field}"
                )
                e.add_note(f"in coordinate {name}")
                raise e
        if not (self.x0 or self.x1 or self.x2):
            raise InvalidTripleError("(0,0,0) is not a point of P(2,3,4)")

    @classmethod
    def of(
        cls,
        field: GlobalFieldCtx,
        x0: ElementLike,
        x1: ElementLike,
        x2: ElementLike,
    ) -> WeightedTriple:
        """Coerces ints, Fractions or polynomials into a triple over field."""
        return cls(
            field.element(x0),
            field.element(x1),
            field.element(x2),
            field,
        )

    @classmethod
    def parse(cls, text: str, field: GlobalFieldCtx) -> WeightedTriple:
        """Parses ``x0,x1,x2``; commas inside ``[...]`` do not split."""
        parts: list[str] = []
        depth = 0
        start = 0
        for i, char in enumerate(text):
            if char == "[":
                depth += 1
            elif char == "]":
                depth -= 1
            elif char == "," and depth == 0:
                parts.append(text[start:i])
                start = i + 1
        parts.append(text[start:])
        if len(parts) != 3:
            raise ElementParseError(
                f"Expecting three coordinates, found {len(parts)}", text, 0
            )
        coords: list[FieldElem] = []
        offset = 0
        for name, part in zip(("x0", "x1", "x2"), parts, strict=True):
            try:
                coords.append(field.parse_element(part))
            except ElementParseError as e:
                relocated = ElementParseError(e.msg, text, offset + e.pos)
                relocated.add_note(f"in coordinate {name}")
                raise relocated from e
            offset += len(part) + 1
        return cls(coords[0], coords[1], coords[2], field)

    @property
    def coords(self) -> tuple[FieldElem, FieldElem, FieldElem]:
        return (self.x0, self.x1, self.x2)

    def __str__(self) -> str:
        return ",".join(self.field.format_element(x) for x in self.coords)

    def is_integral(self) -> bool:
        return all(self.field.is_integral(x) for x in self.coords)


@dataclass(frozen=True, order=True, slots=True)
class RationalHeight12:
    """Ht**12 over ℚ as an exact positive rational."""

    value: Fraction

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True, order=True, slots=True)
class PowerHeight:
    """Ht = q**exponent over 𝔽_q(t)."""

    q: int
    exponent: int

    def __str__(self) -> str:
        return f"{self.q}^{self.exponent}"


type Height12 = RationalHeight12 | PowerHeight


def scale(x: WeightedTriple, lam: FieldElem) -> WeightedTriple:
    """The weighted action (lam**2 x0, lam**3 x1, lam**4 x2)."""
    if not lam:
        raise ZeroElementError("the scaling factor must be nonzero")
    x.field.check(lam)
    lam2 = lam * lam
    lam3 = lam2 * lam
    return WeightedTriple(
        x.x0 * lam2, x.x1 * lam3, x.x2 * (lam2 * lam2), x.field
    )


def local_size_exp(x: WeightedTriple, v: Place) -> int:
    """
    Exponent e_v with |x|_{(2,3,4),v} = q_v**(-e_v).

    e_v = min over nonzero xi of floor(v(xi) / wi), flooring toward -inf.
    """
    if isinstance(v, Archimedean):
        raise PlaceError("local_size_exp needs a nonarchimedean place")
    return min(
        int(valuation(xi, v)) // w
        for xi, w in zip(x.coords, WEIGHTS, strict=True)
        if xi
    )


def _finite_places(x: WeightedTriple) -> frozenset[FinitePlace]:
    places: set[FinitePlace] = set()
    for xi in x.coords:
        if xi:
            places |= support(xi)
    return frozenset(places)


def height12(x: WeightedTriple) -> Height12:
    """Ht**12 over ℚ, or the exponent of Ht over 𝔽_q(t), via every place."""
    with ProfileContext("height12"):
        places = _finite_places(x)
        if x.field.is_rationals:
            finite = Fraction(1)
            for v in places:
                p = as_rational(uniformizer(v))
                finite *= p ** (-HEIGHT_POWER * local_size_exp(x, v))
            archimedean = max(
                abs(as_rational(xi)) ** (HEIGHT_POWER // w)
                for xi, w in zip(x.coords, WEIGHTS, strict=True)
                if xi
            )
            return RationalHeight12(finite * archimedean)
        q = x.field.modulus
        exponent = sum(-local_size_exp(x, v) * place_degree(v) for v in places)
        exponent -= local_size_exp(x, DegreePlace(q))
        return PowerHeight(q, exponent)


def canonical_height12(x: WeightedTriple) -> Height12:
    """
    Height of a canonical triple, whose finite local factors are all 1.

    ℚ: max(|x0|**6, |x1|**4, |x2|**3). 𝔽_q(t): max ceil(deg xi / wi).
    """
    if x.field.is_rationals:
        return RationalHeight12(
            Fraction(
                max(
                    abs(as_rational(xi)) ** (HEIGHT_POWER // w)
                    for xi, w in zip(x.coords, WEIGHTS, strict=True)
                    if xi
                )
            )
        )
    return PowerHeight(
        x.field.modulus,
        max(
            -(-as_function(xi).num.degree // w)
            for xi, w in zip(x.coords, WEIGHTS, strict=True)
            if xi
        ),
    )


def is_minimal(x: WeightedTriple) -> bool:
    """True iff no finite place scales out of the integral triple x."""
    if not x.is_integral():
        raise NonIntegralError(f"{x} has non-integral coordinates")
    return all(local_size_exp(x, v) <= 0 for v in _finite_places(x))


def encoding_key(x: WeightedTriple) -> tuple[int, int, int]:
    """
    Total order key (x2, x0, x1) used for visit order and unit choice.

    Integers compare numerically; polynomials by their base-q encoding.
    """
    if x.field.is_rationals:
        return (as_integer(x.x2), as_integer(x.x0), as_integer(x.x1))
    x0, x1, x2 = (as_function(xi).num.encoding() for xi in x.coords)
    return (x2, x0, x1)


def _fix_unit(x: WeightedTriple) -> WeightedTriple:
    if x.field.is_rationals:
        if as_rational(x.x1) < 0:
            return scale(x, Fraction(-1))
        return x
    q = x.field.modulus
    candidates = (
        scale(x, RationalFunction.constant(c, q)) for c in range(1, q)
    )
    return min(candidates, key=encoding_key)


def normalize(x: WeightedTriple) -> WeightedTriple:
    """
    Unique canonical representative of the scaling orbit of x.

    Scales by the product of uniformizer**(-e_v) over finite places, which
    clears denominators and strips every place with e_v >= 1 in one step,
    then fixes the unit: x1 >= 0 over ℚ, least encoding key over 𝔽_q(t).
    """
    with ProfileContext("normalize"):
        lam = x.field.one()
        for v in _finite_places(x):
            e = local_size_exp(x, v)
            if e:
                lam = lam * uniformizer(v) ** -e
        scaled = scale(x, lam) if lam != x.field.one() else x
        return _fix_unit(scaled)


def is_canonical(x: WeightedTriple) -> bool:
    return x.is_integral() and normalize(x) == x


def equivalent(a: WeightedTriple, b: WeightedTriple) -> bool:
    """True iff b = lam . a for some nonzero lam."""
    if a.field != b.field:
        raise FieldMismatchError(f"{a.field} and {b.field} differ")
    return normalize(a) == normalize(b)


__all__ = [
    "HEIGHT_POWER",
    "WEIGHTS",
    "ElementLike",
    "Height12",
    "PowerHeight",
    "RationalHeight12",
    "WeightedTriple",
    "canonical_height12",
    "encoding_key",
    "equivalent",
    "height12",
    "is_canonical",
    "is_minimal",
    "local_size_exp",
    "normalize",
    "scale",
]
