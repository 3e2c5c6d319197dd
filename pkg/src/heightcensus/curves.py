"""
Marked elliptic curves from points of P(2,3,4), and the order of the mark.

The chart sends [x0 : x1 : x2] to E: y^2 = x^3 + x2*x + a6 with marked point
P = (x0, x1), where a6 = x1^2 - x0^3 - x2*x0 is forced by P lying on E. The
weighted scaling (lam^2, lam^3, lam^4) becomes the Weierstrass isomorphism
(x, y) -> (lam^2 x, lam^3 y), so the chart is well defined on points.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from ._profile import ProfileContext
from .enumerate import SubstackPredicate
from .errors import ConfigError
from .errors import OffCurveError
from .fields import FieldElem
from .fields import GlobalFieldCtx
from .fields import as_integer
from .heights import WeightedTriple

RATIONAL_TORSION_CAP = 12
FUNCTION_FIELD_TORSION_CAP = 24

# Orders of rational torsion points allowed by Mazur's theorem.
RATIONAL_TORSION_ORDERS = (2, 3, 4, 5, 6, 7, 8, 9, 10, 12)


@dataclass(frozen=True, slots=True)
class AffinePoint:
    x: FieldElem
    y: FieldElem

    def __str__(self) -> str:
        return f"({self.x}, {self.y})"


@dataclass(frozen=True, slots=True)
class Identity:
    """The point at infinity O."""

    def __str__(self) -> str:
        return "O"


IDENTITY = Identity()

type CurvePoint = AffinePoint | Identity


@dataclass(frozen=True, slots=True)
class MarkedCurve:
    """
    Short Weierstrass curve y^2 = x^3 + a4*x + a6 with marked point (px, py).

    Construction rejects a marked point that is off the curve.
    """

    a4: FieldElem
    a6: FieldElem
    px: FieldElem
    py: FieldElem
    field: GlobalFieldCtx

    def __post_init__(self) -> None:
        for x in (self.a4, self.a6, self.px, self.py):
            self.field.check(x)
        if not self.contains(self.marked_point):
            raise OffCurveError(
                f"({self.px}, {self.py}) is not on "
                f"y^2 = x^3 + ({self.a4})x + ({self.a6})"
            )

    @property
    def marked_point(self) -> AffinePoint:
        return AffinePoint(self.px, self.py)

    def contains(self, point: CurvePoint) -> bool:
        if isinstance(point, Identity):
            return True
        x, y = point.x, point.y
        return bool(y * y == x * x * x + self.a4 * x + self.a6)

    def __str__(self) -> str:
        return (
            f"y^2 = x^3 + ({self.a4})x + ({self.a6}), "
            f"P = ({self.px}, {self.py})"
        )


@dataclass(frozen=True, slots=True)
class Order:
    """The marked point has exact order n."""

    n: int

    def __str__(self) -> str:
        return f"order {self.n}"


@dataclass(frozen=True, slots=True)
class NonTorsion:
    """No multiple n*P with n <= cap is the identity."""

    cap: int

    def __str__(self) -> str:
        return f"nontorsion(cap={self.cap})"


@dataclass(frozen=True, slots=True)
class Singular:
    """Discriminant zero: the point lies outside M_{1,2}."""

    def __str__(self) -> str:
        return "singular"


SINGULAR = Singular()

type TorsionClass = Order | NonTorsion | Singular


def default_cap(field: GlobalFieldCtx) -> int:
    if field.is_rationals:
        return RATIONAL_TORSION_CAP
    return FUNCTION_FIELD_TORSION_CAP


def to_marked_curve(x: WeightedTriple) -> MarkedCurve:
    """Chart: a4 = x2, P = (x0, x1), a6 = x1^2 - x0^3 - x2*x0."""
    x0, x1, x2 = x.coords
    a6 = x1 * x1 - x0 * x0 * x0 - x2 * x0
    return MarkedCurve(x2, a6, x0, x1, x.field)


def twist(c: MarkedCurve, lam: FieldElem) -> MarkedCurve:
    """Image under (x, y) -> (lam^2 x, lam^3 y)."""
    lam2 = lam * lam
    lam3 = lam2 * lam
    return MarkedCurve(
        c.a4 * lam2 * lam2,
        c.a6 * lam3 * lam3,
        c.px * lam2,
        c.py * lam3,
        c.field,
    )


def discriminant(c: MarkedCurve) -> FieldElem:
    """Delta = -16 (4 a4^3 + 27 a6^2)."""
    return -16 * (4 * c.a4 * c.a4 * c.a4 + 27 * c.a6 * c.a6)


def _add(a4: FieldElem, p: CurvePoint, q: CurvePoint) -> CurvePoint:
    if isinstance(p, Identity):
        return q
    if isinstance(q, Identity):
        return p
    if p.x == q.x:
        if p.y == -q.y:
            return IDENTITY
        slope = (3 * p.x * p.x + a4) / (2 * p.y)
    else:
        slope = (q.y - p.y) / (q.x - p.x)
    x3 = slope * slope - p.x - q.x
    return AffinePoint(x3, slope * (p.x - x3) - p.y)


def _check_on_curve(c: MarkedCurve, *points: CurvePoint) -> None:
    for point in points:
        if not c.contains(point):
            raise OffCurveError(f"{point} is not on {c}")


def ec_add(c: MarkedCurve, p: CurvePoint, q: CurvePoint) -> CurvePoint:
    """Chord-tangent sum p + q on c."""
    _check_on_curve(c, p, q)
    return _add(c.a4, p, q)


def ec_neg(c: MarkedCurve, p: CurvePoint) -> CurvePoint:
    _check_on_curve(c, p)
    if isinstance(p, Identity):
        return p
    return AffinePoint(p.x, -p.y)


def ec_mul(c: MarkedCurve, n: int, p: CurvePoint) -> CurvePoint:
    """n*p by double-and-add; 0*p is the identity."""
    if n < 0:
        raise ValueError("ec_mul needs n >= 0; negate the point instead")
    _check_on_curve(c, p)
    result: CurvePoint = IDENTITY
    addend = p
    while n:
        if n & 1:
            result = _add(c.a4, result, addend)
        addend = _add(c.a4, addend, addend)
        n >>= 1
    return result


def _is_integral_point(point: AffinePoint) -> bool:
    return all(
        isinstance(c, Fraction) and c.denominator == 1
        for c in (point.x, point.y)
    )


def _order_by_multiples(
    a4: FieldElem, p: AffinePoint, cap: int, *, integral_exit: bool
) -> TorsionClass:
    multiple: CurvePoint = p
    for n in range(2, cap + 1):
        multiple = _add(a4, multiple, p)
        if isinstance(multiple, Identity):
            return Order(n)
        if integral_exit and not _is_integral_point(multiple):
            return NonTorsion(cap)
    return NonTorsion(cap)


def classify_integral(
    x0: int,
    x1: int,
    x2: int,
    cap: int = RATIONAL_TORSION_CAP,
    *,
    fast_paths: bool = True,
) -> TorsionClass:
    """
    Torsion class of the integral triple (x0, x1, x2) over ℚ.

    Fast paths, both sound on an integral short Weierstrass model:
    Lutz-Nagell (py != 0 and py^2 does not divide Delta means non-torsion)
    and the integrality exit (a non-integral multiple means non-torsion).
    """
    a6 = x1 * x1 - x0 * x0 * x0 - x2 * x0
    delta = -16 * (4 * x2 * x2 * x2 + 27 * a6 * a6)
    if delta == 0:
        return SINGULAR
    if fast_paths and x1 and delta % (x1 * x1):
        return NonTorsion(cap)
    return _order_by_multiples(
        Fraction(x2),
        AffinePoint(Fraction(x0), Fraction(x1)),
        cap,
        integral_exit=fast_paths,
    )


def torsion_order(
    c: MarkedCurve, cap: int, *, fast_paths: bool = True
) -> TorsionClass:
    """
    Order of the marked point, searched up to cap.

    Over ℚ the cap of 12 is exhaustive by Mazur's theorem. Over 𝔽_q(t) the
    answer NonTorsion(cap) only means no order up to cap.
    """
    if cap < 1:
        raise ConfigError(f"torsion cap must be >= 1, got {cap}")
    with ProfileContext("torsion_order"):
        integral_model = c.field.is_rationals and all(
            c.field.is_integral(x) for x in (c.a4, c.a6, c.px, c.py)
        )
        if integral_model:
            return classify_integral(
                as_integer(c.px),
                as_integer(c.py),
                as_integer(c.a4),
                cap,
                fast_paths=fast_paths,
            )
        if not discriminant(c):
            return SINGULAR
        return _order_by_multiples(
            c.a4, c.marked_point, cap, integral_exit=False
        )


def classify_triple(
    x: WeightedTriple, cap: int | None = None, *, fast_paths: bool = True
) -> TorsionClass:
    """Chart, discriminant and torsion order in one call."""
    return torsion_order(
        to_marked_curve(x),
        default_cap(x.field) if cap is None else cap,
        fast_paths=fast_paths,
    )


def is_nonsingular(x: WeightedTriple) -> bool:
    return bool(discriminant(to_marked_curve(x)))


def is_nontorsion(x: WeightedTriple) -> bool:
    """Nonsingular with a marked point of infinite order up to the cap."""
    return isinstance(classify_triple(x), NonTorsion)


NONSINGULAR = SubstackPredicate("nonsingular", is_nonsingular)
NONTORSION = SubstackPredicate("nontorsion", is_nontorsion)


__all__ = [
    "FUNCTION_FIELD_TORSION_CAP",
    "IDENTITY",
    "NONSINGULAR",
    "NONTORSION",
    "RATIONAL_TORSION_CAP",
    "RATIONAL_TORSION_ORDERS",
    "SINGULAR",
    "AffinePoint",
    "CurvePoint",
    "Identity",
    "MarkedCurve",
    "NonTorsion",
    "Order",
    "Singular",
    "TorsionClass",
    "classify_integral",
    "classify_triple",
    "default_cap",
    "discriminant",
    "ec_add",
    "ec_mul",
    "ec_neg",
    "is_nonsingular",
    "is_nontorsion",
    "to_marked_curve",
    "torsion_order",
    "twist",
]
