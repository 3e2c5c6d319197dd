"""
Polynomials over a prime field and the rational function field 𝔽_q(t).

``Poly`` stores ascending coefficients reduced mod q with no trailing zeros,
so equality and hashing are structural. ``RationalFunction`` keeps
numerator and denominator coprime with a monic denominator.
"""

from __future__ import annotations

import re
from collections.abc import Iterable
from collections.abc import Iterator
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import ElementParseError
from .errors import FieldError
from .errors import FieldMismatchError

_POLY_PATTERN = re.compile(r"\[\s*(\d+\s*(,\s*\d+\s*)*)?\]")

# Fraction operands raise FieldMismatchError at run time.
type _Operand = RationalFunction | Fraction | int


@dataclass(frozen=True, slots=True)
class Poly:
    """
    Element of 𝔽_q[t] as ascending coefficients ``(c0, c1, ..., cn)``.

    The zero polynomial has no coefficients and degree -1.
    """

    coeffs: tuple[int, ...]
    q: int

    def __post_init__(self) -> None:
        if self.coeffs and self.coeffs[-1] == 0:
            raise FieldError("polynomial coefficients carry a trailing zero")
        if any(not 0 <= c < self.q for c in self.coeffs):
            raise FieldError(f"coefficients must be reduced mod {self.q}")

    @classmethod
    def from_coeffs(cls, coeffs: Iterable[int], q: int) -> Poly:
        """Builds a polynomial, reducing mod q and trimming leading zeros."""
        reduced = [c % q for c in coeffs]
        while reduced and reduced[-1] == 0:
            reduced.pop()
        return cls(tuple(reduced), q)

    @classmethod
    def zero(cls, q: int) -> Poly:
        return cls((), q)

    @classmethod
    def one(cls, q: int) -> Poly:
        return cls((1,), q)

    @classmethod
    def constant(cls, c: int, q: int) -> Poly:
        return cls.from_coeffs((c,), q)

    @classmethod
    def monomial(cls, degree: int, q: int, coefficient: int = 1) -> Poly:
        return cls.from_coeffs((0,) * degree + (coefficient,), q)

    @classmethod
    def from_encoding(cls, code: int, q: int) -> Poly:
        """Inverse of ``encoding``: base-q digits become coefficients."""
        digits: list[int] = []
        while code:
            code, digit = divmod(code, q)
            digits.append(digit)
        return cls(tuple(digits), q)

    @classmethod
    def parse(cls, text: str, q: int) -> Poly:
        """Parses the ``[c0,c1,...,cn]`` encoding with 0 <= ci < q."""
        stripped = text.strip()
        if not _POLY_PATTERN.fullmatch(stripped):
            raise ElementParseError("Expecting [c0,c1,...]", text, 0)
        body = stripped[1:-1]
        if not body.strip():
            return cls.zero(q)
        # offset of the first character after "["
        start = len(text) - len(text.lstrip()) + 1
        coeffs: list[int] = []
        for part in body.split(","):
            c = int(part)
            if c >= q:
                raise ElementParseError(
                    f"Coefficient {c} is not reduced mod {q}",
                    text,
                    start + len(part) - len(part.lstrip()),
                )
            coeffs.append(c)
            start += len(part) + 1
        return cls.from_coeffs(coeffs, q)

    def __str__(self) -> str:
        return "[" + ",".join(str(c) for c in self.coeffs or (0,)) + "]"

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def leading(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def is_monic(self) -> bool:
        return self.leading == 1

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def encoding(self) -> int:
        """Returns sum(ci * q**i), the position of self in coefficient order."""
        code = 0
        for c in reversed(self.coeffs):
            code = code * self.q + c
        return code

    def _coerce(self, other: Poly | int) -> Poly:
        if isinstance(other, int):
            return Poly.constant(other, self.q)
        if other.q != self.q:
            raise FieldMismatchError(
                f"cannot combine polynomials over F_{self.q} and F_{other.q}"
            )
        return other

    def __add__(self, other: Poly | int) -> Poly:
        rhs = self._coerce(other)
        size = max(len(self.coeffs), len(rhs.coeffs))
        a = self.coeffs + (0,) * (size - len(self.coeffs))
        b = rhs.coeffs + (0,) * (size - len(rhs.coeffs))
        return Poly.from_coeffs(
            (x + y for x, y in zip(a, b, strict=True)), self.q
        )

    __radd__ = __add__

    def __neg__(self) -> Poly:
        return Poly.from_coeffs((-c for c in self.coeffs), self.q)

    def __sub__(self, other: Poly | int) -> Poly:
        return self + (-self._coerce(other))

    def __rsub__(self, other: int) -> Poly:
        return self._coerce(other) - self

    def __mul__(self, other: Poly | int) -> Poly:
        rhs = self._coerce(other)
        if not self.coeffs or not rhs.coeffs:
            return Poly.zero(self.q)
        product = [0] * (len(self.coeffs) + len(rhs.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(rhs.coeffs):
                    product[i + j] += a * b
        return Poly.from_coeffs(product, self.q)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> Poly:
        if exponent < 0:
            raise ValueError("polynomial exponent must be non-negative")
        result = Poly.one(self.q)
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    def scale(self, c: int) -> Poly:
        return Poly.from_coeffs((c * x for x in self.coeffs), self.q)

    def monic(self) -> Poly:
        """Returns self divided by its leading coefficient."""
        if not self.coeffs:
            raise ZeroDivisionError("the zero polynomial has no monic form")
        return self.scale(pow(self.leading, -1, self.q))

    def __divmod__(self, other: Poly | int) -> tuple[Poly, Poly]:
        divisor = self._coerce(other)
        if not divisor.coeffs:
            raise ZeroDivisionError("polynomial division by zero")
        remainder = list(self.coeffs)
        dd = divisor.degree
        inv_lead = pow(divisor.leading, -1, self.q)
        quotient = [0] * max(len(remainder) - dd, 0)
        for shift in range(len(remainder) - dd - 1, -1, -1):
            factor = remainder[shift + dd] * inv_lead % self.q
            if factor:
                quotient[shift] = factor
                for i, c in enumerate(divisor.coeffs):
                    remainder[shift + i] = (
                        remainder[shift + i] - factor * c
                    ) % self.q
        return (
            Poly.from_coeffs(quotient, self.q),
            Poly.from_coeffs(remainder[:dd], self.q),
        )

    def __floordiv__(self, other: Poly | int) -> Poly:
        return divmod(self, other)[0]

    def __mod__(self, other: Poly | int) -> Poly:
        return divmod(self, other)[1]

    def divides(self, other: Poly) -> bool:
        return (other % self).is_zero

    def multiplicity(self, irreducible: Poly) -> int:
        """Largest k with irreducible**k dividing self; self must be nonzero."""
        if not self.coeffs:
            raise ZeroDivisionError("multiplicity in the zero polynomial")
        count = 0
        current = self
        while True:
            quotient, remainder = divmod(current, irreducible)
            if remainder:
                return count
            count += 1
            current = quotient

    def factor(self) -> dict[Poly, int]:
        """Monic irreducible factors with multiplicities, by trial division."""
        if not self.coeffs:
            raise ZeroDivisionError("cannot factor the zero polynomial")
        factors: dict[Poly, int] = {}
        remaining = self.monic()
        degree = 1
        while 2 * degree <= remaining.degree:
            for candidate in monic_polys(degree, self.q):
                k = remaining.multiplicity(candidate)
                if k:
                    factors[candidate] = k
                    remaining = remaining // candidate**k
            degree += 1
        if remaining.degree >= 1:
            factors[remaining] = factors.get(remaining, 0) + 1
        return factors


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic greatest common divisor; gcd(0, 0) is the zero polynomial."""
    while b.coeffs:
        a, b = b, a % b
    return a.monic() if a.coeffs else a


def irreducible_test(f: Poly) -> bool:
    """True iff f has degree >= 1 and no monic divisor of degree <= deg/2."""
    return _is_irreducible(f.monic()) if f.degree >= 1 else False


@lru_cache(maxsize=4096)
def _is_irreducible(f: Poly) -> bool:
    for degree in range(1, f.degree // 2 + 1):
        for candidate in monic_polys(degree, f.q):
            if candidate.divides(f):
                return False
    return True


def monic_polys(degree: int, q: int) -> Iterator[Poly]:
    """Yields the monic polynomials of a given degree in encoding order."""
    for code in range(q**degree):
        lower = Poly.from_encoding(code, q).coeffs
        yield Poly(lower + (0,) * (degree - len(lower)) + (1,), q)


def monic_irreducibles(degree: int, q: int) -> Iterator[Poly]:
    """Yields monic irreducible polynomials of a given degree."""
    return (f for f in monic_polys(degree, q) if _is_irreducible(f))


@dataclass(frozen=True, slots=True)
class RationalFunction:
    """
    Element of 𝔽_q(t) as ``num/den`` with gcd(num, den) = 1, den monic.
    """

    num: Poly
    den: Poly

    def __post_init__(self) -> None:
        if self.num.q != self.den.q:
            raise FieldMismatchError("numerator and denominator fields differ")
        if not self.den.is_monic:
            raise FieldError("denominator must be monic and nonzero")
        if self.num.is_zero:
            if self.den.degree != 0:
                raise FieldError("zero must be stored as [0]/[1]")
        elif poly_gcd(self.num, self.den).degree > 0:
            raise FieldError("numerator and denominator must be coprime")

    @classmethod
    def from_polys(cls, num: Poly, den: Poly) -> RationalFunction:
        """Canonicalizes num/den."""
        if den.is_zero:
            raise ZeroDivisionError("rational function with zero denominator")
        if num.is_zero:
            return cls(num, Poly.one(num.q))
        g = poly_gcd(num, den)
        num, den = num // g, den // g
        inv_lead = pow(den.leading, -1, den.q)
        return cls(num.scale(inv_lead), den.scale(inv_lead))

    @classmethod
    def from_poly(cls, num: Poly) -> RationalFunction:
        return cls(num, Poly.one(num.q))

    @classmethod
    def constant(cls, c: int, q: int) -> RationalFunction:
        return cls.from_poly(Poly.constant(c, q))

    @classmethod
    def parse(cls, text: str, q: int) -> RationalFunction:
        """Parses ``num`` or ``num/den`` with bracketed coefficient lists."""
        head, sep, tail = text.partition("/")
        num = Poly.parse(head, q)
        if not sep:
            return cls.from_poly(num)
        try:
            den = Poly.parse(tail, q)
        except ElementParseError as e:
            raise ElementParseError(e.msg, text, len(head) + 1 + e.pos) from e
        if den.is_zero:
            raise ElementParseError("Zero denominator", text, len(head) + 1)
        return cls.from_polys(num, den)

    def __str__(self) -> str:
        if self.den.degree == 0:
            return str(self.num)
        return f"{self.num}/{self.den}"

    @property
    def q(self) -> int:
        return self.num.q

    @property
    def is_zero(self) -> bool:
        return self.num.is_zero

    @property
    def is_polynomial(self) -> bool:
        return self.den.degree == 0

    def __bool__(self) -> bool:
        return not self.num.is_zero

    def _coerce(
        self, other: RationalFunction | Fraction | int
    ) -> RationalFunction:
        if isinstance(other, Fraction):
            raise FieldMismatchError(
                f"cannot combine {other!r} with an element of F_{self.q}(t)"
            )
        if isinstance(other, int):
            return RationalFunction.constant(other, self.q)
        if other.q != self.q:
            raise FieldMismatchError(
                f"cannot combine elements of F_{self.q}(t) and F_{other.q}(t)"
            )
        return other

    def __add__(self, other: _Operand) -> RationalFunction:
        rhs = self._coerce(other)
        if self.den == rhs.den:
            return RationalFunction.from_polys(self.num + rhs.num, self.den)
        return RationalFunction.from_polys(
            self.num * rhs.den + rhs.num * self.den, self.den * rhs.den
        )

    __radd__ = __add__

    def __neg__(self) -> RationalFunction:
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other: _Operand) -> RationalFunction:
        return self + (-self._coerce(other))

    def __rsub__(self, other: _Operand) -> RationalFunction:
        return self._coerce(other) - self

    def __mul__(self, other: _Operand) -> RationalFunction:
        rhs = self._coerce(other)
        return RationalFunction.from_polys(
            self.num * rhs.num, self.den * rhs.den
        )

    __rmul__ = __mul__

    def __truediv__(self, other: _Operand) -> RationalFunction:
        rhs = self._coerce(other)
        if rhs.is_zero:
            raise ZeroDivisionError("division by zero in F_q(t)")
        return RationalFunction.from_polys(
            self.num * rhs.den, self.den * rhs.num
        )

    def __rtruediv__(self, other: _Operand) -> RationalFunction:
        return self._coerce(other) / self

    def __pow__(self, exponent: int) -> RationalFunction:
        if exponent < 0:
            if self.is_zero:
                raise ZeroDivisionError("negative power of zero in F_q(t)")
            return RationalFunction.from_polys(
                self.den**-exponent, self.num**-exponent
            )
        return RationalFunction(self.num**exponent, self.den**exponent)


__all__ = [
    "Poly",
    "RationalFunction",
    "irreducible_test",
    "monic_irreducibles",
    "monic_polys",
    "poly_gcd",
]
