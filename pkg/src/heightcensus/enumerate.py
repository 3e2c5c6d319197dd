"""
Deterministic enumeration of the points of P(2,3,4) with Ht <= B.

Every point is visited once, as its canonical representative, in the total
order given by ``encoding_key``: lexicographic on (x2, x0, x1). The range of
the outermost coordinate x2 is cut into contiguous chunks that depend only
on the bound, never on the worker count. Chunks run serially in-process or
on a process pool, and their results are merged back in chunk order, so the
output and every aggregate are identical for any number of workers.

Two contracts are offered:

- ``enumerate_points`` streams triples in the fixed order (serial merge).
- ``fold_points`` runs a per-chunk accumulator next to the enumeration and
  merges the accumulators (census mode). Accumulators form a monoid, and
  ``merge`` must be associative.
"""

from __future__ import annotations

import logging
import math
import os
from collections import deque
from collections.abc import Callable
from collections.abc import Iterator
from collections.abc import Sequence
from concurrent.futures import Future
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from functools import reduce
from itertools import islice
from itertools import repeat
from typing import Protocol
from typing import Self

import sympy

from ._profile import ProfileContext
from .errors import ConfigError
from .errors import ContractError
from .errors import ElementParseError
from .errors import FieldMismatchError
from .fields import RATIONALS
from .fields import FieldElem
from .fields import GlobalFieldCtx
from .heights import Height12
from .heights import PowerHeight
from .heights import RationalHeight12
from .heights import WeightedTriple
from .heights import encoding_key
from .heights import height12
from .heights import normalize
from .heights import scale
from .polynomials import Poly
from .polynomials import RationalFunction
from .polynomials import poly_gcd

logger = logging.getLogger(__name__)

# Upper limit on chunks per bound; depends on nothing but the bound.
MAX_CHUNKS = 64

# Points per chunk whose predicate value is checked against a scaled copy.
SPOT_CHECKS_PER_CHUNK = 3

type RawTriple = tuple[int, int, int]


@dataclass(frozen=True, order=True, slots=True)
class RationalBound:
    """Height bound B > 0 over ℚ."""

    value: Fraction

    def __post_init__(self) -> None:
        if not isinstance(self.value, Fraction):
            raise TypeError("RationalBound.value must be a Fraction")
        if self.value <= 0:
            raise ConfigError(f"height bound must be positive, got {self}")

    @property
    def field(self) -> GlobalFieldCtx:
        return RATIONALS

    def __str__(self) -> str:
        return str(self.value)


@dataclass(frozen=True, order=True, slots=True)
class DegreeBound:
    """Height bound B = q**d over 𝔽_q(t)."""

    q: int
    d: int

    def __post_init__(self) -> None:
        if self.d < 0:
            raise ConfigError(f"degree bound must be >= 0, got {self.d}")

    @property
    def field(self) -> GlobalFieldCtx:
        return GlobalFieldCtx.function_field(self.q)

    def __str__(self) -> str:
        return f"{self.q}^{self.d}"


type HeightBound = RationalBound | DegreeBound


def parse_bound(text: str, field: GlobalFieldCtx) -> HeightBound:
    """
    Parses a bound for field.

    ℚ takes ``n``, ``n/d`` or a decimal such as ``0.5``. 𝔽_q(t) takes the
    exponent ``d`` or ``q^d``.
    """
    stripped = text.strip()
    if field.is_rationals:
        try:
            return RationalBound(Fraction(stripped))
        except (ValueError, ZeroDivisionError):
            raise ElementParseError(
                "Expecting a rational bound", text, 0
            ) from None
    q = field.modulus
    base, caret, exponent = stripped.rpartition("^")
    if caret and base.strip() != str(q):
        raise ElementParseError(
            f"Expecting a power of {q}", text, text.find(base.strip())
        )
    if not exponent.strip().isdigit():
        raise ElementParseError(
            "Expecting a nonnegative degree", text, len(text) - len(exponent)
        )
    return DegreeBound(q, int(exponent))


def bound_for(field: GlobalFieldCtx, value: int | Fraction) -> HeightBound:
    """B as a rational over ℚ, d with B = q**d over 𝔽_q(t)."""
    if field.is_rationals:
        return RationalBound(Fraction(value))
    if not isinstance(value, int):
        raise ConfigError(f"degree bound must be an integer, got {value}")
    return DegreeBound(field.modulus, value)


def within_bound(h: Height12, bound: HeightBound) -> bool:
    """Exact comparison Ht <= B (Ht**12 <= B**12 over ℚ, m <= d otherwise)."""
    match h, bound:
        case RationalHeight12(value), RationalBound(b):
            return value <= b**12
        case PowerHeight(q, exponent), DegreeBound(bq, d) if q == bq:
            return exponent <= d
    raise FieldMismatchError(
        f"height {h} cannot be compared with bound {bound}"
    )


@dataclass(frozen=True, slots=True)
class SubstackPredicate:
    """
    A decidable test on points, declared invariant under scaling.

    ``test`` may receive any representative of a point. It must be a
    module-level function for counting on more than one worker.
    """

    name: str
    test: Callable[[WeightedTriple], bool]

    def __call__(self, x: WeightedTriple) -> bool:
        return self.test(x)

    def __str__(self) -> str:
        return self.name


def _always(x: WeightedTriple) -> bool:  # noqa: ARG001
    return True


def _never(x: WeightedTriple) -> bool:  # noqa: ARG001
    return False


ALL_POINTS = SubstackPredicate("all", _always)
NO_POINTS = SubstackPredicate("none", _never)


class PointAccumulator(Protocol):
    """Census-mode accumulator: one per chunk, merged in chunk order."""

    def add(self, x: WeightedTriple) -> None: ...

    def merge(self, other: Self) -> Self: ...


@dataclass(frozen=True, slots=True)
class Chunk:
    """Contiguous range of x2 values (ℚ) or x2 encodings (𝔽_q(t))."""

    index: int
    bound: HeightBound
    lo: int
    hi: int

    def __str__(self) -> str:
        return f"chunk {self.index} (x2 in [{self.lo}, {self.hi}])"


def bound_value(bound: HeightBound) -> Fraction:
    """B as an exact rational; q**d over 𝔽_q(t)."""
    if isinstance(bound, DegreeBound):
        return Fraction(bound.q**bound.d)
    return bound.value


def resolve_workers(workers: int) -> int:
    """0 means every available CPU."""
    if workers < 0:
        raise ConfigError(f"worker count must be >= 0, got {workers}")
    return workers or os.cpu_count() or 1


def _split(bound: HeightBound, lo: int, hi: int) -> list[Chunk]:
    width = -(-(hi - lo + 1) // MAX_CHUNKS)
    return [
        Chunk(index, bound, start, min(start + width - 1, hi))
        for index, start in enumerate(range(lo, hi + 1, width))
    ]


def plan_chunks(bound: HeightBound) -> list[Chunk]:
    """Partitions the outermost coordinate; empty when B < 1."""
    if isinstance(bound, DegreeBound):
        return _split(bound, 0, bound.q ** (4 * bound.d + 1) - 1)
    if bound.value < 1:
        return []
    m2 = math.floor(bound.value**4)
    return _split(bound, -m2, m2)


@lru_cache(maxsize=64)
def _sieve_powers(limit: int) -> tuple[tuple[int, int, int], ...]:
    """(p**2, p**3, p**4) for every prime p <= limit."""
    primes = map(int, sympy.primerange(2, limit + 1))
    return tuple((p**2, p**3, p**4) for p in primes)


def _rational_chunk(chunk: Chunk) -> Iterator[RawTriple]:
    bound = chunk.bound
    assert isinstance(bound, RationalBound)
    b = bound.value
    m0, m1 = math.floor(b**2), math.floor(b**3)
    limit = math.floor(b)
    # A prime scaling out of a nonzero coordinate xi needs p**wi <= |xi|, so
    # primes above floor(B) cannot act inside the Northcott box.
    assert (limit + 1) ** 2 > m0
    assert (limit + 1) ** 3 > m1
    assert (limit + 1) ** 4 > math.floor(b**4)
    powers = _sieve_powers(limit)
    for x2 in range(chunk.lo, chunk.hi + 1):
        by_x2 = [(p2, p3) for p2, p3, p4 in powers if x2 % p4 == 0]
        for x0 in range(-m0, m0 + 1):
            cubes = [p3 for p2, p3 in by_x2 if x0 % p2 == 0]
            start = 1 if x0 == 0 and x2 == 0 else 0
            for x1 in range(start, m1 + 1):
                if cubes and any(x1 % c == 0 for c in cubes):
                    continue
                yield x0, x1, x2


def _is_unit_canonical(x0: Poly, x1: Poly, x2: Poly, q: int) -> bool:
    key = (x2.encoding(), x0.encoding(), x1.encoding())
    for c in range(2, q):
        c2 = c * c % q
        scaled = (
            x2.scale(c2 * c2).encoding(),
            x0.scale(c2).encoding(),
            x1.scale(c2 * c).encoding(),
        )
        if scaled < key:
            return False
    return True


def _is_minimal_polys(x0: Poly, x1: Poly, x2: Poly) -> bool:
    g = reduce(poly_gcd, (x for x in (x0, x1, x2) if x))
    if g.degree < 1:
        return True
    return not any(
        (pi**2).divides(x0) and (pi**3).divides(x1) and (pi**4).divides(x2)
        for pi in g.factor()
    )


def _function_field_chunk(chunk: Chunk) -> Iterator[RawTriple]:
    bound = chunk.bound
    assert isinstance(bound, DegreeBound)
    q, d = bound.q, bound.d
    polys0 = [Poly.from_encoding(e, q) for e in range(q ** (2 * d + 1))]
    polys1 = [Poly.from_encoding(e, q) for e in range(q ** (3 * d + 1))]
    for e2 in range(chunk.lo, chunk.hi + 1):
        x2 = Poly.from_encoding(e2, q)
        for e0, x0 in enumerate(polys0):
            for e1, x1 in enumerate(polys1):
                if not (e0 or e1 or e2):
                    continue
                if _is_unit_canonical(x0, x1, x2, q) and _is_minimal_polys(
                    x0, x1, x2
                ):
                    yield e0, e1, e2


def _raw_points(chunk: Chunk) -> Iterator[RawTriple]:
    if isinstance(chunk.bound, RationalBound):
        return _rational_chunk(chunk)
    return _function_field_chunk(chunk)


def _materialize(field: GlobalFieldCtx, raw: RawTriple) -> WeightedTriple:
    if field.is_rationals:
        x0, x1, x2 = (Fraction(c) for c in raw)
        return WeightedTriple(x0, x1, x2, field)
    q = field.modulus
    y0, y1, y2 = (
        RationalFunction.from_poly(Poly.from_encoding(e, q)) for e in raw
    )
    return WeightedTriple(y0, y1, y2, field)


def _chunk_points(chunk: Chunk) -> list[RawTriple]:
    """Worker entry point for the serial-merge contract."""
    try:
        with ProfileContext("enumerate_chunk"):
            return list(_raw_points(chunk))
    except Exception as e:
        e.add_note(f"in {chunk}")
        raise


def _fold_chunk[A: PointAccumulator](
    chunk: Chunk, factory: Callable[[int], A]
) -> A:
    """Worker entry point for the census contract."""
    field = chunk.bound.field
    accumulator = factory(chunk.index)
    try:
        with ProfileContext("enumerate_chunk"):
            for raw in _raw_points(chunk):
                accumulator.add(_materialize(field, raw))
    except Exception as e:
        e.add_note(f"in {chunk}")
        raise
    return accumulator


def enumerate_points(
    bound: HeightBound, *, workers: int = 1
) -> Iterator[WeightedTriple]:
    """
    Streams every point with Ht <= bound once, as its canonical triple.

    Over ℚ the Northcott box |x0| <= B**2, 0 <= x1 <= B**3, |x2| <= B**4 is
    scanned and filtered by the minimality sieve. Over 𝔽_q(t) coefficient
    vectors with deg xi <= wi*d are filtered by minimality and the unit
    condition. With one worker the stream holds one triple at a time.
    """
    field = bound.field
    chunks = plan_chunks(bound)
    logger.debug(
        "enumerating %s over %s in %d chunks", bound, field, len(chunks)
    )
    if workers <= 1 or len(chunks) <= 1:
        for chunk in chunks:
            try:
                for raw in _raw_points(chunk):
                    yield _materialize(field, raw)
            except Exception as e:
                e.add_note(f"in {chunk}")
                raise
        return
    pool = ProcessPoolExecutor(max_workers=workers)

    def submit(chunk: Chunk) -> Future[list[RawTriple]]:
        return pool.submit(_chunk_points, chunk)

    try:
        for chunk, raws in submit_in_order(submit, chunks, workers):
            logger.debug("merged %s: %d points", chunk, len(raws))
            for raw in raws:
                yield _materialize(field, raw)
    finally:
        pool.shutdown(cancel_futures=True)


def submit_in_order(
    submit: Callable[[Chunk], Future[list[RawTriple]]],
    chunks: Sequence[Chunk],
    window: int,
) -> Iterator[tuple[Chunk, list[RawTriple]]]:
    """
    Yields (chunk, points) in chunk order, keeping at most window chunks
    submitted ahead of the consumer.
    """
    if window < 1:
        raise ConfigError(f"window must be >= 1, got {window}")
    todo = iter(chunks)
    pending = deque((c, submit(c)) for c in islice(todo, window))
    while pending:
        chunk, future = pending.popleft()
        raws = future.result()
        for c in islice(todo, 1):
            pending.append((c, submit(c)))
        yield chunk, raws


def fold_points[A: PointAccumulator](
    bound: HeightBound, factory: Callable[[int], A], *, workers: int = 1
) -> A:
    """
    Census mode: runs factory(chunk index) per chunk and merges the results.

    factory must be picklable when workers > 1.
    """
    chunks = plan_chunks(bound)
    if not chunks:
        return factory(0)
    if workers <= 1 or len(chunks) == 1:
        return _merge_in_order(
            chunks, (_fold_chunk(c, factory) for c in chunks)
        )
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = pool.map(_fold_chunk, chunks, repeat(factory))
        return _merge_in_order(chunks, parts)


def _merge_in_order[A: PointAccumulator](
    chunks: list[Chunk], parts: Iterator[A]
) -> A:
    merged = next(parts)
    for chunk, part in zip(chunks[1:], parts, strict=True):
        logger.debug("merged %s", chunk)
        merged = merged.merge(part)
    return merged


@dataclass(slots=True)
class _PointCount:
    n: int = 0

    def add(self, x: WeightedTriple) -> None:  # noqa: ARG002
        self.n += 1

    def merge(self, other: _PointCount) -> _PointCount:
        return _PointCount(self.n + other.n)


def _new_point_count(index: int) -> _PointCount:  # noqa: ARG001
    return _PointCount()


def count_points(bound: HeightBound, *, workers: int = 1) -> int:
    """N(B), the exact number of points with Ht <= B."""
    return fold_points(bound, _new_point_count, workers=workers).n


def spot_check_scalars(field: GlobalFieldCtx) -> tuple[FieldElem, ...]:
    """Fixed nonzero scalars for the scaling invariance spot check."""
    if field.is_rationals:
        return (Fraction(2), Fraction(-1), Fraction(3, 2))
    t = field.generator()
    return (RationalFunction.constant(2, field.modulus), t, t + 1)


@dataclass(slots=True)
class PredicateTally:
    """Counts (n_pred, n_total) and spot-checks the predicate as it goes."""

    predicate: SubstackPredicate
    n_pred: int = 0
    n_total: int = 0
    checked: int = 0

    def add(self, x: WeightedTriple) -> None:
        holds = self.predicate(x)
        if self.checked < SPOT_CHECKS_PER_CHUNK:
            scalars = spot_check_scalars(x.field)
            lam = scalars[self.checked % len(scalars)]
            self.checked += 1
            if self.predicate(scale(x, lam)) != holds:
                raise ContractError(
                    f"predicate {self.predicate} is not scaling-invariant: "
                    f"it differs on {x} and its scaling by {lam}"
                )
        self.n_pred += holds
        self.n_total += 1

    def merge(self, other: PredicateTally) -> PredicateTally:
        return PredicateTally(
            self.predicate,
            self.n_pred + other.n_pred,
            self.n_total + other.n_total,
            self.checked + other.checked,
        )


@dataclass(frozen=True, slots=True)
class _PredicateTallyFactory:
    predicate: SubstackPredicate

    def __call__(self, index: int) -> PredicateTally:  # noqa: ARG002
        return PredicateTally(self.predicate)


def count_with_predicate(
    bound: HeightBound, pred: SubstackPredicate, *, workers: int = 1
) -> tuple[int, int]:
    """
    (n_pred, n_total) in one pass.

    Raises ContractError when a spot check finds pred(x) != pred(lam * x).
    """
    tally = fold_points(bound, _PredicateTallyFactory(pred), workers=workers)
    logger.info(
        "%s at B=%s: %d of %d points", pred, bound, tally.n_pred, tally.n_total
    )
    return tally.n_pred, tally.n_total


def _box(bound: HeightBound) -> Iterator[WeightedTriple]:
    field = bound.field
    match bound:
        case RationalBound(b):
            if b < 1:
                return
            m0, m1, m2 = (math.floor(b**w) for w in (2, 3, 4))
            for x2 in range(-m2, m2 + 1):
                for x0 in range(-m0, m0 + 1):
                    for x1 in range(-m1, m1 + 1):
                        if x0 or x1 or x2:
                            yield _materialize(field, (x0, x1, x2))
        case DegreeBound(q, d):
            for e2 in range(q ** (4 * d + 1)):
                for e0 in range(q ** (2 * d + 1)):
                    for e1 in range(q ** (3 * d + 1)):
                        if e0 or e1 or e2:
                            yield _materialize(field, (e0, e1, e2))


def naive_points(bound: HeightBound) -> list[WeightedTriple]:
    """
    Reference enumeration: every integral triple of the box, normalized and
    deduplicated, kept if its height is within the bound. Sorted in visit
    order. Slow; for cross-checking only.
    """
    seen = {normalize(x) for x in _box(bound)}
    points = [x for x in seen if within_bound(height12(x), bound)]
    points.sort(key=encoding_key)
    return points


__all__ = [
    "ALL_POINTS",
    "MAX_CHUNKS",
    "NO_POINTS",
    "Chunk",
    "DegreeBound",
    "HeightBound",
    "PointAccumulator",
    "PredicateTally",
    "RationalBound",
    "SubstackPredicate",
    "bound_for",
    "bound_value",
    "count_points",
    "count_with_predicate",
    "enumerate_points",
    "fold_points",
    "naive_points",
    "parse_bound",
    "plan_chunks",
    "resolve_workers",
    "spot_check_scalars",
    "submit_in_order",
    "within_bound",
]
