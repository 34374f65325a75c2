"""Exact scalars in Q(sqrt 2), dyadic intervals, cell sets and dyadic step functions.

Everything here is immutable.  Functions on the real line are represented as
finitely supported step functions whose cells all have the same dyadic length
``2**cell_scale``; values live in the field Q(sqrt 2), which is closed under the
arithmetic produced by L2-normalised Walsh wave packets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Union

import numpy as np

__all__ = [
    "ExactScalar",
    "SQRT2",
    "DyadicInterval",
    "CellSet",
    "StepFunction",
    "pow2",
    "half_power_of_two",
    "parse_exponent",
    "inner_product",
    "l2_norm_squared",
    "lp_norm",
    "lp_norm_exact",
    "local_lp_norm",
    "dilate_translate",
    "dilate",
]

_SQRT2_FLOAT = math.sqrt(2.0)


def pow2(k: int) -> Fraction:
    """Exact ``2**k`` for any integer ``k``."""
    return Fraction(1 << k) if k >= 0 else Fraction(1, 1 << -k)


class ExactScalar:
    """The number ``a + b*sqrt(2)`` with rational ``a`` and ``b``."""

    __slots__ = ("_a", "_b")

    def __init__(self, a: Union[int, Fraction, str] = 0, b: Union[int, Fraction, str] = 0):
        self._a = Fraction(a)
        self._b = Fraction(b)

    @classmethod
    def _raw(cls, a: Fraction, b: Fraction) -> "ExactScalar":
        obj = cls.__new__(cls)
        obj._a = a
        obj._b = b
        return obj

    @classmethod
    def coerce(cls, value) -> "ExactScalar":
        if isinstance(value, ExactScalar):
            return value
        if isinstance(value, (int, Rational)):
            return cls._raw(Fraction(value), Fraction(0))
        raise TypeError(f"cannot represent {value!r} exactly in Q(sqrt 2)")

    @property
    def a(self) -> Fraction:
        return self._a

    @property
    def b(self) -> Fraction:
        return self._b

    def is_rational(self) -> bool:
        return self._b == 0

    def __repr__(self) -> str:
        return f"ExactScalar({self._a!s}, {self._b!s})"

    def __str__(self) -> str:
        if self._b == 0:
            return str(self._a)
        if self._a == 0:
            return f"{self._b}*sqrt2"
        sign = "+" if self._b > 0 else "-"
        return f"{self._a}{sign}{abs(self._b)}*sqrt2"

    # arithmetic -------------------------------------------------------
    def __add__(self, other):
        if not isinstance(other, ExactScalar):
            if isinstance(other, (int, Rational)):
                return ExactScalar._raw(self._a + other, self._b)
            return NotImplemented
        return ExactScalar._raw(self._a + other._a, self._b + other._b)

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar._raw(-self._a, -self._b)

    def __pos__(self):
        return self

    def __sub__(self, other):
        if not isinstance(other, ExactScalar):
            if isinstance(other, (int, Rational)):
                return ExactScalar._raw(self._a - other, self._b)
            return NotImplemented
        return ExactScalar._raw(self._a - other._a, self._b - other._b)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, ExactScalar):
            if isinstance(other, (int, Rational)):
                return ExactScalar._raw(self._a * other, self._b * other)
            return NotImplemented
        a, b, c, d = self._a, self._b, other._a, other._b
        return ExactScalar._raw(a * c + 2 * b * d, a * d + b * c)

    __rmul__ = __mul__

    def conjugate(self) -> "ExactScalar":
        """Galois conjugate ``a - b*sqrt(2)``."""
        return ExactScalar._raw(self._a, -self._b)

    def field_norm(self) -> Fraction:
        """``a**2 - 2*b**2``, the product with the Galois conjugate."""
        return self._a * self._a - 2 * self._b * self._b

    def inverse(self) -> "ExactScalar":
        n = self.field_norm()
        if n == 0:
            raise ZeroDivisionError("ExactScalar division by zero")
        return ExactScalar._raw(self._a / n, -self._b / n)

    def __truediv__(self, other):
        if isinstance(other, (int, Rational)):
            if other == 0:
                raise ZeroDivisionError("ExactScalar division by zero")
            return ExactScalar._raw(self._a / other, self._b / other)
        if isinstance(other, ExactScalar):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        return ExactScalar.coerce(other) * self.inverse()

    def __pow__(self, exponent: int):
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** (-exponent)
        result = ExactScalar._raw(Fraction(1), Fraction(0))
        base = self
        while exponent:
            if exponent & 1:
                result = result * base
            base = base * base
            exponent >>= 1
        return result

    # ordering ---------------------------------------------------------
    def sign(self) -> int:
        """Exact sign, decided by integer comparisons only."""
        a, b = self._a, self._b
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a**2 with 2*b**2
        return sa if a * a > 2 * b * b else sb

    def __abs__(self):
        return -self if self.sign() < 0 else self

    def __bool__(self) -> bool:
        return self._a != 0 or self._b != 0

    def _cmp(self, other) -> int:
        return (self - ExactScalar.coerce(other)).sign()

    def __eq__(self, other) -> bool:
        if isinstance(other, ExactScalar):
            return self._a == other._a and self._b == other._b
        if isinstance(other, (int, Rational)):
            return self._b == 0 and self._a == other
        return NotImplemented

    def __hash__(self) -> int:
        if self._b == 0:
            return hash(self._a)
        return hash((self._a, self._b))

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __float__(self) -> float:
        a, b = self._a, self._b
        if b == 0:
            return float(a)
        if a == 0 or (a > 0) == (b > 0):
            return float(a) + float(b) * _SQRT2_FLOAT
        # a + b*sqrt2 = (a^2 - 2 b^2) / (a - b*sqrt2); the denominator has no cancellation
        return float(self.field_norm()) / (float(a) - float(b) * _SQRT2_FLOAT)


SQRT2 = ExactScalar(0, 1)
ZERO = ExactScalar(0, 0)
ONE = ExactScalar(1, 0)


def half_power_of_two(e: int) -> ExactScalar:
    """Exact ``2**(e/2)`` as an element of Q(sqrt 2)."""
    if e % 2 == 0:
        return ExactScalar._raw(pow2(e // 2), Fraction(0))
    return ExactScalar._raw(Fraction(0), pow2((e - 1) // 2))


def parse_exponent(p) -> Union[Fraction, float]:
    """Normalise an exponent: rationals become Fraction, infinity stays ``math.inf``."""
    if isinstance(p, str):
        s = p.strip().lower()
        if s in ("inf", "infinity", "oo"):
            return math.inf
        return Fraction(s)
    if isinstance(p, (int, Rational)):
        return Fraction(p)
    p = float(p)
    if math.isinf(p):
        return math.inf
    if p.is_integer():
        return Fraction(int(p))
    return p


# ---------------------------------------------------------------------------
# dyadic intervals and cell sets


@dataclass(frozen=True, order=True)
class DyadicInterval:
    """The half-open interval ``[n * 2**k, (n + 1) * 2**k)`` with ``n >= 0``."""

    k: int
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise ValueError(f"dyadic positions live on the half-line, got n={self.n}")

    @property
    def length(self) -> Fraction:
        return pow2(self.k)

    @property
    def left(self) -> Fraction:
        return self.n * pow2(self.k)

    @property
    def right(self) -> Fraction:
        return (self.n + 1) * pow2(self.k)

    def parent(self) -> "DyadicInterval":
        return DyadicInterval(self.k + 1, self.n >> 1)

    def ancestor(self, k: int) -> "DyadicInterval":
        if k < self.k:
            raise ValueError("ancestor must be at a coarser scale")
        return DyadicInterval(k, self.n >> (k - self.k))

    def children(self) -> tuple["DyadicInterval", "DyadicInterval"]:
        return DyadicInterval(self.k - 1, 2 * self.n), DyadicInterval(self.k - 1, 2 * self.n + 1)

    def grandchildren(self) -> tuple["DyadicInterval", ...]:
        return tuple(DyadicInterval(self.k - 2, 4 * self.n + i) for i in range(4))

    def contains(self, other: "DyadicInterval") -> bool:
        """``other`` is a subset of ``self``."""
        return other.k <= self.k and (other.n >> (self.k - other.k)) == self.n

    def intersects(self, other: "DyadicInterval") -> bool:
        return self.contains(other) or other.contains(self)

    def cell_range(self, c: int) -> range:
        """Positions of the scale-``c`` cells making up this interval (``c <= k``)."""
        if c > self.k:
            raise ValueError("cell scale must not exceed the interval scale")
        d = self.k - c
        return range(self.n << d, (self.n + 1) << d)

    def to_json(self) -> list:
        return [self.k, self.n]


@dataclass(frozen=True)
class CellSet:
    """A finite union of dyadic cells of length ``2**scale``."""

    scale: int
    positions: frozenset

    def __post_init__(self):
        if not isinstance(self.positions, frozenset):
            object.__setattr__(self, "positions", frozenset(self.positions))

    @classmethod
    def empty(cls) -> "CellSet":
        return cls(0, frozenset())

    @classmethod
    def from_intervals(cls, intervals: Iterable[DyadicInterval], scale: int | None = None) -> "CellSet":
        intervals = list(intervals)
        if not intervals:
            return cls.empty()
        if scale is None:
            scale = min(I.k for I in intervals)
        pos = set()
        for I in intervals:
            pos.update(I.cell_range(scale))
        return cls(scale, frozenset(pos))

    @property
    def measure(self) -> Fraction:
        return len(self.positions) * pow2(self.scale)

    def __bool__(self) -> bool:
        return bool(self.positions)

    def __len__(self) -> int:
        return len(self.positions)

    def refine(self, scale: int) -> "CellSet":
        if scale > self.scale:
            raise ValueError("can only refine to a finer scale")
        d = self.scale - scale
        return CellSet(scale, frozenset(q for p in self.positions for q in range(p << d, (p + 1) << d)))

    def canonical(self) -> "CellSet":
        """Coarsest-scale representation; equal sets have equal canonical forms."""
        if not self.positions:
            return CellSet.empty()
        scale, pos = self.scale, self.positions
        while all((p ^ 1) in pos for p in pos):
            pos = frozenset(p >> 1 for p in pos)
            scale += 1
        return CellSet(scale, pos)

    def __eq__(self, other) -> bool:
        if not isinstance(other, CellSet):
            return NotImplemented
        a, b = self.canonical(), other.canonical()
        return a.scale == b.scale and a.positions == b.positions

    def __hash__(self) -> int:
        c = self.canonical()
        return hash((c.scale, c.positions))

    def _common(self, other: "CellSet") -> tuple["CellSet", "CellSet"]:
        if not self.positions:
            return CellSet(other.scale, frozenset()), other
        if not other.positions:
            return self, CellSet(self.scale, frozenset())
        s = min(self.scale, other.scale)
        return self.refine(s), other.refine(s)

    def union(self, other: "CellSet") -> "CellSet":
        a, b = self._common(other)
        return CellSet(a.scale, a.positions | b.positions)

    __or__ = union

    def intersection(self, other: "CellSet") -> "CellSet":
        a, b = self._common(other)
        return CellSet(a.scale, a.positions & b.positions)

    __and__ = intersection

    def difference(self, other: "CellSet") -> "CellSet":
        a, b = self._common(other)
        return CellSet(a.scale, a.positions - b.positions)

    __sub__ = difference

    def contains_interval(self, I: DyadicInterval) -> bool:
        """Is ``I`` (up to measure zero) a subset of this set?"""
        if not self.positions:
            return False
        if I.k >= self.scale:
            return all(p in self.positions for p in I.cell_range(self.scale))
        return (I.n >> (self.scale - I.k)) in self.positions

    def meets_interval(self, I: DyadicInterval) -> bool:
        """Does ``I`` intersect this set in positive measure?"""
        if not self.positions:
            return False
        if I.k >= self.scale:
            r = I.cell_range(self.scale)
            if len(r) < len(self.positions):
                return any(p in self.positions for p in r)
            return any(p in r for p in self.positions)
        return (I.n >> (self.scale - I.k)) in self.positions

    def maximal_intervals(self) -> list[DyadicInterval]:
        """Maximal dyadic intervals contained in the set, sorted."""
        level = set(self.positions)
        k = self.scale
        out = []
        while level:
            merged = {p >> 1 for p in level if (p ^ 1) in level}
            for p in level:
                if (p >> 1) not in merged:
                    out.append(DyadicInterval(k, p))
            level = merged
            k += 1
        return sorted(out, key=lambda I: (I.left, -I.k))

    def intervals(self) -> list[DyadicInterval]:
        return [DyadicInterval(self.scale, p) for p in sorted(self.positions)]

    def indicator(self) -> "StepFunction":
        return StepFunction(self.scale, {p: 1 for p in self.positions})

    def to_json(self) -> dict:
        return {"scale": self.scale, "positions": sorted(self.positions)}


# ---------------------------------------------------------------------------
# step functions


@dataclass(frozen=True)
class IntView:
    """Dense integer image of a step function over its hull.

    Cell ``start + i`` carries the value ``(a[i] + b[i]*sqrt2) / den``.  Arrays use
    ``int64`` when every partial sum provably fits, otherwise Python integers.
    """

    start: int
    den: int
    a: np.ndarray
    b: np.ndarray | None

    @property
    def stop(self) -> int:
        return self.start + len(self.a)


_INT64_SAFE = 1 << 62


def _int_array(values: list[int]) -> np.ndarray:
    if not values:
        return np.zeros(0, dtype=np.int64)
    bound = max(abs(v) for v in values) * len(values)
    if bound < _INT64_SAFE:
        return np.array(values, dtype=np.int64)
    return np.array(values, dtype=object)


class StepFunction:
    """Finitely supported function, constant on the cells ``[p*2**c, (p+1)*2**c)``.

    Absent positions mean zero.  Two step functions are equal when they agree
    after refinement to a common cell scale.
    """

    __slots__ = ("_scale", "_cells", "_view", "_canon")

    def __init__(self, cell_scale: int, cells: Mapping[int, object] | None = None):
        self._scale = int(cell_scale)
        clean = {}
        for pos, val in (cells or {}).items():
            if not isinstance(pos, int) or isinstance(pos, bool):
                raise TypeError(f"cell positions must be integers, got {pos!r}")
            if pos < 0:
                raise ValueError(f"cell positions live on the half-line, got {pos}")
            v = ExactScalar.coerce(val)
            if v:
                clean[pos] = v
        self._cells = clean
        self._view = None
        self._canon = None

    @classmethod
    def _trusted(cls, cell_scale: int, cells: dict) -> "StepFunction":
        obj = cls.__new__(cls)
        obj._scale = cell_scale
        obj._cells = cells
        obj._view = None
        obj._canon = None
        return obj

    @classmethod
    def zero(cls, cell_scale: int = 0) -> "StepFunction":
        return cls._trusted(cell_scale, {})

    @classmethod
    def indicator(cls, intervals: DyadicInterval | Iterable[DyadicInterval], cell_scale: int | None = None) -> "StepFunction":
        if isinstance(intervals, DyadicInterval):
            intervals = [intervals]
        return CellSet.from_intervals(intervals, cell_scale).indicator()

    @classmethod
    def from_values(cls, cell_scale: int, start: int, values: Iterable) -> "StepFunction":
        return cls(cell_scale, {start + i: v for i, v in enumerate(values)})

    @classmethod
    def from_int_arrays(cls, cell_scale: int, start: int, a, b, den: int) -> "StepFunction":
        """Build from integer numerators over a common denominator."""
        cells = {}
        den = int(den)
        if b is None:
            for i, x in enumerate(a):
                x = int(x)
                if x:
                    cells[start + i] = ExactScalar._raw(Fraction(x, den), Fraction(0))
        else:
            for i, (x, y) in enumerate(zip(a, b)):
                x, y = int(x), int(y)
                if x or y:
                    cells[start + i] = ExactScalar._raw(Fraction(x, den), Fraction(y, den))
        return cls._trusted(cell_scale, cells)

    # basic accessors ----------------------------------------------------
    @property
    def cell_scale(self) -> int:
        return self._scale

    @property
    def cells(self) -> Mapping[int, ExactScalar]:
        return MappingProxyType(self._cells)

    @property
    def cell_length(self) -> Fraction:
        return pow2(self._scale)

    def __len__(self) -> int:
        return len(self._cells)

    def __bool__(self) -> bool:
        return bool(self._cells)

    def __iter__(self) -> Iterator[tuple[int, ExactScalar]]:
        return iter(sorted(self._cells.items()))

    def __repr__(self) -> str:
        return f"StepFunction(cell_scale={self._scale}, cells={len(self._cells)})"

    def value_at_cell(self, pos: int) -> ExactScalar:
        return self._cells.get(pos, ZERO)

    def value_at(self, x) -> ExactScalar:
        """Value at the real point ``x >= 0``."""
        pos = math.floor(Fraction(x) / self.cell_length)
        return self._cells.get(pos, ZERO)

    def support(self) -> CellSet:
        return CellSet(self._scale, frozenset(self._cells))

    def hull(self) -> DyadicInterval | None:
        """Smallest dyadic interval containing the support."""
        if not self._cells:
            return None
        lo, hi = min(self._cells), max(self._cells)
        k = self._scale
        while lo != hi:
            lo >>= 1
            hi >>= 1
            k += 1
        return DyadicInterval(k, lo)

    def is_rational(self) -> bool:
        return all(v.b == 0 for v in self._cells.values())

    # refinement and canonical form -----------------------------------------
    def refine(self, cell_scale: int) -> "StepFunction":
        if cell_scale == self._scale:
            return self
        if cell_scale > self._scale:
            raise ValueError("refinement must go to a finer scale")
        d = self._scale - cell_scale
        cells = {}
        for p, v in self._cells.items():
            base = p << d
            for q in range(base, base + (1 << d)):
                cells[q] = v
        return StepFunction._trusted(cell_scale, cells)

    def canonical(self) -> "StepFunction":
        """Coarsest cell scale representing the same function."""
        if self._canon is not None:
            return self._canon
        scale, cells = self._scale, self._cells
        while cells and all(cells.get(p ^ 1) == v for p, v in cells.items()):
            cells = {p >> 1: v for p, v in cells.items() if not p & 1}
            scale += 1
        if not cells:
            scale = 0
        self._canon = StepFunction._trusted(scale, dict(cells))
        self._canon._canon = self._canon
        return self._canon

    def __eq__(self, other) -> bool:
        if not isinstance(other, StepFunction):
            return NotImplemented
        a, b = self.canonical(), other.canonical()
        return a._scale == b._scale and a._cells == b._cells

    def __hash__(self) -> int:
        c = self.canonical()
        return hash((c._scale, frozenset(c._cells.items())))

    # algebra ------------------------------------------------------------
    def _aligned(self, other: "StepFunction") -> tuple["StepFunction", "StepFunction"]:
        c = min(self._scale, other._scale)
        return self.refine(c), other.refine(c)

    def __add__(self, other: "StepFunction") -> "StepFunction":
        if not isinstance(other, StepFunction):
            return NotImplemented
        if not other._cells:
            return self
        if not self._cells:
            return other
        f, g = self._aligned(other)
        cells = dict(f._cells)
        for p, v in g._cells.items():
            w = cells.get(p)
            w = v if w is None else w + v
            if w:
                cells[p] = w
            else:
                cells.pop(p, None)
        return StepFunction._trusted(f._scale, cells)

    def __neg__(self) -> "StepFunction":
        return StepFunction._trusted(self._scale, {p: -v for p, v in self._cells.items()})

    def __sub__(self, other: "StepFunction") -> "StepFunction":
        if not isinstance(other, StepFunction):
            return NotImplemented
        return self + (-other)

    def scale(self, lam) -> "StepFunction":
        lam = ExactScalar.coerce(lam)
        if not lam:
            return StepFunction.zero(self._scale)
        return StepFunction._trusted(self._scale, {p: v * lam for p, v in self._cells.items()})

    def __mul__(self, other):
        if isinstance(other, StepFunction):
            return self.multiply(other)
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def __rmul__(self, other):
        try:
            return self.scale(other)
        except TypeError:
            return NotImplemented

    def multiply(self, other: "StepFunction") -> "StepFunction":
        f, g = self._aligned(other)
        cells = {}
        small, big = (f, g) if len(f._cells) <= len(g._cells) else (g, f)
        for p, v in small._cells.items():
            w = big._cells.get(p)
            if w is not None:
                cells[p] = v * w
        return StepFunction._trusted(f._scale, cells)

    def restrict(self, where: DyadicInterval | CellSet) -> "StepFunction":
        """Multiply by the indicator of a dyadic interval or a cell set."""
        if isinstance(where, DyadicInterval):
            if where.k >= self._scale:
                r = where.cell_range(self._scale)
                return StepFunction._trusted(self._scale, {p: v for p, v in self._cells.items() if p in r})
            v = self._cells.get(where.n >> (self._scale - where.k))
            return StepFunction._trusted(where.k, {} if v is None else {where.n: v})
        if not where.positions:
            return StepFunction.zero(self._scale)
        if where.scale >= self._scale:
            d = where.scale - self._scale
            return StepFunction._trusted(self._scale, {p: v for p, v in self._cells.items() if (p >> d) in where.positions})
        return self.refine(where.scale).restrict(where)

    def abs(self) -> "StepFunction":
        return StepFunction._trusted(self._scale, {p: abs(v) for p, v in self._cells.items()})

    def map_values(self, fn) -> "StepFunction":
        return StepFunction(self._scale, {p: fn(v) for p, v in self._cells.items()})

    # dense views ----------------------------------------------------------
    def int_view(self) -> IntView:
        """Dense integer image over ``[min position, max position]`` (cached)."""
        if self._view is not None:
            return self._view
        if not self._cells:
            self._view = IntView(0, 1, np.zeros(0, dtype=np.int64), None)
            return self._view
        lo, hi = min(self._cells), max(self._cells)
        den = 1
        for v in self._cells.values():
            den = math.lcm(den, v.a.denominator, v.b.denominator)
        n = hi - lo + 1
        a = [0] * n
        b = [0] * n
        has_b = False
        for p, v in self._cells.items():
            a[p - lo] = v.a.numerator * (den // v.a.denominator)
            if v.b:
                has_b = True
                b[p - lo] = v.b.numerator * (den // v.b.denominator)
        self._view = IntView(lo, den, _int_array(a), _int_array(b) if has_b else None)
        return self._view

    def to_array(self, start: int, stop: int, cell_scale: int | None = None) -> np.ndarray:
        """Float samples on cells ``start..stop-1`` at ``cell_scale`` (default: own scale)."""
        f = self if cell_scale is None else self.refine(cell_scale)
        out = np.zeros(stop - start, dtype=float)
        for p, v in f._cells.items():
            if start <= p < stop:
                out[p - start] = float(v)
        return out

    # serialisation --------------------------------------------------------
    def to_json(self) -> dict:
        cells = []
        for p, v in sorted(self._cells.items()):
            cells.append([str(p), str(v.a.numerator), str(v.a.denominator), str(v.b.numerator), str(v.b.denominator)])
        return {"cell_scale": self._scale, "cells": cells}

    @classmethod
    def from_json(cls, obj) -> "StepFunction":
        """Inverse of :meth:`to_json`; raises ``ValueError`` naming the offending entry."""
        if not isinstance(obj, dict):
            raise ValueError("step function: expected a JSON object")
        if "cell_scale" not in obj or "cells" not in obj:
            raise ValueError("step function: missing 'cell_scale' or 'cells'")
        try:
            scale = int(obj["cell_scale"])
        except (TypeError, ValueError):
            raise ValueError("step function: 'cell_scale' must be an integer") from None
        if not isinstance(obj["cells"], list):
            raise ValueError("step function: 'cells' must be a list")
        cells = {}
        for i, row in enumerate(obj["cells"]):
            where = f"step function: cells[{i}]"
            if not isinstance(row, list) or len(row) != 5:
                raise ValueError(f"{where}: expected [position, a_num, a_den, b_num, b_den]")
            try:
                pos, an, ad, bn, bd = (int(x) for x in row)
            except (TypeError, ValueError):
                raise ValueError(f"{where}: entries must be decimal integers") from None
            if ad == 0 or bd == 0:
                raise ValueError(f"{where}: zero denominator")
            if pos < 0:
                raise ValueError(f"{where}: negative position")
            if pos in cells:
                raise ValueError(f"{where}: duplicate position {pos}")
            cells[pos] = ExactScalar(Fraction(an, ad), Fraction(bn, bd))
        return cls(scale, cells)


# ---------------------------------------------------------------------------
# inner products and norms


def _sum_scalars(values: Iterable[ExactScalar]) -> ExactScalar:
    a = Fraction(0)
    b = Fraction(0)
    for v in values:
        a += v.a
        b += v.b
    return ExactScalar._raw(a, b)


def inner_product(f: StepFunction, g: StepFunction) -> ExactScalar:
    """Exact ``<f, g>``; values are real so no conjugation is needed."""
    if not f._cells or not g._cells:
        return ZERO
    if f._scale > g._scale:
        f, g = g, f
    # f is at the finer scale; group its cells under g's cells
    d = g._scale - f._scale
    gc = g._cells
    acc = {}
    for p, v in f._cells.items():
        q = p >> d
        if q in gc:
            w = acc.get(q)
            acc[q] = v if w is None else w + v
    total = _sum_scalars(acc[q] * gc[q] for q in acc)
    return total * pow2(f._scale)


def _exact_dot(x: np.ndarray, y: np.ndarray) -> int:
    """Integer dot product, in int64 only when no partial sum can overflow."""
    if not len(x):
        return 0
    if x.dtype != object and y.dtype != object:
        bound = int(np.max(np.abs(x))) * int(np.max(np.abs(y))) * len(x)
        if bound < _INT64_SAFE:
            return int(np.dot(x, y))
    return int(np.dot(x.astype(object), y.astype(object)))


def l2_norm_squared(f: StepFunction) -> ExactScalar:
    if not f._cells:
        return ZERO
    # (a + b sqrt2)**2 = a**2 + 2 b**2 + 2 a b sqrt2, summed over the integer view
    view = f.int_view()
    scale = pow2(f._scale) / (view.den * view.den)
    ra = _exact_dot(view.a, view.a)
    rb = 0
    if view.b is not None:
        ra += 2 * _exact_dot(view.b, view.b)
        rb = 2 * _exact_dot(view.a, view.b)
    return ExactScalar._raw(ra * scale, rb * scale)


def lp_norm_exact(f: StepFunction, p) -> ExactScalar:
    """Exact ``||f||_1``, ``||f||_inf`` or ``||f||_2**2`` (for ``p = 2``)."""
    p = parse_exponent(p)
    if p == 1:
        return _sum_scalars(abs(v) for v in f._cells.values()) * pow2(f._scale)
    if p == 2:
        return l2_norm_squared(f)
    if p == math.inf:
        return max((abs(v) for v in f._cells.values()), default=ZERO)
    raise ValueError("exact norms are available for p in {1, 2, inf}")


def _check_exponent(p):
    p = parse_exponent(p)
    if p <= 0:
        raise ValueError(f"exponent must be positive, got {p}")
    return p


def lp_norm(f: StepFunction, p) -> float:
    """``||f||_p``; exact up to the final root for ``p`` in {1, 2, inf}."""
    p = _check_exponent(p)
    if p == 1 or p == math.inf:
        return float(lp_norm_exact(f, p))
    if p == 2:
        return math.sqrt(float(l2_norm_squared(f)))
    pf = float(p)
    total = sum(abs(float(v)) ** pf for v in f._cells.values()) * float(pow2(f._scale))
    return total ** (1.0 / pf)


def local_lp_norm(f: StepFunction, I: DyadicInterval, p) -> float:
    """Normalised ``(|I|**-1 * int_I |f|**p)**(1/p)``; ``p = inf`` gives the sup over ``I``."""
    p = _check_exponent(p)
    g = f.restrict(I)
    if p == math.inf:
        return float(lp_norm_exact(g, p))
    if p == 1:
        return float(lp_norm_exact(g, 1) / I.length)
    if p == 2:
        return math.sqrt(float(l2_norm_squared(g) / I.length))
    pf = float(p)
    total = sum(abs(float(v)) ** pf for v in g._cells.values()) * float(pow2(g._scale))
    return (total / float(I.length)) ** (1.0 / pf)


def dilate_translate(f: StepFunction, scale_exp: int, shift_cells: int = 0, normalization=2) -> StepFunction:
    """``x -> 2**(-scale_exp/p) f((x - shift) / 2**scale_exp)``.

    The dilation factor is ``2**scale_exp`` and the shift is ``shift_cells`` cells of
    the target scale ``cell_scale + scale_exp``.  ``normalization`` selects the
    preserved L^p norm; exact scaling requires ``p`` in {1, 2, inf}.
    """
    if not isinstance(scale_exp, int) or not isinstance(shift_cells, int):
        raise TypeError("scale_exp and shift_cells must be integers")
    p = _check_exponent(normalization)
    if p == 1:
        factor = ExactScalar._raw(pow2(-scale_exp), Fraction(0))
    elif p == 2:
        factor = half_power_of_two(-scale_exp)
    elif p == math.inf:
        factor = ONE
    else:
        raise ValueError("exact dilation supports normalization in {1, 2, inf}")
    cells = {}
    for pos, v in f._cells.items():
        q = pos + shift_cells
        if q < 0:
            raise ValueError("translation would leave the half-line")
        cells[q] = v * factor
    return StepFunction._trusted(f._scale + scale_exp, cells)


def dilate(f: StepFunction, factor, normalization=2) -> StepFunction:
    """Dilate by ``factor``, which must be an exact power of two."""
    fr = Fraction(factor)
    if fr <= 0:
        raise ValueError("dilation factor must be positive")
    num, den = fr.numerator, fr.denominator
    if num & (num - 1) or den & (den - 1):
        raise ValueError(f"dilation factor {factor} is not a power of 2")
    e = num.bit_length() - den.bit_length()
    return dilate_translate(f, e, 0, normalization)
