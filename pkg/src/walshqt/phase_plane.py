"""Tiles, quartiles, the Fefferman order, convexity and shadows in the phase plane."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .dyadic import DyadicInterval, pow2

__all__ = [
    "Tile",
    "Quartile",
    "Rectangle",
    "fefferman_le",
    "grandchildren",
    "in_qt1",
    "is_convex",
    "convex_hull",
    "convex_violation",
    "intermediates",
    "Region",
    "shadow",
    "quartile_key",
    "canonical_order",
    "disjoint",
]


@dataclass(frozen=True, order=True)
class Rectangle:
    """Dyadic rectangle ``space x freq``."""

    space: DyadicInterval
    freq: DyadicInterval

    def __post_init__(self):
        # subclasses check their area here; the generated __init__ only calls a hook defined on this class
        pass

    @property
    def area_exp(self) -> int:
        return self.space.k + self.freq.k

    def contains(self, other: "Rectangle") -> bool:
        return self.space.contains(other.space) and self.freq.contains(other.freq)

    def intersects(self, other: "Rectangle") -> bool:
        return self.space.intersects(other.space) and self.freq.intersects(other.freq)

    def to_json(self) -> dict:
        return {"space": self.space.to_json(), "freq": self.freq.to_json()}

    def __repr__(self) -> str:
        return f"{type(self).__name__}(space=({self.space.k},{self.space.n}), freq=({self.freq.k},{self.freq.n}))"


class Tile(Rectangle):
    """Dyadic rectangle of area 1."""

    def __post_init__(self):
        if self.area_exp != 0:
            raise ValueError(f"tile must have area 1, got 2^{self.area_exp}")

    @classmethod
    def make(cls, k: int, n: int, m: int) -> "Tile":
        """Tile ``[n 2**k, (n+1) 2**k) x [m 2**-k, (m+1) 2**-k)``."""
        return cls(DyadicInterval(k, n), DyadicInterval(-k, m))

    @classmethod
    def from_json(cls, obj) -> "Tile":
        return cls(*_parse_rect(obj, "tile"))


class Quartile(Rectangle):
    """Dyadic rectangle of area 4."""

    def __post_init__(self):
        if self.area_exp != 2:
            raise ValueError(f"quartile must have area 4, got 2^{self.area_exp}")

    @classmethod
    def make(cls, k: int, n: int, m: int) -> "Quartile":
        """Quartile ``[n 2**k, (n+1) 2**k) x [m 2**(2-k), (m+1) 2**(2-k))``."""
        return cls(DyadicInterval(k, n), DyadicInterval(2 - k, m))

    @property
    def k(self) -> int:
        return self.space.k

    def frequency_grandchildren(self) -> tuple[Tile, Tile, Tile, Tile]:
        """``s_1 .. s_4``: ``I_s`` times the four dyadic quarters of ``omega_s``."""
        return tuple(Tile(self.space, w) for w in self.freq.grandchildren())

    def spatial_grandchildren(self) -> tuple[Tile, Tile, Tile, Tile]:
        """``s^1 .. s^4``: the four quarters of ``I_s`` times ``omega_s``."""
        return tuple(Tile(I, self.freq) for I in self.space.grandchildren())

    def grandchild(self, j: int) -> Tile:
        return self.frequency_grandchildren()[j - 1]

    @classmethod
    def from_json(cls, obj) -> "Quartile":
        return cls(*_parse_rect(obj, "quartile"))


def _parse_rect(obj, what: str) -> tuple[DyadicInterval, DyadicInterval]:
    try:
        (k, n), (kk, m) = obj["space"], obj["freq"]
        return DyadicInterval(int(k), int(n)), DyadicInterval(int(kk), int(m))
    except (KeyError, TypeError, ValueError) as exc:
        raise ValueError(f"malformed {what}: {obj!r} ({exc})") from None


def grandchildren(s: Quartile, kind: str = "frequency") -> tuple[Tile, ...]:
    if kind == "frequency":
        return s.frequency_grandchildren()
    if kind == "spatial":
        return s.spatial_grandchildren()
    raise ValueError(f"unknown grandchild kind {kind!r}")


def fefferman_le(s: Rectangle, t: Rectangle) -> bool:
    """``s << t``: ``I_s`` inside ``I_t`` and ``omega_s`` containing ``omega_t``."""
    return t.space.contains(s.space) and s.freq.contains(t.freq)


def in_qt1(s: Quartile) -> bool:
    """Scale-separated class: even spatial scale exponent."""
    return s.space.k % 2 == 0


def disjoint(s: Rectangle, t: Rectangle) -> bool:
    return not s.intersects(t)


def quartile_key(s: Rectangle) -> tuple[int, int, int, int]:
    """Deterministic order: smaller ``|I_s|`` first, then spatial and frequency position."""
    return (s.space.k, s.space.n, s.freq.n, s.freq.k)


def canonical_order(S: Iterable[Rectangle]) -> list:
    return sorted(S, key=quartile_key)


def intermediates(s: Quartile, t: Quartile) -> list[Quartile]:
    """All Qt1 quartiles strictly between ``s << t`` at scales strictly in between.

    At each admissible scale the intermediate is unique: the ancestor of ``I_s``
    paired with the ancestor of ``omega_t``.
    """
    if not fefferman_le(s, t):
        return []
    out = []
    k0 = s.space.k + 1
    k0 += k0 % 2
    for k in range(k0, t.space.k, 2):
        out.append(Quartile(s.space.ancestor(k), t.freq.ancestor(2 - k)))
    return out


def convex_violation(S: Iterable[Quartile]) -> tuple[Quartile, Quartile, Quartile] | None:
    """A triple ``s << s' << s''`` with ``s, s''`` in ``S`` and ``s'`` missing, if any."""
    S = set(S)
    members = canonical_order(S)
    for s in members:
        for t in members:
            if t.space.k - s.space.k < 4:
                continue
            for mid in intermediates(s, t):
                if mid not in S:
                    return s, mid, t
    return None


def is_convex(S: Iterable[Quartile]) -> bool:
    S = set(S)
    for s in S:
        if not in_qt1(s):
            raise ValueError(f"{s!r} is not in Qt1")
    return convex_violation(S) is None


def convex_hull(S: Iterable[Quartile]) -> frozenset:
    """Smallest convex superset.

    One pass over the original pairs suffices: an intermediate between two added
    quartiles is already an intermediate of the original pair that produced them.
    """
    S = set(S)
    members = list(S)
    out = set(S)
    for s in members:
        for t in members:
            out.update(intermediates(s, t))
    return frozenset(out)


@dataclass(frozen=True)
class Region:
    """Finite union of dyadic rectangles, stored as atoms on the coarsest grid.

    Atoms are pairs ``(i, j)`` meaning ``[i 2**xs, (i+1) 2**xs) x [j 2**ws, (j+1) 2**ws)``.
    The coarsest grid on which a set is a union of atoms is unique, so two regions
    are equal exactly when their fields are.
    """

    xs: int
    ws: int
    atoms: frozenset

    @classmethod
    def from_rectangles(cls, rects: Iterable[Rectangle]) -> "Region":
        rects = list(rects)
        if not rects:
            return cls(0, 0, frozenset())
        xs = min(r.space.k for r in rects)
        ws = min(r.freq.k for r in rects)
        atoms = set()
        for r in rects:
            for i in r.space.cell_range(xs):
                for j in r.freq.cell_range(ws):
                    atoms.add((i, j))
        return cls._canonical(xs, ws, atoms)

    @classmethod
    def _canonical(cls, xs: int, ws: int, atoms: set) -> "Region":
        if not atoms:
            return cls(0, 0, frozenset())
        changed = True
        while changed:
            changed = False
            if all((i ^ 1, j) in atoms for i, j in atoms):
                atoms = {(i >> 1, j) for i, j in atoms}
                xs += 1
                changed = True
            if all((i, j ^ 1) in atoms for i, j in atoms):
                atoms = {(i, j >> 1) for i, j in atoms}
                ws += 1
                changed = True
        return cls(xs, ws, frozenset(atoms))

    @property
    def area(self) -> Fraction:
        return len(self.atoms) * pow2(self.xs + self.ws)

    def __or__(self, other: "Region") -> "Region":
        if not self.atoms:
            return other
        if not other.atoms:
            return self
        xs, ws = min(self.xs, other.xs), min(self.ws, other.ws)
        return Region._canonical(xs, ws, self._refined(xs, ws) | other._refined(xs, ws))

    def _refined(self, xs: int, ws: int) -> set:
        dx, dw = self.xs - xs, self.ws - ws
        return {
            (i2, j2)
            for i, j in self.atoms
            for i2 in range(i << dx, (i + 1) << dx)
            for j2 in range(j << dw, (j + 1) << dw)
        }

    def to_json(self) -> dict:
        return {"space_scale": self.xs, "freq_scale": self.ws, "atoms": sorted(self.atoms)}


def shadow(S: Iterable[Rectangle]) -> Region:
    """``sh(S)``: the union of the rectangles of ``S``."""
    return Region.from_rectangles(S)
