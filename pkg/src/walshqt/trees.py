"""Trees of quartiles, j-tree classification, disjointification and phase-space projections."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping

from .dyadic import StepFunction
from .phase_plane import (
    Quartile,
    Tile,
    canonical_order,
    convex_violation,
    fefferman_le,
    in_qt1,
    quartile_key,
)
from .walsh import packet_coefficient, synthesize

__all__ = [
    "Tree",
    "Classification",
    "classify",
    "j_index",
    "disjointify",
    "check_pairwise_disjoint",
    "check_spatial_property",
    "project_tiles",
    "project_tree",
    "project_quartile",
    "stars",
]


@dataclass(frozen=True)
class Tree:
    """Quartiles ``members``, all ``<< top``; the top itself may or may not be a member."""

    top: Quartile
    members: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        if not isinstance(self.members, frozenset):
            object.__setattr__(self, "members", frozenset(self.members))
        for s in self.members:
            if not fefferman_le(s, self.top):
                raise ValueError(f"{s!r} is not below the top {self.top!r}")

    @property
    def I(self):
        return self.top.space

    @property
    def omega(self):
        return self.top.freq

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(canonical_order(self.members))

    def restrict(self, keep: Iterable[Quartile]) -> "Tree":
        return Tree(self.top, self.members & frozenset(keep))

    def to_json(self) -> dict:
        return {"top": self.top.to_json(), "members": [s.to_json() for s in self]}

    @classmethod
    def from_json(cls, obj) -> "Tree":
        try:
            return cls(Quartile.from_json(obj["top"]), frozenset(Quartile.from_json(m) for m in obj["members"]))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed tree: {exc}") from None


def j_index(s: Quartile, top: Quartile) -> int | None:
    """The ``j`` with ``omega_T`` inside ``omega_{s_j}``, or ``None`` (e.g. for ``s = top``)."""
    if s.freq.k - 2 < top.freq.k:
        return None
    w = top.freq.ancestor(s.freq.k - 2)
    if not s.freq.contains(w):
        return None
    return w.n - 4 * s.freq.n + 1


@dataclass(frozen=True)
class Classification:
    """``tag`` is 1..4, ``"all"`` (nothing below the top) or ``"mixed"``.

    ``parts[j]`` is ``T_j = {s in T : omega_{s_j} contains omega_T}``; the top is in no part.
    """

    tag: object
    parts: Mapping[int, frozenset]

    def is_j_tree(self, j: int) -> bool:
        return self.tag == "all" or self.tag == j


def classify(T: Tree) -> Classification:
    parts = {j: set() for j in range(1, 5)}
    for s in T.members:
        j = j_index(s, T.top)
        if j is not None:
            parts[j].add(s)
    parts = {j: frozenset(v) for j, v in parts.items()}
    used = [j for j in range(1, 5) if parts[j]]
    if not used:
        tag = "all"
    elif len(used) == 1:
        tag = used[0]
    else:
        tag = "mixed"
    return Classification(tag, parts)


def stars(S: Iterable[Quartile]) -> frozenset:
    """All frequency and spatial grandchildren of the quartiles in ``S``."""
    out = set()
    for s in S:
        out.update(s.frequency_grandchildren())
        out.update(s.spatial_grandchildren())
    return frozenset(out)


def _validate(T: Tree, j: int) -> None:
    if j not in (1, 2, 3, 4):
        raise ValueError(f"j must be in 1..4, got {j}")
    for s in T.members:
        if not in_qt1(s):
            raise ValueError(f"{s!r} is not in Qt1")
    if not classify(T).is_j_tree(j):
        raise ValueError(f"tree is not a {j}-tree")
    bad = convex_violation(T.members)
    if bad is not None:
        raise ValueError(f"tree is not convex: {bad[1]!r} is missing between {bad[0]!r} and {bad[2]!r}")


def disjointify(T: Tree, j: int, validate: bool = True) -> frozenset:
    """Pairwise disjoint tiles ``T'`` with the same shadow as a convex ``j``-tree.

    Quartiles are peeled off in ``<<``-minimal order (ties by :func:`quartile_key`)
    and the tile family is rebuilt in reverse.  When ``s`` sits directly below
    ``sigma`` (``|I_sigma| = 4|I_s|``) the frequency grandchildren of ``sigma``
    are traded for its spatial grandchildren; the one above ``I_s`` coincides with
    ``s_j`` so the union stays disjoint.
    """
    if validate:
        _validate(T, j)
    members = set(T.members)
    tiles: set = set()
    for s in reversed(canonical_order(members)):
        parent = Quartile(s.space.ancestor(s.space.k + 2), s.freq.grandchildren()[j - 1])
        if parent in members:
            tiles.difference_update(parent.frequency_grandchildren())
            tiles.update(parent.spatial_grandchildren())
        tiles.update(s.frequency_grandchildren())
    return frozenset(tiles)


def check_pairwise_disjoint(tiles: Iterable[Tile]) -> tuple[Tile, Tile] | None:
    """First intersecting pair, or ``None``."""
    tiles = sorted(tiles, key=quartile_key)
    for a_i, a in enumerate(tiles):
        for b in tiles[a_i + 1 :]:
            if a.intersects(b):
                return a, b
    return None


def check_spatial_property(tiles: Iterable[Tile], members: Iterable[Quartile]) -> tuple[Tile, Tile] | None:
    """Spatially overlapping tiles must be frequency grandchildren of one member.

    Returns the first offending pair, or ``None``.
    """
    members = set(members)
    tiles = sorted(tiles, key=quartile_key)
    for a_i, a in enumerate(tiles):
        for b in tiles[a_i + 1 :]:
            if not a.space.intersects(b.space):
                continue
            if a.space != b.space or a.freq.parent().parent() != b.freq.parent().parent():
                return a, b
            if Quartile(a.space, a.freq.parent().parent()) not in members:
                return a, b
    return None


def project_tiles(tiles: Iterable[Tile], f: StepFunction) -> StepFunction:
    """``sum <f, w_s> w_s`` over a family of pairwise disjoint tiles."""
    terms = [(t, packet_coefficient(f, t)) for t in sorted(tiles, key=quartile_key)]
    return synthesize(terms)


def project_tree(T: Tree, j: int, f: StepFunction, validate: bool = True) -> StepFunction:
    """Orthogonal projection onto the span of the packets of ``disjointify(T, j)``."""
    return project_tiles(disjointify(T, j, validate), f)


def project_quartile(s: Quartile, f: StepFunction) -> StepFunction:
    """Projection onto the span of the four frequency-grandchild packets."""
    return project_tiles(s.frequency_grandchildren(), f)
