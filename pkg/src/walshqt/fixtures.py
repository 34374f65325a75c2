"""Seeded random fixtures: tiles, convex j-trees, convex sets, forests and test functions.

Every generator takes a ``random.Random`` instance so that a fixture is a pure
function of its seed.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .decomposition import Forest
from .dyadic import DyadicInterval, StepFunction
from .phase_plane import Quartile, Tile, canonical_order, convex_hull
from .trees import Tree

__all__ = [
    "rng",
    "random_values",
    "random_step_function",
    "random_disjoint_tile_pair",
    "JTreeFixture",
    "random_convex_jtree",
    "random_convex_set",
    "random_forest",
    "spiky_function",
]


def rng(seed: int, *salt) -> random.Random:
    """Independent stream for ``(seed, salt...)``."""
    return random.Random(repr((seed,) + salt))


def random_values(R: random.Random, n: int, zero_prob: float = 0.2) -> list[Fraction]:
    out = []
    for _ in range(n):
        if R.random() < zero_prob:
            out.append(Fraction(0))
        else:
            out.append(Fraction(R.randint(-8, 8), R.choice((1, 2, 3))))
    return out


def random_step_function(R: random.Random, cell_scale: int, start: int, count: int, zero_prob: float = 0.2) -> StepFunction:
    return StepFunction.from_values(cell_scale, start, random_values(R, count, zero_prob))


def random_disjoint_tile_pair(R: random.Random, kmin: int = -4, kmax: int = 4, domain_exp: int = 4) -> tuple[Tile, Tile]:
    """Two disjoint tiles in ``[0, 2**domain_exp)**2``; half the time their intervals overlap."""
    while True:
        k1 = R.randint(kmin, kmax)
        k2 = R.randint(kmin, kmax)
        n1 = R.randrange(1 << (domain_exp - k1))
        s = Tile.make(k1, n1, R.randrange(1 << (domain_exp + k1)))
        if R.random() < 0.5:
            # put I_t inside I_s or I_s inside I_t
            if k2 <= k1:
                n2 = (n1 << (k1 - k2)) + R.randrange(1 << (k1 - k2))
            else:
                n2 = n1 >> (k2 - k1)
        else:
            n2 = R.randrange(1 << (domain_exp - k2))
        t = Tile.make(k2, n2, R.randrange(1 << (domain_exp + k2)))
        if not s.intersects(t):
            return s, t


@dataclass(frozen=True)
class JTreeFixture:
    tree: Tree
    j: int
    depth: int
    cell_scale: int


def random_convex_jtree(R: random.Random, j: int, max_size: int = 16) -> JTreeFixture:
    """Random convex ``j``-tree: a union of vertical chains below a random top, then convex closure."""
    while True:
        kT = R.choice((0, 2))
        D = R.randint(1, 3)
        nT = sum((j - 1) << (2 * i) for i in range(D)) + (R.randrange(4) << (2 * D))
        top = Quartile.make(kT, R.randrange(4), nT)

        def at(d: int, pos: int) -> Quartile:
            return Quartile(DyadicInterval(kT - 2 * d, pos), top.freq.ancestor(top.freq.k + 2 * d))

        members = set()
        if R.random() < 0.5:
            members.add(top)
        for _ in range(R.randint(1, 6)):
            d_hi = R.randint(1, D)
            d_lo = R.randint(0, d_hi)
            leaf = DyadicInterval(kT - 2 * d_hi, (top.space.n << (2 * d_hi)) + R.randrange(4**d_hi))
            for d in range(d_lo, d_hi + 1):
                members.add(at(d, leaf.ancestor(kT - 2 * d).n))
        members = set(convex_hull(members))
        if len(members) <= max_size:
            return JTreeFixture(Tree(top, frozenset(members)), j, D, kT - 2 * D - 4)


def random_convex_set(R: random.Random, max_size: int = 64) -> tuple[frozenset, int]:
    """Convex closure of a few random trees of mixed types; returns the set and a fine cell scale."""
    while True:
        parts = set()
        c = 0
        for _ in range(R.randint(1, 4)):
            fx = random_convex_jtree(R, R.randint(1, 4), max_size=16)
            parts |= fx.tree.members
            c = min(c, fx.cell_scale)
        S = convex_hull(parts)
        if len(S) <= max_size:
            return S, c


def random_forest(R: random.Random, A: int, domain_exp: int = 4, depth: int = 2, anchors=()) -> Forest:
    """Forest of convex trees with ``tops = A**2`` inside ``[0, 2**domain_exp)``.

    Trees carry pairwise distinct high frequency digits, so their members never
    coincide.  With ``anchors`` (points of the domain), about half the tops are
    placed over one of them.
    """
    total = A * A
    count = min(total, 16)
    length = total // count
    kT = length.bit_length() - 1
    tags = R.sample(range(64), count)
    trees = []
    for tag in tags:
        j = R.randint(1, 4)
        D = R.randint(1, depth)
        nT = sum(R.randrange(4) << (2 * i) for i in range(depth)) + (tag << (2 * depth))
        if anchors and R.random() < 0.5:
            pos = int(Fraction(R.choice(anchors)) / Fraction(2) ** kT)
        else:
            pos = R.randrange(1 << (domain_exp - kT))
        top = Quartile.make(kT, pos, nT)
        members = {top}
        for _ in range(R.randint(1, 3)):
            d_hi = R.randint(1, D)
            leaf = (top.space.n << (2 * d_hi)) + R.randrange(4**d_hi)
            for d in range(0, d_hi + 1):
                members.add(Quartile(DyadicInterval(kT - 2 * d, leaf >> (2 * (d_hi - d))), top.freq.ancestor(top.freq.k + 2 * d)))
        trees.append(Tree(top, frozenset(convex_hull(members))))
    return Forest(tuple(trees))


def spiky_function(R: random.Random, cell_scale: int = -4, domain_exp: int = 4, spikes: int | None = None) -> StepFunction:
    """Small random background plus a few tall one-cell spikes, roughly L^{3/2}-normalised."""
    n = 1 << (domain_exp - cell_scale)
    vals = [Fraction(R.randint(-4, 4), 8) for _ in range(n)]
    for _ in range(spikes if spikes is not None else R.randint(1, 3)):
        vals[R.randrange(n)] = Fraction(R.choice((-1, 1)) * R.randint(24, 64), 4)
    f = StepFunction.from_values(cell_scale, 0, vals)
    norm = sum(abs(float(v)) ** 1.5 for v in vals) * 2.0**cell_scale
    scale = Fraction(norm ** (-2.0 / 3.0)).limit_denominator(64)
    return f.scale(scale)
