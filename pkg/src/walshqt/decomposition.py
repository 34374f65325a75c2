"""Forests, the recursive size lemma, the (n2, n3) size decomposition and the forest estimate."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .dyadic import ExactScalar, StepFunction, l2_norm_squared, pow2
from .phase_plane import Quartile, canonical_order, convex_violation, fefferman_le
from .quartile_operator import trilinear, trilinear_tree
from .sizes import Coefficients, SizeReport, energy, size
from .trees import Tree

__all__ = [
    "Forest",
    "SizeReport",
    "size",
    "SizeSplit",
    "size_split",
    "SizeClass",
    "iterate_size_lemma",
    "DecompositionCell",
    "full_size_decomposition",
    "ForestAudit",
    "forest_estimate",
]


def _cf(f) -> Coefficients:
    return f if isinstance(f, Coefficients) else Coefficients(f)


@dataclass(frozen=True)
class Forest:
    """Partition of a set of quartiles into trees with assigned tops."""

    trees: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "trees", tuple(self.trees))
        seen = set()
        for T in self.trees:
            if seen & T.members:
                raise ValueError("forest trees must be pairwise disjoint")
            seen |= T.members

    @property
    def members(self) -> frozenset:
        out = set()
        for T in self.trees:
            out |= T.members
        return frozenset(out)

    @property
    def tops(self) -> Fraction:
        """``sum |I_T|`` for this partition (an upper bound for the infimum over partitions)."""
        return sum((T.top.space.length for T in self.trees), Fraction(0))

    def __len__(self) -> int:
        return len(self.trees)

    def __iter__(self):
        return iter(self.trees)

    def restrict(self, keep: Iterable[Quartile]) -> "Forest":
        """Intersect every tree with ``keep`` and drop the empty ones."""
        keep = frozenset(keep)
        return Forest(tuple(T2 for T in self.trees if (T2 := T.restrict(keep)).members))

    def check_convex(self) -> bool:
        return all(convex_violation(T.members) is None for T in self.trees)

    def to_json(self) -> list:
        return [T.to_json() for T in self.trees]

    @classmethod
    def from_json(cls, obj) -> "Forest":
        if not isinstance(obj, list):
            raise ValueError("forest: expected a list of trees")
        return cls(tuple(Tree.from_json(t) for t in obj))


@dataclass(frozen=True)
class SizeSplit:
    hi: Forest
    lo: frozenset
    selected: tuple

    @property
    def hi_members(self) -> frozenset:
        return self.hi.members


def _maximal_key(s: Quartile):
    return (-s.space.k, s.space.n, s.freq.n)


def size_split(S: Iterable[Quartile], f, sigma_sq, validate: bool = True) -> SizeSplit:
    """Skim off trees whose top has ``||Pi_t f||_2**2 > sigma_sq/4 |I_t|``.

    Tops are taken in order of decreasing ``|I_t|`` (then position), so each
    selected top is ``<<``-maximal among the remaining qualifying quartiles.
    """
    S = frozenset(S)
    cf = _cf(f)
    sigma_sq = ExactScalar.coerce(sigma_sq) if not isinstance(sigma_sq, ExactScalar) else sigma_sq
    if validate:
        bad = convex_violation(S)
        if bad is not None:
            raise ValueError(f"size_split needs a convex set; {bad[1]!r} is missing")
        if size(S, cf).size_sq > sigma_sq:
            raise ValueError("size of the input exceeds sigma")
    quarter = sigma_sq / 4
    qualifying = [t for t in S if energy(t, cf) > quarter * t.space.length]
    qualifying.sort(key=_maximal_key)
    stock = set(S)
    trees = []
    for t in qualifying:
        if t not in stock:
            continue
        members = frozenset(s for s in stock if fefferman_le(s, t))
        stock -= members
        trees.append(Tree(t, members))
    return SizeSplit(Forest(tuple(trees)), frozenset(stock), tuple(T.top for T in trees))


@dataclass(frozen=True)
class SizeClass:
    """Quartiles of one dyadic size level ``n``; ``n = None`` marks the zero-size remainder."""

    n: int | None
    members: frozenset
    forest: Forest
    sigma_sq: ExactScalar | None


def iterate_size_lemma(S: Iterable[Quartile], f, cap_sq) -> list[SizeClass]:
    """Peel ``S`` into classes with ``size_f <= cap 2**-n`` and forests of tops ``<= 4 4**n ||f||**2 / cap**2``.

    Levels that the current stock already satisfies are skipped; a stock of size
    zero becomes the final class with ``n = None``.
    """
    cf = _cf(f)
    cap_sq = ExactScalar.coerce(Fraction(cap_sq)) if not isinstance(cap_sq, ExactScalar) else cap_sq
    stock = frozenset(S)
    if not stock:
        return []
    if size(stock, cf).size_sq > cap_sq:
        raise ValueError("initial cap is below the size of the set")
    classes = []
    n = 0
    while stock:
        cur = size(stock, cf).size_sq
        if not cur:
            classes.append(SizeClass(None, stock, Forest(), None))
            break
        sig = cap_sq * pow2(-2 * n)
        while cur <= sig / 4:
            n += 1
            sig = sig / 4
        split = size_split(stock, cf, sig, validate=False)
        classes.append(SizeClass(n, split.hi_members, split.hi, sig))
        stock = split.lo
        n += 1
    return classes


@dataclass(frozen=True)
class DecompositionCell:
    n2: int | None
    n3: int | None
    members: frozenset
    forest: Forest
    witness: str

    def to_json(self) -> dict:
        return {
            "n2": self.n2,
            "n3": self.n3,
            "count": len(self.members),
            "tops": str(self.forest.tops),
            "trees": len(self.forest),
            "witness": self.witness,
        }


def full_size_decomposition(S: Iterable[Quartile], f2, f3, caps) -> list[DecompositionCell]:
    """Partition ``S`` into ``S_{n2,n3}`` by iterating the size lemma in ``f2`` and ``f3``.

    ``caps = (cap2, cap3)`` bound the initial sizes.  Each cell is the
    intersection of a level of each iteration and carries the cheaper of the two
    restricted forests as its witness.
    """
    c2, c3 = _cf(f2), _cf(f3)
    cap2, cap3 = (Fraction(c) for c in caps)
    S = frozenset(S)
    if not S:
        return []
    fam2 = iterate_size_lemma(S, c2, cap2 * cap2)
    fam3 = iterate_size_lemma(S, c3, cap3 * cap3)
    cells = []
    for a in fam2:
        for b in fam3:
            members = a.members & b.members
            if not members:
                continue
            w2 = a.forest.restrict(members)
            w3 = b.forest.restrict(members)
            # a zero-size class has no forest of its own; fall back on the other family
            options = []
            if a.n is not None:
                options.append((w2.tops, "f2", w2))
            if b.n is not None:
                options.append((w3.tops, "f3", w3))
            if options:
                tops, label, forest = min(options, key=lambda o: (o[0], o[1]))
            else:
                forest, label = Forest(), "none"
            cells.append(DecompositionCell(a.n, b.n, members, forest, label))
    cells.sort(key=lambda c: (c.n2 is None, c.n2 or 0, c.n3 is None, c.n3 or 0))
    return cells


@dataclass(frozen=True)
class ForestAudit:
    value: ExactScalar
    bound: float
    ratio: float
    branch: str
    n0: float | None
    levels: tuple = field(default_factory=tuple)
    tree_sum: float = 0.0

    def to_json(self) -> dict:
        return {
            "value": str(self.value),
            "bound": self.bound,
            "ratio": self.ratio,
            "branch": self.branch,
            "n0": self.n0,
            "levels": list(self.levels),
            "tree_sum": self.tree_sum,
        }


def forest_estimate(F: Forest, f1, f2, f3, sizes=None, permute: bool = False, hypothesis_constant=4) -> ForestAudit:
    """Evaluate ``Lambda_S`` on a forest against ``sigma3 ||f1||_2 ||f2||_2``.

    Runs the two cases of the argument: a direct sum of tree estimates when
    ``sigma1 <= sigma2 ||f1|| / ||f2||``, otherwise an inner iteration of the
    size lemma in ``f1`` down to that threshold.  ``permute`` swaps the roles of
    ``f2`` and ``f3`` in the bound.
    """
    S = F.members
    c1, c2, c3 = _cf(f1), _cf(f2), _cf(f3)
    if sizes is None:
        sq = [size(S, c).size_sq for c in (c1, c2, c3)]
    else:
        sq = [ExactScalar.coerce(Fraction(s) ** 2) for s in sizes]
    g2, g3 = (c3, c2) if permute else (c2, c3)
    s1_sq, s2_sq, s3_sq = (sq[0], sq[2], sq[1]) if permute else tuple(sq)
    n1 = l2_norm_squared(c1.f)
    n2 = l2_norm_squared(g2.f)
    # hypothesis: tops <= C sigma2**-2 ||f2||**2
    if s2_sq and F.tops * s2_sq > hypothesis_constant * n2:
        raise ValueError("forest tops exceed the hypothesis bound")
    value = trilinear(S, c1, c2, c3)
    bound = math.sqrt(float(s3_sq)) * math.sqrt(float(n1)) * math.sqrt(float(n2))
    ratio = 0.0 if not value else (float("inf") if bound == 0 else abs(float(value)) / bound)

    def tree_sum(forest: Forest) -> float:
        return sum(abs(float(trilinear_tree(T, c1, c2, c3).value)) for T in forest)

    if not n1 or not n2 or not s2_sq:
        return ForestAudit(value, bound, ratio, "trivial", None, (), tree_sum(F))
    threshold = s2_sq * n1 / n2  # 2**-n0
    n0 = -math.log2(float(threshold))
    if s1_sq <= threshold:
        return ForestAudit(value, bound, ratio, "direct", n0, (), tree_sum(F))
    # inner iteration in f1 with sigma**2 = 2**-n, n stepping by 2
    n = math.floor(-math.log2(float(s1_sq)))
    while pow2(-n) < s1_sq:
        n -= 1
    while pow2(-n - 1) >= s1_sq:
        n += 1
    stock = F.members
    levels = []
    total = 0.0
    while pow2(-n) > threshold and stock:
        split = size_split(stock, c1, pow2(-n), validate=False)
        lam = trilinear(split.hi_members, c1, c2, c3)
        ts = tree_sum(split.hi)
        total += ts
        levels.append({
            "n": n,
            "count": len(split.hi_members),
            "tops": str(split.hi.tops),
            "value": str(lam),
            "tree_sum": ts,
        })
        stock = split.lo
        n += 2
    rest = F.restrict(stock)
    ts = tree_sum(rest)
    total += ts
    levels.append({"n": None, "count": len(stock), "tops": str(rest.tops), "value": str(trilinear(stock, c1, c2, c3)), "tree_sum": ts})
    return ForestAudit(value, bound, ratio, "iterate", n0, tuple(levels), total)
