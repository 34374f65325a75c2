"""Dyadic maximal functions, exceptional sets and the multi-frequency Calderon-Zygmund decomposition."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np

from .decomposition import Forest
from .dyadic import (
    CellSet,
    DyadicInterval,
    ExactScalar,
    StepFunction,
    l2_norm_squared,
    parse_exponent,
    pow2,
)
from .phase_plane import Quartile, Tile, canonical_order
from .sizes import Coefficients
from .walsh import synthesize

__all__ = [
    "MaximalFunction",
    "maximal",
    "ExceptionalSets",
    "exceptional_sets",
    "good_quartiles",
    "CZOutput",
    "cz_decompose",
    "counting_function",
    "default_A",
]


def _right_exponent(f: StepFunction) -> int:
    """Smallest ``K >= 0`` with the support of ``f`` inside ``[0, 2**K)``."""
    if not f:
        return 0
    end = (max(f.cells) + 1) * f.cell_length
    K = 0
    while pow2(K) < end:
        K += 1
    return K


class MaximalFunction:
    """``M_p f`` sampled on the cells of ``[0, 2**K)`` at the cell scale of ``f``.

    For ``p`` in {1, 2} and rational ``f`` the ``p``-th powers are stored exactly as
    integers over a common denominator; otherwise as floats.  Points at or beyond
    ``2**K`` have ``M_p f <= (||f||_p**p / 2**K)**(1/p)``.
    """

    def __init__(self, f: StepFunction, p, K: int):
        self.f = f
        self.p = parse_exponent(p)
        if self.p < 1:
            raise ValueError("maximal functions need p >= 1")
        self.K = K
        self.cell_scale = min(f.cell_scale, K)
        c = self.cell_scale
        n = 1 << (K - c)
        self.exact = self.p in (1, 2) and f.is_rational()
        levels = K - c
        if self.exact:
            view = f.int_view()
            ints = [0] * n
            den = view.den ** int(self.p)
            for p_, v in f.cells.items():
                x = int(v.a * view.den)
                ints[p_] = abs(x) if self.p == 1 else x * x
            base = np.array(ints, dtype=object)
            # scaled[ell] = block sums at level ell times 2**(levels - ell); integer sup over levels
            best = base * (1 << levels)
            block = base
            for ell in range(1, levels + 1):
                block = block.reshape(-1, 2).sum(axis=1)
                cand = np.repeat(block * (1 << (levels - ell)), 1 << ell)
                best = np.maximum(best, cand)
            self._num = best
            self._den = den * (1 << levels)
        else:
            pf = float(self.p)
            vals = np.zeros(n, dtype=float)
            for p_, v in f.cells.items():
                vals[p_] = abs(float(v)) ** pf
            best = vals.copy()
            block = vals
            for ell in range(1, levels + 1):
                block = block.reshape(-1, 2).sum(axis=1)
                best = np.maximum(best, np.repeat(block / (1 << ell), 1 << ell))
            self._num = best
            self._den = 1

    def __len__(self) -> int:
        return len(self._num)

    def power(self, pos: int):
        """``(M_p f)**p`` on the cell ``pos``: a Fraction on the exact path, a float otherwise."""
        if self.exact:
            return Fraction(int(self._num[pos]), self._den)
        return float(self._num[pos])

    def value(self, pos: int) -> float:
        return float(self.power(pos)) ** (1.0 / float(self.p))

    def values(self) -> np.ndarray:
        if self.exact:
            return np.array([float(Fraction(int(x), self._den)) for x in self._num]) ** (1.0 / float(self.p))
        return self._num ** (1.0 / float(self.p))

    def superlevel(self, threshold) -> CellSet:
        """``{M_p f >= threshold}`` restricted to ``[0, 2**K)``."""
        t = Fraction(threshold)
        if self.exact:
            tp = t ** int(self.p) * self._den
            hit = [i for i, x in enumerate(self._num) if x * tp.denominator >= tp.numerator]
        else:
            tp = float(t) ** float(self.p)
            hit = np.nonzero(self._num >= tp * (1 - 1e-12))[0].tolist()
        return CellSet(self.cell_scale, frozenset(hit))

    def to_step_function(self) -> StepFunction:
        """Exact ``(M_p f)**p`` as a step function (exact path only)."""
        if not self.exact:
            raise ValueError("exact powers are only available for p in {1, 2} and rational f")
        return StepFunction(self.cell_scale, {i: Fraction(int(x), self._den) for i, x in enumerate(self._num) if x})


def maximal(f: StepFunction, p, margin: int = 1, K: int | None = None) -> MaximalFunction:
    """Dyadic ``M_p f(x) = sup_{x in I} (|I|**-1 int_I |f|**p)**(1/p)`` on ``[0, 2**K)``."""
    if K is None:
        K = _right_exponent(f) + margin
    return MaximalFunction(f, p, K)


def _lp_power(f: StepFunction, p) -> Fraction | float:
    p = parse_exponent(p)
    if p in (1, 2) and f.is_rational():
        if p == 1:
            return sum((abs(v.a) for v in f.cells.values()), Fraction(0)) * f.cell_length
        return sum((v.a * v.a for v in f.cells.values()), Fraction(0)) * f.cell_length
    pf = float(p)
    return sum(abs(float(v)) ** pf for v in f.cells.values()) * float(f.cell_length)


def _superlevel(f: StepFunction, p, threshold, margin: int) -> CellSet:
    """``{M_p f >= threshold}`` on all of the half-line, growing the window as needed."""
    if not f:
        return CellSet.empty()
    t = Fraction(threshold)
    total = _lp_power(f, p)
    tp = t ** int(p) if isinstance(total, Fraction) else float(t) ** float(p)
    K = _right_exponent(f) + margin
    # beyond 2**K every average is at most total / 2**K
    while total / (pow2(K) if isinstance(total, Fraction) else float(pow2(K))) >= tp:
        K += 1
    return maximal(f, p, K=K).superlevel(t)


@dataclass(frozen=True)
class ExceptionalSets:
    E1: CellSet
    E2: CellSet
    c: Fraction
    p1: object

    @property
    def union(self) -> CellSet:
        return self.E1 | self.E2

    def to_json(self) -> dict:
        return {
            "c": str(self.c),
            "p1": str(self.p1),
            "E1_measure": str(self.E1.measure),
            "E2_measure": str(self.E2.measure),
        }


def exceptional_sets(f1: StepFunction, F2: CellSet, p1, c=None, margin: int = 1, bound=Fraction(1, 4)) -> ExceptionalSets:
    """``E1 = {M_p1 f1 >= c}``, ``E2 = {M_1 1_F2 >= c |F2|}``.

    Without an explicit ``c`` the search doubles ``c`` from 1 until both sets have
    measure at most ``bound``.
    """
    p1 = parse_exponent(p1)
    ind = F2.indicator() if F2 else StepFunction.zero()
    m2 = F2.measure if F2 else Fraction(0)

    def sets(cc):
        e1 = _superlevel(f1, p1, cc, margin)
        e2 = _superlevel(ind, 1, cc * m2, margin) if m2 else CellSet.empty()
        return e1, e2

    if c is not None:
        c = Fraction(c)
        e1, e2 = sets(c)
        return ExceptionalSets(e1, e2, c, p1)
    c = Fraction(1)
    for _ in range(200):
        e1, e2 = sets(c)
        if e1.measure <= bound and e2.measure <= bound:
            return ExceptionalSets(e1, e2, c, p1)
        c *= 2
    raise RuntimeError("doubling search for the exceptional-set constant did not terminate")


def good_quartiles(S: Iterable[Quartile], E: CellSet) -> frozenset:
    """Quartiles whose spatial interval is not contained in ``E``."""
    return frozenset(s for s in S if not E.contains_interval(s.space))


def counting_function(F: Forest) -> StepFunction:
    """``N = sum_T 1_{I_T}``."""
    if not len(F):
        return StepFunction.zero()
    c = min(T.top.space.k for T in F)
    out = StepFunction.zero(c)
    for T in F:
        out = out + StepFunction.indicator(T.top.space, c)
    return out


def default_A(F: Forest) -> int:
    """Square root of the forest's tops, rounded up to a power of 2 (at least 1)."""
    tops = F.tops
    A = 1
    while A * A < tops:
        A *= 2
    return A


@dataclass(frozen=True)
class CZOutput:
    g1: StepFunction
    intervals: tuple
    parts: tuple
    tiles: tuple
    N: tuple
    A: Fraction
    alpha: Fraction
    outside_sq: ExactScalar
    inside_sq: ExactScalar
    sum_N_alpha: float
    holder_bound: float
    A_bound: float
    identity_failures: int
    checked: int
    violations: tuple

    @property
    def g1_norm_sq(self) -> ExactScalar:
        return self.outside_sq + self.inside_sq

    @property
    def ratio(self) -> float:
        """``||g1||_2**2 / A**(2 alpha)``."""
        return float(self.g1_norm_sq) / self.A_bound

    def to_json(self) -> dict:
        return {
            "intervals": [I.to_json() for I in self.intervals],
            "N": list(self.N),
            "tiles_per_interval": [len(t) for t in self.tiles],
            "part_norms_sq": [str(l2_norm_squared(g)) for g in self.parts],
            "outside_sq": str(self.outside_sq),
            "inside_sq": str(self.inside_sq),
            "g1_norm_sq": str(self.g1_norm_sq),
            "sum_N_alpha": self.sum_N_alpha,
            "holder_bound": self.holder_bound,
            "A": str(self.A),
            "alpha": str(self.alpha),
            "A_bound": self.A_bound,
            "ratio": self.ratio,
            "identity_check": "exact",
            "identity_failures": self.identity_failures,
            "checked": self.checked,
            "violations": list(self.violations),
        }


def cz_decompose(F: Forest, f1: StepFunction, q, E1: CellSet, A=None) -> CZOutput:
    """Replace ``f1`` on ``E1`` by its projections onto the local tile spans.

    ``intervals`` are the children of the maximal dyadic intervals of ``E1``;
    for each, ``S_I`` collects the tiles on ``I`` lying below some frequency
    grandchild of a member, and ``g_I = sum_{S_I} <f1, w_s> w_s``.
    """
    q = parse_exponent(q)
    alpha = 1 - 2 / q if q != math.inf else Fraction(1)
    A = Fraction(default_A(F) if A is None else A)
    if A < 1:
        raise ValueError("A must be at least 1")
    if F.tops > A * A:
        raise ValueError(f"forest tops {F.tops} exceed A**2 = {A * A}")
    members = canonical_order(F.members)
    tops = [T.top.space for T in F]
    intervals = []
    for J in E1.maximal_intervals():
        intervals.extend(J.children())
    intervals.sort(key=lambda I: (I.left, I.k))

    violations = []
    Ns, tiles, parts = [], [], []
    cf = Coefficients(f1)
    for I in intervals:
        inside = [J for J in tops if J.contains(I)]
        if any(I.contains(J) and J != I for J in tops):
            violations.append({"interval": I.to_json(), "reason": "counting function not constant"})
        N_I = len(inside)
        S_I = set()
        for s in members:
            if s.space.contains(I) and s.space.k > I.k:
                for t in s.frequency_grandchildren():
                    S_I.add(Tile(I, t.freq.ancestor(-I.k)))
            elif s.space.intersects(I):
                violations.append({"interval": I.to_json(), "reason": "scale gap", "quartile": s.to_json()})
        S_I = canonical_order(S_I)
        if len(S_I) > N_I:
            violations.append({"interval": I.to_json(), "reason": f"#S_I={len(S_I)} > N_I={N_I}"})
        g_I = synthesize([(t, cf(t)) for t in S_I]) if S_I else StepFunction.zero(I.k)
        Ns.append(N_I)
        tiles.append(tuple(S_I))
        parts.append(g_I)

    covered = CellSet.from_intervals(intervals) if intervals else CellSet.empty()
    outside = f1 if not covered else f1 - f1.restrict(covered)
    g1 = outside
    for g in parts:
        g1 = g1 + g
    outside_sq = l2_norm_squared(outside)
    inside_sq = sum((l2_norm_squared(g) for g in parts), ExactScalar(0))

    af = float(alpha)
    sum_N_alpha = sum((n ** af if n else 0.0) * float(I.length) for n, I in zip(Ns, intervals))
    N_l1 = float(F.tops)
    meas = float(covered.measure) if intervals else 0.0
    holder = (N_l1**af) * (meas ** (1 - af)) if meas else 0.0
    A_bound = float(A) ** (2 * af)

    cg = Coefficients(g1)
    failures = 0
    checked = 0
    for s in members:
        for t in s.frequency_grandchildren():
            checked += 1
            if cf(t) != cg(t):
                failures += 1
    return CZOutput(
        g1=g1,
        intervals=tuple(intervals),
        parts=tuple(parts),
        tiles=tuple(tiles),
        N=tuple(Ns),
        A=A,
        alpha=Fraction(alpha) if not isinstance(alpha, float) else alpha,
        outside_sq=outside_sq,
        inside_sq=inside_sq,
        sum_N_alpha=sum_N_alpha,
        holder_bound=holder,
        A_bound=A_bound,
        identity_failures=failures,
        checked=checked,
        violations=tuple(violations),
    )
