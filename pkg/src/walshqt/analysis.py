"""Decreasing rearrangements, Lorentz quasi-norms, weak-type constants and layer-cake decompositions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .dyadic import CellSet, ExactScalar, StepFunction, parse_exponent, pow2

__all__ = [
    "Rearrangement",
    "rearrange",
    "lorentz_quasinorm",
    "weak_constant",
    "weak_argmax",
    "Layer",
    "layer_decompose",
    "layer_aggregate",
    "layer_ratio",
    "layer_report",
]


@dataclass(frozen=True)
class Rearrangement:
    """``f*(t) = values[i]`` for ``breakpoints[i] <= t < breakpoints[i+1]``, zero after the last.

    ``breakpoints`` has one more entry than ``values`` and starts at 0.
    """

    breakpoints: tuple
    values: tuple

    def __call__(self, t) -> ExactScalar:
        t = Fraction(t)
        for i, v in enumerate(self.values):
            if t < self.breakpoints[i + 1]:
                return v
        return ExactScalar(0)

    def distribution(self, lam) -> Fraction:
        """``|{|f| > lam}|``."""
        lam = ExactScalar.coerce(lam)
        out = Fraction(0)
        for i, v in enumerate(self.values):
            if v > lam:
                out = self.breakpoints[i + 1]
        return out

    @property
    def measure(self) -> Fraction:
        return self.breakpoints[-1]

    def to_json(self) -> dict:
        return {"breakpoints": [str(t) for t in self.breakpoints], "values": [str(v) for v in self.values]}


def rearrange(f: StepFunction) -> Rearrangement:
    """Sort cell values by modulus, merging ties."""
    counts: dict = {}
    for v in f.cells.values():
        a = abs(v)
        counts[a] = counts.get(a, 0) + 1
    levels = sorted(counts, reverse=True)
    cell = f.cell_length
    bps = [Fraction(0)]
    for v in levels:
        bps.append(bps[-1] + counts[v] * cell)
    return Rearrangement(tuple(bps), tuple(levels))


def _pieces(f):
    R = f if isinstance(f, Rearrangement) else rearrange(f)
    return R, [float(v) for v in R.values], [float(t) for t in R.breakpoints]


def weak_argmax(f, r) -> int | None:
    """Index ``i`` maximising ``values[i] * breakpoints[i+1]**(1/r)``, found exactly when ``1/r`` is rational."""
    R = f if isinstance(f, Rearrangement) else rearrange(f)
    if not R.values:
        return None
    r = parse_exponent(r)
    if isinstance(r, Fraction):
        inv = 1 / r
        a, b = inv.denominator, inv.numerator
        best, arg = None, None
        for i, v in enumerate(R.values):
            # compare v * t**(b/a) through v**a * t**b
            key = (v**a) * (R.breakpoints[i + 1] ** b)
            if best is None or key > best:
                best, arg = key, i
        return arg
    vals = [float(v) * float(R.breakpoints[i + 1]) ** (1.0 / r) for i, v in enumerate(R.values)]
    return max(range(len(vals)), key=vals.__getitem__)


def lorentz_quasinorm(f, p, q) -> float:
    """``|| t**(1/p) f*(t) ||_{L^q(dt/t)}`` in closed form over the constant pieces of ``f*``."""
    p = parse_exponent(p)
    q = parse_exponent(q)
    if not 0 < p < math.inf:
        raise ValueError(f"Lorentz exponent p must be finite and positive, got {p}")
    if not q > 0:
        raise ValueError(f"Lorentz exponent q must be positive, got {q}")
    R = f if isinstance(f, Rearrangement) else rearrange(f)
    if not R.values:
        return 0.0
    if q == math.inf:
        i = weak_argmax(R, p)
        return float(R.values[i]) * float(R.breakpoints[i + 1]) ** (1.0 / float(p))
    pf, qf = float(p), float(q)
    e = qf / pf
    total = 0.0
    for i, v in enumerate(R.values):
        t0 = float(R.breakpoints[i])
        t1 = float(R.breakpoints[i + 1])
        total += float(v) ** qf * (pf / qf) * (t1**e - t0**e)
    return total ** (1.0 / qf)


def weak_constant(f, r) -> float:
    """``sup_lambda lambda |{|f| > lambda}|**(1/r)``, the ``L^{r,inf}`` quasi-norm."""
    r = parse_exponent(r)
    if not r > 0:
        raise ValueError("r must be positive")
    return lorentz_quasinorm(f, r, math.inf)


@dataclass(frozen=True)
class Layer:
    """``G_k = {2**k < |f| <= 2**(k+1)}`` and ``g_k = f 1_{G_k} / 2**(k+1)``, so ``|g_k| <= 1``."""

    k: int
    g: StepFunction
    G: CellSet

    @property
    def coefficient(self) -> Fraction:
        return pow2(self.k + 1)


def _level(v: ExactScalar) -> int:
    """The ``k`` with ``2**k < |v| <= 2**(k+1)``."""
    a = abs(v)
    k = math.ceil(math.log2(float(a))) - 1
    while a <= pow2(k):
        k -= 1
    while a > pow2(k + 1):
        k += 1
    return k


def layer_decompose(f: StepFunction) -> list[Layer]:
    """Dyadic level sets of ``|f|``; ``sum_k 2**(k+1) g_k = f`` exactly."""
    groups: dict = {}
    for p, v in f.cells.items():
        groups.setdefault(_level(v), {})[p] = v
    out = []
    for k in sorted(groups):
        cells = groups[k]
        g = StepFunction(f.cell_scale, {p: v * pow2(-k - 1) for p, v in cells.items()})
        out.append(Layer(k, g, CellSet(f.cell_scale, frozenset(cells))))
    return out


def layer_aggregate(layers: Sequence[Layer], p2, q=Fraction(2, 3), shift: int = 1) -> float:
    """``|| {2**(k+shift) |G_k|**(1/p2)} ||_{l^q}``; ``shift = 1`` matches the reconstruction coefficients."""
    p2 = float(parse_exponent(p2))
    qf = float(parse_exponent(q))
    total = 0.0
    for L in layers:
        term = 2.0 ** (L.k + shift) * float(L.G.measure) ** (1.0 / p2)
        total += term**qf
    return total ** (1.0 / qf)


def layer_ratio(f: StepFunction, p2, q=Fraction(2, 3), shift: int = 1) -> float:
    """Layer aggregate divided by ``||f||_{p2, q}``."""
    lor = lorentz_quasinorm(f, p2, q)
    if lor == 0:
        return 0.0
    return layer_aggregate(layer_decompose(f), p2, q, shift) / lor


def layer_report(f: StepFunction, p2, q=Fraction(2, 3)) -> dict:
    """Layers of ``f`` with the aggregate, the ``L^{p2,q}`` quasi-norm and their ratio."""
    layers = layer_decompose(f)
    agg = layer_aggregate(layers, p2, q)
    lor = lorentz_quasinorm(f, p2, q) if f else 0.0
    return {
        "layers": [{"k": L.k, "coefficient": str(L.coefficient), "measure": str(L.G.measure)} for L in layers],
        "aggregate": agg,
        "lorentz": lor,
        "ratio": agg / lor if lor else 0.0,
    }
