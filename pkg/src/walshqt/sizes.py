"""Memoised wave-packet coefficients and the size of a set of quartiles."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable

from .dyadic import ExactScalar, StepFunction, ZERO
from .phase_plane import Quartile, Tile, canonical_order
from .walsh import packet_coefficient

__all__ = ["Coefficients", "SizeReport", "energy", "size", "size_star"]


class Coefficients:
    """``<f, w_s>`` with a per-tile cache; ``f`` is fixed for the lifetime of the object."""

    def __init__(self, f: StepFunction):
        self.f = f
        self._memo: dict = {}

    def __call__(self, t: Tile) -> ExactScalar:
        c = self._memo.get(t)
        if c is None:
            c = packet_coefficient(self.f, t)
            self._memo[t] = c
        return c

    def grandchildren(self, s: Quartile) -> tuple[ExactScalar, ...]:
        return tuple(self(t) for t in s.frequency_grandchildren())


def _coeffs(f) -> Coefficients:
    return f if isinstance(f, Coefficients) else Coefficients(f)


def energy(s: Quartile, f) -> ExactScalar:
    """``||Pi_s f||_2**2``, exact."""
    cf = _coeffs(f)
    total = ZERO
    for c in cf.grandchildren(s):
        total = total + c * c
    return total


@dataclass(frozen=True)
class SizeReport:
    size_sq: ExactScalar
    argmax: Quartile | None

    @property
    def size(self) -> float:
        return math.sqrt(float(self.size_sq))

    def to_json(self) -> dict:
        return {
            "size": self.size,
            "size_sq": str(self.size_sq),
            "argmax": None if self.argmax is None else self.argmax.to_json(),
        }


def size(S: Iterable[Quartile], f) -> SizeReport:
    """``sup_s ||Pi_s f||_2 / |I_s|**1/2``, with squares compared exactly."""
    cf = _coeffs(f)
    best, arg = ZERO, None
    for s in canonical_order(S):
        v = energy(s, cf) / s.space.length
        if arg is None or v > best:
            best, arg = v, s
    return SizeReport(best, arg)


def size_star(S: Iterable[Quartile], f) -> ExactScalar:
    """Squared ``sup |<f, w_t>| / |I_t|**1/2`` over all grandchild tiles ``t``."""
    cf = _coeffs(f)
    best = ZERO
    for s in S:
        for t in s.frequency_grandchildren() + s.spatial_grandchildren():
            c = cf(t)
            v = c * c / t.space.length
            if v > best:
                best = v
    return best
