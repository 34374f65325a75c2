"""The quartile operator ``V_S``, its trilinear form ``Lambda_S`` and single-tree evaluation."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Mapping

from .dyadic import ExactScalar, StepFunction, ZERO, half_power_of_two
from .phase_plane import Quartile, canonical_order
from .sizes import Coefficients, SizeReport, size
from .trees import Tree, classify
from .walsh import packet_cell_scale, synthesize

__all__ = ["apply", "trilinear", "trilinear_tree", "TreeEstimate", "coefficient_triples"]


def _cf(f) -> Coefficients:
    return f if isinstance(f, Coefficients) else Coefficients(f)


def coefficient_triples(S: Iterable[Quartile], f1, f2, f3=None):
    """Yield ``(s, 2**(-k/2) c1 c2, c3)`` in canonical order, skipping vanishing terms."""
    c1, c2 = _cf(f1), _cf(f2)
    c3 = None if f3 is None else _cf(f3)
    for s in canonical_order(S):
        s1, s2, s3 = s.frequency_grandchildren()[:3]
        a = c1(s1)
        if not a:
            continue
        b = c2(s2)
        if not b:
            continue
        w = a * b * half_power_of_two(-s.space.k)
        yield s, w, (None if c3 is None else c3(s3))


def apply(S: Iterable[Quartile], f1: StepFunction, f2: StepFunction) -> StepFunction:
    """``V_S(f1, f2) = sum_s |I_s|**-1/2 <f1, w_s1> <f2, w_s2> w_s3``, exact.

    The output lives at the finest cell scale among the inputs and the packets.
    """
    S = list(S)
    terms = [(s.grandchild(3), w) for s, w, _ in coefficient_triples(S, f1, f2)]
    scales = [f1.cell_scale, f2.cell_scale] + [packet_cell_scale(s.grandchild(3)) for s in S]
    return synthesize(terms, min(scales))


def trilinear(S: Iterable[Quartile], f1, f2, f3) -> ExactScalar:
    """``Lambda_S(f1, f2, f3) = <V_S(f1, f2), f3>`` via the coefficient triple sum."""
    a = Fraction(0)
    b = Fraction(0)
    for _, w, c in coefficient_triples(S, f1, f2, f3):
        if c:
            t = w * c
            a += t.a
            b += t.b
    return ExactScalar(a, b)


@dataclass(frozen=True)
class TreeEstimate:
    """``Lambda_T`` with the audit data ``|I_T|`` and the three sizes over ``T``."""

    value: ExactScalar
    top_length: Fraction
    sizes: tuple[SizeReport, SizeReport, SizeReport]
    part_values: Mapping[int, ExactScalar]
    top_value: ExactScalar
    tag: object

    @property
    def scale(self) -> float:
        """``|I_T| * prod size_j``."""
        out = float(self.top_length)
        for r in self.sizes:
            out *= r.size
        return out

    @property
    def ratio(self) -> float:
        if not self.value:
            return 0.0
        sc = self.scale
        return float("inf") if sc == 0 else abs(float(self.value)) / sc

    def satisfies(self, constant) -> bool:
        """Exact test of ``|Lambda_T| <= C |I_T| prod size_j`` via squares."""
        rhs = ExactScalar.coerce(Fraction(constant) ** 2 * self.top_length**2)
        for r in self.sizes:
            rhs = rhs * r.size_sq
        return self.value * self.value <= rhs

    def to_json(self) -> dict:
        return {
            "value": str(self.value),
            "top_length": str(self.top_length),
            "sizes": [r.to_json() for r in self.sizes],
            "parts": {str(j): str(v) for j, v in sorted(self.part_values.items())},
            "top_value": str(self.top_value),
            "tag": self.tag,
            "ratio": self.ratio,
        }


def trilinear_tree(T: Tree, f1, f2, f3) -> TreeEstimate:
    """Evaluate ``Lambda_T`` on a tree, split along the parts ``T_j``, with sizes for the audit."""
    c1, c2, c3 = _cf(f1), _cf(f2), _cf(f3)
    cls = classify(T)
    parts = {j: trilinear(cls.parts[j], c1, c2, c3) for j in range(1, 5)}
    top_value = trilinear([T.top], c1, c2, c3) if T.top in T.members else ZERO
    value = top_value
    for j in range(1, 5):
        value = value + parts[j]
    sizes = tuple(size(T.members, c) for c in (c1, c2, c3))
    return TreeEstimate(value, T.top.space.length, sizes, parts, top_value, cls.tag)
