"""Walsh functions in Paley order and the L2-normalised wave packets of tiles.

``W_n`` is constant on the dyadic cells of [0, 1) at scale ``-m`` whenever
``n < 2**m``; on the cell with index ``t`` its value is the parity of the bitwise
AND between ``n`` and the ``m``-bit reversal of ``t``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Protocol

import numpy as np

from .dyadic import (
    DyadicInterval,
    ExactScalar,
    StepFunction,
    ZERO,
    half_power_of_two,
    pow2,
)

__all__ = [
    "bit_reverse",
    "walsh_sign",
    "walsh_function",
    "packet_cell_scale",
    "packet_signs",
    "wave_packet",
    "packet_coefficient",
    "synthesize",
]


class TileLike(Protocol):
    space: DyadicInterval
    freq: DyadicInterval


def bit_reverse(x: int, width: int) -> int:
    """Reverse the lowest ``width`` bits of ``x``."""
    if x >> width:
        raise ValueError(f"{x} does not fit in {width} bits")
    return int(format(x, f"0{width}b")[::-1], 2) if width > 0 else 0


def walsh_sign(n: int, t: int, m: int) -> int:
    """Value of ``W_n`` on the cell ``[t 2**-m, (t+1) 2**-m)`` of [0, 1)."""
    if n < 0:
        raise ValueError("Walsh indices are nonnegative")
    if not 0 <= t < (1 << m):
        raise ValueError(f"cell {t} is not inside [0, 1) at scale -{m}")
    if n >> m:
        raise ValueError(f"W_{n} is not constant on cells of length 2^-{m}")
    return -1 if bin(n & bit_reverse(t, m)).count("1") & 1 else 1


def walsh_function(n: int, m: int | None = None) -> StepFunction:
    """``W_n`` on [0, 1) as a step function at cell scale ``-m`` (default: coarsest)."""
    if m is None:
        m = n.bit_length()
    signs = _signs(n, m)
    return StepFunction.from_int_arrays(-m, 0, signs, None, 1)


def _signs(n: int, d: int) -> np.ndarray:
    """``W_n`` sampled on the ``2**d`` cells of [0, 1), as an int64 array of +-1."""
    if n >> d:
        raise ValueError(f"W_{n} is not constant on cells of length 2^-{d}")
    rel = np.arange(1 << d, dtype=np.int64)
    return 1 - 2 * (np.bitwise_count(rel & bit_reverse(n, d)) & 1).astype(np.int64)


def _check_tile(s: TileLike) -> None:
    if s.space.k + s.freq.k != 0:
        raise ValueError(f"{s!r} is not a tile (area must be 1)")


def packet_cell_scale(s: TileLike) -> int:
    """Coarsest cell scale on which ``w_s`` is constant."""
    return s.space.k - s.freq.n.bit_length()


def packet_signs(s: TileLike, cell_scale: int) -> np.ndarray:
    """Sign pattern of ``w_s`` on the cells of ``I_s`` at ``cell_scale``."""
    return _signs(s.freq.n, s.space.k - cell_scale)


def wave_packet(s: TileLike, cell_scale: int | None = None) -> StepFunction:
    """``w_s = |I_s|**-1/2 W_{n_s}((x - l(I_s)) / |I_s|)`` with ``n_s = |I_s| l(omega_s)``."""
    _check_tile(s)
    c = packet_cell_scale(s) if cell_scale is None else cell_scale
    if c > packet_cell_scale(s):
        raise ValueError("cell scale too coarse for this wave packet")
    amp = half_power_of_two(-s.space.k)
    start = s.space.n << (s.space.k - c)
    signs = packet_signs(s, c)
    return StepFunction._trusted(c, {start + i: (amp if v > 0 else -amp) for i, v in enumerate(signs)})


def packet_coefficient(f: StepFunction, s: TileLike) -> ExactScalar:
    """Exact ``<f, w_s>`` without materialising the packet."""
    _check_tile(s)
    if not f:
        return ZERO
    I = s.space
    m = s.freq.n
    c = f.cell_scale
    if c > I.k:
        # f is constant on I and only W_0 has nonzero mean
        if m:
            return ZERO
        return f.value_at_cell(I.n >> (c - I.k)) * half_power_of_two(I.k)
    d = I.k - c
    if m >> d:
        # a Rademacher factor finer than the cells averages to zero on each cell
        return ZERO
    view = f.int_view()
    lo = max(I.n << d, view.start)
    hi = min((I.n + 1) << d, view.stop)
    if lo >= hi:
        return ZERO
    rel = np.arange(lo - (I.n << d), hi - (I.n << d), dtype=np.int64)
    signs = 1 - 2 * (np.bitwise_count(rel & bit_reverse(m, d)) & 1).astype(np.int64)
    sa = int(np.dot(view.a[lo - view.start : hi - view.start], signs))
    sb = int(np.dot(view.b[lo - view.start : hi - view.start], signs)) if view.b is not None else 0
    if not sa and not sb:
        return ZERO
    scale = pow2(c) / view.den
    return ExactScalar(Fraction(sa) * scale, Fraction(sb) * scale) * half_power_of_two(-I.k)


def synthesize(terms: Iterable[tuple[TileLike, ExactScalar]], cell_scale: int | None = None) -> StepFunction:
    """Exact ``sum_s c_s w_s`` for ``(tile, coefficient)`` pairs."""
    terms = [(s, ExactScalar.coerce(c)) for s, c in terms]
    for s, _ in terms:
        _check_tile(s)
    terms = [(s, c) for s, c in terms if c]
    if not terms:
        return StepFunction.zero(0 if cell_scale is None else cell_scale)
    c_min = min(packet_cell_scale(s) for s, _ in terms)
    c = c_min if cell_scale is None else cell_scale
    if c > c_min:
        raise ValueError("cell scale too coarse for these wave packets")
    # cell values of each packet: coefficient * 2**(-k/2) * sign
    vals = [(s, c_ * half_power_of_two(-s.space.k)) for s, c_ in terms]
    den = 1
    for _, v in vals:
        den = math.lcm(den, v.a.denominator, v.b.denominator)
    lo = min(s.space.n << (s.space.k - c) for s, _ in terms)
    hi = max((s.space.n + 1) << (s.space.k - c) for s, _ in terms)
    bound = sum(abs(v.a) * den + abs(v.b) * den for _, v in vals)
    dtype = np.int64 if bound < (1 << 62) else object
    A = np.zeros(hi - lo, dtype=dtype)
    B = np.zeros(hi - lo, dtype=dtype)
    has_b = False
    for s, v in vals:
        start = (s.space.n << (s.space.k - c)) - lo
        signs = packet_signs(s, c)
        if dtype is object:
            signs = signs.astype(object)
        na = int(v.a * den)
        nb = int(v.b * den)
        n = len(signs)
        if na:
            A[start : start + n] += na * signs
        if nb:
            has_b = True
            B[start : start + n] += nb * signs
    return StepFunction.from_int_arrays(c, lo, A, B if has_b else None, den)
