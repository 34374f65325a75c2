"""Floating-point dense path: the quartile operator over full scale bands via fast Walsh-Hadamard transforms.

A function on ``[0, 2**m)`` sampled at cell scale ``c`` is an array of length
``2**(m - c)``.  Splitting it into blocks of ``L = 2**(k - c)`` cells, the Paley
coefficient of the packet with frequency index ``n`` on a block equals
``2**(c - k/2)`` times the natural-order Hadamard coefficient at ``bitrev(n)``.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable

import numpy as np

from .dyadic import StepFunction, parse_exponent

__all__ = [
    "fwht",
    "bitrev_permutation",
    "paley_coefficients",
    "paley_synthesis",
    "band_operator",
    "dense_weak_constant",
    "dense_lp_norm",
    "dense_lorentz",
    "to_dense",
]


def fwht(x: np.ndarray) -> np.ndarray:
    """Unnormalised natural-order Walsh-Hadamard transform along the last axis."""
    a = np.array(x, dtype=float, copy=True)
    n = a.shape[-1]
    if n & (n - 1):
        raise ValueError("length must be a power of 2")
    lead = a.shape[:-1]
    h = 1
    while h < n:
        a = a.reshape(*lead, n // (2 * h), 2, h)
        u = a[..., 0, :] + a[..., 1, :]
        v = a[..., 0, :] - a[..., 1, :]
        a = np.stack((u, v), axis=-2)
        h *= 2
    return a.reshape(*lead, n)


def bitrev_permutation(width: int) -> np.ndarray:
    """``perm[n] = bitrev_width(n)``."""
    n = np.arange(1 << width, dtype=np.int64)
    out = np.zeros_like(n)
    for b in range(width):
        out |= ((n >> b) & 1) << (width - 1 - b)
    return out


def paley_coefficients(values: np.ndarray, cell_scale: int, k: int) -> np.ndarray:
    """``coef[b, n] = <f, w_(I_b, n)>`` for the blocks ``I_b`` of length ``2**k``."""
    d = k - cell_scale
    L = 1 << d
    blocks = np.asarray(values, dtype=float).reshape(-1, L)
    H = fwht(blocks)
    return H[:, bitrev_permutation(d)] * 2.0 ** (cell_scale - k / 2)


def paley_synthesis(coef: np.ndarray, cell_scale: int, k: int) -> np.ndarray:
    """Inverse of :func:`paley_coefficients`: ``sum coef[b, n] w_(I_b, n)`` sampled on the cells."""
    d = k - cell_scale
    D = np.zeros_like(coef)
    D[:, bitrev_permutation(d)] = coef
    return (fwht(D) * 2.0 ** (-k / 2)).reshape(-1)


def band_operator(f1: np.ndarray, f2: np.ndarray, cell_scale: int, scales: Iterable[int]) -> np.ndarray:
    """``V_S(f1, f2)`` for ``S`` = every quartile with ``I_s`` inside the domain and ``|I_s| = 2**k``, ``k`` in ``scales``.

    Quartiles whose packets oscillate faster than the cells have vanishing
    coefficients and are skipped.
    """
    f1 = np.asarray(f1, dtype=float)
    f2 = np.asarray(f2, dtype=float)
    out = np.zeros_like(f1)
    total_exp = int(round(math.log2(len(f1))))
    for k in scales:
        d = k - cell_scale
        if d < 2 or d > total_exp:
            continue
        a1 = paley_coefficients(f1, cell_scale, k)
        a2 = paley_coefficients(f2, cell_scale, k)
        c3 = np.zeros_like(a1)
        c3[:, 2::4] = 2.0 ** (-k / 2) * a1[:, 0::4] * a2[:, 1::4]
        out += paley_synthesis(c3, cell_scale, k)
    return out


def dense_weak_constant(values: np.ndarray, cell_length: float, r) -> float:
    """``sup_lambda lambda |{|v| > lambda}|**(1/r)`` for samples on cells of equal length."""
    v = np.sort(np.abs(np.asarray(values, dtype=float)))[::-1]
    v = v[v > 0]
    if not len(v):
        return 0.0
    t = np.arange(1, len(v) + 1) * cell_length
    return float(np.max(v * t ** (1.0 / float(r))))


def dense_lp_norm(values: np.ndarray, cell_length: float, p) -> float:
    p = float(p)
    return float((np.sum(np.abs(values) ** p) * cell_length) ** (1.0 / p))


def dense_lorentz(values: np.ndarray, cell_length: float, p, q) -> float:
    """``L^{p,q}`` quasi-norm of cell samples (``q < inf``)."""
    p, q = float(p), float(q)
    v = np.sort(np.abs(np.asarray(values, dtype=float)))[::-1]
    v = v[v > 0]
    if not len(v):
        return 0.0
    t1 = np.arange(1, len(v) + 1) * cell_length
    t0 = t1 - cell_length
    e = q / p
    return float(np.sum(v**q * (p / q) * (t1**e - t0**e)) ** (1.0 / q))


def to_dense(f: StepFunction, cell_scale: int, m: int) -> np.ndarray:
    """Samples of ``f`` on ``[0, 2**m)`` at ``cell_scale``."""
    if f and f.cell_scale < cell_scale:
        raise ValueError("target scale coarser than the function")
    return f.to_array(0, 1 << (m - cell_scale), cell_scale if f else None)
