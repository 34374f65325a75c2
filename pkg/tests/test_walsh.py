import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from walshqt.dyadic import SQRT2, DyadicInterval, ExactScalar, StepFunction, inner_product, l2_norm_squared
from walshqt.fixtures import random_step_function, rng
from walshqt.phase_plane import Tile
from walshqt.walsh import (
    bit_reverse,
    packet_cell_scale,
    packet_coefficient,
    synthesize,
    walsh_function,
    walsh_sign,
    wave_packet,
)


def trig_walsh(n: int, x: float) -> int:
    """Independent oracle: prod over the binary digits eps_k of n of sign(sin(2**k 2 pi x))**eps_k."""
    out = 1
    k = 0
    while n >> k:
        if (n >> k) & 1:
            out *= 1 if math.sin(2**k * 2 * math.pi * x) > 0 else -1
        k += 1
    return out


@given(st.integers(0, 255), st.data())
def test_walsh_sign_matches_trigonometric_oracle(n, data):
    m = max(n.bit_length(), data.draw(st.integers(0, 9)))
    t = data.draw(st.integers(0, (1 << m) - 1))
    assert walsh_sign(n, t, m) == trig_walsh(n, (t + 0.5) / 2**m)


def test_walsh_frozen_values():
    assert [walsh_sign(1, t, 1) for t in (0, 1)] == [1, -1]
    # the cell containing 3/8 at scale -3 is t = 3
    assert walsh_sign(3, 3, 3) == -1
    assert list(walsh_function(2).to_array(0, 4)) == [1, -1, 1, -1]
    assert list(walsh_function(3).to_array(0, 4)) == [1, -1, -1, 1]


def test_walsh_sign_rejects_coarse_cells():
    with pytest.raises(ValueError):
        walsh_sign(4, 0, 2)
    with pytest.raises(ValueError):
        walsh_sign(1, 2, 1)


@given(st.integers(0, (1 << 12) - 1), st.integers(12, 14))
def test_bit_reverse_is_an_involution(x, w):
    assert bit_reverse(bit_reverse(x, w), w) == x


def test_walsh_functions_are_orthonormal():
    fs = [walsh_function(n, 4) for n in range(16)]
    for a in range(16):
        for b in range(16):
            assert inner_product(fs[a], fs[b]) == (1 if a == b else 0)


def test_wave_packet_frozen_example():
    # [0, 1/2) x [2, 4)
    s = Tile(DyadicInterval(-1, 0), DyadicInterval(1, 1))
    w = wave_packet(s)
    assert w.cell_scale == -2
    assert dict(w.cells) == {0: SQRT2, 1: -SQRT2}
    assert l2_norm_squared(w) == 1
    assert packet_cell_scale(s) == -2


def test_wave_packet_support_and_norm():
    s = Tile.make(-3, 5, 6)
    w = wave_packet(s)
    assert w.support().maximal_intervals() == [s.space]
    assert l2_norm_squared(w) == 1
    assert {abs(v) for v in w.cells.values()} == {SQRT2 * 2}


def test_packet_at_finer_cells_is_the_same_function():
    s = Tile.make(1, 2, 3)
    assert wave_packet(s, -4) == wave_packet(s)
    with pytest.raises(ValueError):
        wave_packet(s, 5)


def test_non_tile_rejected():
    with pytest.raises(ValueError):
        wave_packet(type("R", (), {"space": DyadicInterval(0, 0), "freq": DyadicInterval(1, 0)})())


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_coefficient_fast_path_matches_inner_product(seed):
    R = rng(seed, "coef")
    c = R.randint(-5, 0)
    f = random_step_function(R, c, R.randrange(8), R.randint(1, 40))
    f = f + StepFunction(c, {R.randrange(40): SQRT2})
    k = R.randint(c - 1, 2)
    s = Tile.make(k, R.randrange(max(1, 48 >> max(0, k + 5))), R.randrange(1 << max(0, k - c + 1)))
    direct = inner_product(f, wave_packet(s))
    assert packet_coefficient(f, s) == direct


def test_parseval_on_a_block():
    R = rng(7, "parseval")
    f = random_step_function(R, -3, 0, 8)
    I = DyadicInterval(0, 0)
    total = sum((packet_coefficient(f, Tile(I, DyadicInterval(0, n))) ** 2 for n in range(8)), ExactScalar(0))
    assert total == l2_norm_squared(f)


def test_synthesis_inverts_analysis():
    R = rng(3, "synth")
    f = random_step_function(R, -3, 8, 8) + StepFunction(-3, {9: SQRT2})
    I = DyadicInterval(0, 1)
    tiles = [Tile(I, DyadicInterval(0, n)) for n in range(8)]
    assert synthesize([(t, packet_coefficient(f, t)) for t in tiles]) == f


def test_synthesis_of_nothing_is_zero():
    assert not synthesize([])
    assert not synthesize([(Tile.make(0, 0, 0), 0)])
