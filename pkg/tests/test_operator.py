from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from walshqt.dyadic import SQRT2, DyadicInterval, ExactScalar, StepFunction, inner_product, l2_norm_squared
from walshqt.fixtures import random_convex_jtree, random_step_function, rng
from walshqt.phase_plane import Quartile
from walshqt.quartile_operator import apply, coefficient_triples, trilinear, trilinear_tree
from walshqt.sizes import Coefficients, energy, size, size_star
from walshqt.trees import Tree, project_quartile
from walshqt.walsh import wave_packet


def random_set(R, count=6):
    out = set()
    while len(out) < count:
        k = R.choice((-2, 0, 2))
        out.add(Quartile.make(k, R.randrange(max(1, 4 >> max(k, 0))), R.randrange(1 << max(0, 2 + k))))
    return out


def test_single_quartile_matched_packets():
    s = Quartile.make(-2, 1, 3)
    w1, w2, w3 = (wave_packet(s.grandchild(j)) for j in (1, 2, 3))
    V = apply([s], w1, w2)
    # |I_s|**-1/2 = 2
    assert V == w3.scale(2)
    assert trilinear([s], w1, w2, w3) == 2
    assert trilinear([s], w1, w2, wave_packet(s.grandchild(4))) == 0


def test_empty_set_gives_zero():
    f = random_step_function(rng(0, "e"), -2, 0, 8)
    assert not apply([], f, f)
    assert trilinear([], f, f, f) == 0


def test_apply_matches_dense_oracle():
    R = rng(1, "apply")
    for _ in range(5):
        S = random_set(R)
        f1, f2 = (random_step_function(R, -5, 0, 128) for _ in range(2))
        V = apply(S, f1, f2)
        x = np.zeros(128)
        for s in S:
            a, b, c = (wave_packet(s.grandchild(j), -5).to_array(0, 128, -5) for j in (1, 2, 3))
            v1 = float(np.dot(f1.to_array(0, 128, -5), a)) / 32
            v2 = float(np.dot(f2.to_array(0, 128, -5), b)) / 32
            x += 2.0 ** (-s.space.k / 2) * v1 * v2 * c
        assert np.allclose(V.to_array(0, 128, -5), x, atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_trilinear_is_the_pairing_with_apply(seed):
    R = rng(seed, "pair")
    S = random_set(R, R.randint(1, 8))
    f1, f2, f3 = (random_step_function(R, -4, 0, 64) for _ in range(3))
    f3 = f3 + StepFunction(-4, {3: SQRT2})
    assert trilinear(S, f1, f2, f3) == inner_product(apply(S, f1, f2), f3)


def test_trilinear_is_linear_in_each_slot():
    R = rng(2, "lin")
    S = random_set(R)
    f, g, h, k = (random_step_function(R, -4, 0, 64) for _ in range(4))
    lam = Fraction(3, 7)
    assert trilinear(S, f + g.scale(lam), h, k) == trilinear(S, f, h, k) + lam * trilinear(S, g, h, k)
    assert trilinear(S, f, h + g, k) == trilinear(S, f, h, k) + trilinear(S, f, g, k)


def test_coefficient_triples_skip_vanishing_terms():
    s = Quartile.make(0, 0, 0)
    w1 = wave_packet(s.grandchild(1))
    assert list(coefficient_triples([s], w1, w1)) == []


def test_energy_is_the_projection_norm():
    R = rng(3, "energy")
    f = random_step_function(R, -5, 0, 64)
    for s in random_set(R, 8):
        assert energy(s, f) == l2_norm_squared(project_quartile(s, f))


def test_size_and_argmax():
    s = Quartile.make(0, 0, 0)
    t = Quartile.make(-2, 0, 0)
    f = wave_packet(t.grandchild(2)).scale(3)
    rep = size([s, t], f)
    # energy 9 on |I_t| = 1/4
    assert rep.size_sq == 36
    assert rep.argmax == t
    assert rep.size == pytest.approx(6)
    assert size([], f).size_sq == 0
    assert rep.to_json()["size_sq"] == "36"


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10**6))
def test_size_star_is_controlled_by_size(seed):
    R = rng(seed, "star")
    S = random_set(R, 5)
    f = random_step_function(R, -5, 0, 128)
    # frequency grandchildren share I_s; spatial ones have a quarter of its length
    assert size_star(S, f) <= 4 * size(S, f).size_sq


def test_coefficient_cache_reuses_values():
    f = random_step_function(rng(4, "cache"), -3, 0, 16)
    cf = Coefficients(f)
    s = Quartile.make(-1, 0, 0)
    a = cf.grandchildren(s)
    assert cf.grandchildren(s) == a
    assert cf.f is f


def test_tree_estimate_parts_and_audit():
    for i in range(20):
        R = rng(9, "tree", i)
        fx = random_convex_jtree(R, i % 4 + 1)
        I = fx.tree.top.space
        c = fx.cell_scale
        fs = [random_step_function(R, c, I.n << (I.k - c), 1 << (I.k - c)) for _ in range(3)]
        est = trilinear_tree(fx.tree, *fs)
        assert est.value == trilinear(fx.tree.members, *fs)
        assert est.value == est.top_value + sum(est.part_values.values(), ExactScalar(0))
        assert est.satisfies(65)
        assert est.to_json()["tag"] == est.tag
        assert est.tag in (fx.j, "all")


def test_tree_estimate_exact_comparison():
    top = Quartile.make(0, 0, 0)
    w = [wave_packet(top.grandchild(j)) for j in (1, 2, 3)]
    est = trilinear_tree(Tree(top, {top}), *w)
    # Lambda = 1 and every size is 1 on a unit interval
    assert est.value == 1
    assert est.satisfies(1)
    assert not est.satisfies(Fraction(99, 100))
    assert est.ratio == pytest.approx(1)
