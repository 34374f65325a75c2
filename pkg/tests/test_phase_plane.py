from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from walshqt.dyadic import DyadicInterval
from walshqt.fixtures import random_convex_jtree, rng
from walshqt.phase_plane import (
    Quartile,
    Region,
    Tile,
    canonical_order,
    convex_hull,
    convex_violation,
    disjoint,
    fefferman_le,
    grandchildren,
    in_qt1,
    intermediates,
    is_convex,
    shadow,
)


def quartiles_in_box(kmin, kmax, domain_exp=2, freq_exp=4):
    """Every quartile with ``kmin <= k <= kmax`` inside ``[0, 2**domain_exp) x [0, 2**freq_exp)``."""
    out = []
    for k in range(kmin, kmax + 1):
        for n in range(1 << max(0, domain_exp - k)):
            for m in range(1 << max(0, freq_exp - (2 - k))):
                out.append(Quartile.make(k, n, m))
    return out


quartiles = st.builds(Quartile.make, st.integers(-4, 2), st.integers(0, 15), st.integers(0, 15))


def test_area_is_enforced():
    with pytest.raises(ValueError):
        Tile(DyadicInterval(0, 0), DyadicInterval(1, 0))
    with pytest.raises(ValueError):
        Quartile(DyadicInterval(0, 0), DyadicInterval(0, 0))


def test_grandchildren_geometry():
    s = Quartile.make(0, 1, 2)
    f = grandchildren(s, "frequency")
    sp = grandchildren(s, "spatial")
    assert [t.freq for t in f] == list(s.freq.grandchildren())
    assert all(t.space == s.space for t in f)
    assert [t.space for t in sp] == list(s.space.grandchildren())
    assert all(t.freq == s.freq for t in sp)
    assert s.grandchild(3) == f[2]
    # each family tiles the quartile
    assert shadow(f) == shadow([s]) == shadow(sp)
    with pytest.raises(ValueError):
        grandchildren(s, "diagonal")


@given(quartiles, quartiles, quartiles)
def test_fefferman_order_is_a_partial_order(a, b, c):
    assert fefferman_le(a, a)
    if fefferman_le(a, b) and fefferman_le(b, a):
        assert a == b
    if fefferman_le(a, b) and fefferman_le(b, c):
        assert fefferman_le(a, c)


@given(quartiles, quartiles)
def test_disjoint_means_no_common_point(a, b):
    meet = a.space.intersects(b.space) and a.freq.intersects(b.freq)
    assert disjoint(a, b) == (not meet)


def test_qt1_parity():
    assert in_qt1(Quartile.make(-2, 0, 0))
    assert not in_qt1(Quartile.make(-1, 0, 0))


def test_intermediates_match_brute_force():
    box = [q for q in quartiles_in_box(-4, 2) if in_qt1(q)]
    for s, t in product(box, box):
        if not fefferman_le(s, t) or s == t:
            continue
        brute = sorted(
            (u for u in box if u not in (s, t) and fefferman_le(s, u) and fefferman_le(u, t)),
            key=lambda q: q.space.k,
        )
        assert intermediates(s, t) == brute


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_convex_hull_is_smallest_convex_superset(seed):
    R = rng(seed, "hull")
    box = [q for q in quartiles_in_box(-4, 2) if in_qt1(q)]
    S = set(R.sample(box, R.randint(1, 6)))
    H = convex_hull(S)
    assert S <= H
    assert is_convex(H)
    # brute-force closure to a fixed point
    closure = set(S)
    while True:
        add = {u for u in box for s in closure for t in closure if fefferman_le(s, u) and fefferman_le(u, t)}
        if add <= closure:
            break
        closure |= add
    assert H == closure


def test_convex_violation_reports_the_gap():
    top = Quartile.make(2, 0, 0)
    low = Quartile(DyadicInterval(-2, 0), top.freq.ancestor(4))
    bad = convex_violation({top, low})
    assert bad is not None and bad[1].space.k == 0
    assert convex_violation({top, low} | set(intermediates(low, top))) is None
    with pytest.raises(ValueError):
        is_convex({Quartile.make(1, 0, 0)})


def test_fixture_trees_are_convex():
    for i in range(30):
        fx = random_convex_jtree(rng(0, "pp", i), i % 4 + 1)
        assert is_convex(fx.tree.members)


def test_canonical_order_is_deterministic():
    S = quartiles_in_box(-2, 0, 1, 3)
    assert canonical_order(S) == canonical_order(reversed(S))
    assert canonical_order(S)[0].space.k == -2


def test_region_canonical_equality():
    a = Region.from_rectangles([Quartile.make(0, 0, 0)])
    b = Region.from_rectangles(Quartile.make(0, 0, 0).spatial_grandchildren())
    assert a == b
    assert a.area == 4
    two = Region.from_rectangles([Tile.make(0, 0, 0), Tile.make(0, 0, 1)])
    # [0, 1) x [0, 2) on the coarsest grid is a single atom
    assert two == Region(0, 1, frozenset({(0, 0)}))
    assert two.area == 2
    assert (a | two).area == 4 + 2 - 2  # the two tiles lie inside the quartile
    assert shadow([]) == Region(0, 0, frozenset())


@given(st.lists(quartiles, min_size=1, max_size=5))
def test_shadow_is_order_independent(S):
    assert shadow(S) == shadow(list(reversed(S)))
    parts = Region(0, 0, frozenset())
    for s in S:
        parts = parts | shadow([s])
    assert parts == shadow(S)
    assert shadow(S).area <= 4 * len(S)
