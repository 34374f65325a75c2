from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from walshqt.decomposition import (
    Forest,
    forest_estimate,
    full_size_decomposition,
    iterate_size_lemma,
    size_split,
)
from walshqt.dyadic import ExactScalar, StepFunction, l2_norm_squared, pow2
from walshqt.experiments import size_fixture
from walshqt.fixtures import random_convex_set, random_forest, random_step_function, rng
from walshqt.phase_plane import Quartile, convex_violation, fefferman_le
from walshqt.quartile_operator import trilinear
from walshqt.sizes import Coefficients, energy, size
from walshqt.trees import Tree
from walshqt.walsh import synthesize, wave_packet


def test_forest_rejects_shared_members():
    s = Quartile.make(0, 0, 0)
    with pytest.raises(ValueError):
        Forest((Tree(s, {s}), Tree(s, {s})))


def test_forest_basics():
    F = random_forest(rng(0, "forest"), 2)
    assert F.tops == 4
    assert F.check_convex()
    assert Forest.from_json(F.to_json()) == F
    keep = set(list(F.members)[:3])
    G = F.restrict(keep)
    assert G.members == keep
    assert all(len(T) for T in G)


def test_size_split_on_a_single_spike():
    s = Quartile.make(0, 0, 0)
    t = Quartile(s.space.grandchildren()[0], s.freq.parent().parent())
    assert fefferman_le(t, s)
    S = {s, t}
    f = wave_packet(s.grandchild(2)).scale(2)
    sigma_sq = size(S, f).size_sq
    split = size_split(S, f, sigma_sq)
    assert split.selected == (s,)
    # t lies below s, so the tree takes both
    assert split.lo == frozenset()
    assert split.hi.tops == 1


def test_size_split_rejects_bad_inputs():
    S, c = random_convex_set(rng(1, "bad"))
    f = random_step_function(rng(1, "bad-f"), c, 0, 64)
    sz = size(S, f).size_sq
    if sz:
        with pytest.raises(ValueError, match="exceeds"):
            size_split(S, f, sz / 2)
    top = Quartile.make(4, 0, 0)
    low = Quartile(top.space.grandchildren()[0].grandchildren()[0], top.freq.ancestor(top.freq.k + 4))
    with pytest.raises(ValueError, match="convex"):
        size_split({top, low}, f, 10**6)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_size_split_postconditions(seed):
    S, f, factor = size_fixture(seed, seed % 31)
    cf = Coefficients(f)
    sigma_sq = size(S, cf).size_sq * factor
    if not sigma_sq:
        return
    split = size_split(S, cf, sigma_sq)
    assert size(split.lo, cf).size_sq <= sigma_sq / 4
    assert split.hi.tops * sigma_sq <= 4 * l2_norm_squared(f)
    assert convex_violation(split.lo) is None
    assert split.hi.check_convex()
    assert split.lo | split.hi_members == frozenset(S)
    for T in split.hi:
        assert energy(T.top, cf) > sigma_sq / 4 * T.top.space.length


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6))
def test_iterated_size_lemma(seed):
    S, f, _ = size_fixture(seed, seed % 29)
    cf = Coefficients(f)
    cap_sq = size(S, cf).size_sq * 2 or ExactScalar(1)
    classes = iterate_size_lemma(S, cf, cap_sq)
    seen = set()
    norm = l2_norm_squared(f)
    last = -1
    for cl in classes:
        assert not (seen & cl.members)
        seen |= cl.members
        if cl.n is None:
            assert size(cl.members, cf).size_sq == 0
            continue
        assert cl.n > last
        last = cl.n
        # each class is a forest of bounded tops below the level's size
        assert size(cl.members, cf).size_sq <= cap_sq * pow2(-2 * cl.n)
        assert cl.forest.tops * cap_sq * pow2(-2 * cl.n) <= 4 * norm
    assert seen == set(S)


def test_iterated_size_lemma_zero_function():
    S, _ = random_convex_set(rng(2, "zero"))
    classes = iterate_size_lemma(S, StepFunction.zero(), 1)
    assert len(classes) == 1 and classes[0].n is None
    assert iterate_size_lemma([], StepFunction.zero(), 1) == []
    with pytest.raises(ValueError):
        f = wave_packet(next(iter(S)).grandchild(1)).scale(100)
        iterate_size_lemma(S, f, 1)


def test_full_decomposition_partitions():
    for i in range(8):
        S, f2, _ = size_fixture(4, i)
        f3 = random_step_function(rng(4, "f3", i), -10, 0, 1 << 14)
        caps = (Fraction(64), Fraction(64))
        cells = full_size_decomposition(S, f2, f3, caps)
        members = [c.members for c in cells]
        assert frozenset().union(*members) == frozenset(S)
        assert sum(len(m) for m in members) == len(S)
        for c in cells:
            assert c.forest.members == c.members or c.witness == "none"
            assert c.to_json()["count"] == len(c.members)


def packet_function(R, F: Forest, weight=1):
    """Random combination of grandchild packets of the forest's members."""
    members = sorted(F.members)
    terms = [(s.grandchild(R.randint(1, 4)), R.randint(-3, 3) * weight) for s in R.sample(members, max(1, len(members) // 2))]
    return synthesize(terms + [(members[0].grandchild(1), 1)])


def test_forest_estimate_branches():
    seen = set()
    for i in range(30):
        R = rng(5, "fe", i)
        F = random_forest(R, R.choice((1, 2, 4)))
        fs = [packet_function(R, F) for _ in range(3)]
        if i % 3 == 0:
            # concentrate f1 on a few members so the iteration branch fires
            fs[0] = synthesize([(s.grandchild(1), 16) for s in sorted(F.members)[:3]])
        try:
            audit = forest_estimate(F, *fs, hypothesis_constant=10**9)
        except ValueError:
            continue
        seen.add(audit.branch)
        assert audit.value == trilinear(F.members, *fs)
        assert abs(float(audit.value)) <= audit.tree_sum + 1e-9
        assert audit.to_json()["branch"] == audit.branch
        perm = forest_estimate(F, *fs, permute=True, hypothesis_constant=10**9)
        assert perm.value == audit.value
    assert {"direct", "iterate"} <= seen


def test_forest_estimate_checks_its_hypothesis():
    F = random_forest(rng(6, "hyp"), 4)
    f = synthesize([(s.grandchild(2), 1) for s in F.members])
    with pytest.raises(ValueError, match="hypothesis"):
        forest_estimate(F, f, f, f, hypothesis_constant=Fraction(1, 10**6))
    assert forest_estimate(F, StepFunction.zero(), f, f, hypothesis_constant=10**9).branch == "trivial"
