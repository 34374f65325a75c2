"""Property suites, endpoint sweeps and the conjecture probe, each producing a JSON report.

Reports contain no timestamps; the same configuration always yields the same bytes.
"""

from __future__ import annotations

import json
import math
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from typing import Callable, Sequence

import numpy as np

from . import __version__
from .analysis import lorentz_quasinorm, layer_decompose, layer_aggregate, weak_constant
from .decomposition import size_split
from .dense import band_operator, dense_lp_norm, dense_weak_constant
from .dyadic import (
    CellSet,
    DyadicInterval,
    ExactScalar,
    StepFunction,
    inner_product,
    l2_norm_squared,
    lp_norm,
    lp_norm_exact,
)
from .fixtures import (
    random_convex_jtree,
    random_convex_set,
    random_disjoint_tile_pair,
    random_forest,
    random_step_function,
    random_values,
    rng,
    spiky_function,
)
from .mfcz import cz_decompose, exceptional_sets, good_quartiles
from .phase_plane import Quartile, convex_violation, fefferman_le, shadow
from .quartile_operator import trilinear, trilinear_tree
from .sizes import Coefficients, energy, size
from .trees import (
    Tree,
    check_pairwise_disjoint,
    check_spatial_property,
    classify,
    disjointify,
    project_tiles,
    stars,
)
from .walsh import synthesize, wave_packet

__all__ = [
    "SUITES",
    "DEFAULT_TRIALS",
    "TREE_CONSTANT",
    "run_suite",
    "run_all",
    "endpoint_report",
    "signed_report",
    "conjecture_report",
    "dumps",
    "power_family",
]

TREE_CONSTANT = 65
JN_CONSTANT = 4
A_VALUES = (1, 2, 4, 8, 16)


def dumps(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=1) + "\n"


def _map(fn: Callable, args: Sequence, jobs: int) -> list:
    """Ordered map, optionally across processes."""
    if jobs <= 1 or len(args) < 2:
        return [fn(*a) for a in args]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(_star, [(fn, a) for a in args], chunksize=max(1, len(args) // (4 * jobs))))


def _star(item):
    fn, a = item
    return fn(*a)


# ---------------------------------------------------------------------------
# orthogonality


def orthogonality_trial(seed: int, i: int) -> dict:
    s, t = random_disjoint_tile_pair(rng(seed, "orthogonality", i))
    value = inner_product(wave_packet(s), wave_packet(t))
    return {
        "tiles": [s.to_json(), t.to_json()],
        "value": str(value),
        "ok": not value,
    }


def _orthogonality_summary(records: list) -> dict:
    ks = [r["tiles"][a]["space"][0] for r in records for a in (0, 1)]
    span = max(ks) - min(ks) if ks else 0
    return {
        "nonzero": sum(not r["ok"] for r in records),
        "scale_span": span,
        "pass": all(r["ok"] for r in records) and span >= 8,
    }


# ---------------------------------------------------------------------------
# j-tree fixtures: disjointification, projections, John-Nirenberg, tree estimate


def jtree_fixture(seed: int, i: int):
    """The ``i``-th convex ``j``-tree (``j`` cycles through 1..4) and three test functions."""
    j = i % 4 + 1
    R = rng(seed, "jtree", i)
    fx = random_convex_jtree(R, j)
    T = fx.tree
    c = fx.cell_scale
    I = T.top.space
    start = I.n << (I.k - c)
    count = 2 << (I.k - c)
    fs = []
    for _ in range(3):
        f = random_step_function(R, c, start, count)
        # a few irrational cells so that Q(sqrt 2) arithmetic is exercised
        extra = {start + R.randrange(count): ExactScalar(0, Fraction(R.randint(-3, 3), 2)) for _ in range(3)}
        fs.append(f + StepFunction(c, extra))
    if i % 8 >= 6:
        # matched packets: f_j carries the j-th frequency grandchild of every member
        fs = []
        for jj in range(3):
            terms = [(s.grandchild(jj + 1), R.choice((-1, 1))) for s in T]
            fs.append(synthesize(terms, c))
    return fx, fs


def projections_trial(seed: int, i: int) -> dict:
    fx, fs = jtree_fixture(seed, i)
    T, j = fx.tree, fx.j
    f = fs[0]
    tiles = disjointify(T, j)
    disjoint = check_pairwise_disjoint(tiles) is None
    same_shadow = shadow(tiles) == shadow(T.members)
    spatial = check_spatial_property(tiles, T.members) is None
    proj = project_tiles(tiles, f)
    cf, cp = Coefficients(f), Coefficients(proj)
    star = stars(T.members)
    mismatches = sum(cf(t) != cp(t) for t in star)
    bessel = l2_norm_squared(proj) <= l2_norm_squared(f)
    idempotent = project_tiles(tiles, proj) == proj
    return {
        "j": j,
        "quartiles": len(T),
        "tiles": len(tiles),
        "star_tiles": len(star),
        "disjoint": disjoint,
        "shadow_equal": same_shadow,
        "spatial_property": spatial,
        "identity_mismatches": mismatches,
        "bessel": bessel,
        "idempotent": idempotent,
        "ok": disjoint and same_shadow and spatial and mismatches == 0 and bessel and idempotent,
    }


def _max_multiplicity(tiles) -> int:
    tiles = list(tiles)
    if not tiles:
        return 0
    c = min(t.space.k for t in tiles)
    counts: dict = {}
    for t in tiles:
        for p in t.space.cell_range(c):
            counts[p] = counts.get(p, 0) + 1
    return max(counts.values())


def john_nirenberg_trial(seed: int, i: int) -> dict:
    fx, fs = jtree_fixture(seed, i)
    T, j = fx.tree, fx.j
    f = fs[0]
    size_sq = size(T.members, f).size_sq
    part = classify(T).parts[j]
    sub = Tree(T.top, part)
    tiles = disjointify(sub, j) if part else frozenset()
    proj = project_tiles(tiles, f)
    L = T.top.space.length
    sup = lp_norm_exact(proj, math.inf)
    l1 = lp_norm_exact(proj, 1)
    l2sq = l2_norm_squared(proj)
    k2 = JN_CONSTANT**2
    ok_inf = sup * sup <= k2 * size_sq
    ok_1 = l1 * l1 <= k2 * L * L * size_sq
    ok_2 = l2sq <= k2 * L * size_sq
    mult = _max_multiplicity(tiles)
    ratio = 0.0 if not sup else float(sup) / math.sqrt(float(size_sq))
    return {
        "j": j,
        "part_size": len(part),
        "sup": float(sup),
        "size": math.sqrt(float(size_sq)),
        "ratio": ratio,
        "max_multiplicity": mult,
        "ok_inf": ok_inf,
        "ok_l1": ok_1,
        "ok_l2": ok_2,
        "ok": ok_inf and ok_1 and ok_2 and mult <= 4,
    }


def tree_estimate_trial(seed: int, i: int) -> dict:
    fx, fs = jtree_fixture(seed, i)
    est = trilinear_tree(fx.tree, *fs)
    ok = est.satisfies(TREE_CONSTANT)
    return {
        "j": fx.j,
        "quartiles": len(fx.tree),
        "value": str(est.value),
        "ratio": est.ratio,
        "top_length": str(est.top_length),
        "ok": ok,
    }


# ---------------------------------------------------------------------------
# size lemma


def size_fixture(seed: int, i: int):
    R = rng(seed, "size", i)
    S, c = random_convex_set(R)
    lo = min(s.space.left for s in S)
    hi = max(s.space.right for s in S)
    start = int(lo / Fraction(2) ** c)
    count = int((hi - lo) / Fraction(2) ** c)
    f = random_step_function(R, c, start, count)
    if i % 3 == 0:
        # concentrate energy on a few members so that several trees are selected
        terms = [(s.grandchild(R.randint(1, 4)), R.randint(-6, 6)) for s in R.sample(sorted(S, key=lambda q: (q.space.k, q.space.n, q.freq.n)), min(4, len(S)))]
        f = f + synthesize(terms, c)
    factor = R.choice((Fraction(1), Fraction(4, 3), Fraction(2)))
    return S, f, factor


def size_lemma_trial(seed: int, i: int) -> dict:
    S, f, factor = size_fixture(seed, i)
    cf = Coefficients(f)
    sigma_sq = size(S, cf).size_sq * factor
    if not sigma_sq:
        sigma_sq = ExactScalar(1)
    split = size_split(S, cf, sigma_sq)
    lo, hi = split.lo, split.hi_members
    lo_size = size(lo, cf).size_sq
    norm_sq = l2_norm_squared(f)
    ok_lo = lo_size <= sigma_sq / 4
    ok_tops = split.hi.tops * sigma_sq <= 4 * norm_sq
    ok_convex = convex_violation(lo) is None and convex_violation(hi) is None and split.hi.check_convex()
    ok_partition = (lo | hi) == S and not (lo & hi)
    tops = split.selected
    ok_tops_disjoint = all(not a.intersects(b) for ai, a in enumerate(tops) for b in tops[ai + 1 :])
    energies = sum((energy(t, cf) for t in tops), ExactScalar(0))
    ok_orth = energies <= norm_sq
    return {
        "quartiles": len(S),
        "trees": len(split.hi),
        "lo": len(lo),
        "tops": str(split.hi.tops),
        "ok_lo_size": ok_lo,
        "ok_tops": ok_tops,
        "ok_convex": ok_convex,
        "ok_partition": ok_partition,
        "ok_tops_disjoint": ok_tops_disjoint,
        "ok_orthogonal": ok_orth,
        "ok": ok_lo and ok_tops and ok_convex and ok_partition and ok_tops_disjoint and ok_orth,
    }


# ---------------------------------------------------------------------------
# multi-frequency Calderon-Zygmund


CZ_Q = Fraction(3)


def cz_exceptional_set(f1: StepFunction) -> tuple[CellSet, Fraction]:
    """``{M_2 f1 >= c}`` with ``c`` a power of 2: the smallest with measure at most 1/4, lowered while empty."""
    ex = exceptional_sets(f1, CellSet.empty(), 2)
    c = ex.c
    E1 = ex.E1
    while not E1 and c > Fraction(1, 64):
        trial = exceptional_sets(f1, CellSet.empty(), 2, c=c / 2).E1
        if trial.measure > Fraction(1, 4):
            break
        c /= 2
        E1 = trial
    return E1, c


def cz_fixture(seed: int, i: int):
    base, A = divmod(i, len(A_VALUES))
    A = A_VALUES[A]
    for attempt in range(100):
        # resample until the exceptional set is nonempty, so the decomposition has work to do
        f1 = spiky_function(rng(seed, "cz-f", base, attempt))
        E1, c = cz_exceptional_set(f1)
        if E1:
            break
    anchors = [I.left for I in E1.maximal_intervals()]
    F = random_forest(rng(seed, "cz-forest", base, A), A, anchors=anchors)
    F = F.restrict(good_quartiles(F.members, E1))
    R2 = rng(seed, "cz-g", base)
    f2 = random_step_function(R2, -4, 0, 256)
    f3 = random_step_function(R2, -4, 0, 256)
    return base, A, f1, E1, c, F, f2, f3


def cz_trial(seed: int, i: int) -> dict:
    base, A, f1, E1, c, F, f2, f3 = cz_fixture(seed, i)
    out = cz_decompose(F, f1, CZ_Q, E1, A=A)
    S = F.members
    c2, c3 = Coefficients(f2), Coefficients(f3)
    lam_f = trilinear(S, f1, c2, c3)
    lam_g = trilinear(S, out.g1, c2, c3)
    outside_equal = (out.g1 - f1).restrict(E1) == (out.g1 - f1)
    ok = (
        bool(E1)
        and out.identity_failures == 0
        and not out.violations
        and lam_f == lam_g
        and outside_equal
    )
    return {
        "base": base,
        "A": A,
        "c": str(c),
        "E1_measure": str(E1.measure),
        "quartiles": len(S),
        "trees": len(F),
        "intervals": len(out.intervals),
        "tiles": sum(len(t) for t in out.tiles),
        "checked": out.checked,
        "identity_failures": out.identity_failures,
        "violations": len(out.violations),
        "lambda": str(lam_f),
        "lambda_equal": lam_f == lam_g,
        "g1_norm_sq": float(out.g1_norm_sq),
        "outside_sq": float(out.outside_sq),
        "inside_sq": float(out.inside_sq),
        "sum_N_alpha": out.sum_N_alpha,
        "holder_bound": out.holder_bound,
        "A_bound": out.A_bound,
        "ratio": out.ratio,
        "ok": ok,
    }


def _cz_summary(records: list) -> dict:
    by_A: dict = {}
    for r in records:
        by_A[r["A"]] = max(by_A.get(r["A"], 0.0), r["ratio"])
    base = by_A.get(1)
    growth_ok = base is not None and all(v <= 4 * base for v in by_A.values())
    return {
        "failures": sum(not r["ok"] for r in records),
        "max_ratio_by_A": {str(a): by_A[a] for a in sorted(by_A)},
        "growth_ok": growth_ok,
        "pass": all(r["ok"] for r in records) and growth_ok,
    }


# ---------------------------------------------------------------------------
# layer cake and Lorentz machinery


def layer_function(seed: int, i: int) -> StepFunction:
    R = rng(seed, "layer", i)
    vals = []
    for _ in range(32):
        if R.random() < 0.3:
            vals.append(Fraction(0))
        else:
            vals.append(Fraction(R.choice((-1, 1)) * R.randint(1, 64), 8))
    return StepFunction.from_values(-4, 0, vals)


def layer_cake_trial(seed: int, i: int) -> dict:
    f = layer_function(seed, i)
    layers = layer_decompose(f)
    rec = StepFunction.zero(f.cell_scale)
    bounded = True
    for L in layers:
        rec = rec + L.g.scale(L.coefficient)
        bounded = bounded and all(abs(v) <= 1 for v in L.g.cells.values())
    lor = lorentz_quasinorm(f, 2, Fraction(2, 3))
    agg = layer_aggregate(layers, 2)
    ratio = agg / lor if lor else 0.0
    ok = rec == f and bounded and (lor == 0 or 0.25 <= ratio <= 4)
    return {"layers": len(layers), "aggregate": agg, "lorentz": lor, "ratio": ratio, "exact": rec == f, "ok": ok}


def lorentz_trial(seed: int, i: int) -> dict:
    R = rng(seed, "lorentz", i)
    f = StepFunction.from_values(R.choice((-5, -3, 0)), R.randrange(8), random_values(R, R.randint(1, 40), 0.2))
    out = {}
    ok = True
    for p in (Fraction(1), Fraction(4, 3), Fraction(2)):
        a = lorentz_quasinorm(f, p, p)
        b = lp_norm(f, p)
        rel = abs(a - b) / b if b else abs(a)
        out[str(p)] = rel
        ok = ok and rel <= 1e-9
    for r in (Fraction(2, 3), Fraction(1), Fraction(2)):
        ok = ok and weak_constant(f, r) == lorentz_quasinorm(f, r, math.inf)
    return {"rel_err": out, "ok": ok}


# ---------------------------------------------------------------------------
# suites


SUITES = {
    "orthogonality": (orthogonality_trial, 1000, _orthogonality_summary),
    "projections": (projections_trial, 200, None),
    "john-nirenberg": (john_nirenberg_trial, 200, None),
    "tree-estimate": (tree_estimate_trial, 200, None),
    "size-lemma": (size_lemma_trial, 200, None),
    "cz-identity": (cz_trial, 100, _cz_summary),
    "layer-cake": (layer_cake_trial, 100, None),
    "lorentz": (lorentz_trial, 100, None),
}
DEFAULT_TRIALS = {name: entry[1] for name, entry in SUITES.items()}


def _default_summary(records: list) -> dict:
    return {"failures": sum(not r["ok"] for r in records), "pass": all(r["ok"] for r in records)}


def run_suite(name: str, seed: int, trials: int | None = None, jobs: int = 1) -> dict:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
    fn, default, summarize = SUITES[name]
    n = default if trials is None else trials
    records = _map(fn, [(seed, i) for i in range(n)], jobs)
    summary = (summarize or _default_summary)(records)
    if name == "tree-estimate":
        summary["max_ratio"] = max((r["ratio"] for r in records), default=0.0)
        summary["constant"] = TREE_CONSTANT
    if name == "john-nirenberg":
        summary["max_ratio"] = max((r["ratio"] for r in records), default=0.0)
        summary["constant"] = JN_CONSTANT
    return {
        "command": "verify",
        "suite": name,
        "config": {"seed": seed, "trials": n},
        "version": __version__,
        "records": records,
        "summary": summary,
        "pass": summary["pass"],
    }


def run_all(seed: int, trials: int | None = None, jobs: int = 1) -> dict:
    suites = {name: run_suite(name, seed, trials, jobs) for name in SUITES}
    return {
        "command": "verify",
        "suite": "all",
        "config": {"seed": seed, "trials": trials},
        "version": __version__,
        "suites": suites,
        "pass": all(s["pass"] for s in suites.values()),
    }


# ---------------------------------------------------------------------------
# endpoint sweeps (dense floating-point path)

DEFAULT_P1 = (Fraction(17, 16), Fraction(9, 8), Fraction(5, 4), Fraction(3, 2), Fraction(7, 4))


def power_family(p1, depth: int, cell_scale: int, m: int) -> np.ndarray:
    """Dyadic truncation of ``x**(-1/p1)`` on [0, 1): value ``2**((i+1)/p1)`` on ``[2**-(i+1), 2**-i)``, normalised in ``L^p1``."""
    if cell_scale > -depth:
        raise ValueError("cell scale must resolve the truncation depth")
    n = 1 << (m - cell_scale)
    x = np.zeros(n)
    pf = float(p1)
    for i in range(depth):
        x[1 << (-cell_scale - i - 1) : 1 << (-cell_scale - i)] = 2.0 ** ((i + 1) / pf)
    x[: 1 << (-cell_scale - depth)] = 2.0 ** (depth / pf)
    return x / dense_lp_norm(x, 2.0**cell_scale, pf)


def _band(m: int, width: int) -> list[int]:
    return [k for k in range(m - width + 1, m + 1) if k % 2 == 0]


def _random_cells(seed: int, tag: str, cell_scale: int, scale: int, m: int, signs: bool) -> np.ndarray:
    """Random subset (or random signs) of the scale-``scale`` cells of [0, 1), sampled at ``cell_scale``."""
    R = rng(seed, tag, scale)
    out = np.zeros(1 << (m - cell_scale))
    w = 1 << (scale - cell_scale)
    for p in range(1 << -scale):
        if signs:
            out[p * w : (p + 1) * w] = R.choice((-1.0, 1.0))
        elif R.random() < 0.5:
            out[p * w : (p + 1) * w] = 1.0
    return out


def _endpoint_config(p1_list, depth, m, band_width, seed, samples, dilate):
    cell_scale = -depth
    band = _band(m, band_width)
    return {
        "p1": [str(p) for p in p1_list],
        "depth": depth,
        "domain_exponent": m,
        "cell_scale": cell_scale,
        "band_width": band_width,
        "band": band,
        "seed": seed,
        "samples": samples,
        "dilate_power4": dilate,
    }


def endpoint_report(
    p1_list=DEFAULT_P1,
    depth: int = 14,
    m: int = 2,
    band_width: int = 12,
    seed: int = 0,
    samples: int = 3,
    family: str = "power",
    dilate: int = 0,
    bound: float = 8.0,
) -> dict:
    """Mixed weak-type constant ``K(p1) = ||V(f1, 1_F2)||_{2/3,inf} / (||f1||_p1 |F2|**(1/p2))``.

    ``F2`` ranges over [0, 1) and ``samples`` random half-density subsets of
    [0, 1) at the finest band scale; ``K(p1)`` is the largest value.  ``dilate``
    rescales everything by ``4**dilate``, which leaves ``K`` unchanged.
    """
    p1_list = [Fraction(p) for p in p1_list]
    for p in p1_list:
        if not 1 < p < 2:
            raise ValueError(f"p1 must lie in (1, 2), got {p}")
    cfg = _endpoint_config(p1_list, depth, m, band_width, seed, samples, dilate)
    cfg["family"] = family
    c, band = cfg["cell_scale"], cfg["band"]
    fine = min(band)
    sets = [("interval", np.concatenate([np.ones(1 << -c), np.zeros((1 << (m - c)) - (1 << -c))]))]
    for s in range(samples):
        sets.append((f"random-{s}", _random_cells(seed * 1000 + s, "F2", c, fine, m, signs=False)))
    shift = 2 * dilate
    rows = []
    for p1 in p1_list:
        q = p1 / (p1 - 1)
        inv_p2 = Fraction(3, 2) - 1 / p1
        f1 = power_family(p1, depth, c, m) if family == "power" else np.zeros(1 << (m - c))
        f1 = f1 * 4.0 ** (-dilate / float(p1))
        cell = 2.0 ** (c + shift)
        n1 = dense_lp_norm(f1, cell, p1)
        per = {}
        for name, F2 in sets:
            meas = float(F2.sum()) * cell
            V = band_operator(f1, F2, c + shift, [k + shift for k in band])
            w = dense_weak_constant(V, cell, Fraction(2, 3))
            per[name] = 0.0 if w == 0 else w / (n1 * meas ** float(inv_p2))
        K = max(per.values())
        rows.append({"p1": str(p1), "q": float(q), "K": K, "K_over_q": K / float(q), "per_set": per})
    return _sweep_report("endpoint", cfg, rows, bound)


def signed_report(
    p_list=DEFAULT_P1,
    depth: int = 14,
    m: int = 2,
    band_width: int = 12,
    seed: int = 0,
    samples: int = 4,
    family: str = "power",
    bound: float = 8.0,
) -> dict:
    """``K(p) = ||V(f1, f2)||_{r,inf} / (||f1||_p ||f2||_2)`` with ``1/r = 1/p + 1/2``.

    ``f2`` ranges over ``samples`` L2-normalised random sign patterns on [0, 1)
    at the finest band scale; ``K(p)`` is the largest value.
    """
    p_list = [Fraction(p) for p in p_list]
    cfg = _endpoint_config(p_list, depth, m, band_width, seed, samples, 0)
    cfg["family"] = family
    c, band = cfg["cell_scale"], cfg["band"]
    fine = min(band)
    cell = 2.0**c
    f2s = []
    for s in range(samples):
        f2 = _random_cells(seed * 1000 + s, "f2-signs", c, fine, m, signs=True)
        f2s.append((f"signs-{s}", f2 / dense_lp_norm(f2, cell, 2)))
    rows = []
    for p in p_list:
        if not 1 < p < 2:
            raise ValueError(f"p must lie in (1, 2), got {p}")
        q = p / (p - 1)
        r = 1 / (1 / p + Fraction(1, 2))
        f1 = power_family(p, depth, c, m) if family == "power" else np.zeros(1 << (m - c))
        n1 = dense_lp_norm(f1, cell, p)
        per = {}
        for name, f2 in f2s:
            V = band_operator(f1, f2, c, band)
            w = dense_weak_constant(V, cell, r)
            per[name] = 0.0 if w == 0 else w / (n1 * dense_lp_norm(f2, cell, 2))
        K = max(per.values())
        rows.append({"p": str(p), "r": str(r), "q": float(q), "K": K, "K_over_q": K / float(q), "per_f2": per})
    return _sweep_report("signed", cfg, rows, bound)


def _sweep_report(kind: str, cfg: dict, rows: list, bound: float) -> dict:
    vals = [r["K_over_q"] for r in rows]
    spread = (max(vals) / min(vals)) if vals and min(vals) > 0 else (0.0 if not any(vals) else math.inf)
    return {
        "command": "endpoint",
        "kind": kind,
        "config": cfg,
        "version": __version__,
        "rows": rows,
        "summary": {"spread": spread, "bound": bound},
        "pass": spread <= bound,
    }


# ---------------------------------------------------------------------------
# conjecture probe


def _conjecture_candidate(R, kind: str, c: int, m: int) -> np.ndarray:
    n = 1 << (m - c)
    x = np.zeros(n)
    if kind == "set":
        w = 1 << R.randint(0, 4)
        for p in range(0, 1 << -c, w):
            if R.random() < 0.5:
                x[p : p + w] = 1.0
    elif kind == "packet":
        k = R.choice(range(c + 2, 1, 2))
        L = 1 << (k - c)
        coef = np.zeros((n // L, L))
        for _ in range(R.randint(1, 6)):
            coef[R.randrange(min(n // L, max(1, (1 << -c) // L))), R.randrange(L)] = R.choice((-1.0, 1.0))
        from .dense import paley_synthesis

        x = paley_synthesis(coef, c, k)
    else:
        a = R.uniform(0.2, 0.74)
        t = (np.arange(n) + 0.5) * 2.0**c
        x = np.where(t < 1, t ** (-a), 0.0)
    return x


def conjecture_report(trials: int = 50, seed: int = 0, cell_scale: int = -10, m: int = 1) -> dict:
    """Search for large ``||V(f1, f2)||_{2/3,inf} / (||f1||_{4/3} ||f2||_{4/3})`` over a mixed random family."""
    band = [k for k in range(cell_scale + 2, m + 1) if k % 2 == 0]
    cell = 2.0**cell_scale
    best = 0.0
    records = []
    kinds = ("set", "packet", "power")
    for i in range(trials):
        R = rng(seed, "conjecture", i)
        k1, k2 = R.choice(kinds), R.choice(kinds)
        f1 = _conjecture_candidate(R, k1, cell_scale, m)
        f2 = f1.copy() if R.random() < 0.25 else _conjecture_candidate(R, k2, cell_scale, m)
        V = band_operator(f1, f2, cell_scale, band)
        n1 = dense_lp_norm(f1, cell, 4 / 3)
        n2 = dense_lp_norm(f2, cell, 4 / 3)
        w = dense_weak_constant(V, cell, Fraction(2, 3))
        ratio = 0.0 if w == 0 or n1 == 0 or n2 == 0 else w / (n1 * n2)
        best = max(best, ratio)
        records.append({"kinds": [k1, k2], "ratio": ratio, "running_max": best})
    return {
        "command": "conjecture",
        "config": {"trials": trials, "seed": seed, "cell_scale": cell_scale, "domain_exponent": m, "band": band},
        "version": __version__,
        "records": records,
        "summary": {"max_ratio": best},
        "pass": True,
    }
