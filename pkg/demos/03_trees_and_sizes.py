"""
Trees, sizes and the size lemma
===============================

A convex set of quartiles splits into a low-size part and a forest whose tops
are controlled by the L2 norm.
"""

from walshqt.decomposition import size_split
from walshqt.dyadic import l2_norm_squared
from walshqt.experiments import size_fixture
from walshqt.phase_plane import convex_violation
from walshqt.sizes import Coefficients, size

S, f, factor = size_fixture(0, 3)
cf = Coefficients(f)
rep = size(S, cf)
print(len(S), "quartiles, size^2 =", float(rep.size_sq), "attained at", rep.argmax)

sigma_sq = rep.size_sq * factor
split = size_split(S, cf, sigma_sq)
print("low part:", len(split.lo), "quartiles, size^2 =", float(size(split.lo, cf).size_sq), "<=", float(sigma_sq / 4))
print("forest:", len(split.hi.trees), "trees, tops =", split.hi.tops)
print("tops * sigma^2 =", float(split.hi.tops * sigma_sq), "<= 4 ||f||^2 =", float(4 * l2_norm_squared(f)))
print("both pieces convex:", convex_violation(split.lo) is None and split.hi.check_convex())
