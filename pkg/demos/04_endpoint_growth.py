"""
Growth of the weak-type constant near p1 = 1
============================================

K(p1) is measured on a power-law family and divided by the dual exponent.
The spread of the quotient over the sweep stays small.
"""

import numpy as np

from walshqt.experiments import endpoint_report, signed_report

for name, fn in (("weak", endpoint_report), ("signed", signed_report)):
    rep = fn()
    print(name)
    for row in rep["rows"]:
        print(f"  p = {row.get('p1', row.get('p')):>5}  K = {row['K']:.4f}  K/p' = {row['K_over_q']:.5f}")
    q = np.array([r["K_over_q"] for r in rep["rows"]])
    print(f"  spread {q.max() / q.min():.2f} (bound {rep['summary']['bound']})")

# dilating every input by 4 leaves the constants unchanged
a = endpoint_report(depth=10, band_width=8, samples=1)
b = endpoint_report(depth=10, band_width=8, samples=1, dilate=1)
print("dilation invariant:", np.allclose([r["K"] for r in a["rows"]], [r["K"] for r in b["rows"]]))
