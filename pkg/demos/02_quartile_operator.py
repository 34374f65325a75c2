"""
The quartile operator
=====================

A quartile has area four and four frequency grandchildren.  The operator pairs
f1 and f2 with the first two packets and emits the third.
"""

from walshqt.dyadic import StepFunction
from walshqt.fixtures import random_step_function, rng
from walshqt.phase_plane import Quartile
from walshqt.quartile_operator import apply, trilinear
from walshqt.walsh import wave_packet

s = Quartile.make(-2, 1, 3)
w1, w2, w3 = (wave_packet(s.grandchild(j)) for j in (1, 2, 3))

# matched packets give |I_s|**-1/2 times the third packet
V = apply([s], w1, w2)
print("V == 2 w3:", V == w3.scale(2))
print("Lambda =", trilinear([s], w1, w2, w3))

# everything stays exact for arbitrary step functions
R = rng(0, "demo")
S = [Quartile.make(-2, 0, 1), Quartile.make(0, 1, 2), Quartile.make(-1, 3, 0)]
f1, f2, f3 = (random_step_function(R, -4, 0, 64) for _ in range(3))
val = trilinear(S, f1, f2, f3)
print("Lambda_S(f1, f2, f3) =", val, "~", float(val))

# the empty set is the zero operator
print("empty:", apply([], f1, f2) == StepFunction.zero())
