"""
Walsh packets on the dyadic grid
================================

Tiles are dyadic rectangles of area one.  Each carries an L2-normalised Walsh
packet, and packets of disjoint tiles are exactly orthogonal.
"""

from walshqt.dyadic import DyadicInterval, inner_product, l2_norm_squared
from walshqt.phase_plane import Tile
from walshqt.walsh import walsh_sign, wave_packet

# the first eight Walsh functions, sampled on eight cells
for n in range(8):
    print(n, "".join("+" if walsh_sign(n, t, 3) > 0 else "-" for t in range(8)))

# the packet of [1/2, 1) x [4, 6)
s = Tile(DyadicInterval(-1, 1), DyadicInterval(1, 2))
w = wave_packet(s)
print("norm^2:", l2_norm_squared(w))

# overlapping space, disjoint frequency: orthogonal
t = Tile(DyadicInterval(-1, 1), DyadicInterval(1, 3))
print("<w_s, w_t> =", inner_product(w, wave_packet(t)))

# nested space, nested frequency: not orthogonal in general
u = Tile(DyadicInterval(-2, 2), DyadicInterval(2, 1))
print("<w_s, w_u> =", inner_product(w, wave_packet(u)))
