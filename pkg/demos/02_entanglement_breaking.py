#!/usr/bin/env python3
"""Deciding whether a channel breaks entanglement.

The PPT test on the Choi matrix is conclusive for d1*d2 <= 6; beyond
that a positive partial transpose alone leaves the verdict open unless
the channel carries a measure-and-prepare certificate.
"""

import numpy as np

from ebx import (
    SeededRng,
    choi_channel,
    eb_verdict,
    identity_channel,
    is_ppt,
    random_unital_eb,
    rank_bounds,
    to_choi,
)
from ebx.gallery import depolarizing_channel, diagonal_pinching_channel

np.set_printoptions(precision=4, suppress=True)

print("== identity channel: entanglement survives ==")
ident = identity_channel(2)
v = eb_verdict(ident)
print(f"ppt={v.ppt}  verdict={v.is_eb}  conclusive={v.conclusive}")

print()
print("== pinching: measurement in disguise ==")
pinch = diagonal_pinching_channel()
v = eb_verdict(pinch)
print(f"ppt={v.ppt}  verdict={v.is_eb}  conclusive={v.conclusive}")
b = rank_bounds(pinch)
print(f"choi rank {b.choi_rank}, minimal measure-and-prepare size in "
      f"[{b.eb_rank_lower}, {b.eb_rank_upper}]")

print()
print("== depolarizing: full rank, still breaks entanglement ==")
dep = depolarizing_channel(2)
v = eb_verdict(dep)
b = rank_bounds(dep)
print(f"verdict={v.is_eb}  choi rank {b.choi_rank} (maximal for d=2)")
print(f"rank window [{b.eb_rank_lower}, {b.eb_rank_upper}]")

print()
print("== beyond the PPT window ==")
# 3x3 channels live at d1*d2 = 9 > 6: PPT alone cannot certify "yes"
rng = SeededRng(7)
ch = random_unital_eb(rng, 3, 3, 5)
certified = eb_verdict(ch)
print(f"with certificate : verdict={certified.is_eb} "
      f"conclusive={certified.conclusive}")
# same map, re-entered through its Choi matrix: the ensemble is forgotten
stripped = choi_channel(to_choi(ch).matrix, ch.d1, ch.d2)
blind = eb_verdict(stripped)
print(f"certificate gone : verdict={blind.is_eb} "
      f"conclusive={blind.conclusive} (ppt={blind.ppt})")

print()
print("== the partial transpose itself ==")
choi = to_choi(ident).matrix
print("Choi of id_2 (maximally entangled, unnormalized):")
print(choi.real)
print(f"is_ppt: {is_ppt(ident)}")
