#!/usr/bin/env python3
"""Which unital entanglement-breaking channels are C*-extreme?

For unital EB channels the answer is a rank count: the channel is
C*-extreme exactly when its Choi rank equals the output dimension, and
in that case it pinches to a sum of blocks <u_i, X u_i> P_i with
orthogonal projections P_i summing to the identity.
"""

import numpy as np

from ebx import (
    NotExtreme,
    cq_remark_flags,
    extract_canonical,
    is_cstar_extreme,
    to_choi,
    unitary_equivalent,
)
from ebx.gallery import (
    depolarizing_channel,
    diagonal_pinching_channel,
    swapped_pinching_channel,
    tetrahedral_channel,
    two_block_pinching_channel,
)

np.set_printoptions(precision=4, suppress=True)

print("== diagonal pinching: extreme ==")
pinch = diagonal_pinching_channel()
report = is_cstar_extreme(pinch)
print(f"choi rank {report.choi_rank} == d2 = 2 -> extreme: "
      f"{report.is_cstar_extreme}")
form = report.canonical
for k, (u, proj) in enumerate(form.blocks):
    print(f"block {k}: state {u.real}, projection diag {np.diag(proj).real}")
print(f"irreducible: {report.is_irreducible}")

flags = cq_remark_flags(form)
print(f"state overlaps all nonzero: {flags.all_overlaps_nonzero} "
      f"(min overlap {flags.min_overlap:.3f})")
print(f"linearly extreme among UCP maps: "
      f"{report.is_cq_linear_extreme_in_ucp}")

print()
print("== two-block pinching: extreme with a rank-2 block ==")
tb = two_block_pinching_channel()
form = extract_canonical(tb)
print(f"blocks: {form.n_blocks}, block ranks: "
      f"{[int(round(np.trace(p).real)) for _, p in form.blocks]}")

print()
print("== depolarizing: full rank, nowhere near extreme ==")
dep = depolarizing_channel(3)
report = is_cstar_extreme(dep)
print(f"choi rank {report.choi_rank} > 3 -> extreme: "
      f"{report.is_cstar_extreme}")
try:
    extract_canonical(dep)
except NotExtreme as exc:
    print(f"extraction refuses: {exc}")

print()
print("== tetrahedral POVM channel: not extreme either ==")
tet = tetrahedral_channel()
report = is_cstar_extreme(tet)
print(f"choi rank {report.choi_rank}, extreme: {report.is_cstar_extreme}")

print()
print("== unitary equivalence ==")
# the two pinchings differ only by swapping the output blocks
diag_form = extract_canonical(diagonal_pinching_channel())
swap_form = extract_canonical(swapped_pinching_channel())
check = unitary_equivalent(diag_form, swap_form)
print(f"equivalent: {check.equivalent}")
print("witness unitary:")
print(check.witness_unitary.real)

same = unitary_equivalent(diag_form, diag_form)
print(f"self-equivalence sanity: {same.equivalent}")
print(f"choi ranks as a quick invariant: "
      f"{np.linalg.matrix_rank(to_choi(pinch).matrix)} vs "
      f"{np.linalg.matrix_rank(to_choi(tet).matrix)}")
