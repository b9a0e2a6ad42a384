#!/usr/bin/env python3
"""One channel, three representations.

Builds the qubit pinching map (kill the off-diagonal entries) as a Kraus
set, converts it to Choi and Holevo form, and shows that all three act
identically. Also exercises predicates, the adjoint, and the Stinespring
dilation.
"""

import numpy as np

from ebx import (
    adjoint,
    apply,
    choi_to_kraus,
    fixed_point_check,
    kraus_channel,
    predicates,
    stinespring,
    to_choi,
)
from ebx.gallery import diagonal_pinching_channel

np.set_printoptions(precision=4, suppress=True, linewidth=100)

e11 = np.diag([1.0, 0.0]).astype(np.complex128)
e22 = np.diag([0.0, 1.0]).astype(np.complex128)

print("== Kraus form ==")
ch = kraus_channel([e11, e22], label="pinching")
x = np.array([[1.0, 2.0 - 1.0j], [2.0 + 1.0j, 3.0]])
print("input:")
print(x)
print("output (diagonal survives):")
print(apply(ch, x))

print()
print("== Choi matrix ==")
choi = to_choi(ch)
print(choi.matrix.real)

print()
print("== back to Kraus ==")
back = kraus_channel(choi_to_kraus(choi).operators)
ops = back.representation.operators
print(f"recovered {len(ops)} Kraus operators, same action:",
      np.allclose(apply(back, x), apply(ch, x)))

print()
print("== predicates ==")
p = predicates(ch)
print(f"cp={p.is_cp} unital={p.is_unital} tp={p.is_tp} "
      f"hp={p.is_hermiticity_preserving}")

print()
print("== adjoint ==")
adj = adjoint(ch)
y = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=np.complex128)
lhs = np.trace(apply(ch, x).conj().T @ y)
rhs = np.trace(x.conj().T @ apply(adj, y))
print(f"<Phi(x), y> = {lhs:.6f}  matches  <x, Phi*(y)> = {rhs:.6f}")

print()
print("== Stinespring dilation ==")
tri = stinespring(ch)
print(f"dilation dimension: {tri.dilation_dim}")
v = tri.isometry
print(f"V is an isometry (channel is unital): "
      f"{np.allclose(v.conj().T @ v, np.eye(2))}")

print()
print("== fixed points ==")
# unital + TP, so the fixed-point algebra is the commutant of the Kraus set
fp = fixed_point_check(diagonal_pinching_channel(), np.diag([0.3, 0.8]))
print(f"diag(0.3, 0.8) is fixed: {fp.is_fixed}, commutes with every Kraus "
      f"operator: {fp.commutes_with_all_kraus}")
