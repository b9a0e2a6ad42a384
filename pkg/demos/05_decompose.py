#!/usr/bin/env python3
"""Writing a unital EB channel as a C*-convex combination of extreme points.

Every unital entanglement-breaking channel with a known measure-and-prepare
form splits as X -> sum_i T_i^* Phi_i(X) T_i where each factor Phi_i is
C*-extreme and the coefficients satisfy sum T_i^* T_i = I. The factors
here are the one-block channels <psi, X psi> I.
"""

import numpy as np

from ebx import (
    SeededRng,
    evaluate,
    is_proper,
    km_decompose,
    random_unital_eb,
    verify_decomposition,
)
from ebx.gallery import tetrahedral_channel

np.set_printoptions(precision=4, suppress=True)

print("== tetrahedral channel ==")
tet = tetrahedral_channel()
comb = km_decompose(tet)
print(f"{len(comb.terms)} extreme factors")
gram = sum(t.conj().T @ t for t, _ in comb.terms)
print(f"coefficient normalization error: "
      f"{np.max(np.abs(gram - np.eye(3))):.2e}")
print(f"proper combination (all coefficients invertible): "
      f"{is_proper(comb)}")

check = verify_decomposition(comb, tet)
print(f"reconstruction error: {check.reconstruction_error:.2e}")
print(f"all factors C*-extreme: {check.all_factors_extreme}")

print()
print("== reassembling by hand ==")
rebuilt = evaluate(comb)
print(f"rebuilt channel label: {rebuilt.label!r}")
print(f"keeps a measure-and-prepare certificate: "
      f"{rebuilt.holevo_certificate is not None}")

print()
print("== a random unital EB channel ==")
rng = SeededRng(2024)
ch = random_unital_eb(rng, 2, 3, 4)
comb = km_decompose(ch)
check = verify_decomposition(comb, ch)
print(f"{len(comb.terms)} factors, reconstruction error "
      f"{check.reconstruction_error:.2e}")
print(f"all factors extreme: {check.all_factors_extreme}, "
      f"proper: {check.proper}")
if check.factor_diagnostics:
    for line in check.factor_diagnostics:
        print(f"  {line}")

# rank-one coefficients mean the combination is never proper for d2 > 1;
# a proper witness needs invertible T_i, which these factors cannot give
print()
print("coefficient ranks:",
      [int(np.linalg.matrix_rank(t)) for t, _ in comb.terms])
