#!/usr/bin/env python3
"""Comparing a channel against a dominated piece.

Given Phi and a CP map Psi with Phi - Psi still CP, two derivative
objects describe Psi relative to Phi: a positive operator R with
Psi = Phi(.) R when Phi is in canonical form, and a coefficient matrix
T in Phi's Kraus frame. Both are recovered here from planted examples.
"""

import numpy as np

from ebx import (
    NotDominated,
    NotInvertible,
    arveson_derivative,
    compose_ad,
    dominates_cp,
    dominates_eb,
    extract_canonical,
    extremality_witness,
    locate_dominated_rank_one,
    psd_sqrt,
    rn_derivative,
)
from ebx.gallery import two_block_pinching_channel

np.set_printoptions(precision=4, suppress=True)

phi = two_block_pinching_channel()
form = extract_canonical(phi)

# plant Psi = Ad_sqrt(R0) o Phi for a block-adapted positive contraction
r0 = np.array([[0.5, 0.2, 0.0],
               [0.2, 0.4, 0.0],
               [0.0, 0.0, 0.7]], dtype=np.complex128)
psi = compose_ad(psd_sqrt(r0), phi)

print("== domination ==")
print(f"Phi - Psi completely positive: {dominates_cp(phi, psi)}")
# d1*d2 = 9 is outside the PPT-conclusive window and the difference
# carries no certificate, so the honest verdict is "unknown"
verdict = dominates_eb(phi, psi)
print(f"difference entanglement-breaking: {verdict.is_eb} "
      f"(conclusive={verdict.conclusive})")

print()
print("== barycenter derivative ==")
der = rn_derivative(form, psi)
print("recovered R (should match the planted contraction):")
print(der.R.real)
print(f"residual {der.residual:.2e}, per-block pieces: "
      f"{[p.shape for p in der.per_block]}")

print()
print("== coefficient matrix in the Kraus frame ==")
arv = arveson_derivative(phi, psi)
print("T:")
print(arv.T.real)
evals = np.linalg.eigvalsh(arv.T)
print(f"eigenvalues in [0, 1]: {evals}")

print()
print("== invertibility witness ==")
wit = extremality_witness(form, psi)
print("Z with Psi = Ad_Z o Phi, Z invertible:")
print(wit.real)

# a projection-compressed copy has singular barycenter: no witness exists
proj = np.diag([1.0, 0.0, 1.0]).astype(np.complex128)
squashed = compose_ad(proj, phi)
try:
    extremality_witness(form, squashed)
except NotInvertible as exc:
    print(f"compressed piece refused: {exc}")

print()
print("== locating a rank-one piece ==")
# <e1, X e1>|y><y| with y inside the rank-2 block is dominated by Phi
x = np.array([1.0, 0.0, 0.0], dtype=np.complex128)
y = np.array([0.0, 1.0, 0.0], dtype=np.complex128)
loc = locate_dominated_rank_one(form, x, y)
print(f"absorbed by block {loc.block_index}, contributed piece:")
print(loc.R.real)

# pairing e1 with the other block's range is not dominated
try:
    locate_dominated_rank_one(form, x, np.array([0.0, 0.0, 1.0]))
except NotDominated as exc:
    print(f"cross-block pairing refused: {exc}")
