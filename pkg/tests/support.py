"""Shared builders for the test suite.

Everything here is deterministic given a SeededRng, so tests can pin a
seed and stay reproducible across runs and platforms.
"""

from __future__ import annotations

import numpy as np

from ebx import (
    CanonicalEBForm,
    Channel,
    SeededRng,
    herm_eig,
    kraus_channel,
    to_choi,
)


def unit(d: int, i: int, j: int) -> np.ndarray:
    m = np.zeros((d, d), dtype=np.complex128)
    m[i, j] = 1.0
    return m


def random_invertible_contraction(rng: SeededRng, d: int,
                                  lo: float = 0.1, hi: float = 0.95) -> np.ndarray:
    """Positive definite matrix with spectrum in [lo, hi] (so 0 < R < I)."""
    q = rng.unitary(d)
    vals = lo + (hi - lo) * rng.generator.random(d)
    return (q * vals) @ q.conj().T


def random_canonical_form(rng: SeededRng, d1: int, d2: int,
                          block_sizes: list[int] | None = None) -> CanonicalEBForm:
    """Canonical form built directly from its definition.

    Projections come from a Haar unitary's column groups; states are
    redrawn until pairwise distinct so the form is genuinely canonical.
    """
    if block_sizes is None:
        block_sizes = [1] * d2
    if sum(block_sizes) != d2:
        raise ValueError("block sizes must partition d2")
    q = rng.unitary(d2)
    projections = []
    start = 0
    for size in block_sizes:
        cols = q[:, start:start + size]
        projections.append(cols @ cols.conj().T)
        start += size
    while True:
        states = [rng.unit_vector(d1) for _ in block_sizes]
        overlaps = [abs(np.vdot(states[a], states[b]))
                    for a in range(len(states)) for b in range(a)]
        if all(o < 0.99 for o in overlaps):
            break
    blocks = tuple((u, p) for u, p in zip(states, projections))
    return CanonicalEBForm(d1=d1, d2=d2, blocks=blocks)


def block_adapted_contraction(rng: SeededRng, form: CanonicalEBForm,
                              lo: float = 0.1, hi: float = 0.95) -> np.ndarray:
    """Invertible positive contraction commuting with every block projection."""
    r = np.zeros((form.d2, form.d2), dtype=np.complex128)
    for _, proj in form.blocks:
        rank = int(round(np.trace(proj).real))
        vals, vecs = herm_eig(proj)
        basis = vecs[:, :rank]
        piece = random_invertible_contraction(rng, rank, lo, hi)
        r += basis @ piece @ basis.conj().T
    return r


def mixed_unitary_channel(rng: SeededRng, d: int, n_terms: int,
                          planted_split: int | None = None):
    """Random mixed-unitary channel; always unital and trace preserving.

    With planted_split = k, every unitary is block diagonal in a common
    frame with block sizes (k, d - k), so the frame's block scalars give
    matrices commuting with all Kraus operators. Returns (channel, fixed)
    where fixed is such a planted fixed point (None when no split).
    """
    probs = rng.generator.random(n_terms) + 0.1
    probs /= probs.sum()
    frame = rng.unitary(d) if planted_split is not None else None
    ops = []
    for p in probs:
        if planted_split is None:
            u = rng.unitary(d)
        else:
            k = planted_split
            u = np.zeros((d, d), dtype=np.complex128)
            u[:k, :k] = rng.unitary(k)
            u[k:, k:] = rng.unitary(d - k)
            u = frame @ u @ frame.conj().T
        ops.append(np.sqrt(p) * u)
    ch = kraus_channel(ops, label="mixed-unitary")
    fixed = None
    if planted_split is not None:
        k = planted_split
        alpha, beta = 0.3, 1.7
        diag = np.diag(np.concatenate([np.full(k, alpha), np.full(d - k, beta)]))
        fixed = frame @ diag.astype(np.complex128) @ frame.conj().T
    return ch, fixed


def channel_distance(a: Channel, b: Channel) -> float:
    return float(np.max(np.abs(to_choi(a).matrix - to_choi(b).matrix)))
