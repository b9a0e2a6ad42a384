"""Contracts of the dense linear algebra layer."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from ebx import (
    DEFAULT_TOL,
    NotHermitian,
    NotPSD,
    SeededRng,
    Tolerance,
    as_matrix,
    herm_eig,
    is_psd,
    max_abs,
    nullspace,
    pinv,
    psd_sqrt,
    svd_rank,
)

seeds = st.integers(min_value=0, max_value=2**32 - 1)


def test_tolerance_defaults():
    assert DEFAULT_TOL.rank_rel == 1e-9
    assert DEFAULT_TOL.psd_floor == 1e-9
    assert DEFAULT_TOL.eq_abs == 1e-9


@pytest.mark.parametrize("field", ["rank_rel", "psd_floor", "eq_abs"])
@pytest.mark.parametrize("bad", [0.0, -1e-9, 2e-3, 1.0])
def test_tolerance_rejects_out_of_range(field, bad):
    with pytest.raises(ValueError):
        Tolerance(**{field: bad})


def test_tolerance_accepts_boundary():
    Tolerance(rank_rel=1e-3, psd_floor=1e-3, eq_abs=1e-3)
    Tolerance(rank_rel=1e-15)


def test_as_matrix_rejects_non_2d_and_non_finite():
    with pytest.raises(ValueError):
        as_matrix(np.zeros(3))
    with pytest.raises(ValueError):
        as_matrix([[np.inf, 0], [0, 1]])
    with pytest.raises(ValueError):
        as_matrix([[np.nan, 0], [0, 1]])


def test_max_abs():
    assert max_abs(np.array([[1, -3j], [2, 0]])) == 3.0
    assert max_abs(np.zeros((0, 2))) == 0.0


def test_herm_eig_descending_and_reconstructs():
    m = np.array([[1.0, 2.0], [2.0, -1.0]], dtype=complex)
    vals, vecs = herm_eig(m)
    assert vals[0] >= vals[1]
    assert np.allclose(vals, [np.sqrt(5), -np.sqrt(5)])
    recon = (vecs * vals) @ vecs.conj().T
    assert max_abs(recon - m) <= 1e-12 * max_abs(m)


def test_herm_eig_phase_is_deterministic():
    rng = SeededRng(3)
    m = rng.hermitian(5)
    vals1, vecs1 = herm_eig(m)
    vals2, vecs2 = herm_eig(m.copy())
    assert np.array_equal(vals1, vals2)
    assert np.array_equal(vecs1, vecs2)
    # phase convention: first non-negligible entry of each column is real > 0
    for j in range(5):
        col = vecs1[:, j]
        pivot = col[np.flatnonzero(np.abs(col) > 1e-12)[0]]
        assert abs(pivot.imag) <= 1e-14
        assert pivot.real > 0


def test_herm_eig_rejects_non_hermitian():
    with pytest.raises(NotHermitian):
        herm_eig(np.array([[0.0, 1.0], [0.0, 0.0]]))
    with pytest.raises(NotHermitian):
        herm_eig(np.zeros((2, 3)))


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_herm_eig_reconstruction_property(seed):
    m = SeededRng(seed).hermitian(4)
    vals, vecs = herm_eig(m)
    assert np.all(np.diff(vals) <= 1e-12)
    assert max_abs((vecs * vals) @ vecs.conj().T - m) <= 1e-12 * max(1.0, max_abs(m))
    assert max_abs(vecs.conj().T @ vecs - np.eye(4)) <= 1e-12


def test_svd_rank_known_cases():
    assert svd_rank(np.zeros((3, 3))) == 0
    assert svd_rank(np.eye(3)) == 3
    assert svd_rank(np.array([[1, 2], [2, 4]], dtype=float)) == 1
    # rank decision is relative to the largest singular value
    assert svd_rank(np.diag([1.0, 1e-12])) == 1
    assert svd_rank(np.diag([1e-12, 1e-12 * (1 - 1e-12)])) == 2


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_svd_rank_of_product_bounded(seed):
    rng = SeededRng(seed)
    a = rng.complex_normal((4, 3))
    b = rng.complex_normal((3, 5))
    assert svd_rank(a @ b) <= min(svd_rank(a), svd_rank(b))


def test_is_psd():
    assert is_psd(np.eye(2))
    assert is_psd(np.zeros((2, 2)))
    assert not is_psd(np.diag([1.0, -1.0]))
    # relative floor: tiny negative eigenvalue on a large matrix passes
    assert is_psd(np.diag([1.0, -1e-10]))
    assert not is_psd(np.diag([1.0, -1e-6]))
    with pytest.raises(NotHermitian):
        is_psd(np.array([[0, 1], [0, 0]], dtype=float))


def test_psd_sqrt_squares_back_and_commutes():
    rng = SeededRng(7)
    m = rng.psd(4)
    root = psd_sqrt(m)
    assert max_abs(root - root.conj().T) <= 1e-12
    assert max_abs(root @ root - m) <= 1e-12 * max(1.0, max_abs(m))
    assert max_abs(root @ m - m @ root) <= 1e-10 * max(1.0, max_abs(m))


def test_psd_sqrt_clamps_floor_noise_but_rejects_genuine_negativity():
    root = psd_sqrt(np.diag([1.0, -1e-10]))
    assert is_psd(root @ root)
    with pytest.raises(NotPSD):
        psd_sqrt(np.diag([1.0, -1e-3]))


@settings(max_examples=20, deadline=None)
@given(seeds)
def test_pinv_penrose_identities(seed):
    a = SeededRng(seed).complex_normal((4, 3))
    p = pinv(a)
    scale = max(1.0, max_abs(a))
    assert max_abs(a @ p @ a - a) <= 1e-10 * scale
    assert max_abs(p @ a @ p - p) <= 1e-10 * scale
    assert max_abs((a @ p).conj().T - a @ p) <= 1e-10
    assert max_abs((p @ a).conj().T - p @ a) <= 1e-10


def test_pinv_of_rank_deficient():
    a = np.array([[1.0, 0.0], [0.0, 0.0]])
    assert max_abs(pinv(a) - a) <= 1e-14


def test_nullspace():
    a = np.array([[1.0, 1.0, 0.0]])
    n = nullspace(a)
    assert n.shape == (3, 2)
    assert max_abs(a @ n) <= 1e-12
    assert max_abs(n.conj().T @ n - np.eye(2)) <= 1e-12
    assert nullspace(np.eye(3)).shape == (3, 0)
    assert nullspace(np.zeros((2, 4))).shape == (4, 4)
