"""C*-convex combinations of channels and Krein-Milman decomposition.

A C*-convex combination sum_i T_i^* Phi_i(X) T_i generalizes scalar convex
mixing by letting the weights be operator coefficients with
sum_i T_i^* T_i = I. Every unital entanglement-breaking channel with a
known Holevo ensemble decomposes this way into C*-extreme points; the
construction here refines the ensemble spectrally, producing rank-one
coefficients paired with the simplest extreme channels <u, X u> I.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .channel import (
    Channel,
    HolevoEnsemble,
    KrausSet,
    _kraus_ops,
    apply,
    matrix_units,
    predicates,
)
from .errors import (
    CoefficientsNotNormalized,
    DimensionMismatch,
    EbxError,
    NoCertificate,
    NotCP,
    NotUnital,
)
from .extremality import is_cstar_extreme
from .linalg import DEFAULT_TOL, Tolerance, herm_eig, max_abs, psd_sqrt, svd_rank

__all__ = [
    "CStarCombination",
    "DecompositionCheck",
    "evaluate",
    "is_proper",
    "km_decompose",
    "verify_decomposition",
]

# spectral weights below this are dropped from the decomposition outright
_KM_WEIGHT_FLOOR = 1e-12


@dataclass(frozen=True, eq=False)
class CStarCombination:
    """Terms (T_i, Phi_i) of the combination X -> sum_i T_i^* Phi_i(X) T_i."""

    d1: int
    d2: int
    terms: tuple[tuple[np.ndarray, Channel], ...]

    def __post_init__(self) -> None:
        if not self.terms:
            raise DimensionMismatch("a combination needs at least one term")
        for t, ch in self.terms:
            if t.shape != (self.d2, self.d2):
                raise DimensionMismatch(
                    f"coefficient shape {t.shape} does not match d2={self.d2}"
                )
            if (ch.d1, ch.d2) != (self.d1, self.d2):
                raise DimensionMismatch(
                    "factor channel dimensions do not match the combination"
                )

    @property
    def n_terms(self) -> int:
        return len(self.terms)


@dataclass(frozen=True, eq=False)
class DecompositionCheck:
    reconstruction_error: float
    all_factors_extreme: bool
    proper: bool
    factor_diagnostics: tuple[str, ...]


def evaluate(comb: CStarCombination, tol: Tolerance = DEFAULT_TOL) -> Channel:
    """Assemble the combination into a single channel.

    Coefficients must be normalized (sum T_i^* T_i = I) and every factor
    unital, so the result is again unital. Kraus representations of the
    factors are composed with the coefficients directly; when every factor
    carries a Holevo ensemble the result keeps one too (terms (F, T^* R T)),
    preserving the entanglement-breaking certificate through the mix.
    """
    gram = sum(t.conj().T @ t for t, _ in comb.terms)
    if max_abs(gram - np.eye(comb.d2)) > 100 * tol.eq_abs:
        raise CoefficientsNotNormalized(
            f"sum of T_i^* T_i deviates from the identity by "
            f"{max_abs(gram - np.eye(comb.d2)):.3e}"
        )
    for _, ch in comb.terms:
        if not predicates(ch, tol).is_unital:
            raise NotUnital("every factor in a combination must be unital")

    all_holevo = all(
        isinstance(ch.representation, HolevoEnsemble) for _, ch in comb.terms
    )
    if all_holevo:
        terms = []
        for t, ch in comb.terms:
            for f, r in ch.representation.terms:
                terms.append((f, t.conj().T @ r @ t))
        return Channel(
            comb.d1,
            comb.d2,
            HolevoEnsemble(comb.d1, comb.d2, tuple(terms)),
            label="cstar-combination",
        )

    ops = []
    for t, ch in comb.terms:
        for op in _kraus_ops(ch, tol):
            ops.append(op @ t)
    return Channel(
        comb.d1,
        comb.d2,
        KrausSet(comb.d1, comb.d2, tuple(ops)),
        label="cstar-combination",
    )


def is_proper(comb: CStarCombination, tol: Tolerance = DEFAULT_TOL) -> bool:
    """Whether every coefficient is invertible (full numerical rank)."""
    return all(svd_rank(t, tol) == comb.d2 for t, _ in comb.terms)


def km_decompose(ch: Channel, tol: Tolerance = DEFAULT_TOL) -> CStarCombination:
    """Decompose a unital EB channel into a C*-convex combination of
    C*-extreme channels, from its Holevo ensemble.

    Each ensemble term (F, R) is refined spectrally: F = sum mu |psi><psi|
    and R = sum nu |chi><chi| give weights lambda = mu nu with state psi and
    direction chi. The factors <psi, X psi> I are C*-extreme (one block,
    full projection) and the coefficients sqrt(lambda) |chi><chi| are rank
    one, so the decomposition is never proper for d2 > 1. Weights below
    1e-12 are dropped; any normalization defect that leaves behind is folded
    into the largest coefficient.
    """
    p = predicates(ch, tol)
    if not p.is_cp:
        raise NotCP("decomposition needs a completely positive channel")
    if not p.is_unital:
        raise NotUnital("decomposition needs a unital channel")
    ensemble = ch.holevo_certificate
    if ensemble is None:
        raise NoCertificate(
            "decomposition needs a Holevo ensemble (representation or certificate)"
        )

    pieces: list[tuple[float, np.ndarray, np.ndarray]] = []  # (lambda, u, v)
    for f, r in ensemble.terms:
        f_vals, f_vecs = herm_eig((f + f.conj().T) / 2, tol)
        r_vals, r_vecs = herm_eig((r + r.conj().T) / 2, tol)
        for a, mu in enumerate(f_vals):
            if mu <= _KM_WEIGHT_FLOOR:
                continue
            for b, nu in enumerate(r_vals):
                lam = float(mu * nu)
                if lam <= _KM_WEIGHT_FLOOR:
                    continue
                pieces.append((lam, f_vecs[:, a], r_vecs[:, b]))

    if not pieces:
        raise NoCertificate("ensemble refinement produced no usable weight")

    d1, d2 = ch.d1, ch.d2
    terms: list[tuple[np.ndarray, Channel]] = []
    for lam, u, v in pieces:
        coeff = np.sqrt(lam) * np.outer(v, v.conj())
        factor = Channel(
            d1,
            d2,
            HolevoEnsemble(d1, d2, ((np.outer(u, u.conj()), np.eye(d2, dtype=complex)),)),
            label="pure-state-inflation",
        )
        terms.append((coeff, factor))

    # dropped weights leave sum T^*T slightly short of I; absorb the defect
    # into the heaviest coefficient so normalization is exact
    gram = sum(t.conj().T @ t for t, _ in terms)
    defect = np.eye(d2) - gram
    if max_abs(defect) > tol.eq_abs:
        heaviest = max(range(len(terms)), key=lambda k: max_abs(terms[k][0]))
        t, factor = terms[heaviest]
        terms[heaviest] = (psd_sqrt(t.conj().T @ t + defect, tol), factor)

    return CStarCombination(d1, d2, tuple(terms))


def verify_decomposition(
    comb: CStarCombination, target: Channel, tol: Tolerance = DEFAULT_TOL
) -> DecompositionCheck:
    """Check a combination against its target channel.

    Reports the worst reconstruction deviation over matrix units, whether
    every factor is C*-extreme (with per-factor diagnostics when not), and
    whether the combination is proper.
    """
    if (comb.d1, comb.d2) != (target.d1, target.d2):
        raise DimensionMismatch("combination and target dimensions differ")
    rebuilt = evaluate(comb, tol)
    err = 0.0
    for unit in matrix_units(comb.d1):
        err = max(err, max_abs(apply(rebuilt, unit) - apply(target, unit)))

    all_extreme = True
    diagnostics: list[str] = []
    for k, (_, factor) in enumerate(comb.terms):
        try:
            report = is_cstar_extreme(factor, tol)
            if not report.is_cstar_extreme:
                all_extreme = False
                diagnostics.append(
                    f"factor {k}: not C*-extreme (choi rank {report.choi_rank})"
                )
        except EbxError as exc:
            all_extreme = False
            diagnostics.append(f"factor {k}: {type(exc).__name__}: {exc}")

    return DecompositionCheck(
        reconstruction_error=float(err),
        all_factors_extreme=all_extreme,
        proper=is_proper(comb, tol),
        factor_diagnostics=tuple(diagnostics),
    )
