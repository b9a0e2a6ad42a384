"""Command line interface.

Subcommands:

  analyze  full report on a channel file: predicates, PPT, EB verdict,
           Choi rank, extremality, canonical form, commutant
  km       decompose a unital EB channel into C*-extreme factors
  rn       commuting derivative of a dominated channel w.r.t. a C*-extreme one
  arveson  coefficient matrix of a CP domination in the dominating Kraus frame
  equiv    unitary equivalence of two C*-extreme channels
  random   generate a seeded random channel file
  gallery  run the built-in worked examples

Exit codes: 0 success, 1 usage error, 2 domain error (bad input data,
failed preconditions, failed gallery checks).
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .channel import Channel, commutant_dimension, predicates, to_choi
from .decomp import km_decompose, verify_decomposition
from .errors import EbxError, NotExtreme, ParseError
from .extremality import (
    CanonicalEBForm,
    arveson_derivative,
    extract_canonical,
    is_cstar_extreme,
    rn_derivative,
    unitary_equivalent,
)
from .gallery import CASE_NAMES, run_all, run_case
from .linalg import Tolerance, herm_eig, svd_rank
from .rng import SeededRng
from .separability import (
    eb_verdict,
    is_ppt,
    random_cstar_extreme,
    random_unital_eb,
    rank_bounds,
)
from .serialize import _encode_matrix, channel_to_json, load_channel, save_channel

__all__ = ["main"]

_DEFAULT_TOL = 1e-9


class _Parser(argparse.ArgumentParser):
    # argparse exits 2 on usage errors; the documented contract is 1
    def error(self, message: str) -> None:
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _tolerance(value: float) -> Tolerance:
    return Tolerance(rank_rel=value, psd_floor=value, eq_abs=value)


def _tol_default() -> float:
    raw = os.environ.get("EBX_TOL")
    if raw is None:
        return _DEFAULT_TOL
    try:
        return float(raw)
    except ValueError:
        raise EbxError(f"EBX_TOL is not a number: {raw!r}")


def _fmt_matrix(m: np.ndarray) -> str:
    with np.printoptions(precision=6, suppress=True, linewidth=100):
        return str(np.asarray(m))


def _indent(text: str, pad: str = "  ") -> str:
    return "\n".join(pad + line for line in text.splitlines())


def _canonical_to_json(form: CanonicalEBForm) -> dict:
    return {
        "n_blocks": form.n_blocks,
        "block_ranks": list(form.block_ranks()),
        "blocks": [
            {
                "state": [_re_im(z) for z in u],
                "projection": _encode_matrix(p),
            }
            for u, p in form.blocks
        ],
    }


def _re_im(z: complex):
    z = complex(z)
    if z.imag == 0.0:
        return z.real
    return [z.real, z.imag]


# ---------------------------------------------------------------------------
# analyze
# ---------------------------------------------------------------------------


def _build_report(ch: Channel, tol: Tolerance) -> dict:
    p = predicates(ch, tol)
    report: dict = {
        "version": __version__,
        "tolerance": {
            "rank_rel": tol.rank_rel,
            "psd_floor": tol.psd_floor,
            "eq_abs": tol.eq_abs,
        },
        "label": ch.label,
        "d1": ch.d1,
        "d2": ch.d2,
        "predicates": {
            "is_cp": p.is_cp,
            "is_unital": p.is_unital,
            "is_tp": p.is_tp,
            "is_hermiticity_preserving": p.is_hermiticity_preserving,
        },
        "choi_rank": svd_rank(to_choi(ch).matrix, tol),
        "notes": [],
    }
    report["ppt"] = is_ppt(ch, tol)
    if not p.is_cp:
        report["notes"].append("not completely positive; EB analysis skipped")
        return report

    verdict = eb_verdict(ch, tol)
    report["eb"] = {
        "is_eb": verdict.is_eb,
        "conclusive": verdict.conclusive,
        "ppt": verdict.ppt,
        "has_certificate": verdict.certificate is not None,
    }
    if verdict.certificate is not None and verdict.is_eb == "yes":
        report["notes"].append("EB certified by an attached measure-and-prepare ensemble")
    elif verdict.is_eb == "yes":
        report["notes"].append(f"PPT conclusive: d1*d2 = {ch.d1 * ch.d2} <= 6")
    elif verdict.is_eb == "no":
        report["notes"].append("fails PPT, which every EB channel must satisfy")
    if verdict.is_eb == "unknown":
        report["notes"].append(
            "EB verdict inconclusive: PPT holds but the dimension is outside "
            "the window where PPT implies separability and no ensemble "
            "certificate is attached"
        )
    if verdict.is_eb == "yes":
        bounds = rank_bounds(ch, tol)
        report["eb_kraus_rank"] = {
            "lower": bounds.eb_rank_lower,
            "upper": bounds.eb_rank_upper,
        }

    if p.is_unital and verdict.is_eb != "no":
        ext = is_cstar_extreme(ch, tol)
        entry: dict = {
            "is_cstar_extreme": ext.is_cstar_extreme,
            "is_irreducible": ext.is_irreducible,
        }
        if ext.canonical is not None:
            entry["canonical"] = _canonical_to_json(ext.canonical)
            entry["is_cq_linear_extreme_in_ucp"] = ext.is_cq_linear_extreme_in_ucp
        report["extremality"] = entry
        if verdict.is_eb == "unknown" and ext.is_cstar_extreme:
            report["notes"].append(
                "Choi rank equals the output dimension, so the channel is "
                "C*-extreme provided it is entanglement breaking"
            )
    report["commutant_dimension"] = commutant_dimension(ch, tol).dim
    return report


def _print_report(report: dict) -> None:
    label = report["label"] or "(unlabeled)"
    print(f"channel {label}: M{report['d1']} -> M{report['d2']}")
    p = report["predicates"]
    print(
        f"  cp={_yn(p['is_cp'])} unital={_yn(p['is_unital'])} "
        f"tp={_yn(p['is_tp'])} hermiticity-preserving={_yn(p['is_hermiticity_preserving'])}"
    )
    print(f"  choi rank: {report['choi_rank']}")
    print(f"  ppt: {_yn(report['ppt'])}")
    if "eb" in report:
        eb = report["eb"]
        extra = " (certified)" if eb["has_certificate"] else ""
        print(f"  entanglement breaking: {eb['is_eb']}{extra}")
        if "eb_kraus_rank" in report:
            lo = report["eb_kraus_rank"]["lower"]
            hi = report["eb_kraus_rank"]["upper"]
            print(f"  EB Kraus count: between {lo} and {hi}")
    if "extremality" in report:
        ext = report["extremality"]
        print(f"  C*-extreme: {_yn(ext['is_cstar_extreme'])}")
        print(f"  irreducible range: {_yn(ext['is_irreducible'])}")
        if "canonical" in ext:
            canon = ext["canonical"]
            print(
                f"  canonical form: {canon['n_blocks']} block(s), "
                f"ranks {canon['block_ranks']}"
            )
            print(
                "  linearly extreme among unital CP maps: "
                f"{_yn(ext['is_cq_linear_extreme_in_ucp'])}"
            )
    if "commutant_dimension" in report:
        print(f"  range commutant dimension: {report['commutant_dimension']}")
    for note in report["notes"]:
        print(f"  note: {note}")


def _yn(v) -> str:
    if v is None:
        return "unknown"
    return "yes" if v else "no"


def _cmd_analyze(args) -> int:
    ch = load_channel(args.channel)
    report = _build_report(ch, _tolerance(args.tol))
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        _print_report(report)
    return 0


# ---------------------------------------------------------------------------
# km
# ---------------------------------------------------------------------------


def _cmd_km(args) -> int:
    ch = load_channel(args.channel)
    tol = _tolerance(args.tol)
    comb = km_decompose(ch, tol)
    check = verify_decomposition(comb, ch, tol)
    doc = {
        "n_terms": comb.n_terms,
        "reconstruction_error": check.reconstruction_error,
        "all_factors_extreme": check.all_factors_extreme,
        "proper": check.proper,
        "factor_diagnostics": list(check.factor_diagnostics),
    }
    if args.emit:
        payload = {
            "d1": comb.d1,
            "d2": comb.d2,
            "terms": [
                {
                    "coefficient": _encode_matrix(t),
                    "factor": channel_to_json(factor),
                }
                for t, factor in comb.terms
            ],
        }
        with open(args.emit, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2)
            fh.write("\n")
        doc["emitted"] = args.emit
    if args.json:
        print(json.dumps(doc, indent=2))
    else:
        print(f"decomposed into {doc['n_terms']} C*-extreme term(s)")
        print(f"  reconstruction error: {doc['reconstruction_error']:.3e}")
        print(f"  all factors extreme: {_yn(doc['all_factors_extreme'])}")
        print(f"  proper combination: {_yn(doc['proper'])}")
        for line in doc["factor_diagnostics"]:
            print(f"  note: {line}")
        if args.emit:
            print(f"  wrote terms to {args.emit}")
    return 0


# ---------------------------------------------------------------------------
# rn / arveson
# ---------------------------------------------------------------------------


def _cmd_rn(args) -> int:
    psi = load_channel(args.channel)
    phi = load_channel(args.dominating)
    tol = _tolerance(args.tol)
    form = extract_canonical(phi, tol)
    deriv = rn_derivative(form, psi, tol)
    if args.json:
        print(
            json.dumps(
                {
                    "R": _encode_matrix(deriv.R),
                    "per_block": [_encode_matrix(m) for m in deriv.per_block],
                    "residual": deriv.residual,
                },
                indent=2,
            )
        )
    else:
        print("commuting derivative R with Psi = Phi(.) R:")
        print(_indent(_fmt_matrix(deriv.R)))
        print(f"  blocks: {form.n_blocks}, factorization residual {deriv.residual:.3e}")
    return 0


def _cmd_arveson(args) -> int:
    psi = load_channel(args.channel)
    phi = load_channel(args.dominating)
    tol = _tolerance(args.tol)
    deriv = arveson_derivative(phi, psi, tol)
    vals, _ = herm_eig(deriv.T, tol)
    if args.json:
        print(
            json.dumps(
                {
                    "T": _encode_matrix(deriv.T),
                    "eigenvalues": [float(v) for v in vals],
                    "residual": deriv.residual,
                },
                indent=2,
            )
        )
    else:
        print("coefficient matrix T in the dominating Kraus frame:")
        print(_indent(_fmt_matrix(deriv.T)))
        with np.printoptions(precision=6, suppress=True):
            print(f"  eigenvalues: {np.asarray(vals)}")
        print(f"  residual: {deriv.residual:.3e}")
    return 0


# ---------------------------------------------------------------------------
# equiv
# ---------------------------------------------------------------------------


def _cmd_equiv(args) -> int:
    a = load_channel(args.first)
    b = load_channel(args.second)
    tol = _tolerance(args.tol)
    try:
        form_a = extract_canonical(a, tol)
        form_b = extract_canonical(b, tol)
    except NotExtreme as exc:
        raise NotExtreme(f"equivalence needs two C*-extreme channels: {exc}") from exc
    check = unitary_equivalent(form_a, form_b, tol)
    if args.json:
        doc: dict = {"equivalent": check.equivalent}
        if check.witness_unitary is not None:
            doc["witness_unitary"] = _encode_matrix(check.witness_unitary)
        print(json.dumps(doc, indent=2))
    else:
        print(f"unitarily equivalent: {_yn(check.equivalent)}")
        if check.witness_unitary is not None:
            print("witness U (second = Ad_U first):")
            print(_indent(_fmt_matrix(check.witness_unitary)))
    return 0


# ---------------------------------------------------------------------------
# random
# ---------------------------------------------------------------------------


def _cmd_random(args) -> int:
    rng = SeededRng(args.seed)
    tol = _tolerance(args.tol)
    if args.kind == "povm-ensemble":
        n_terms = args.terms if args.terms is not None else args.d1 * args.d2
        ch = random_unital_eb(rng, args.d1, args.d2, n_terms=n_terms, tol=tol)
    else:
        ch = random_cstar_extreme(rng, args.d1, args.d2, n_blocks=args.terms, tol=tol)
    doc = channel_to_json(ch)
    text = json.dumps(doc, indent=2)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
            fh.write("\n")
    else:
        print(text)
    return 0


# ---------------------------------------------------------------------------
# gallery
# ---------------------------------------------------------------------------


def _cmd_gallery(args) -> int:
    tol = _tolerance(args.tol)
    outcomes = [run_case(args.case, tol)] if args.case else run_all(tol)
    if args.emit:
        os.makedirs(args.emit, exist_ok=True)
        for outcome in outcomes:
            for key, ch in outcome.channels.items():
                save_channel(ch, os.path.join(args.emit, f"{outcome.name}.{key}.json"))
    if args.json:
        doc = [
            {
                "name": o.name,
                "summary": o.summary,
                "passed": o.passed,
                "checks": [
                    {"name": c.name, "passed": c.passed, "detail": c.detail}
                    for c in o.checks
                ],
            }
            for o in outcomes
        ]
        print(json.dumps(doc, indent=2))
    else:
        for o in outcomes:
            print(f"{'PASS' if o.passed else 'FAIL'}  {o.name}: {o.summary}")
            if args.verbose or not o.passed:
                for c in o.checks:
                    mark = "ok" if c.passed else "FAILED"
                    detail = f" ({c.detail})" if c.detail else ""
                    print(f"        [{mark}] {c.name}{detail}")
        n_pass = sum(o.passed for o in outcomes)
        print(f"{n_pass}/{len(outcomes)} cases passed")
    return 0 if all(o.passed for o in outcomes) else 2


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------


def _add_tol(sp) -> None:
    sp.add_argument(
        "--tol",
        type=float,
        default=None,
        help="numerical tolerance (default: EBX_TOL env var or 1e-9)",
    )


def _build_parser() -> _Parser:
    parser = _Parser(prog="ebx", description="C*-extreme analysis of EB channels")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    sp = sub.add_parser("analyze", help="full report on a channel file")
    sp.add_argument("channel", help="channel JSON file")
    sp.add_argument("--json", action="store_true", help="machine-readable output")
    _add_tol(sp)
    sp.set_defaults(fn=_cmd_analyze)

    sp = sub.add_parser("km", help="decompose into C*-extreme factors")
    sp.add_argument("channel", help="channel JSON file (unital EB with ensemble)")
    sp.add_argument("--json", action="store_true", help="machine-readable output")
    sp.add_argument("--emit", metavar="FILE", help="write the terms as JSON")
    _add_tol(sp)
    sp.set_defaults(fn=_cmd_km)

    sp = sub.add_parser("rn", help="commuting derivative of a dominated channel")
    sp.add_argument("channel", help="dominated channel JSON file")
    sp.add_argument(
        "--dominating", required=True, metavar="FILE", help="C*-extreme channel file"
    )
    sp.add_argument("--json", action="store_true", help="machine-readable output")
    _add_tol(sp)
    sp.set_defaults(fn=_cmd_rn)

    sp = sub.add_parser("arveson", help="coefficient matrix of a CP domination")
    sp.add_argument("channel", help="dominated channel JSON file")
    sp.add_argument(
        "--dominating", required=True, metavar="FILE", help="dominating channel file"
    )
    sp.add_argument("--json", action="store_true", help="machine-readable output")
    _add_tol(sp)
    sp.set_defaults(fn=_cmd_arveson)

    sp = sub.add_parser("equiv", help="unitary equivalence of two extreme channels")
    sp.add_argument("first", help="channel JSON file")
    sp.add_argument("second", help="channel JSON file")
    sp.add_argument("--json", action="store_true", help="machine-readable output")
    _add_tol(sp)
    sp.set_defaults(fn=_cmd_equiv)

    sp = sub.add_parser("random", help="generate a seeded random channel")
    sp.add_argument(
        "--kind",
        choices=("povm-ensemble", "cstar-extreme"),
        required=True,
        help="povm-ensemble: generic unital EB; cstar-extreme: canonical block form",
    )
    sp.add_argument("--d1", type=int, required=True, help="input dimension")
    sp.add_argument("--d2", type=int, required=True, help="output dimension")
    sp.add_argument(
        "--terms",
        type=int,
        default=None,
        help="ensemble terms (povm-ensemble) or blocks (cstar-extreme)",
    )
    sp.add_argument("--seed", type=int, required=True, help="RNG seed")
    sp.add_argument("--out", metavar="FILE", help="write to a file instead of stdout")
    _add_tol(sp)
    sp.set_defaults(fn=_cmd_random)

    sp = sub.add_parser("gallery", help="run the built-in worked examples")
    group = sp.add_mutually_exclusive_group()
    group.add_argument("--case", choices=CASE_NAMES, help="run a single case")
    group.add_argument(
        "--all", action="store_true", help="run every case (the default)"
    )
    sp.add_argument("--emit", metavar="DIR", help="write case channels as JSON files")
    sp.add_argument("--json", action="store_true", help="machine-readable output")
    sp.add_argument("-v", "--verbose", action="store_true", help="show every check")
    _add_tol(sp)
    sp.set_defaults(fn=_cmd_gallery)

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    try:
        if args.tol is None:
            args.tol = _tol_default()
        if args.tol <= 0 or args.tol > 1e-3:
            raise EbxError(f"tolerance must be in (0, 1e-3], got {args.tol}")
        return args.fn(args)
    except (ParseError, OSError) as exc:
        # bad files and bad paths are usage-level failures
        print(f"ebx: error: {exc}", file=sys.stderr)
        return 1
    except (EbxError, ValueError) as exc:
        # ValueError covers out-of-range generator arguments (seeds, counts)
        print(f"ebx: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
