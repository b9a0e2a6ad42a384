"""End-to-end command line behavior, driven through main(argv)."""

import json

import numpy as np
import pytest

from ebx import SeededRng, choi_channel, compose_ad, random_unital_eb, save_channel, to_choi
from ebx.channel import channel_from_map, identity_channel
from ebx.cli import main
from ebx.gallery import (
    CASE_NAMES,
    diagonal_pinching_channel,
    swapped_pinching_channel,
    two_block_pinching_channel,
)
from ebx.linalg import max_abs, psd_sqrt


def write_channel(tmp_path, ch, name):
    path = tmp_path / name
    save_channel(ch, path)
    return str(path)


@pytest.fixture()
def pinching_file(tmp_path):
    return write_channel(tmp_path, diagonal_pinching_channel(), "pinching.json")


def decode(rows):
    return np.array(
        [[complex(*v) if isinstance(v, list) else complex(v) for v in row] for row in rows]
    )


# --- analyze ---


def test_analyze_human_output(pinching_file, capsys):
    assert main(["analyze", pinching_file]) == 0
    out = capsys.readouterr().out
    assert "M2 -> M2" in out
    assert "C*-extreme: yes" in out
    assert "entanglement breaking: yes" in out


def test_analyze_json_report(pinching_file, capsys):
    assert main(["analyze", pinching_file, "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["d1"] == 2 and report["d2"] == 2
    assert report["choi_rank"] == 2
    assert report["predicates"]["is_cp"] and report["predicates"]["is_unital"]
    assert report["ppt"] is True
    assert report["eb"]["is_eb"] == "yes"
    assert report["eb_kraus_rank"] == {"lower": 2, "upper": 2}
    ext = report["extremality"]
    assert ext["is_cstar_extreme"] is True
    assert ext["canonical"]["n_blocks"] == 2
    assert ext["canonical"]["block_ranks"] == [1, 1]
    assert ext["is_cq_linear_extreme_in_ucp"] is False
    assert report["commutant_dimension"] == 2
    assert report["tolerance"] == {
        "rank_rel": 1e-9,
        "psd_floor": 1e-9,
        "eq_abs": 1e-9,
    }


def test_analyze_non_eb_channel(tmp_path, capsys):
    path = write_channel(tmp_path, identity_channel(2), "id.json")
    assert main(["analyze", path, "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["eb"]["is_eb"] == "no"
    assert "extremality" not in report
    assert any("fails PPT" in note for note in report["notes"])


def test_analyze_non_cp_channel(tmp_path, capsys):
    path = write_channel(tmp_path, channel_from_map(lambda x: x.T, 2, 2), "transpose.json")
    assert main(["analyze", path, "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["predicates"]["is_cp"] is False
    assert "eb" not in report
    assert any("not completely positive" in note for note in report["notes"])


def test_analyze_inconclusive_verdict(tmp_path, capsys):
    ch = random_unital_eb(SeededRng(50), 3, 3, 4)
    stripped = choi_channel(to_choi(ch).matrix, 3, 3)
    path = write_channel(tmp_path, stripped, "stripped.json")
    assert main(["analyze", path, "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["eb"]["is_eb"] == "unknown"
    assert any("inconclusive" in note for note in report["notes"])


# --- exit codes ---


def test_missing_file_is_exit_1(tmp_path, capsys):
    assert main(["analyze", str(tmp_path / "nope.json")]) == 1
    assert "error" in capsys.readouterr().err


def test_empty_file_is_exit_1(tmp_path, capsys):
    path = tmp_path / "empty.json"
    path.write_text("")
    assert main(["analyze", str(path)]) == 1


def test_domain_error_is_exit_2(pinching_file, capsys):
    # the pinching file has no Holevo ensemble, so km has nothing to refine
    assert main(["km", pinching_file]) == 2
    assert "error" in capsys.readouterr().err


def test_usage_error_is_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["rn", "file.json"])  # missing required --dominating
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 1


def test_bad_tolerance_is_exit_2(pinching_file):
    assert main(["analyze", pinching_file, "--tol", "0.5"]) == 2
    assert main(["analyze", pinching_file, "--tol", "-1"]) == 2


def test_tol_env_var(pinching_file, monkeypatch, capsys):
    monkeypatch.setenv("EBX_TOL", "1e-8")
    assert main(["analyze", pinching_file, "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["tolerance"]["eq_abs"] == 1e-8


def test_tol_env_var_invalid_is_exit_2(pinching_file, monkeypatch):
    monkeypatch.setenv("EBX_TOL", "bogus")
    assert main(["analyze", pinching_file]) == 2


def test_explicit_tol_overrides_env(pinching_file, monkeypatch):
    monkeypatch.setenv("EBX_TOL", "bogus")
    assert main(["analyze", pinching_file, "--tol", "1e-9"]) == 0


# --- km ---


def test_km_json_and_emit(tmp_path, capsys):
    ch = random_unital_eb(SeededRng(51), 2, 2, 3)
    path = write_channel(tmp_path, ch, "random.json")
    emit = tmp_path / "terms.json"
    assert main(["km", path, "--json", "--emit", str(emit)]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["reconstruction_error"] <= 1e-9
    assert doc["all_factors_extreme"] is True
    assert doc["proper"] is False
    assert doc["emitted"] == str(emit)
    payload = json.loads(emit.read_text())
    assert payload["d1"] == 2 and payload["d2"] == 2
    assert len(payload["terms"]) == doc["n_terms"]
    gram = sum(
        (t := decode(term["coefficient"])).conj().T @ t for term in payload["terms"]
    )
    assert max_abs(gram - np.eye(2)) <= 1e-10


# --- rn / arveson ---


def test_rn_recovers_block_contraction(tmp_path, capsys):
    phi = two_block_pinching_channel()
    r0 = np.array([[0.5, 0.2, 0.0], [0.2, 0.4, 0.0], [0.0, 0.0, 0.7]], dtype=complex)
    psi = compose_ad(psd_sqrt(r0), phi)
    phi_path = write_channel(tmp_path, phi, "phi.json")
    psi_path = write_channel(tmp_path, psi, "psi.json")
    assert main(["rn", psi_path, "--dominating", phi_path, "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert max_abs(decode(doc["R"]) - r0) <= 1e-9
    assert doc["residual"] <= 1e-9
    assert len(doc["per_block"]) == 2


def test_rn_without_domination_is_exit_2(tmp_path, capsys):
    phi = two_block_pinching_channel()
    doubled = compose_ad(np.sqrt(2.0) * np.eye(3), phi)
    phi_path = write_channel(tmp_path, phi, "phi.json")
    psi_path = write_channel(tmp_path, doubled, "doubled.json")
    assert main(["rn", psi_path, "--dominating", phi_path]) == 2


def test_arveson_half_identity(tmp_path, capsys):
    phi = diagonal_pinching_channel()
    psi = compose_ad(np.sqrt(0.5) * np.eye(2), phi)
    phi_path = write_channel(tmp_path, phi, "phi.json")
    psi_path = write_channel(tmp_path, psi, "psi.json")
    assert main(["arveson", psi_path, "--dominating", phi_path, "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert max_abs(decode(doc["T"]) - 0.5 * np.eye(2)) <= 1e-12
    assert np.allclose(doc["eigenvalues"], [0.5, 0.5], atol=1e-12)


# --- equiv ---


def test_equiv_swapped_pinchings(tmp_path, capsys):
    a = write_channel(tmp_path, diagonal_pinching_channel(), "a.json")
    b = write_channel(tmp_path, swapped_pinching_channel(), "b.json")
    assert main(["equiv", a, b, "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc["equivalent"] is True
    assert max_abs(decode(doc["witness_unitary"]) - np.array([[0, 1], [1, 0]])) <= 1e-12


def test_equiv_needs_extreme_inputs(tmp_path, capsys):
    from ebx.gallery import depolarizing_channel

    a = write_channel(tmp_path, diagonal_pinching_channel(), "a.json")
    c = write_channel(tmp_path, depolarizing_channel(2), "c.json")
    assert main(["equiv", a, c]) == 2
    assert "C*-extreme" in capsys.readouterr().err


# --- random ---


def test_random_is_deterministic(capsys):
    argv = ["random", "--kind", "povm-ensemble", "--d1", "2", "--d2", "2", "--seed", "9"]
    assert main(argv) == 0
    first = capsys.readouterr().out
    assert main(argv) == 0
    second = capsys.readouterr().out
    assert first == second
    doc = json.loads(first)
    assert len(doc["representation"]["terms"]) == 4  # defaults to d1*d2 terms


def test_random_out_file_feeds_analyze(tmp_path, capsys):
    out = tmp_path / "extreme.json"
    argv = [
        "random", "--kind", "cstar-extreme", "--d1", "2", "--d2", "3",
        "--seed", "7", "--out", str(out),
    ]
    assert main(argv) == 0
    assert main(["analyze", str(out), "--json"]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["extremality"]["is_cstar_extreme"] is True
    assert report["choi_rank"] == 3


def test_random_rejects_bad_dims(capsys):
    argv = ["random", "--kind", "cstar-extreme", "--d1", "2", "--d2", "3",
            "--terms", "9", "--seed", "1"]
    assert main(argv) == 2  # more blocks than d2 is a domain error


# --- gallery ---


def test_gallery_all_passes(capsys):
    assert main(["gallery", "--all", "--json"]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert len(doc) == len(CASE_NAMES)
    assert all(case["passed"] for case in doc)


def test_gallery_single_case_verbose(capsys):
    assert main(["gallery", "--case", "two_block_pinching", "-v"]) == 0
    out = capsys.readouterr().out
    assert "PASS" in out and "[ok]" in out


def test_gallery_case_and_all_conflict(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["gallery", "--case", "tetrahedral", "--all"])
    assert exc.value.code == 1


def test_gallery_unknown_case_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["gallery", "--case", "not_a_case"])
    assert exc.value.code == 1


def test_gallery_emit_writes_channel_files(tmp_path, capsys):
    emit = tmp_path / "chans"
    assert main(["gallery", "--case", "diagonal_pinching", "--emit", str(emit)]) == 0
    files = sorted(p.name for p in emit.iterdir())
    assert files  # at least one channel written
    assert all(name.startswith("diagonal_pinching.") for name in files)
    assert main(["analyze", str(emit / files[0])]) == 0


def test_version_flag(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert "ebx" in capsys.readouterr().out
