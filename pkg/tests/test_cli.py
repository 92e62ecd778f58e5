"""System JSON parsing/serialization, candidate parsing, CLI dispatch and exit codes."""

import json
from pathlib import Path

import pytest

from sdefi import systems
from sdefi.cli import (
    InputFormatError,
    _parse_x0,
    _workers,
    load_system,
    main,
    parse_candidate,
    parse_system,
    parse_system_dict,
    serialize_system,
)

SYSTEMS_DIR = Path(__file__).resolve().parent.parent / "systems"


def gbm_dict():
    return {
        "dim": 1,
        "noise_dim": 1,
        "var_names": ["x1"],
        "drift": [[{"c": ["1", "0"], "e": [1]}]],
        "diffusion": [[[{"c": ["1/1", "0/1"], "e": [1]}]]],
    }


# -- parsing ---------------------------------------------------------------------------


def test_parse_gbm_dict_matches_builder():
    assert parse_system_dict(gbm_dict()) == systems.gbm()


def test_serialize_parse_roundtrip_all_builtins():
    for name, builder in systems.REGISTRY.items():
        sys = builder()
        assert parse_system_dict(serialize_system(sys)) == sys, name


def test_committed_system_files_match_builders():
    files = sorted(SYSTEMS_DIR.glob("*.json"))
    assert len(files) == len(systems.REGISTRY)
    for path in files:
        builder = systems.REGISTRY[path.stem]
        assert json.loads(path.read_text()) == serialize_system(builder()), path.stem


def test_drift_length_mismatch():
    d = gbm_dict()
    d["drift"] = []
    with pytest.raises(InputFormatError, match="drift must list 1"):
        parse_system_dict(d)


def test_decimal_coefficient_rejected():
    d = gbm_dict()
    d["drift"][0][0]["c"] = ["0.5", "0"]
    with pytest.raises(InputFormatError, match="exact rational"):
        parse_system_dict(d)


def test_zero_denominator_rejected():
    d = gbm_dict()
    d["drift"][0][0]["c"] = ["1/0", "0"]
    with pytest.raises(InputFormatError, match="zero denominator"):
        parse_system_dict(d)


def test_duplicate_exponent_vector_rejected():
    d = gbm_dict()
    d["drift"][0].append({"c": ["2", "0"], "e": [1]})
    with pytest.raises(InputFormatError, match="duplicate exponent"):
        parse_system_dict(d)


def test_missing_and_unknown_keys_reported():
    d = gbm_dict()
    del d["noise_dim"]
    d["extra"] = 1
    with pytest.raises(InputFormatError, match="system file keys"):
        parse_system_dict(d)


def test_var_names_must_be_distinct_identifiers():
    d = gbm_dict()
    d["dim"] = 2
    d["var_names"] = ["x", "x"]
    d["drift"] = [[], []]
    d["diffusion"] = [[[], []]]
    with pytest.raises(InputFormatError, match="distinct"):
        parse_system_dict(d)
    d["var_names"] = ["x", "2y"]
    with pytest.raises(InputFormatError, match="identifier"):
        parse_system_dict(d)


def test_bool_is_not_a_valid_dim():
    d = gbm_dict()
    d["dim"] = True
    with pytest.raises(InputFormatError, match="dim must be"):
        parse_system_dict(d)


def test_malformed_json_file(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text("{", encoding="utf-8")
    with pytest.raises(InputFormatError, match="malformed JSON"):
        parse_system(p)


def test_load_system_builtin_and_unknown():
    assert load_system("gbm") == systems.gbm()
    with pytest.raises(InputFormatError, match="builtin"):
        load_system("no_such_system")


# -- candidates ------------------------------------------------------------------------


def test_parse_candidate_forms(tmp_path):
    names = ("x1", "x2")
    n, p = parse_candidate("x1^2 + x2^2", names)
    assert n == "phi" and not p.is_zero
    n, p = parse_candidate("E = x1^2", names)
    assert n == "E"
    f = tmp_path / "cand.txt"
    f.write_text("M = x1 x2\n", encoding="utf-8")
    n, p = parse_candidate(str(f), names)
    assert n == "M" and p.coeff((1, 1)) == 1
    with pytest.raises(InputFormatError, match="identifier"):
        parse_candidate("2bad = x1", names)
    with pytest.raises(InputFormatError, match="candidate"):
        parse_candidate("y7 + 1", names)


def test_parse_x0():
    assert _parse_x0(None, 3) == (1.0, 1.0, 1.0)
    assert _parse_x0("2,0.5", 2) == (2.0, 0.5)
    with pytest.raises(InputFormatError):
        _parse_x0("1,2", 3)
    with pytest.raises(InputFormatError):
        _parse_x0("a,b", 2)


def test_workers_env(monkeypatch):
    monkeypatch.delenv("SDEFI_THREADS", raising=False)
    assert _workers() == 1
    monkeypatch.setenv("SDEFI_THREADS", "4")
    assert _workers() == 4
    monkeypatch.setenv("SDEFI_THREADS", "0")
    assert _workers() == 1
    monkeypatch.setenv("SDEFI_THREADS", "many")
    with pytest.raises(InputFormatError):
        _workers()


# -- dispatch and exit codes -----------------------------------------------------------


def test_check_weak_builtin(capsys):
    assert main(["check-weak", "gbm", "--candidate", "x1^-1"]) == 0
    out = capsys.readouterr().out
    assert "weak first integral: YES" in out


def test_check_strong_fails_with_residual(capsys):
    assert main(["check-strong", "gbm", "--candidate", "x1^-1"]) == 0
    out = capsys.readouterr().out
    assert "strong first integral: NO" in out
    assert "residual" in out


def test_missing_file_is_input_error(capsys):
    assert main(["analyze", "/no/such/file.json"]) == 2
    assert "error:" in capsys.readouterr().err


def test_bad_candidate_is_input_error(capsys):
    assert main(["check-weak", "gbm", "--candidate", "y3"]) == 2
    assert "error:" in capsys.readouterr().err


def test_perturb_singular_jacobian_is_internal_failure(tmp_path, capsys):
    from sdefi.algebra import VField, parse_poly_text
    from sdefi.ito import SdeSystem

    names = ("x1", "x2")
    sys = SdeSystem(VField((parse_poly_text("x2", names),
                            parse_poly_text("0", names))), (), names)
    p = tmp_path / "singular.json"
    p.write_text(json.dumps(serialize_system(sys)), encoding="utf-8")
    assert main(["perturb", str(p)]) == 3
    assert "internal failure:" in capsys.readouterr().err


def test_simulate_requires_seed(capsys):
    assert main(["simulate", "gbm", "--paths", "4"]) == 2


def test_simulate_json_report(capsys):
    rc = main(["simulate", "gbm", "--seed", "3", "--paths", "64", "--step", "0.01",
               "--horizon", "0.5", "--candidate", "inv=x1^-1", "--output", "json"])
    assert rc == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["paths"] == 64 and rep["seed"] == 3
    cand = rep["candidates"][0]
    assert cand["candidate"] == "inv" and cand["passed"]


def test_simulate_respects_thread_env(capsys, monkeypatch):
    monkeypatch.setenv("SDEFI_THREADS", "nope")
    assert main(["simulate", "gbm", "--seed", "1", "--paths", "4"]) == 2
    monkeypatch.setenv("SDEFI_THREADS", "2")
    assert main(["simulate", "gbm", "--seed", "1", "--paths", "4",
                 "--step", "0.1", "--horizon", "0.2"]) == 0
    capsys.readouterr()


def test_search_json(capsys):
    rc = main(["search", "gbm", "--mode", "weak", "--dmin", "-1", "--dmax", "1",
               "--output", "json"])
    assert rc == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["basis"] == ["x1^-1"]
    assert rep["independence_rank"] == 1


def test_search_bad_window(capsys):
    assert main(["search", "gbm", "--mode", "weak", "--dmin", "3", "--dmax", "1"]) == 2


def test_resonance_text_output(capsys):
    assert main(["resonance", "lotka_volterra"]) == 0
    out = capsys.readouterr().out
    assert "NO_WEAK_ANALYTIC" in out
    assert "certified" in out


def test_analyze_json_schema(capsys):
    rc = main(["analyze", "lotka_volterra", "--output", "json"])
    assert rc == 0
    rep = json.loads(capsys.readouterr().out)
    verdicts = rep["resonance"]["verdicts"]
    assert verdicts, "expected at least one verdict"
    for v in verdicts:
        assert {"code", "theorem", "hypotheses_checked", "epistemic_status",
                "detail"} <= set(v)
        assert v["epistemic_status"]["kind"] in ("certified", "bounded")
        if v["epistemic_status"]["kind"] == "bounded":
            assert {"K", "tol"} <= set(v["epistemic_status"])
    assert any(v["code"] == "NO_WEAK_ANALYTIC"
               and v["epistemic_status"]["kind"] == "certified" for v in verdicts)
    assert rep["search"]["weak"]["count"] == 0
    assert rep["count_bound"]["consistent"]


def test_analyze_survives_laurent_drift(capsys):
    # linearization is undefined for the two-body system; the report must say so
    # and still run the searches
    rc = main(["analyze", "two_body", "--output", "json", "--dmax", "3"])
    assert rc == 0
    rep = json.loads(capsys.readouterr().out)
    assert rep["linearization"]["applicable"] is False
    assert rep["resonance"]["applicable"] is False
    assert rep["search"]["weak"]["basis"] == ["r^2 w"]
    assert rep["search"]["strong"]["basis"] == []


def test_analyze_simulate_needs_seed(capsys):
    assert main(["analyze", "gbm", "--simulate"]) == 2
    assert "seed" in capsys.readouterr().err
