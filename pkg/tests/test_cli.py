"""End-to-end command-line behaviour: exit codes, output formats, and the
certificate JSON emitted by the validate family."""

import hashlib
import json

import pytest

from conftest import DISAMBIGUATED_SRC, FIXTURES, SCOPING_SRC
from yulkit.cli import EXIT_INPUT, EXIT_OK, EXIT_REJECTED, main
from yulkit import __version__


def run_cli(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


# --- parse ---


def test_parse_literal_arg(capsys):
    code, out, _ = run_cli(capsys, "parse", "{let x x:=17}")
    assert code == EXIT_OK
    assert out == "{\n    let x\n    x := 17\n}\n"


def test_parse_single_statement_inline(capsys):
    code, out, _ = run_cli(capsys, "parse", "{let x}")
    assert code == EXIT_OK
    assert out == "{ let x }\n"


def test_parse_file(capsys):
    code, out, _ = run_cli(capsys, "parse", str(FIXTURES / "scoping.yul"))
    assert code == EXIT_OK
    assert out.strip() == SCOPING_SRC.strip()


def test_parse_json_autodetect(capsys):
    code, out, _ = run_cli(capsys, "parse", str(FIXTURES / "scoping.json"))
    assert code == EXIT_OK
    assert out.strip() == SCOPING_SRC.strip()


def test_parse_error_exit_2(capsys):
    code, out, err = run_cli(capsys, "parse", "{ let }")
    assert code == EXIT_INPUT
    assert out == ""
    assert err.startswith("error: ")


def test_missing_file_treated_as_source(capsys):
    # a nonexistent path is taken as literal text, which then fails to parse
    code, _, err = run_cli(capsys, "parse", "/no/such/file.yul")
    assert code == EXIT_INPUT
    assert "error:" in err


# --- check ---


def test_check_safe(capsys):
    code, out, _ = run_cli(capsys, "check", "{ let x := add(1, 2) }")
    assert code == EXIT_OK
    assert out == "safe\n"


def test_check_unsafe(capsys):
    code, out, _ = run_cli(capsys, "check", "{ x := 1 }")
    assert code == EXIT_REJECTED
    assert out.startswith("unsafe: unknown-var")


def test_check_dialect_none(capsys):
    code, out, _ = run_cli(capsys, "check", "--dialect", "none", "{ pop(add(1, 2)) }")
    assert code == EXIT_REJECTED
    assert "unknown-fun" in out


# --- run ---


def test_run_scoping(capsys):
    code, out, _ = run_cli(
        capsys, "run", "--fuel", "100", str(FIXTURES / "scoping.yul")
    )
    assert code == EXIT_OK
    assert out == "x=0\nmode=regular\n"


def test_run_fuel_exhausted(capsys):
    code, out, _ = run_cli(capsys, "run", "--fuel", "0", "{ }")
    assert code == EXIT_REJECTED
    assert out == "error=limit\n"


def test_run_safety_error(capsys):
    # top level must finish in regular mode; a stray break is caught there
    code, out, _ = run_cli(capsys, "run", "{ break }")
    assert code == EXIT_REJECTED
    assert out == "error=safety:mode-violation\n"


def test_run_safety_error_inside_update(capsys):
    code, out, _ = run_cli(capsys, "run", "{ for { } 1 { break } { } }")
    assert code == EXIT_REJECTED
    assert out == "error=safety:break-outside-loop\n"


def test_run_with_vars(capsys):
    code, out, _ = run_cli(
        capsys, "run", "--var", "x=41", "--var", "y=0x10", "{ x := add(x, y) }"
    )
    assert code == EXIT_OK
    assert out == "x=57\ny=16\nmode=regular\n"


def test_run_var_bad_binding(capsys):
    code, _, err = run_cli(capsys, "run", "--var", "nonsense", "{ }")
    assert code == EXIT_INPUT
    assert "name=value" in err


def test_run_var_out_of_range(capsys):
    too_big = str(1 << 256)
    code, _, err = run_cli(capsys, "run", "--var", f"x={too_big}", "{ }")
    assert code == EXIT_INPUT
    assert "out of range" in err


# --- transform ---


def test_transform_dead_code(capsys):
    code, out, _ = run_cli(
        capsys, "transform", "--pass", "dead-code", "{ for { } 1 { } { break x := 1 } }"
    )
    assert code == EXIT_OK
    assert out == "{\n    for { } 1 { } { break }\n}\n"


def test_transform_loop_init(capsys):
    code, out, _ = run_cli(
        capsys,
        "transform",
        "--pass",
        "loop-init-rewrite",
        "{ for { let i := 0 } lt(i, 3) { i := add(i, 1) } { } }",
    )
    assert code == EXIT_OK
    assert out == (
        "{\n"
        "    {\n"
        "        let i := 0\n"
        "        for { } lt(i, 3) { i := add(i, 1) } { }\n"
        "    }\n"
        "}\n"
    )


# --- import-json ---


def test_import_json(capsys):
    code, out, _ = run_cli(capsys, "import-json", str(FIXTURES / "scoping.json"))
    assert code == EXIT_OK
    assert out.strip() == SCOPING_SRC.strip()


def test_import_json_invalid_json(capsys):
    code, _, err = run_cli(capsys, "import-json", "{ not json")
    assert code == EXIT_INPUT
    assert "not valid JSON" in err


def test_import_json_bad_schema(capsys):
    code, _, err = run_cli(
        capsys, "import-json", json.dumps({"nodeType": "YulTeapot"})
    )
    assert code == EXIT_INPUT
    assert "error:" in err


# --- validate: executable transforms ---


def cert_of(out):
    return json.loads(out)


def test_validate_dead_code_accept(capsys, tmp_path):
    old = tmp_path / "old.yul"
    new = tmp_path / "new.yul"
    old.write_text("{ for { } 1 { } { break x := 1 } }\n")
    new.write_text("{ for { } 1 { } { break } }\n")
    code, out, _ = run_cli(
        capsys, "validate", str(old), str(new), "--transform", "dead-code"
    )
    assert code == EXIT_OK
    cert = cert_of(out)
    assert cert["tool"] == "yulkit"
    assert cert["tool_version"] == __version__
    assert cert["schema"] == 1
    assert cert["transform"] == "dead-code"
    assert cert["result"] == "accepted"
    assert "detail" not in cert  # acceptance of an executable transform is bare
    assert [entry["path"] for entry in cert["inputs"]] == [str(old), str(new)]
    assert cert["inputs"][0]["sha256"] == hashlib.sha256(old.read_bytes()).hexdigest()
    assert cert["inputs"][1]["sha256"] == hashlib.sha256(new.read_bytes()).hexdigest()


def test_validate_dead_code_reject(capsys, tmp_path):
    old = tmp_path / "old.yul"
    new = tmp_path / "new.yul"
    old.write_text("{ for { } 1 { } { break x := 1 } }\n")
    new.write_text("{ for { } 1 { } { break x := 1 } }\n")  # not transformed
    code, out, _ = run_cli(
        capsys, "validate", str(old), str(new), "--transform", "dead-code"
    )
    assert code == EXIT_REJECTED
    cert = cert_of(out)
    assert cert["result"] == "rejected"
    assert "does not match" in cert["detail"]["error"]


def test_validate_loop_init_differential(capsys, tmp_path):
    old = tmp_path / "old.yul"
    new = tmp_path / "new.yul"
    old.write_text("{ let s for { let i := 0 } lt(i, 3) { i := add(i, 1) } { s := add(s, i) } }")
    new.write_text("{ let s { let i := 0 for { } lt(i, 3) { i := add(i, 1) } { s := add(s, i) } } }")
    code, out, _ = run_cli(
        capsys,
        "validate",
        str(old),
        str(new),
        "--transform",
        "loop-init-rewrite",
        "--differential",
        "5",
    )
    assert code == EXIT_OK
    cert = cert_of(out)
    assert cert["result"] == "accepted"
    assert "differential" in cert["suites_run"]


# --- validate: disambiguation ---


def test_validate_disambiguate_accept(capsys):
    code, out, _ = run_cli(
        capsys,
        "validate",
        str(FIXTURES / "scoping.yul"),
        str(FIXTURES / "scoping_disambiguated.yul"),
        "--transform",
        "disambiguate",
    )
    assert code == EXIT_OK
    cert = cert_of(out)
    assert cert["result"] == "accepted"
    assert cert["detail"]["variable_renaming"] == [["x", "x"]]
    assert sorted(cert["detail"]["function_renaming"]) == [["f", "f"], ["g", "g"]]


def test_validate_disambiguate_reject_reversed(capsys):
    code, out, _ = run_cli(
        capsys,
        "validate",
        str(FIXTURES / "scoping_disambiguated.yul"),
        str(FIXTURES / "scoping.yul"),
        "--transform",
        "disambiguate",
    )
    assert code == EXIT_REJECTED
    cert = cert_of(out)
    assert cert["result"] == "rejected"
    assert "error" in cert["detail"]


def test_validate_rename_alias(capsys):
    code, out, _ = run_cli(
        capsys,
        "validate-rename",
        str(FIXTURES / "scoping.yul"),
        str(FIXTURES / "scoping_disambiguated.yul"),
        "--differential",
        "3",
    )
    assert code == EXIT_OK
    cert = cert_of(out)
    assert cert["transform"] == "disambiguate"
    assert cert["result"] == "accepted"
    assert "differential" in cert["suites_run"]


def test_validate_self_pair_rejected(capsys):
    # the same code twice is not a valid disambiguation (nothing got renamed
    # apart, so the original clashes are still there)
    code, out, _ = run_cli(
        capsys,
        "validate-rename",
        str(FIXTURES / "scoping.yul"),
        str(FIXTURES / "scoping.yul"),
    )
    assert code == EXIT_REJECTED
    assert cert_of(out)["result"] == "rejected"


# --- suite ---


def test_suite_round_trip(capsys):
    code, out, _ = run_cli(capsys, "suite", "round-trip", "--n", "5")
    assert code == EXIT_OK
    assert out == "suite round-trip: 5 case(s), 0 failure(s)\n"


def test_suite_custom_fuels(capsys):
    code, out, _ = run_cli(
        capsys, "suite", "static-soundness", "--n", "3", "--fuel", "4", "--fuel", "64"
    )
    assert code == EXIT_OK
    assert "0 failure(s)" in out


def test_suite_replay(capsys):
    code, out, _ = run_cli(capsys, "suite", "round-trip", "--replay", "3")
    assert code == EXIT_OK
    assert out == "replay of seed 3: pass\n"


def test_suite_unknown_name(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["suite", "no-such-suite"])
    assert exc.value.code == 2
    capsys.readouterr()


# --- misc ---


def test_version(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["--version"])
    assert exc.value.code == 0
    assert __version__ in capsys.readouterr().out


def test_no_subcommand(capsys):
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
    capsys.readouterr()
