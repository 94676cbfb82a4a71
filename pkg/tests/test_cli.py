import io
import json
import pathlib

import pytest

from dmc.cli import main, parse_program, read_program
from dmc.sexpr import ParseError

PROGRAMS = pathlib.Path(__file__).resolve().parent.parent / "programs"


def run(*argv):
    out = io.StringIO()
    code = main([str(a) for a in argv], out)
    return code, out.getvalue()


def prog(name):
    return PROGRAMS / name


def test_run_pred():
    code, text = run("run", prog("pred.dmc"), "pred", 13)
    assert code == 0 and text.strip() == "6"


def test_run_all_forms():
    code, text = run("run", prog("library.dmc"))
    assert code == 0
    lines = text.splitlines()
    assert [ln.split()[-1] for ln in lines[:4]] == ["7", "9", "4", "3"]


def test_classify_one_min():
    code, text = run("classify", prog("one_min.dmc"), "f")
    assert code == 0 and "level 1" in text
    code, text = run("classify", prog("one_min.dmc"), "g")
    assert "level 2" in text


def test_check_rejects_unsafe_recursion():
    code, text = run("check", prog("unsafe_srr.dmc"))
    assert code == 1 and "SafeCodomainViolation" in text


def test_json_error_payload():
    code, text = run("check", prog("unsafe_srr.dmc"), "--json")
    assert json.loads(text.splitlines()[-1])["error"] == "SafeCodomainViolation"


def test_fuel_exhaustion_exit_code():
    code, text = run("run", prog("one_min.dmc"), "f", 50, "--fuel", 10)
    assert code == 2 and "10" in text


def test_levels_flag_changes_budget():
    code, _ = run("check", prog("one_min.dmc"), "-i", 1)
    assert code == 1


def test_wrong_shape_value_is_an_error():
    code, text = run("run", prog("pred.dmc"), "pred", "(inl", "3)")
    assert code == 1


def test_table_and_model():
    code, text = run("table", "-i", 3, "--paper")
    assert code == 0 and "X^(0)!" in text
    code, text = run("verify-model", "-i", 2)
    assert code == 0 and "pass" in text


def test_verify_diagrams_eta():
    code, text = run("verify-diagrams", "--suite", "eta", "--samples", 8)
    assert code == 0 and "FAIL" not in text


def test_parse_definition():
    src = "(def pred (arrow (N 0 0) (N 0 0)) (fr (zero (0 0)) (proj1 (N 0 0) top) (0 0)))"
    p = parse_program(src)
    assert [d.name for d in p.definitions] == ["pred"]


def test_unbalanced_parens():
    with pytest.raises(ParseError) as e:
        parse_program("(def pred (arrow (N 0 0) (N 0 0))")
    assert e.value.line == 1


def test_duplicate_definition():
    src = "(def z (arrow top (N 0 0)) (zero (0 0)))\n(def z (arrow top (N 0 0)) (zero (0 0)))"
    with pytest.raises(ParseError, match="duplicate definition"):
        parse_program(src)


@pytest.mark.parametrize("path", sorted(PROGRAMS.glob("*.dmc")), ids=lambda p: p.name)
def test_print_parse_round_trip(path):
    p = read_program(str(path))
    assert parse_program(str(p)) == p
