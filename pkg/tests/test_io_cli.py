import json
import random
import shutil
import subprocess
from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from koszul.cli import EXIT_MATH, EXIT_OK, EXIT_PARSE, main
from koszul.cube import direct_sum
from koszul.errors import ParseError
from koszul.generate import context, conjugated_simple, typical_type
from koszul.io import dumps_cube, load_cube, parse_document
from koszul.typical import TypicalType, make_typical

FIXTURES = Path(__file__).parent / "fixtures"
TYP = str(FIXTURES / "typ_xy_2_12.json")
CONJ = str(FIXTURES / "conj_x_2_1.json")


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def doc(**over):
    base = {"base_field": "QQ", "variables": ["x"], "sequence": {"1": "x"},
            "vertices": {"∅": 1, "1": 1},
            "boundaries": [{"direction": 1, "vertex": "1", "matrix": [["x"]]}]}
    base.update(over)
    return json.dumps(base, indent=2)


def test_parse_error_positions():
    text = doc(boundaries=[{"direction": 1, "vertex": "1", "matrix": [["x +* 2"]]}])
    with pytest.raises(ParseError) as e:
        parse_document(text)
    line = text.splitlines()[e.value.line - 1]
    assert line[e.value.column - 1] == "*"
    with pytest.raises(ParseError) as e:
        parse_document('{"base_field": "QQ",\n  "variables": [}')
    assert e.value.line == 2
    with pytest.raises(ParseError):
        parse_document(doc(boundaries=[{"direction": 1, "vertex": "1", "matrix": [["1/x"]]}]))
    with pytest.raises(ParseError):
        parse_document(doc(vertices={"∅": 1, "1": 2}))


def test_prime_field_document():
    _, cube = parse_document(doc(base_field="GF(7)",
                                 boundaries=[{"direction": 1, "vertex": "1",
                                              "matrix": [["8*x"]]}]))
    assert str(cube.d(1, 1)[0, 0]) == "x"


@given(st.integers(0, 10**6))
@settings(max_examples=15, deadline=None)
def test_round_trip(seed):
    rng = random.Random(seed)
    ctx = context(rng.randint(1, 3))
    c = conjugated_simple(ctx, typical_type(rng, ctx.indices, 3), rng)
    _, back = parse_document(dumps_cube(c))
    assert back == c


def test_validate_fixture(capsys):
    code, out, _ = run(capsys, "validate", TYP)
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["face_laws"] and rep["koszul"]


def test_homology_fixture(capsys):
    code, out, _ = run(capsys, "homology", TYP, "1")
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["presentations"]["∅"] == [["x", "0"], ["0", "1"]]
    assert rep["boundaries"]["2@2"] == [["y", "0"], ["0", "y"]]


def test_normalize_fixture(capsys):
    code, out, _ = run(capsys, "normalize", CONJ)
    assert code == EXIT_OK
    rep = json.loads(out)
    assert rep["type"] == "(2, (1))"
    assert rep["certificate"]["natural"] and rep["certificate"]["unit_determinants"]


def test_normalize_discordant_exits_math(capsys, tmp_path):
    ctx = context(2)
    c = direct_sum(make_typical(ctx, TypicalType.of(1, (1, 0))),
                   make_typical(ctx, TypicalType.of(1, (0, 1))))
    p = tmp_path / "sum.json"
    p.write_text(dumps_cube(c))
    code, out, _ = run(capsys, "normalize", str(p))
    assert code == EXIT_MATH
    assert json.loads(out)["error"] == "NoTypicalForm"


def test_tot_text_format(capsys):
    code, out, _ = run(capsys, "tot", TYP, "--format", "text")
    assert code == EXIT_OK
    assert "method" in out


def test_bad_scalar_exit_code(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(doc(boundaries=[{"direction": 1, "vertex": "1", "matrix": [["x^"]]}]))
    code, _, err = run(capsys, "validate", str(p))
    assert code == EXIT_PARSE
    assert json.loads(err)["line"] is not None


def test_verify_deterministic(capsys):
    a = run(capsys, "verify", "typ-direct-sum", "--seed", "7", "--cases", "12")
    b = run(capsys, "verify", "typ-direct-sum", "--seed", "7", "--cases", "12", "--jobs", "2")
    assert a[0] == EXIT_OK and a[1] == b[1]
    assert json.loads(a[1])["ok"]


def test_verify_zero_map_certificate(capsys):
    code, out, _ = run(capsys, "verify", "zero-map", "--seed", "1", "--cases", "3")
    rep = json.loads(out)
    assert code == EXIT_OK and rep["certificate"]["valid"]


def test_verify_errors(capsys):
    assert run(capsys, "verify", "bogus")[0] == EXIT_PARSE
    assert run(capsys, "verify", "totisom", "--max-s", "5")[0] == EXIT_PARSE
    assert run(capsys, "verify", "totisom", "--max-rank", "9")[0] == EXIT_PARSE
    with pytest.raises(SystemExit) as e:
        main(["frobnicate"])
    assert e.value.code == EXIT_PARSE


def test_gen_typical_matches_fixture(capsys):
    code, out, _ = run(capsys, "gen", "typical", "r=2", "n=1,2", "vars=x,y")
    assert code == EXIT_OK
    assert json.loads(out) == json.loads(Path(TYP).read_text())


def test_gen_zero_and_bad(capsys):
    code, out, _ = run(capsys, "gen", "typical", "r=0")
    assert code == EXIT_OK
    assert set(json.loads(out)["vertices"].values()) == {0}
    assert run(capsys, "gen", "typical", "r=1", "n=3")[0] == EXIT_PARSE
    assert run(capsys, "gen", "spline")[0] == EXIT_PARSE


def test_gen_conjugated_sidecar(capsys, tmp_path):
    out = tmp_path / "c.json"
    code, _, _ = run(capsys, "gen", "conjugated-simple", "vars=x", "r=2", "n=1", "--seed", "3",
                     "--out", str(out))
    assert code == EXIT_OK
    side = json.loads((tmp_path / "c.json.type.json").read_text())
    assert side["type"] == "(2, (1))"
    assert out.read_text() == Path(CONJ).read_text()
    _, cube = load_cube(out)
    code, rep, _ = run(capsys, "normalize", str(out))
    assert json.loads(rep)["type"] == side["type"]


@pytest.mark.skipif(shutil.which("koszul") is None, reason="console script not installed")
def test_console_script():
    proc = subprocess.run(["koszul", "validate", TYP], capture_output=True, text=True)
    assert proc.returncode == 0
