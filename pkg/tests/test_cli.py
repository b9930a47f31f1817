import io
import json
import os
import shutil
import subprocess
import sys

import pytest

from ppbass import cli
from ppbass.specs import parse_formula, parse_module, parse_ring, parse_spec, print_spec
from ppbass.errors import ParseError
from ppbass.rings import INTEGERS, zmod
from ppbass.pp import div

FIX = os.path.join(os.path.dirname(os.path.abspath(__file__)), "fixtures")


def run(*argv):
    buf = io.StringIO()
    code = cli.main(list(argv), out=buf)
    return code, buf.getvalue()


def structured(*argv):
    code, out = run(*argv, "--format", "structured")
    head, body = out.splitlines()
    head = json.loads(head)
    assert head["exit"] == code and head["schema"] == "ppbass/1"
    return code, json.loads(body)


def test_bass_example():
    code, out = run("bass", "--ring", "zmod8", "--b", "2,2,2")
    assert code == 0 and "stabilizes at i = 3" in out


def test_purity_example():
    code, out = run("purity", "--ambient", os.path.join(FIX, "z4.mod"), "--sub", "2")
    assert code == 1 and "not pure, witness div 2" in out


def test_implies_example():
    code, out = run("implies", "--ring", "integers", "--lhs", "div:2", "--rhs", "div:4")
    assert code == 1 and "false, witness (Z, 2)" in out


def test_implies_true():
    code, data = structured("implies", "--ring", "integers", "--lhs", "div:4", "--rhs", "div:2")
    assert code == 0 and data["implies"] is True


def test_window_non_stabilizing():
    code, out = run("stabilize", "--ring", "integers", "--b", "2", "--window", "10")
    assert code == 1 and "no stabilization within window 10" in out


def test_eval_structured():
    code, data = structured("eval", "--module", "zmod8", "--formula", "div:2")
    assert code == 0
    assert data["size"] == 4


def test_classify_structured():
    code, data = structured("classify", "--ring", "M2(F2)")
    assert code == 0 and data["n"] == 1 and data["deg"] == 2


def test_ring_check():
    assert run("ring-check", "--ring", os.path.join(FIX, "rings", "f2xf2.json"))[0] == 0
    assert run("ring-check", "--ring", '{"kind":"zmod","n":1}')[0] == 2
    bad = {"kind": "table", "elements": ["0", "1"], "add": [[0, 1], [1, 0]], "mul": [[0, 0], [0, 0]],
           "zero": 0, "one": 1}
    code, data = structured("ring-check", "--ring", json.dumps(bad))
    assert code == 2 and "axiom" in data["message"]


def test_index_profile_gamma_perfect_realize():
    assert run("index", "--module", "zmod4", "--num", "top", "--den", "div:2")[0] == 0
    code, data = structured("profile", "--module", "Z/2", "--ring", "integers", "--pair", "top/div:2",
                            "--pair", "div:2/zero")
    assert code == 0
    code, out = run("profile", "--ring", "zmod8", "--b", "2,2,2", "--random", "20")
    assert code == 0 and "0 inconsistencies" in out
    assert run("gamma", "--ring", "zmod4", "--modules", "zmod4/2")[0] == 0
    assert run("perfect", "--ring", "integers", "--r", "2")[0] == 1
    assert run("perfect", "--ring", "integers", "--r", "1")[0] == 2
    code, out = run("realize", "--ring", "integers", "--formula", "div:3")
    assert code == 0 and "(Z, 3)" in out


@pytest.mark.parametrize("argv", [
    ["eval", "--module", "zmod4", "--formula", "div:"],
    ["eval", "--module", "zmod4", "--formula", "nonsense"],
    ["eval", "--module", "quux", "--formula", "top"],
    ["implies", "--ring", "zmod4"],
    ["purity", "--ambient", "zmod4", "--sub", "1,2"],
    ["corpus", "--dir", "/nonexistent/dir"],
    ["bogus-verb"],
])
def test_parse_errors(argv):
    assert run(*argv)[0] == 2


def test_cap_errors():
    assert run("eval", "--module", "zmod8", "--formula", "top", "--enum-cap", "4")[0] == 3
    assert run("ring-check", "--ring", "zmod300")[0] == 3
    assert run("ring-check", "--ring", "zmod300", "--ring-cap", "512")[0] == 0


def test_corpus_verb(tmp_path):
    code, data = structured("corpus", "--dir", os.path.join(FIX, "corpus"))
    assert code == 0 and data["total"] == 4
    with open(os.path.join(FIX, "corpus_golden.json")) as fh:
        golden = json.load(fh)
    for row, g in zip(data["rows"], golden):
        for k, v in g.items():
            assert row[k] == v
    code, data = structured("corpus", "--dir", str(tmp_path))
    assert code == 0 and data["rows"] == []
    shutil.copy(os.path.join(FIX, "corpus", "z4.json"), tmp_path / "a.json")
    (tmp_path / "b.json").write_text("{ broken")
    code, data = structured("corpus", "--dir", str(tmp_path))
    assert code != 0
    assert [r["status"] for r in data["rows"]] == ["ok", "error"]


def test_byte_identical_subprocess():
    argv = [sys.executable, "-m", "ppbass.cli", "profile", "--ring", "zmod8", "--b", "2,2,2",
            "--random", "10", "--seed", "3", "--format", "structured"]
    a = subprocess.run(argv, capture_output=True, check=False)
    b = subprocess.run(argv, capture_output=True, check=False)
    assert a.returncode == 0 and a.stdout == b.stdout and a.stdout


FIXTURE_FILES = sorted(os.path.join(root, f) for sub in ("rings", "modules", "formulas", "chains")
                       for root, _, files in os.walk(os.path.join(FIX, sub)) for f in files)


@pytest.mark.parametrize("path", FIXTURE_FILES, ids=os.path.basename)
def test_fixture_round_trip(path):
    obj = parse_spec(path)
    text = print_spec(obj)
    again = parse_spec(text)
    assert again == obj
    assert print_spec(again) == text


def test_shorthand_parsing():
    assert parse_ring('{"kind":"zmod","n":8}') == zmod(8)
    assert parse_ring("integers") == INTEGERS
    assert parse_formula('{"div": 2}', INTEGERS) == div(INTEGERS, 2)
    M = parse_module("zmod4+zmod4/2")
    assert M.size == 8
    with pytest.raises(ParseError):
        parse_ring('{"kind":"zmod","n":1}')
    with pytest.raises(ParseError):
        parse_formula("div:2", None)


def test_parse_error_has_position():
    with pytest.raises(ParseError) as exc:
        parse_ring('{"kind": "zmod",\n "n": }')
    assert exc.value.line == 2
