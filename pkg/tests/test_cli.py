import io
import json
import subprocess
import sys

import pytest

from recipcomp.cli import EXIT_DATA, EXIT_OK, EXIT_UNKNOWN, EXIT_USAGE, run
from recipcomp.membership import certificate_from_json, verify_certificate
from recipcomp.poly import parse_ring


def call(*argv):
    out = io.StringIO()
    code = run(list(argv), out=out)
    return code, out.getvalue()


def call_json(*argv):
    code, text = call(*argv)
    return code, json.loads(text)


def test_member_in_with_replayed_certificate():
    code, obj = call_json("member", "--ring", "QQ[x,y]", "x", "x^3+y^2+x^4*y", "--replay")
    assert code == EXIT_OK and obj["verdict"] == "in"
    R = parse_ring("QQ[x,y]")
    cert = certificate_from_json(obj["certificate"], R)
    assert verify_certificate(cert, R("x"), R("x^3+y^2+x^4*y"))


def test_member_out_has_certificate():
    code, obj = call_json("member", "--ring", "QQ[x,y]", "x", "y")
    assert code == EXIT_OK and obj["verdict"] == "out"
    assert obj["certificate"] == {"kind": "weight", "w": [1, 0]}


def test_member_unknown_exit_code():
    code, obj = call_json("member", "--ring", "QQ[x,y]", "x^2", "x^2+y^3", "--budget", "3", "--caps", "c_cap=1")
    if obj["verdict"] == "unknown":
        assert code == EXIT_UNKNOWN and obj["certificate"] is None
    else:
        assert code == EXIT_OK


def test_invert_example():
    code, obj = call_json("invert", "--ring", "QQ[x]", "1+1/x", "--replay")
    assert code == EXIT_OK and obj == {"denominators": ["1", "-(x + 1)"]}


def test_invert_non_unit_is_data_error():
    code, _ = call("invert", "--ring", "QQ[x]", "1/x")
    assert code == EXIT_DATA


@pytest.mark.parametrize("argv", [
    ["bogus"],
    ["member", "--ring", "QQ[x,y]", "x"],
    ["member", "--ring", "QQ[x,y", "x", "y"],
    ["member", "--ring", "QQ[x,y]", "x +* y", "y"],
    ["member", "--ring", "QQ[x;gens=x^2,x^3]", "x", "x^2"],
    ["greedy", "four"],
    ["member", "--caps", "nope=1", "x", "y"],
])
def test_usage_errors(argv):
    code, _ = call(*argv)
    assert code == EXIT_USAGE


def test_output_is_byte_stable():
    argv = ["decompose", "--ring", "QQ[x,y]", "x*y", "x*y+x+y"]
    assert call(*argv) == call(*argv)
    argv = ["lattice", "2", "--ring", "QQ[x,y]"]
    assert call(*argv) == call(*argv)


def test_decompose_replay():
    code, obj = call_json("decompose", "--ring", "QQ[x,y]", "x*y", "x*y+x+y", "--replay")
    assert code == EXIT_OK and obj["denominators"]


def test_distinctify_and_greedy():
    assert call_json("distinctify", "--ring", "QQ[x]", "1/x+1/x")[1] == {"denominators": ["x", "x + 1", "x^2 + x"]}
    code, obj = call_json("greedy", "4/17")
    assert code == EXIT_OK and obj["denominators"] == [5, 29, 1233, 3039345]


def test_factroid_and_colon():
    code, obj = call_json("factroid", "--ring", "QQ[x;gens=x^2,x^3]", "x^6", "--one-step")
    assert code == EXIT_OK and sorted(obj["basis"]) == ["1", "x^2", "x^3", "x^4", "x^6"]
    code, obj = call_json("colon", "--ring", "QQ[x]", "1", "x", "--by", "x")
    assert obj["basis"] == ["1"]


def test_spec_commands():
    assert call_json("prime-contains", "--ring", "QQ[x,y]", "x*y", "x")[1]["status"] == "holds"
    code, obj = call_json("lattice", "3", "--ring", "QQ[x,y,z]", "--jobs", "2")
    assert code == EXIT_OK and obj["anti_isomorphic"]
    code, dot = call("lattice", "2", "--dot")
    assert dot.startswith("digraph")
    assert call_json("pseudoradical", "--ring", "QQ[x,y]", "x*y")[1]["status"] == "yes"
    code, obj = call_json("linalg2", "--ring", "QQ[x,y]", "y+x^2", "y+x")
    assert code == EXIT_OK and obj["h"] == "x^2 - x" and obj["replayed"]
    code, obj = call_json("l-of-pf", "--ring", "QQ[x;gens=x^2,x^3]", "x^2", "--caps", "cap=6,e_max=3")
    assert "x^3" in obj["basis"]
    assert call_json("p-of-w", "--ring", "QQ[x,y]", "y", "x")[1]["status"] == "in_p_at_bound"
    code, obj = call_json("irred-report", "--ring", "QQ[x,y]", "x*y+x+y")
    assert obj["4"]["status"] == "fails" and obj["chain_consistent"]


def test_oracle_command():
    code, obj = call_json("oracle", "--ring", "GF(2)[x;gens=x^2,x^3]", "x^3", "x^6")
    assert code == EXIT_OK and obj["verdict"] == "in"


def test_text_format():
    code, text = call("member", "--ring", "QQ[x,y]", "x", "y", "--format", "text")
    assert code == EXIT_OK and "verdict: out" in text


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "recipcomp", "greedy", "2/3"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["denominators"] == [2, 6]
