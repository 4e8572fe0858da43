from __future__ import annotations

import io
import json
from pathlib import Path

import pytest

from digerm.cli import main

DATA = Path(__file__).resolve().parent.parent / "scripts" / "data"


def run(*argv) -> tuple[int, str]:
    out = io.StringIO()
    code = main(list(argv), out=out)
    return code, out.getvalue()


def test_homology_on_globe2():
    code, text = run("homology", "builtin:globe:2")
    assert code == 0
    lines = text.splitlines()
    assert lines[0].split() == ["degree", "branching", "merging"]
    assert lines[1].split() == ["0", "Z", "Z"]
    assert all(line.split()[1:] == ["0", "0"] for line in lines[2:])


def test_homology_json_and_side_selection():
    code, text = run("homology", "builtin:hollow_square", "--json", "--merging")
    assert code == 0
    data = json.loads(text)
    assert list(data) == ["merging"]
    assert data["merging"]["1"] == {"rank": 1, "torsion": []}


def test_validate_miswired_square():
    code, text = run("validate", str(DATA / "miswired_square.json"))
    assert code == 1
    assert "**" in text and text.strip()
    code, text = run("validate", str(DATA / "miswired_square.json"), "--json")
    assert ["**", 0, 1, 0, 2] in json.loads(text)["violations"]


def test_validate_builtin_ok():
    assert run("validate", "builtin:cube:3") == (0, "valid\n")
    assert run("validate", "builtin:globe:4") == (0, "valid\n")


def test_check_invariance_hollow_square_edges():
    code, text = run("check-invariance", "builtin:hollow_square",
                     "--ops", str(DATA / "hollow_square_edges.json"))
    assert code == 0 and text.rstrip().endswith("PASS")


def test_check_invariance_inline_ops_json():
    code, text = run("check-invariance", "builtin:globe:1", "--ops", '[{"kind":"lens","cell":"t"}]',
                     "--json")
    assert code == 0 and json.loads(text)["result"] == "PASS"


def test_inapplicable_op_is_domain_error(capsys):
    code, _ = run("check-invariance", "builtin:globe:1", "--ops", '[{"kind":"lens","cell":"e1+"}]')
    assert code == 1
    assert "step 0" in capsys.readouterr().err


def test_realize_and_subdivide_round_trip(tmp_path):
    code, text = run("realize", "builtin:filled_square")
    assert code == 0
    data = json.loads(text)
    assert data["format"] == "globular" and len(data["cells"]) == 5
    path = tmp_path / "square.json"
    path.write_text(text)
    code, text = run("subdivide", str(path), "--ops", '[{"kind":"lens","cell":"**"}]')
    assert code == 0 and len(json.loads(text)["states"]) == 5
    code, text = run("subdivide", "builtin:filled_square", "--ops", str(DATA / "grid_2x2.json"))
    assert code == 0 and json.loads(text)["format"] == "precubical"


def test_oracle_pass_and_fail(tmp_path):
    assert run("oracle", "builtin:cube:3")[0] == 0
    data = json.loads(run("realize", "builtin:filled_square")[1])
    data["cells"][-1]["branch"] = [[1, "0*"], [1, "*0"]]
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    code, text = run("oracle", str(path))
    assert code == 1 and "'*0'" in text and "FAIL" in text


def test_export_dot(tmp_path):
    code, text = run("export-dot", "builtin:filled_square", "--state", "00")
    assert code == 0 and text.startswith('graph "branching_00"')
    target = tmp_path / "m.dot"
    code, _ = run("export-dot", "builtin:hollow_square", "--state", "11", "--merging",
                  "--dot", str(target))
    assert code == 0 and target.read_text().startswith('graph "merging_11"')
    code, text = run("export-dot", "builtin:globe:2", "--state", "0", "--json")
    data = json.loads(text)
    assert [len(data["cells"][k]) for k in ("0", "1", "2")] == [2, 2, 1]
    assert data["components"] == 1
    code, text = run("export-dot", "builtin:two_step_path")
    assert code == 0 and '"v0" -> "v1"' in text


def test_unknown_state_is_domain_error(capsys):
    assert run("export-dot", "builtin:globe:1", "--state", "zz")[0] == 1
    assert "'zz'" in capsys.readouterr().err


def test_fuzz_is_deterministic():
    a = run("fuzz", "--seed", "7", "--count", "12", "--json")
    b = run("fuzz", "--seed", "7", "--count", "12", "--json")
    assert a == b and a[0] == 0
    assert json.loads(a[1])["failed"] == 0


@pytest.mark.parametrize("argv", [
    [],
    ["bogus"],
    ["homology"],
    ["homology", "/nonexistent/file.json"],
    ["homology", "builtin:nope"],
    ["homology", "builtin:globe:x"],
    ["subdivide", "builtin:globe:1"],
    ["fuzz", "--count", "-1"],
])
def test_usage_errors_exit_2(argv, capsys):
    assert run(*argv)[0] == 2


@pytest.mark.parametrize("payload", ["{not json", '{"format": "simplicial"}', '{"format": "globular"}'])
def test_bad_input_exit_1(tmp_path, payload):
    path = tmp_path / "x.json"
    path.write_text(payload)
    assert run("homology", str(path))[0] == 1


def test_output_is_byte_identical():
    for argv in (["homology", "builtin:torus", "--json"], ["realize", "builtin:cube:2"],
                 ["check-invariance", "builtin:filled_square", "--ops", str(DATA / "square_mixed.json")]):
        assert run(*argv) == run(*argv)
