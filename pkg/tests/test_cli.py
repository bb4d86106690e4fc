import json

import pytest

from boalch import quiver as qv
from boalch.cli import builtin_table, main
from boalch.dbracket import table_from_json
from boalch.families import table1


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def files(tmp_path):
    paths = {}
    for name, q in (("triangle", qv.triangle_quiver()), ("interval", qv.interval_quiver())):
        paths[name] = tmp_path / f"{name}.json"
        paths[name].write_text(qv.dumps(q))
    paths["table1"] = tmp_path / "table1.json"
    paths["table1"].write_text(table1().dumps())
    return {k: str(v) for k, v in paths.items()}


# -- examples --------------------------------------------------------------------


def test_bracket_example(capsys, files):
    code, out, _ = run(capsys, "bracket", "--quiver", files["triangle"], "--table", "builtin:triangle", "w13", "v21")
    assert code == 0
    assert out == "1/2 v21*w13 (x) e1 - w23 (x) e1\n"


def test_check_conditions_example(capsys, files):
    code, out, _ = run(capsys, "check-conditions", "--family", files["table1"])
    assert code == 0
    assert out.strip().endswith("0 violations")


def test_check_qp_triangle(capsys, files):
    code, out, _ = run(capsys, "check-qp", "--quiver", files["triangle"], "--table", "builtin:triangle")
    assert code == 0
    assert out.splitlines()[-1] == "check-qp: 216/216 EQUAL, 0 NOT_EQUAL, 0 UNDECIDED"


def test_check_qp_json(capsys):
    code, out, _ = run(capsys, "check-qp", "--table", "builtin:interval", "--format", "json", "--timing")
    data = json.loads(out)
    assert code == 0 and data["total"] == 8 and data["verdict"] == "EQUAL" and "seconds" in data
    assert {"lhs", "rhs", "verdict", "strategy_used"} <= set(data["entries"][0])


def test_triple_with_target(capsys):
    code, out, _ = run(capsys, "triple", "--table", "builtin:triangle", "v12", "v21", "v13", "--qp")
    assert code == 0 and out.splitlines()[-1].startswith("EQUAL")


def test_check_moment_interval(capsys):
    code, out, _ = run(capsys, "check-moment", "--table", "builtin:interval")
    assert code == 0 and "8/8 EQUAL" in out


def test_verify_fixtures_interval(capsys):
    code, out, _ = run(capsys, "verify-fixtures", "--table", "builtin:interval", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["total"] == 10
    assert data["corrections"][0]["a"] == "v12"


def test_search_n2(capsys):
    code, out, _ = run(capsys, "search", "--n", "2", "--nu", "0", "--kappa", "0")
    assert code == 0 and out.splitlines() == ["#1: all zero", "search: 1 admissible families"]


def test_rep_verify(capsys):
    code, out, _ = run(capsys, "rep-verify", "--quiver", "builtin:triangle", "--table", "builtin:triangle", "--dims", "2,2,2")
    assert code == 0
    assert "relations: 15/15 exact zero" in out
    assert "free parameters: sampled 24, dimension count 24" in out
    assert "trace bracket identity: 36/36 exact" in out


def test_build_boalch_listing(capsys):
    code, out, _ = run(capsys, "build-boalch", "--quiver", "builtin:interval")
    assert code == 0 and out.startswith("generators: ")
    assert "g2 = v21*v12 + e2" in out


# -- exit codes ------------------------------------------------------------------


def test_validate_quiver_codes(capsys, tmp_path, files):
    assert run(capsys, "validate-quiver", "--quiver", files["triangle"])[0] == 0
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"n": 3, "colors": [{"id": "a", "vertices": [1, 2, 3], "partition": [[1, 2], [2, 3]], "part_order": [0, 1]}]}))
    code, out, _ = run(capsys, "validate-quiver", "--quiver", str(bad))
    assert code == 1 and out.startswith("invalid:")


def test_not_equal_exit_code(capsys, tmp_path):
    code, out, _ = run(capsys, "build-boalch", "--table", "builtin:triangle", "--dump")
    data = json.loads(out)
    for e in data["table"]["entries"]:
        if (e["a"], e["b"]) == ("v12", "v13"):
            e["value"] = "-1/2 v12 (x) v13"
    path = tmp_path / "flipped.json"
    path.write_text(json.dumps(data))
    code, out, _ = run(capsys, "check-qp", "--table", str(path))
    assert code == 1
    assert "witness:" in out and "NOT_EQUAL" in out.splitlines()[-1]


def test_undecided_exit_code(capsys):
    code, out, _ = run(capsys, "check-moment", "--table", "builtin:triangle", "--strategy", "STRUCTURAL")
    assert code == 2 and "UNDECIDED" in out


def test_violation_exit_code(capsys, tmp_path):
    path = tmp_path / "zero.json"
    path.write_text(json.dumps({"n": 3}))
    code, out, _ = run(capsys, "check-conditions", "--family", str(path))
    assert code == 1 and "VIOLATED" in out


@pytest.mark.parametrize(
    "argv, message",
    [
        (["bracket", "--table", "builtin:triangle", "v12 + * v21", "v13"], "column 7"),
        (["bracket", "--table", "builtin:interval", "v13", "v12"], "not in the extended double"),
        (["bracket", "--table", "builtin:triangle", "e4", "v12"], "e4"),
        (["bracket", "--table", "builtin:nope", "v12", "v13"], "unknown builtin"),
        (["check-conditions", "--family", "/nonexistent.json"], "cannot read"),
        (["rep-verify", "--quiver", "builtin:triangle", "--dims", "1,x"], "--dims"),
        (["rep-verify", "--quiver", "builtin:triangle", "--dims", "0,0,0"], "zero dimension"),
        (["check-qp", "--table", "builtin:triangle", "--strategy", "FAST"], ""),
    ],
)
def test_input_errors(capsys, argv, message):
    code, _, err = run(capsys, *argv)
    assert code == 3
    assert message in err


def test_malformed_json_location(capsys, tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{"n": 3,,}')
    code, _, err = run(capsys, "validate-quiver", "--quiver", str(path))
    assert code == 3 and "line 1 column" in err


def test_usage_errors(capsys):
    assert run(capsys, "frobnicate")[0] == 3
    assert run(capsys)[0] == 3


# -- determinism and round trips -------------------------------------------------


@pytest.mark.parametrize(
    "argv",
    [
        ["check-qp", "--table", "builtin:interval", "--format", "json"],
        ["rep-verify", "--quiver", "builtin:triangle", "--dims", "1,2,3", "--seed", "7", "--format", "json"],
        ["verify-fixtures", "--table", "builtin:interval"],
    ],
)
def test_output_is_byte_stable(capsys, argv):
    assert run(capsys, *argv)[1] == run(capsys, *argv)[1]


@pytest.mark.parametrize("name", ["interval", "triangle", "table1"])
def test_dump_roundtrip(capsys, tmp_path, name):
    code, out, _ = run(capsys, "build-boalch", "--table", f"builtin:{name}", "--dump")
    assert code == 0
    data = json.loads(out)
    assert qv.from_json(data["quiver"]) == (qv.interval_quiver() if name == "interval" else qv.triangle_quiver())
    table = table_from_json(data["table"])
    ref = builtin_table(name)
    assert table.entries == ref.entries and table.definitions == ref.definitions
    path = tmp_path / "dump.json"
    path.write_text(out)
    assert run(capsys, "build-boalch", "--table", str(path), "--dump")[1] == out
