import json
import subprocess
import sys

import pytest

from incdec.cli import execute
from incdec.errors import InputError
from incdec.instances import build_named_instance
from incdec.io import instance_from_json, instance_to_json, parse_instance


def run(argv, capsys):
    code = execute(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.mark.parametrize(
    "id_, params",
    [
        ("gamma_lb", {"gamma": "1/2"}),
        ("curvature_lb", {"n": 4, "c": "1/3"}),
        ("coverage_tight", {"k": 3}),
        ("gross_substitute_lb", {}),
        ("modular_remark", {}),
        ("incremental_unbounded", {"n": 5, "eps": "1/4"}),
    ],
)
def test_round_trip_preserves_tables(id_, params):
    inst = build_named_instance(id_, params)
    back = instance_from_json(json.loads(json.dumps(instance_to_json(inst))))
    assert back.ground == inst.ground
    assert back.objective().table() == inst.objective().table()


def test_named_references():
    inst = instance_from_json({"type": "named", "id": "gamma_lb", "params": {"gamma": "1/2"}})
    assert inst.ground.labels == ("a", "b", "c")
    mixed = instance_from_json(
        {
            "n": 2,
            "g": {"type": "named", "id": "modular_remark", "part": "h"},
            "h": {"type": "table", "values": [0, 1, 1, 1]},
        }
    )
    assert mixed.oracles()[0].table() == [0, 1, 1, 2]


@pytest.mark.parametrize(
    "obj, needle",
    [
        ({"n": 3, "g": {"type": "table", "values": [0] * 7}, "h": {"type": "modular", "weights": [1, 1, 1]}}, "2^3"),
        ({"n": 2, "g": {"type": "modular", "weights": [1, 1]}}, "'g' and 'h'"),
        ({"n": 2, "f": {"type": "modular", "weights": [1, 0.5]}}, "f.weights[1]"),
        ({"n": 2, "f": {"type": "blob"}}, "unknown spec type"),
        ({"n": 2, "f": {"type": "coverage", "sets": [[0], [1]]}}, "universe"),
        ({"f": {"type": "modular", "weights": [1]}}, "'n'"),
    ],
)
def test_schema_errors(obj, needle):
    with pytest.raises(InputError, match=None) as exc:
        instance_from_json(obj)
    assert needle in str(exc.value)


def test_unreadable_file(tmp_path):
    with pytest.raises(InputError):
        parse_instance(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(InputError):
        parse_instance(bad)


def test_gen_then_run(tmp_path, capsys):
    path = tmp_path / "gs.json"
    assert run(["gen", "--id", "gross_substitute_lb", "-o", str(path)], capsys)[0] == 0
    code, out, _ = run(["ratio", "-i", str(path), "--order", "c,a,b", "--format", "csv"], capsys)
    assert code == 0
    assert out.splitlines()[1:3] == ["1,5,5,{c},1", "2,4,5,{a;b},5/4"]
    code, out, _ = run(["best-order", "-i", str(path)], capsys)
    assert code == 0 and json.loads(out)["rho"] == "5/4"


def test_run_outputs_trace(tmp_path, capsys):
    path = tmp_path / "ct.json"
    run(["gen", "--id", "coverage_tight", "--k", "3", "-o", str(path)], capsys)
    code, out, _ = run(["run", "-i", str(path), "--tie", "priority:B1,B2,B3"], capsys)
    body = json.loads(out)
    assert code == 0
    assert body["ordering"] == ["B1", "B2", "B3", "A1", "A2", "A3"]
    assert body["trace"][2]["H"] == ["B1", "B2", "B3"]
    assert body["report"]["rho"] == "46/19"
    code, out, _ = run(["run", "-i", str(path), "--algo", "randomized"], capsys)
    assert code == 0 and len(json.loads(out)["orderings"]) == 2


def test_run_incremental_mode(tmp_path, capsys):
    path = tmp_path / "iu.json"
    run(["gen", "--id", "incremental_unbounded", "--n", "5", "--eps", "1/2", "-o", str(path)], capsys)
    code, out, _ = run(["run", "-i", str(path)], capsys)
    assert code == 0 and json.loads(out)["algorithm"] == "greedy"
    code, out, _ = run(["analyze", "-i", str(path)], capsys)
    assert code == 0 and json.loads(out)["f"]["monotone"]["value"] is False


def test_output_is_byte_identical(tmp_path, capsys):
    path = tmp_path / "r.json"
    run(["gen", "--id", "random_coverage", "--n", "6", "--seed", "4", "-o", str(path)], capsys)
    outs = []
    for i in range(2):
        target = tmp_path / f"out{i}.json"
        assert run(["analyze", "-i", str(path), "-o", str(target)], capsys)[0] == 0
        outs.append(target.read_bytes())
    assert outs[0] == outs[1]
    again = tmp_path / "r2.json"
    run(["gen", "--id", "random_coverage", "--n", "6", "--seed", "4", "-o", str(again)], capsys)
    assert again.read_bytes() == path.read_bytes()


def test_exit_codes(tmp_path, capsys):
    path = tmp_path / "g.json"
    run(["gen", "--id", "gamma_lb", "--gamma", "1/2", "-o", str(path)], capsys)
    code, _, err = run(["ratio", "-i", str(path), "--order", "a,b,zz"], capsys)
    assert code == 2 and "zz" in err
    code, _, err = run(["gen", "--id", "gamma_lb"], capsys)
    assert code == 2 and "--gamma" in err
    with pytest.raises(SystemExit) as exc:
        execute(["frobnicate"])
    assert exc.value.code == 2
    big = tmp_path / "big.json"
    run(["gen", "--id", "random_table", "--n", "13", "-o", str(big)], capsys)
    code, _, err = run(["analyze", "-i", str(big)], capsys)
    assert code == 2 and "cap 12" in err and "--cap" in err


def test_verify_paper_subset(capsys):
    code, out, _ = run(["verify-paper", "--only", "gamma_lb", "--only", "modular_remark"], capsys)
    assert code == 0
    assert "2/2 criteria passed" in out


def test_module_entry_point(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "incdec", "gen", "--id", "modular_remark"], capture_output=True, text=True
    )
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["labels"] == ["a", "b"]


def test_verify_paper_failure_exit_code(monkeypatch, capsys):
    from incdec import reproduce

    def fake(only):
        crit = reproduce.Criterion("broken", "always fails")
        crit.expect(False, "nope")
        return [crit]

    monkeypatch.setattr(reproduce, "run_all", fake)
    code, out, _ = run(["verify-paper"], capsys)
    assert code == 1 and "FAIL" in out and "0/1" in out
