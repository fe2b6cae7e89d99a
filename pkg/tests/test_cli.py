import json

import pytest

from sheafrep import serialize
from sheafrep.cli import main
from sheafrep.combinat import Partition
from sheafrep.modcore import free_module, simple_at
from sheafrep.skelcat import CatKind


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


@pytest.fixture
def module_file(tmp_path):
    path = tmp_path / "p1.json"
    serialize.save(free_module(CatKind.FI, 1, 5), str(path))
    return str(path)


def test_check_valid(capsys, module_file):
    code, out, _ = run(capsys, "check", module_file)
    assert code == 0
    assert json.loads(out)["ok"] is True


def test_check_corrupted_exits_1(capsys, tmp_path, module_file):
    data = json.loads(open(module_file).read())
    data["maps"]["2"][0][0] = "5/1"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    code, _, err = run(capsys, "check", str(bad))
    assert code == 1
    assert "degree" in err


def test_check_missing_file_exits_2(capsys, tmp_path):
    code, _, err = run(capsys, "check", str(tmp_path / "nope.json"))
    assert code == 2
    assert "cannot read" in err


def test_check_malformed_json_exits_2(capsys, tmp_path):
    path = tmp_path / "junk.json"
    path.write_text("{ not json")
    code, _, err = run(capsys, "check", str(path))
    assert code == 2
    assert "malformed JSON" in err


def test_decompose(capsys, module_file):
    code, out, _ = run(capsys, "decompose", module_file, "--degree", "3")
    assert code == 0
    assert json.loads(out) == {"(3)": 1, "(2,1)": 1}


def test_decompose_degree_out_of_range(capsys, module_file):
    code, _, err = run(capsys, "decompose", module_file, "--degree", "9")
    assert code == 2


def test_simple_fi_dims(capsys):
    code, out, _ = run(capsys, "simple", "--cat", "fi", "--lambda", "1", "--window", "6")
    assert code == 0
    assert json.loads(out)["dims"] == [0, 0, 1, 2, 3, 4, 5]


def test_simple_window_cap(capsys):
    code, _, err = run(capsys, "simple", "--cat", "fi", "--lambda", "1", "--window", "11")
    assert code == 2
    assert "window" in err


def test_kn(capsys, tmp_path):
    out_path = tmp_path / "k1.json"
    code, out, _ = run(capsys, "kn", "--n", "1", "--window", "6", "-o", str(out_path))
    assert code == 0
    assert json.loads(out)["dims"] == [0, 0, 1, 2, 3, 4, 5]
    assert serialize.load(str(out_path)).validate().ok


def test_ore_pass_and_fail(capsys):
    code, out, _ = run(capsys, "ore", "--cat", "oi", "--bound", "3")
    assert code == 0
    assert json.loads(out)["ok"] is True
    code, out, _ = run(capsys, "ore", "--cat", "kronecker", "--bound", "4")
    assert code == 1
    payload = json.loads(out)
    assert payload["ok"] is False
    assert {payload["failure"]["f"], payload["failure"]["f_prime"]} == {"alpha", "beta"}


def test_artin_invariants(capsys):
    code, out, _ = run(capsys, "artin", "invariants", "--n", "1", "--i", "2", "--horizon", "6")
    assert code == 0
    payload = json.loads(out)
    assert payload["dimension"] == 2 and payload["stable"] is True


def test_artin_horizon_too_small(capsys):
    code, _, err = run(capsys, "artin", "invariants", "--n", "1", "--i", "4", "--horizon", "3")
    assert code == 2
    assert "horizon" in err


def test_stable_range(capsys, module_file):
    code, out, _ = run(capsys, "stable-range", module_file)
    assert code == 0
    payload = json.loads(out)
    assert payload["generation_degree"] == 1
    assert payload["presentation_degree"] == 1


def test_sheafify_roundtrip(capsys, tmp_path):
    src = tmp_path / "tail.json"
    import sys

    sys.path.insert(0, "tests")
    from corpus import tail_submodule_of_p0

    serialize.save(tail_submodule_of_p0(5), str(src))
    out_path = tmp_path / "sheaf.json"
    code, out, _ = run(capsys, "sheafify", str(src), "-o", str(out_path))
    assert code == 0
    payload = json.loads(out)
    assert payload["unit_iso"] is False
    assert payload["defect_dims"] == [1, 0, 0, 0, 0, 0]
    assert serialize.load(str(out_path)).dims == (1, 1, 1, 1, 1, 1)


def test_report_empty_dir(capsys, tmp_path):
    code, out, _ = run(capsys, "report", str(tmp_path))
    assert code == 0
    assert json.loads(out) == {"modules": [], "unreadable": []}


def test_report_mixed_dir(capsys, tmp_path):
    serialize.save(free_module(CatKind.FI, 0, 4), str(tmp_path / "a_p0.json"))
    serialize.save(simple_at(Partition(()), 4), str(tmp_path / "b_t.json"))
    serialize.save(free_module(CatKind.OI, 1, 4), str(tmp_path / "c_oi.json"))
    (tmp_path / "d_junk.json").write_text("horrible")
    code, out, _ = run(capsys, "report", str(tmp_path))
    assert code == 0
    payload = json.loads(out)
    assert [r["name"] for r in payload["modules"]] == ["a_p0.json", "b_t.json", "c_oi.json"]
    assert [r["saturated"] for r in payload["modules"]] == [True, False, True]
    assert [r["kind"] for r in payload["modules"]] == ["FI", "FI", "OI"]
    assert [e["name"] for e in payload["unreadable"]] == ["d_junk.json"]


def test_report_markdown(capsys, tmp_path):
    serialize.save(free_module(CatKind.FI, 0, 4), str(tmp_path / "p0.json"))
    code, out, _ = run(capsys, "report", str(tmp_path), "--format", "markdown")
    assert code == 0
    assert out.splitlines()[0].startswith("| name |")


def test_determinism(capsys, module_file, tmp_path):
    outputs = []
    for k in range(2):
        out_path = tmp_path / f"s{k}.json"
        code, out, _ = run(capsys, "sheafify", module_file, "-o", str(out_path))
        assert code == 0
        outputs.append((out, open(out_path).read()))
    assert outputs[0] == outputs[1]


def test_usage_error_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["simple", "--cat", "nope", "--window", "4"])
    assert exc.value.code == 2
    capsys.readouterr()
