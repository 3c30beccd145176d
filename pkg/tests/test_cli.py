import json
import subprocess
import sys
from importlib import resources

import jsonschema
import pytest

from modlg.cli import main, parse_generator_file
from modlg.errors import ParseError

SCHEMA = json.loads(resources.files("modlg").joinpath("schemas/report.schema.json").read_text())


def run(argv, capsys, stdin=None, monkeypatch=None):
    if stdin is not None:
        import io

        monkeypatch.setattr(sys, "stdin", io.StringIO(stdin))
    code = main(argv)
    out, err = capsys.readouterr()
    report = json.loads(out)
    jsonschema.validate(report, SCHEMA)
    _assert_integers_only(report)
    return code, report, err


def _assert_integers_only(value):
    assert not isinstance(value, float)
    if isinstance(value, dict):
        for v in value.values():
            _assert_integers_only(v)
    elif isinstance(value, list):
        for v in value:
            _assert_integers_only(v)


def write(tmp_path, name, obj):
    path = tmp_path / name
    path.write_text(json.dumps(obj))
    return str(path)


def test_counterexample_output(capsys):
    code, report, _ = run(["counterexample", "--ell", "7"], capsys)
    assert code == 0
    payload = report["payload"]
    assert payload["modulus"] == 49 and payload["degree"] == 2 and len(payload["generators"]) == 3
    assert report["seed"] is None and report["command"]["name"] == "counterexample"


def test_counterexample_round_trip(capsys, tmp_path):
    _, report, _ = run(["counterexample", "--ell", "7"], capsys)
    path = write(tmp_path, "g.json", report["payload"])
    code, verdict, _ = run(["check-surj", "--modulus", "49", "--generators", path], capsys)
    assert code == 0
    assert verdict["payload"]["status"] == "NotSurjective"
    assert all(p["sl_part_ok"] for p in verdict["payload"]["per_prime"].values())


def test_round_trip_through_stdin(capsys, monkeypatch):
    _, report, _ = run(["counterexample", "--ell", "11"], capsys)
    code, verdict, _ = run(
        ["check-surj", "--modulus", "121", "--generators", "-"], capsys, json.dumps(report), monkeypatch
    )
    assert code == 0 and verdict["payload"]["status"] == "NotSurjective"


def test_check_surj_precondition_exit(capsys, tmp_path):
    path = write(tmp_path, "g.json", {"modulus": 12, "degree": 2, "generators": [[[1, 1], [0, 1]]]})
    code, report, err = run(["check-surj", "--modulus", "12", "--generators", path], capsys)
    assert code == 2
    assert report["payload"]["status"] == "PreconditionViolated"
    assert err.count("\n") == 1 and "coprime" in err


def test_check_surj_det_power(capsys, tmp_path):
    gens = [[[1, 1], [0, 1]], [[1, 0], [1, 1]], [[9, 0], [0, 1]]]
    path = write(tmp_path, "g.json", {"modulus": 49, "degree": 2, "generators": gens})
    code, report, _ = run(["check-surj", "--modulus", "49", "--generators", path, "--det", "power:3"], capsys)
    assert code == 0 and report["payload"]["status"] == "Surjective"
    code, report, _ = run(["check-surj", "--modulus", "49", "--generators", path], capsys)
    assert report["payload"]["det_image_index"] == 2


@pytest.mark.parametrize(
    "generators,index",
    [
        ([[[1, 1], [0, 1]], [[7, 0], [0, 1]]], 1),
        ([[[1, 1], [0, 1]], [[1, 1, 1], [0, 1, 0], [0, 0, 1]]], 1),
        ([[[1, 1], [0, 1]], [[1, 0.5], [0, 1]]], 1),
        ([[[0, 0], [0, 0]]], 0),
    ],
)
def test_parse_error_names_generator(capsys, tmp_path, generators, index):
    path = write(tmp_path, "g.json", {"modulus": 49, "degree": 2, "generators": generators})
    code, report, err = run(["check-surj", "--modulus", "49", "--generators", path], capsys)
    assert code == 4
    assert report["payload"]["error"]["generator_index"] == index
    assert f"generator {index}" in err


def test_parse_errors_without_index(capsys, tmp_path):
    bad_json = tmp_path / "bad.json"
    bad_json.write_text("{not json")
    for argv in (
        ["check-surj", "--modulus", "49", "--generators", str(bad_json)],
        ["check-surj", "--modulus", "49", "--generators", str(tmp_path / "missing.json")],
        ["check-surj", "--modulus", "49"],
        ["no-such-command"],
        ["galrep", "--curve", "1,2,3", "--modulus", "7"],
        ["check-surj", "--modulus", "49", "--generators", str(bad_json), "--det", "cube"],
    ):
        code, report, _ = run(argv, capsys)
        assert code == 4, argv
        assert report["payload"]["error"]["kind"] == "parse error"


def test_modulus_mismatch_is_parse_error(capsys, tmp_path):
    path = write(tmp_path, "g.json", {"modulus": 49, "degree": 2, "generators": [[[1, 1], [0, 1]]]})
    code, _, _ = run(["check-surj", "--modulus", "77", "--generators", path], capsys)
    assert code == 4


def test_parse_generator_file_direct():
    G = parse_generator_file('{"modulus": 7, "degree": 2, "generators": [[[1, -1], [0, 1]]]}')
    assert G.generators[0].rows() == [[1, 6], [0, 1]]
    with pytest.raises(ParseError) as info:
        parse_generator_file('{"modulus": 7, "degree": 2, "generators": [[[1, 0], [0, 1]], [[true, 0], [0, 1]]]}')
    assert info.value.index == 1


def test_check_delta_and_gsp(capsys, tmp_path, delta_full):
    from modlg.cli import generator_file
    from modlg.families import GroupFamily
    from modlg.groups import GeneratedGroup

    path = write(tmp_path, "d.json", generator_file(delta_full))
    code, report, _ = run(["check-delta", "--modulus", "49", "--generators", path], capsys)
    assert code == 0 and report["payload"]["status"] == "Surjective"
    path = write(tmp_path, "s.json", generator_file(GeneratedGroup.from_family(GroupFamily.Sp(4), 49)))
    code, report, _ = run(["check-gsp", "--modulus", "49", "--genus", "2", "--generators", path], capsys)
    assert code == 0 and report["payload"]["det_image_index"] == 42
    code, report, _ = run(["check-gsp", "--modulus", "49", "--genus", "1", "--generators", path], capsys)
    assert code == 2


def test_occ_and_cap(capsys, tmp_path):
    _, report, _ = run(["counterexample", "--ell", "7"], capsys)
    path = write(tmp_path, "g.json", report["payload"])
    code, report, _ = run(["occ", "--modulus", "49", "--generators", path, "--cap", "100000"], capsys)
    assert code == 0
    assert report["payload"]["occ"] == ["PSL2(7)"] and report["payload"]["order"] == 691488
    assert report["caps"]["occ"] == 100000
    code, report, err = run(["occ", "--modulus", "49", "--generators", path, "--cap", "10"], capsys)
    assert code == 3 and "cap" in err


def test_closure_cap_env(capsys, monkeypatch):
    monkeypatch.setenv("MODLG_CAP", "12345")
    _, report, _ = run(["counterexample", "--ell", "7"], capsys)
    assert report["caps"]["closure"] == 12345


def test_verify_lemma_lift(capsys):
    code, report, _ = run(["verify-lemma", "lift-sl2", "--ell", "7", "--r", "2", "--trials", "30", "--seed", "3"], capsys)
    payload = report["payload"]
    assert code == 0 and payload["passed"] and payload["violations"] == 0 and payload["trials"] == 30
    assert report["seed"] == 3
    code, report, _ = run(["verify-lemma", "lift-sl2", "--ell", "7", "--r", "2", "--trials", "2"], capsys)
    assert report["seed"] == 0
    code, _, _ = run(["verify-lemma", "lift-sl2", "--ell", "3", "--r", "2"], capsys)
    assert code == 2


def test_verify_lemma_square_zero(capsys):
    code, report, _ = run(["verify-lemma", "square-zero", "--ell", "7"], capsys)
    assert code == 0
    assert report["payload"] == {"ell": 7, "matrices": 343, "passed": 343, "failed": 0, "max_parts": 4}


def test_galrep_command(capsys):
    code, report, _ = run(["galrep", "--curve", "0,0,1,-1,0", "--modulus", "77", "--bound", "10000"], capsys)
    assert code == 0 and report["payload"]["status"] == "Surjective"
    code, report, _ = run(["galrep", "--curve", "0,0,0,0,1", "--modulus", "49", "--bound", "3000"], capsys)
    assert code == 0 and report["payload"]["status"] == "Undetermined"
    code, _, _ = run(["galrep", "--curve", "0,0,1,-1,0", "--modulus", "10"], capsys)
    assert code == 2
    code, _, _ = run(["galrep", "--curve", "0,0,0,0,0", "--modulus", "7"], capsys)
    assert code == 2


@pytest.mark.parametrize(
    "argv",
    [
        ["verify-lemma", "lift-sl2", "--ell", "7", "--r", "2", "--trials", "20", "--seed", "9"],
        ["galrep", "--curve", "0,0,1,-1,0", "--modulus", "77", "--bound", "2000"],
        ["counterexample", "--ell", "13"],
    ],
)
def test_payload_reproducible(capsys, argv):
    _, first, _ = run(argv, capsys)
    _, second, _ = run(argv, capsys)
    dump = lambda r: json.dumps(r["payload"], sort_keys=True, separators=(",", ":"))
    assert dump(first) == dump(second)


def test_threads_do_not_change_payload(capsys):
    base = ["galrep", "--curve", "0,0,1,-1,0", "--modulus", "77", "--bound", "3000"]
    _, one, _ = run(base, capsys)
    _, many, _ = run(["--threads", "4"] + base, capsys)
    _, after, _ = run(base + ["--threads", "3"], capsys)
    assert one["payload"] == many["payload"] == after["payload"]


def test_console_script_exit_codes(tmp_path):
    gfile = write(tmp_path, "g.json", {"modulus": 12, "degree": 2, "generators": [[[1, 1], [0, 1]]]})
    proc = subprocess.run(
        [sys.executable, "-m", "modlg.cli", "check-surj", "--modulus", "12", "--generators", gfile],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 2
    jsonschema.validate(json.loads(proc.stdout), SCHEMA)
    proc = subprocess.run([sys.executable, "-m", "modlg.cli", "counterexample", "--ell", "7"], capture_output=True, text=True)
    assert proc.returncode == 0 and json.loads(proc.stdout)["payload"]["modulus"] == 49
