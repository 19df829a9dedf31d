import json
from pathlib import Path

import pytest

from hff.cli import main
from hff.claims import REGISTRY

MODELS = Path(__file__).resolve().parent.parent / "models"


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def write_model(tmp_path, data, name="m.json"):
    path = tmp_path / name
    path.write_text(data if isinstance(data, str) else json.dumps(data))
    return str(path)


def test_eval_true_with_witness(capsys):
    code, out, _ = run(capsys, "eval", "--model", str(MODELS / "v2.json"),
                       "--formula", "E z . z in y", "--assign", "y={{}}", "--trace")
    assert code == 0
    assert out.splitlines() == ["true", "witness: z = {}"]


def test_eval_json_and_counterexample(capsys):
    code, out, _ = run(capsys, "--json", "eval", "--model", str(MODELS / "v2.json"),
                       "--formula", "A z . z in y", "--assign", "y={{}}", "--trace")
    assert code == 0
    assert json.loads(out) == {"formula": "A z . z in y", "value": False, "witness": "{{}}"}


def test_eval_parse_error(capsys):
    code, _, err = run(capsys, "eval", "--model", str(MODELS / "v2.json"), "--formula", "x in")
    assert code == 2
    assert "offset 4" in err


def test_eval_unassigned(capsys):
    code, _, err = run(capsys, "eval", "--model", str(MODELS / "v2.json"), "--formula", "x in y",
                       "--assign", "y={}")
    assert code == 3
    assert "x" in err


def test_eval_bad_inputs(capsys, tmp_path):
    args = ["--formula", "y = y", "--assign", "y={}"]
    assert run(capsys, "eval", "--model", write_model(tmp_path, "{nope"), *args)[0] == 2
    assert run(capsys, "eval", "--model", write_model(tmp_path, {"domain": 3}), *args)[0] == 2
    assert run(capsys, "eval", "--model", str(tmp_path / "missing.json"), *args)[0] == 3
    assert run(capsys, "eval", "--model", str(MODELS / "v2.json"), "--formula", "y = y",
               "--assign", "y")[0] == 2
    assert run(capsys, "eval", "--model", str(MODELS / "transitive_v3.json"), "--max-rank", "1",
               "--formula", "y = y", "--assign", "y={}")[0] == 4


def test_lhier(capsys):
    code, out, _ = run(capsys, "lhier", "--levels", "3")
    data = json.loads(out)
    assert code == 0 and data["collapse"] is True
    assert [lv["size"] for lv in data["levels"]] == [0, 1, 2, 4]
    assert all(lv["equals_v"] for lv in data["levels"])


def test_lhier_bounds(capsys):
    assert run(capsys, "lhier", "--levels", "99")[0] == 4
    code, out, _ = run(capsys, "lhier", "--levels", "0")
    levels = json.loads(out)["levels"]
    assert code == 0 and len(levels) == 1 and levels[0]["domain"] == []


def test_force_table(capsys):
    code, out, _ = run(capsys, "--json", "force", "--bits", "2", "--sentence", "{<0,1>} in #G")
    data = json.loads(out)
    assert code == 0
    forced = [r["condition"] for r in data["conditions"] if r["forces"]]
    assert forced == ["{0:1}", "{0:1,1:0}", "{0:1,1:1}"]
    assert data["truth_lemma"] and data["negation_lemma"]
    assert len(data["generics"]) == 4


def test_force_literal_pair_in_g(capsys):
    # the pair is never an element of the set of encodings; every condition forces the negation
    code, out, _ = run(capsys, "--json", "force", "--bits", "2", "--sentence", "<0,1> in #G")
    rows = json.loads(out)["conditions"]
    assert code == 0
    assert not any(r["forces"] for r in rows) and all(r["forces_negation"] for r in rows)


def test_force_reflexivity_and_single_condition(capsys):
    code, out, _ = run(capsys, "--json", "force", "--bits", "1", "--sentence", "#G = #G")
    rows = json.loads(out)["conditions"]
    assert code == 0 and len(rows) == 3 and all(r["forces"] for r in rows)
    code, out, _ = run(capsys, "force", "--bits", "2", "--sentence", "<0,1> in #g",
                       "--condition", "{0:1}")
    assert code == 0 and "{0:1}" in out and "forces" in out


def test_force_errors(capsys):
    assert run(capsys, "force", "--bits", "2", "--sentence", "(")[0] == 2
    assert run(capsys, "force", "--bits", "2", "--sentence", "#nope = #nope")[0] == 3
    assert run(capsys, "force", "--bits", "2", "--sentence", "y = y")[0] == 3
    assert run(capsys, "force", "--bits", "1", "--sentence", "#G = #G", "--condition", "{5:1}")[0] == 3
    assert run(capsys, "force", "--bits", "1", "--sentence", "#G = #G", "--condition", "{0:x}")[0] == 2
    assert run(capsys, "force", "--bits", "20", "--sentence", "#G = #G")[0] == 4


def test_sites(capsys):
    code, out, _ = run(capsys, "--json", "sites", "--model", str(MODELS / "transitive_v3.json"))
    assert code == 0 and json.loads(out) == {"classification": "transitive", "sites": []}
    code, out, _ = run(capsys, "--json", "sites", "--model", str(MODELS / "site_example.json"))
    assert json.loads(out)["sites"] == [{"site": "{{{}}}", "outside_members": ["{{}}"]}]


def test_report_small(capsys):
    code, out, _ = run(capsys, "report", "--seed", "42", "--scale", "small")
    data = json.loads(out)
    assert code == 0 and data["all_pass"]
    ids = [c["id"] for c in data["claims"]]
    assert ids == [cid for cid, _, _ in REGISTRY] and len(set(ids)) == len(ids)
    verdicts = {c["id"]: c["verdict"] for c in data["claims"]}
    assert verdicts["ch-undecidability"] == "out-of-scope"
    for c in data["claims"]:
        if c["verdict"] == "out-of-scope":
            assert c["details"]["reason"]
        else:
            assert c["verdict"] == "pass"
        assert "runtime_ms" not in c


def test_report_timings_and_depth(capsys):
    code, out, _ = run(capsys, "report", "--timings", "--max-depth", "1")
    assert code == 0
    assert all("runtime_ms" in c for c in json.loads(out)["claims"])
    assert run(capsys, "report", "--max-depth", "0")[0] == 3


def test_global_flags_before_or_after(capsys):
    a = run(capsys, "--seed", "7", "report")[1]
    b = run(capsys, "report", "--seed", "7")[1]
    assert a == b and json.loads(a)["seed"] == 7


def test_usage_error_exits_2():
    with pytest.raises(SystemExit) as exc:
        main(["lhier"])
    assert exc.value.code == 2
