import json

import pytest

from rdptwist.cli import main, parse_cubic


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_table(capsys):
    code, out, _ = run(capsys, "table")
    assert code == 0
    assert len(out.strip().splitlines()) == 12
    code, out, _ = run(capsys, "table", "--char", "2", "--format", "json")
    rows = json.loads(out)
    assert [r["label"] for r in rows] == ["A", "B"]
    assert set(rows[0]) >= {"label", "rank", "equation", "params", "splitting_field", "char_constraints", "transcript"}


def test_equation_b(capsys):
    code, out, _ = run(capsys, "equation", "--type", "B", "--d", "2", "--n", "3")
    assert code == 0
    data = json.loads(out)
    assert data["equation"] == "2X^2 - Y^2 - 8Z^3"
    assert data["transcript"]["verified"] is True


def test_equation_f4(capsys):
    code, out, _ = run(capsys, "equation", "--type", "F4", "--d", "2")
    assert code == 0 and json.loads(out)["label"] == "F4"


def test_equation_g2_char3(capsys):
    code, out, _ = run(capsys, "equation", "--type", "G2", "--ext-cubic", "t^3-t+1", "--field", "Fp:3")
    assert code == 0 and json.loads(out)["label"] == "G2"


def test_invariants(capsys):
    code, out, _ = run(capsys, "invariants", "--group", "bd-star", "--n", "4", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["relation"] == "X^2Y - 4Y^5 - Z^2"


def test_mckay_json_cycle(capsys):
    code, out, _ = run(capsys, "mckay", "--group", "mu", "--n", "5", "--format", "json")
    data = json.loads(out)
    assert code == 0 and len(data["dims"]) == 5 and data["label"] == "A4~"
    assert all(sum(row) == 2 for row in data["adjacency"])


def test_mckay_dot_deterministic(capsys):
    _, first, _ = run(capsys, "mckay", "--group", "bo", "--format", "dot")
    _, second, _ = run(capsys, "mckay", "--group", "bo", "--format", "dot")
    assert first == second and first.startswith('graph "BO" {')


def test_twists_cubic(capsys):
    code, out, _ = run(capsys, "twists", "--group", "bd2", "--field", "Q", "--ext-cubic", "t^3-t-1", "--format", "json")
    data = json.loads(out)
    assert code == 0 and data["galois"] == "S3"
    assert [t["folded_label"] for t in data["twists"]] == ["D4", "C3", "G2"]


def test_verify_split(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "split")
    assert code == 0 and out.splitlines()[-1].startswith("OK")


def test_usage_errors(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["mckay", "--group", "nope"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        main(["invariants", "--group", "mu"])
    assert exc.value.code == 2
    code, _, err = run(capsys, "equation", "--type", "B", "--n", "3")
    assert code == 2 and "--d" in err
    code, _, _ = run(capsys, "equation", "--type", "B", "--n", "3", "--d", "2", "--field", "Fp:4")
    assert code == 2


def test_computation_failure(capsys):
    code, _, err = run(capsys, "equation", "--type", "B", "--n", "3", "--d", "4")
    assert code == 1
    assert json.loads(err)["error"] == "SplitParameter"


def test_parse_cubic():
    assert parse_cubic("t^3 - t - 1") == ("-1", "-1")
    # t^3 + 3t^2 + 3t + 2 = (t + 1)^3 + 1
    assert parse_cubic("t^3+3*t^2+3*t+2") == ("0", "1")
