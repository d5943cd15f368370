import json
import subprocess
import sys

import numpy as np
import pytest

from exactcat.cli import run
from exactcat.report import ReplayError, matrix_from_json, matrix_to_json, verify_report
from exactcat.workspace import LoadError, parse_workspace

DUAL = """\
field 2
algebra R dim 2
  unit 1 0
  const 0 0 0 1
  const 0 1 1 1
  const 1 0 1 1
end
module A = regular R
"""


def _run(fixtures_dir, *argv, ws="dual_numbers.ws"):
    text, code = run([*argv, "--workspace", str(fixtures_dir / ws)])
    return json.loads(text), code, text


def test_empty_document():
    ws = parse_workspace("")
    assert ws.is_empty()
    assert parse_workspace("# only a comment\n\n").is_empty()


def test_algebra_by_structure_constants():
    ws = parse_workspace(DUAL)
    R = ws.algebras["R"]
    # x . x = 0 and 1 is the unit, checked over all 8 basis triples at load
    assert R.structure[1, 1].tolist() == [0, 0]
    assert ws.module("A").dim == 2


def test_non_associative_algebra_rejected():
    bad = "field 2\nalgebra R dim 3\n  unit 1 0 0\n" + "".join(
        f"  const {i} {j} {k} 1\n" for i, j, k in [(0, 0, 0), (0, 1, 1), (1, 0, 1), (0, 2, 2), (2, 0, 2), (1, 1, 2), (2, 1, 1)]
    ) + "end\n"
    with pytest.raises(LoadError) as err:
        parse_workspace(bad)
    assert "associativity" in str(err.value)
    assert err.value.errors[0][0] == 2


def test_non_commuting_morphism_rejected():
    text = DUAL + """\
module k over R dim 1
  action 0
    1
  action 1
    0
end
morphism bad : k -> A
  1
  0
end
"""
    with pytest.raises(LoadError) as err:
        parse_workspace(text)
    (line, msg), = err.value.errors
    assert line == text.splitlines().index("morphism bad : k -> A") + 1
    assert "bad" in msg and "action" in msg


def test_unresolved_reference_reported_with_line():
    with pytest.raises(LoadError) as err:
        parse_workspace(DUAL + "morphism f : A -> B = zero\n")
    assert err.value.errors[0][0] == 9 and "B" in err.value.errors[0][1]


def test_matrix_json_round_trip():
    for a in (np.zeros((0, 3), dtype=np.int64), np.zeros((2, 0), dtype=np.int64), np.array([[1, 0], [0, 1]])):
        back = matrix_from_json(matrix_to_json(a))
        assert back.shape == a.shape and np.array_equal(back, a)


def test_rlp_with_empty_set(tmp_path, fixtures_dir):
    ws = (fixtures_dir / "dual_numbers.ws").read_text() + "set E =\n"
    path = tmp_path / "ws.ws"
    path.write_text(ws)
    text, code = run(["rlp", "quot", "--set", "E", "--workspace", str(path)])
    rep = json.loads(text)
    assert code == 0 and rep["items"][0]["verdict"] == "positive"


def test_rlp_negative(fixtures_dir):
    rep, code, text = _run(fixtures_dir, "rlp", "quot", "--set", "I")
    assert code == 1
    assert rep["items"][0]["ranks"] == [[1, 2]]
    assert verify_report(text)


def test_factorize_k_to_zero(fixtures_dir):
    rep, code, text = _run(fixtures_dir, "factorize", "kZ", "--set", "I")
    assert code == 0
    item = rep["items"][0]
    assert item["stages"] == 1 and item["cells"] == 1 and item["delta_has_rlp"]
    assert verify_report(text)


def test_factorize_budget_exit_code(fixtures_dir):
    rep, code, _ = _run(fixtures_dir, "factorize", "kZ", "--set", "I", "--budget", "0")
    assert code == 2 and rep["status"] == "budget_exhausted"
    assert rep["items"][0]["unsolved"] == {"0": 1}


def test_ext1_command(fixtures_dir):
    rep, code, text = _run(fixtures_dir, "ext1", "k", "k")
    assert code == 0 and rep["items"][0]["dim"] == 1
    rep, code, text = _run(fixtures_dir, "ext1", "k", "k", "--structure", "relative:A,k")
    assert rep["items"][0]["dim"] == 0
    assert verify_report(text)


def test_approximation_commands(fixtures_dir):
    for cmd in ("preenvelope", "precover"):
        rep, code, text = _run(fixtures_dir, cmd, "--set", "J", "--universe", "U")
        assert code == 0, rep
        assert len(rep["items"]) == 6
        assert verify_report(text)


def test_precover_generation_failure_is_negative(fixtures_dir):
    # cells of 0 -> k only build sums of k, which never cover A
    rep, code, text = _run(fixtures_dir, "precover", "A", "k", "--set", "K")
    assert code == 1
    a, k = rep["items"]
    assert a["status"] == "failed" and "GenerationError" in a["error"]
    assert k["verdict"] == "positive"
    assert verify_report(text)


def test_homological_failure_command(fixtures_dir):
    rep, code, _ = _run(fixtures_dir, "homological", "--set", "K", "--universe", "U")
    assert code == 1
    by_name = {it["name"]: it for it in rep["items"]}
    assert by_name["k"]["ext_dims"] == [1] and by_name["A"]["ext_dims"] == [0]


def test_eklof_command(fixtures_dir):
    rep, code, text = _run(fixtures_dir, "eklof", "ink", "prA", "--set", "F")
    assert code == 0 and rep["items"][0]["verdict"] == "positive"
    assert verify_report(text)
    # k is not built from free cells, so the extension k >-> A ->> k is out of reach
    rep, code, _ = _run(fixtures_dir, "eklof", "soc", "quot", "--set", "F")
    assert code == 1


def test_homological_command(fixtures_dir):
    rep, code, text = _run(fixtures_dir, "homological", "--set", "J", "--universe", "U")
    assert code == 0
    assert verify_report(text)


def test_acyclic_command(fixtures_dir):
    rep, code, text = _run(fixtures_dir, "acyclic", "Xx", "--generators", "A,k")
    assert code == 1 and rep["items"][0]["acyclic"] is False
    assert verify_report(text)


def test_corollary42_command(fixtures_dir):
    argv = ("corollary42", "--generators", "A,k", "--universe", "small")
    rep, code, text = _run(fixtures_dir, *argv, ws="complexes.ws")
    assert code == 0, rep["summary"]
    assert all(it["preenvelope_degreewise"] and it["precover_degreewise"] for it in rep["items"])
    assert rep["summary"][0]["verdict"] == "positive"
    assert verify_report(text)
    _, _, again = _run(fixtures_dir, *argv, ws="complexes.ws")
    assert again == text


def test_replay_is_byte_identical(fixtures_dir):
    a = _run(fixtures_dir, "precover", "--set", "J", "--universe", "U")[2]
    b = _run(fixtures_dir, "precover", "--set", "J", "--universe", "U")[2]
    assert a == b


def test_tampered_report_fails_replay(fixtures_dir):
    rep, _, _ = _run(fixtures_dir, "factorize", "kZ", "--set", "I")
    # gamma is the socle k -> A; claim it hits 1 + x instead
    assert rep["items"][0]["gamma"]["matrix"]["rows"] == ["0", "1"]
    rep["items"][0]["gamma"]["matrix"]["rows"] = ["1", "1"]
    with pytest.raises(ReplayError):
        verify_report(rep)


def test_load_and_usage_errors(fixtures_dir, tmp_path):
    bad = tmp_path / "bad.ws"
    bad.write_text("field 4\n")
    text, code = run(["ext1", "k", "k", "--workspace", str(bad)])
    assert code == 3 and json.loads(text)["errors"][0]["line"] == 1
    _, code, _ = _run(fixtures_dir, "ext1", "k", "nope")
    assert code == 3
    _, code, _ = _run(fixtures_dir, "rlp", "quot")
    assert code == 3


def test_module_entry_point(fixtures_dir, tmp_path):
    out = tmp_path / "r.json"
    proc = subprocess.run(
        [sys.executable, "-m", "exactcat", "ext1", "k", "A", "--workspace", str(fixtures_dir / "dual_numbers.ws"), "--out", str(out)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0, proc.stderr
    assert json.loads(out.read_text())["items"][0]["dim"] == 0
