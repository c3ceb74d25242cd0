import json
import subprocess
import sys

import pytest

from markovmoments.chain import dump_chain
from markovmoments.cli import main

from conftest import bernoulli_chain


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def as_file(tmp_path, chain, name="c.json"):
    p = tmp_path / name
    p.write_text(dump_chain(chain), encoding="utf-8")
    return str(p)


def example(capsys, tmp_path, *argv):
    code, out, _ = run(capsys, "example", *argv)
    assert code == 0
    p = tmp_path / "ex.json"
    p.write_text(out, encoding="utf-8")
    return str(p)


def test_validate_ok(capsys, tmp_path):
    code, out, _ = run(capsys, "validate", as_file(tmp_path, bernoulli_chain()))
    assert code == 0 and json.loads(out)["finally_aperiodic"]


def test_validate_two_leaves(capsys, tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"states": ["a", "b", "c"], "outputs": ["k"], "transitions": [
        {"from": "a", "to": "b", "prob": "1/2", "out": [0]},
        {"from": "a", "to": "c", "prob": "1/2", "out": [0]},
        {"from": "b", "to": "b", "prob": "1", "out": [1]},
        {"from": "c", "to": "c", "prob": "1", "out": [0]}]}))
    code, out, _ = run(capsys, "validate", str(p))
    assert code == 1 and not json.loads(out)["finally_connected"]
    assert run(capsys, "analyze", str(p))[0] == 1


def test_parse_error_exit_2(capsys, tmp_path):
    p = tmp_path / "broken.json"
    p.write_text('{"states": [')
    code, _, err = run(capsys, "validate", str(p))
    assert code == 2 and "parse error" in err
    assert run(capsys, "validate", str(tmp_path / "missing.json"))[0] == 2


def test_usage_error_exit_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["moments"])
    assert exc.value.code == 2


def test_analyze_bernoulli(capsys, tmp_path):
    code, out, _ = run(capsys, "analyze", as_file(tmp_path, bernoulli_chain()))
    rep = json.loads(out)
    assert code == 0
    assert rep["e"] == ["1/2"] and rep["sigma"] == [["1/4"]]
    assert rep["sigma_regular"] and rep["variance_zero"] == [{"output": "k", "a": None}]
    assert rep["methods"] == ["determinant", "digraph"]


def test_analyze_wnaf(capsys, tmp_path):
    path = example(capsys, tmp_path, "wnaf", "--w1", "2", "--w2", "3")
    code, out, _ = run(capsys, "analyze", path)
    rep = json.loads(out)
    assert rep["e"] == ["1/3", "1/4"]
    assert rep["sigma_regular"] and rep["dependence_certificate"] is None


def test_analyze_00_11(capsys, tmp_path):
    path = example(capsys, tmp_path, "blocks", "--kind", "00-11", "--p00", "3/10", "--p11", "7/10")
    rep = json.loads(run(capsys, "analyze", path)[1])
    assert rep["sigma_regular"]
    assert rep["independence"][0]["independent"] is False
    assert rep["final_component"]["states"] == ["0", "1"]


def test_analyze_float_mode(capsys, tmp_path):
    path = example(capsys, tmp_path, "blocks", "--kind", "10-11")
    rep = json.loads(run(capsys, "analyze", "--float", path)[1])
    assert rep["mode"] == "float"
    assert abs(rep["independence"][0]["c"] + 1 / 16) < 1e-12


def test_analyze_dependent_certificate(capsys, tmp_path):
    from markovmoments.builders import product, wnaf_transducer
    c = product(wnaf_transducer(2), wnaf_transducer(2), {0: "1/2", 1: "1/2"})
    rep = json.loads(run(capsys, "analyze", as_file(tmp_path, c))[1])
    assert not rep["sigma_regular"]
    assert rep["dependence_certificate"]["coefficients"] == ["0", "1", "-1"]


def test_moments_methods_agree(capsys, tmp_path):
    path = example(capsys, tmp_path, "blocks", "--kind", "10-11", "--p00", "1/3")
    a = json.loads(run(capsys, "moments", "--method", "digraph", path)[1])
    b = json.loads(run(capsys, "moments", "--method", "determinant", path)[1])
    assert (a["e"], a["sigma"]) == (b["e"], b["sigma"])


def test_moments_dp(capsys, tmp_path):
    rep = json.loads(run(capsys, "moments", "--method", "dp", "--n", "100",
                         as_file(tmp_path, bernoulli_chain()))[1])
    assert rep["mean"] == ["50"] and rep["cov"] == [["25"]]
    assert rep["mean_slope"] == ["1/2"]


def test_moments_mc_deterministic(capsys, tmp_path):
    path = example(capsys, tmp_path, "blocks", "--kind", "10-11")
    argv = ["moments", "--method", "mc", "--n", "200", "--samples", "2000", "--seed", "5", path]
    a = run(capsys, *argv)[1]
    b = run(capsys, *argv, "--workers", "2")[1]
    assert a == b


def test_cycles_and_digraphs(capsys, tmp_path):
    path = example(capsys, tmp_path, "blocks", "--kind", "10-11")
    rep = json.loads(run(capsys, "cycles", path)[1])
    assert rep["count"] == 3 and not rep["truncated"]
    assert json.loads(run(capsys, "cycles", "--limit", "1", path)[1])["truncated"]
    d1 = json.loads(run(capsys, "digraphs", path)[1])
    d2 = json.loads(run(capsys, "digraphs", "--parts", "2", path)[1])
    assert (d1["count"], d2["count"]) == (3, 1)
    assert d2["digraphs"][0]["weight"] == "1/4"


def test_matrixtree(capsys, tmp_path):
    path = example(capsys, tmp_path, "blocks", "--kind", "10-11")
    rep = json.loads(run(capsys, "matrixtree", "--A", "1", "--B", "2", path)[1])
    assert rep["minor"] == rep["forest_sum"] == "-1/2"
    assert run(capsys, "matrixtree", "--A", "5", "--B", "1", path)[0] == 2


def test_cap_exceeded(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("MM_ENUM_CAP", "2")
    path = example(capsys, tmp_path, "blocks", "--kind", "10-11")
    code, _, err = run(capsys, "analyze", path)
    assert code == 1 and "MM_ENUM_CAP" in err
    assert run(capsys, "analyze", "--method", "determinant", path)[0] == 0


def test_human_output(capsys, tmp_path):
    code, out, _ = run(capsys, "analyze", "--human", as_file(tmp_path, bernoulli_chain()))
    assert code == 0 and "sigma_regular: True" in out


def test_module_entry_point_stdin(tmp_path):
    proc = subprocess.run([sys.executable, "-m", "markovmoments", "moments", "-"],
                          input=dump_chain(bernoulli_chain()), capture_output=True,
                          text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["sigma"] == [["1/4"]]
