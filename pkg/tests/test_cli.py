import json
import os
import subprocess
import sys

import pytest

from elkat.cli import main

PKG_ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def run_cli(args, env_extra=None, capsys=None):
    """Invoke the CLI in-process; returns (exit_code, stdout)."""
    code = main(args)
    out = capsys.readouterr() if capsys else None
    return code, out


@pytest.fixture
def files(tmp_path):
    sat_file = tmp_path / "sat.elk"
    sat_file.write_text("A(a)\nK[1] K[2] (A <= B)\n! K[2] B(a)\n")
    unsat_file = tmp_path / "unsat.elk"
    unsat_file.write_text("K[1] (A <= B) && ! K[1] (A <= B)\n")
    onto_file = tmp_path / "onto.el"
    onto_file.write_text(
        "FrenchChef(Soyer)\nCrepe <= some contains . Flour\n"
        "Crepe & some contains . Sugar <= Dessert\n")
    target_file = tmp_path / "target.el"
    target_file.write_text(
        "ViolaBuriti <= some madeFrom . Buriti\nBuriti <= BrazilianTree\n")
    config_file = tmp_path / "learn.json"
    config_file.write_text(json.dumps({
        "backend": "el", "target_file": str(target_file), "learner": "alg3",
        "oracle_strategy": "smallest-first", "pool_bound": 3, "seed": 5}))
    nonconj_file = tmp_path / "nonconj.elk"
    nonconj_file.write_text("! (K[1] (A <= B) && K[2] (A <= B))\n")
    return tmp_path


def test_sat_verdict_lines(files, capsys):
    code, out = run_cli(["sat", str(files / "sat.elk")], capsys=capsys)
    assert code == 0 and out.out.strip() == "SAT"
    code, out = run_cli(["sat", str(files / "unsat.elk"), "--json"], capsys=capsys)
    assert code == 0
    lines = out.out.splitlines()
    assert lines[0] == "UNSAT"
    detail = json.loads("\n".join(lines[1:]))
    assert detail["sat"] is False and detail["failing_check"] is not None


def test_sat_witness_self_checks(files, capsys):
    code, out = run_cli(["sat", str(files / "sat.elk"), "--witness"], capsys=capsys)
    assert code == 0
    lines = out.out.splitlines()
    assert lines[0] == "SAT"
    witness = json.loads("\n".join(lines[1:]))
    assert witness["point"] == 0 and len(witness["worlds"]) >= 1


def test_sat_modes_agree(files, capsys):
    verdicts = {}
    for mode in ("conjunctive", "full", "brute"):
        code, out = run_cli(["sat", str(files / "sat.elk"), "--mode", mode],
                            capsys=capsys)
        assert code == 0
        verdicts[mode] = out.out.strip()
    assert set(verdicts.values()) == {"SAT"}


def test_sat_fragment_error_exit_2(files, capsys):
    code, out = run_cli(["sat", str(files / "nonconj.elk")], capsys=capsys)
    assert code == 2
    code, out = run_cli(["sat", str(files / "nonconj.elk"), "--mode", "full"],
                        capsys=capsys)
    assert code == 0


def test_sat_parse_error_exit_2(files, capsys):
    bad = files / "bad.elk"
    bad.write_text("A <= ")
    code, _ = run_cli(["sat", str(bad)], capsys=capsys)
    assert code == 2


def test_entail_examples(files, capsys):
    code, out = run_cli(["entail", str(files / "onto.el"),
                         "--axiom", "Crepe <= Dessert"], capsys=capsys)
    assert code == 0 and out.out.strip() == "NOT-ENTAILED"
    code, out = run_cli(["entail", str(files / "onto.el"),
                         "--axiom", "Crepe & some contains . Sugar <= Dessert"],
                        capsys=capsys)
    assert code == 0 and out.out.strip() == "ENTAILED"


def test_entail_bm_example(files, capsys, tmp_path):
    obm = tmp_path / "obm.el"
    obm.write_text("BrazilianSinger(Caetano)\nBossaNova <= BrazilianMusicStyle\n")
    code, out = run_cli(["entail", str(obm),
                         "--axiom", "BossaNova <= BrazilianMusicStyle"],
                        capsys=capsys)
    assert code == 0 and out.out.strip() == "ENTAILED"


def test_model_emits_witness(files, capsys):
    code, out = run_cli(["model", str(files / "sat.elk")], capsys=capsys)
    assert code == 0
    witness = json.loads(out.out)
    assert witness["point"] == 0


def test_learn_session(files, capsys):
    code, out = run_cli(["learn", str(files / "learn.json")], capsys=capsys)
    assert code == 0
    result = json.loads(out.out)
    assert result["equivalence"]["equivalent"] is True
    assert result["transcript"]["counts"]["ex"] >= 1


def test_learn_budget_zero_exit_1(files, capsys, tmp_path):
    config = dict(json.loads((files / "learn.json").read_text()))
    config["budget"] = 0
    path = tmp_path / "budget0.json"
    path.write_text(json.dumps(config))
    code, out = run_cli(["learn", str(path)], capsys=capsys)
    assert code == 1


def test_experiment_thm2(files, capsys):
    code, out = run_cli(["experiment", "thm2", "--n", "2"], capsys=capsys)
    assert code == 0
    result = json.loads(out.out)
    assert result["ex_queries"] >= 4 and result["eq_queries"] == 1


def test_seed_determinism_byte_identical(files, capsys):
    outputs = []
    for _ in range(2):
        code, out = run_cli(["learn", str(files / "learn.json")], capsys=capsys)
        assert code == 0
        outputs.append(out.out)
    assert outputs[0] == outputs[1]


def test_env_seed_override(files, capsys, monkeypatch):
    monkeypatch.setenv("ELKAT_SEED", "99")
    code, out = run_cli(["learn", str(files / "learn.json")], capsys=capsys)
    assert code == 0
    assert json.loads(out.out)["seed"] == 99


def test_console_entry_point_subprocess(files):
    env = dict(os.environ)
    proc = subprocess.run(
        [sys.executable, "-m", "elkat.cli", "experiment", "thm2", "--n", "1"],
        capture_output=True, text=True, env=env, cwd=PKG_ROOT)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["eq_queries"] == 1
