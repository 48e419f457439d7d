import pytest

from resoplus.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_gen_graph_and_metrics(tmp_path, capsys):
    gpath = tmp_path / "k5.graph"
    code, _ = run(capsys, "gen-graph", "--type", "k5", "--out", str(gpath))
    assert code == 0
    code, out = run(capsys, "metrics", "--graph", str(gpath))
    assert code == 0
    assert "lambda: 0.250000000" in out
    assert "cheeger_ok: True" in out


def test_tseitin_lift_pipeline(tmp_path, capsys):
    gpath = tmp_path / "tri.graph"
    run(capsys, "gen-graph", "--type", "cycle", "--vertices", "3", "--out", str(gpath))
    cpath = tmp_path / "tri.cnf"
    code, _ = run(capsys, "gen-tseitin", "--graph", str(gpath), "--out", str(cpath))
    assert code == 0
    assert cpath.read_text().splitlines()[0] == "p cnf 3 6"
    lpath = tmp_path / "tri_lift.cnf"
    code, _ = run(capsys, "lift", "--cnf", str(cpath), "--ip", "2", "--out", str(lpath))
    assert code == 0
    assert lpath.read_text().splitlines()[0].startswith("p cnf 6 ")


def test_gadget_spectrum_reports_max(capsys):
    code, out = run(capsys, "gadget-spectrum", "--ip", "8")
    assert code == 0
    assert "max_coefficient: 1/16" in out
    code, out = run(capsys, "gadget-spectrum", "--ip", "2", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0] == "S_mask,numerator,denominator"


def test_sample_and_root_dist(tmp_path, capsys):
    gpath = tmp_path / "k5.graph"
    run(capsys, "gen-graph", "--type", "k5", "--out", str(gpath))
    code, out = run(capsys, "sample-dtfooling", "--graph", str(gpath), "--samples", "5", "--seed", "3")
    assert code == 0
    assert out.splitlines()[0] == "seed,root,assignment"
    assert len(out.splitlines()) == 6
    code, out = run(capsys, "root-dist", "--graph", str(gpath))
    assert code == 0
    assert "0,1,5" in out and "uniform_ok,1" in out


def test_proof_commands(tmp_path, capsys):
    gpath = tmp_path / "tri.graph"
    run(capsys, "gen-graph", "--type", "cycle", "--vertices", "3", "--out", str(gpath))
    cpath = tmp_path / "tri.cnf"
    run(capsys, "gen-tseitin", "--graph", str(gpath), "--out", str(cpath))
    ppath = tmp_path / "tri.rxp"
    code, out = run(capsys, "pdt-refute", "--cnf", str(cpath), "--out", str(ppath))
    assert code == 0
    code, out = run(capsys, "check-proof", str(ppath), str(cpath))
    assert code == 0 and "OK" in out
    code, out = run(capsys, "proof-metrics", str(ppath))
    assert code == 0 and "depth:" in out
    # corrupting one rhs bit flips the exit code
    text = ppath.read_text().splitlines()
    for i, line in enumerate(text):
        if line.startswith("eq") and line.endswith("0"):
            text[i] = line[:-1] + "1"
            break
    bad = tmp_path / "bad.rxp"
    bad.write_text("\n".join(text) + "\n")
    code, out = run(capsys, "check-proof", str(bad), str(cpath))
    assert code == 1 and "violation" in out


def test_pdt_refute_satisfiable_exit_code(tmp_path, capsys):
    sat = tmp_path / "sat.cnf"
    sat.write_text("p cnf 2 1\n1 2 0\n")
    code, out = run(capsys, "pdt-refute", "--cnf", str(sat), "--out", str(tmp_path / "x.rxp"))
    assert code == 1 and "SATISFIABLE" in out


def test_verify_lemma_counterexample(capsys):
    code, out = run(capsys, "verify-lemma", "counterexample", "--n", "2", "--b", "4", "--seed", "1")
    assert code == 0
    assert "verdict: OK" in out


def test_verify_lemma_closure_laws(capsys):
    code, out = run(capsys, "verify-lemma", "closure-laws", "--trials", "120", "--seed", "5")
    assert code == 0
    assert "failures: 0" in out


def test_verify_lemma_small_scale(capsys):
    code, out = run(
        capsys, "verify-lemma", "exponential-sum", "--n", "2", "--b", "8", "--seed", "5", "--count", "2"
    )
    assert code == 0
    assert out.count("verdict: OK") == 2


def test_verify_lemma_conditional_b8(capsys):
    code, out = run(
        capsys,
        "verify-lemma", "conditional-fooling", "--n", "2", "--b", "8", "--k", "1", "--seed", "7", "--count", "2",
    )
    assert code == 0


def test_verify_lemma_k2_many_draws(capsys):
    # the gap-2 construction must stay feasible whatever the seed draws
    for seed in ("1", "2", "3"):
        code, _ = run(
            capsys,
            "verify-lemma", "conditional-fooling", "--n", "2", "--b", "8", "--k", "2",
            "--seed", seed, "--count", "3",
        )
        assert code == 0


def test_verify_lemma_jobs_deterministic(capsys):
    base = ["verify-lemma", "exponential-sum", "--n", "2", "--b", "8", "--seed", "4",
            "--count", "4", "--format", "csv"]
    code, out1 = run(capsys, *base, "--jobs", "1")
    assert code == 0
    code, out2 = run(capsys, *base, "--jobs", "3")
    assert code == 0
    assert out1 == out2


def test_hardness_experiment_and_determinism(tmp_path, capsys):
    args = [
        "hardness-experiment", "--type", "k5", "--q", "2", "--trials", "25", "--seed", "1", "--format", "csv",
    ]
    code, out1 = run(capsys, *args)
    assert code == 0
    code, out2 = run(capsys, *args)
    assert out1 == out2
    assert out1.splitlines()[0].startswith("strategy,trial,")


def test_unknown_subcommand_exits_2(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2


def test_missing_seed_is_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["sample-dtfooling", "--graph", "x.graph", "--samples", "1"])
    assert exc.value.code == 2
