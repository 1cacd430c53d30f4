import pytest

from alba import cli
from alba.classify import is_inductive
from alba.corpus import MAX_DEPTH, MAX_LEAVES, generate_corpus
from alba.engine import RunResult, Status
from alba.syntax import Family, QuasiInequality, parse_inequality
from alba.syntax.terms import children, depth, ineq_variables, positions
from tests.conftest import DATA, FREGE

SIG = str(DATA / "frege.sig")
MODEL = str(DATA / "bool2.mod")


@pytest.fixture(scope="module")
def corpus():
    return generate_corpus(0)


def test_corpus_size_and_bounds(corpus):
    assert len(corpus) == 500
    for it in corpus:
        assert max(depth(it.ineq.lhs), depth(it.ineq.rhs)) <= MAX_DEPTH
        assert 1 <= len(ineq_variables(it.ineq)) <= 4
        assert is_inductive(it.ineq, it.certificate, it.sig).holds


def test_corpus_signatures_mix_families(corpus):
    sigs = {id(it.sig): it.sig for it in corpus}.values()
    assert len(sigs) == 5
    for sig in sigs:
        fams = [c.family for c in sig.values()]
        assert set(fams) == set(Family)
        assert all(fams.count(f) <= 3 for f in Family)


def test_corpus_is_deterministic(corpus):
    again = generate_corpus(0)
    assert [it.ineq for it in again] == [it.ineq for it in corpus]
    assert [it.ineq for it in generate_corpus(1)] != [it.ineq for it in corpus]


def test_corpus_leaf_budget(corpus):
    for it in corpus:
        n = sum(1 for side in it.ineq for _, t in positions(side) if not children(t))
        assert n <= MAX_LEAVES


# -- CLI ---------------------------------------------------------------------


def test_cli_run(capsys):
    assert cli.main(["run", "--sig", SIG, FREGE]) == 0
    out = capsys.readouterr().out.strip()
    assert out.startswith("FORALL #j1 #j3 @m1 : => ")


def test_cli_classify(capsys):
    assert cli.main(["classify", "--sig", SIG, FREGE, "p /\\ q <= p"]) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("INDUCTIVE eps p=")
    assert lines[1].startswith("INDUCTIVE eps p=")


def test_cli_classify_none(tmp_path, capsys):
    sig = tmp_path / "modal.sig"
    sig.write_text("conn dia fn 1 1\nconn box gn 1 1\n")
    assert cli.main(["classify", "--sig", str(sig), "box(dia(p)) <= dia(box(p))"]) == 0
    assert capsys.readouterr().out.strip() == "NONE"


def test_cli_dump_trees(capsys):
    assert cli.main(["classify", "--sig", SIG, "--dump-trees", "p <= q"]) == 0
    assert capsys.readouterr().out.splitlines()[:2] == ["/ + leaf p", "/ - leaf q"]


def test_cli_verify_with_model(capsys):
    assert cli.main(["verify", "--sig", SIG, "--model", MODEL, FREGE]) == 0
    assert capsys.readouterr().out.strip() == "EQUIVALENT (8 assignments, 1 model)"


def test_cli_verify_enumerated_pool(capsys):
    assert cli.main(["verify", "--sig", SIG, "--max-size", "3", FREGE]) == 0
    assert capsys.readouterr().out.strip().endswith("9 models)")


def test_cli_verify_reports_discrepancy(monkeypatch, capsys):
    sig = cli.parse_signature((DATA / "frege.sig").read_text())
    wrong = QuasiInequality((), parse_inequality("#j <= @m", sig))
    monkeypatch.setattr(cli, "run", lambda *a, **k: RunResult(Status.SUCCESS, [wrong]))
    assert cli.main(["verify", "--sig", SIG, "--model", MODEL, FREGE]) == 2
    out = capsys.readouterr().out.strip()
    assert out == "DISCREPANT model=bool2.mod assignment=#j=1,@m=0 witness=output"


def test_cli_trace_file(tmp_path, capsys):
    trace = tmp_path / "trace.txt"
    assert cli.main(["run", "--sig", SIG, "--trace", str(trace), FREGE]) == 0
    lines = trace.read_text().splitlines()
    assert lines[0] == "input 0"
    assert lines[3].startswith("step 1 rule approximation at L+ /")
    assert sum(1 for ln in lines if ln.startswith("step ")) == 11


def test_cli_run_failure_exit(tmp_path, capsys):
    sig = tmp_path / "modal.sig"
    sig.write_text("conn dia fn 1 1\nconn box gn 1 1\n")
    assert cli.main(["run", "--sig", str(sig), "box(dia(p)) <= dia(box(p))"]) == 3
    assert capsys.readouterr().out.startswith("FAILURE")


def test_cli_config_errors(capsys):
    assert cli.main(["run", "--sig", SIG, "p <="]) == 1
    assert cli.main(["run", "--sig", "missing.sig", "p <= q"]) == 1
    assert cli.main(["run", "--sig", SIG, "f(p) <= q"]) == 1
    with pytest.raises(SystemExit) as exc:
        cli.main(["run", "--sig", SIG, "--mode", "lazy", "p <= q"])
    assert exc.value.code == 1
    err = capsys.readouterr().err
    assert "alba:" in err


def test_cli_color(monkeypatch, capsys):
    monkeypatch.setenv("ALBA_COLOR", "1")
    cli.main(["verify", "--sig", SIG, "--model", MODEL, FREGE])
    assert capsys.readouterr().out.startswith("\x1b[32mEQUIVALENT\x1b[0m (8 assignments")
    monkeypatch.setenv("ALBA_COLOR", "0")
    cli.main(["verify", "--sig", SIG, "--model", MODEL, FREGE])
    assert capsys.readouterr().out.startswith("EQUIVALENT")


def test_cli_corpus(capsys):
    assert cli.main(["corpus", "--sig", SIG, "--seed", "4"]) == 0
    out = capsys.readouterr().out.splitlines()
    assert out == [
        "corpus seed=4 inputs=500",
        "success 500/500",
        "safe 500/500",
        "pivotal 500/500",
        "adequate 500/500",
    ]


def test_cli_output_is_byte_stable(capsys):
    cli.main(["run", "--sig", SIG, FREGE, "p <= p"])
    first = capsys.readouterr().out
    cli.main(["run", "--sig", SIG, FREGE, "p <= p"])
    assert capsys.readouterr().out == first
