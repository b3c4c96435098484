import json

import pytest
from click.testing import CliRunner

from matroidkit.cli import main


@pytest.fixture
def run():
    runner = CliRunner()

    def go(*args, input=None):
        return runner.invoke(main, list(args), input=input)

    return go


def test_gen_then_analyze_matches_family_flag(run):
    gen = run("gen", "free_swirl", "4")
    assert gen.exit_code == 0
    piped = run("analyze", input=gen.output)
    direct = run("analyze", "--family", "free_swirl4")
    assert piped.exit_code == direct.exit_code == 0
    a, b = json.loads(piped.output), json.loads(direct.output)
    assert a["three_separations"] == b["three_separations"]
    assert b["wheel_whirl"] == ["neither", None]


def test_gen_with_field(run):
    res = run("gen", "wheel4", "--q", "2")
    assert res.exit_code == 0
    assert json.loads(res.output)["backend"]["q"] == 2
    res = run("gen", "free_spike3", "--q", "3")
    assert res.exit_code == 1 and json.loads(res.output)["representable"] is False


def test_coherence_exit_codes(run):
    res = run("coherence", "--family", "free_swirl5", "-k", "5")
    assert res.exit_code == 1
    assert json.loads(res.output)["status"] == "5-fractured"
    assert run("coherence", "--family", "free_swirl4", "-k", "5").exit_code == 0


def test_flowers_with_petals(run, tmp_path):
    dot = tmp_path / "f.dot"
    res = run("flowers", "--family", "free_swirl4", "--petals", "p1,q1|p2,q2|p3,q3|p4,q4",
              "--dot", str(dot))
    assert res.exit_code == 0
    assert json.loads(res.output)["class"] == "swirl_like"
    assert dot.read_text().startswith("graph flower")
    bad = run("flowers", "--family", "free_swirl4", "--petals", "p1,q1,p2|q2,p3,q3|p4,q4")
    assert bad.exit_code == 1


def test_freedom_elements(run):
    res = run("freedom", "--family", "swirl_with_joints4", "-e", "b1", "-e", "p1")
    doc = json.loads(res.output)
    assert doc["b1"]["fixed"] is True and doc["p1"]["fixed"] is False


def test_skeleton_and_chain(run, tmp_path):
    assert run("skeleton", "--family", "free_swirl4").exit_code == 0
    assert run("skeleton", "--family", "wheel5").exit_code == 1
    res = run("chain", "--family", "free_swirl4")
    assert res.exit_code == 0 and len(json.loads(res.output)["steps"]) == 3
    assert run("chain", "--family", "free_swirl5").exit_code == 1


def test_reps_count(run):
    res = run("reps", "--family", "free_swirl3", "--q", "7", "--count")
    assert res.exit_code == 0 and json.loads(res.output) == {"count": 140}
    assert run("reps", "--family", "uniform2,4", "--q", "2").exit_code == 1


def test_verify_lemma(run):
    res = run("verify-lemma", "skeleton-duality")
    assert res.exit_code == 0 and json.loads(res.output)["counterexamples"] == []
    res = run("verify-lemma", "skeleton-no-fan")
    assert res.exit_code == 1 and json.loads(res.output)["counterexamples"] == ["U2,4"]


def test_acceptance_subset(run):
    res = run("acceptance", "--suite", "1,3", "--json")
    assert res.exit_code == 0
    lines = [json.loads(x) for x in res.output.splitlines()]
    assert lines[-1] == {"summary": True, "passed": 2, "failed": 0}
    assert run("acceptance", "--suite", "99").exit_code == 2


def test_error_exit_codes(run, tmp_path, monkeypatch):
    # --cap writes the environment variable; let monkeypatch restore it afterwards
    monkeypatch.setenv("MATROID_CAP", "20")
    assert run("analyze", input="{not json").exit_code == 2
    assert run("--cap", "8", "analyze", "--family", "wheel5").exit_code == 3
    assert run("frobnicate").exit_code == 2
    assert run("analyze", str(tmp_path / "missing.json")).exit_code == 2
