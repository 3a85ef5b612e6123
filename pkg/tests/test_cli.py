import json
import subprocess
import sys

import pytest

from kplus.cli import corpus_entries, main


def run_cli(args):
    proc = subprocess.run(
        [sys.executable, "-m", "kplus.cli", *args],
        capture_output=True,
        text=True,
    )
    return proc


def test_decide_exit_codes():
    assert run_cli(["decide", "[+]p0 -> []p0"]).returncode == 0
    assert run_cli(["decide", "[]p0 -> [+]p0"]).returncode == 10
    assert run_cli(["decide", "p0 ->"]).returncode == 2
    assert run_cli(["decide", "p0 -> p0", "--budget", "1"]).returncode == 20


def test_decide_worked_example_sequent():
    proc = run_cli(["decide", "p0, []p0, [+](p0 -> []p0) |- [+]p0"])
    assert proc.returncode == 0
    assert "provable" in proc.stdout


def test_decide_emits_revalidating_proof(tmp_path):
    out = tmp_path / "proof.json"
    assert run_cli(["decide", "[+]p0 -> []p0", "--emit", str(out)]).returncode == 0
    assert run_cli(["check-proof", str(out)]).returncode == 0
    data = json.loads(out.read_text())
    data["backlinks"] = [{"leaf": 0, "target": 0}]
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(data))
    assert run_cli(["check-proof", str(bad)]).returncode == 1


def test_decide_emits_revalidating_refutation(tmp_path):
    out = tmp_path / "refutation.json"
    model_out = tmp_path / "model.json"
    proc = run_cli(
        ["decide", "[]p0 -> [+]p0", "--emit", str(out),
         "--countermodel", str(model_out)]
    )
    assert proc.returncode == 10
    assert run_cli(["check-refutation", str(out)]).returncode == 0
    model = json.loads(model_out.read_text())
    assert model["worlds"] and "world" in model


def test_countermodel_command(tmp_path):
    out = tmp_path / "model.json"
    assert run_cli(["countermodel", "[]p0 -> [+]p0", "--emit", str(out)]).returncode == 10
    assert json.loads(out.read_text())["worlds"]
    assert run_cli(["countermodel", "p0 -> p0"]).returncode == 0


def test_translate_command():
    proc = run_cli(["translate", "--forgetful", "[y0]tc p0 -> [head(y0)]p0"])
    assert proc.returncode == 0
    assert proc.stdout.strip() == "[+]p0 -> []p0"
    proc = run_cli(["translate", "--erase", "[]_3 p0"])
    assert proc.stdout.strip() == "[]p0"


def test_realize_command(tmp_path):
    out = tmp_path / "result.json"
    proc = run_cli(["realize", "[+]p0 -> []p0", "--emit", str(out)])
    assert proc.returncode == 0
    data = json.loads(out.read_text())
    assert data["realized"].startswith("[y0]tc p0 ->")
    proof_file = tmp_path / "proof.json"
    proof_file.write_text(json.dumps(data["proof"]))
    assert run_cli(["check-jproof", str(proof_file), "--require-injective"]).returncode == 0
    assert run_cli(["realize", "[]p0 -> [+]p0"]).returncode == 10


def test_corpus_generation(tmp_path):
    out = tmp_path / "corpus.json"
    proc = run_cli(["corpus", "--depth", "2", "--vars", "2", "--emit", str(out)])
    assert proc.returncode == 0
    entries = json.loads(out.read_text())["entries"]
    assert len(entries) >= 50
    assert all(e["expected"] == "provable" for e in entries)
    # deterministic for a fixed seed
    again = corpus_entries(2, 2, 0)
    assert [e["formula"] for e in again] == [e["formula"] for e in entries]


def test_corpus_entries_all_provable_sample():
    from kplus.engine import Engine, Provable
    from kplus.syntax import parse_modal, sequent

    engine = Engine()
    entries = corpus_entries(2, 2, 0)
    for entry in entries[:30]:
        verdict = engine.decide(sequent([], [parse_modal(entry["formula"])]))
        assert isinstance(verdict, Provable), entry


def test_selftest():
    assert run_cli(["selftest"]).returncode == 0
