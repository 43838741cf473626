import csv
import json

import pytest

from signflow.cli import CSV_COLUMNS, main, psi_rows, render_csv
from signflow.core import switch
from signflow.generators import complete_multi
from signflow.io import parse_graph, render_graph


@pytest.fixture
def k4(tmp_path):
    path = tmp_path / "k4.sg"
    assert main(["generate", "complete-multi", "--n", "4", "--mult", "4", "--signs", "pair-in-class",
                 "--out", str(path)]) == 0
    return path


def test_generate_reports_connectivity(tmp_path, capsys):
    path = tmp_path / "g.sg"
    assert main(["generate", "complete-multi", "--n", "4", "--mult", "4", "--out", str(path)]) == 0
    assert "edge connectivity: 12" in capsys.readouterr().err
    assert parse_graph(path.read_text()) == complete_multi(4, 4)


def test_generate_triangle_to_stdout(capsys):
    assert main(["generate", "cycle-multi", "--n", "3", "--mult", "1"]) == 0
    out = capsys.readouterr().out
    assert "sg 3 3" in out and out.strip().endswith("0 2 +")


def test_analyze_applies(k4, capsys):
    assert main(["analyze", str(k4)]) == 0
    out = capsys.readouterr().out
    assert "Theorem applies: yes (λ=12 ≥ 11, essentially 3-unbalanced: yes)" in out


def test_analyze_triangle(tmp_path, capsys):
    path = tmp_path / "t.sg"
    path.write_text("sg 3 3\n0 1 +\n1 2 +\n0 2 -\n")
    assert main(["analyze", str(path)]) == 0
    assert "Theorem applies: no (λ=2 < 11, essentially 3-unbalanced: no)" in capsys.readouterr().out


def test_parse_error_exit(tmp_path, capsys):
    path = tmp_path / "bad.sg"
    path.write_text("sg three 1\n0 1 +\n")
    assert main(["analyze", str(path)]) == 2
    assert "line 1" in capsys.readouterr().err
    assert main(["analyze", str(tmp_path / "missing.sg")]) == 2


def test_construct_and_verify(k4, tmp_path, capsys):
    cert = tmp_path / "k4.cert"
    dot = tmp_path / "k4.dot"
    manifest = tmp_path / "run.json"
    assert main(["construct", str(k4), "--out", str(cert), "--emit-dot", str(dot), "--manifest", str(manifest)]) == 0
    assert cert.read_text().startswith("cert k=1 p=3 q=1\n")
    assert dot.read_text().startswith("digraph")
    info = json.loads(manifest.read_text())
    assert info["certificate"] == str(cert) and info["k"] == 1 and "timings" in info
    assert main(["verify", str(k4), str(cert)]) == 0
    assert "OK" in capsys.readouterr().out


def test_construct_is_deterministic(k4, tmp_path):
    a, b = tmp_path / "a.cert", tmp_path / "b.cert"
    assert main(["construct", str(k4), "--out", str(a), "--seed", "5"]) == 0
    assert main(["construct", str(k4), "--out", str(b), "--seed", "5"]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_edited_value_fails_naming_edge(k4, tmp_path, capsys):
    cert = tmp_path / "k4.cert"
    main(["construct", str(k4), "--out", str(cert)])
    lines = cert.read_text().splitlines()
    i = next(j for j, line in enumerate(lines) if line.startswith("5 "))
    parts = lines[i].split()
    lines[i] = " ".join(parts[:3] + ["0"])
    bad = tmp_path / "bad.cert"
    bad.write_text("\n".join(lines) + "\n")
    capsys.readouterr()
    assert main(["verify", str(k4), str(bad)]) == 5
    assert "edge 5" in capsys.readouterr().out


def test_tampered_stage_fails_replay(k4, tmp_path, capsys):
    cert = tmp_path / "k4.cert"
    main(["construct", str(k4), "--out", str(cert)])
    text = cert.read_text().replace("walk_start = 0", "walk_start = 1")
    bad = tmp_path / "bad.cert"
    bad.write_text(text)
    capsys.readouterr()
    assert main(["verify", str(k4), str(bad)]) == 5
    assert "replay" in capsys.readouterr().out
    assert main(["verify", str(k4), str(bad), "--skip-replay"]) == 0


def test_switched_graph_digest_mismatch(k4, tmp_path, capsys):
    cert = tmp_path / "k4.cert"
    main(["construct", str(k4), "--out", str(cert)])
    other = tmp_path / "switched.sg"
    other.write_text(render_graph(switch(parse_graph(k4.read_text()), [0])))
    capsys.readouterr()
    assert main(["verify", str(other), str(cert)]) == 5
    assert "digest" in capsys.readouterr().out


def test_refusal_exit_code(tmp_path, capsys):
    path = tmp_path / "t.sg"
    path.write_text("sg 3 3\n0 1 +\n1 2 +\n0 2 -\n")
    assert main(["construct", str(path)]) == 3
    assert not (tmp_path / "t.cert").exists()


def test_forced_stage_failure_exit_code(tmp_path):
    path = tmp_path / "t.sg"
    path.write_text("sg 3 3\n0 1 +\n1 2 +\n0 2 -\n")
    assert main(["construct", str(path), "--force"]) == 4


def test_experiment_rows_and_flags(tmp_path):
    out = tmp_path / "psi.csv"
    assert main(["experiment-psi", "--family", "triangle-multi", "--mult", "1-4", "--out", str(out)]) == 0
    rows = list(csv.DictReader(out.open()))
    assert len(rows) == 4
    assert tuple(rows[0].keys()) == CSV_COLUMNS
    assert rows[0]["phi_c_num"] == "2" and rows[0]["within_bound"] == "yes"
    text = render_csv(psi_rows(1, ["complete-multi"], [4], [4], ["none"], [0]))
    assert "skipped: oracle bound" in text


def test_experiment_empty_sweep(capsys):
    assert main(["experiment-psi", "--mult", "3-2"]) == 0
    assert capsys.readouterr().out == ",".join(CSV_COLUMNS) + "\n"


def test_seed_from_environment(monkeypatch, tmp_path):
    monkeypatch.setenv("SIGNFLOW_SEED", "7")
    path = tmp_path / "r.sg"
    assert main(["generate", "random-regular-multi", "--n", "6", "--mult", "4", "--out", str(path)]) == 0
    assert "seed=7" in path.read_text()


def test_bad_k(k4):
    assert main(["analyze", str(k4), "--k", "0"]) == 2
