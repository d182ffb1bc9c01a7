from __future__ import annotations

import json
import subprocess
import sys

import pytest

from k3sextic.cli import run
from k3sextic.constructions import VenkovSpec, venkov_gram
from k3sextic.lattice import write_gram


def cli(*args):
    proc = subprocess.run([sys.executable, "-m", "k3sextic", *args], capture_output=True,
                          text=True)
    return proc.returncode, proc.stdout, proc.stderr


def test_verify_json_to_stdout(capsys):
    assert run(["verify", "--p", "5", "--sigma", "1", "--json", "-"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["R"] == "A4+D16" and data["milnor"] == 20
    assert data["empties"]["found"] == 0


def test_verify_rejects_non_prime():
    code, out, err = cli("verify", "--p", "4", "--sigma", "1")
    assert code == 2
    assert "p must be an odd prime" in err


def test_usage_errors_exit_two(tmp_path, capsys):
    assert run(["verify", "--p", "5"]) == 2
    assert run(["frobnicate"]) == 2
    assert run(["verify", "--p", "5", "--sigma", "11"]) == 2
    bad = tmp_path / "bad.gram"
    bad.write_text("2\n1 2\n3 4\n")
    assert run(["roots", "--gram", str(bad)]) == 2
    assert run(["roots", "--gram", str(tmp_path / "missing")]) == 2


def test_tables_one(capsys):
    assert run(["tables", "--which", "1"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 6
    assert lines[1].split("\t") == ["3", "8", "0", "E8", "E8", "ok"]


def test_roots_and_ade(tmp_path, capsys):
    path = tmp_path / "v.gram"
    write_gram(venkov_gram(VenkovSpec(3, 6, 1)), path)
    assert run(["ade", "--gram", str(path)]) == 0
    assert capsys.readouterr().out.strip() == "E6"
    assert run(["roots", "--gram", str(path), "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data == {"count": 72, "components": [{"rank": 6, "roots": 72, "type": "E6"}],
                    "type": "E6"}


def test_enumerate(tmp_path, capsys):
    form = tmp_path / "f.txt"
    form.write_text("2\n2 1/2\n1/2 2\n0 0\n-3\n")
    assert run(["enumerate", "--form", str(form), "--cosets", "0,0", "--eq", "0", "--json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["points"] == [["-1", "1"], ["1", "-1"]]
    assert run(["enumerate", "--form", str(form), "--cosets", "0,0,0"]) == 2


def test_construct(tmp_path, capsys):
    out = tmp_path / "l.gram"
    assert run(["construct", "--p", "7", "--sigma", "2", "--gram-out", str(out)]) == 0
    text = capsys.readouterr().out
    assert text.startswith("22\n")
    meta = json.loads(text[text.index("{"):])
    assert meta["decomposition"]["summands"] == ["U(7)", "V(7;20,2)"]
    assert all(meta["verification"][k] for k in ("rank", "even", "signature",
                                                  "discriminant_group"))
    assert out.read_text().startswith("22\n")
    assert run(["construct", "--p", "7", "--sigma", "2", "--line", "2"]) == 2


def test_output_is_byte_identical():
    first = cli("verify", "--p", "13", "--sigma", "3", "--json", "-")
    second = cli("verify", "--p", "13", "--sigma", "3", "--json", "-")
    assert first[0] == 0 and first == second


def test_certificate_recheck(tmp_path, capsys):
    cert = tmp_path / "c.json"
    assert run(["verify", "--p", "7", "--sigma", "3", "--json", str(cert)]) == 0
    assert run(["recheck", str(cert)]) == 0
    data = json.loads(cert.read_text())
    data["R"] = "A1+D16"
    cert.write_text(json.dumps(data))
    capsys.readouterr()
    assert run(["recheck", str(cert)]) == 1
    assert "- R" in capsys.readouterr().out


@pytest.mark.parametrize("workers", [1, 2])
def test_sweep_is_ordered(tmp_path, workers):
    out = tmp_path / "s.tsv"
    assert run(["sweep", "--pmax", "14", "--sigma", "3", "--workers", str(workers),
                "--tsv", str(out)]) == 0
    rows = [ln.split("\t") for ln in out.read_text().splitlines()]
    assert rows[0][:3] == ["p", "sigma", "case"]
    assert [r[0] for r in rows[1:]] == ["3", "5", "7", "11", "13"]
    assert all(r[-1] == "ok" for r in rows[1:])
