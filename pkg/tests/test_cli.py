from __future__ import annotations

import io
import json
import re
import subprocess
import sys

import pytest

from reebscope import cli
from reebscope.figures import PITCH
from reebscope.volume import CertificateError

Q1 = "(-1,0);(0,-1);(1,0);(0,1)"


def run(*argv):
    buf = io.StringIO()
    code = cli.main(list(argv), out=buf)
    return code, buf.getvalue()


def run_json(*argv):
    code, text = run(*argv, "--format", "json")
    return code, json.loads(text)


@pytest.mark.parametrize(
    "command,section",
    [
        ("validate", "validation"),
        ("hilbert-basis", "hilbert_basis"),
        ("series", "hilbert_series"),
        ("ideal", "ideal"),
        ("volume", "volume"),
        ("reeb", "reeb"),
        ("decompose", "decomposition"),
        ("versal", "versal"),
    ],
)
def test_every_command_emits_its_section(command, section):
    code, data = run_json(command, "--vertices", Q1)
    assert code == 0
    assert data["schema"] == 1 and section in data
    assert data["input"]["text"] == "(0,-1);(1,0);(0,1);(-1,0)"


def test_text_output_is_readable():
    code, text = run("hilbert-basis", "--family", "dp", "--k", "1")
    assert code == 0 and "count: 9" in text


def test_q1_report_values():
    code, data = run_json("report", "--vertices", Q1)
    assert code == 0
    assert data["hilbert_basis"]["count"] == 9
    assert data["reeb"]["value"]["exact"] == "8/27"
    assert data["reeb"]["regularity"] == "quasi-regular"
    assert data["ideal"]["count"] == 20


def test_gmsw_21_is_irregular():
    code, data = run_json("reeb", "--family", "gmsw", "--p", "2", "--q", "1")
    assert code == 0 and data["reeb"]["irregular"] is True
    # affinely equivalent to Q3, so only the value is directly comparable
    assert data["reeb"]["value"]["decimal"].startswith("0.286642489")


def test_cfo_23_decomposition():
    code, data = run_json("decompose", "--family", "cfo", "--r", "2", "--s", "3")
    assert code == 0
    dec = data["decomposition"]
    assert dec["versal_dimensions"] == [2]
    (only,) = dec["lattice_decompositions"]
    assert sorted(len(s) for s in only["summands"]) == [2, 2, 3]


def test_json_file_input(tmp_path):
    f = tmp_path / "q1.json"
    f.write_text(json.dumps([[-1, 0], [0, -1], [1, 0], [0, 1]]), encoding="utf-8")
    code, data = run_json("volume", "--json", str(f))
    assert code == 0 and data["volume"]["a0"] == run_json("volume", "--vertices", Q1)[1]["volume"]["a0"]


# -- exit codes -------------------------------------------------------------------


@pytest.mark.parametrize(
    "argv",
    [
        ["validate", "--vertices", "(1,2"],
        ["validate", "--vertices", "[[0,0],[1]]"],
        ["validate"],
        ["validate", "--vertices", Q1, "--family", "dp", "--k", "1"],
        ["validate", "--json", "/nonexistent/file.json"],
        ["volume", "--family", "gmsw", "--p", "1", "--q", "2"],
        ["volume", "--family", "cfo", "--r", "1"],
        ["family", "gmsw", "--sweep", "x=1..2"],
        ["svg", "--vertices", Q1, "--decomposition", "5"],
    ],
)
def test_unreadable_input_exits_2(argv):
    assert run(*argv)[0] == cli.EXIT_PARSE


def test_invalid_diagram_exits_3_with_validation():
    code, data = run_json("reeb", "--vertices", "(0,0);(2,0);(0,1)")
    assert code == cli.EXIT_INVALID
    assert data["validation"]["valid"] is False
    code, data = run_json("report", "--vertices", "(0,0);(2,0);(0,1)")
    assert code == cli.EXIT_INVALID and list(data) == ["schema", "input", "validation", "timings"]


def test_certificate_failure_exits_4(monkeypatch):
    def refuse(P, precision=None):
        raise CertificateError("forced")

    monkeypatch.setattr(cli, "reeb_field", refuse)
    assert run("reeb", "--vertices", Q1)[0] == cli.EXIT_CERTIFICATE


def test_verify_round_trip_and_tampering(tmp_path):
    code, text = run("report", "--family", "dp", "--k", "5", "--format", "json")
    assert code == 0
    good = tmp_path / "good.json"
    good.write_text(text, encoding="utf-8")
    code, data = run_json("verify", str(good))
    assert code == 0 and data["verify"]["consistent"] is True

    report = json.loads(text)
    report["hilbert_basis"]["W"] = report["hilbert_basis"]["W"][:-1]
    report["volume"]["a0"] = "(1) / (a*b*c)"
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps(report), encoding="utf-8")
    code, data = run_json("verify", str(bad))
    assert code == cli.EXIT_VERIFY and len(data["verify"]["problems"]) >= 2

    report["reeb"]["a"]["interval"] = ["1/0", "1"]
    bad.write_text(json.dumps(report), encoding="utf-8")
    code, data = run_json("verify", str(bad))
    assert code == cli.EXIT_VERIFY and any("malformed" in p for p in data["verify"]["problems"])

    bad.write_text("not json", encoding="utf-8")
    assert run("verify", str(bad))[0] == cli.EXIT_PARSE


@pytest.mark.parametrize("family", [["--family", "cfo", "--r", "1", "--s", "3"], ["--family", "qpq", "--p", "2", "--q", "1"]])
def test_reports_verify_for_harder_inputs(tmp_path, family):
    code, text = run("report", *family, "--format", "json")
    f = tmp_path / "r.json"
    f.write_text(text, encoding="utf-8")
    assert code == 0 and run("verify", str(f))[0] == 0


def test_output_is_deterministic_apart_from_timings():
    outs = []
    for _ in range(2):
        code, data = run_json("report", "--family", "cfo", "--r", "1", "--s", "2", "--seed", "7")
        assert set(data.pop("timings")) <= set(cli.build_report.__globals__["SECTIONS"])
        outs.append(json.dumps(data, sort_keys=True))
    assert outs[0] == outs[1]


# -- family sweeps ----------------------------------------------------------------


def test_family_sweep_in_parallel_matches_serial():
    argv = ["family", "gmsw", "--sweep", "p=2..4,q=1..3", "--no-reeb"]
    code, serial = run_json(*argv)
    code2, parallel = run_json(*argv, "--jobs", "2")
    assert code == code2 == 0
    assert serial == parallel
    members = serial["members"]
    assert [m["params"] for m in members][:3] == [{"p": 2, "q": 1}, {"p": 2, "q": 2}, {"p": 2, "q": 3}]
    done = [m for m in members if "skipped" not in m]
    assert len(done) == 6 and all(m["versal_dimensions"] == [] for m in done)


def test_single_family_member_with_reeb():
    code, data = run_json("family", "cfo", "--r", "1", "--s", "3")
    assert code == 0
    (m,) = data["members"]
    assert m["hilbert_basis_size"] == 10 and m["reeb"]["regularity"] == "irregular"


# -- SVG --------------------------------------------------------------------------


def test_svg_style(tmp_path):
    target = tmp_path / "q5.svg"
    code, _ = run("svg", "--family", "dp", "--k", "5", "--decomposition", "1", "--title", "Q5", "-o", str(target))
    assert code == 0
    svg = target.read_text(encoding="utf-8")
    assert svg.startswith("<svg") and svg.rstrip().endswith("</svg>")
    assert 'stroke-dasharray="2,2"' in svg
    assert svg.count('class="origin"') == 3  # diagram plus two summand panels
    assert "summand 1" in svg and "summand 2" in svg and ">Q5<" in svg
    # every grid line sits on a multiple of the pitch
    coords = [int(v) for v in re.findall(r'<line x1="(-?\d+)"', svg)]
    assert coords and all(c % PITCH == 0 for c in coords)
    assert 'r="4"' in svg


def test_svg_to_stdout():
    code, svg = run("svg", "--vertices", Q1)
    assert code == 0 and svg.count("<polygon") == 1


def test_console_script_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "reebscope.cli", "validate", "--vertices", Q1, "--format", "json"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0 and json.loads(proc.stdout)["validation"]["valid"] is True
