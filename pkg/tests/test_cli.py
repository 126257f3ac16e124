import json
import os
import subprocess
import sys

import pytest

from gammaforms.cli import run


def capture(capsys, argv):
    code = run(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_enumerate_tsv(capsys):
    code, out, _ = capture(capsys, ["enumerate", "--disc", "-8", "--level", "2", "--format", "tsv"])
    assert code == 0
    assert [line.split() for line in out.splitlines()] == [
        ["1", "0", "2"],
        ["2", "0", "1"],
        ["3", "2", "1"],
    ]


def test_enumerate_json_round_trip(capsys):
    code, out, _ = capture(capsys, ["enumerate", "--disc", "-7", "--level", "2", "--json"])
    assert code == 0
    data = json.loads(out)
    assert data["forms"] == [
        {"a": 1, "b": 1, "c": 2},
        {"a": 2, "b": -1, "c": 1},
        {"a": 2, "b": 1, "c": 1},
    ]


def test_classify_default_json(capsys):
    code, out, _ = capture(capsys, ["classify", "--prime", "23", "--disc", "-28", "--level", "2"])
    assert code == 0
    assert json.loads(out) == {"coset": [11, 15, 23], "witness": "7,0,1", "x": 1, "y": 4}


def test_classify_not_represented(capsys):
    code, out, _ = capture(capsys, ["classify", "--prime", "3", "--disc", "-28", "--level", "2"])
    assert code == 0
    assert json.loads(out) == {"coset": None, "witness": None, "kronecker": -1}


def test_verify_iso_line(capsys):
    code, out, _ = capture(capsys, ["verify-iso", "--disc", "-8", "--level", "2"])
    assert code == 0
    assert out.splitlines()[0] == "isomorphic: true; invariant_factors: [2]"


def test_verify_iso_oracle(capsys):
    code, out, _ = capture(capsys, ["verify-iso", "--disc", "-23", "--level", "2", "--oracle"])
    assert code == 0
    assert "oracle: ok (9 pairs)" in out


def test_reduce_and_equiv(capsys):
    code, out, _ = capture(capsys, ["reduce", "--form", "1,2,2", "--level", "2", "--json"])
    assert code == 0
    data = json.loads(out)
    assert data["reduced"] == {"a": 1, "b": 0, "c": 1}

    code, out, _ = capture(
        capsys, ["equiv", "--form1", "1,0,1", "--form2", "2,2,1", "--level", "2"]
    )
    assert code == 0 and out.startswith("equivalent: false")

    code, out, _ = capture(
        capsys, ["equiv", "--form1", "1,0,1", "--form2", "2,2,1", "--level", "1", "--json"]
    )
    data = json.loads(out)
    assert data["equivalent"] is True
    assert len(data["gamma"]) == 2


def test_classgroup_and_genus(capsys):
    code, out, _ = capture(capsys, ["classgroup", "--disc", "-8", "--level", "2", "--table"])
    assert code == 0
    assert "order: 2" in out and "invariant_factors: [2]" in out and "table:" in out

    code, out, _ = capture(capsys, ["genus", "--disc", "-28", "--level", "2", "--json"])
    data = json.loads(out)
    assert data["ker_chi"] == [1, 9, 11, 15, 23, 25]
    assert data["H"] == [1, 9, 25]
    assert data["cosets"] == [[1, 9, 25], [11, 15, 23]]


def test_represent(capsys):
    code, out, _ = capture(
        capsys, ["represent", "--form", "7,0,1", "--value", "23", "--level", "2"]
    )
    assert code == 0
    assert "1,4 proper=true admissible=true" in out


def test_fundomain_svg(capsys, tmp_path):
    svg_path = tmp_path / "region.svg"
    code, out, _ = capture(capsys, ["fundomain", "--p", "5", "--svg", str(svg_path)])
    assert code == 0
    data = json.loads(out)
    assert len(data["arcs"]) == 4 and data["lines"] == ["-1/2", "1/2"]
    assert svg_path.read_text().startswith("<svg")


def test_paper_tables(capsys):
    code, out, _ = capture(capsys, ["paper-tables"])
    assert code == 0
    assert out.splitlines()[-1] == "8/8 tables match"

    code, out, _ = capture(capsys, ["paper-tables", "--table", "rf-disc3-level2"])
    assert code == 0
    assert "1/1 tables match" in out


def test_exit_codes(capsys):
    code, _, err = capture(capsys, ["enumerate", "--disc", "-5", "--level", "2"])
    assert code == 2 and "validation" in err
    code, _, err = capture(capsys, ["enumerate", "--disc", "-4", "--level", "6"])
    assert code == 3 and "unsupported-level" in err
    code, _, err = capture(capsys, ["reduce", "--form", "1,0,1", "--level", "2", "--disc", "-8"])
    assert code == 2
    code, _, err = capture(capsys, ["classify", "--prime", "7", "--disc", "-28", "--level", "2"])
    assert code == 2


def _run_cli(args, env_extra=None):
    env = dict(os.environ)
    env.pop("GAMMA_FORMS_MAX_SEARCH", None)
    if env_extra:
        env.update(env_extra)
    return subprocess.run(
        [sys.executable, "-m", "gammaforms", *args],
        capture_output=True,
        text=True,
        env=env,
        cwd=os.path.dirname(os.path.dirname(os.path.abspath(__file__))),
    )


def test_search_bound_exit_code():
    proc = _run_cli(
        ["classgroup", "--disc", "-3", "--level", "5"],
        env_extra={"GAMMA_FORMS_MAX_SEARCH": "1"},
    )
    assert proc.returncode == 4
    assert "search-bound" in proc.stderr


def test_output_is_deterministic():
    for args in (
        ["enumerate", "--disc", "-28", "--level", "2", "--json"],
        ["classgroup", "--disc", "-23", "--level", "2", "--table"],
        ["genus", "--disc", "-28", "--level", "2", "--json"],
        ["fundomain", "--p", "7"],
    ):
        a = _run_cli(args)
        b = _run_cli(args)
        assert a.returncode == b.returncode == 0
        assert a.stdout == b.stdout
