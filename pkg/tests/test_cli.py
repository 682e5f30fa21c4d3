import json
import subprocess
import sys

import pytest

from polarset import io
from polarset.cli import main, run


def call(*argv):
    return main([str(a) for a in argv])


def test_w5_orbit_construct_and_verify(tmp_path, capsys):
    out = tmp_path / "o.pset"
    assert call("construct", "w5-orbit", "--q", 3, "--c", 1, "--out", out) == 0
    assert call("verify", "--in", out, "--check", "partial-ovoid,maximality") == 0
    text = capsys.readouterr().out
    assert "13 points" in text and "maximality: pass" in text
    assert len(io.parse(out)[0]) == 13


def test_tangent_set_then_lift(tmp_path, capsys):
    t = tmp_path / "t.pset"
    h4 = tmp_path / "h4.pset"
    assert call("tangent-set", "--n", 2, "--q", 2, "--seed-kind", "ovoid", "--trace", "tangent_point", "--out", t) == 0
    assert len(io.parse(t)[0]) == 9
    assert call("lift", "--in", t, "--out", h4) == 0
    assert call("verify", "--in", h4, "--check", "partial-ovoid,maximality") == 0
    assert len(io.parse(h4)[0]) == 17
    assert "17 points" in capsys.readouterr().out


def test_construct_variants(tmp_path, capsys):
    assert call("construct", "w3-cubic", "--q", 25, "--extend") == 0
    assert call("construct", "w5-even", "--q", 4, "--check-maximal") == 0
    assert call("construct", "w3-ovoid", "--q", 4, "--check-maximal") == 0
    out = capsys.readouterr().out
    assert "67 points" in out and "29 points" in out and "17 points" in out


def test_verification_failure_exit_1(tmp_path, capsys):
    out = tmp_path / "c.pset"
    rep = tmp_path / "r.json"
    assert call("construct", "w3-cubic", "--q", 25, "--out", out) == 0
    assert call("verify", "--in", out, "--check", "maximality", "--report", rep) == 1
    doc = json.loads(rep.read_text())
    assert doc["reports"][0]["outcome"] == "fail"
    assert "extending_point" in doc["reports"][0]["witness"]
    assert doc["config"]["check"] == "maximality"


def test_precondition_failure_is_a_failing_report(tmp_path):
    out = tmp_path / "c.pset"
    call("construct", "w5-orbit", "--q", 2, "--out", out)
    # tangent-set checks on a symplectic set: reported, exit 1
    assert call("verify", "--in", out, "--check", "tangent-set") == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["construct", "w3-cubic", "--q", "9"],
        ["construct", "w5-even", "--q", "3"],
        ["construct", "w5-orbit", "--q", "3", "--extend"],
        ["verify", "--in", "/nonexistent.pset"],
        ["verify", "--in", "x", "--check", "nonsense"],
        ["search", "--n", "4", "--q", "2"],
        ["tangent-set", "--n", "3", "--q", "2", "--seed-kind", "ovoid"],
        ["tangent-set", "--n", "2", "--q", "2", "--seed-kind", "file"],
        ["tangent-set", "--n", "2", "--q", "2", "--seed-kind", "ovoid", "--trace", "avoid_pi", "--placement-budget", "50"],
        ["bogus"],
        [],
        ["table", "--q", "6"],
    ],
)
def test_usage_errors_exit_2(argv):
    assert main(argv) == 2


def test_parse_error_exit_2(tmp_path):
    bad = tmp_path / "bad.pset"
    bad.write_text("POLARSET v1\nfield 2 1 1,1\ndim x\n")
    assert call("verify", "--in", bad) == 2


def test_help_exit_0(capsys):
    assert main(["--help"]) == 0
    assert run is main


def test_search(tmp_path, capsys):
    out = tmp_path / "s.pset"
    assert call("search", "--n", 5, "--q", 2, "--symmetry", "--out", out) == 0
    assert "found 7 (optimal)" in capsys.readouterr().out
    assert len(io.parse(out)[0]) == 7


def test_tangent_set_from_search_and_w5_seeds(capsys):
    assert call("tangent-set", "--n", 4, "--q", 2, "--seed-kind", "search") == 0
    assert call("tangent-set", "--n", 3, "--q", 2, "--seed-kind", "w5-even") == 0
    assert call("tangent-set", "--n", 3, "--q", 2, "--seed-kind", "w5-orbit") == 0
    out = capsys.readouterr().out
    assert "17 points" in out and out.count("13 points") == 2


def test_tangent_set_from_file(tmp_path):
    seed = tmp_path / "seed.pset"
    call("construct", "w5-orbit", "--q", 2, "--out", seed)
    assert call("tangent-set", "--n", 3, "--q", 2, "--seed-kind", "file", "--seed", seed) == 0


def test_table(capsys):
    assert call("table", "--q", 2) == 0
    assert "W(5,q)" in capsys.readouterr().out
    assert call("table", "--q", 2, "--json") == 0
    doc = json.loads(capsys.readouterr().out)
    assert any(e["value"] == 7 and e["kind"] == "upper" for e in doc["W(5,q)"])


def test_reruns_are_byte_identical(tmp_path):
    outs = []
    for _ in range(2):
        t = tmp_path / "t.pset"
        rep = tmp_path / "r.json"
        argv = ["tangent-set", "--n", 2, "--q", 2, "--seed-kind", "ovoid", "--trace", "secant_conic",
                "--rng-seed", 5, "--check-maximal", "--out", t, "--report", rep]
        assert call(*argv) == 0
        outs.append((t.read_bytes(), io.strip_timing(json.loads(rep.read_text()))))
    assert outs[0] == outs[1]


def test_threads_do_not_change_results(tmp_path):
    a, b = tmp_path / "a.pset", tmp_path / "b.pset"
    call("construct", "w5-orbit", "--q", 3, "--out", a, "--threads", 1)
    call("construct", "w5-orbit", "--q", 3, "--out", b, "--threads", 2)
    assert a.read_bytes() == b.read_bytes()


def test_module_entry_point():
    r = subprocess.run([sys.executable, "-m", "polarset", "table", "--q", "3"], capture_output=True, text=True, check=False)
    assert r.returncode == 0 and "bounds at q = 3" in r.stdout
