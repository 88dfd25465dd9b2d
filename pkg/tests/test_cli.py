import json
import subprocess
import sys
from pathlib import Path

import pytest

from plumblat import cli
from plumblat.errors import ComparisonMismatchError

DATA = Path(__file__).resolve().parent.parent / "data"


def run(capsys, *argv):
    code = cli.main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_homology_s3_single_tower(capsys):
    code, out, _ = run(capsys, "homology", DATA / "s3.plumb")
    assert code == 0
    assert out.strip().splitlines() == ["spinc 0  A=()  F[U](0)   [certified gr >= -6]"]


def test_homology_hopf_module(capsys):
    code, out, _ = run(capsys, "homology", DATA / "hopf.plumb", "--floor", "-8", "--box", "1", "--format", "json")
    assert code == 0
    pieces = {tuple(p["integral_alexander"]): p for p in json.loads(out)["pieces"]}
    assert pieces[("0", "0")]["top_grading"] == "0"
    assert pieces[("-1", "-1")]["top_grading"] == "-2"
    assert all(p["free_rank"] == 1 and not p["torsion"] for p in pieces.values())


def test_json_output_is_deterministic(capsys):
    args = ("present", DATA / "t33.plumb", "--format", "json")
    assert run(capsys, *args)[1] == run(capsys, *args)[1]


@pytest.mark.parametrize(
    "argv,code",
    [
        (("homology", DATA / "bad.plumb"), 2),
        (("homology", DATA / "missing.plumb"), 2),
        (("homology", DATA / "s3.plumb", "--box", "0"), 2),
        (("hfunction", DATA / "hopf.plumb", "--jobs", "0"), 2),
        (("h-from-alexander", DATA / "hopf.plumb"), 2),
    ],
)
def test_error_exit_codes(capsys, argv, code):
    got, _, err = run(capsys, *argv)
    assert got == code
    assert err.startswith("error:")


def test_singular_graph_exit_code(capsys, tmp_path):
    p = tmp_path / "sing.plumb"
    p.write_text("vertex a -2\nvertex b -1\nvertex c -2\nedge a b\nedge b c\narrow x\nedge b x\n")
    assert run(capsys, "homology", p)[0] == 4


def test_resolve_t33(capsys):
    code, out, _ = run(capsys, "resolve", DATA / "t33.plumb", "--box", "6")
    assert code == 0
    assert out.splitlines()[0] == "Betti numbers: (3, 8, 6, 1)"


@pytest.mark.slow
def test_resolve_t44(capsys):
    code, out, _ = run(capsys, "resolve", DATA / "t44.plumb", "--box", "8", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    assert doc["betti"] == [4, 20, 28, 14, 2] and doc["exact"]


def test_h_from_alexander_negative_point(capsys):
    code, out, _ = run(capsys, "h-from-alexander", DATA / "hopf.alex", "--at", "-1/2,-1/2")
    assert code == 0 and out.strip() == "H(-1/2, -1/2) = 1"


def test_h_from_alexander_box(capsys):
    code, out, _ = run(capsys, "h-from-alexander", DATA / "unknot.alex", "--box", "2")
    assert out.splitlines() == ["H(-2) = 2", "H(-1) = 1", "H(0) = 0", "H(1) = 0", "H(2) = 0"]


def test_present_hopf(capsys):
    code, out, _ = run(capsys, "present", DATA / "hopf.plumb")
    assert code == 0
    assert "  U1 X1 = V2 X2" in out and "  U2 X1 = V1 X2" in out


def test_compare_gn_agrees(capsys):
    code, out, _ = run(capsys, "compare-gn", DATA / "t24.plumb")
    assert code == 0 and "agree" in out


def test_compare_gn_mismatch_exit_code(capsys, monkeypatch):
    monkeypatch.setattr(cli, "compare_gn", lambda p, r, box: (False, [(((0, 0, 0), 0), 1, 0)]))
    code, _, err = run(capsys, "compare-gn", DATA / "hopf.plumb")
    assert code == ComparisonMismatchError.exit_code
    assert "DISAGREE" in err


def test_hfunction_and_lspace(capsys):
    code, out, _ = run(capsys, "hfunction", DATA / "hopf.plumb", "--box", "1")
    assert code == 0 and out.splitlines()[0].split() == ["1/2", "|", "1", "0"]
    code, out, _ = run(capsys, "lspace", DATA / "hopf.plumb")
    assert code == 0 and out.strip() == "L-space link in the box"


def test_cache_dir_is_used(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("PLUMBLAT_CACHE_DIR", str(tmp_path))
    assert run(capsys, "hfunction", DATA / "unknot.plumb", "--box", "1")[0] == 0
    assert list(tmp_path.glob("g-*.bin"))


def test_selftest(capsys):
    code, out, _ = run(capsys, "selftest", "--seed", "3")
    assert code == 0
    lines = out.splitlines()
    assert lines[0] == "seed 3"
    assert all(line.startswith("PASS") for line in lines[1:])


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "plumblat.cli", "h-from-alexander", str(DATA / "hopf.alex"), "--at", "1/2,1/2"],
        capture_output=True,
        text=True,
        check=False,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "H(1/2, 1/2) = 0"
