import json
import subprocess
import sys

import pytest

from mgs.cli import main
from mgs.localcohom import local_cohomology_dims
from mgs.region import INF, StarRegion, Window, star
from mgs.render import RenderError, render_staircase
from mgs.ring import Ring, free_module

HYPERSURFACE_FILE = """
ring { k = 2; n = [3,3]; field = "F2"; vars = [["a","b","c"],["x","y","z"]] }
module { target_shifts = [[0,0]]; source_shifts = [[1,1]]; matrix = [["a*x+b*y+c*z"]] }
"""

FREE_35 = """
ring { k = 2; n = [3,5]; field = "F32003" }
module { target_shifts = [[0,0]]; source_shifts = []; matrix = [] }
"""


@pytest.fixture
def hyper(tmp_path):
    p = tmp_path / "hypersurface.mgs"
    p.write_text(HYPERSURFACE_FILE)
    return str(p)


@pytest.fixture
def free35(tmp_path):
    p = tmp_path / "free.mgs"
    p.write_text(FREE_35)
    return str(p)


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr()


def test_info(capsys, hyper):
    code, out = run(capsys, "info", hyper, "--json")
    assert code == 0
    data = json.loads(out.out)
    assert data["n"] == [3, 3]


def test_tor(capsys, hyper):
    code, out = run(capsys, "tor", hyper, "--json")
    assert code == 0
    tor = json.loads(out.out)["tor"]
    assert tor["1"] == [{"mu": [1, 1], "dim": 1}]


def test_star_and_lc(capsys, free35):
    code, out = run(capsys, "star", free35, "--json")
    assert code == 0
    assert json.loads(out.out)["star"] == {"corners": [[-3, -5]]}
    code, out = run(capsys, "star", free35, "--ideal", "B", "--json")
    assert json.loads(out.out)["star"] == {"corners": [[-3, None], [None, -5]]}
    code, out = run(capsys, "lc", free35, "--window", "-4,-6..-3,-5", "--json")
    assert code == 0
    entries = {(tuple(e["mu"]), e["p"]): e["dim"] for e in json.loads(out.out)["entries"]}
    assert entries == {((-4, -6), 8): 15, ((-4, -5), 8): 3, ((-3, -6), 8): 5, ((-3, -5), 8): 1}


def test_trunc(capsys, hyper):
    code, out = run(capsys, "trunc", hyper, "--t", "1,1", "--json")
    assert code == 0
    data = json.loads(out.out)
    assert data["regularity"] == 2 and data["bound"] == 2
    code, out = run(capsys, "trunc", hyper, "--t", "1,1", "--check", "lin")
    assert code == 0 and "FAILED" not in out.out


def test_trunc_inside_star_is_inconclusive(capsys, hyper):
    code, _ = run(capsys, "trunc", hyper, "--t", "0,-1", "--check", "lin")
    assert code == 3


def test_verify_exit_codes(capsys, hyper):
    code, out = run(capsys, "verify", "basicincl", hyper, "--json")
    assert code == 0
    assert [r["status"] for r in json.loads(out.out)["reports"]] == ["Pass"]
    code, _ = run(capsys, "verify", "basicincl", hyper, "--window", "-3,-3..-3,-3")
    assert code == 3


def test_verify_corpus(capsys):
    code, out = run(capsys, "verify", "basicincl", "--corpus", "0:9", "--json")
    assert code == 0
    assert len(json.loads(out.out)["reports"]) == 9


def test_plot(capsys, free35):
    code, out = run(capsys, "plot", free35)
    assert code == 0 and "o" in out.out
    code, out = run(capsys, "plot", free35, "--format", "svg")
    assert out.out.startswith("<svg")


def test_hb_estimate(capsys):
    code, out = run(capsys, "hb-estimate", "example:hypersurface-F5", "--window", "-4,-4..-3,-3", "--json")
    assert code == 0
    data = json.loads(out.out)
    assert data["stable_fraction"] == 1.0
    assert {(tuple(e["mu"]), e["p"]): e["dim"] for e in data["entries"]}[((-3, -3), 4)] == 8


def test_usage_errors(capsys, tmp_path, hyper):
    assert run(capsys, "info", str(tmp_path / "missing.mgs"))[0] == 1
    bad = tmp_path / "bad.mgs"
    bad.write_text("ring { k = 1; n = [2] }")
    code, out = run(capsys, "info", str(bad))
    assert code == 1 and "field" in out.err
    assert run(capsys, "star", hyper, "--window", "1,1..0,0")[0] == 1
    assert run(capsys, "lc", hyper, "--ideal", "B7")[0] == 1
    assert run(capsys, "info", "example:nope")[0] == 1


def test_json_is_byte_stable(capsys, hyper):
    outs = [run(capsys, "star", hyper, "--ideal", "B1", "--json")[1].out for _ in range(2)]
    assert outs[0] == outs[1]
    outs = [run(capsys, "verify", "cohb", hyper, "--json")[1].out for _ in range(2)]
    assert outs[0] == outs[1]


def test_entry_point_runs():
    proc = subprocess.run([sys.executable, "-m", "mgs", "info", "example:hypersurface-F2"], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert "(3, 3)" in proc.stdout or "[3, 3]" in proc.stdout


# -- pictures --------------------------------------------------------------------------


def _cells(text):
    return "".join(text.splitlines()[:-1])


def test_render_single_corner():
    text = render_staircase(star([(-3, -5)]))
    rows = {int(line.split()[0]): line.split()[1:] for line in text.splitlines()[:-1]}
    xs = list(range(-5, 3))
    assert rows[-5][xs.index(-3)] == "o"
    assert rows[-5][xs.index(-4)] == "#"
    assert rows[-4][xs.index(-3)] == "."
    assert _cells(text).count("o") == 1


def test_render_empty_region():
    text = _cells(render_staircase(StarRegion.empty(2)))
    assert "#" not in text and "o" not in text
    assert "+" in text and "|" in text


def test_render_two_corners():
    text = render_staircase(star([(-3, -1), (-1, -3)]))
    assert _cells(text).count("o") == 2
    ray = render_staircase(StarRegion(2, [(-3, INF), (INF, -5)]))
    assert "^" in ray and ">" in ray


def test_render_is_deterministic_svg():
    r = star([(-3, -5)])
    a, b = render_staircase(r, "svg"), render_staircase(r, "svg")
    assert a == b and a.count("<circle") == 1


def test_render_table():
    R = free_module(Ring.make((1, 1)))
    t = local_cohomology_dims(R, [0, 1], Window((-3, -3), (0, 0)))
    text = render_staircase(t)
    assert "1" in text


def test_render_needs_two_blocks():
    with pytest.raises(RenderError, match="--json"):
        render_staircase(star([(0, 0, 0)]))
