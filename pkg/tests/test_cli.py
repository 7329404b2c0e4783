import csv
import io
import json
import subprocess
import sys

import pytest

from disjointedges import drawfile
from disjointedges.cli import main
from disjointedges.extract import CHOSEN_RATIO_FLOOR
from disjointedges.geometry import Point
from disjointedges.matching import CALIBRATED_STAB_CONSTANT


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out = capsys.readouterr()
    return code, out.out, out.err


@pytest.fixture
def files(tmp_path):
    def make(name, *argv):
        path = tmp_path / name
        assert main(["generate", *map(str, argv), "--out", str(path)]) == 0
        return str(path)
    return make


def write_doc(tmp_path, name, vertices):
    path = tmp_path / name
    path.write_text(json.dumps({"format_version": 1, "vertices": vertices}))
    return str(path)


def test_generate_convex_nine(capsys):
    code, out, _ = run(capsys, "generate", "--family", "convex", "--n", 9)
    assert code == 0
    d = drawfile.loads(out)
    assert d.N == 9 and all(p.y == p.x * p.x for p in d.points)


def test_generate_is_byte_stable(files):
    a = files("a.json", "--family", "random", "--n", 20, "--seed", 7)
    b = files("b.json", "--family", "random", "--n", 20, "--seed", 7)
    assert open(a, "rb").read() == open(b, "rb").read()


@pytest.mark.parametrize("family", ["convex", "random", "polyline"])
@pytest.mark.parametrize("seed", [0, 5])
def test_generate_then_validate(capsys, files, family, seed):
    path = files("d.json", "--family", family, "--n", 10, "--seed", seed, "--bends", 2)
    code, out, _ = run(capsys, "validate", path)
    assert code == 0 and json.loads(out)["ok"] is True


def test_generate_usage_errors(capsys):
    assert run(capsys, "generate", "--family", "convex", "--n", 2)[0] == 2
    assert run(capsys, "generate", "--family", "spiral", "--n", 9)[0] == 2
    assert run(capsys)[0] == 2


def test_validate_exit_codes(capsys, tmp_path):
    line = write_doc(tmp_path, "line.json", [{"id": k, "x": k, "y": k} for k in range(3)])
    code, out, _ = run(capsys, "validate", line)
    assert code == 1 and "VertexOnArcInterior" in out
    dup = write_doc(tmp_path, "dup.json", [{"id": "a", "x": 0, "y": 0}, {"id": "a", "x": 1, "y": 0},
                                           {"id": "b", "x": 0, "y": 1}])
    assert run(capsys, "validate", dup)[0] == 2
    assert run(capsys, "validate", str(tmp_path / "missing.json"))[0] == 2
    (tmp_path / "junk.json").write_text("{")
    assert run(capsys, "validate", str(tmp_path / "junk.json"))[0] == 2


def test_extract(capsys, files, tmp_path):
    code, out, _ = run(capsys, "extract", files("c9.json", "--family", "convex", "--n", 9))
    rep = json.loads(out)
    assert code == 0 and len(rep["chosen"]) == 4 and rep["verified_disjoint"] is True
    tri = write_doc(tmp_path, "tri.json", [{"id": "a", "x": 0, "y": 0}, {"id": "b", "x": 3, "y": 1},
                                           {"id": "c", "x": 1, "y": 3}])
    code, out, _ = run(capsys, "extract", tri)
    assert code == 0 and len(json.loads(out)["chosen"]) == 1


def test_extract_random_batch(capsys, files):
    for seed in range(6):
        code, out, _ = run(capsys, "extract", files("r.json", "--family", "random", "--n", 25, "--seed", seed))
        rep = json.loads(out)
        assert code == 0 and len(rep["chosen"]) >= rep["turan_bound"]


def test_extract_options(capsys, files):
    path = files("p.json", "--family", "polyline", "--n", 11, "--seed", 1)
    code, out, _ = run(capsys, "extract", path, "--multiplier", "3/2", "--timings")
    assert code == 0 and "matching" in json.loads(out)["timings"]
    assert run(capsys, "extract", path, "--multiplier", "1")[0] == 2
    assert run(capsys, "extract", path, "--multiplier", "x")[0] == 2


def test_extract_rejects_invalid(capsys, tmp_path):
    line = write_doc(tmp_path, "line.json", [{"id": k, "x": k, "y": 2 * k} for k in range(4)])
    assert run(capsys, "extract", line)[0] == 1


@pytest.mark.parametrize("N,size", [(3, 1), (4, 2), (5, 2)])
def test_oracle(capsys, files, N, size):
    code, out, _ = run(capsys, "oracle", files("c.json", "--family", "convex", "--n", N))
    assert code == 0 and json.loads(out)["size"] == size


def test_oracle_limit(capsys, files):
    path = files("c.json", "--family", "convex", "--n", 9)
    assert run(capsys, "oracle", path, "--limit", 8)[0] == 2


def test_shatter(capsys, files):
    path = files("r.json", "--family", "random", "--n", 21, "--seed", 3)
    code, out, _ = run(capsys, "shatter", path, "--m", 1, 2, 4, "--trials", 40)
    assert code == 0
    rows = list(csv.DictReader(io.StringIO(out)))
    assert {r["family"] for r in rows} == {"interior", "crossing", "mixed", "interval"}
    for r in rows:
        assert int(r["observed_max"]) <= int(r["bound"])
        if r["m"] == "1":
            assert int(r["observed_max"]) <= 2
    assert run(capsys, "shatter", path, "--m", 10**6)[0] == 2


def test_bench(capsys):
    code, out, _ = run(capsys, "bench", "--family", "random", "convex", "--n", 9, 17, "--seed", 1, 0)
    assert code == 0 and out.endswith("\n") and "\r" not in out
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [(r["family"], r["N"], r["seed"]) for r in rows] == [
        ("convex", "9", "0"), ("convex", "17", "0"),
        ("random", "9", "0"), ("random", "9", "1"), ("random", "17", "0"), ("random", "17", "1")]
    for r in rows:
        if r["family"] == "convex":
            assert int(r["chosen"]) == int(r["n"]) // 2
        assert float(r["stab_ratio"]) <= 1.2 * CALIBRATED_STAB_CONSTANT
        assert float(r["chosen_ratio"]) >= CHOSEN_RATIO_FLOOR
        assert r["verified"] == "1"


def test_bench_timings_columns(capsys):
    code, out, _ = run(capsys, "bench", "--family", "convex", "--n", 5, "--timings")
    header = out.splitlines()[0].split(",")
    assert code == 0 and "t_matching" in header and "t_verify" in header


def test_module_entry_point(tmp_path):
    out = tmp_path / "c.json"
    proc = subprocess.run([sys.executable, "-m", "disjointedges", "generate", "--family", "convex",
                           "--n", "4", "--out", str(out)], capture_output=True)
    assert proc.returncode == 0
    assert drawfile.read(str(out)).points[3] == Point(4, 16)
