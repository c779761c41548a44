import json
import math
from itertools import combinations
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

from diversity import DiscreteSphericalMeasure, DiversityTable, HPolytope, kernel_from_measure, l1_measure
from diversity.cli import main

FIXTURES = Path(__file__).parent / "fixtures"
R = math.sqrt(0.5)


@pytest.fixture
def write(tmp_path):
    def _write(name, payload):
        p = tmp_path / name
        p.write_text(payload if isinstance(payload, str) else json.dumps(payload))
        return str(p)

    return _write


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


class TestCompute:
    def test_l1(self, capsys, write):
        code, out, _ = run(capsys, "compute", "--spec", write("s.json", {"type": "l1"}),
                           "--points", write("p.json", {"dim": 2, "points": [[0, 0], [1, 2]]}))
        assert code == 0 and out.strip() == "3"

    def test_zonotope_triangle(self, capsys, write):
        spec = write("s.json", {"type": "zonotope", "directions": [[1, 0], [0, 1]]})
        pts = write("p.json", {"dim": 2, "points": [[0, 0], [1, 0], [0, 1]]})
        code, out, _ = run(capsys, "compute", "--spec", spec, "--points", pts)
        assert code == 0 and out.strip() == "2"

    def test_empty(self, capsys, write):
        code, out, _ = run(capsys, "compute", "--spec", write("s.json", {"type": "circumradius"}),
                           "--points", write("p.json", {"dim": 2, "points": []}))
        assert code == 0 and out.strip() == "0"

    def test_twelve_digits(self, capsys, write):
        code, out, _ = run(capsys, "compute", "--spec", write("s.json", {"type": "circumradius"}),
                           "--points", write("p.json", {"dim": 2, "points": [[0, 0], [1, 0], [0, 1], [1, 1]]}))
        assert out.strip() == f"{math.sqrt(0.5):.12g}"

    def test_json_out(self, capsys, write, tmp_path):
        out_path = tmp_path / "o.json"
        run(capsys, "compute", "--spec", write("s.json", {"type": "l1"}),
            "--points", write("p.json", {"dim": 2, "points": [[0, 0], [1, 2]]}), "--out", str(out_path))
        assert json.loads(out_path.read_text())["value"] == 3

    def test_parse_error(self, capsys, write):
        code, _, err = run(capsys, "compute", "--spec", write("s.json", "{not json"), "--points", write("p.json", "{}"))
        assert code == 2 and "error" in err

    def test_unknown_type(self, capsys, write):
        code, _, _ = run(capsys, "compute", "--spec", write("s.json", {"type": "nope"}),
                         "--points", write("p.json", {"dim": 2, "points": []}))
        assert code == 2

    def test_missing_file(self, capsys):
        assert run(capsys, "compute", "--spec", "/does/not/exist", "--points", "/nor/this")[0] == 2

    def test_missing_flag(self, capsys, write):
        assert run(capsys, "compute", "--spec", write("s.json", {"type": "l1"}))[0] == 2

    def test_dimension_mismatch(self, capsys, write):
        spec = write("s.json", {"type": "minkowski", "kernel": HPolytope.linf_ball(2).to_dict()})
        pts = write("p.json", {"dim": 3, "points": [[0, 0, 0], [1, 1, 1]]})
        assert run(capsys, "compute", "--spec", spec, "--points", pts)[0] == 3

    def test_deterministic(self, capsys, write):
        args = ["compute", "--spec", write("s.json", {"type": "mean-width", "sampler": {"dim": 2, "count": 50}}),
                "--points", write("p.json", {"dim": 2, "points": [[0, 0], [1, 3], [-2, 1]]})]
        assert run(capsys, *args) == run(capsys, *args)


class TestCheck:
    def test_circumradius_sublinear(self, capsys, write):
        code, out, _ = run(capsys, "check", "--spec", write("s.json", {"type": "circumradius"}),
                           "--suite", "sublinear", "--trials", "30")
        assert code == 0 and json.loads(out)[0]["pass"]

    def test_circumradius_linear_fails(self, capsys, write):
        code, out, _ = run(capsys, "check", "--spec", write("s.json", {"type": "circumradius"}),
                           "--suite", "linear", "--trials", "30")
        report = json.loads(out)[0]
        assert code == 1 and not report["pass"]
        assert report["witness"]["A"] == [[0.0, 0.0], [1.0, 0.0]]
        assert report["witness"]["B"] == [[0.0, 0.0], [0.0, 1.0]]

    def test_l1_all(self, capsys, write):
        code, out, _ = run(capsys, "check", "--spec", write("s.json", {"type": "l1"}), "--suite", "all", "--trials", "30")
        assert code == 0 and all(r["pass"] for r in json.loads(out))

    def test_unknown_suite(self, capsys, write):
        assert run(capsys, "check", "--spec", write("s.json", {"type": "l1"}), "--suite", "bogus")[0] == 2

    def test_seeded_determinism(self, capsys, write):
        args = ["check", "--spec", write("s.json", {"type": "diameter", "norm": "linf"}),
                "--suite", "axioms", "--seed", "5", "--trials", "20"]
        assert run(capsys, *args)[1] == run(capsys, *args)[1]


class TestTables:
    def test_two_point_table(self, capsys, write):
        t = write("t.json", {"ground": ["a", "b"], "values": [{"subset": ["a", "b"], "value": 1.0}]})
        code, out, _ = run(capsys, "negtype", "--table", t)
        assert code == 0 and json.loads(out)["decision"] is True

    def test_restrict_then_negtype(self, capsys, write, tmp_path):
        table = tmp_path / "t.json"
        pts = write("p.json", {"dim": 2, "points": [[0, 0], [1, 2], [3, 1], [-1, 1]], "labels": ["a", "b", "c", "d"]})
        code, _, _ = run(capsys, "restrict", "--spec", write("s.json", {"type": "l1"}), "--points", pts, "--out", str(table))
        assert code == 0
        assert DiversityTable.from_dict(json.loads(table.read_text())).ground == ("a", "b", "c", "d")
        code, out, _ = run(capsys, "embed-decide", "--table", str(table))
        d = json.loads(out)
        assert code == 0 and d["decision"] is True and d["linear_embeddable"] is True

    def test_failing_fixture(self, capsys):
        code, out, _ = run(capsys, "negtype", "--table", str(FIXTURES / "negtype_failing.json"))
        d = json.loads(out)
        assert code == 0 and d["decision"] is False
        x = np.array(d["certificate"])
        assert abs(x.sum()) <= 1e-10 and d["max_projected_eigenvalue"] > 0

    def test_cap(self, capsys, write):
        ground = [f"x{i}" for i in range(7)]
        vals = [{"subset": list(c), "value": 1.0} for r in range(2, 8) for c in combinations(ground, r)]
        assert run(capsys, "negtype", "--table", write("t.json", {"ground": ground, "values": vals}))[0] == 3

    def test_label_mismatch(self, capsys, write):
        pts = write("p.json", {"dim": 1, "points": [[0], [1]], "labels": ["a"]})
        assert run(capsys, "restrict", "--spec", write("s.json", {"type": "l1"}), "--points", pts)[0] == 2


class TestConvert:
    def test_triangle_kernel(self, capsys, write):
        k = write("k.json", {"normals": [[1, 0], [0, 1], [-1, -1]], "offsets": [1, 1, 1]})
        code, out, _ = run(capsys, "convert", "kernel-to-measure", "--input", k)
        nu = DiscreteSphericalMeasure.from_dict(json.loads(out))
        assert code == 0
        np.testing.assert_allclose(nu.masses, [1 / 3, 1 / 3, math.sqrt(2) / 3], atol=1e-12)

    def test_l1_measure_not_extremal(self, capsys, write):
        # the four axis atoms are affinely dependent in the plane
        code, _, err = run(capsys, "convert", "measure-to-kernel", "--input", write("m.json", l1_measure(2).to_dict()))
        assert code == 4 and "not extremal" in err

    def test_dependent_normals(self, capsys, write):
        k = write("k.json", {"normals": [[1, 0], [-1, 0], [2, 0]], "offsets": [1, 1, 1]})
        assert run(capsys, "convert", "kernel-to-measure", "--input", k)[0] == 4

    def test_parallel_normals(self, capsys, write):
        k = write("k.json", {"normals": [[1, 0], [2, 0]], "offsets": [1, 1]})
        assert run(capsys, "convert", "kernel-to-measure", "--input", k)[0] == 4

    def test_round_trip_atoms(self, capsys, write, tmp_path):
        nu = DiscreteSphericalMeasure([[1, 0], [0, 1], [-R, -R]], [1, 1, math.sqrt(2)])
        kpath = tmp_path / "k.json"
        run(capsys, "convert", "measure-to-kernel", "--input", write("m.json", nu.to_dict()), "--out", str(kpath))
        K = HPolytope.from_dict(json.loads(kpath.read_text()))
        np.testing.assert_allclose(K.normals, kernel_from_measure(nu).normals)
        code, out, _ = run(capsys, "convert", "kernel-to-measure", "--input", str(kpath))
        back = DiscreteSphericalMeasure.from_dict(json.loads(out))
        np.testing.assert_allclose(back.directions, nu.directions, atol=1e-8)
        np.testing.assert_allclose(back.masses, nu.masses, atol=1e-8)


def test_console_entry_point(tmp_path):
    spec = tmp_path / "s.json"
    pts = tmp_path / "p.json"
    spec.write_text(json.dumps({"type": "l1"}))
    pts.write_text(json.dumps({"dim": 2, "points": [[0, 0], [1, 2]]}))
    res = subprocess.run([sys.executable, "-m", "diversity", "compute", "--spec", str(spec), "--points", str(pts)],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.strip() == "3"


def test_no_subcommand():
    with pytest.raises(SystemExit) as exc:
        main([])
    assert exc.value.code == 2
