import json

import pytest

from ellsurf import cli, fixtures
from ellsurf.arith import Poly2
from ellsurf.fibration import GenerationReport

x, y = Poly2.x(), Poly2.y()
FAST = ["--t-height", "12", "--k-max", "3", "--search-height", "30", "--threads", "1"]


def run(argv, capsys):
    code = cli.main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def _write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def test_analyze_curve_fixture(capsys):
    code, out, _ = run(["analyze-curve", "fixture:nodal"], capsys)
    row = json.loads(out)
    assert code == 0 and row["degree"] == 6 and row["reduced"]
    assert any(s["point"] == ["0/1", "0/1", "1/1"] for s in row["singular_points"])


def test_analyze_non_reduced_exit_3(tmp_path, capsys):
    path = _write(tmp_path, "c.json", {"curve": ((x - y) ** 2 * (x ** 4 + y ** 4 - 1)).to_json()})
    code, out, err = run(["analyze-curve", path], capsys)
    assert code == 3 and out == ""
    assert json.loads(err)["degeneracy"]["kind"] == "multiple components"


def test_rational_fibration_exit_3(tmp_path, capsys):
    f = x ** 4 - y ** 4 + x ** 6 + 2 * y ** 6
    path = _write(tmp_path, "s.json", {"curve": f.to_json(), "base_point": ["0/1", "0/1"]})
    code, _, err = run(["build-fibration", path], capsys)
    assert code == 3 and json.loads(err)["degeneracy"]["kind"] == "rational fibration"


def test_vertex_cubic_exit_3(tmp_path, capsys):
    data = fixtures.v1_model().to_json()
    data["c"] = "0/1"
    data["point"] = ["1/1", "0/1", "0/1", "0/1"]
    code, _, err = run(["fano-demo", _write(tmp_path, "m.json", data)], capsys)
    assert code == 3 and json.loads(err)["degeneracy"]["kind"] == "vertex-containing cubic"


@pytest.mark.parametrize("payload", ["not json", json.dumps({"curve": [[0, 0, 0.5]]}),
                                     json.dumps({"curve": [[6, 0, "1/1"]]})])
def test_schema_errors_exit_2(tmp_path, capsys, payload):
    p = tmp_path / "bad.json"
    p.write_text(payload)
    code, out, err = run(["build-fibration", str(p)], capsys)
    assert code == 2 and out == "" and err


def test_bad_flags_exit_2(capsys):
    assert run(["generate-points", "fixture:nodal", "--k-max", "0"], capsys)[0] == 2
    assert run(["no-such-command"], capsys)[0] == 2
    assert run(["verify", "fixture:nodal"], capsys)[0] == 2


def test_six_lines_square(capsys):
    code, out, _ = run(["six-lines", "fixture:six-square"], capsys)
    row = json.loads(out)
    assert code == 0 and row["triple_points"] == 4 and row["double_points"] == 3


def test_find_multisections_rows(capsys):
    code, out, _ = run(["find-multisections", "fixture:nodal", "--search-height", "20"], capsys)
    rows = [json.loads(l) for l in out.splitlines()]
    assert code == 0 and rows
    assert all(r["witness_disc_t"] != "0/1" for r in rows)


def test_generate_then_verify(tmp_path, capsys):
    pts = tmp_path / "pts.jsonl"
    svg = tmp_path / "plot.svg"
    code, _, _ = run(["generate-points", "fixture:nodal", *FAST, "--out", str(pts), "--svg", str(svg)], capsys)
    assert code == 0 and svg.read_text().startswith("<svg")
    rows = [json.loads(l) for l in pts.read_text().splitlines()]
    assert "report" in rows[-1] and len(rows) > 1
    surf = _write(tmp_path, "surf.json", {"curve": fixtures.NODAL_SEXTIC.to_json()})
    code, out, _ = run(["verify", surf, str(pts)], capsys)
    assert code == 0 and json.loads(out) == {"checked": len(rows) - 1, "violations": 0}


def test_verify_flags_violation(tmp_path, capsys):
    pts = tmp_path / "pts.jsonl"
    run(["generate-points", "fixture:nodal", *FAST, "--out", str(pts)], capsys)
    lines = pts.read_text().splitlines()
    row = json.loads(lines[0])
    row["w"] = "123456/1"
    lines[0] = json.dumps(row)
    pts.write_text("\n".join(lines) + "\n")
    code, out, err = run(["verify", "fixture:nodal", str(pts)], capsys)
    assert code == 1 and json.loads(out)["violations"] == 1 and "violation" in err


def test_six_lines_generate_verify(tmp_path, capsys):
    pts = tmp_path / "six.jsonl"
    code, _, _ = run(["six-lines-generate", "fixture:six-generic", *FAST, "--out", str(pts)], capsys)
    assert code == 0
    code, out, _ = run(["verify", "fixture:six-generic", str(pts)], capsys)
    assert code == 0 and json.loads(out)["violations"] == 0 and json.loads(out)["checked"] > 0


def test_byte_identical_across_runs_and_threads(tmp_path, capsys):
    outs = []
    for threads in ("1", "1", "2"):
        p = tmp_path / f"o{len(outs)}.jsonl"
        args = ["generate-points", "fixture:nodal", "--t-height", "15", "--k-max", "4",
                "--threads", threads, "--out", str(p)]
        assert run(args, capsys)[0] == 0
        outs.append(p.read_bytes())
    assert outs[0] == outs[1] == outs[2]


def test_overflow_with_no_points_exit_4(monkeypatch, capsys):
    def fake(fib, m, t_height, k_max, *rest):
        r = GenerationReport(t_height, k_max, fibers_visited=3, fibers_with_lifts=1, overflow_fibers=1)
        return [], r

    monkeypatch.setattr(cli, "generate_points", fake)
    code, out, _ = run(["generate-points", "fixture:nodal", *FAST], capsys)
    assert code == 4 and json.loads(out)["report"]["overflow_fibers"] == 1


def test_tiny_height_cap_counts_overflow(capsys):
    code, out, _ = run(["generate-points", "fixture:nodal", "--t-height", "6", "--height-cap-bits", "4",
                        "--threads", "1"], capsys)
    rep = json.loads(out.splitlines()[-1])["report"]
    assert code == 0 and rep["overflow_fibers"] >= 1


def test_fano_demo_and_verify(tmp_path, capsys):
    pts = tmp_path / "v1.jsonl"
    code, _, _ = run(["fano-demo", "--t-height", "20", "--threads", "1", "--out", str(pts)], capsys)
    assert code == 0
    rep = json.loads(pts.read_text().splitlines()[-1])["report"]
    assert rep["family_dimension"] == 3 and rep["disc_at_point"] != "0/1"
    code, out, _ = run(["verify", "fixture:v1", str(pts)], capsys)
    assert code == 0 and json.loads(out)["violations"] == 0
