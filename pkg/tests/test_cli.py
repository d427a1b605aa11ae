import csv
import io
import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import numpy as np

from helpers import PATH3, TRIANGLE, TRIANGLE_TAU
from unitdisk.cli import CSV_HEADER, choose_roots, digest_values, main
from unitdisk.datagen import format_instance, read_instance
from unitdisk.geom import polyline_crossing_parity

SVG = "{http://www.w3.org/2000/svg}"


def write(tmp_path, name, points, s=(0.0, 0.0), t=(0.0, 5.0)):
    path = tmp_path / name
    path.write_text(format_instance(points, s, t))
    return str(path)


def run(argv, capsys):
    code = main(argv)
    out, err = capsys.readouterr()
    return code, out, err


def csv_rows(text):
    return list(csv.DictReader(io.StringIO(text[text.index("algorithm,"):])))


def svg_group(path, gid):
    root = ET.parse(path).getroot()
    for g in root.iter(f"{SVG}g"):
        if g.get("id") == gid:
            return g
    return None


def test_generate_example(tmp_path, capsys):
    out = tmp_path / "a.udg"
    argv = ["generate", "--style", "large1", "--width", "32", "--height", "8",
            "--n", "5000", "--seed", "7", "--out", str(out)]
    assert run(argv, capsys)[0] == 0
    assert read_instance(out).n == 5000
    first = out.read_bytes()
    assert run(argv, capsys)[0] == 0
    assert out.read_bytes() == first


def test_generate_empty_and_stdout(tmp_path, capsys):
    code, out, _ = run(["generate", "--n", "0"], capsys)
    assert code == 0 and "n 0" in out
    out_path = tmp_path / "e.udg"
    run(["generate", "--n", "0", "--out", str(out_path)], capsys)
    assert read_instance(out_path).n == 0


def test_generate_warns_on_covered_terminal(capsys):
    code, _, err = run(["generate", "--style", "small1", "--width", "8", "--height", "2",
                        "--n", "500"], capsys)
    assert code == 0 and "warning" in err


def test_generate_invalid_dimensions(capsys):
    code, _, err = run(["generate", "--style", "large1", "--width", "8", "--height", "2",
                        "--hole-width", "20", "--n", "5"], capsys)
    assert code != 0 and "error" in err


def test_sssp_path_dump(tmp_path, capsys):
    inst = write(tmp_path, "p.udg", PATH3)
    dump = tmp_path / "d.json"
    code, out, _ = run(["sssp", inst, "--root-list", "0", "--dump", str(dump)], capsys)
    assert code == 0
    assert json.loads(dump.read_text())["roots"][0]["dist"] == [0, 1, 2]
    (row,) = csv_rows(out)
    assert list(row) == CSV_HEADER
    assert row["algorithm"] == "delaunay" and row["roots"] == "1" and row["n"] == "3"


def test_sssp_verify_random(tmp_path, capsys):
    path = tmp_path / "r.udg"
    run(["generate", "--width", "16", "--height", "4", "--n", "500", "--seed", "3",
         "--out", str(path)], capsys)
    code, _, err = run(["sssp", str(path), "--verify"], capsys)
    assert code == 0 and "verify: ok" in err


def test_digests_agree_across_algorithms(tmp_path, capsys):
    path = tmp_path / "r.udg"
    run(["generate", "--style", "small4", "--width", "16", "--height", "4", "--n", "800",
         "--seed", "1", "--out", str(path)], capsys)
    digests = {}
    for alg in ("grid", "bfs", "delaunay"):
        code, out, _ = run(["sssp", str(path), "--algorithm", alg, "--roots", "7"], capsys)
        assert code == 0
        digests[alg] = csv_rows(out)[0]["answer_digest"]
    code, out, _ = run(["sssp", str(path), "--roots", "7", "--no-hints"], capsys)
    digests["nohints"] = csv_rows(out)[0]["answer_digest"]
    assert len(set(digests.values())) == 1


def test_parallel_roots_identical(tmp_path, capsys):
    path = tmp_path / "r.udg"
    run(["generate", "--width", "8", "--height", "2", "--n", "300", "--out", str(path)], capsys)
    seq, par = tmp_path / "seq.json", tmp_path / "par.json"
    _, out1, _ = run(["sssp", str(path), "--roots", "6", "--dump", str(seq)], capsys)
    _, out2, _ = run(["sssp", str(path), "--roots", "6", "--dump", str(par),
                      "--parallel-roots", "2"], capsys)
    assert json.loads(seq.read_text()) == json.loads(par.read_text())
    assert csv_rows(out1)[0]["answer_digest"] == csv_rows(out2)[0]["answer_digest"]


def test_sssp_errors(tmp_path, capsys):
    inst = write(tmp_path, "p.udg", PATH3)
    assert run(["sssp", inst, "--root-list", "3"], capsys)[0] != 0
    assert run(["sssp", str(tmp_path / "missing.udg")], capsys)[0] != 0
    bad = tmp_path / "bad.udg"
    bad.write_text("udg 1\nn 3\n")
    code, _, err = run(["sssp", str(bad)], capsys)
    assert code != 0 and "error" in err


def test_sssp_csv_to_file(tmp_path, capsys):
    inst = write(tmp_path, "p.udg", PATH3)
    out = tmp_path / "t.csv"
    code, stdout, _ = run(["sssp", inst, "--roots", "2", "--out", str(out)], capsys)
    assert code == 0 and stdout == ""
    assert out.read_text().splitlines()[0] == ",".join(CSV_HEADER)


def test_separate_triangle(tmp_path, capsys):
    inst = write(tmp_path, "tri.udg", TRIANGLE, t=(0.0, TRIANGLE_TAU))
    code, out, err = run(["separate", inst, "--verify"], capsys)
    assert code == 0 and "size: 3" in out and "oracle" in err
    code, out, _ = run(["separate", inst, "--algorithm", "generic", "--no-early-exit"], capsys)
    assert code == 0 and "size: 3" in out


def test_separate_one_sided(tmp_path, capsys):
    pts = np.array([[-0.8, 0.5], [-1.5, 0.6], [-1.2, 1.3]])
    code, out, _ = run(["separate", write(tmp_path, "l.udg", pts), "--verify"], capsys)
    assert code == 0 and "size: INFEASIBLE" in out


def test_separate_verify_random(tmp_path, capsys):
    path = tmp_path / "r.udg"
    run(["generate", "--style", "large1", "--width", "8", "--height", "2", "--n", "200",
         "--seed", "5", "--out", str(path)], capsys)
    code, out, err = run(["separate", str(path), "--verify"], capsys)
    assert code == 0 and "verify: ok" in err
    assert csv_rows(out)[0]["algorithm"] == "compact"


def test_separate_covered_terminal(tmp_path, capsys):
    inst = write(tmp_path, "c.udg", [(0.1, 0.1), (1.0, 1.0)])
    code, _, err = run(["separate", inst], capsys)
    assert code != 0 and "covers a terminal" in err


def test_render_tree(tmp_path, capsys):
    inst = write(tmp_path, "p.udg", PATH3, s=(0.9, -1.0), t=(0.9, 1.0))
    dump = tmp_path / "d.json"
    run(["sssp", inst, "--root-list", "0", "--dump", str(dump)], capsys)
    svg = tmp_path / "tree.svg"
    assert run(["render", inst, str(dump), "--out", str(svg), "--disks"], capsys)[0] == 0
    assert len(svg_group(svg, "tree-edges").findall(f".//{SVG}path")) == 2
    assert ET.parse(svg).getroot().get("version") == "1.1"


def test_render_triangle_cycle(tmp_path, capsys):
    inst = write(tmp_path, "tri.udg", TRIANGLE, t=(0.0, TRIANGLE_TAU))
    result = tmp_path / "s.json"
    run(["separate", inst, "--result", str(result)], capsys)
    data = json.loads(result.read_text())
    cyc = data["cycle"]
    assert len(cyc) == 3
    assert polyline_crossing_parity(TRIANGLE[cyc + cyc[:1]], TRIANGLE_TAU) == 1
    svg = tmp_path / "cycle.svg"
    assert run(["render", inst, str(result), "--out", str(svg)], capsys)[0] == 0
    path = svg_group(svg, "cycle").find(f".//{SVG}path").get("d")
    # closed walk: 3 vertices plus the return to the start
    assert path.count("L") == 3
    again = tmp_path / "again.svg"
    run(["render", inst, str(result), "--out", str(again)], capsys)
    assert again.read_bytes() == svg.read_bytes()


def test_render_empty_instance(tmp_path, capsys):
    inst = write(tmp_path, "e.udg", np.zeros((0, 2)))
    svg = tmp_path / "e.svg"
    assert run(["render", inst, "--out", str(svg)], capsys)[0] == 0
    for gid in ("st", "terminals"):
        assert svg_group(svg, gid) is not None
    for gid in ("points", "tree-edges", "cycle", "disks"):
        assert svg_group(svg, gid) is None


def test_render_bad_result(tmp_path, capsys):
    inst = write(tmp_path, "p.udg", PATH3)
    bad = tmp_path / "bad.json"
    bad.write_text("{\"kind\": \"sssp\", \"roots\": []}")
    assert run(["render", inst, str(bad), "--out", str(tmp_path / "x.svg")], capsys)[0] != 0
    bad.write_text("not json")
    assert run(["render", inst, str(bad), "--out", str(tmp_path / "x.svg")], capsys)[0] != 0


def test_report_writes_csv_and_figures(tmp_path, capsys):
    outdir = tmp_path / "rep"
    code = main(["report", "--outdir", str(outdir), "--sizes", "200", "400", "--roots", "2",
                 "--algorithms", "delaunay", "grid", "bfs"])
    capsys.readouterr()
    assert code == 0
    rows = csv_rows((outdir / "report.csv").read_text())
    assert len(rows) == 6
    assert len({r["answer_digest"] for r in rows if r["n"] == "200"}) == 1
    assert (outdir / "report.png").stat().st_size > 0
    assert (outdir / "report.svg").stat().st_size > 0


def test_digest_is_order_independent():
    v = np.array([0, 1, 1, 2, -1, 5])
    assert digest_values(v) == digest_values(v[::-1])
    assert digest_values(v) != digest_values(v + 1)


def test_root_sampling_is_seeded():
    assert choose_roots(100, 5, 1) == choose_roots(100, 5, 1)
    assert choose_roots(3, 50, 1) == [0, 1, 2]
    assert choose_roots(0, 5, 1) == []


def test_module_entry_point(tmp_path):
    out = tmp_path / "m.udg"
    proc = subprocess.run([sys.executable, "-m", "unitdisk", "generate", "--n", "3",
                           "--out", str(out)], capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert read_instance(out).n == 3
    bad = subprocess.run([sys.executable, "-m", "unitdisk", "sssp", str(tmp_path / "no")],
                         capture_output=True, text=True)
    assert bad.returncode != 0 and "error" in bad.stderr
