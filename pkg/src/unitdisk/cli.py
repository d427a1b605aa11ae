"""``unitdisk`` command line: generate, sssp, separate, render, report."""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import datagen
from .delaunay import build_delaunay
from .errors import IndexOutOfRange, ParseError, UnitDiskError
from .geom import normalize
from .oracle import oracle_separation, oracle_sssp
from .sep_compact import separation_compact
from .sep_generic import separation_generic, witness_cycle
from .sssp import build_explicit_graph, sssp_delaunay, sssp_explicit_bfs, sssp_grid

CSV_HEADER = ["algorithm", "instance", "n", "preprocess_s", "per_root_s", "roots", "answer_digest"]
VERIFY_SSSP_MAX_N = 2000
ORACLE_SEP_MAX_N = 14

EXIT_ERROR = 1
EXIT_MISMATCH = 3

_MASK = (1 << 64) - 1


def splitmix64(x: np.ndarray) -> np.ndarray:
    z = np.asarray(x, dtype=np.uint64) + np.uint64(0x9E3779B97F4A7C15)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
    return z ^ (z >> np.uint64(31))


def digest_values(values) -> int:
    """Order-independent 64-bit digest of a multiset of integers >= -1."""
    v = np.asarray(values, dtype=np.int64).ravel() + 1
    with np.errstate(over="ignore"):
        h = splitmix64(v.astype(np.uint64))
    return int(h.sum(dtype=np.uint64)) & _MASK


def combine_digests(digests) -> int:
    return sum(digests) & _MASK


def format_digest(d: int) -> str:
    return f"{d:016x}"


def choose_roots(n: int, count: int, seed: int) -> list[int]:
    if n == 0:
        return []
    rng = datagen.rng_for(seed, datagen.STREAM_ROOTS)
    return sorted(int(r) for r in rng.choice(n, size=min(count, n), replace=False))


def parse_root_list(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad root list {text!r}") from None


# -- sssp workers ------------------------------------------------------------

_WORKER = {}


def _prepare(points, algorithm):
    if algorithm == "delaunay":
        return build_delaunay(points)
    if algorithm == "bfs":
        return build_explicit_graph(points)
    return None


def _run_root(points, algorithm, pre, root, hints):
    if algorithm == "delaunay":
        return sssp_delaunay(points, pre, root, hints=hints)
    if algorithm == "bfs":
        return sssp_explicit_bfs(points, root, graph=pre)
    return sssp_grid(points, root)


def _worker_init(points, algorithm, hints):
    _WORKER.update(points=points, algorithm=algorithm, hints=hints,
                   pre=_prepare(points, algorithm))


def _worker_root(root):
    w = _WORKER
    r = _run_root(w["points"], w["algorithm"], w["pre"], root, w["hints"])
    return r.dist, r.parent


def run_sssp(points, algorithm, roots, hints=True, parallel=0):
    """Returns ``(preprocess_s, per_root_s, results)``; results are (dist, parent) per root."""
    t0 = time.perf_counter()
    pre = _prepare(points, algorithm)
    t1 = time.perf_counter()
    if parallel and parallel > 1 and len(roots) > 1:
        with ProcessPoolExecutor(parallel, initializer=_worker_init,
                                 initargs=(points, algorithm, hints)) as pool:
            results = list(pool.map(_worker_root, roots))
    else:
        results = []
        for r in roots:
            res = _run_root(points, algorithm, pre, r, hints)
            results.append((res.dist, res.parent))
    t2 = time.perf_counter()
    per_root = (t2 - t1) / len(roots) if roots else 0.0
    return t1 - t0, per_root, results


# -- output helpers ------------------------------------------------------------

def csv_text(rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for row in rows:
        w.writerow([row[k] for k in CSV_HEADER])
    return buf.getvalue()


def _emit_csv(rows, out):
    text = csv_text(rows)
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def _record(algorithm, instance, n, pre, per_root, roots, digest):
    return {"algorithm": algorithm, "instance": instance, "n": n,
            "preprocess_s": f"{pre:.6f}", "per_root_s": f"{per_root:.6f}",
            "roots": roots, "answer_digest": format_digest(digest)}


# -- commands ------------------------------------------------------------------

def cmd_generate(args) -> int:
    spec = datagen.make_domain(args.style, args.width, args.height,
                               hole_width=args.hole_width, hole_height=args.hole_height)
    inst = datagen.generate(spec, args.n, args.seed)
    if args.clutter:
        inst = datagen.add_strip_clutter(inst, args.clutter, args.seed)
    if inst.terminal_covered:
        print("warning: a disk covers s or t; separation is undefined on this instance",
              file=sys.stderr)
    text = datagen.format_instance(inst.points, inst.s, inst.t, datagen.instance_comments(inst))
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_sssp(args) -> int:
    inst = datagen.read_instance(args.instance)
    n = inst.n
    if args.root_list is not None:
        roots = args.root_list
        for r in roots:
            if not 0 <= r < n:
                raise IndexOutOfRange(f"root {r} not in 0..{n - 1}")
    else:
        roots = choose_roots(n, args.roots, args.root_seed)
    pts = np.asarray(inst.points)
    pre, per_root, results = run_sssp(pts, args.algorithm, roots, hints=not args.no_hints,
                                      parallel=args.parallel_roots)
    digest = combine_digests(digest_values(d) for d, _ in results)
    status = 0
    if args.verify:
        if n > VERIFY_SSSP_MAX_N:
            print(f"verify: skipped, n={n} exceeds {VERIFY_SSSP_MAX_N}", file=sys.stderr)
        else:
            bad = [r for r, (d, _) in zip(roots, results)
                   if not np.array_equal(d, oracle_sssp(pts, r).dist)]
            if bad:
                print(f"verify: FAILED for roots {bad}", file=sys.stderr)
                status = EXIT_MISMATCH
            else:
                print(f"verify: ok ({len(roots)} roots)", file=sys.stderr)
    if args.dump:
        payload = {"kind": "sssp", "algorithm": args.algorithm, "roots": [
            {"root": r, "dist": d.tolist(), "parent": p.tolist()}
            for r, (d, p) in zip(roots, results)]}
        Path(args.dump).write_text(json.dumps(payload) + "\n")
    _emit_csv([_record(args.algorithm, args.instance, n, pre, per_root, len(roots), digest)],
              args.out)
    return status


def _separate(algorithm, inst, early_exit, dt=None):
    if algorithm == "compact":
        return separation_compact(inst, dt=dt, early_exit=early_exit)
    return separation_generic(inst, dt=dt)


def cmd_separate(args) -> int:
    raw = datagen.read_instance(args.instance)
    inst = normalize(raw.points, raw.s, raw.t)
    t0 = time.perf_counter()
    dt = build_delaunay(inst.points)
    t1 = time.perf_counter()
    ans = _separate(args.algorithm, inst, not args.no_early_exit, dt)
    t2 = time.perf_counter()
    print(f"size: {ans.size if ans.feasible else 'INFEASIBLE'}")
    if ans.feasible:
        print(f"witness: root {ans.root}, edge {ans.p}-{ans.q}")
    print(f"seconds: {t2 - t0:.6f}")
    status = 0
    if args.verify:
        other = "generic" if args.algorithm == "compact" else "compact"
        checks = [(other, _separate(other, inst, True, dt).size)]
        if inst.n <= ORACLE_SEP_MAX_N:
            checks.append(("oracle", oracle_separation(inst.points, inst.tau).size))
        for name, size in checks:
            if size != ans.size:
                print(f"verify: {name} gives {size}, {args.algorithm} gives {ans.size}",
                      file=sys.stderr)
                status = EXIT_MISMATCH
        if status == 0:
            print(f"verify: ok ({', '.join(name for name, _ in checks)})", file=sys.stderr)
    if args.result:
        payload = {"kind": "separation", "algorithm": args.algorithm, "size": ans.size,
                   "root": ans.root, "p": ans.p, "q": ans.q,
                   "cycle": witness_cycle(inst.points, ans, dt)}
        Path(args.result).write_text(json.dumps(payload) + "\n")
    digest = digest_values([ans.size if ans.feasible else -1])
    per_root = (t2 - t1) / inst.n if inst.n else 0.0
    _emit_csv([_record(args.algorithm, args.instance, inst.n, t1 - t0, per_root, inst.n, digest)],
              args.out)
    return status


def load_result(path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, ValueError) as exc:
        raise ParseError(f"{path}: {exc}") from None
    if not isinstance(data, dict) or data.get("kind") not in ("sssp", "separation"):
        raise ParseError(f"{path}: not an sssp or separation result")
    return data


def cmd_render(args) -> int:
    from .plotting import render_scene

    inst = datagen.read_instance(args.instance)
    parent = cycle = None
    title = None
    if args.result:
        data = load_result(args.result)
        try:
            if data["kind"] == "sssp":
                entry = data["roots"][args.root_index]
                parent = np.asarray(entry["parent"], dtype=np.int64)
                title = f"shortest-path tree, root {entry['root']}"
            else:
                cycle = [int(v) for v in data["cycle"]]
                title = f"separating walk, size {data['size']}" if cycle else "infeasible"
        except (KeyError, IndexError, TypeError, ValueError) as exc:
            raise ParseError(f"{args.result}: malformed result ({exc})") from None
        used = parent if parent is not None else np.asarray(cycle, dtype=np.int64)
        too_long = parent is not None and len(parent) != inst.n
        if too_long or (len(used) and (used.max() >= inst.n or used.min() < -1)):
            raise ParseError(f"{args.result}: does not match instance with {inst.n} points")
    render_scene(args.out, inst.points, inst.s, inst.t, tree_parent=parent, cycle=cycle,
                 disks=args.disks, title=title)
    return 0


def cmd_report(args) -> int:
    """Time SSSP algorithms over a range of sizes at constant density."""
    from .plotting import plot_timings

    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    rows = []
    for n in args.sizes:
        scale = (n / args.base_n) ** 0.5
        spec = datagen.make_domain(args.style, args.width * scale, args.height * scale)
        inst = datagen.generate(spec, n, args.seed)
        pts = np.asarray(inst.points)
        roots = choose_roots(n, args.roots, args.seed)
        for alg in args.algorithms:
            pre, per_root, results = run_sssp(pts, alg, roots)
            digest = combine_digests(digest_values(d) for d, _ in results)
            rows.append(_record(alg, f"{args.style}-n{n}-seed{args.seed}", n, pre, per_root,
                                len(roots), digest))
            print(f"{alg:9s} n={n:7d} per_root={per_root:.4f}s", file=sys.stderr)
    (outdir / "report.csv").write_text(csv_text(rows))
    plot_timings(outdir / "report.png", rows)
    plot_timings(outdir / "report.svg", rows)
    return 0


# -- parser --------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="unitdisk", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write a random instance file")
    g.add_argument("--style", choices=datagen.STYLES, default="none")
    g.add_argument("--width", type=float, default=4.0)
    g.add_argument("--height", type=float, default=1.0)
    g.add_argument("--hole-width", type=float)
    g.add_argument("--hole-height", type=float)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--clutter", type=int, default=0,
                   help="extra points in a width-1 strip around the st axis")
    g.add_argument("--out")
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("sssp", help="time shortest-path trees from several roots")
    s.add_argument("instance")
    s.add_argument("--algorithm", choices=("delaunay", "bfs", "grid"), default="delaunay")
    s.add_argument("--roots", type=int, default=50, help="number of random roots")
    s.add_argument("--root-list", type=parse_root_list, help="explicit roots, e.g. 0,4,9")
    s.add_argument("--root-seed", type=int, default=0)
    s.add_argument("--no-hints", action="store_true")
    s.add_argument("--verify", action="store_true")
    s.add_argument("--dump", help="JSON file with dist and parent per root")
    s.add_argument("--parallel-roots", type=int, default=0, metavar="WORKERS")
    s.add_argument("--out", help="CSV path (default stdout)")
    s.set_defaults(func=cmd_sssp)

    c = sub.add_parser("separate", help="minimum separating disk set")
    c.add_argument("instance")
    c.add_argument("--algorithm", choices=("compact", "generic"), default="compact")
    c.add_argument("--no-early-exit", action="store_true")
    c.add_argument("--verify", action="store_true")
    c.add_argument("--result", help="JSON file with the witness walk")
    c.add_argument("--out", help="CSV path (default stdout)")
    c.set_defaults(func=cmd_separate)

    r = sub.add_parser("render", help="SVG of an instance and an optional result")
    r.add_argument("instance")
    r.add_argument("result", nargs="?")
    r.add_argument("--out", required=True)
    r.add_argument("--disks", action="store_true")
    r.add_argument("--root-index", type=int, default=0)
    r.set_defaults(func=cmd_render)

    b = sub.add_parser("report", help="SSSP scaling table (CSV) and figure")
    b.add_argument("--outdir", required=True)
    b.add_argument("--sizes", type=int, nargs="+", default=[2500, 5000, 10000])
    b.add_argument("--base-n", type=int, default=10000)
    b.add_argument("--style", choices=datagen.STYLES, default="none")
    b.add_argument("--width", type=float, default=4.0)
    b.add_argument("--height", type=float, default=1.0)
    b.add_argument("--algorithms", nargs="+", choices=("delaunay", "bfs", "grid"),
                   default=["delaunay", "grid"])
    b.add_argument("--roots", type=int, default=5)
    b.add_argument("--seed", type=int, default=0)
    b.set_defaults(func=cmd_report)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (UnitDiskError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
