"""Matplotlib scenes (SVG) and benchmark figures.

Output is byte-stable for fixed inputs: the SVG id salt is pinned and the
date metadata is dropped. Scene artists carry ``gid`` values
(``points``, ``disks``, ``tree-edges``, ``cycle``, ``st``, ``terminals``)
so the emitted groups can be located in the SVG.
"""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402
from matplotlib.collections import LineCollection, PatchCollection  # noqa: E402
from matplotlib.patches import Circle  # noqa: E402

_SVG_RC = {"svg.hashsalt": "unitdisk", "svg.fonttype": "none", "path.simplify": False}


def _finish(fig, out, fmt):
    meta = {"Date": None} if fmt == "svg" else {}
    if fmt == "pdf":
        meta = {"CreationDate": None, "ModDate": None}
    fig.savefig(out, format=fmt, metadata=meta)
    plt.close(fig)


def render_scene(out, points, s, t, tree_parent=None, cycle=None, disks: bool = False,
                 title: str | None = None) -> None:
    """Draw points, segment st and either a tree (parent array) or a closed walk."""
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    with plt.rc_context(_SVG_RC):
        fig, ax = plt.subplots(figsize=(8, 4))
        ax.set_aspect("equal")
        ax.set_axis_off()
        if disks and len(pts):
            discs = PatchCollection([Circle(tuple(p), 0.5) for p in pts],
                                    facecolor="#9ecae1", edgecolor="#6baed6", alpha=0.25, lw=0.3)
            discs.set_gid("disks")
            ax.add_collection(discs)
        if tree_parent is not None:
            par = np.asarray(tree_parent)
            child = np.nonzero(par >= 0)[0]
            segs = [[tuple(pts[c]), tuple(pts[par[c]])] for c in child]
            lc = LineCollection(segs, colors="#31a354", linewidths=0.8)
            lc.set_gid("tree-edges")
            ax.add_collection(lc)
        if cycle:
            loop = pts[list(cycle) + [cycle[0]]]
            (line,) = ax.plot(loop[:, 0], loop[:, 1], color="#de2d26", lw=1.5)
            line.set_gid("cycle")
        if len(pts):
            sc = ax.scatter(pts[:, 0], pts[:, 1], s=4, color="#252525", zorder=3)
            sc.set_gid("points")
        (st,) = ax.plot([s[0], t[0]], [s[1], t[1]], color="#3182bd", lw=1.2, ls="--")
        st.set_gid("st")
        (term,) = ax.plot([s[0], t[0]], [s[1], t[1]], ls="none", marker="o", color="#3182bd")
        term.set_gid("terminals")
        ax.annotate("s", s, xytext=(4, -10), textcoords="offset points")
        ax.annotate("t", t, xytext=(4, 4), textcoords="offset points")
        xs = np.concatenate([pts[:, 0], [s[0], t[0]]])
        ys = np.concatenate([pts[:, 1], [s[1], t[1]]])
        pad = 1.0
        ax.set_xlim(xs.min() - pad, xs.max() + pad)
        ax.set_ylim(ys.min() - pad, ys.max() + pad)
        if title:
            ax.set_title(title)
        _finish(fig, out, "svg")


def plot_timings(out, rows, x: str = "n", y: str = "per_root_s", fmt: str | None = None) -> None:
    """Log-log plot of ``y`` against ``x``, one line per algorithm."""
    fmt = fmt or str(out).rsplit(".", 1)[-1]
    with plt.rc_context(_SVG_RC):
        fig, ax = plt.subplots(figsize=(6, 4))
        for alg in sorted({r["algorithm"] for r in rows}):
            sel = sorted((float(r[x]), float(r[y])) for r in rows if r["algorithm"] == alg)
            xs, ys = zip(*sel)
            ax.plot(xs, ys, marker="o", label=alg)
        ax.set_xscale("log")
        ax.set_yscale("log")
        ax.set_xlabel(x)
        ax.set_ylabel(f"{y} (s)")
        ax.grid(True, which="both", lw=0.3)
        ax.legend()
        fig.tight_layout()
        _finish(fig, out, fmt)
