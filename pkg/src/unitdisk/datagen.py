"""Random instances in rectangles with rectangular holes, and the text
instance format.

The outer rectangle is ``[0, width] x [0, height]``. Hole proportions are a
fixed rule of this package (overridable per call):

* ``small1``: one centred hole of ``width/8 x height/8``
* ``large1``: one centred hole of ``width/2 x height/2``
* ``small4``: four ``width/8 x height/8`` holes centred at
  ``(+-width/4, +-height/4)`` from the centre
* ``large4``: four ``width/4 x height/4`` holes at the same centres

``s`` sits at the centre of the first hole (the top-left one for four
holes; the domain centre when there are none) and ``t`` one unit above the
outer rectangle, vertically above ``s``.

Randomness comes from numpy's PCG64 seeded through ``SeedSequence(seed)``;
independent streams are spawned with fixed spawn keys (see ``STREAM_*``).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidDimensions, ParseError
from .geom import as_points

STYLES = ("none", "small1", "large1", "small4", "large4")

STREAM_POINTS = 0
STREAM_CLUTTER = 1
STREAM_ROOTS = 2


def rng_for(seed: int, stream: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(seed, spawn_key=(stream,))))


@dataclass(frozen=True)
class Hole:
    x0: float
    y0: float
    x1: float
    y1: float

    @property
    def center(self) -> tuple[float, float]:
        return ((self.x0 + self.x1) / 2, (self.y0 + self.y1) / 2)

    def contains(self, pts: np.ndarray) -> np.ndarray:
        """Closed-rectangle membership; hole boundaries count as inside."""
        return ((pts[:, 0] >= self.x0) & (pts[:, 0] <= self.x1)
                & (pts[:, 1] >= self.y0) & (pts[:, 1] <= self.y1))


@dataclass(frozen=True)
class DomainSpec:
    width: float
    height: float
    holes: tuple = ()
    style: str = "none"

    def contains(self, pts) -> np.ndarray:
        pts = np.asarray(pts, dtype=np.float64).reshape(-1, 2)
        ok = ((pts[:, 0] >= 0) & (pts[:, 0] <= self.width)
              & (pts[:, 1] >= 0) & (pts[:, 1] <= self.height))
        for hole in self.holes:
            ok &= ~hole.contains(pts)
        return ok

    def describe(self) -> str:
        holes = ";".join(f"{h.x0!r},{h.y0!r},{h.x1!r},{h.y1!r}" for h in self.holes)
        return f"style={self.style} width={self.width!r} height={self.height!r} holes={holes}"


def make_domain(style: str, width: float, height: float,
                hole_width: float | None = None, hole_height: float | None = None) -> DomainSpec:
    if style not in STYLES:
        raise ValueError(f"unknown domain style {style!r}; expected one of {STYLES}")
    if not (width > 0 and height > 0):
        raise InvalidDimensions("width and height must be positive")
    cx, cy = width / 2, height / 2
    if style == "none":
        return DomainSpec(width, height, (), style)
    divisor = {"small1": 8, "large1": 2, "small4": 8, "large4": 4}[style]
    hw = width / divisor if hole_width is None else hole_width
    hh = height / divisor if hole_height is None else hole_height
    if not (hw > 0 and hh > 0):
        raise InvalidDimensions("hole dimensions must be positive")
    if style in ("small1", "large1"):
        centers = [(cx, cy)]
    else:
        # top-left first: it hosts s
        centers = [(cx - width / 4, cy + height / 4), (cx + width / 4, cy + height / 4),
                   (cx - width / 4, cy - height / 4), (cx + width / 4, cy - height / 4)]
    holes = tuple(Hole(x - hw / 2, y - hh / 2, x + hw / 2, y + hh / 2) for x, y in centers)
    for h in holes:
        if not (0 < h.x0 and h.x1 < width and 0 < h.y0 and h.y1 < height):
            raise InvalidDimensions(f"hole {h} does not fit strictly inside {width}x{height}")
    for a in range(len(holes)):
        for b in range(a + 1, len(holes)):
            ha, hb = holes[a], holes[b]
            if ha.x0 < hb.x1 and hb.x0 < ha.x1 and ha.y0 < hb.y1 and hb.y0 < ha.y1:
                raise InvalidDimensions("holes overlap")
    return DomainSpec(width, height, holes, style)


@dataclass(frozen=True)
class GeneratedInstance:
    points: np.ndarray
    s: tuple[float, float]
    t: tuple[float, float]
    seed: int | None = None
    spec: DomainSpec | None = None
    comments: tuple = field(default=())

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def terminal_covered(self) -> bool:
        """True if some disk (radius 1/2) contains s or t."""
        if self.n == 0:
            return False
        for term in (self.s, self.t):
            dx = self.points[:, 0] - term[0]
            dy = self.points[:, 1] - term[1]
            if np.any(dx * dx + dy * dy <= 0.25):
                return True
        return False


def terminals_for(spec: DomainSpec) -> tuple[tuple[float, float], tuple[float, float]]:
    if spec.holes:
        sx, sy = spec.holes[0].center
    else:
        sx, sy = spec.width / 2, spec.height / 2
    return (sx, sy), (sx, spec.height + 1.0)


def _sample(rng, n, lo, hi, accept, existing=None) -> np.ndarray:
    """Rejection-sample n distinct points uniform in the box, subject to accept."""
    chosen = np.zeros((0, 2))
    seen = set() if existing is None else {tuple(p) for p in existing.tolist()}
    while len(chosen) < n:
        need = n - len(chosen)
        batch = rng.uniform(lo, hi, size=(max(16, 2 * need), 2))
        batch = batch[accept(batch)]
        keep = []
        for p in batch.tolist():
            key = (p[0], p[1])
            if key not in seen:
                seen.add(key)
                keep.append(p)
            if len(keep) == need:
                break
        if keep:
            chosen = np.concatenate([chosen, np.array(keep)])
    return chosen


def generate(spec: DomainSpec, n: int, seed: int) -> GeneratedInstance:
    if n < 0:
        raise ValueError("n must be non-negative")
    rng = rng_for(seed, STREAM_POINTS)
    pts = _sample(rng, n, (0.0, 0.0), (spec.width, spec.height), spec.contains)
    s, t = terminals_for(spec)
    return GeneratedInstance(as_points(pts), s, t, seed, spec)


def add_strip_clutter(inst: GeneratedInstance, k: int, seed: int, width: float = 1.0) -> GeneratedInstance:
    """Add k points uniform in a vertical strip of the given width centred on
    the st axis, restricted to the domain."""
    spec = inst.spec
    if spec is None:
        raise ValueError("strip clutter needs the instance's domain spec")
    rng = rng_for(seed, STREAM_CLUTTER)
    sx = inst.s[0]
    lo = (max(0.0, sx - width / 2), 0.0)
    hi = (min(spec.width, sx + width / 2), spec.height)
    extra = _sample(rng, k, lo, hi, spec.contains, existing=np.asarray(inst.points))
    pts = np.concatenate([np.asarray(inst.points).reshape(-1, 2), extra])
    note = f"clutter k={k} seed={seed} width={width!r}"
    return GeneratedInstance(as_points(pts), inst.s, inst.t, inst.seed, spec, inst.comments + (note,))


# -- instance files ------------------------------------------------------------

def format_instance(points, s, t, comments=()) -> str:
    pts = np.asarray(points, dtype=np.float64).reshape(-1, 2)
    lines = ["udg 1"]
    lines += [f"# {c}" for c in comments]
    lines.append(f"n {len(pts)}")
    lines.append(f"s {float(s[0])!r} {float(s[1])!r}")
    lines.append(f"t {float(t[0])!r} {float(t[1])!r}")
    lines += [f"{x!r} {y!r}" for x, y in pts.tolist()]
    return "\n".join(lines) + "\n"


def instance_comments(inst: GeneratedInstance) -> tuple:
    out = []
    if inst.seed is not None:
        out.append(f"seed={inst.seed}")
    if inst.spec is not None:
        out.append(f"spec {inst.spec.describe()}")
    return tuple(out) + tuple(inst.comments)


def write_instance(path, inst: GeneratedInstance) -> None:
    with open(path, "w", encoding="ascii", newline="\n") as fh:
        fh.write(format_instance(inst.points, inst.s, inst.t, instance_comments(inst)))


def parse_instance(text: str, source: str = "<string>") -> GeneratedInstance:
    rows = []
    comments = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            comments.append(line[1:].strip())
            continue
        rows.append((lineno, line.split()))
    if not rows or rows[0][1] != ["udg", "1"]:
        raise ParseError(f"{source}: missing 'udg 1' header")

    def field(pos, tag, arity):
        if len(rows) <= pos:
            raise ParseError(f"{source}: missing '{tag}' line")
        lineno, tok = rows[pos]
        if tok[0] != tag or len(tok) != arity + 1:
            raise ParseError(f"{source}:{lineno}: expected '{tag}' with {arity} value(s)")
        return lineno, tok[1:]

    try:
        _, (count,) = field(1, "n", 1)
        n = int(count)
        _, s = field(2, "s", 2)
        _, t = field(3, "t", 2)
        s = (float(s[0]), float(s[1]))
        t = (float(t[0]), float(t[1]))
    except ValueError as exc:
        if isinstance(exc, ParseError):
            raise
        raise ParseError(f"{source}: {exc}") from None
    body = rows[4:]
    if len(body) != n:
        raise ParseError(f"{source}: header says {n} points, found {len(body)}")
    pts = []
    for lineno, tok in body:
        if len(tok) != 2:
            raise ParseError(f"{source}:{lineno}: expected two coordinates")
        try:
            x, y = float(tok[0]), float(tok[1])
        except ValueError:
            raise ParseError(f"{source}:{lineno}: bad coordinate") from None
        if not (math.isfinite(x) and math.isfinite(y)):
            raise ParseError(f"{source}:{lineno}: non-finite coordinate")
        pts.append((x, y))
    seed = None
    for c in comments:
        if c.startswith("seed="):
            try:
                seed = int(c[5:].split()[0])
            except ValueError:
                pass
    return GeneratedInstance(as_points(np.array(pts).reshape(-1, 2)), s, t, seed, None, tuple(comments))


def read_instance(path) -> GeneratedInstance:
    try:
        with open(path, encoding="ascii") as fh:
            text = fh.read()
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"{path}: {exc}") from None
    return parse_instance(text, str(path))
