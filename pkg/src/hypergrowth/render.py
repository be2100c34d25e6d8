"""Poincare-disk drawings of D_n(r) for hyperbolic n (n >= 7).

Points of the disk are plain Python ``complex`` numbers. The layout puts the
base vertex at the origin and its first neighbour on the positive x-axis, then
fills in every other triangle by reflecting a placed neighbour across their
shared edge. Geometry is double precision with explicit tolerances.
"""

from __future__ import annotations

import cmath
import math
from collections import deque
from dataclasses import dataclass
from typing import Union

from .analysis import continuum_metrics
from .errors import DegeneratePoints, NumericalDegeneracy, OutputUnwritable, UnsupportedN
from .tiling import DiskComplex

PLACEMENT_TOL = 1e-9
COLLINEAR_TOL = 1e-12

# Layer 1 yellow, 2 red, 3 purple, then cycling.
PALETTE = ("#ffd92f", "#e41a1c", "#984ea3", "#377eb8", "#4daf4a", "#ff7f00")
STROKE = "#262626"
CANVAS = (1000, 1000)
VIEWBOX = (-1.05, -1.05, 2.1, 2.1)


def check_disk_point(z: complex) -> complex:
    if abs(z) >= 1.0:
        raise ValueError(f"{z} is not inside the unit disk")
    return complex(z)


def hyperbolic_distance(p: complex, q: complex) -> float:
    return 2.0 * math.atanh(abs(p - q) / abs(1 - p.conjugate() * q))


def radius_for_distance(d: float) -> float:
    """Euclidean radius of the point at hyperbolic distance ``d`` from 0."""
    return math.tanh(d / 2.0)


@dataclass(frozen=True)
class MobiusMap:
    """z -> (a w + b) / (c w + d) with w = conj(z) if ``conjugate`` else z."""

    a: complex
    b: complex
    c: complex
    d: complex
    conjugate: bool = False

    def __post_init__(self):
        if abs(self.a * self.d - self.b * self.c) == 0:
            raise ValueError("singular Mobius map")

    @classmethod
    def identity(cls) -> "MobiusMap":
        return cls(1, 0, 0, 1)

    @classmethod
    def disk_automorphism(cls, theta: float, a: complex) -> "MobiusMap":
        """z -> e^{i theta} (z - a) / (1 - conj(a) z), for |a| < 1."""
        u = cmath.exp(1j * theta)
        return cls(u, -u * a, -a.conjugate(), 1)

    def __call__(self, z: complex) -> complex:
        w = z.conjugate() if self.conjugate else z
        return (self.a * w + self.b) / (self.c * w + self.d)

    def compose(self, other: "MobiusMap") -> "MobiusMap":
        """The map ``self(other(z))``."""
        oa, ob, oc, od = other.a, other.b, other.c, other.d
        if self.conjugate:
            oa, ob, oc, od = oa.conjugate(), ob.conjugate(), oc.conjugate(), od.conjugate()
        return MobiusMap(
            self.a * oa + self.b * oc,
            self.a * ob + self.b * od,
            self.c * oa + self.d * oc,
            self.c * ob + self.d * od,
            self.conjugate != other.conjugate,
        )


@dataclass(frozen=True)
class Diameter:
    start: complex
    end: complex


@dataclass(frozen=True)
class CircularArc:
    """Arc of a circle orthogonal to the unit circle.

    ``ccw`` tells whether the (minor) arc runs counter-clockwise about
    ``center`` from ``start`` to ``end``.
    """

    center: complex
    radius: float
    start_angle: float
    end_angle: float
    start: complex
    end: complex
    ccw: bool


GeodesicArc = Union[Diameter, CircularArc]


def geodesic_between(p: complex, q: complex) -> GeodesicArc:
    if p == q:
        raise DegeneratePoints(f"cannot draw a geodesic from {p} to itself")
    cross = p.real * q.imag - p.imag * q.real
    if abs(cross) <= COLLINEAR_TOL:
        return Diameter(p, q)
    # The orthogonal circle satisfies 2 Re(z conj(c)) = |z|^2 + 1 at z = p, q.
    sp, sq = abs(p) ** 2 + 1, abs(q) ** 2 + 1
    cx = (sp * q.imag - sq * p.imag) / (2 * cross)
    cy = (p.real * sq - q.real * sp) / (2 * cross)
    c = complex(cx, cy)
    u, v = p - c, q - c
    return CircularArc(
        center=c,
        radius=math.sqrt(abs(c) ** 2 - 1),
        start_angle=cmath.phase(u),
        end_angle=cmath.phase(v),
        start=p,
        end=q,
        ccw=(u.real * v.imag - u.imag * v.real) > 0,
    )


def reflect_across(arc: GeodesicArc) -> MobiusMap:
    """Hyperbolic reflection fixing ``arc`` pointwise.

    Built as T^-1 . M . T where T moves ``arc.start`` to the origin and M
    mirrors across the resulting diameter. The textbook inversion
    z -> c + r^2 / conj(z - c) cancels catastrophically (r^2 - |c|^2 = -1)
    for the nearly straight geodesics close to the origin.
    """
    p, q = arc.start, arc.end
    to_origin = MobiusMap(1, -p, -p.conjugate(), 1)
    w = to_origin(q)
    u2 = (w / abs(w)) ** 2
    mirror = MobiusMap(u2, 0, 0, 1, conjugate=True)
    back = MobiusMap(1, p, p.conjugate(), 1)
    return back.compose(mirror.compose(to_origin))


def inversion_map(arc: CircularArc) -> MobiusMap:
    """Inversion in the arc's full circle, z -> c + r^2 / conj(z - c)."""
    c, r = arc.center, arc.radius
    return MobiusMap(c, r * r - abs(c) ** 2, 1, -c.conjugate(), conjugate=True)


def corner_angle(p: complex, q: complex, s: complex) -> float:
    """Hyperbolic angle at ``p`` between the geodesics to ``q`` and ``s``.

    Moving ``p`` to the origin turns both geodesics into straight rays without
    changing their directions at ``p``, since the model is conformal.
    """
    den = p.conjugate()
    tq = (q - p) / (1 - den * q)
    ts = (s - p) / (1 - den * s)
    return abs(cmath.phase(ts / tq))


@dataclass(frozen=True)
class SceneTriangle:
    id: int
    layer: int
    corners: tuple[complex, complex, complex]
    edges: tuple[GeodesicArc, GeodesicArc, GeodesicArc]


@dataclass(frozen=True)
class TilingScene:
    n: int
    radius: int
    triangles: tuple[SceneTriangle, ...]
    positions: tuple[complex, ...]
    palette: tuple[str, ...] = PALETTE
    canvas: tuple[int, int] = CANVAS
    max_placement_error: float = 0.0

    def color(self, layer: int) -> str:
        return self.palette[(layer - 1) % len(self.palette)]


def _edge_geodesics(corners) -> tuple:
    a, b, c = corners
    return (geodesic_between(a, b), geodesic_between(b, c), geodesic_between(c, a))


def layout(disk: DiskComplex, tolerance: float = PLACEMENT_TOL) -> TilingScene:
    if disk.n < 7:
        raise UnsupportedN("hyperbolic rendering requires n ≥ 7")
    if disk.closed:
        raise UnsupportedN("closed complexes cannot be drawn in the hyperbolic plane")
    n = disk.n
    pos: list[complex | None] = [None] * disk.vertex_count
    pos[disk.base_vertex] = 0j
    if disk.triangle_count == 0:
        return TilingScene(n, disk.radius, (), (0j,))

    side = float(continuum_metrics(n, precision=30).side_length)
    rho = radius_for_distance(side)
    o, a, b = disk.triangle_vertices(0)
    if o != disk.base_vertex:
        raise NumericalDegeneracy("triangle 0 does not contain the base vertex")
    pos[a] = complex(rho, 0.0)
    pos[b] = rho * cmath.exp(2j * math.pi / n)

    edges = disk.edge_index
    placed = [False] * disk.triangle_count
    placed[0] = True
    queue = deque([0])
    worst = 0.0
    while queue:
        s = queue.popleft()
        tri = disk.triangle_vertices(s)
        for i in range(3):
            p, q, opp = tri[i], tri[(i + 1) % 3], tri[(i + 2) % 3]
            key = (p, q) if p < q else (q, p)
            for t in edges[key]:
                if placed[t]:
                    continue
                x = next(v for v in disk.triangle_vertices(t) if v != p and v != q)
                image = reflect_across(geodesic_between(pos[p], pos[q]))(pos[opp])
                if abs(image) >= 1.0:
                    raise NumericalDegeneracy(f"vertex {x} was placed outside the disk")
                if pos[x] is None:
                    pos[x] = image
                else:
                    err = abs(pos[x] - image)
                    worst = max(worst, err)
                    if err > tolerance:
                        raise NumericalDegeneracy(
                            f"vertex {x} placed at {pos[x]} and {image} (error {err:.3g})"
                        )
                placed[t] = True
                queue.append(t)
    if not all(placed):
        raise NumericalDegeneracy("triangle adjacency graph is disconnected")

    scene_tris = []
    for t in range(disk.triangle_count):
        corners = tuple(pos[v] for v in disk.triangle_vertices(t))
        scene_tris.append(
            SceneTriangle(t, disk.triangle_birth(t), corners, _edge_geodesics(corners))
        )
    return TilingScene(n, disk.radius, tuple(scene_tris), tuple(pos), max_placement_error=worst)


def reflection_coherence(disk: DiskComplex, scene: TilingScene) -> float:
    """Largest disagreement found by reflecting across every interior edge.

    For each edge shared by two triangles, the far vertex of one triangle is
    reflected across the edge and compared with the far vertex of the other.
    """
    pos = scene.positions
    worst = 0.0
    for (p, q), ts in disk.edge_index.items():
        if len(ts) != 2:
            continue
        x, y = (
            next(v for v in disk.triangle_vertices(t) if v != p and v != q) for t in ts
        )
        image = reflect_across(geodesic_between(pos[p], pos[q]))(pos[x])
        worst = max(worst, abs(image - pos[y]))
    return worst


def angle_sums(disk: DiskComplex, scene: TilingScene) -> dict[int, float]:
    """Total corner angle at every saturated vertex."""
    pos = scene.positions
    sums = {}
    for v in range(disk.vertex_count):
        if not disk.is_saturated(v):
            continue
        total = 0.0
        for t in disk.vertex(v).incident_triangles:
            tri = disk.triangle_vertices(t)
            i = tri.index(v)
            total += corner_angle(pos[v], pos[tri[(i + 1) % 3]], pos[tri[(i + 2) % 3]])
        sums[v] = total
    return sums


# -- SVG -------------------------------------------------------------------------


def _num(x: float) -> str:
    s = f"{x:.6f}"
    return "0.000000" if s == "-0.000000" else s


def _pt(z: complex) -> str:
    # Disk y axis points up; SVG y axis points down.
    return f"{_num(z.real)} {_num(-z.imag)}"


def _segment(arc: GeodesicArc) -> str:
    if isinstance(arc, Diameter):
        return f"L {_pt(arc.end)}"
    r = _num(arc.radius)
    # Counter-clockwise in disk coordinates is negative-angle in SVG's y-down space.
    sweep = 0 if arc.ccw else 1
    return f"A {r} {r} 0 0 {sweep} {_pt(arc.end)}"


def triangle_path(tri: SceneTriangle) -> str:
    parts = [f"M {_pt(tri.corners[0])}"]
    parts.extend(_segment(arc) for arc in tri.edges)
    parts.append("Z")
    return " ".join(parts)


def svg_text(scene: TilingScene, outline: bool = True) -> str:
    width, height = scene.canvas
    vb = " ".join(_num(x).rstrip("0").rstrip(".") for x in VIEWBOX)
    lines = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" '
        f'height="{height}" viewBox="{vb}">',
        f"<title>{{3,{scene.n}}} tiling, D({scene.radius}), {len(scene.triangles)} triangles</title>",
        '<rect x="-1.05" y="-1.05" width="2.1" height="2.1" fill="#ffffff"/>',
    ]
    if scene.triangles:
        lines.append(f'<g stroke="{STROKE}" stroke-width="0.0015" stroke-linejoin="round">')
        for tri in sorted(scene.triangles, key=lambda t: t.id):
            lines.append(
                f'<path id="t{tri.id}" fill="{scene.color(tri.layer)}" d="{triangle_path(tri)}"/>'
            )
        lines.append("</g>")
    if outline:
        lines.append(f'<circle cx="0" cy="0" r="1" fill="none" stroke="{STROKE}" stroke-width="0.004"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


def emit_svg(scene: TilingScene, path, outline: bool = True) -> int:
    data = svg_text(scene, outline).encode("utf-8")
    try:
        with open(path, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        raise OutputUnwritable(f"cannot write {path}: {exc}") from exc
    return len(data)
