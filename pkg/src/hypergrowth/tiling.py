"""Combinatorial disks D_n(r) in the triangle complex X_n.

X_n is the surface obtained by gluing equilateral triangles so that exactly
``n`` meet at every vertex. ``D_n(0)`` is a single vertex and ``D_n(r+1)``
adds every triangle sharing a vertex with ``D_n(r)``. The complex is built
explicitly and measured by counting, so it serves as the brute-force ground
truth for every closed form elsewhere in the package.

Each vertex carries its link: the neighbours in counter-clockwise order so
that ``(v, link[j], link[j+1])`` are the incident triangles. For a boundary
vertex the link is an open path whose first entry is the next vertex along
the (counter-clockwise) boundary and whose last entry is the previous one.
A saturated vertex has a closed link (first == last) with ``n`` triangles.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterator, Mapping, Sequence

from .errors import (
    AlreadyClosed,
    ClassificationViolation,
    ComplexInconsistency,
    InvalidN,
    InvalidRadius,
    NotADisk,
    OutputUnwritable,
    ResourceLimit,
)

DEFAULT_MAX_TRIANGLES = 5_000_000
MAX_TRIANGLES_ENV = "HYPERGROWTH_MAX_TRIANGLES"

Edge = tuple[int, int]


def _edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Limits:
    max_triangles: int = DEFAULT_MAX_TRIANGLES

    @classmethod
    def from_env(cls, default: int = DEFAULT_MAX_TRIANGLES) -> "Limits":
        raw = os.environ.get(MAX_TRIANGLES_ENV)
        if raw is None or not raw.strip():
            return cls(default)
        try:
            value = int(raw)
        except ValueError:
            raise ValueError(f"{MAX_TRIANGLES_ENV} must be an integer, got {raw!r}") from None
        if value < 1:
            raise ValueError(f"{MAX_TRIANGLES_ENV} must be positive")
        return cls(value)


class BoundaryColor(enum.Enum):
    BLUE = "blue"      # 2 incident disk triangles
    YELLOW = "yellow"  # 3 incident disk triangles


@dataclass(frozen=True)
class VertexRecord:
    id: int
    birth_layer: int
    incident_triangles: tuple[int, ...]
    neighbors: tuple[int, ...]
    saturated: bool


@dataclass(frozen=True)
class TriangleRecord:
    id: int
    vertices: tuple[int, int, int]
    birth_layer: int


@dataclass(frozen=True)
class DiskMetrics:
    r: int
    vertex_count: int
    edge_count: int
    triangle_count: int
    perimeter: int
    area: int
    blue_count: int
    yellow_count: int
    euler: int

    def as_dict(self) -> dict[str, int]:
        return {
            "r": self.r,
            "V": self.vertex_count,
            "E": self.edge_count,
            "F": self.triangle_count,
            "P": self.perimeter,
            "A": self.area,
            "B": self.blue_count,
            "Y": self.yellow_count,
            "euler": self.euler,
        }


class DiskComplex:
    """An explicit simplicial disk (or closed sphere for n <= 5).

    Instances returned by :func:`build_disk` and :func:`grow_layer` are never
    mutated afterwards; growth always works on a private copy.
    """

    def __init__(self, n: int):
        if n < 3:
            raise InvalidN(f"n must be >= 3, got {n}")
        self.n = n
        self.radius = 0
        self.closed = False
        self.closure_layer: int | None = None
        self._vbirth: list[int] = [0]
        self._links: list[list[int]] = [[]]
        self._fans: list[list[int]] = [[]]
        self._tris: list[tuple[int, int, int]] = []
        self._tbirth: list[int] = []
        self._edges: dict[Edge, list[int]] = {}
        self._boundary: list[int] = []
        self._unsaturated = 1

    # -- read access ---------------------------------------------------

    @property
    def base_vertex(self) -> int:
        return 0

    @property
    def vertex_count(self) -> int:
        return len(self._vbirth)

    @property
    def triangle_count(self) -> int:
        return len(self._tris)

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    @property
    def boundary_cycle(self) -> tuple[int, ...]:
        return tuple(self._boundary)

    @property
    def edge_index(self) -> Mapping[Edge, list[int]]:
        return MappingProxyType(self._edges)

    def vertex(self, v: int) -> VertexRecord:
        return VertexRecord(
            id=v,
            birth_layer=self._vbirth[v],
            incident_triangles=tuple(self._fans[v]),
            neighbors=tuple(self._links[v]),
            saturated=self.is_saturated(v),
        )

    def triangle(self, t: int) -> TriangleRecord:
        return TriangleRecord(t, self._tris[t], self._tbirth[t])

    def vertices(self) -> Iterator[VertexRecord]:
        return (self.vertex(v) for v in range(self.vertex_count))

    def triangles(self) -> Iterator[TriangleRecord]:
        return (self.triangle(t) for t in range(self.triangle_count))

    def triangle_vertices(self, t: int) -> tuple[int, int, int]:
        return self._tris[t]

    def triangle_birth(self, t: int) -> int:
        return self._tbirth[t]

    def vertex_birth(self, v: int) -> int:
        return self._vbirth[v]

    def inside_count(self, v: int) -> int:
        """Number of disk triangles incident to ``v``."""
        return len(self._fans[v])

    def is_saturated(self, v: int) -> bool:
        link = self._links[v]
        return len(self._fans[v]) == self.n and link[0] == link[-1]

    def copy(self) -> "DiskComplex":
        other = DiskComplex.__new__(DiskComplex)
        other.n = self.n
        other.radius = self.radius
        other.closed = self.closed
        other.closure_layer = self.closure_layer
        other._vbirth = list(self._vbirth)
        other._links = [list(x) for x in self._links]
        other._fans = [list(x) for x in self._fans]
        other._tris = list(self._tris)
        other._tbirth = list(self._tbirth)
        other._edges = {e: list(ts) for e, ts in self._edges.items()}
        other._boundary = list(self._boundary)
        other._unsaturated = self._unsaturated
        return other

    def __repr__(self) -> str:
        state = "closed" if self.closed else f"P={len(self._boundary)}"
        return (
            f"DiskComplex(n={self.n}, r={self.radius}, V={self.vertex_count}, "
            f"E={self.edge_count}, F={self.triangle_count}, {state})"
        )

    # -- construction (private; only used on copies) --------------------

    def _new_vertex(self, layer: int) -> int:
        self._vbirth.append(layer)
        self._links.append([])
        self._fans.append([])
        self._unsaturated += 1
        return len(self._vbirth) - 1

    def _add_triangle(self, a: int, b: int, c: int, layer: int) -> int:
        """Glue the counter-clockwise triangle (a, b, c) onto the disk."""
        n = self.n
        t = len(self._tris)
        plan = []
        for v, p, q in ((a, b, c), (b, c, a), (c, a, b)):
            link = self._links[v]
            k = len(self._fans[v])
            if k >= n:
                raise ComplexInconsistency(f"vertex {v} would exceed {n} triangles")
            if not link:
                mode = "new"
            elif link[-1] == p and link[0] == q:
                if k != n - 1:
                    raise ComplexInconsistency(
                        f"vertex {v} would close its fan with {k + 1} triangles"
                    )
                mode = "close"
            elif link[-1] == p:
                mode = "append"
            elif link[0] == q:
                mode = "prepend"
            else:
                raise ComplexInconsistency(
                    f"triangle ({a}, {b}, {c}) is not contiguous with the fan at {v}"
                )
            plan.append((v, p, q, mode))
        for u, v in ((a, b), (b, c), (c, a)):
            if len(self._edges.get(_edge(u, v), ())) >= 2:
                raise ComplexInconsistency(f"edge {_edge(u, v)} already has two triangles")

        for v, p, q, mode in plan:
            link, fan = self._links[v], self._fans[v]
            if mode == "new":
                link.extend((p, q))
                fan.append(t)
            elif mode == "prepend":
                link.insert(0, p)
                fan.insert(0, t)
            else:
                link.append(q)
                fan.append(t)
                if mode == "close":
                    self._unsaturated -= 1
        for u, v in ((a, b), (b, c), (c, a)):
            self._edges.setdefault(_edge(u, v), []).append(t)
        self._tris.append((a, b, c))
        self._tbirth.append(layer)
        return t

    def _projected_growth(self) -> int:
        # Exact for n >= 6; an over-estimate near spherical closure.
        n = self.n
        if self.radius == 0:
            return n
        return sum(n - len(self._fans[v]) - 1 for v in self._boundary)

    def _grow(self, limits: Limits) -> None:
        if self.closed:
            raise AlreadyClosed(f"D_{self.n}({self.radius}) is already a closed complex")
        projected = self.triangle_count + self._projected_growth()
        if projected > limits.max_triangles:
            raise ResourceLimit(
                f"growing D_{self.n}({self.radius}) would reach {projected} triangles "
                f"(limit {limits.max_triangles})"
            )
        layer = self.radius + 1
        n = self.n
        if self.radius == 0:
            ring = [self._new_vertex(layer) for _ in range(n)]
            for i in range(n):
                self._add_triangle(0, ring[i], ring[(i + 1) % n], layer)
        else:
            links, fans = self._links, self._fans
            for v in list(self._boundary):
                while not self.is_saturated(v):
                    link = links[v]
                    k = len(fans[v])
                    nxt, prv = link[0], link[-1]
                    if k == n - 1:
                        self._add_triangle(v, prv, nxt, layer)
                        continue
                    if len(fans[prv]) == n - 1:
                        apex = links[prv][-1]
                    elif k == n - 2 and len(fans[nxt]) == n - 1:
                        apex = links[nxt][0]
                    else:
                        apex = self._new_vertex(layer)
                    self._add_triangle(v, prv, apex, layer)
        self.radius = layer
        if self._unsaturated == 0:
            self.closed = True
            self.closure_layer = layer
            self._boundary = []
        else:
            self._boundary = self._trace_boundary_links()

    def _trace_boundary_links(self) -> list[int]:
        start = next(v for v in range(self.vertex_count) if not self.is_saturated(v))
        cycle = [start]
        v = self._links[start][0]
        while v != start:
            cycle.append(v)
            if len(cycle) > self._unsaturated:
                raise NotADisk("boundary walk does not return to its start")
            v = self._links[v][0]
        if len(cycle) != self._unsaturated:
            raise NotADisk(
                f"boundary cycle has {len(cycle)} vertices but "
                f"{self._unsaturated} vertices are unsaturated"
            )
        return cycle

    @classmethod
    def _from_tables(
        cls,
        n: int,
        radius: int,
        closed: bool,
        vbirth: Sequence[int],
        tris: Sequence[tuple[int, int, int]],
        tbirth: Sequence[int],
        boundary: Sequence[int],
        closure_layer: int | None = None,
    ) -> "DiskComplex":
        """Assemble a complex from raw tables without enforcing its invariants.

        Fans are ordered where the triangles allow it; anything malformed is
        left for :func:`validate_complex` to report.
        """
        self = cls(n)
        self.radius = radius
        self.closed = closed
        self.closure_layer = closure_layer if closed else None
        self._vbirth = list(vbirth)
        self._tris = [tuple(t) for t in tris]
        self._tbirth = list(tbirth)
        self._boundary = list(boundary)
        self._edges = {}
        corners: list[dict[int, tuple[int, int]]] = [{} for _ in self._vbirth]
        for t, (a, b, c) in enumerate(self._tris):
            for u, v in ((a, b), (b, c), (c, a)):
                self._edges.setdefault(_edge(u, v), []).append(t)
            for v, p, q in ((a, b, c), (b, c, a), (c, a, b)):
                corners[v][p] = (q, t)
        self._links, self._fans = [], []
        for v, step in enumerate(corners):
            heads = set(step) - {q for q, _ in step.values()}
            cur = min(heads) if heads else (min(step) if step else None)
            link, fan = [], []
            if cur is not None:
                link.append(cur)
                while cur in step and len(fan) < len(step):
                    cur, t = step[cur]
                    link.append(cur)
                    fan.append(t)
            self._links.append(link)
            self._fans.append(fan)
        self._unsaturated = sum(
            1 for v in range(len(self._vbirth)) if not self._links[v] or not self.is_saturated(v)
        )
        return self


def _check_n(n: int) -> None:
    if not isinstance(n, int) or n < 3:
        raise InvalidN(f"n must be an integer >= 3, got {n!r}")


def build_disk(n: int, r: int, limits: Limits | None = None) -> DiskComplex:
    """Build ``D_n(r)``.

    For n in {3, 4, 5} growth stops once the complex closes up into a
    Platonic solid; the result then has ``closed=True`` and ``radius`` equal
    to the closure layer.
    """
    _check_n(n)
    if r < 0:
        raise InvalidRadius(f"r must be >= 0, got {r}")
    limits = limits or Limits.from_env()
    disk = DiskComplex(n)
    while disk.radius < r and not disk.closed:
        disk._grow(limits)
    return disk


def build_layers(n: int, r: int, limits: Limits | None = None) -> Iterator[DiskComplex]:
    """Yield ``D_n(0), D_n(1), ..., D_n(r)`` as independent snapshots.

    Snapshots stop early if the complex closes.
    """
    _check_n(n)
    limits = limits or Limits.from_env()
    disk = DiskComplex(n)
    yield disk.copy()
    while disk.radius < r and not disk.closed:
        disk._grow(limits)
        yield disk.copy()


def iter_metrics(n: int, r: int, limits: Limits | None = None) -> Iterator[DiskMetrics]:
    """Per-layer metrics of ``D_n(0..r)`` from a single in-place build."""
    _check_n(n)
    if r < 0:
        raise InvalidRadius(f"r must be >= 0, got {r}")
    limits = limits or Limits.from_env()
    disk = DiskComplex(n)
    yield measure(disk)
    while disk.radius < r and not disk.closed:
        disk._grow(limits)
        yield measure(disk)


def grow_layer(disk: DiskComplex, limits: Limits | None = None) -> DiskComplex:
    if disk.closed:
        raise AlreadyClosed(f"D_{disk.n}({disk.radius}) is already a closed complex")
    grown = disk.copy()
    grown._grow(limits or Limits.from_env())
    return grown


def classify_boundary(disk: DiskComplex) -> dict[int, BoundaryColor]:
    if disk.n < 6:
        raise InvalidN("blue/yellow classification is only defined for n >= 6")
    if disk.closed:
        raise AlreadyClosed("a closed complex has no boundary")
    if disk.radius < 1:
        raise InvalidRadius("classification needs radius >= 1")
    colors = {}
    for v in disk.boundary_cycle:
        k = disk.inside_count(v)
        if k == 2:
            colors[v] = BoundaryColor.BLUE
        elif k == 3:
            colors[v] = BoundaryColor.YELLOW
        else:
            raise ClassificationViolation(f"boundary vertex {v} has {k} inside triangles")
    return colors


def color_counts(colors: Mapping[int, BoundaryColor]) -> tuple[int, int]:
    blue = sum(1 for c in colors.values() if c is BoundaryColor.BLUE)
    return blue, len(colors) - blue


def measure(disk: DiskComplex) -> DiskMetrics:
    perimeter = sum(1 for ts in disk.edge_index.values() if len(ts) == 1)
    blue = yellow = 0
    for v in disk.boundary_cycle:
        k = disk.inside_count(v)
        if k == 2:
            blue += 1
        elif k == 3:
            yellow += 1
    V, E, F = disk.vertex_count, disk.edge_count, disk.triangle_count
    return DiskMetrics(
        r=disk.radius,
        vertex_count=V,
        edge_count=E,
        triangle_count=F,
        perimeter=perimeter,
        area=F,
        blue_count=blue,
        yellow_count=yellow,
        euler=V - E + F,
    )


def boundary_cycle(disk: DiskComplex) -> list[int]:
    """Recover the boundary cycle from the edge index alone.

    Boundary edges are oriented so the disk lies on their left; the walk
    starts at the smallest boundary vertex id.
    """
    if disk.closed:
        raise AlreadyClosed("a closed complex has no boundary")
    if disk.radius < 1:
        raise InvalidRadius("boundary cycle needs radius >= 1")
    succ: dict[int, int] = {}
    for (u, v), ts in disk.edge_index.items():
        if len(ts) != 1:
            continue
        a, b, c = disk.triangle_vertices(ts[0])
        for x, y in ((a, b), (b, c), (c, a)):
            if {x, y} == {u, v}:
                if x in succ:
                    raise NotADisk(f"vertex {x} has more than one outgoing boundary edge")
                succ[x] = y
    if not succ:
        raise NotADisk("no boundary edges")
    start = min(succ)
    cycle = [start]
    v = succ[start]
    while v != start:
        if v not in succ or len(cycle) > len(succ):
            raise NotADisk("boundary edges do not close into a cycle")
        cycle.append(v)
        v = succ[v]
    if len(cycle) != len(succ):
        raise NotADisk(f"boundary splits into several cycles ({len(cycle)} of {len(succ)} edges)")
    return cycle


@dataclass(frozen=True)
class Check:
    name: str
    passed: bool
    offending: tuple = ()
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    checks: tuple[Check, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return all(c.passed for c in self.checks)

    def __getitem__(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> list[Check]:
        return [c for c in self.checks if not c.passed]


def _fan_is_contiguous(v: int, tris: list[tuple[int, int, int]]) -> tuple[bool, bool]:
    """Return (single_fan, closed) for the triangles around ``v``."""
    step = {}
    for a, b, c in tris:
        for x, p, q in ((a, b, c), (b, c, a), (c, a, b)):
            if x == v:
                if p in step:
                    return False, False
                step[p] = q
    if not step:
        return True, False
    targets = set(step.values())
    heads = set(step) - targets
    if len(heads) > 1:
        return False, False
    cur = next(iter(heads)) if heads else next(iter(step))
    seen = 0
    start = cur
    while cur in step and seen <= len(step):
        cur = step[cur]
        seen += 1
        if cur == start:
            break
    return seen == len(step), not heads


def validate_complex(disk: DiskComplex) -> ValidationReport:
    """Recompute every structural invariant from the raw triangle table."""
    n = disk.n
    V = disk.vertex_count
    tris = [disk.triangle_vertices(t) for t in range(disk.triangle_count)]
    checks = []

    bad = tuple(t for t, tri in enumerate(tris) if len(set(tri)) != 3 or max(tri) >= V)
    checks.append(Check("distinct_vertices", not bad, bad))

    edges: dict[Edge, list[int]] = {}
    for t, (a, b, c) in enumerate(tris):
        for u, v in ((a, b), (b, c), (c, a)):
            edges.setdefault(_edge(u, v), []).append(t)
    bad = tuple(e for e, ts in edges.items() if len(ts) not in (1, 2))
    checks.append(Check("edge_incidence", not bad, bad))

    stored = {e: sorted(ts) for e, ts in disk.edge_index.items()}
    recomputed = {e: sorted(ts) for e, ts in edges.items()}
    bad = tuple(sorted(e for e in set(stored) | set(recomputed) if stored.get(e) != recomputed.get(e)))
    checks.append(Check("edge_index", not bad, bad))

    incident: list[list[tuple[int, int, int]]] = [[] for _ in range(V)]
    for tri in tris:
        for v in tri:
            if v < V:
                incident[v].append(tri)
    gaps, closed_fans = [], []
    for v in range(V):
        single, closed = _fan_is_contiguous(v, incident[v])
        if not single:
            gaps.append(v)
        closed_fans.append(closed)
    checks.append(Check("fan_contiguity", not gaps, tuple(gaps)))

    boundary_edges = {e for e, ts in edges.items() if len(ts) == 1}
    cyc = list(disk.boundary_cycle)
    cycle_edges = {_edge(cyc[i], cyc[(i + 1) % len(cyc)]) for i in range(len(cyc))} if len(cyc) > 1 else set()
    bad = tuple(sorted(boundary_edges ^ cycle_edges))
    checks.append(Check("boundary_cycle", not bad, bad))

    euler = V - len(edges) + len(tris)
    expected = 2 if disk.closed else 1
    checks.append(Check("euler", euler == expected, (), f"V-E+F={euler}, expected {expected}"))

    # D(0) is a bare vertex: it is its own boundary.
    on_boundary = set(cyc) if disk.radius > 0 else {disk.base_vertex}
    bad = tuple(
        v for v in range(V)
        if v not in on_boundary and (len(incident[v]) != n or not closed_fans[v])
    )
    checks.append(Check("interior_saturation", not bad, bad))

    if n >= 6 and disk.radius >= 1 and not disk.closed:
        bad = tuple(v for v in cyc if len(incident[v]) not in (2, 3))
        checks.append(Check("boundary_classification", not bad, bad))
    return ValidationReport(tuple(checks))


# -- export format ---------------------------------------------------------


def export_complex(disk: DiskComplex) -> str:
    lines = [f"tiling n={disk.n} r={disk.radius} closed={int(disk.closed)}"]
    lines.extend(f"v {v} {disk.vertex_birth(v)}" for v in range(disk.vertex_count))
    for t in range(disk.triangle_count):
        a, b, c = disk.triangle_vertices(t)
        lines.append(f"t {t} {a} {b} {c} {disk.triangle_birth(t)}")
    lines.append(" ".join(["b", *map(str, disk.boundary_cycle)]))
    return "\n".join(lines) + "\n"


def write_export(disk: DiskComplex, path) -> int:
    data = export_complex(disk).encode("ascii")
    try:
        with open(path, "wb") as fh:
            fh.write(data)
    except OSError as exc:
        raise OutputUnwritable(f"cannot write {path}: {exc}") from exc
    return len(data)


def read_export(text: str) -> DiskComplex:
    """Parse the line-oriented export format back into a disk."""
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines or lines[0][0] != "tiling":
        raise ValueError("missing 'tiling' header line")
    header = dict(tok.split("=", 1) for tok in lines[0][1:])
    n, r, closed = int(header["n"]), int(header["r"]), header["closed"] == "1"
    vbirth: dict[int, int] = {}
    tris: dict[int, tuple[tuple[int, int, int], int]] = {}
    boundary: list[int] = []
    for parts in lines[1:]:
        kind = parts[0]
        if kind == "v":
            vbirth[int(parts[1])] = int(parts[2])
        elif kind == "t":
            a, b, c = map(int, parts[2:5])
            tris[int(parts[1])] = ((a, b, c), int(parts[5]))
        elif kind == "b":
            boundary = [int(x) for x in parts[1:]]
        else:
            raise ValueError(f"unknown record type {kind!r}")
    if sorted(vbirth) != list(range(len(vbirth))) or sorted(tris) != list(range(len(tris))):
        raise ValueError("vertex and triangle ids must be dense from 0")
    return DiskComplex._from_tables(
        n,
        r,
        closed,
        [vbirth[v] for v in range(len(vbirth))],
        [tris[t][0] for t in range(len(tris))],
        [tris[t][1] for t in range(len(tris))],
        boundary,
        closure_layer=r if closed else None,
    )
