import cmath
import math
import re
import xml.etree.ElementTree as ET

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from hypergrowth.analysis import continuum_metrics
from hypergrowth.errors import DegeneratePoints, OutputUnwritable, UnsupportedN
from hypergrowth.render import (
    PALETTE,
    CircularArc,
    Diameter,
    MobiusMap,
    angle_sums,
    check_disk_point,
    corner_angle,
    emit_svg,
    geodesic_between,
    hyperbolic_distance,
    inversion_map,
    layout,
    radius_for_distance,
    reflect_across,
    reflection_coherence,
    svg_text,
)
from hypergrowth.tiling import build_disk, measure

from oracles import svg_arc_center

SVG_NS = "{http://www.w3.org/2000/svg}"


def disk_points(max_radius=0.9):
    return st.builds(
        lambda r, t: cmath.rect(r, t),
        st.floats(0.0, max_radius),
        st.floats(0.0, 2 * math.pi),
    )


def on_geodesic(arc, z, tol=1e-9):
    if isinstance(arc, Diameter):
        a, b = arc.start, arc.end
        return abs((b - a).real * (z - a).imag - (b - a).imag * (z - a).real) < tol
    return abs(abs(z - arc.center) - arc.radius) < tol


def along(p, q, t):
    """Point a fraction ``t`` of the way from p to q along their geodesic."""
    w = (q - p) / (1 - p.conjugate() * q)
    z = t * w
    return (z + p) / (1 + p.conjugate() * z)


# -- geodesics ---------------------------------------------------------------------


def test_diameter_for_collinear_points():
    arc = geodesic_between(0.3 + 0j, -0.2 + 0j)
    assert isinstance(arc, Diameter)
    assert (arc.start, arc.end) == (0.3, -0.2)


def test_orthogonal_circle_through_two_points():
    arc = geodesic_between(0.5 + 0j, 0.5j)
    assert isinstance(arc, CircularArc)
    # Solving 2 Re(z conj c) = |z|^2 + 1 at both points gives c = 1.25 (1 + i).
    assert abs(arc.center - (1.25 + 1.25j)) < 1e-12
    assert abs(arc.radius - math.sqrt(2.125)) < 1e-12
    for z in (0.5, 0.5j):
        assert abs(abs(z - arc.center) - arc.radius) < 1e-12
    assert abs(abs(arc.center) ** 2 - arc.radius**2 - 1) < 1e-12


def test_unit_center_circle_misses_the_points():
    # The circle of centre 1 + i and radius 1 is orthogonal to the unit circle
    # but does not pass through 0.5.
    assert abs(abs(0.5 - (1 + 1j)) - 1) > 0.1


def test_degenerate_points():
    with pytest.raises(DegeneratePoints):
        geodesic_between(0.2 + 0.1j, 0.2 + 0.1j)


@given(disk_points(), disk_points())
def test_geodesics_are_orthogonal_and_pass_through_endpoints(p, q):
    assume(abs(p - q) > 1e-6)
    arc = geodesic_between(p, q)
    assert on_geodesic(arc, p) and on_geodesic(arc, q)
    if isinstance(arc, CircularArc):
        assert abs(abs(arc.center) ** 2 - arc.radius**2 - 1) < 1e-9 * max(1.0, arc.radius**2)


@settings(max_examples=100)
@given(disk_points(0.8), disk_points(0.8), disk_points(0.6), st.floats(0, 2 * math.pi), st.floats(0.05, 0.95))
def test_isometries_map_geodesics_to_geodesics(p, q, a, theta, t):
    assume(abs(p - q) > 1e-3)
    f = MobiusMap.disk_automorphism(theta, a)
    image = geodesic_between(f(p), f(q))
    assume(not isinstance(image, CircularArc) or image.radius < 1e4)
    assert on_geodesic(image, f(along(p, q, t)), tol=1e-7)


@given(disk_points(0.8), disk_points(0.8), disk_points(0.6), st.floats(0, 2 * math.pi))
def test_isometries_preserve_distance(p, q, a, theta):
    f = MobiusMap.disk_automorphism(theta, a)
    d0, d1 = hyperbolic_distance(p, q), hyperbolic_distance(f(p), f(q))
    assert abs(d0 - d1) < 1e-8 * max(1.0, d0)


# -- reflections ---------------------------------------------------------------------


def test_reflection_in_real_axis_is_conjugation():
    m = reflect_across(geodesic_between(-0.5 + 0j, 0.5 + 0j))
    for z in (0.3 + 0.4j, -0.1 - 0.7j, 0.0 + 0.0j):
        assert abs(m(z) - z.conjugate()) < 1e-15
    assert m.conjugate


@given(disk_points(), disk_points(), disk_points(0.95))
def test_reflection_is_an_involution(p, q, z):
    assume(abs(p - q) > 1e-6)
    m = reflect_across(geodesic_between(p, q))
    assert abs(m(m(z)) - z) < 1e-12
    assert abs(m.compose(m)(z) - z) < 1e-12


@given(disk_points(), disk_points(), st.floats(-0.5, 1.5))
def test_reflection_fixes_its_geodesic(p, q, t):
    assume(abs(p - q) > 1e-6)
    m = reflect_across(geodesic_between(p, q))
    z = along(p, q, t)
    assume(abs(z) < 0.99)
    assert abs(m(z) - z) < 1e-9


@given(disk_points(), disk_points(), st.floats(0, 2 * math.pi))
def test_reflection_preserves_the_disk(p, q, theta):
    assume(abs(p - q) > 1e-6)
    m = reflect_across(geodesic_between(p, q))
    assert abs(abs(m(cmath.exp(1j * theta))) - 1) < 1e-9
    assert abs(m(0.5 * cmath.exp(1j * theta))) < 1


@given(disk_points(0.7), disk_points(0.7), disk_points(0.9))
def test_reflection_agrees_with_textbook_inversion(p, q, z):
    assume(abs(p - q) > 1e-6)
    arc = geodesic_between(p, q)
    assume(isinstance(arc, CircularArc) and arc.radius < 20)
    assert abs(reflect_across(arc)(z) - inversion_map(arc)(z)) < 1e-9


def test_mobius_map_rejects_singular():
    with pytest.raises(ValueError):
        MobiusMap(1, 2, 2, 4)


@given(disk_points(0.6), disk_points(0.6), disk_points(0.9), st.floats(0, 6), st.floats(0, 6))
def test_compose_matches_sequential_application(a, b, z, s, t):
    f = MobiusMap.disk_automorphism(s, a)
    g = reflect_across(geodesic_between(a, b)) if abs(a - b) > 1e-6 else f
    assert abs(g.compose(f)(z) - g(f(z))) < 1e-9
    assert abs(f.compose(g)(z) - f(g(z))) < 1e-9


def test_distance_helpers():
    with pytest.raises(ValueError):
        check_disk_point(1.0 + 0j)
    assert check_disk_point(0.5j) == 0.5j
    for d in (0.1, 1.0905, 3.0):
        assert abs(hyperbolic_distance(0j, radius_for_distance(d)) - d) < 1e-12


def test_corner_angle_at_origin():
    assert abs(corner_angle(0j, 0.5 + 0j, 0.5j) - math.pi / 2) < 1e-15


# -- layout ------------------------------------------------------------------------


def test_first_fan_is_symmetric():
    d = build_disk(7, 1)
    scene = layout(d)
    side = float(continuum_metrics(7).side_length)
    ring = [scene.positions[v] for v in range(1, 8)]
    for z in ring:
        assert abs(hyperbolic_distance(0j, z) - side) < 1e-12
    angles = sorted(cmath.phase(z) % (2 * math.pi) for z in ring)
    for k, a in enumerate(angles):
        assert abs(a - 2 * math.pi * k / 7) < 1e-12
    assert scene.positions[d.triangle_vertices(0)[1]] == pytest.approx(radius_for_distance(side))


@pytest.mark.parametrize("n,r", [(7, 3), (7, 4), (8, 2), (9, 3), (12, 3)])
def test_layout_is_a_tiling_by_congruent_triangles(n, r):
    d = build_disk(n, r)
    scene = layout(d)
    assert len(scene.triangles) == measure(d).area
    assert len(scene.positions) == d.vertex_count
    side = float(continuum_metrics(n).side_length)
    for (u, v) in d.edge_index:
        assert abs(hyperbolic_distance(scene.positions[u], scene.positions[v]) - side) < 1e-8
    assert reflection_coherence(d, scene) < 1e-9
    assert scene.max_placement_error < 1e-9


def test_positions_are_distinct():
    d = build_disk(7, 4)
    pts = sorted(layout(d).positions, key=lambda z: (z.real, z.imag))
    assert len({(round(z.real, 9), round(z.imag, 9)) for z in pts}) == d.vertex_count


def test_scene_layers_and_colors():
    scene = layout(build_disk(7, 3))
    assert len(scene.triangles) == 112
    assert {t.layer for t in scene.triangles} == {1, 2, 3}
    assert [scene.color(i) for i in (1, 2, 3)] == ["#ffd92f", "#e41a1c", "#984ea3"]
    assert scene.color(7) == scene.color(1) == PALETTE[0]
    counts = [sum(1 for t in scene.triangles if t.layer == k) for k in (1, 2, 3)]
    assert counts == [7, 28, 77]


def test_angle_sums_are_full_turns():
    d = build_disk(8, 3)
    sums = angle_sums(d, layout(d))
    assert len(sums) == d.vertex_count - len(d.boundary_cycle)
    for total in sums.values():
        assert abs(total - 2 * math.pi) < 1e-9


def test_neighbouring_fan_by_reflection():
    d = build_disk(7, 2)
    pos = layout(d).positions
    a, b = d.triangle_vertices(0)[1:]
    (other,) = [t for t in d.edge_index[(min(a, b), max(a, b))] if t != 0]
    apex = next(v for v in d.triangle_vertices(other) if v not in (a, b))
    image = reflect_across(geodesic_between(pos[a], pos[b]))(pos[d.base_vertex])
    assert abs(image - pos[apex]) < 1e-12


def test_layout_rejects_non_hyperbolic():
    with pytest.raises(UnsupportedN, match="hyperbolic rendering requires n ≥ 7"):
        layout(build_disk(6, 2))
    with pytest.raises(UnsupportedN):
        layout(build_disk(5, 4))


# -- SVG ---------------------------------------------------------------------------


def test_svg_path_count_and_structure():
    text = svg_text(layout(build_disk(7, 2)))
    root = ET.fromstring(text.encode())
    assert root.tag == SVG_NS + "svg"
    assert root.get("version") == "1.1"
    assert root.get("viewBox") == "-1.05 -1.05 2.1 2.1"
    paths = root.findall(f".//{SVG_NS}path")
    assert len(paths) == 35
    assert [p.get("id") for p in paths] == [f"t{i}" for i in range(35)]
    assert all(re.fullmatch(r"#[0-9a-f]{6}", p.get("fill")) for p in paths)
    assert len(root.findall(f"{SVG_NS}circle")) == 1


def test_empty_scene_has_only_outline():
    scene = layout(build_disk(7, 0))
    assert scene.triangles == ()
    root = ET.fromstring(svg_text(scene).encode())
    assert root.findall(f".//{SVG_NS}path") == []
    assert len(root.findall(f"{SVG_NS}circle")) == 1


def test_emission_is_byte_identical(tmp_path):
    a, b = tmp_path / "a.svg", tmp_path / "b.svg"
    size = emit_svg(layout(build_disk(7, 3)), a)
    emit_svg(layout(build_disk(7, 3)), b)
    assert a.read_bytes() == b.read_bytes()
    assert size == len(a.read_bytes())


def test_emit_unwritable(tmp_path):
    with pytest.raises(OutputUnwritable):
        emit_svg(layout(build_disk(7, 1)), tmp_path / "no" / "such" / "dir.svg")


def _segments(d):
    tokens = d.split()
    i = 0
    cur = None
    out = []
    while i < len(tokens):
        cmd = tokens[i]
        if cmd == "M":
            cur = (float(tokens[i + 1]), float(tokens[i + 2]))
            i += 3
        elif cmd == "L":
            nxt = (float(tokens[i + 1]), float(tokens[i + 2]))
            out.append(("L", cur, nxt, None))
            cur = nxt
            i += 3
        elif cmd == "A":
            rx, large, sweep = float(tokens[i + 1]), int(tokens[i + 4]), int(tokens[i + 5])
            nxt = (float(tokens[i + 6]), float(tokens[i + 7]))
            out.append(("A", cur, nxt, (rx, large, sweep)))
            cur = nxt
            i += 8
        else:
            assert cmd == "Z"
            i += 1
    return out


def test_svg_arcs_bend_the_right_way():
    scene = layout(build_disk(7, 3))
    root = ET.fromstring(svg_text(scene).encode())
    for path, tri in zip(root.findall(f".//{SVG_NS}path"), scene.triangles):
        segs = _segments(path.get("d"))
        assert len(segs) == 3
        for (kind, start, end, arc_args), edge in zip(segs, tri.edges):
            if kind == "L":
                assert isinstance(edge, Diameter)
                continue
            radius, large, sweep = arc_args
            cx, cy = svg_arc_center(*start, *end, radius, large, sweep)
            # SVG y axis points down
            assert math.hypot(cx - edge.center.real, cy + edge.center.imag) < 1e-3 * max(1.0, radius)
            # and the circle really is orthogonal to the unit circle
            assert abs(cx * cx + cy * cy - radius * radius - 1) < 1e-4 * max(1.0, radius**2)
