"""Hand-checked dessin fixtures and a declarative disk builder.

The cubic fixtures below were read off traced curves:

* type I    : b = (3/2)(1 - x^2),   w = (17/25) x (x^2 - 121/100)
* type II   : b = -3(x^2 + 1/100),  w = 3x^3 - 3x   (interior black hub)
* type IIb  : b = (x^2 - 4)/4,      w = x^3 - x     (no interior vertex)
* hyperbolic: b = -2 - 2x^2,        w = x^3 - x

Each fixture lists boundary vertices counterclockwise with the real-arc
colors between them, interior vertices, interior edges, and rotation slots
wherever a vertex carries more than one interior edge.
"""

from __future__ import annotations

from typing import Optional, Sequence

from .combmap import HEADS, TAILS, Dessin, DessinBuilder


def build_disk(boundary: Sequence, interior: Sequence = (), inner: Sequence = (),
               rotations: Optional[dict] = None,
               directions: Optional[dict] = None,
               degree_hint: Optional[int] = None,
               cuts: Sequence = ()) -> Dessin:
    """Assemble a dessin from named pieces.

    boundary: alternating vertex specs and arc colors, cyclic (the final
        color closes the circle). A vertex spec is (name, color) optionally
        extended by (singular_mult, isolated).
    interior: vertex specs for interior vertices.
    inner: (edge_name, u_name, v_name, color) tuples.
    rotations: name -> ccw list of inner edge names; required whenever a
        vertex has more than one inner edge.
    directions: edge name or boundary arc key "u:v" -> tail vertex name, for
        arcs whose direction is not forced by the endpoint colors.
    """
    if len(boundary) % 2 != 0:
        raise ValueError("boundary must alternate vertex specs and arc colors")
    rotations = rotations or {}
    directions = directions or {}
    b = DessinBuilder()
    names: dict[str, int] = {}
    order: list[str] = []
    arccolors: list[str] = []

    def add_named(spec, locus):
        name, color = spec[0], spec[1]
        sing = spec[2] if len(spec) > 2 else None
        iso = spec[3] if len(spec) > 3 else False
        if name in names:
            raise ValueError(f"duplicate vertex name {name}")
        names[name] = b.add_vertex(color, locus, sing, iso)
        return name

    for i in range(0, len(boundary), 2):
        order.append(add_named(boundary[i], "boundary"))
        arccolors.append(boundary[i + 1])
    for spec in interior:
        add_named(spec, "interior")

    ends: dict[int, tuple[int, int]] = {}

    def pick_tail(u: str, v: str, color: str, key: str) -> int:
        cu, cv = b.verts[names[u]].color, b.verts[names[v]].color
        ut = cu in TAILS[color] and cv in HEADS[color]
        vt = cv in TAILS[color] and cu in HEADS[color]
        if key in directions:
            return names[directions[key]]
        if ut and not vt:
            return names[u]
        if vt and not ut:
            return names[v]
        raise ValueError(f"direction of {key} ({color}) is ambiguous or "
                         f"impossible; specify it in directions=")

    n = len(order)
    arc_edges = []
    for i in range(n):
        u, v = order[i], order[(i + 1) % n]
        color = arccolors[i]
        tail = pick_tail(u, v, color, f"{u}:{v}")
        e = b.add_edge(names[u], names[v], color, tail, real=True)
        ends[e] = (names[u], names[v])
        arc_edges.append(e)

    edge_by_name: dict[str, int] = {}
    incident: dict[int, list[str]] = {vid: [] for vid in names.values()}
    for ename, u, v, color in inner:
        tail = pick_tail(u, v, color, ename)
        e = b.add_edge(names[u], names[v], color, tail)
        edge_by_name[ename] = e
        ends[e] = (names[u], names[v])
        incident[names[u]].append(ename)
        incident[names[v]].append(ename)

    def dart_at(ename: str, v: int) -> int:
        e = edge_by_name[ename]
        if ends[e][0] == v:
            return 2 * e
        if ends[e][1] == v:
            return 2 * e + 1
        raise ValueError(f"edge {ename} not incident to vertex {v}")

    newrot: list[list[int]] = [[] for _ in b.verts]
    for i, name in enumerate(order):
        v = names[name]
        to_next = 2 * arc_edges[i]
        to_prev = 2 * arc_edges[i - 1] + 1
        seq = rotations.get(name)
        if seq is None:
            if len(incident[v]) > 1:
                raise ValueError(f"rotation order required at {name}")
            seq = incident[v]
        newrot[v] = [to_next] + [dart_at(en, v) for en in seq] + [to_prev]
    for name, v in names.items():
        if b.verts[v].locus == "boundary":
            continue
        seq = rotations.get(name)
        if seq is None:
            if len(incident[v]) > 1:
                raise ValueError(f"rotation order required at interior {name}")
            seq = incident[v]
        newrot[v] = [dart_at(en, v) for en in seq]
    b.rot = newrot
    b.boundary = [names[nm] for nm in order]
    b.degree_hint = degree_hint
    b.cuts = [(k, c, tuple(names[p] for p in path)) for k, c, path in cuts]
    return b.freeze()


def cubic_type_I() -> Dessin:
    return build_disk(
        boundary=[
            ("wj", "white"), "bold",
            ("b1", "black"), "solid",
            ("x1", "cross"), "dotted",
            ("wz1", "white"), "dotted",
            ("x2", "cross"), "solid",
            ("ms1", "mono_solid"), "solid",
            ("x3", "cross"), "dotted",
            ("md", "mono_dotted"), "dotted",
            ("x4", "cross"), "solid",
            ("ms2", "mono_solid"), "solid",
            ("x5", "cross"), "dotted",
            ("wz2", "white"), "dotted",
            ("x6", "cross"), "solid",
            ("b2", "black"), "bold",
        ],
        inner=[
            ("e_dj", "wj", "md", "dotted"),
            ("e_b1", "b1", "wz1", "bold"),
            ("e_s1", "ms1", "b1", "solid"),
            ("e_s2", "ms2", "b2", "solid"),
            ("e_b2", "b2", "wz2", "bold"),
        ],
        rotations={
            "b1": ["e_b1", "e_s1"],
            "b2": ["e_s2", "e_b2"],
        },
        degree_hint=3,
    )


def cubic_type_II() -> Dessin:
    """The cubic with an interior black hub (three zigzags)."""
    return build_disk(
        boundary=[
            ("x1", "cross"), "dotted",
            ("w1", "white"), "dotted",
            ("x2", "cross"), "solid",
            ("ms1", "mono_solid"), "solid",
            ("x3", "cross"), "dotted",
            ("w2", "white"), "dotted",
            ("x4", "cross"), "solid",
            ("ms2", "mono_solid"), "solid",
            ("x5", "cross"), "dotted",
            ("w3", "white"), "dotted",
            ("x6", "cross"), "solid",
            ("ms3", "mono_solid"), "solid",
        ],
        interior=[("B", "black")],
        inner=[
            ("s1", "ms1", "B", "solid"),
            ("s2", "ms2", "B", "solid"),
            ("s3", "ms3", "B", "solid"),
            ("t1", "B", "w1", "bold"),
            ("t2", "B", "w2", "bold"),
            ("t3", "B", "w3", "bold"),
        ],
        rotations={"B": ["t1", "s1", "t2", "s2", "t3", "s3"]},
        degree_hint=3,
    )


def cubic_type_II_flat() -> Dessin:
    """Type-II cubic without interior vertices (real black pair)."""
    return build_disk(
        boundary=[
            ("b1", "black"), "solid",
            ("x1", "cross"), "dotted",
            ("w1", "white"), "dotted",
            ("x2", "cross"), "solid",
            ("ms1", "mono_solid"), "solid",
            ("x3", "cross"), "dotted",
            ("w2", "white"), "dotted",
            ("x4", "cross"), "solid",
            ("ms2", "mono_solid"), "solid",
            ("x5", "cross"), "dotted",
            ("w3", "white"), "dotted",
            ("x6", "cross"), "solid",
            ("b2", "black"), "bold",
            ("mb", "mono_bold"), "bold",
        ],
        inner=[
            ("e1", "b1", "w1", "bold"),
            ("e2", "ms1", "b1", "solid"),
            ("e3", "mb", "w2", "bold"),
            ("e4", "ms2", "b2", "solid"),
            ("e5", "b2", "w3", "bold"),
        ],
        rotations={
            "b1": ["e1", "e2"],
            "b2": ["e4", "e5"],
        },
        degree_hint=3,
    )


def hyperbolic_cubic() -> Dessin:
    return build_disk(
        boundary=[
            ("hw1", "white"), "dotted",
            ("md1", "mono_dotted"), "dotted",
            ("hw2", "white"), "dotted",
            ("md2", "mono_dotted"), "dotted",
            ("hw3", "white"), "dotted",
            ("md3", "mono_dotted"), "dotted",
        ],
        interior=[
            ("xa", "cross"), ("xb", "cross"), ("xc", "cross"), ("B", "black"),
        ],
        inner=[
            ("d1", "md1", "xa", "dotted"),
            ("d2", "md2", "xb", "dotted"),
            ("d3", "md3", "xc", "dotted"),
            ("s1", "xa", "B", "solid"),
            ("s2", "xb", "B", "solid"),
            ("s3", "xc", "B", "solid"),
            ("t1", "B", "hw1", "bold"),
            ("t2", "B", "hw2", "bold"),
            ("t3", "B", "hw3", "bold"),
        ],
        rotations={
            "B": ["t1", "s1", "t2", "s2", "t3", "s3"],
            "xa": ["d1", "s1"],
            "xb": ["d2", "s2"],
            "xc": ["d3", "s3"],
        },
        degree_hint=3,
    )
