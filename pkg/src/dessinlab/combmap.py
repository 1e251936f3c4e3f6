"""Colored, partially directed combinatorial maps on a closed disk.

A dessin is stored as a half-edge (dart) structure: darts are paired by
``d ^ 1``; each vertex carries the counterclockwise cyclic order of its
incident darts.  The disk boundary is part of the graph: boundary vertices
are listed in counterclockwise order and consecutive ones are joined by a
real edge.  At a boundary vertex the stored rotation runs from the dart
toward the next boundary vertex, through the interior darts, to the dart
toward the previous one.

Edge colors are solid / bold / dotted; every edge is directed (tail dart
recorded).  Color and direction encode the lift of the oriented real line
through the three-interval coloring, so validity is a local matter:
compatibility of edge color with endpoint colors, in/out alternation around
vertices, no directed monochrome cycles, and the disk embedding itself.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional, Sequence

VERTEX_COLORS = ("black", "white", "cross", "mono_solid", "mono_bold", "mono_dotted")
EDGE_COLORS = ("solid", "bold", "dotted")

# solid: cross -> black, bold: black -> white, dotted: white -> cross
TAILS = {
    "solid": {"cross", "mono_solid"},
    "bold": {"black", "mono_bold"},
    "dotted": {"white", "mono_dotted"},
}
HEADS = {
    "solid": {"black", "mono_solid"},
    "bold": {"white", "mono_bold"},
    "dotted": {"cross", "mono_dotted"},
}
MONO_OF = {"solid": "mono_solid", "bold": "mono_bold", "dotted": "mono_dotted"}
COLOR_OF_MONO = {v: k for k, v in MONO_OF.items()}


class StructureError(ValueError):
    """Malformed half-edge structure (not merely an invariant violation)."""


@dataclass(frozen=True)
class Vertex:
    color: str
    locus: str  # "boundary" | "interior"
    singular: Optional[int] = None  # 2 = node, 3 = cusp (cross vertices only)
    isolated: bool = False


@dataclass(frozen=True)
class Violation:
    rule: str
    detail: str
    vertices: tuple = ()
    edges: tuple = ()

    def __str__(self):
        return f"[{self.rule}] {self.detail}"


@dataclass(frozen=True)
class ValidationReport:
    violations: tuple

    @property
    def ok(self) -> bool:
        return not self.violations

    def rules(self) -> set:
        return {v.rule for v in self.violations}

    def __str__(self):
        if self.ok:
            return "valid"
        return "\n".join(str(v) for v in self.violations)


class Dessin:
    """Immutable dessin; construct via DessinBuilder or from_json."""

    __slots__ = ("verts", "rot", "origin", "ecolor", "etail", "ereal",
                 "boundary", "degree_hint", "cuts", "_pos")

    def __init__(self, verts, rot, ecolor, etail, ereal, boundary,
                 degree_hint=None, cuts=()):
        self.verts: tuple[Vertex, ...] = tuple(verts)
        self.rot: tuple[tuple[int, ...], ...] = tuple(tuple(r) for r in rot)
        self.ecolor: tuple[str, ...] = tuple(ecolor)
        self.etail: tuple[int, ...] = tuple(etail)
        self.ereal: tuple[bool, ...] = tuple(ereal)
        self.boundary: tuple[int, ...] = tuple(boundary)
        self.degree_hint = degree_hint
        self.cuts = tuple(cuts)
        origin = [-1] * (2 * len(self.ecolor))
        pos = [(-1, -1)] * (2 * len(self.ecolor))
        for v, darts in enumerate(self.rot):
            for i, d in enumerate(darts):
                if d < 0 or d >= len(origin):
                    raise StructureError(f"dart {d} out of range at vertex {v}")
                if origin[d] != -1:
                    raise StructureError(f"dart {d} appears twice")
                origin[d] = v
                pos[d] = (v, i)
        if any(o == -1 for o in origin):
            raise StructureError("dangling dart: not present in any rotation")
        self.origin = tuple(origin)
        self._pos = tuple(pos)

    # -- basic accessors -----------------------------------------------------

    @property
    def n_vertices(self) -> int:
        return len(self.verts)

    @property
    def n_edges(self) -> int:
        return len(self.ecolor)

    def opp(self, d: int) -> int:
        return d ^ 1

    def edge_of(self, d: int) -> int:
        return d >> 1

    def target(self, d: int) -> int:
        return self.origin[d ^ 1]

    def is_out(self, d: int) -> bool:
        """True if the edge is directed away from origin(d)."""
        return self.etail[d >> 1] == d

    def darts_of_edge(self, e: int) -> tuple[int, int]:
        return 2 * e, 2 * e + 1

    def dart_index(self, d: int) -> int:
        return self._pos[d][1]

    def rot_next(self, d: int) -> int:
        v, i = self._pos[d]
        r = self.rot[v]
        return r[(i + 1) % len(r)]

    def rot_prev(self, d: int) -> int:
        v, i = self._pos[d]
        r = self.rot[v]
        return r[(i - 1) % len(r)]

    def face_next(self, d: int) -> int:
        """Next dart of the face to the left of d."""
        return self.rot_prev(d ^ 1)

    # -- boundary helpers ------------------------------------------------------

    def boundary_index(self) -> dict:
        return {v: i for i, v in enumerate(self.boundary)}

    def real_edge_between(self, u: int, v: int) -> Optional[int]:
        for d in self.rot[u]:
            if self.ereal[d >> 1] and self.target(d) == v:
                return d >> 1
        return None

    def boundary_darts_cw(self) -> list[int]:
        """Darts v -> previous-boundary-vertex, i.e. the outer face walk."""
        out = []
        n = len(self.boundary)
        for i, v in enumerate(self.boundary):
            out.append(self.rot[v][-1])
        return out

    def inner_darts(self, v: int) -> tuple[int, ...]:
        if self.verts[v].locus != "boundary":
            return self.rot[v]
        return self.rot[v][1:-1]

    # -- faces -------------------------------------------------------------------

    def faces(self) -> list[list[int]]:
        """All face orbits (darts, face on the left), outer face included."""
        seen = [False] * len(self.origin)
        out = []
        for d0 in range(len(self.origin)):
            if seen[d0]:
                continue
            walk = []
            d = d0
            while not seen[d]:
                seen[d] = True
                walk.append(d)
                d = self.face_next(d)
            if d != d0:
                raise StructureError("face traversal is not a permutation orbit")
            out.append(walk)
        return out

    def outer_face(self) -> list[int]:
        if not self.boundary:
            raise StructureError("dessin has no boundary")
        v0 = self.boundary[0]
        d = self.rot[v0][-1]
        walk = [d]
        cur = self.face_next(d)
        while cur != d:
            walk.append(cur)
            cur = self.face_next(cur)
        return walk

    # -- misc ---------------------------------------------------------------------

    def vertex_ids(self, pred) -> list[int]:
        return [i for i, v in enumerate(self.verts) if pred(v)]

    def __eq__(self, other):
        if not isinstance(other, Dessin):
            return NotImplemented
        return (self.verts, self.rot, self.ecolor, self.etail, self.ereal,
                self.boundary) == (other.verts, other.rot, other.ecolor,
                                   other.etail, other.ereal, other.boundary)

    def __hash__(self):
        return hash((self.verts, self.rot, self.ecolor, self.etail,
                     self.ereal, self.boundary))

    # -- serialization ---------------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "schema": "dessin/1",
            "vertices": [
                {
                    "id": i,
                    "color": v.color,
                    "locus": v.locus,
                    "singular": v.singular,
                    "isolated": v.isolated,
                }
                for i, v in enumerate(self.verts)
            ],
            "rotation": {str(i): list(r) for i, r in enumerate(self.rot)},
            "edges": [
                {
                    "halves": [2 * e, 2 * e + 1],
                    "color": self.ecolor[e],
                    "tail": self.etail[e],
                    "real": self.ereal[e],
                }
                for e in range(self.n_edges)
            ],
            "boundary": list(self.boundary),
            "degree_hint": self.degree_hint,
            "cuts": [
                {"kind": c[0], "color": c[1], "path": list(c[2])} for c in self.cuts
            ],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, separators=(",", ":"))

    @staticmethod
    def from_json(doc: dict, normalize: bool = True) -> "Dessin":
        if doc.get("schema") != "dessin/1":
            raise StructureError("not a dessin/1 document")
        vs = sorted(doc["vertices"], key=lambda r: r["id"])
        if [r["id"] for r in vs] != list(range(len(vs))):
            raise StructureError("vertex ids must be 0..n-1")
        verts = []
        for r in vs:
            if r["color"] not in VERTEX_COLORS:
                raise StructureError(f"unknown vertex color {r['color']!r}")
            if r["locus"] not in ("boundary", "interior"):
                raise StructureError(f"unknown locus {r['locus']!r}")
            verts.append(Vertex(r["color"], r["locus"], r.get("singular"),
                                bool(r.get("isolated", False))))
        edges = sorted(doc["edges"], key=lambda r: r["halves"][0])
        ecolor, etail, ereal = [], [], []
        for e, r in enumerate(edges):
            if r["halves"] != [2 * e, 2 * e + 1]:
                raise StructureError("edge halves must be consecutive pairs")
            if r["color"] not in EDGE_COLORS:
                raise StructureError(f"unknown edge color {r['color']!r}")
            if r["tail"] not in (2 * e, 2 * e + 1):
                raise StructureError("tail must be one of the edge halves")
            ecolor.append(r["color"])
            etail.append(r["tail"])
            ereal.append(bool(r["real"]))
        rot = [doc["rotation"].get(str(i), []) for i in range(len(verts))]
        d = Dessin(verts, rot, ecolor, etail, ereal, doc["boundary"],
                   doc.get("degree_hint"),
                   tuple((c["kind"], c["color"], tuple(c["path"]))
                         for c in doc.get("cuts", ())))
        if normalize:
            d = normalize_monochrome(d)
        return d

    @staticmethod
    def loads(s: str, normalize: bool = True) -> "Dessin":
        return Dessin.from_json(json.loads(s), normalize=normalize)


# ---------------------------------------------------------------------------
# mutable builder


class DessinBuilder:
    def __init__(self):
        self.verts: list[Vertex] = []
        self.rot: list[list[int]] = []
        self.ecolor: list[str] = []
        self.etail: list[int] = []
        self.ereal: list[bool] = []
        self.boundary: list[int] = []
        self.degree_hint = None
        self.cuts: list = []

    @staticmethod
    def thaw(d: Dessin) -> "DessinBuilder":
        b = DessinBuilder()
        b.verts = list(d.verts)
        b.rot = [list(r) for r in d.rot]
        b.ecolor = list(d.ecolor)
        b.etail = list(d.etail)
        b.ereal = list(d.ereal)
        b.boundary = list(d.boundary)
        b.degree_hint = d.degree_hint
        b.cuts = list(d.cuts)
        return b

    def add_vertex(self, color: str, locus: str = "interior",
                   singular: Optional[int] = None, isolated: bool = False) -> int:
        self.verts.append(Vertex(color, locus, singular, isolated))
        self.rot.append([])
        return len(self.verts) - 1

    def add_edge(self, u: int, v: int, color: str, tail_end: int,
                 real: bool = False, u_pos: Optional[int] = None,
                 v_pos: Optional[int] = None) -> int:
        """Add an edge u-v; tail_end selects the tail vertex (u or v).

        u_pos / v_pos are insertion indices into the rotations (append if None).
        Returns the edge id; darts are (2e, 2e+1) at u and v respectively.
        """
        e = len(self.ecolor)
        du, dv = 2 * e, 2 * e + 1
        self.ecolor.append(color)
        self.ereal.append(real)
        if tail_end == u:
            self.etail.append(du)
        elif tail_end == v:
            self.etail.append(dv)
        else:
            raise ValueError("tail_end must be one of the endpoints")
        if u_pos is None:
            self.rot[u].append(du)
        else:
            self.rot[u].insert(u_pos, du)
        if v_pos is None:
            self.rot[v].append(dv)
        else:
            self.rot[v].insert(v_pos, dv)
        return e

    def freeze(self) -> Dessin:
        return Dessin(self.verts, self.rot, self.ecolor, self.etail,
                      self.ereal, self.boundary, self.degree_hint,
                      tuple(self.cuts))

    def compact(self, drop_vertices: Iterable[int] = (), drop_edges: Iterable[int] = ()) -> Dessin:
        """Freeze after removing the given vertices/edges and renumbering."""
        dropv = set(drop_vertices)
        drope = set(drop_edges)
        for v in dropv:
            for d in self.rot[v]:
                if (d >> 1) not in drope:
                    raise ValueError(f"vertex {v} still has live edge {d >> 1}")
        vmap = {}
        verts, rot = [], []
        for i, vx in enumerate(self.verts):
            if i in dropv:
                continue
            vmap[i] = len(verts)
            verts.append(vx)
        emap = {}
        ecolor, etail, ereal = [], [], []
        for e in range(len(self.ecolor)):
            if e in drope:
                continue
            emap[e] = len(ecolor)
            ecolor.append(self.ecolor[e])
            ereal.append(self.ereal[e])
            ne = emap[e]
            etail.append(2 * ne + (self.etail[e] & 1))
        for i, vx in enumerate(self.verts):
            if i in dropv:
                continue
            rot.append([2 * emap[d >> 1] + (d & 1) for d in self.rot[i]
                        if (d >> 1) not in drope])
        boundary = [vmap[v] for v in self.boundary if v not in dropv]
        cuts = []
        for kind, color, path in self.cuts:
            if all(p in vmap for p in path):
                cuts.append((kind, color, tuple(vmap[p] for p in path)))
        return Dessin(verts, rot, ecolor, etail, ereal, boundary,
                      self.degree_hint, tuple(cuts))


def normalize_monochrome(d: Dessin) -> Dessin:
    """Fuse interior valence-2 monochrome vertices (except recorded cut points)."""
    protected = set()
    for kind, color, path in d.cuts:
        protected.update(path)
    while True:
        fused = False
        for v, vx in enumerate(d.verts):
            if (vx.locus == "interior" and vx.color in COLOR_OF_MONO
                    and len(d.rot[v]) == 2 and v not in protected):
                d1, d2 = d.rot[v]
                e1, e2 = d1 >> 1, d2 >> 1
                if e1 == e2:
                    continue  # loop at the vertex: leave alone
                if d.ecolor[e1] != d.ecolor[e2]:
                    continue
                if d.is_out(d1) == d.is_out(d2):
                    continue  # not a pass-through orientation
                b = DessinBuilder.thaw(d)
                u, up = b_other_end(b, d1)
                w, wp = b_other_end(b, d2)
                # replace edge e1's far half to point at w, drop e2 and v
                tail_end = u if d.is_out(d2) else w  # flow u -> v -> w or w -> v -> u
                color = d.ecolor[e1]
                # rebuild by editing rotations: reuse e1, darts (2e1, 2e1+1)
                far1 = d1 ^ 1  # dart at u
                far2 = d2 ^ 1  # dart at w
                b.rot[w][b.rot[w].index(far2)] = d1  # dart d1 now lives at w
                b.rot[v] = []
                if d.is_out(far1):  # u is tail
                    b.etail[e1] = far1
                else:
                    b.etail[e1] = d1
                b.ereal[e1] = d.ereal[e1] or d.ereal[e2]
                out = b.compact(drop_vertices=[v], drop_edges=[e2])
                d = out
                fused = True
                break
        if not fused:
            return d


def b_other_end(b: DessinBuilder, dart: int) -> tuple[int, int]:
    far = dart ^ 1
    for v, r in enumerate(b.rot):
        if far in r:
            return v, r.index(far)
    raise StructureError("dangling dart")


# ---------------------------------------------------------------------------
# validation


def _structural_check(d: Dessin) -> None:
    n = d.n_vertices
    if not d.boundary:
        raise StructureError("empty boundary")
    bset = set(d.boundary)
    if len(bset) != len(d.boundary):
        raise StructureError("boundary visits a vertex twice")
    for v, vx in enumerate(d.verts):
        if vx.color not in VERTEX_COLORS:
            raise StructureError(f"unknown color at vertex {v}")
        if (vx.locus == "boundary") != (v in bset):
            raise StructureError(f"locus flag disagrees with boundary walk at {v}")
        if not d.rot[v]:
            raise StructureError(f"isolated vertex {v}")
    # each consecutive boundary pair joined by exactly one real edge, matching
    # the first/last rotation slots
    nb = len(d.boundary)
    real_seen = set()
    for i, v in enumerate(d.verts):
        pass
    for i in range(nb):
        u = d.boundary[i]
        w = d.boundary[(i + 1) % nb]
        du = d.rot[u][0]
        if not d.ereal[du >> 1] or d.target(du) != w:
            raise StructureError(
                f"first rotation slot at {u} is not the real edge toward {w}")
        dw = d.rot[w][-1]
        if dw != (du ^ 1):
            raise StructureError(
                f"last rotation slot at {w} is not the reverse of the edge from {u}")
        real_seen.add(du >> 1)
    for e in range(d.n_edges):
        if d.ereal[e] != (e in real_seen):
            raise StructureError(f"real flag wrong on edge {e}")
        u, w = d.origin[2 * e], d.origin[2 * e + 1]
        for x in (u, w):
            if d.ereal[e] and d.verts[x].locus != "boundary":
                raise StructureError(f"real edge {e} touches interior vertex {x}")
    # connectivity
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for dart in d.rot[v]:
            t = d.target(dart)
            if t not in seen:
                seen.add(t)
                stack.append(t)
    if len(seen) != n:
        raise StructureError("dessin is not connected")
    # disk embedding: Euler formula and outer face = boundary walk
    faces = d.faces()
    if len(faces) != d.n_edges - n + 2:
        raise StructureError(
            f"not planar: {len(faces)} faces vs expected {d.n_edges - n + 2}")
    outer = set(d.outer_face())
    expect = set(d.boundary_darts_cw())
    if outer != expect:
        raise StructureError("outer face is not the boundary circle")


def _alternation_ok(d: Dessin, v: int) -> bool:
    darts = d.rot[v]
    flags = [d.is_out(x) for x in darts]
    if len(flags) == 1:
        return True
    if d.verts[v].locus == "boundary":
        return all(flags[i] != flags[i + 1] for i in range(len(flags) - 1))
    return all(flags[i] != flags[(i + 1) % len(flags)] for i in range(len(flags)))


def validate(d: Dessin, profile: str = "nodal_cuspidal") -> ValidationReport:
    """Check all dessin invariants; structural defects raise StructureError."""
    if profile not in ("nodal_cuspidal", "generic", "unramified"):
        raise ValueError(f"unknown profile {profile!r}")
    _structural_check(d)
    out: list[Violation] = []

    # color/direction compatibility
    for e in range(d.n_edges):
        col = d.ecolor[e]
        tail_v = d.origin[d.etail[e]]
        head_v = d.origin[d.etail[e] ^ 1]
        tc, hc = d.verts[tail_v].color, d.verts[head_v].color
        if tc not in TAILS[col]:
            out.append(Violation("color-direction",
                                 f"{col} edge {e} leaves a {tc} vertex",
                                 vertices=(tail_v,), edges=(e,)))
        if hc not in HEADS[col]:
            out.append(Violation("color-direction",
                                 f"{col} edge {e} enters a {hc} vertex",
                                 vertices=(head_v,), edges=(e,)))

    # monochrome vertices: one color, valence >= 2
    for v, vx in enumerate(d.verts):
        if vx.color in COLOR_OF_MONO:
            col = COLOR_OF_MONO[vx.color]
            if any(d.ecolor[x >> 1] != col for x in d.rot[v]):
                out.append(Violation("monochrome-color",
                                     f"vertex {v} touches a foreign color",
                                     vertices=(v,)))
            if len(d.rot[v]) < 2:
                out.append(Violation("monochrome-valence",
                                     f"monochrome vertex {v} has valence < 2",
                                     vertices=(v,)))
        if vx.singular is not None and vx.color != "cross":
            out.append(Violation("singular-color",
                                 f"singular marker on non-cross vertex {v}",
                                 vertices=(v,)))

    # rotation alternation
    for v in range(d.n_vertices):
        if not _alternation_ok(d, v):
            out.append(Violation("alternation",
                                 f"in/out slots do not alternate at vertex {v}",
                                 vertices=(v,)))

    # no directed monochrome cycles
    adj: dict[int, list[int]] = {}
    for e in range(d.n_edges):
        t, h = d.origin[d.etail[e]], d.origin[d.etail[e] ^ 1]
        if d.verts[t].color in COLOR_OF_MONO and d.verts[h].color in COLOR_OF_MONO:
            adj.setdefault(t, []).append(h)
    color_mark: dict[int, int] = {}

    def dfs(u) -> bool:
        color_mark[u] = 1
        for w in adj.get(u, ()):
            st = color_mark.get(w, 0)
            if st == 1:
                return True
            if st == 0 and dfs(w):
                return True
        color_mark[u] = 2
        return False

    for u in list(adj):
        if color_mark.get(u, 0) == 0 and dfs(u):
            out.append(Violation("monochrome-cycle",
                                 "directed monochrome cycle present",
                                 vertices=(u,)))
            break

    # cross valences
    for v, vx in enumerate(d.verts):
        if vx.color != "cross":
            continue
        val = len(d.rot[v])
        m = vx.singular or 1
        if m not in (1, 2, 3):
            out.append(Violation("cross-multiplicity",
                                 f"multiplicity {m} out of range at {v}",
                                 vertices=(v,)))
            continue
        want = 2 * m if vx.locus == "interior" else m + 1
        if val != want:
            out.append(Violation("cross-valence",
                                 f"cross vertex {v} (mult {m}) has valence "
                                 f"{val}, expected {want}",
                                 vertices=(v,)))
        if vx.locus == "boundary" and vx.singular:
            reals = [d.rot[v][0], d.rot[v][-1]]
            solid = all(d.ecolor[x >> 1] == "solid" for x in reals)
            if vx.isolated != solid:
                out.append(Violation("isolated-flag",
                                     f"isolated flag at {v} disagrees with "
                                     f"its real edge colors",
                                     vertices=(v,)))
        if vx.locus == "interior" and vx.isolated:
            out.append(Violation("isolated-flag",
                                 f"interior vertex {v} marked isolated",
                                 vertices=(v,)))

    # degree: weighted bold incidences at white vertices (see degree())
    try:
        deg = degree(d, checked=False)
        if deg <= 0 or deg % 3 != 0:
            out.append(Violation("degree",
                                 f"degree {deg} not a positive multiple of 3"))
        elif d.degree_hint is not None and deg != d.degree_hint:
            out.append(Violation("degree",
                                 f"degree {deg} != declared {d.degree_hint}"))
    except ValueError as exc:
        out.append(Violation("degree", str(exc)))

    if profile in ("generic", "unramified"):
        if profile == "unramified":
            for v, vx in enumerate(d.verts):
                if vx.color == "cross" and vx.locus == "interior":
                    out.append(Violation("unramified",
                                         f"interior cross vertex {v}",
                                         vertices=(v,)))
    if profile == "generic":
        expected = {("black", "interior"): 6, ("black", "boundary"): 4,
                    ("white", "interior"): 4, ("white", "boundary"): 3}
        for v, vx in enumerate(d.verts):
            key = (vx.color, vx.locus)
            if key in expected and len(d.rot[v]) != expected[key]:
                out.append(Violation("generic-valence",
                                     f"{vx.color} vertex {v} has valence "
                                     f"{len(d.rot[v])}, generic expects "
                                     f"{expected[key]}",
                                     vertices=(v,)))
            if vx.color == "cross" and vx.singular:
                out.append(Violation("generic-valence",
                                     f"singular vertex {v} in generic profile",
                                     vertices=(v,)))
            if vx.color in COLOR_OF_MONO and vx.locus == "interior":
                out.append(Violation("generic-valence",
                                     f"interior monochrome vertex {v} in "
                                     f"generic profile",
                                     vertices=(v,)))
    return ValidationReport(tuple(out))


# ---------------------------------------------------------------------------
# degree, pillars, regions, scheme


def degree(d: Dessin, checked: bool = True) -> int:
    """Sheet count over the bold interval: half the weighted bold incidences
    at white vertices (interior darts weigh 2, boundary darts 1)."""
    if checked:
        rep = validate(d)
        if not rep.ok:
            raise ValueError(f"invalid dessin: {rep}")
    total = 0
    for v, vx in enumerate(d.verts):
        if vx.color != "white":
            continue
        for dart in d.rot[v]:
            if d.ecolor[dart >> 1] != "bold":
                continue
            total += 1 if d.ereal[dart >> 1] else 2
    if total % 2 != 0:
        raise ValueError(f"bold incidence count {total} is odd")
    return total // 2


@dataclass(frozen=True)
class Pillar:
    kind: str               # "dotted" | "bold"
    vertices: tuple         # vertex ids along the segment (endpoints included)
    white_count: int
    classification: str     # oval | zigzag | wave | jump | degenerate
    contains_isolated_singular: bool = False


def pillars(d: Dessin) -> list[Pillar]:
    """Maximal real mono-colored segments, plus degenerate pillars for
    isolated singular vertices; reported in boundary order from the least
    vertex id among all pillar start candidates."""
    nb = len(d.boundary)
    ecol = []
    for i in range(nb):
        u = d.boundary[i]
        e = d.rot[u][0] >> 1
        ecol.append(d.ecolor[e])

    out: list[Pillar] = []

    def classify(kind: str, whites: int) -> str:
        if kind == "dotted":
            return "oval" if whites % 2 == 0 else "zigzag"
        return "wave" if whites % 2 == 0 else "jump"

    for kind in ("dotted", "bold"):
        # break the cyclic run structure at positions where the color differs
        runs = []
        i = 0
        if all(c == kind for c in ecol):
            # fully mono-colored boundary: segments are delimited by crosses
            crosses = [i for i, v in enumerate(d.boundary)
                       if d.verts[v].color == "cross"]
            if not crosses:
                return out  # degenerate circle: no pillar structure
            for a_i in range(len(crosses)):
                a = crosses[a_i]
                b = crosses[(a_i + 1) % len(crosses)]
                seg = []
                j = a
                while True:
                    seg.append(d.boundary[j])
                    if j == b and len(seg) > 1:
                        break
                    j = (j + 1) % nb
                    if j == a:
                        seg.append(d.boundary[j])
                        break
                runs.append(seg)
        else:
            for i in range(nb):
                if ecol[i] == kind and ecol[i - 1] != kind:
                    seg = [d.boundary[i]]
                    j = i
                    while ecol[j] == kind:
                        j2 = (j + 1) % nb
                        seg.append(d.boundary[j2])
                        j = j2
                    runs.append(seg)
        for seg in runs:
            whites = sum(1 for v in seg if d.verts[v].color == "white")
            out.append(Pillar(kind=kind, vertices=tuple(seg),
                              white_count=whites,
                              classification=classify(kind, whites)))
    # degenerate pillars: isolated singular crosses sit inside solid runs
    for i, v in enumerate(d.boundary):
        vx = d.verts[v]
        if vx.color == "cross" and vx.singular and vx.isolated:
            out.append(Pillar(kind="dotted", vertices=(v,), white_count=0,
                              classification="oval",
                              contains_isolated_singular=True))
    # deterministic order: by position of least vertex id
    out.sort(key=lambda p: min(p.vertices))
    return out


@dataclass(frozen=True)
class Region:
    darts: tuple
    vertices: tuple
    essential_count: int
    triangular: bool


def regions(d: Dessin) -> list[Region]:
    outer = set(d.outer_face())
    out = []
    for walk in d.faces():
        if set(walk) == outer:
            continue
        vs = tuple(dict.fromkeys(d.origin[x] for x in walk))
        ess = len({v for v in vs if d.verts[v].color in ("black", "white", "cross")})
        out.append(Region(darts=tuple(walk), vertices=vs,
                          essential_count=ess, triangular=(ess == 3)))
    return out


@dataclass(frozen=True)
class SchemeSummary:
    hyperbolic: bool
    oval_count: int
    zigzag_count: int
    long_component_present: bool
    singular_points: tuple
    type_flag: str = "unknown"


def real_scheme(d: Dessin) -> SchemeSummary:
    hyperbolic = all(d.ecolor[e] == "dotted" for e in range(d.n_edges)
                     if d.ereal[e])
    sing = []
    for v, vx in enumerate(d.verts):
        if vx.color == "cross" and vx.singular:
            if vx.isolated:
                kind = "isolated"
            else:
                kind = "node" if vx.singular == 2 else "cusp"
            sing.append((v, kind))
    ovals = zigzags = 0
    if not hyperbolic:
        for p in pillars(d):
            if p.kind != "dotted" or p.contains_isolated_singular:
                continue
            if p.classification == "oval":
                ovals += 1
            elif p.classification == "zigzag":
                zigzags += 1
    if hyperbolic:
        ovals = zigzags = 0
    return SchemeSummary(
        hyperbolic=hyperbolic,
        oval_count=ovals,
        zigzag_count=zigzags,
        long_component_present=not hyperbolic,
        singular_points=tuple(sing),
    )
