"""Local rewriting of dessins: the move catalog and the match/apply engine.

Rules live in ``data/rules/*.json``.  Most are *chain rules*: the pattern is a
boundary segment (vertices and real arcs, flanked by two stub arcs) together
with interior vertices, declared interior edges, and *legs* (dangling
half-edges that survive the rewrite and re-attach to replacement slots of the
same name).  Reversible rules are stored once; the inverse swaps pattern and
replacement.  A few moves are edge surgery rather than chain replacement
(monochrome modification and its stopped form, bridges); their transforms are
built in, with the data file carrying the descriptor.

Anchors are concrete id assignments and become stale after any application:
re-matching is mandatory.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Callable, Iterable, Optional

from .combmap import (COLOR_OF_MONO, HEADS, MONO_OF, TAILS, Dessin,
                      DessinBuilder, StructureError, validate)

LEVELS = ("elementary", "zigzag", "singular", "compound")


class RuleError(ValueError):
    pass


class RejectedMove(RuleError):
    """A guard failed on the would-be result."""


class NoMatch(RuleError):
    pass


# ---------------------------------------------------------------------------
# rule data model


@dataclass(frozen=True)
class ChainVertex:
    name: str
    color: str
    singular: Optional[int] = None
    isolated: bool = False


@dataclass(frozen=True)
class Fragment:
    chain: tuple            # alternating ChainVertex and arc dicts, stubs at ends
    interior: dict          # name -> ChainVertex
    slots: dict             # name -> tuple of slot strings
    edges: dict             # name -> {"color", "tail"}

    @staticmethod
    def parse(doc: dict) -> "Fragment":
        chain = []
        for item in doc.get("chain", ()):
            kind, rest = item.split(":", 1)
            if kind == "stub":
                color, dirn = rest.split(":")
                chain.append({"stub": (color, dirn)})
            elif kind == "arc":
                color, tail = rest.split(":")
                chain.append({"arc": (color, tail)})
            elif kind == "v":
                parts = rest.split(":")
                name, color = parts[0], parts[1]
                sing = None
                iso = False
                for p in parts[2:]:
                    k, v = p.split("=")
                    if k == "sing":
                        sing = int(v)
                    elif k == "iso":
                        iso = bool(int(v))
                chain.append(ChainVertex(name, color, sing, iso))
            else:
                raise RuleError(f"bad chain item {item!r}")
        interior = {}
        for name, spec in doc.get("interior", {}).items():
            interior[name] = ChainVertex(name, spec["color"],
                                         spec.get("singular"),
                                         bool(spec.get("isolated", False)))
        slots = {k: tuple(v) for k, v in doc.get("slots", {}).items()}
        edges = dict(doc.get("edges", {}))
        return Fragment(tuple(chain), interior, slots, edges)

    def vertex_names(self) -> list[str]:
        out = [c.name for c in self.chain if isinstance(c, ChainVertex)]
        out.extend(self.interior)
        return out

    def leg_names(self) -> set:
        out = set()
        for seq in self.slots.values():
            for s in seq:
                if s.startswith("leg:"):
                    out.add(s.split(":")[1])
        return out


@dataclass(frozen=True)
class RewriteRule:
    name: str
    level: str
    reversible: bool
    inverse_name: Optional[str]
    pillar_preserving: bool
    guards: tuple
    variants: tuple          # (variant_name, pattern Fragment, replacement Fragment)
    builtin: Optional[str] = None
    sequence: tuple = ()     # for macro rules

    def inverse(self) -> "RewriteRule":
        if not self.reversible:
            raise RuleError(f"{self.name} is not reversible")
        if self.builtin:
            inv = {"mono-stop": "mono-resolve", "mono-resolve": "mono-stop",
                   "bridge-create": "bridge-destroy",
                   "bridge-destroy": "bridge-create",
                   "mono-modification": "mono-modification"}[self.builtin]
            return RewriteRule(self.inverse_name or inv, self.level, True,
                               self.name, self.pillar_preserving, self.guards,
                               (), builtin=inv)
        return RewriteRule(
            self.inverse_name or (self.name + "-inverse"), self.level, True,
            self.name, self.pillar_preserving, self.guards,
            tuple((vn, rep, pat) for vn, pat, rep in self.variants))


@dataclass(frozen=True)
class Anchor:
    rule: str
    variant: str
    mirrored: bool
    vmap: tuple              # sorted (pattern name, vertex id) pairs
    extra: tuple = ()        # builtin-specific data (edge ids, choices)

    def as_dict(self) -> dict:
        return dict(self.vmap)

    def key(self):
        return (self.variant, self.mirrored, self.vmap, self.extra)


# ---------------------------------------------------------------------------
# catalog loading


_CATALOG_CACHE: dict = {}

RULE_FILES = [
    "mono-modification", "mono-stop", "mono-resolve",
    "bridge-create", "bridge-destroy",
    "white-in", "white-out", "black-in", "black-out",
    "zigzag-straighten", "zigzag-create",
    "isol-passage", "isol-return", "a1-passage", "a1-return",
    "zz-remove", "zz-create", "jz-remove",
]


def _load_doc(name: str) -> dict:
    data = resources.files("dessinlab").joinpath(f"data/rules/{name}.json")
    return json.loads(data.read_text())


def load_rule(name: str) -> RewriteRule:
    if name in _CATALOG_CACHE:
        return _CATALOG_CACHE[name]
    doc = _load_doc(name)
    if "inverse_of" in doc:
        base = load_rule(doc["inverse_of"])
        rule = base.inverse()
        if rule.name != name:
            rule = RewriteRule(name, rule.level, True, base.name,
                               rule.pillar_preserving, rule.guards,
                               rule.variants, rule.builtin, rule.sequence)
    else:
        variants = tuple(
            (v.get("name", "only"), Fragment.parse(v["pattern"]),
             Fragment.parse(v["replacement"]))
            for v in doc.get("variants", ()))
        rule = RewriteRule(
            name=doc["name"],
            level=doc["level"],
            reversible=bool(doc.get("reversible", False)),
            inverse_name=doc.get("inverse"),
            pillar_preserving=bool(doc.get("pillar_preserving", False)),
            guards=tuple(doc.get("guards", ("valid",))),
            variants=variants,
            builtin=doc.get("builtin"),
            sequence=tuple(tuple(s) for s in doc.get("sequence", ())),
        )
    _CATALOG_CACHE[name] = rule
    return rule


def move_catalog(level: str) -> list[RewriteRule]:
    """Rule sets by level: elementary (6) < zigzag (+2) < singular (+4)
    < compound (+ derived macros and the stopped modification)."""
    if level not in LEVELS:
        raise RuleError(f"unknown level {level!r}")
    names = ["mono-modification", "bridge-create", "white-in", "white-out",
             "black-in", "black-out"]
    if level in ("zigzag", "singular", "compound"):
        names += ["zigzag-straighten", "zigzag-create"]
    if level in ("singular", "compound"):
        names += ["isol-passage", "isol-return", "a1-passage", "a1-return"]
    if level == "compound":
        names += ["jz-remove", "zz-remove", "zz-create",
                  "mono-stop", "mono-resolve"]
    return [load_rule(n) for n in names]


def lookup(name: str) -> RewriteRule:
    if name == "bridge":
        return load_rule("bridge-create")
    return load_rule(name)


# ---------------------------------------------------------------------------
# chain matching


def _chain_parts(frag: Fragment):
    chain = frag.chain
    if len(chain) < 2 or "stub" not in chain[0] or "stub" not in chain[-1]:
        raise RuleError("chain must start and end with stubs")
    stub_l = chain[0]["stub"]
    stub_r = chain[-1]["stub"]
    verts = [c for c in chain if isinstance(c, ChainVertex)]
    arcs = [c["arc"] for c in chain[1:-1] if isinstance(c, dict) and "arc" in c]
    if len(arcs) != len(verts) - 1:
        raise RuleError("chain arcs must sit between chain vertices")
    return stub_l, verts, arcs, stub_r


def _slot_matches(d: Dessin, dart: int, slot: str, ctx: dict) -> bool:
    parts = slot.split(":")
    e = dart >> 1
    if parts[0] == "leg":
        _, name, color, dirn = parts
        if d.ecolor[e] != color:
            return False
        if (dirn == "out") != d.is_out(dart):
            return False
        ctx["legs"][name] = dart
        return True
    if parts[0] == "edge":
        _, name, dirn = parts
        decl = ctx["frag"].edges[name]
        if d.ecolor[e] != decl["color"]:
            return False
        if (dirn == "out") != d.is_out(dart):
            return False
        ctx["edge_darts"].setdefault(name, []).append(dart)
        return True
    raise RuleError(f"bad slot {slot!r}")


def _match_vertex_slots(d: Dessin, v: int, frag: Fragment, name: str,
                        ctx: dict, mirrored: bool,
                        pin_dart: Optional[int] = None) -> bool:
    spec = frag.slots.get(name, ())
    vx = d.verts[v]
    if vx.locus == "boundary":
        inner = list(d.inner_darts(v))
        if mirrored:
            inner.reverse()
        if len(inner) != len(spec):
            return False
        return all(_slot_matches(d, dd, s, ctx) for dd, s in zip(inner, spec))
    # interior: cyclic; align the pinned dart with the first declared slot
    r = list(d.rot[v])
    if mirrored:
        r.reverse()
    if len(r) != len(spec):
        return False
    if pin_dart is None:
        # try all rotations
        for k in range(len(r)):
            trial = {"legs": dict(ctx["legs"]),
                     "edge_darts": {k2: list(v2) for k2, v2 in ctx["edge_darts"].items()},
                     "frag": ctx["frag"]}
            seq = r[k:] + r[:k]
            if all(_slot_matches(d, dd, s, trial) for dd, s in zip(seq, spec)):
                ctx["legs"] = trial["legs"]
                ctx["edge_darts"] = trial["edge_darts"]
                return True
        return False
    k = r.index(pin_dart)
    seq = r[k:] + r[:k]
    return all(_slot_matches(d, dd, s, ctx) for dd, s in zip(seq, spec))


def _check_vertex(d: Dessin, v: int, cv: ChainVertex) -> bool:
    vx = d.verts[v]
    return (vx.color == cv.color and vx.singular == cv.singular
            and vx.isolated == cv.isolated)


def match_chain(d: Dessin, frag: Fragment, mirrored: bool) -> list[dict]:
    stub_l, verts, arcs, stub_r = _chain_parts(frag)
    nb = len(d.boundary)
    out = []
    if len(verts) > nb - 1:
        return out
    step = 1 if not mirrored else -1

    def arc_edge(pos_from: int) -> int:
        # real edge from boundary position pos to pos+1 (ccw)
        return d.rot[d.boundary[pos_from % nb]][0] >> 1

    for start in range(nb):
        ids = []
        ok = True
        for k in range(len(verts)):
            v = d.boundary[(start + step * k) % nb]
            if not _check_vertex(d, v, verts[k]):
                ok = False
                break
            ids.append(v)
        if not ok or len(set(ids)) != len(ids):
            continue
        ctx = {"legs": {}, "edge_darts": {}, "frag": frag}
        # internal arcs, found positionally along the boundary
        for k, (color, tail) in enumerate(arcs):
            pos_u = (start + step * k) % nb
            e = arc_edge(pos_u if not mirrored else pos_u - 1)
            if d.ecolor[e] != color:
                ok = False
                break
            tail_v = d.origin[d.etail[e]]
            if tail_v != ids[verts_index(verts, tail)]:
                ok = False
                break
        if not ok:
            continue
        # stubs: the real arcs beyond the chain ends
        u0, un = ids[0], ids[-1]
        prev_v = d.boundary[(start - step) % nb]
        next_v = d.boundary[(start + step * len(verts)) % nb]
        e_l = arc_edge(start - 1) if not mirrored else arc_edge(start)
        e_r = (arc_edge(start + len(verts) - 1) if not mirrored
               else arc_edge(start - len(verts)))
        if e_l == e_r or prev_v in ids or next_v in ids:
            continue
        cl, dl = stub_l
        cr, dr = stub_r
        if d.ecolor[e_l] != cl or d.ecolor[e_r] != cr:
            continue
        # "in": edge directed into the pattern end vertex
        if (d.origin[d.etail[e_l] ^ 1] == u0) != (dl == "in"):
            continue
        if (d.origin[d.etail[e_r] ^ 1] == un) != (dr == "in"):
            continue
        vmap = dict(zip([c.name for c in verts], ids))
        # chain vertex slots
        for k, cv in enumerate(verts):
            if not _match_vertex_slots(d, ids[k], frag, cv.name, ctx, mirrored):
                ok = False
                break
        if not ok:
            continue
        # interior vertices: resolve through declared edges
        pending = dict(frag.interior)
        progress = True
        while pending and progress and ok:
            progress = False
            for name, cv in list(pending.items()):
                dart = _interior_probe(frag, name, ctx)
                if dart is None:
                    continue
                v = d.target(dart)
                if v in vmap.values():
                    ok = False
                    break
                if not _check_vertex(d, v, cv):
                    ok = False
                    break
                if not _match_vertex_slots(d, v, frag, name, ctx, mirrored,
                                           pin_dart=dart ^ 1):
                    ok = False
                    break
                vmap[name] = v
                del pending[name]
                progress = True
        if not ok or pending:
            continue
        # edge declarations: both darts seen, tail correct
        for name, decl in frag.edges.items():
            darts = ctx["edge_darts"].get(name, [])
            if len(darts) != 2 or (darts[0] >> 1) != (darts[1] >> 1):
                ok = False
                break
            e = darts[0] >> 1
            if d.origin[d.etail[e]] != vmap.get(decl["tail"]):
                ok = False
                break
        if not ok:
            continue
        # legs must leave the pattern
        legset = set(vmap.values())
        bad = False
        for name, dart in ctx["legs"].items():
            if d.target(dart) in legset:
                bad = True
                break
        if bad:
            continue
        edge_ids = {}
        for ename, darts in ctx["edge_darts"].items():
            if len(darts) == 2:
                edge_ids[ename] = darts[0] >> 1
        out.append({"vmap": vmap, "legs": dict(ctx["legs"]),
                    "stubs": (e_l, e_r), "mirrored": mirrored,
                    "edge_ids": edge_ids})
    return out


def verts_index(verts, name):
    for i, c in enumerate(verts):
        if c.name == name:
            return i
    raise RuleError(f"arc tail {name!r} not a chain vertex")


def _interior_probe(frag: Fragment, name: str, ctx: dict) -> Optional[int]:
    """A dart pointing at the interior vertex, from an already-matched slot."""
    for ename, decl in frag.edges.items():
        darts = ctx["edge_darts"].get(ename)
        if not darts:
            continue
        ends = _edge_ends(frag, ename)
        if name in ends:
            other = ends[0] if ends[1] == name else ends[1]
            if other != name and len(darts) >= 1:
                return darts[0]
    return None


def _edge_ends(frag: Fragment, ename: str) -> tuple:
    ends = []
    for vname, seq in frag.slots.items():
        for s in seq:
            parts = s.split(":")
            if parts[0] == "edge" and parts[1] == ename:
                ends.append(vname)
    if len(ends) != 2:
        raise RuleError(f"edge {ename} must appear in exactly two slots")
    return tuple(ends)


# ---------------------------------------------------------------------------
# chain application


def apply_chain(d: Dessin, frag_pat: Fragment, frag_rep: Fragment,
                m: dict) -> Dessin:
    b = DessinBuilder.thaw(d)
    mirrored = m["mirrored"]
    vmap = m["vmap"]
    legs = m["legs"]
    e_l, e_r = m["stubs"]
    _, pverts, parcs, _ = _chain_parts(frag_pat)
    stub_l, rverts, rarcs, stub_r = _chain_parts(frag_rep)

    doomed_vertices = set(vmap.values())
    doomed_edges = set(m["edge_ids"].values())
    for k in range(len(pverts) - 1):
        e = d.real_edge_between(vmap[pverts[k].name], vmap[pverts[k + 1].name])
        doomed_edges.add(e)

    # create replacement vertices
    new_ids = {}
    for cv in rverts:
        new_ids[cv.name] = b.add_vertex(cv.color, "boundary", cv.singular,
                                        cv.isolated)
    for name, cv in frag_rep.interior.items():
        new_ids[name] = b.add_vertex(cv.color, "interior", cv.singular,
                                     cv.isolated)

    # create replacement internal edges (real arcs + declared interior edges)
    arc_edge_ids = []
    for k, (color, tail) in enumerate(rarcs):
        u = new_ids[rverts[k].name]
        w = new_ids[rverts[k + 1].name]
        t = new_ids[tail]
        e = len(b.ecolor)
        b.ecolor.append(color)
        b.ereal.append(True)
        b.etail.append(2 * e if t == u else 2 * e + 1)
        arc_edge_ids.append(e)
    rep_edge_ids = {}
    for ename, decl in frag_rep.edges.items():
        ends = _edge_ends(frag_rep, ename)
        u, w = new_ids[ends[0]], new_ids[ends[1]]
        t = new_ids[decl["tail"]]
        e = len(b.ecolor)
        b.ecolor.append(decl["color"])
        b.ereal.append(False)
        b.etail.append(2 * e if t == u else 2 * e + 1)
        rep_edge_ids[ename] = (e, ends)

    # rotations for new vertices
    def slot_dart(vname: str, slot: str) -> int:
        parts = slot.split(":")
        if parts[0] == "leg":
            return legs[parts[1]]
        ename = parts[1]
        e, ends = rep_edge_ids[ename]
        side = 0 if ends[0] == vname else 1
        if ends[0] == ends[1]:
            raise RuleError("loops not supported in replacements")
        return 2 * e + side

    # stub darts: pattern-side darts of the surviving stub edges
    dart_l = 2 * e_l + (0 if d.origin[2 * e_l] == vmap[pverts[0].name] else 1)
    dart_r = 2 * e_r + (0 if d.origin[2 * e_r] == vmap[pverts[-1].name] else 1)

    for k, cv in enumerate(rverts):
        v = new_ids[cv.name]
        inner = [slot_dart(cv.name, s) for s in frag_rep.slots.get(cv.name, ())]
        if mirrored:
            inner.reverse()
        to_prev = dart_l if k == 0 else 2 * arc_edge_ids[k - 1] + 1
        to_next = dart_r if k == len(rverts) - 1 else 2 * arc_edge_ids[k]
        if mirrored:
            to_prev, to_next = to_next, to_prev
        b.rot[v] = [to_next] + inner + [to_prev]
    for name in frag_rep.interior:
        v = new_ids[name]
        seq = [slot_dart(name, s) for s in frag_rep.slots.get(name, ())]
        if mirrored:
            seq.reverse()
        b.rot[v] = seq

    # boundary splice
    old_chain = [vmap[c.name] for c in pverts]
    new_chain = [new_ids[c.name] for c in rverts]
    if mirrored:
        new_chain.reverse()
    nb = list(d.boundary)
    start = nb.index(old_chain[0] if not mirrored else old_chain[-1])
    seq_fwd = old_chain if not mirrored else list(reversed(old_chain))
    # verify the segment sits there
    for k, v in enumerate(seq_fwd):
        if nb[(start + k) % len(nb)] != v:
            raise RuleError("boundary splice misalignment")
    rest = [nb[(start + len(seq_fwd) + k) % len(nb)]
            for k in range(len(nb) - len(seq_fwd))]
    b.boundary = new_chain + rest

    # stub and leg darts were re-homed onto replacement vertices above
    for v in doomed_vertices:
        b.rot[v] = []
    out = b.compact(drop_vertices=doomed_vertices, drop_edges=doomed_edges)
    n_new = len(rverts) + len(frag_rep.interior)
    return out, list(range(out.n_vertices - n_new, out.n_vertices))


# ---------------------------------------------------------------------------
# builtins: monochrome modification / stop / resolve, bridges
#
# Two edges can be pinched through a region exactly when some face walk
# contains a dart of each with equal along-the-edge senses (geometrically the
# flows are then antiparallel across the region, which is what the in/out
# alternation at the transient vertex needs).


def _face_pairs(d: Dessin, want_real: Optional[bool]) -> list[tuple]:
    """Pairs (d1, d2) of same-color darts on a common inner face with equal
    direction senses; want_real=True yields (real dart, inner dart) pairs,
    want_real=None both-inner pairs."""
    out = []
    outer = set(d.outer_face())
    for walk in d.faces():
        if set(walk) == outer:
            continue
        for i in range(len(walk)):
            for j in range(i + 1, len(walk)):
                a, b = walk[i], walk[j]
                if (a >> 1) == (b >> 1):
                    continue
                if d.ecolor[a >> 1] != d.ecolor[b >> 1]:
                    continue
                if d.is_out(a) != d.is_out(b):
                    continue
                ra, rb = d.ereal[a >> 1], d.ereal[b >> 1]
                if want_real is None:
                    if ra or rb:
                        continue
                    out.append((min(a, b), max(a, b)))
                else:
                    if ra and not rb:
                        out.append((a, b))
                    elif rb and not ra:
                        out.append((b, a))
    return out


def match_builtin(d: Dessin, rule: RewriteRule) -> list[Anchor]:
    kind = rule.builtin
    out = []
    if kind in ("mono-modification", "mono-stop"):
        for a, b in _face_pairs(d, want_real=None):
            key = tuple(sorted((a, b)))
            out.append(Anchor(rule.name, kind, False, (), extra=key))
    elif kind == "mono-resolve":
        for v, vx in enumerate(d.verts):
            if (vx.locus == "interior" and vx.color in COLOR_OF_MONO
                    and len(d.rot[v]) == 4):
                for k in (0, 1):
                    out.append(Anchor(rule.name, kind, False,
                                      (("m", v),), extra=(k,)))
    elif kind == "bridge-create":
        for dr, di in _face_pairs(d, want_real=True):
            out.append(Anchor(rule.name, kind, False, (), extra=(dr, di)))
    elif kind == "bridge-destroy":
        nb = len(d.boundary)
        for i in range(nb):
            p = d.boundary[i]
            q = d.boundary[(i + 1) % nb]
            vp, vq = d.verts[p], d.verts[q]
            if vp.color not in COLOR_OF_MONO or vp.color != vq.color:
                continue
            if len(d.rot[p]) != 3 or len(d.rot[q]) != 3:
                continue
            e = d.real_edge_between(p, q)
            if e is None:
                continue
            # through-flow on the hanging edges, antiparallel outer arcs
            if d.is_out(d.rot[p][1]) == d.is_out(d.rot[q][1]):
                continue
            if d.is_out(d.rot[p][-1]) == d.is_out(d.rot[q][0]):
                continue
            ufar = d.target(d.rot[p][-1])
            wfar = d.target(d.rot[q][0])
            if ufar in (p, q) or wfar in (p, q):
                continue
            if d.target(d.rot[p][1]) in (p, q) or d.target(d.rot[q][1]) in (p, q):
                continue
            out.append(Anchor(rule.name, kind, False,
                              (("m1", p), ("m2", q)), extra=(e,)))
    else:
        raise RuleError(f"unknown builtin {kind}")
    seen = set()
    uniq = []
    for a in out:
        if a.key() in seen:
            continue
        seen.add(a.key())
        uniq.append(a)
    uniq.sort(key=lambda a: a.key())
    return uniq


def apply_builtin(d: Dessin, rule: RewriteRule, anchor: Anchor) -> Dessin:
    kind = rule.builtin
    if kind == "mono-modification":
        a, b = anchor.extra
        _require_pair(d, a, b)
        # swap the far darts: edges (a..) and (b..) exchange their far ends
        bld = DessinBuilder.thaw(d)
        ha, hb = a ^ 1, b ^ 1
        va, ia = d._pos[ha]
        vb, ib = d._pos[hb]
        bld.rot[va][ia] = hb
        bld.rot[vb][ib] = ha
        # equal senses mean the swapped darts carry equal in/out status, so
        # the tail flags remain correct without adjustment
        return bld.freeze()
    if kind == "mono-stop":
        a, b = anchor.extra
        _require_pair(d, a, b)
        bld = DessinBuilder.thaw(d)
        color = d.ecolor[a >> 1]
        m = bld.add_vertex(MONO_OF[color], "interior")
        cont_a, back_a = _split_at(bld, d, a, m)
        cont_b, back_b = _split_at(bld, d, b, m)
        # ccw around the transient vertex: cont(a), back(b), cont(b), back(a)
        bld.rot[m] = [cont_a, back_b, cont_b, back_a]
        return bld.freeze()
    if kind == "mono-resolve":
        v = anchor.as_dict()["m"]
        (k,) = anchor.extra
        r = d.rot[v]
        if len(r) != 4 or d.verts[v].locus != "interior":
            raise NoMatch("stale anchor: vertex is not an interior 4-valent one")
        bld = DessinBuilder.thaw(d)
        pairs = [(r[(0 + k) % 4], r[(1 + k) % 4]),
                 (r[(2 + k) % 4], r[(3 + k) % 4])]
        drop = []
        for p, q in pairs:
            if (p >> 1) == (q >> 1):
                raise NoMatch("loop at the stopped vertex")
            drop.append(_smooth(bld, d, p, q))
        bld.rot[v] = []
        return bld.compact(drop_vertices=[v], drop_edges=drop)
    if kind == "bridge-create":
        rx, ix = anchor.extra
        if not d.ereal[rx >> 1] or d.ereal[ix >> 1]:
            raise NoMatch("stale anchor")
        if d.is_out(rx) != d.is_out(ix):
            raise NoMatch("stale anchor: senses differ")
        _require_coface(d, rx, ix)
        bld = DessinBuilder.thaw(d)
        color = d.ecolor[rx >> 1]
        # boundary becomes [u, mb, ma, w] with u = origin(rx)
        u, w = d.origin[rx], d.target(rx)
        ma = bld.add_vertex(MONO_OF[color], "boundary")
        mb = bld.add_vertex(MONO_OF[color], "boundary")
        cont_r, back_r = _split_at(bld, d, rx, ma)   # real piece toward w at ma
        # the u piece's far dart (rx^1 re-homed) belongs at mb, not ma: but
        # _split_at put nothing into rotations yet, we place darts ourselves.
        cont_i, back_i = _split_at(bld, d, ix, mb)
        e_bridge = _new_edge(bld, color, real=True)
        # bridge direction: with both senses True the flow runs ma -> mb
        both_out = d.is_out(rx)
        bld.etail[e_bridge] = 2 * e_bridge if both_out else 2 * e_bridge + 1
        # ma: [to-next (w), inner = back_i (toward origin(ix)), to-prev (mb)]
        # mb: [to-next (ma), inner = cont_i (toward target(ix)), to-prev (u)]
        bld.rot[ma] = [cont_r, back_i, 2 * e_bridge]
        bld.rot[mb] = [2 * e_bridge + 1, cont_i, back_r]
        nb = list(d.boundary)
        iu = nb.index(u)
        if nb[(iu + 1) % len(nb)] != w:
            raise NoMatch("stale anchor: not a boundary edge from u to w")
        bld.boundary = nb[:iu + 1] + [mb, ma] + nb[iu + 1:]
        # real flags: the inner-edge pieces stay inner, real pieces stay real
        return bld.freeze()
    if kind == "bridge-destroy":
        amap = anchor.as_dict()
        p, q = amap["m1"], amap["m2"]
        (e_mid,) = anchor.extra
        if d.real_edge_between(p, q) != e_mid:
            raise NoMatch("stale anchor")
        bld = DessinBuilder.thaw(d)
        ip, iq = d.rot[p][1], d.rot[q][1]
        d_p = d.rot[p][-1]     # outer arc at p (toward its prev neighbor)
        d_q = d.rot[q][0]      # outer arc at q (toward its next neighbor)
        # fuse outer real arcs: keep d_p's edge, re-home d_p onto wfar's slot
        e_keep, e_drop = d_p >> 1, d_q >> 1
        wfar = d.target(d_q)
        bld.rot[wfar][d.dart_index(d_q ^ 1)] = d_p
        bld.etail[e_keep] = d_p if d.is_out(d_q ^ 1) else d_p ^ 1
        # fuse hanging inner edges: keep ip's edge
        ei_keep, ei_drop = ip >> 1, iq >> 1
        farq = d.target(iq)
        bld.rot[farq][d.dart_index(iq ^ 1)] = ip
        bld.etail[ei_keep] = ip if d.is_out(iq ^ 1) else ip ^ 1
        bld.rot[p] = []
        bld.rot[q] = []
        bld.boundary = [v for v in d.boundary if v not in (p, q)]
        return bld.compact(drop_vertices=[p, q],
                           drop_edges=[e_mid, e_drop, ei_drop])
    raise RuleError(f"unknown builtin {kind}")


def _require_pair(d: Dessin, a: int, b: int):
    if d.ecolor[a >> 1] != d.ecolor[b >> 1] or d.ereal[a >> 1] or d.ereal[b >> 1]:
        raise NoMatch("stale anchor")
    if d.is_out(a) != d.is_out(b):
        raise NoMatch("stale anchor: senses differ")
    _require_coface(d, a, b)


def _require_coface(d: Dessin, a: int, b: int):
    for walk in d.faces():
        if a in walk:
            if b in walk:
                return
            raise NoMatch("stale anchor: darts no longer share a face")
    raise NoMatch("stale anchor")


def _new_edge(bld: DessinBuilder, color: str, real: bool) -> int:
    e = len(bld.ecolor)
    bld.ecolor.append(color)
    bld.ereal.append(real)
    bld.etail.append(2 * e)
    return e


def _split_at(bld: DessinBuilder, d: Dessin, dart: int, m: int):
    """Split dart's edge at a new vertex m.

    The origin side keeps the old edge (dart stays put; its partner re-homes
    to m), the target side gets a new edge whose far dart replaces the old
    slot.  Returns the two darts at m: (toward target(dart), toward
    origin(dart)).  Rotation entries for m are the caller's business.
    """
    e = dart >> 1
    far = dart ^ 1
    hv, hi = d._pos[far]
    e2 = _new_edge(bld, d.ecolor[e], real=d.ereal[e])
    bld.ereal[e2] = d.ereal[e]
    bld.rot[hv][hi] = 2 * e2 + 1
    if d.is_out(dart):
        bld.etail[e2] = 2 * e2          # m -> target continues the flow
    else:
        bld.etail[e2] = 2 * e2 + 1      # target -> m
    # e's tail flag is unchanged in both cases (dart ids keep their roles)
    return (2 * e2, far)


def _smooth(bld: DessinBuilder, d: Dessin, p: int, q: int) -> int:
    """Join the far ends of darts p, q (both based at one vertex), dropping
    q's edge; returns the dropped edge id."""
    ep, eq = p >> 1, q >> 1
    if d.is_out(p) == d.is_out(q):
        raise NoMatch("resolution would not alternate")
    farq = d.target(q)
    bld.rot[farq][d.dart_index(q ^ 1)] = p
    bld.etail[ep] = p if d.is_out(q ^ 1) else p ^ 1
    return eq


# ---------------------------------------------------------------------------
# public engine


def match(d: Dessin, rule: RewriteRule) -> list[Anchor]:
    """All injective, interface-respecting embeddings, deduplicated, in a
    deterministic order."""
    if rule.sequence:
        return match_sequence(d, rule)
    if rule.builtin:
        return match_builtin(d, rule)
    out = []
    for vname, pat, rep in rule.variants:
        for mirrored in (False, True):
            for m in match_chain(d, pat, mirrored):
                vmap = tuple(sorted(m["vmap"].items()))
                out.append(Anchor(rule.name, vname, mirrored, vmap))
    # embeddings are deduplicated by image: a mirrored re-match of the same
    # site differs from its partner by at most a monochrome modification
    seen = set()
    uniq = []
    for a in sorted(out, key=lambda a: a.key()):
        image = tuple(sorted(dict(a.vmap).values()))
        if (a.variant, image) in seen:
            continue
        seen.add((a.variant, image))
        uniq.append(a)
    return uniq


def apply_ex(d: Dessin, rule: RewriteRule, anchor: Anchor,
             check: bool = True) -> tuple[Dessin, list[int]]:
    """Apply and also report the ids of vertices created by the rewrite."""
    if rule.sequence:
        out, new = apply_sequence(d, rule, anchor)
    elif rule.builtin:
        n0 = d.n_vertices
        out = apply_builtin(d, rule, anchor)
        # builtins create at most two vertices, always appended
        survivors = out.n_vertices
        created = {"mono-stop": 1, "bridge-create": 2}.get(rule.builtin, 0)
        new = list(range(survivors - created, survivors)) if created else []
    else:
        variant = next((v for v in rule.variants if v[0] == anchor.variant),
                       None)
        if variant is None:
            raise NoMatch(f"no variant {anchor.variant} in {rule.name}")
        _, pat, rep = variant
        ms = [m for m in match_chain(d, pat, anchor.mirrored)
              if tuple(sorted(m["vmap"].items())) == anchor.vmap]
        if not ms:
            raise NoMatch("stale anchor")
        out, new = apply_chain(d, pat, rep, ms[0])
    if check:
        report = validate(out)
        if not report.ok:
            raise RejectedMove(f"{rule.name} guard failed: {report}")
    return out, new


def apply(d: Dessin, rule: RewriteRule, anchor: Anchor,
          check: bool = True) -> Dessin:
    return apply_ex(d, rule, anchor, check)[0]


# macro rules (sequences) -----------------------------------------------------


def match_sequence(d: Dessin, rule: RewriteRule) -> list[Anchor]:
    """A sequence anchor is the anchor of its first step, filtered by the
    whole script running to completion."""
    first_rule = lookup(rule.sequence[0][0])
    out = []
    for a in match(d, first_rule):
        try:
            apply_sequence(d, rule, Anchor(rule.name, a.variant, a.mirrored,
                                           a.vmap, a.extra))
        except RuleError:
            continue
        out.append(Anchor(rule.name, a.variant, a.mirrored, a.vmap, a.extra))
    return out


def apply_sequence(d: Dessin, rule: RewriteRule,
                   anchor: Anchor) -> tuple[Dessin, list[int]]:
    steps = rule.sequence
    first_rule = lookup(steps[0][0])
    cur, fresh = apply_ex(d, first_rule,
                          Anchor(first_rule.name, anchor.variant,
                                 anchor.mirrored, anchor.vmap, anchor.extra))
    for step in steps[1:]:
        step_rule = lookup(step[0])
        anchors = match(cur, step_rule)
        # prefer anchors touching the freshly created vertices, keeping the
        # compound move local to its site
        touching = [a for a in anchors
                    if set(dict(a.vmap).values()) & set(fresh)]
        pick = touching or anchors
        if not pick:
            raise RejectedMove(f"sequence {rule.name}: {step[0]} has no match")
        cur, fresh = apply_ex(cur, step_rule, pick[0])
    return cur, fresh


def replay(d: Dessin, steps: Iterable[tuple]) -> Dessin:
    """Replay (rule_name, anchor) pairs; anchors as produced by match()."""
    cur = d
    for rule_name, anchor in steps:
        r = lookup(rule_name)
        cur = apply(cur, r, anchor)
    return cur
