"""Canonical codes for dessins: relabeling- and rotation-invariant encodings.

The code is the lexicographic minimum, over all boundary starting points and
(for the unoriented policy) both orientations, of a breadth-first traversal
transcript of the rotation system.  Equal codes imply an explicit isomorphism,
reconstructible from the two minimizing traversals.
"""

from __future__ import annotations

from dataclasses import dataclass

from .combmap import Dessin

_COLOR_ID = {"black": 0, "white": 1, "cross": 2,
             "mono_solid": 3, "mono_bold": 4, "mono_dotted": 5}
_ECOLOR_ID = {"solid": 0, "bold": 1, "dotted": 2}


@dataclass(frozen=True)
class CanonicalCode:
    data: bytes
    policy: str
    relation: str = "isomorphism"

    def __lt__(self, other):
        return self.data < other.data

    def hex(self) -> str:
        import hashlib

        return hashlib.sha256(self.data).hexdigest()


def _traverse(d: Dessin, root_dart: int, mirror: bool) -> tuple:
    """Transcript of a rooted traversal; vertex ids replaced by discovery order."""
    number: dict[int, int] = {}
    out: list[int] = []
    v0 = d.origin[root_dart]
    number[v0] = 0
    # queue entries: (vertex, entry dart at that vertex)
    queue = [(v0, root_dart)]
    qi = 0
    while qi < len(queue):
        v, entry = queue[qi]
        qi += 1
        vx = d.verts[v]
        out.append(_COLOR_ID[vx.color])
        out.append(0 if vx.locus == "boundary" else 1)
        out.append(vx.singular or 0)
        out.append(1 if vx.isolated else 0)
        r = d.rot[v]
        i0 = r.index(entry)
        n = len(r)
        seq = [r[(i0 + k) % n] for k in range(n)] if not mirror else \
              [r[(i0 - k) % n] for k in range(n)]
        out.append(n)
        for dart in seq:
            e = dart >> 1
            out.append(_ECOLOR_ID[d.ecolor[e]])
            out.append(1 if d.etail[e] == dart else 0)
            out.append(1 if d.ereal[e] else 0)
            t = d.target(dart)
            if t in number:
                out.append(number[t])
            else:
                number[t] = len(number)
                queue.append((t, dart ^ 1))
                out.append(number[t])
    return tuple(out)


def _roots(d: Dessin) -> list[int]:
    # canonical root candidates: the outward real dart at each boundary vertex
    return [d.rot[v][0] for v in d.boundary]


def canonical_code(d: Dessin, policy: str = "unoriented",
                   relation: str = "isomorphism") -> CanonicalCode:
    if policy not in ("oriented", "unoriented"):
        raise ValueError(f"unknown policy {policy!r}")
    best = None
    mirrors = (False,) if policy == "oriented" else (False, True)
    for mirror in mirrors:
        for r in _roots(d):
            t = _traverse(d, r, mirror)
            if best is None or t < best:
                best = t
    data = repr(best).encode()
    return CanonicalCode(data=data, policy=policy, relation=relation)


def find_isomorphism(a: Dessin, b: Dessin, policy: str = "unoriented"):
    """Vertex map a->b realizing code equality, or None."""
    if canonical_code(a, policy) != canonical_code(b, policy):
        return None

    def best_traversal(d):
        best = None
        for mirror in ((False,) if policy == "oriented" else (False, True)):
            for r in _roots(d):
                t = _traverse(d, r, mirror)
                if best is None or t < best[0]:
                    best = (t, r, mirror)
        return best

    def discovery_order(d, root, mirror):
        number = {d.origin[root]: 0}
        queue = [(d.origin[root], root)]
        qi = 0
        while qi < len(queue):
            v, entry = queue[qi]
            qi += 1
            r = d.rot[v]
            i0 = r.index(entry)
            n = len(r)
            seq = [r[(i0 + k) % n] for k in range(n)] if not mirror else \
                  [r[(i0 - k) % n] for k in range(n)]
            for dart in seq:
                t = d.target(dart)
                if t not in number:
                    number[t] = len(number)
                    queue.append((t, dart ^ 1))
        return number

    _, ra, ma = best_traversal(a)
    _, rb, mb = best_traversal(b)
    na = discovery_order(a, ra, ma)
    nb = discovery_order(b, rb, mb)
    inv_b = {i: v for v, i in nb.items()}
    return {v: inv_b[i] for v, i in na.items()}
