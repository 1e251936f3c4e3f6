"""Weierstrass models, Nagata transformations and singular-fiber classification.

All computations are exact over the rationals. The central objects:

* ``BidegreeCurve`` -- a real curve on the quadric, bidegree (m1, m2), stored
  as the coefficient matrix of its bihomogeneous equation; the affine chart
  form is ``sum_j c_j(x) y^j``.
* ``WeierstrassCurve`` -- a proper trigonal model ``y^3 + b(x) y + w(x) = 0``
  on the ruled surface of index k, with deg b <= 2k and deg w <= 3k.

A positive Nagata step is the fiberwise substitution (x, z) = (x, x*y)
centered over a root of the leading y-coefficient; iterating it converts a
trigonal curve of bidegree (m, 3) into a proper model, which is then
depressed to Weierstrass shape.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .poly import Poly, Q, count_real_roots, isolate_real_roots, refine_root, sign_at

FIBER_LABELS = ("A0~", "A0~*", "A0~**", "A1~", "A1~*", "A2~", "A2~*")

# pretty aliases used in reports
FIBER_PRETTY = {
    "A0~": "Ã0",
    "A0~*": "Ã0*",
    "A0~**": "Ã0**",
    "A1~": "Ã1",
    "A1~*": "Ã1*",
    "A2~": "Ã2",
    "A2~*": "Ã2*",
}


class AlgebraError(ValueError):
    pass


class InvalidCenterError(AlgebraError):
    pass


class IncompleteTransformError(AlgebraError):
    pass


class NotProperError(AlgebraError):
    pass


class NonReducedCurveError(AlgebraError):
    pass


class OutsideNodalCuspidalError(AlgebraError):
    pass


@dataclass(frozen=True)
class WeierstrassCurve:
    k: int
    b: Poly
    w: Poly
    marked_fibers: tuple = ()

    def __post_init__(self):
        if self.b.degree > 2 * self.k or self.w.degree > 3 * self.k:
            raise NotProperError(
                f"degree bounds violated: deg b={self.b.degree} (max {2*self.k}), "
                f"deg w={self.w.degree} (max {3*self.k})"
            )
        if discriminant(self).is_zero():
            raise NonReducedCurveError("discriminant vanishes identically")

    def to_json(self) -> dict:
        return {
            "schema": "wcurve/1",
            "k": self.k,
            "b": [str(a) for a in self.b.c],
            "w": [str(a) for a in self.w.c],
            "marked_fibers": [
                {"x": str(x), "label": lab} for x, lab in self.marked_fibers
            ],
        }

    @staticmethod
    def from_json(d: dict) -> "WeierstrassCurve":
        if d.get("schema") != "wcurve/1":
            raise ValueError("not a wcurve/1 document")
        return WeierstrassCurve(
            k=int(d["k"]),
            b=Poly([Fraction(s) for s in d["b"]]),
            w=Poly([Fraction(s) for s in d["w"]]),
            marked_fibers=tuple(
                (Fraction(m["x"]), m["label"]) for m in d.get("marked_fibers", ())
            ),
        )


@dataclass(frozen=True)
class BidegreeCurve:
    """Chart form sum_j c_j(x) * y^j with rational coefficient polynomials.

    ``coeffs[j]`` is the x-polynomial multiplying y^j; m2 = len(coeffs) - 1.
    """

    coeffs: tuple
    m1: int
    m2: int

    @staticmethod
    def from_chart(coeffs_by_y: list, m1: int | None = None) -> "BidegreeCurve":
        cs = [c if isinstance(c, Poly) else Poly(c) for c in coeffs_by_y]
        while cs and cs[-1].is_zero():
            cs.pop()
        if not cs:
            raise AlgebraError("zero curve")
        m2 = len(cs) - 1
        deg_x = max((c.degree for c in cs if not c.is_zero()), default=0)
        return BidegreeCurve(coeffs=tuple(cs), m1=m1 if m1 is not None else deg_x, m2=m2)

    @staticmethod
    def from_matrix(a: list, m1: int, m2: int) -> "BidegreeCurve":
        # a[i][j] multiplies x^i y^j
        cols = []
        for j in range(m2 + 1):
            cols.append(Poly([a[i][j] if i < len(a) and j < len(a[i]) else 0 for i in range(m1 + 1)]))
        return BidegreeCurve.from_chart(cols, m1=m1)

    def chart(self) -> tuple:
        return self.coeffs

    def to_json(self) -> dict:
        return {
            "schema": "bicurve/1",
            "m1": self.m1,
            "m2": self.m2,
            "coeffs": [[str(a) for a in c.c] for c in self.coeffs],
        }

    @staticmethod
    def from_json(d: dict) -> "BidegreeCurve":
        if d.get("schema") != "bicurve/1":
            raise ValueError("not a bicurve/1 document")
        return BidegreeCurve.from_chart(
            [Poly([Fraction(s) for s in c]) for c in d["coeffs"]], m1=int(d["m1"])
        )


def discriminant(c: WeierstrassCurve) -> Poly:
    """Discriminant 4 b^3 + 27 w^2 of y^3 + b y + w."""
    return 4 * c.b**3 + 27 * c.w**2


def j_invariant(c: WeierstrassCurve) -> tuple[Poly, Poly]:
    """The j-invariant 4b^3 / (4b^3 + 27w^2) as a reduced fraction (num, den)."""
    num = 4 * c.b**3
    den = discriminant(c)
    if den.is_zero():
        raise NonReducedCurveError("discriminant vanishes identically")
    g = num.gcd(den)
    if g.degree > 0:
        num, den = num // g, den // g
    # normalize: make den monic-led with content cleared for stable output
    lead = den.lead()
    num = Poly([a / lead for a in num.c])
    den = Poly([a / lead for a in den.c])
    return num, den


def nagata_step(curve: BidegreeCurve, x0) -> BidegreeCurve:
    """One positive Nagata transformation centered over x = x0.

    Substitutes y -> z/(x - x0) and clears the minimal power of (x - x0);
    requires x0 to be a root of the leading y-coefficient (the center must lie
    on the exceptional section).
    """
    x0 = Fraction(x0)
    cs = curve.chart()
    m2 = len(cs) - 1
    lead = cs[-1]
    if lead.eval_q(x0) != 0:
        raise InvalidCenterError(f"x={x0} is not a root of the leading y-coefficient")
    lin = Poly([-x0, 1])
    # coefficient of z^j becomes (x-x0)^(m-j) * c_j; m minimal for polynomiality
    ords = []
    for j, c in enumerate(cs):
        if c.is_zero():
            continue
        ords.append(j - c.order_at(x0))
    m = max(ords)
    new = []
    for j, c in enumerate(cs):
        if c.is_zero():
            new.append(c)
            continue
        e = m - j
        if e >= 0:
            new.append(c * lin**e)
        else:
            q = c
            for _ in range(-e):
                q = q // lin
            new.append(q)
    return BidegreeCurve.from_chart(new)


def to_weierstrass(curve: BidegreeCurve, centers: list) -> WeierstrassCurve:
    """Iterate Nagata steps at the given centers, then depress to y^3 + b y + w.

    After all steps the leading y-coefficient must be a nonzero constant.
    For a (4,3)-input the centers must consume the full intersection with the
    exceptional section (three steps, multiplicities summing to four).
    """
    cur = curve
    if curve.m2 != 3:
        raise AlgebraError("trigonal pipeline requires m2 = 3")
    consumed = 0
    for x0 in centers:
        consumed += cur.chart()[-1].order_at(Fraction(x0))
        cur = nagata_step(cur, x0)
    cs = cur.chart()
    if len(cs) != 4:
        raise IncompleteTransformError("transform degenerated: y-degree dropped")
    a3 = cs[3]
    if a3.degree != 0:
        raise IncompleteTransformError(
            f"leading coefficient still non-constant after {len(centers)} steps"
        )
    if curve.m1 == 4 and len(centers) == 3 and consumed != 4:
        # (4,3) bookkeeping: the full intersection C.E0 = 4 must be consumed
        # by exactly three steps (one center of multiplicity two, or a repeat)
        raise IncompleteTransformError(
            f"centers consume multiplicity {consumed}, expected 4"
        )
    lam = a3.lead()
    c2 = cs[2] * (1 / lam)
    c1 = cs[1] * (1 / lam)
    c0 = cs[0] * (1 / lam)
    # depress z -> z - c2/3:  b = c1 - c2^2/3,  w = c0 - c1 c2/3 + 2 (c2/3)^3
    third = c2 * Fraction(1, 3)
    b = c1 - c2 * c2 * Fraction(1, 3)
    w = c0 - c1 * third + 2 * third**3
    k = len(centers)
    return WeierstrassCurve(k=k, b=b, w=w)


def normalized_poly_key(p: Poly) -> tuple:
    """Key identifying a polynomial up to a nonzero constant factor."""
    if p.is_zero():
        return ()
    lead = p.lead()
    return tuple(a / lead for a in p.c)


def chart_key(curve: BidegreeCurve) -> tuple:
    """Key identifying the chart equation up to one overall constant."""
    cs = curve.chart()
    scale = None
    for c in reversed(cs):
        if not c.is_zero():
            scale = c.lead()
            break
    return tuple(tuple(a / scale for a in c.c) for c in cs)


@dataclass(frozen=True)
class FiberType:
    label: str
    x: Fraction
    delta_order: int
    triple: bool
    j_behavior: str

    @property
    def pretty(self) -> str:
        return FIBER_PRETTY[self.label]


def _fiber_table(d: int, triple: bool) -> str:
    if d == 0:
        return "A0~"
    if d == 1:
        return "A0~*"
    if d == 2:
        return "A0~**" if triple else "A1~"
    if d == 3:
        return "A1~*" if triple else "A2~"
    if d == 4 and triple:
        return "A2~*"
    raise OutsideNodalCuspidalError(
        f"discriminant order {d} with triple={triple} is outside the nodal-cuspidal range"
    )


def _j_behavior(c: WeierstrassCurve, x0: Fraction, d: int) -> str:
    """Limit behaviour of j = 4b^3/Delta at x0, as a cross-check column."""
    num = 4 * c.b**3
    if num.is_zero():
        on = None  # j identically 0
    else:
        on = num.order_at(x0)
    if on is None or on > d:
        return "j->0"
    if on == d:
        # finite limit: ratio of the first nonvanishing Taylor coefficients
        lin = Poly([-x0, 1])
        n, dd = num, discriminant(c)
        for _ in range(d):
            n, dd = n // lin, dd // lin
        val = n.eval_q(x0) / dd.eval_q(x0)
        if val == 1:
            return "j->1"
        return "j finite"
    return f"pole order {d - on}"


def classify_fiber(c: WeierstrassCurve, x0) -> FiberType:
    """Classify the fiber over x0 by (ord Delta, triple-root flag).

    The j-limit column is recomputed independently and checked against the
    table; a mismatch means a transcription bug, not bad input.
    """
    x0 = Fraction(x0)
    delta = discriminant(c)
    d = delta.order_at(x0)
    triple = c.b.eval_q(x0) == 0 and c.w.eval_q(x0) == 0
    label = _fiber_table(d, triple)
    jb = _j_behavior(c, x0, d)
    expected = {
        "A0~": {"j finite", "j->0", "j->1"},
        "A0~*": {"pole order 1"},
        "A0~**": {"j->0"},
        "A1~": {"pole order 2"},
        "A1~*": {"j->1"},
        "A2~": {"pole order 3"},
        "A2~*": {"j->0"},
    }[label]
    if jb not in expected:
        raise AlgebraError(f"fiber table inconsistency at x={x0}: {label} but {jb}")
    return FiberType(label=label, x=x0, delta_order=d, triple=triple, j_behavior=jb)


@dataclass(frozen=True)
class RealProfile:
    """Sign layout of the discriminant along the real line.

    ``delta_roots`` are isolating intervals in increasing order;
    ``interval_sheets[i]`` is the real-sheet count (1 or 3) strictly between
    roots i-1 and i, with index 0 for (-inf, first) and the last entry for
    (last, +inf). ``z_components`` lists (first_root_idx, last_root_idx, kind)
    with kind in {"oval", "zigzag"}; a component may wrap through infinity,
    in which case first > last.
    """

    hyperbolic: bool
    delta_roots: tuple
    interval_sheets: tuple
    z_components: tuple
    oval_count: int
    zigzag_count: int


def _merge_type(c: WeierstrassCurve, root_iv, width=Fraction(1, 1024)) -> int:
    """+1 if the top two sheets meet over this simple discriminant root, -1 for bottom.

    At a simple root the cubic has a double root s and a simple root -2s with
    w = 2 s^3, so the sign of w tells which pair collides.
    """
    lo, hi = root_iv
    delta = discriminant(c)
    if lo == hi:
        s = sign_at(c.w, lo)
        if s == 0:
            raise AlgebraError("triple root: curve not generic at discriminant root")
        return s
    # refine until w has constant sign on the interval
    while True:
        if count_real_roots(c.w, lo, hi) == 0:
            mid = (lo + hi) / 2
            s = sign_at(c.w, mid)
            if s != 0:
                return s
        lo, hi = refine_root(delta, lo, hi, (hi - lo) / 4)
        if lo == hi:
            s = sign_at(c.w, lo)
            if s == 0:
                raise AlgebraError("triple root at discriminant root")
            return s


def real_profile(c: WeierstrassCurve) -> RealProfile:
    delta = discriminant(c)
    if delta.is_zero():
        raise NonReducedCurveError("discriminant vanishes identically")
    sf = delta.squarefree()
    if sf != delta.monic() and delta.degree > 0:
        # multiple roots: profile only defined in the nodal-cuspidal setting;
        # callers dealing with singular curves work through the graph instead
        pass
    roots = isolate_real_roots(delta)
    # disjointify and order; compute interval sample points
    samples = []
    bnd = Q(0)
    for lo, hi in roots:
        bnd = max(bnd, abs(lo), abs(hi)) + 1
    if not roots:
        samples = [Q(0)]
    else:
        samples.append(roots[0][0] - 1 if roots[0][0] == roots[0][1] else roots[0][0])
        for i in range(len(roots) - 1):
            a = roots[i][1]
            b = roots[i + 1][0]
            if a >= b:
                # refine overlapping isolating intervals
                ra = refine_root(delta, *roots[i], width=(b - roots[i][0]) / 8 if b > roots[i][0] else Q(1, 1024))
                rb = refine_root(delta, *roots[i + 1], width=Q(1, 1024))
                roots[i], roots[i + 1] = ra, rb
                a, b = ra[1], rb[0]
                while a >= b:
                    ra = refine_root(delta, *roots[i], width=(ra[1] - ra[0]) / 8 or Q(1, 2048))
                    rb = refine_root(delta, *roots[i + 1], width=(rb[1] - rb[0]) / 8 or Q(1, 2048))
                    roots[i], roots[i + 1] = ra, rb
                    a, b = ra[1], rb[0]
            samples.append((a + b) / 2)
        samples.append(roots[-1][1] + 1)
    sheets = []
    for s in samples:
        sg = sign_at(delta, s)
        if sg == 0:
            raise AlgebraError("sample landed on a discriminant root")
        sheets.append(3 if sg < 0 else 1)
    # hyperbolic: Delta <= 0 on all of RP^1 (vanishing allowed only at
    # even-multiplicity roots, which do not flip the sign)
    hyperbolic = all(sh == 3 for sh in sheets) and delta.lead() < 0 and delta.degree % 2 == 0
    # assemble Z-components: maximal runs of 3-sheet intervals, joined through
    # infinity when the two unbounded intervals both carry 3 sheets
    n = len(roots)
    comps = []
    oval = zig = 0
    if n:
        neg = [sh == 3 for sh in sheets]  # length n + 1
        wraps = neg[0] and neg[n]
        runs = []
        i = 0
        while i <= n:
            if not neg[i]:
                i += 1
                continue
            j = i
            while j <= n and neg[j]:
                j += 1
            runs.append((i, j - 1))
            i = j
        if wraps and len(runs) >= 2:
            last = runs.pop()
            runs[0] = (last[0], runs[0][1])  # run wrapping through infinity
        elif wraps and len(runs) == 1 and runs[0] == (0, n):
            runs = []  # Delta < 0 off every root: no bounded component structure
        for (i0, i1) in runs:
            wrapped = i0 > i1
            # flanking roots: left end of the run is root i0-1, right end is root i1
            li = i0 - 1
            ri = i1
            if not wrapped and (li < 0 or ri >= n):
                comps.append((max(li, 0), min(ri, n - 1), "unbounded"))
                continue
            tl = _merge_type(c, roots[li])
            tr = _merge_type(c, roots[ri])
            # the top/bottom sheet labels swap across infinity when k is odd
            same = (tl == tr) if not (wrapped and c.k % 2 == 1) else (tl != tr)
            kind = "oval" if same else "zigzag"
            comps.append((li, ri, kind))
            if kind == "oval":
                oval += 1
            else:
                zig += 1
    return RealProfile(
        hyperbolic=hyperbolic,
        delta_roots=tuple(roots),
        interval_sheets=tuple(sheets),
        z_components=tuple(comps),
        oval_count=oval,
        zigzag_count=zig,
    )
