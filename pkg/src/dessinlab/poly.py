"""Exact univariate polynomial arithmetic over the rationals.

Coefficients are `fractions.Fraction`; everything here is exact (no floats).
Real roots are isolated into disjoint rational intervals with Sturm chains.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Sequence

Q = Fraction


def _to_q(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"not an exact rational: {x!r}")


class Poly:
    """Dense univariate polynomial with Fraction coefficients, low degree first."""

    __slots__ = ("c",)

    def __init__(self, coeffs: Iterable = ()):
        c = [_to_q(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.c = tuple(c)

    # -- constructors ------------------------------------------------------

    @staticmethod
    def const(x) -> "Poly":
        return Poly([_to_q(x)])

    @staticmethod
    def x(power: int = 1) -> "Poly":
        return Poly([0] * power + [1])

    @staticmethod
    def from_roots(roots: Sequence) -> "Poly":
        p = Poly([1])
        for r in roots:
            p = p * Poly([-_to_q(r), 1])
        return p

    # -- basic queries ------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.c) - 1

    def is_zero(self) -> bool:
        return not self.c

    def lead(self) -> Fraction:
        if not self.c:
            return Q(0)
        return self.c[-1]

    def __getitem__(self, i: int) -> Fraction:
        return self.c[i] if 0 <= i < len(self.c) else Q(0)

    def __eq__(self, other) -> bool:
        if isinstance(other, Poly):
            return self.c == other.c
        if isinstance(other, (int, Fraction)):
            return self == Poly.const(other)
        return NotImplemented

    def __hash__(self):
        return hash(self.c)

    def __repr__(self):
        if not self.c:
            return "Poly(0)"
        terms = []
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            if i == 0:
                terms.append(str(a))
            elif i == 1:
                terms.append(f"{a}*x" if a != 1 else "x")
            else:
                terms.append(f"{a}*x^{i}" if a != 1 else f"x^{i}")
        return "Poly(" + " + ".join(terms) + ")"

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        n = max(len(self.c), len(other.c))
        return Poly([self[i] + other[i] for i in range(n)])

    __radd__ = __add__

    def __neg__(self) -> "Poly":
        return Poly([-a for a in self.c])

    def __sub__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            other = Poly.const(other)
        return self + (-other)

    def __rsub__(self, other) -> "Poly":
        return (-self) + other

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return Poly([a * other for a in self.c])
        if self.is_zero() or other.is_zero():
            return Poly()
        out = [Q(0)] * (len(self.c) + len(other.c) - 1)
        for i, a in enumerate(self.c):
            if a == 0:
                continue
            for j, b in enumerate(other.c):
                out[i + j] += a * b
        return Poly(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "Poly":
        if n < 0:
            raise ValueError("negative power")
        out = Poly([1])
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def divmod(self, other: "Poly") -> tuple["Poly", "Poly"]:
        if other.is_zero():
            raise ZeroDivisionError("division by zero polynomial")
        q = [Q(0)] * max(0, self.degree - other.degree + 1)
        r = list(self.c)
        d = other.degree
        lead = other.lead()
        while len(r) - 1 >= d and any(a != 0 for a in r):
            while r and r[-1] == 0:
                r.pop()
            if len(r) - 1 < d:
                break
            k = len(r) - 1 - d
            f = r[-1] / lead
            q[k] = f
            for i in range(d + 1):
                r[k + i] -= f * other.c[i]
            r.pop()
        return Poly(q), Poly(r)

    def __floordiv__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[0]

    def __mod__(self, other: "Poly") -> "Poly":
        return self.divmod(other)[1]

    # -- calculus / composition ------------------------------------------------

    def deriv(self) -> "Poly":
        return Poly([i * a for i, a in enumerate(self.c)][1:])

    def __call__(self, x):
        """Evaluate; x may be Fraction/int (exact) or float/complex."""
        acc = 0 if not isinstance(x, (float, complex)) else type(x)(0)
        for a in reversed(self.c):
            acc = acc * x + (a if not isinstance(x, (float, complex)) else float(a))
        return acc

    def eval_q(self, x) -> Fraction:
        x = _to_q(x)
        acc = Q(0)
        for a in reversed(self.c):
            acc = acc * x + a
        return acc

    def compose(self, inner: "Poly") -> "Poly":
        acc = Poly()
        for a in reversed(self.c):
            acc = acc * inner + Poly.const(a)
        return acc

    def shift(self, t) -> "Poly":
        """p(x + t)."""
        return self.compose(Poly([_to_q(t), 1]))

    def scale_arg(self, s) -> "Poly":
        """p(s * x)."""
        s = _to_q(s)
        return Poly([a * s**i for i, a in enumerate(self.c)])

    # -- gcd / squarefree ----------------------------------------------------

    def monic(self) -> "Poly":
        if self.is_zero():
            return self
        l = self.lead()
        return Poly([a / l for a in self.c])

    def gcd(self, other: "Poly") -> "Poly":
        a, b = self, other
        while not b.is_zero():
            a, b = b, a % b
        return a.monic() if not a.is_zero() else a

    def squarefree(self) -> "Poly":
        if self.degree <= 0:
            return self.monic()
        g = self.gcd(self.deriv())
        if g.degree <= 0:
            return self.monic()
        return (self // g).monic()

    def order_at(self, x0) -> int:
        """Multiplicity of x0 as a root (0 if not a root)."""
        if self.is_zero():
            raise ValueError("order of zero polynomial")
        x0 = _to_q(x0)
        p = self
        m = 0
        while p.eval_q(x0) == 0:
            p = p // Poly([-x0, 1])
            m += 1
        return m

    def content_free(self) -> "Poly":
        """Clear denominators and common integer content (sign of lead kept)."""
        if self.is_zero():
            return self
        den = 1
        for a in self.c:
            den = den * a.denominator // math.gcd(den, a.denominator)
        ints = [int(a * den) for a in self.c]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        return Poly([Fraction(v, g) for v in ints])


# -- Sturm sequences and real root isolation -----------------------------------


def sturm_chain(p: Poly) -> list[Poly]:
    chain = [p, p.deriv()]
    while chain[-1].degree > 0:
        rem = chain[-2] % chain[-1]
        if rem.is_zero():
            break
        chain.append(-rem)
    return [q for q in chain if not q.is_zero()]


def _sign_changes(chain: Sequence[Poly], x: Fraction) -> int:
    signs = []
    for q in chain:
        v = q.eval_q(x)
        if v != 0:
            signs.append(1 if v > 0 else -1)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _sign_changes_inf(chain: Sequence[Poly], positive: bool) -> int:
    signs = []
    for q in chain:
        if q.is_zero():
            continue
        s = 1 if q.lead() > 0 else -1
        if not positive and q.degree % 2 == 1:
            s = -s
        signs.append(s)
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def count_real_roots(p: Poly, lo=None, hi=None) -> int:
    """Distinct real roots of p in (lo, hi]; open line when bounds are None."""
    sf = p.squarefree()
    if sf.degree <= 0:
        return 0
    chain = sturm_chain(sf)
    a = _sign_changes_inf(chain, False) if lo is None else _sign_changes(chain, _to_q(lo))
    b = _sign_changes_inf(chain, True) if hi is None else _sign_changes(chain, _to_q(hi))
    return a - b


def root_bound(p: Poly) -> Fraction:
    """Cauchy bound: all real roots lie in (-B, B)."""
    if p.degree < 1:
        return Q(1)
    l = abs(p.lead())
    m = max(abs(a) for a in p.c[:-1]) if p.degree > 0 else Q(0)
    return Q(1) + m / l


def isolate_real_roots(p: Poly) -> list[tuple[Fraction, Fraction]]:
    """Disjoint open intervals (a, b], each containing exactly one real root.

    Exact roots found at tested rationals are returned as degenerate (r, r).
    """
    sf = p.squarefree()
    if sf.degree <= 0:
        return []
    chain = sturm_chain(sf)
    bound = root_bound(sf)

    out: list[tuple[Fraction, Fraction]] = []

    def recurse(lo: Fraction, hi: Fraction, nlo: int, nhi: int):
        count = nlo - nhi
        if count == 0:
            return
        if count == 1:
            out.append((lo, hi))
            return
        mid = (lo + hi) / 2
        # nudge off a root so interval endpoints stay regular
        while sf.eval_q(mid) == 0:
            out.append((mid, mid))
            eps = (hi - lo) / (4 * (sf.degree + 1))
            nmidl = _sign_changes(chain, mid - eps)
            nmidr = _sign_changes(chain, mid + eps)
            recurse(lo, mid - eps, nlo, nmidl)
            recurse(mid + eps, hi, nmidr, nhi)
            return
        nmid = _sign_changes(chain, mid)
        recurse(lo, mid, nlo, nmid)
        recurse(mid, hi, nmid, nhi)

    nlo = _sign_changes(chain, -bound)
    nhi = _sign_changes(chain, bound)
    recurse(-bound, bound, nlo, nhi)

    def key(iv):
        return iv[0] + iv[1]

    out.sort(key=key)
    return out


def refine_root(p: Poly, lo: Fraction, hi: Fraction, width: Fraction) -> tuple[Fraction, Fraction]:
    """Shrink an isolating interval of squarefree p by bisection to the given width."""
    sf = p.squarefree()
    if lo == hi:
        return lo, hi
    flo = sf.eval_q(lo)
    if flo == 0:
        return lo, lo
    while hi - lo > width:
        mid = (lo + hi) / 2
        fm = sf.eval_q(mid)
        if fm == 0:
            return mid, mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo, hi


def sign_at(p: Poly, x) -> int:
    v = p.eval_q(x)
    return (v > 0) - (v < 0)


def poly_to_json(p: Poly) -> dict:
    return {"schema": "poly/1", "coeffs": [str(a) for a in p.c]}


def poly_from_json(d: dict) -> Poly:
    if d.get("schema") != "poly/1":
        raise ValueError("not a poly/1 document")
    return Poly([Fraction(s) for s in d["coeffs"]])
