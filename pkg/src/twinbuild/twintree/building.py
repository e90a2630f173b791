"""The twin tree of SL_2 over GF(q)[t, t^-1].

Conventions:

* ``B+`` = matrices with entries in k[t] that are upper triangular at t = 0.
* ``B-`` = matrices with entries in k[t^-1] that are lower triangular at t = oo.
* Weyl representatives ``s1 = [[0,1],[-1,0]]`` and ``s0 = [[0,-t^-1],[t,0]]``;
  Weyl group elements are :class:`~twinbuild.coxeter.Element` over the
  infinite dihedral matrix with generator 1 = s1 and generator 2 = s0.

A positive chamber gB+ is the edge {g L0, g L1} of the Bruhat-Tits tree with
``L0 = k[t]^2`` (its s1-panel) and ``L1 = diag(1, t) k[t]^2`` (its s0-panel).
Negative chambers use ``M0 = k[t^-1]^2`` and ``M1 = diag(t^-1, 1) k[t^-1]^2``.
Distances are read off from elementary divisors; codistances from the
splitting type of the vector bundle on the projective line glued from a
k[t]-lattice and a k[t^-1]-lattice.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .. import coxeter as cx
from ..errors import SameSign
from .field import gf
from .laurent import (
    ZERO,
    LaurentMat,
    coeff,
    const,
    diag,
    high,
    identity,
    low,
    mono,
    padd,
    pmul,
)

PLUS, MINUS = "+", "-"
S1, S0 = 1, 2
WEYL = cx.CoxeterMatrix(((1, cx.INF), (cx.INF, 1)))


def letter_name(i: int) -> str:
    return "s1" if i == S1 else "s0"


def weyl_name(w: cx.Element) -> str:
    return " ".join(letter_name(i) for i in w.word) if w.word else "e"


def weyl(word) -> cx.Element:
    return cx.reduce(word, WEYL)


# --- Weyl representatives and root groups ---------------------------------


@lru_cache(maxsize=None)
def sdot(q: int, i: int) -> LaurentMat:
    F = gf(q)
    m1 = F.neg(1)
    if i == S1:
        return LaurentMat(q, ZERO, const(1), const(m1), ZERO)
    return LaurentMat(q, ZERO, mono(m1, -1), mono(1, 1), ZERO)


def wdot(q: int, w) -> LaurentMat:
    """Standard monomial representative of a Weyl element (product along its normal form)."""
    word = w.word if isinstance(w, cx.Element) else tuple(w)
    g = identity(q)
    for i in word:
        g = g * sdot(q, i)
    return g


def simple_root_elem(q: int, sign: str, i: int, c: int) -> LaurentMat:
    """Element of the root group attached to the i-panel of the base chamber of the given sign."""
    one = const(1)
    if sign == PLUS:
        if i == S1:
            return LaurentMat(q, one, const(c), ZERO, one)
        return LaurentMat(q, one, ZERO, mono(c, 1), one)
    if i == S1:
        return LaurentMat(q, one, ZERO, const(c), one)
    return LaurentMat(q, one, mono(c, -1), ZERO, one)


# --- Borel membership --------------------------------------------------------


def in_borel(g: LaurentMat, sign: str) -> bool:
    if sign == PLUS:
        if any(x and low(x) < 0 for x in g.entries):
            return False
        return coeff(g.c, 0) == 0
    if any(x and high(x) > 0 for x in g.entries):
        return False
    return coeff(g.b, 0) == 0


def in_sl2_poly(g: LaurentMat, sign: str) -> bool:
    """Entries in k[t] (sign +) or k[t^-1] (sign -)."""
    if sign == PLUS:
        return all(not x or low(x) >= 0 for x in g.entries)
    return all(not x or high(x) <= 0 for x in g.entries)


# --- vertices ---------------------------------------------------------------


def vertex_matrices(g: LaurentMat, sign: str) -> tuple:
    """Basis matrices of the two vertices (s1-type, s0-type) of the chamber gB."""
    q = g.q
    if sign == PLUS:
        return g, g * diag(q, const(1), mono(1, 1))
    return g, g * diag(q, mono(1, -1), const(1))


def _val(x: tuple, sign: str):
    return low(x) if sign == PLUS else -high(x)


def vertex_distance(A: LaurentMat, B: LaurentMat, sign: str) -> int:
    """Tree distance between the lattices spanned by the columns of A and B."""
    C = A.inverse() * B
    vdet = _val(C.det(), sign)
    vmin = min(_val(x, sign) for x in C.entries if x)
    return vdet - 2 * vmin


def column_reduce(C: LaurentMat):
    """Right k[t]-column operations until the top-degree coefficient matrix is invertible.

    Returns the column degrees (mu1, mu2).
    """
    F = gf(C.q)
    a, b, c, d = C.entries
    while True:
        m1 = max(high(x) for x in (a, c) if x)
        m2 = max(high(x) for x in (b, d) if x)
        l1 = (coeff(a, m1), coeff(c, m1))
        l2 = (coeff(b, m2), coeff(d, m2))
        det = F.sub(F.mul(l1[0], l2[1]), F.mul(l1[1], l2[0]))
        if det:
            return m1, m2
        if m1 <= m2:
            k = l1[0] if l1[0] else l1[1]
            lam = F.mul(l2[0] if l1[0] else l2[1], F.inv(k))
            f = mono(F.neg(lam), m2 - m1)
            b = padd(F, b, pmul(F, f, a))
            d = padd(F, d, pmul(F, f, c))
        else:
            k = l2[0] if l2[0] else l2[1]
            lam = F.mul(l1[0] if l2[0] else l1[1], F.inv(k))
            f = mono(F.neg(lam), m1 - m2)
            a = padd(F, a, pmul(F, f, b))
            c = padd(F, c, pmul(F, f, d))


def vertex_codistance(A: LaurentMat, B: LaurentMat) -> int:
    """Codistance between the k[t]-lattice of A and the k[t^-1]-lattice of B."""
    m1, m2 = column_reduce(B.inverse() * A)
    return abs(m1 - m2)


# --- chambers -----------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class ThickChamber:
    g: LaurentMat
    sign: str

    @property
    def q(self) -> int:
        return self.g.q

    def __eq__(self, other):
        if not isinstance(other, ThickChamber):
            return NotImplemented
        return self.sign == other.sign and in_borel(self.g.inverse() * other.g, self.sign)

    def __hash__(self):
        return hash(self.key())

    def key(self):
        k = self.__dict__.get("_key")
        if k is None:
            k = (self.sign, canonical_gallery(self))
            object.__setattr__(self, "_key", k)
        return k

    def vertices(self) -> tuple:
        return vertex_matrices(self.g, self.sign)

    def translate(self, h: LaurentMat) -> "ThickChamber":
        return ThickChamber(h * self.g, self.sign)

    def __str__(self):
        word, cs = canonical_gallery(self)
        if not word:
            return f"base:{self.sign}"
        return " ".join(f"{letter_name(i)}[{gf(self.q).to_json(c)}]" for i, c in zip(word, cs)) + f":{self.sign}"


def base_chamber(q: int, sign: str) -> ThickChamber:
    return ThickChamber(identity(q), sign)


def _rule(dists: dict) -> cx.Element:
    """Weyl element from the four vertex (co)distances of two edges of a tree."""
    if dists[(0, 0)] == 0 and dists[(1, 1)] == 0:
        return WEYL.identity()
    best = min(dists.values())
    first = [i for (i, j), v in dists.items() if v == best]
    assert len(set(first)) == 1, dists
    i0 = first[0]
    n = best + 1
    letters = (S1, S0) if i0 == 0 else (S0, S1)
    return weyl(letters[k % 2] for k in range(n))


def delta(x: ThickChamber, y: ThickChamber) -> cx.Element:
    """W-distance between chambers of the same sign."""
    if x.sign != y.sign:
        raise ValueError("delta needs chambers of equal sign; use codist")
    xv, yv = x.vertices(), y.vertices()
    return _rule({(i, j): vertex_distance(xv[i], yv[j], x.sign) for i in range(2) for j in range(2)})


def codist(x: ThickChamber, y: ThickChamber) -> cx.Element:
    """W-codistance between chambers of opposite signs."""
    if x.sign == y.sign:
        raise SameSign("codistance needs chambers of opposite signs")
    xv, yv = x.vertices(), y.vertices()
    d = {}
    for i in range(2):
        for j in range(2):
            if x.sign == PLUS:
                d[(i, j)] = vertex_codistance(xv[i], yv[j])
            else:
                d[(i, j)] = vertex_codistance(yv[j], xv[i])
    return _rule(d)


def wdist(x: ThickChamber, y: ThickChamber) -> cx.Element:
    return delta(x, y) if x.sign == y.sign else codist(x, y)


def panel_neighbors(x: ThickChamber, i: int) -> list:
    """The q chambers i-adjacent to x (x excluded)."""
    q = x.q
    return [ThickChamber(x.g * simple_root_elem(q, x.sign, i, c) * sdot(q, i), x.sign) for c in gf(q).elements]


def canonical_gallery(x: ThickChamber):
    """(word, coefficients) with x = prod X_i(c) s_i applied to the base chamber."""
    q = x.q
    F = gf(q)
    base = base_chamber(q, x.sign)
    h = x.g
    w = delta(base, x)
    word, cs = [], []
    remaining = w.length
    for i in w.word:
        for c in F.elements:
            step = simple_root_elem(q, x.sign, i, c) * sdot(q, i)
            h2 = step.inverse() * h
            if delta(base, ThickChamber(h2, x.sign)).length == remaining - 1:
                word.append(i)
                cs.append(c)
                h = h2
                remaining -= 1
                break
        else:
            raise AssertionError("no gallery step found")
    return tuple(word), tuple(cs)


def gallery_element(q: int, sign: str, word, cs) -> LaurentMat:
    g = identity(q)
    for i, c in zip(word, cs):
        g = g * simple_root_elem(q, sign, i, c) * sdot(q, i)
    return g


def bruhat(g: LaurentMat, sign: str = PLUS):
    """``g = b1 * wdot * b2`` with b1, b2 in B_sign."""
    q = g.q
    word, cs = canonical_gallery(ThickChamber(g, sign))
    prefix = gallery_element(q, sign, word, cs)
    w = weyl(word)
    wd = wdot(q, w)
    b2 = prefix.inverse() * g
    b1 = prefix * wd.inverse()
    return b1, w, b2


# --- Birkhoff decomposition via linear algebra over GF(q) ----------------


def nullspace(F, rows: list, n: int) -> list:
    """Basis of {x in F^n : r.x = 0 for all r in rows} by Gauss-Jordan elimination."""
    m = [list(r) for r in rows]
    pivots = []
    r = 0
    for col in range(n):
        piv = next((i for i in range(r, len(m)) if m[i][col]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = F.inv(m[r][col])
        m[r] = [F.mul(inv, v) for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * n
        v[fc] = 1
        for i, pc in enumerate(pivots):
            v[pc] = F.neg(m[i][fc])
        basis.append(v)
    return basis


def _row_space(g: LaurentMat, wi: LaurentMat, out_row: int, E: int):
    """Rows (x1, x2) of degree <= E in t such that the out_row-th row of wi * X * g is B- shaped.

    wi is monomial, so that row is a monomial multiple of a single row of X.
    """
    q = g.q
    F = gf(q)
    # locate the nonzero entry of row out_row of wi
    ent = (wi.a, wi.b) if out_row == 0 else (wi.c, wi.d)
    src = 0 if ent[0] else 1
    (shift, scal), = ent[src]
    n = 2 * (E + 1)
    # column j of the row product: sum_e x1_e t^e g[0][j] + x2_e t^e g[1][j], times scal t^shift
    gcols = ((g.a, g.c), (g.b, g.d))
    constraints = []
    for j in range(2):
        exps = set()
        for k in range(2):
            for e0, _ in gcols[j][k]:
                for e in range(E + 1):
                    exps.add(e0 + e + shift)
        for ex in sorted(exps):
            bad = ex > 0 or (ex == 0 and out_row == 0 and j == 1)
            if not bad:
                continue
            row = [0] * n
            for k in range(2):
                for e in range(E + 1):
                    cf = coeff(gcols[j][k], ex - shift - e)
                    if cf:
                        row[k * (E + 1) + e] = F.mul(scal, cf)
            constraints.append(row)
    if src == 1:
        # second row of X: its first entry must vanish at t = 0
        row = [0] * n
        row[0] = 1
        constraints.append(row)
    return src, nullspace(F, constraints, n)


def _vec_to_polys(v, E):
    return tuple(tuple((e, c) for e, c in enumerate(v[k * (E + 1) : (k + 1) * (E + 1)]) if c) for k in range(2))


def birkhoff(g: LaurentMat):
    """``g = bp * wdot * bm`` with bp in B+ and bm in B-."""
    q = g.q
    F = gf(q)
    w = codist(base_chamber(q, PLUS), ThickChamber(g, MINUS))
    wd = wdot(q, w)
    wi = wd.inverse()
    E = max(0, wd.max_exp()) + max(0, g.max_exp())
    spaces = {}
    for out_row in range(2):
        src, basis = _row_space(g, wi, out_row, E)
        spaces[src] = basis
    for r1 in spaces[0]:
        p1 = _vec_to_polys(r1, E)
        for r2 in spaces[1]:
            p2 = _vec_to_polys(r2, E)
            X = LaurentMat(q, p1[0], p1[1], p2[0], p2[1])
            det = X.det()
            if det and high(det) == 0 and low(det) == 0:
                c = det[0][1]
                X = diag(q, const(F.inv(c)), const(1)) * X
                bp = X.inverse()
                bm = wi * X * g
                return bp, w, bm
    raise AssertionError("Birkhoff factorization not found")


def chamber_ball(q: int, sign: str, radius: int) -> list:
    """All chambers at gallery distance <= radius from the base chamber, by canonical galleries."""
    out = [ThickChamber(identity(q), sign)]
    frontier = [((), (), identity(q))]
    F = gf(q)
    for _ in range(radius):
        nxt = []
        for word, cs, g in frontier:
            for i in (S1, S0):
                if word and word[-1] == i:
                    continue
                for c in F.elements:
                    h = g * simple_root_elem(q, sign, i, c) * sdot(q, i)
                    nxt.append((word + (i,), cs + (c,), h))
        for word, cs, h in nxt:
            ch = ThickChamber(h, sign)
            object.__setattr__(ch, "_key", (sign, (word, cs)))
            out.append(ch)
        frontier = nxt
    return out
