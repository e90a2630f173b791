"""Subgroups of SL_2(GF(q)[t, t^-1]) acting on the twin tree."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from ..errors import (
    BadIndex,
    FieldTooLarge,
    FieldTooSmall,
    GroupTooLarge,
    NotFoundInRadius,
    TooLong,
)
from .building import (
    MINUS,
    PLUS,
    S0,
    S1,
    ThickChamber,
    base_chamber,
    birkhoff,
    chamber_ball,
    codist,
    in_borel,
    in_sl2_poly,
    letter_name,
    panel_neighbors,
    sdot,
    simple_root_elem,
    vertex_matrices,
    wdot,
    weyl,
    weyl_name,
)
from .building import nullspace
from .field import SUPPORTED, gf
from .laurent import ZERO, LaurentMat, const, diag, identity, mono

MAX_GALLERY = 8


def root_elem(direction: str, k: int, c: int, q: int) -> LaurentMat:
    """``[[1, c t^k], [0, 1]]`` (up, k >= 0) or ``[[1, 0], [c t^k, 1]]`` (down, k >= 1)."""
    one = const(1)
    if direction == "up":
        if k < 0:
            raise BadIndex("up root elements need k >= 0")
        return LaurentMat(q, one, mono(c, k), ZERO, one)
    if direction == "down":
        if k < 1:
            raise BadIndex("down root elements need k >= 1")
        return LaurentMat(q, one, ZERO, mono(c, k), one)
    raise BadIndex(f"direction must be 'up' or 'down', got {direction!r}")


def standardize(x: ThickChamber, y: ThickChamber):
    """(g0, w) with g0 B+ = x and g0 wdot B- = y."""
    if x.sign != PLUS or y.sign != MINUS:
        raise ValueError("expected a positive and a negative chamber")
    bp, w, _ = birkhoff(x.g.inverse() * y.g)
    return x.g * bp, w


def gallery_root_groups(q: int, w) -> list:
    """For each step of the gallery B+ = x_0, ..., x_n = wdot B+, the list of its root group elements."""
    groups = []
    prefix = identity(q)
    for i in w.word:
        pinv = prefix.inverse()
        groups.append([prefix * simple_root_elem(q, PLUS, i, c) * pinv for c in gf(q).elements])
        prefix = prefix * sdot(q, i)
    return groups


def unipotent_group(x: ThickChamber, y: ThickChamber) -> frozenset:
    """All elements of U(x, y), the product of the root groups along a minimal gallery."""
    g0, w = standardize(x, y)
    if w.length > MAX_GALLERY:
        raise TooLong(f"codistance length {w.length} exceeds {MAX_GALLERY}")
    q = x.q
    g0i = g0.inverse()
    elems = [identity(q)]
    for grp in gallery_root_groups(q, w):
        elems = [e * u for e in elems for u in grp]
    return frozenset(g0 * e * g0i for e in elems)


def closure_generators(x: ThickChamber, y: ThickChamber) -> list:
    g0, w = standardize(x, y)
    g0i = g0.inverse()
    return [g0 * u * g0i for grp in gallery_root_groups(x.q, w) for u in grp]


def is_closed(elements: frozenset, generators) -> bool:
    """Right multiplication by every generator maps the set into itself (hence it is a group)."""
    return all(e * g in elements for e in elements for g in generators)


def acts_freely_on(elements, chambers) -> bool:
    """Only the identity fixes any of the given chambers."""
    for u in elements:
        if u.is_identity():
            continue
        for c in chambers:
            if c.translate(u) == c:
                return False
    return True


def torus_element(q: int, a: int) -> LaurentMat:
    F = gf(q)
    return diag(q, const(a), const(F.inv(a)))


def torus_fixed_chambers(q: int, r: int, sign: str = PLUS, allow_small: bool = False) -> list:
    """Chambers within gallery distance r of the base chamber fixed by every diag(a, a^-1)."""
    if q < 4 and not allow_small:
        raise FieldTooSmall("the torus acts trivially for q < 4; pass allow_small to compute anyway")
    if r > 6:
        raise TooLong("radius at most 6")
    tor = [torus_element(q, a) for a in gf(q).units]
    out = []
    for ch in chamber_ball(q, sign, r):
        gi = ch.g.inverse()
        if all(in_borel(gi * h * ch.g, sign) for h in tor):
            out.append(ch)
    return out


def in_standard_apartment(ch: ThickChamber) -> bool:
    _, cs = ch.key()[1]
    return all(c == 0 for c in cs)


# --- the finite group SL_2(GF(q)) and Conditions (P1)-(P3) -------------


def _m(F, x, y):
    a, b, c, d = x
    e, f, g, h = y
    return (
        F.add(F.mul(a, e), F.mul(b, g)),
        F.add(F.mul(a, f), F.mul(b, h)),
        F.add(F.mul(c, e), F.mul(d, g)),
        F.add(F.mul(c, f), F.mul(d, h)),
    )


def _inv(F, x):
    a, b, c, d = x
    return (d, F.neg(b), F.neg(c), a)


def _closure(F, gens, start=None):
    ident = (1, 0, 0, 1)
    seen = {ident} if start is None else set(start) | {ident}
    frontier = list(seen)
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = _m(F, x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


@dataclass
class PReport:
    q: int
    p1: bool
    p2: bool
    p3: bool
    order: int
    h_is_torus: bool
    fixed_conjugates: int

    def to_json(self) -> dict:
        return dict(self.__dict__)


def check_P_conditions(q: int) -> PReport:
    if q not in SUPPORTED:
        raise FieldTooLarge(f"q={q} unsupported; choose one of {SUPPORTED}")
    F = gf(q)
    up = [(1, c, 0, 1) for c in F.elements]
    down = [(1, 0, c, 1) for c in F.elements]
    gens = [u for u in up if u[1]] + [d for d in down if d[2]]
    G = _closure(F, gens)
    Uset = frozenset(up)
    Vset = frozenset(down)
    p1 = all(_m(F, a, b) == _m(F, b, a) for a in up for b in up)
    comms = {_m(F, _m(F, a, b), _m(F, _inv(F, a), _inv(F, b))) for a in gens for b in gens}
    normal = {_m(F, _m(F, g, c), _inv(F, g)) for g in G for c in comms}
    D = _closure(F, list(normal))
    p2 = len(D) == len(G)

    def conj_set(g, S):
        gi = _inv(F, g)
        return frozenset(_m(F, _m(F, g, s), gi) for s in S)

    H = [h for h in G if conj_set(h, Uset) == Uset and conj_set(h, Vset) == Vset]
    torus = {(a, 0, 0, F.inv(a)) for a in F.units}
    conjugates = {conj_set(g, Uset) for g in G}
    fixed = [V for V in conjugates if all(conj_set(h, V) == V for h in H)]
    return PReport(q, p1, p2, len(fixed) == 2, len(G), set(H) == torus, len(fixed))


# --- residues stabilized by finite groups ------------------------------------


@dataclass(frozen=True)
class ThickResidue:
    chamber: ThickChamber
    J: frozenset

    @property
    def sign(self) -> str:
        return self.chamber.sign

    def __str__(self):
        typ = ",".join(letter_name(i) for i in sorted(self.J))
        return f"{self.chamber}:J{{{typ}}}"

    def stabilized_by(self, h: LaurentMat) -> bool:
        g = self.chamber.g
        if not self.J:
            return in_borel(g.inverse() * h * g, self.sign)
        (i,) = tuple(self.J)
        V = vertex_matrices(g, self.sign)[0 if i == S1 else 1]
        return in_sl2_poly(V.inverse() * h * V, self.sign)


def enumerate_group(generators, cutoff: int = 10000) -> list:
    gens = list(generators)
    if not gens:
        return []
    q = gens[0].q
    seen = {identity(q)}
    frontier = [identity(q)]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
                    if len(seen) > cutoff:
                        raise GroupTooLarge(f"group order exceeds {cutoff}")
        frontier = nxt
    return list(seen)


def residues_by_distance(q: int, sign: str, r: int):
    """Chambers and panels ordered by (distance from the base chamber, rank)."""
    ball = chamber_ball(q, sign, r)
    layers: dict = {}
    for ch in ball:
        word, _ = ch.key()[1]
        d = len(word)
        layers.setdefault(d, ([], []))[0].append(ThickResidue(ch, frozenset()))
        for i in (S1, S0):
            if not word or word[-1] != i:
                layers[d][1].append(ThickResidue(ch, frozenset({i})))
    for d in sorted(layers):
        chambers, panels = layers[d]
        yield from chambers
        yield from panels


def finite_subgroup_residues(generators, r: int, cutoff: int = 10000):
    """A positive and a negative spherical residue within radius r stabilized by the generated group."""
    gens = list(generators)
    if r > 5:
        raise TooLong("radius at most 5")
    if gens:
        enumerate_group(gens, cutoff)
    q = gens[0].q if gens else 4
    found = []
    for sign in (PLUS, MINUS):
        for R in residues_by_distance(q, sign, r):
            if all(R.stabilized_by(h) for h in gens):
                found.append(R)
                break
        else:
            raise NotFoundInRadius(f"no stabilized {sign} residue within radius {r}")
    return tuple(found)


def finite_subgroup_residues_q(q: int, generators, r: int, cutoff: int = 10000):
    if not generators:
        return base_chamber_residues(q)
    return finite_subgroup_residues(generators, r, cutoff)


def base_chamber_residues(q: int):
    return (ThickResidue(base_chamber(q, PLUS), frozenset()), ThickResidue(base_chamber(q, MINUS), frozenset()))


# --- random sampling ----------------------------------------------------------


def random_chamber(q: int, sign: str, radius: int, rng: random.Random) -> ThickChamber:
    n = rng.randint(0, radius)
    first = rng.choice((S1, S0))
    g = identity(q)
    for k in range(n):
        i = first if k % 2 == 0 else (S0 if first == S1 else S1)
        g = g * simple_root_elem(q, sign, i, rng.randrange(q)) * sdot(q, i)
    return ThickChamber(g, sign)


@dataclass
class AxiomReport:
    q: int
    samples: int
    seed: int
    radius: int
    tw1_fail: int = 0
    tw2_fail: int = 0
    tw3_fail: int = 0
    tw2_checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.tw1_fail == self.tw2_fail == self.tw3_fail == 0

    def to_json(self) -> dict:
        out = {k: v for k, v in self.__dict__.items() if k != "failures"}
        out["pass"] = self.passed
        out["failures"] = self.failures[:10]
        return out


def check_twin_axioms(q: int, n: int, seed: int, radius: int = 5) -> AxiomReport:
    rng = random.Random(seed)
    rep = AxiomReport(q, n, seed, radius)
    for k in range(n):
        x = random_chamber(q, PLUS, radius, rng)
        y = random_chamber(q, MINUS, radius, rng)
        if rng.random() < 0.5:
            x, y = y, x
        w = codist(x, y)
        if codist(y, x) != w.inverse():
            rep.tw1_fail += 1
            rep.failures.append((k, "Tw1"))
        for s in (S1, S0):
            sw = weyl((s,)) * w
            nbrs = panel_neighbors(x, s)
            if sw.length < w.length:
                rep.tw2_checked += 1
                if any(codist(xp, y) != sw for xp in nbrs):
                    rep.tw2_fail += 1
                    rep.failures.append((k, "Tw2"))
            if not any(codist(z, y) == sw for z in nbrs):
                rep.tw3_fail += 1
                rep.failures.append((k, "Tw3"))
    return rep


# --- Levi factorization of chamber-pair stabilizers ---------------------


def _stabilizer_space(q: int, w, E: int):
    """Basis of the matrices X (entries of degree 0..E in t, B+ shaped) with wdot^-1 X wdot B- shaped."""
    F = gf(q)
    wd = wdot(q, w)
    wi = wd.inverse()
    n = 4 * (E + 1)

    def unit(idx):
        ents = [ZERO] * 4
        k, e = divmod(idx, E + 1)
        ents[k] = mono(1, e)
        return LaurentMat(q, *ents)

    images = [wi * unit(j) * wd for j in range(n)]
    exps = sorted({e for M in images for x in M.entries for e, _ in x})
    rows = []
    for pos in range(4):
        for ex in exps:
            if ex > 0 or (ex == 0 and pos == 1):
                rows.append([dict(images[j].entries[pos]).get(ex, 0) for j in range(n)])
    row = [0] * n
    row[2 * (E + 1)] = 1  # lower-left entry vanishes at t = 0
    rows.append(row)
    return nullspace(F, rows, n)


def sample_pair_stabilizer(x: ThickChamber, y: ThickChamber, count: int, seed: int, extra_degree: int = 2):
    """Seeded uniform samples of Stab(x) cap Stab(y) among matrices of bounded degree in the standard frame."""
    rng = random.Random(seed)
    q = x.q
    F = gf(q)
    g0, w = standardize(x, y)
    g0i = g0.inverse()
    E = w.length + extra_degree
    basis = _stabilizer_space(q, w, E)
    out = []
    attempts = 0
    while len(out) < count:
        attempts += 1
        if attempts > 200 * count + 1000:
            raise AssertionError("sampling failed to produce determinant-one elements")
        v = [0] * (4 * (E + 1))
        for b in basis:
            c = rng.randrange(q)
            if c:
                v = [F.add(a, F.mul(c, bb)) for a, bb in zip(v, b)]
        ents = [tuple((e, c) for e, c in enumerate(v[k * (E + 1) : (k + 1) * (E + 1)]) if c) for k in range(4)]
        X = LaurentMat(q, *ents)
        if X.det() != ((0, 1),):
            continue
        out.append(g0 * X * g0i)
    return out


def levi_factor(g: LaurentMat, x: ThickChamber, y: ThickChamber):
    """Split g = h * u with h in the torus fixing the twin apartment of (x, y)."""
    g0, _ = standardize(x, y)
    g0i = g0.inverse()
    X = g0i * g * g0
    h = diag(g.q, const(X.eval_coeff(0)[0]), const(X.eval_coeff(0)[3]))
    u = h.inverse() * X
    return g0 * h * g0i, g0 * u * g0i


def p_subgroup_orders(q: int, nmax: int = 6) -> dict:
    """Orders of U(B+, wdot B-) for alternating w of length 1..nmax."""
    out = {}
    for n in range(1, nmax + 1):
        w = weyl((S1, S0) * n)
        w = weyl(w.word[:n])
        y = ThickChamber(wdot(q, w), MINUS)
        out[n] = len(unipotent_group(base_chamber(q, PLUS), y))
    return out


def describe_weyl(w) -> str:
    return weyl_name(w)
