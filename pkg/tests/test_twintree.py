import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twinbuild.errors import (
    BadIndex,
    FieldTooLarge,
    FieldTooSmall,
    GroupTooLarge,
    InvalidMatrix,
    NotFoundInRadius,
    SameSign,
    TooLong,
)
from twinbuild.twintree import building as tt
from twinbuild.twintree import groups as tg
from twinbuild.twintree.field import SUPPORTED, gf
from twinbuild.twintree.laurent import LaurentMat, const, diag, identity, mat, mono

PRIMES = {2, 3, 5, 7}


# --- helpers -----------------------------------------------------------------


def poly_rand(rng, q, lo, hi):
    return tuple((e, c) for e in range(lo, hi + 1) if (c := rng.randrange(q)))


def random_borel(q, sign, rng, steps=4):
    """Random element of B_sign as a product of its obvious generators."""
    F = gf(q)
    g = identity(q)
    for _ in range(steps):
        a = rng.choice(F.units)
        g = g * diag(q, const(a), const(F.inv(a)))
        if sign == "+":
            g = g * LaurentMat(q, const(1), poly_rand(rng, q, 0, 2), (), const(1))
            g = g * LaurentMat(q, const(1), (), poly_rand(rng, q, 1, 2), const(1))
        else:
            g = g * LaurentMat(q, const(1), (), poly_rand(rng, q, -2, 0), const(1))
            g = g * LaurentMat(q, const(1), poly_rand(rng, q, -2, -1), (), const(1))
    assert tt.in_borel(g, sign)
    return g


def random_weyl(rng, nmax):
    n = rng.randint(0, nmax)
    first = rng.choice((tt.S1, tt.S0))
    other = tt.S0 if first == tt.S1 else tt.S1
    return tt.weyl([first if k % 2 == 0 else other for k in range(n)])


def ball_graph(q, sign, radius):
    """Chambers within the given radius and their panel adjacency, found by
    breadth-first search with coset equality as the only identification."""
    found = [tt.base_chamber(q, sign)]
    frontier = list(found)
    for _ in range(radius):
        nxt = []
        for x in frontier:
            for i in (tt.S1, tt.S0):
                for y in tt.panel_neighbors(x, i):
                    if not any(y == z for z in found):
                        found.append(y)
                        nxt.append(y)
        frontier = nxt
    adj = {k: [] for k in range(len(found))}
    for k, x in enumerate(found):
        for i in (tt.S1, tt.S0):
            for y in tt.panel_neighbors(x, i):
                for m, z in enumerate(found):
                    if y == z:
                        adj[k].append((m, i))
    return found, adj


def bfs_from(adj, k):
    """Gallery distance and first panel type from chamber k to every other chamber."""
    dist = {k: (0, None)}
    frontier = [k]
    while frontier:
        nxt = []
        for u in frontier:
            d, f = dist[u]
            for v, i in adj[u]:
                if v not in dist:
                    dist[v] = (d + 1, i if f is None else f)
                    nxt.append(v)
        frontier = nxt
    return dist


# --- fields and Laurent matrices -----------------------------------------------


@pytest.mark.parametrize("q", SUPPORTED)
def test_field_axioms(q):
    F = gf(q)
    els = F.elements
    for a, b, c in itertools.product(els, repeat=3):
        assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
        assert F.add(F.add(a, b), c) == F.add(a, F.add(b, c))
        assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    for a in els:
        assert F.add(a, F.neg(a)) == 0
        if a:
            assert F.mul(a, F.inv(a)) == 1
    # characteristic and cyclic unit group
    assert F.pow(F.primitive, q - 1) == 1
    assert len({F.pow(F.primitive, k) for k in range(q - 1)}) == q - 1
    p = F.p
    x = 0
    for _ in range(p):
        x = F.add(x, 1)
    assert x == 0
    if q in PRIMES:
        assert all(F.mul(a, b) == a * b % q for a in els for b in els)


def test_field_errors():
    with pytest.raises(FieldTooLarge):
        gf(11)
    with pytest.raises(ValueError):
        gf(4).from_json([1, 0, 1])


@settings(max_examples=40, deadline=None)
@given(st.sampled_from([2, 3, 4, 5]), st.integers(0, 10**6))
def test_laurent_group_laws(q, seed):
    rng = random.Random(seed)
    a = random_borel(q, "+", rng, 2) * tt.sdot(q, 2) * random_borel(q, "-", rng, 2)
    b = random_borel(q, "-", rng, 2) * tt.sdot(q, 1)
    assert a.det() == ((0, 1),)
    assert (a * a.inverse()).is_identity()
    assert (a * b).inverse() == b.inverse() * a.inverse()
    assert LaurentMat.from_json(q, a.to_json()) == a


def test_laurent_json_requires_det_one():
    with pytest.raises(InvalidMatrix):
        LaurentMat.from_json(5, [{"0": 2}, {}, {}, {"0": 1}])
    m = LaurentMat.from_json(4, [[{"0": [1, 0]}, {"1": [0, 1]}], [{}, {"0": 1}]])
    assert m.b == ((1, 2),)


# --- Borel subgroups ---------------------------------------------------------


def test_in_borel_examples():
    q = 4
    t_up = mat(q, 1, {1: 1}, 0, 1)
    assert tt.in_borel(t_up, "+")
    assert not tt.in_borel(t_up, "-")
    for c in gf(q).units:
        assert not tt.in_borel(mat(q, 1, 0, c, 1), "+")
        # the lower-triangular-at-infinity convention
        assert tt.in_borel(mat(q, 1, 0, c, 1), "-")


def test_borel_intersection_is_torus():
    """Sampled products of generators that land in B+ and B- are constant diagonal."""
    q = 5
    F = gf(q)
    rng = random.Random(2)
    alphabet = [tt.sdot(q, 1), tt.sdot(q, 2)]
    alphabet += [diag(q, const(a), const(F.inv(a))) for a in F.units]
    alphabet += [tg.root_elem("up", k, 1, q) for k in range(2)] + [tg.root_elem("down", 1, 1, q)]
    hits = 0
    for _ in range(3000):
        g = identity(q)
        for _ in range(rng.randint(1, 6)):
            g = g * rng.choice(alphabet)
        if tt.in_borel(g, "+") and tt.in_borel(g, "-"):
            hits += 1
            assert not g.b and not g.c and g.a and len(g.a) == 1 and g.a[0][0] == 0
    assert hits > 20


# --- distances -----------------------------------------------------------------


@pytest.mark.parametrize("q", [2, 3])
def test_delta_matches_gallery_bfs(q):
    # balls of a tree are convex, so distances inside the ball are tree distances
    for sign in "+-":
        chambers, adj = ball_graph(q, sign, 3)
        assert len(chambers) == 1 + sum(2 * q**k for k in range(1, 4))
        rng = random.Random(q)
        for k in rng.sample(range(len(chambers)), 10):
            dist = bfs_from(adj, k)
            for m, y in enumerate(chambers):
                d, first = dist[m]
                w = tt.delta(chambers[k], y)
                assert w.length == d
                if d:
                    assert w.word[0] == first


def test_chamber_ball_size():
    for q in (2, 3, 4):
        for r in range(4):
            ball = tt.chamber_ball(q, "+", r)
            assert len(ball) == 1 + sum(2 * q**k for k in range(1, r + 1))
            assert len(set(ball)) == len(ball)


@pytest.mark.parametrize("q", [2, 3, 4, 5, 9])
def test_bruhat_recovers_construction(q):
    rng = random.Random(100 + q)
    for _ in range(25):
        for sign in "+-":
            b1, b2 = random_borel(q, sign, rng), random_borel(q, sign, rng)
            w = random_weyl(rng, 5)
            # the same Weyl representatives serve both signs
            g = b1 * tt.wdot(q, w) * b2
            c1, v, c2 = tt.bruhat(g, sign)
            assert v == w
            assert c1 * tt.wdot(q, v) * c2 == g
            assert tt.in_borel(c1, sign) and tt.in_borel(c2, sign)
            assert tt.delta(tt.base_chamber(q, sign), tt.ThickChamber(g, sign)) == w


@pytest.mark.parametrize("q", [2, 3, 4, 5, 8])
def test_birkhoff_recovers_construction(q):
    rng = random.Random(200 + q)
    for _ in range(25):
        bp, bm = random_borel(q, "+", rng), random_borel(q, "-", rng)
        w = random_weyl(rng, 5)
        g = bp * tt.wdot(q, w) * bm
        cp, v, cm = tt.birkhoff(g)
        assert v == w
        assert cp * tt.wdot(q, v) * cm == g
        assert tt.in_borel(cp, "+") and tt.in_borel(cm, "-")
        x, y = tt.base_chamber(q, "+"), tt.ThickChamber(g, "-")
        assert tt.codist(x, y) == w
        assert tt.codist(y, x) == w.inverse()
        # equivariance
        h = random_borel(q, "-", rng) * tt.sdot(q, 1) * random_borel(q, "+", rng)
        assert tt.codist(x.translate(h), y.translate(h)) == w


def test_decomposition_examples():
    q = 5
    assert tt.bruhat(identity(q))[1].length == 0
    for c in gf(q).units:
        assert tt.weyl_name(tt.bruhat(mat(q, 1, 0, c, 1))[1]) == "s1"
        assert tt.birkhoff(mat(q, 1, 0, c, 1))[1].length == 0
    g = diag(q, mono(1, 1), mono(1, -1))
    assert tt.bruhat(g)[1].length == 2
    assert tt.birkhoff(identity(q))[1].length == 0
    assert tt.weyl_name(tt.birkhoff(tt.sdot(q, 1))[1]) == "s1"


def test_codist_examples():
    q = 4
    x, y = tt.base_chamber(q, "+"), tt.base_chamber(q, "-")
    assert tt.codist(x, y).length == 0
    assert tt.weyl_name(tt.codist(x, tt.ThickChamber(tt.sdot(q, 1), "-"))) == "s1"
    with pytest.raises(SameSign):
        tt.codist(x, x)


def test_codistance_is_distance_to_opposition_set():
    """The length of the codistance equals the distance to the nearest opposite chamber."""
    q = 2
    # x and y within radius 2 have codistance length <= 4, so the nearest
    # opposite chamber lies within radius 7 of the base chamber
    ball = tt.chamber_ball(q, "+", 7)
    near = [x for x in ball if tt.delta(tt.base_chamber(q, "+"), x).length <= 2]
    rng = random.Random(9)
    for _ in range(10):
        y = tg.random_chamber(q, "-", 2, rng)
        opp = [z for z in ball if tt.codist(z, y).length == 0]
        for x in rng.sample(near, 5):
            d = min(tt.delta(x, z).length for z in opp)
            assert tt.codist(x, y).length == d


@pytest.mark.parametrize("q,seed", [(4, 1), (5, 7), (3, 2)])
def test_twin_axioms_sampled(q, seed):
    rep = tg.check_twin_axioms(q, 150, seed)
    assert rep.passed, rep.failures
    assert rep.tw2_checked > 0
    again = tg.check_twin_axioms(q, 150, seed)
    assert again.to_json() == rep.to_json()


# --- root groups and unipotent groups -------------------------------------------


def test_root_elem_examples():
    q = 4
    for c in gf(q).elements:
        assert tg.root_elem("up", 0, c, q) == mat(q, 1, c, 0, 1)
        assert tt.in_borel(tg.root_elem("up", 0, c, q), "+")
        assert tt.in_borel(tg.root_elem("down", 1, c, q), "+")
    assert tg.root_elem("down", 1, 1, q) == mat(q, 1, 0, {1: 1}, 1)
    with pytest.raises(BadIndex):
        tg.root_elem("down", 0, 1, q)
    with pytest.raises(BadIndex):
        tg.root_elem("up", -1, 1, q)


def test_unipotent_examples():
    q = 5
    x = tt.base_chamber(q, "+")
    assert len(tg.unipotent_group(x, tt.base_chamber(q, "-"))) == 1
    U = tg.unipotent_group(x, tt.ThickChamber(tt.sdot(q, 1), "-"))
    assert U == frozenset(mat(q, 1, c, 0, 1) for c in gf(q).elements)
    y = tt.ThickChamber(tt.wdot(4, tt.weyl([1, 2])), "-")
    U = tg.unipotent_group(tt.base_chamber(4, "+"), y)
    assert len(U) == 16 and tg.is_closed(U, U)
    with pytest.raises(TooLong):
        tg.unipotent_group(tt.base_chamber(2, "+"), tt.ThickChamber(tt.wdot(2, tt.weyl([1, 2] * 5)), "-"))


@pytest.mark.parametrize("q", [2, 3, 4])
def test_unipotent_group_is_stabilizer_intersection(q):
    """U(x+, x-) is a group of order q^n inside U(x+) fixing x-, acting freely on chambers opposite x+."""
    rng = random.Random(q)
    ball_minus = tt.chamber_ball(q, "-", 2)
    for n in range(4):
        for _ in range(3):
            b = random_borel(q, "+", rng)
            w = tt.weyl(([1, 2] if rng.random() < 0.5 else [2, 1]) * 3).word[:n]
            x = tt.ThickChamber(b, "+")
            y = tt.ThickChamber(b * tt.wdot(q, w), "-")
            U = tg.unipotent_group(x, y)
            assert len(U) == q**n
            assert all(u.inverse() in U for u in U)
            assert all(u * v in U for u in U for v in U)
            for u in U:
                assert x.translate(u) == x and y.translate(u) == y
            opp = [z.translate(b) for z in ball_minus if tt.codist(tt.base_chamber(q, "+"), z).length == 0]
            assert tg.acts_freely_on(U, opp)


# --- torus and the P-conditions ----------------------------------------------------


def test_torus_fixed_examples():
    assert len(tg.torus_fixed_chambers(4, 0)) == 1
    chs = tg.torus_fixed_chambers(4, 3)
    assert len(chs) == 7 and all(tg.in_standard_apartment(c) for c in chs)
    assert len(tg.torus_fixed_chambers(5, 1)) == 3
    with pytest.raises(FieldTooSmall):
        tg.torus_fixed_chambers(3, 2)
    # small fields: the torus is too small to pin down the apartment
    assert len(tg.torus_fixed_chambers(2, 2, allow_small=True)) == len(tt.chamber_ball(2, "+", 2))


def test_torus_fixed_brute_force():
    q = 5
    F = gf(q)
    torus = [diag(q, const(a), const(F.inv(a))) for a in F.units]
    for sign in "+-":
        ball = tt.chamber_ball(q, sign, 3)
        brute = [c for c in ball if all(c.translate(h) == c for h in torus)]
        got = tg.torus_fixed_chambers(q, 3, sign)
        assert set(got) == set(brute)
        assert len(got) == 7


def test_p_conditions_examples():
    r2 = tg.check_P_conditions(2)
    assert (r2.p1, r2.p2, r2.p3, r2.order, r2.fixed_conjugates) == (True, False, False, 6, 3)
    r3 = tg.check_P_conditions(3)
    assert r3.p1 and not r3.p2 and r3.order == 24
    r4 = tg.check_P_conditions(4)
    assert (r4.p1, r4.p2, r4.p3, r4.order) == (True, True, True, 60)
    assert r4.h_is_torus
    with pytest.raises(FieldTooLarge):
        tg.check_P_conditions(11)


# --- finite subgroups ------------------------------------------------------------------


def test_finite_subgroup_examples():
    q = 4
    F = gf(q)
    Rp, Rm = tg.finite_subgroup_residues_q(q, [], 3)
    assert str(Rp) == "base:+:J{}" and str(Rm) == "base:-:J{}"
    Rp, Rm = tg.finite_subgroup_residues([tt.sdot(q, 1)], 3)
    assert Rp.J == {tt.S1} and Rm.J == {tt.S1}
    assert Rp.chamber == tt.base_chamber(q, "+") and Rm.chamber == tt.base_chamber(q, "-")
    torus = [diag(q, const(a), const(F.inv(a))) for a in F.units]
    Rp, Rm = tg.finite_subgroup_residues(torus, 3)
    assert not Rp.J and not Rm.J
    with pytest.raises(GroupTooLarge):
        tg.finite_subgroup_residues([tt.sdot(q, 1), tt.sdot(q, 2)], 3, cutoff=500)


def test_stabilized_residue_brute_force():
    """Stabilized residues really are stabilized: every element maps the chamber into the residue."""
    q = 4
    rng = random.Random(4)
    F = gf(q)
    for _ in range(5):
        a, b = rng.choice(F.units), rng.randrange(q)
        g = mat(q, a, b, 0, F.inv(a))
        gens = [g * tt.sdot(q, 1) * g.inverse(), mat(q, 1, 0, rng.choice(F.units), 1)]
        G = tg.enumerate_group(gens)
        Rp, Rm = tg.finite_subgroup_residues(gens, 4)
        for R in (Rp, Rm):
            for h in G:
                img = R.chamber.translate(h)
                if R.J:
                    (i,) = tuple(R.J)
                    assert img == R.chamber or any(img == z for z in tt.panel_neighbors(R.chamber, i))
                else:
                    assert img == R.chamber


def test_not_found_in_radius():
    q = 4
    g = tt.ThickChamber(tt.wdot(q, tt.weyl([1, 2, 1, 2, 1, 2])), "+").g
    h = g * tt.sdot(q, 1) * g.inverse()
    with pytest.raises(NotFoundInRadius):
        tg.finite_subgroup_residues([h], 1)


def test_p_subgroup_orders():
    got = tg.p_subgroup_orders(2, 5)
    assert got == {n: 2**n for n in range(1, 6)}


# --- Levi factorization ---------------------------------------------------------------


def test_levi_factorization_small():
    q = 4
    rng = random.Random(1)
    for n in range(3):
        b = random_borel(q, "+", rng, 2)
        w = tt.weyl([1, 2, 1][:n])
        x = tt.ThickChamber(b, "+")
        y = tt.ThickChamber(b * tt.wdot(q, w), "-")
        U = tg.unipotent_group(x, y)
        samples = tg.sample_pair_stabilizer(x, y, 30, seed=n)
        assert len({g for g in samples}) > 1
        for g in samples:
            assert x.translate(g) == x and y.translate(g) == y
            h, u = tg.levi_factor(g, x, y)
            assert h * u == g
            assert u in U
            g0, _ = tg.standardize(x, y)
            hs = g0.inverse() * h * g0
            assert not hs.b and not hs.c and hs.a[0][0] == 0
