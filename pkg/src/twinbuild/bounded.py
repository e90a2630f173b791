"""Apartment-level classification of maximal bounded subgroup types.

A pair of spherical residues (R+, R-) of the thin twin building is first
refined to its mutual projections; the refined pair is then tested for the
two sufficient shapes: maximal spherical and opposite (case i'), or parallel
and properly inside unique maximal spherical envelopes whose mutual
projections give back the pair (case ii').
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import coxeter as cx
from .coxeter import CoxeterMatrix
from .diagram import spherical_subsets
from .errors import BoundTooSmall, NonSphericalTypeRequired, NotSpherical
from .thinb import (
    MINUS,
    PLUS,
    Chamber,
    Residue,
    TwinRoot,
    is_parallel,
    project_residue,
    residues_opposite,
)

OPPOSITE_MAXIMAL = "OppositeMaximal"
PARALLEL = "Parallel"
NOT_MAXIMAL = "NotMaximal"


@dataclass(frozen=True)
class MaxBoundedVerdict:
    case: str
    refined: tuple
    envelopes: tuple | None = None

    def key(self):
        return pair_key(*self.refined)

    def to_json(self) -> dict:
        out = {"case": self.case, "refined": [str(r) for r in self.refined]}
        if self.envelopes is not None:
            out["envelopes"] = [str(r) for r in self.envelopes]
        return out


def _require_infinite(cm: CoxeterMatrix):
    if cx.is_spherical(cm.gens, cm):
        raise NonSphericalTypeRequired("the Coxeter group is finite")


def _require_input(Rp: Residue, Rm: Residue):
    if Rp.sign != PLUS or Rm.sign != MINUS:
        raise ValueError("expected a positive and a negative residue")
    for R in (Rp, Rm):
        if not R.is_spherical():
            raise NotSpherical(f"{R} is not of spherical type")


def pair_key(Rp: Residue, Rm: Residue):
    """Invariant of the pair under left translation by W."""
    d = cx.double_coset_min(Rp.J, Rp.rep.inverse() * Rm.rep, Rm.J)
    return (tuple(sorted(Rp.J)), tuple(sorted(Rm.J)), d.word)


def refine(Rp: Residue, Rm: Residue):
    return project_residue(Rp, Rm), project_residue(Rm, Rp)


def classify_pair(Rp: Residue, Rm: Residue, lattice=None) -> MaxBoundedVerdict:
    cm = Rp.cm
    _require_infinite(cm)
    _require_input(Rp, Rm)
    lat = lattice or spherical_subsets(cm)
    Ap, Am = refine(Rp, Rm)
    if Ap.J in lat.maximal and Am.J in lat.maximal and residues_opposite(Ap, Am):
        return MaxBoundedVerdict(OPPOSITE_MAXIMAL, (Ap, Am))
    envs = []
    for A in (Ap, Am):
        ks = lat.maximal_containing(A.J)
        if len(ks) != 1 or ks[0] == A.J:
            return MaxBoundedVerdict(NOT_MAXIMAL, (Ap, Am))
        envs.append(Residue(A.sign, ks[0], A.rep))
    Ep, Em = envs
    if is_parallel(Ap, Am) and project_residue(Ep, Em) == Ap and project_residue(Em, Ep) == Am:
        return MaxBoundedVerdict(PARALLEL, (Ap, Am), (Ep, Em))
    return MaxBoundedVerdict(NOT_MAXIMAL, (Ap, Am))


@dataclass
class Enumeration:
    verdicts: list
    bound: int
    pairs_examined: int
    metadata: dict = field(default_factory=dict)


def enumerate_types(cm: CoxeterMatrix, L: int) -> Enumeration:
    """Verdicts of cases (i') and (ii') over orbit representatives with ``l(w) <= L``.

    Every pair is W-equivalent to (Res_J(e)+, Res_K(w)-) with w minimal in
    W_J w W_K; verdicts are deduplicated by the orbit of the refined pair.
    """
    _require_infinite(cm)
    lat = spherical_subsets(cm)
    types = sorted(lat.spherical, key=lambda J: (len(J), sorted(J)))
    ball = cx.ball(cm, L)
    one = cm.identity()
    seen = {}
    examined = 0
    for J in types:
        Rp = Residue(PLUS, J, one)
        for K in types:
            for w in ball:
                if cx.double_coset_min(J, w, K) != w:
                    continue
                examined += 1
                v = classify_pair(Rp, Residue(MINUS, K, w), lat)
                if v.case != NOT_MAXIMAL:
                    seen.setdefault(v.key(), v)
    verdicts = [seen[k] for k in sorted(seen, key=lambda k: (len(k[2]), k[2], k[0], k[1]))]
    return Enumeration(verdicts, L, examined, {"complete_beyond_bound": False})


def case_ii_search(cm: CoxeterMatrix, L: int) -> int:
    """Number of distinct case (ii') verdicts found at the bound."""
    return sum(1 for v in enumerate_types(cm, L).verdicts if v.case == PARALLEL)


# --- Levi root partition -------------------------------------------------


@dataclass(frozen=True)
class LeviRootPartition:
    levi_walls: frozenset
    utilde_plus: frozenset
    utilde_minus: frozenset
    u_core: tuple
    witnesses: tuple

    def to_json(self) -> dict:
        def walls(xs):
            return sorted(str(x) for x in xs)

        return {
            "levi_walls": walls(self.levi_walls),
            "utilde_plus": sorted(str(r) for r in self.utilde_plus),
            "utilde_minus": sorted(str(r) for r in self.utilde_minus),
            "u_core": [str(r) for r in self.u_core],
            "witnesses": [str(c) for c in self.witnesses],
        }


def residue_walls(R: Residue) -> frozenset:
    """Reflections stabilizing a spherical residue."""
    ri = R.rep.inverse()
    return frozenset(R.rep * t * ri for t in cx.reflections_of_parabolic(R.J, R.cm))


def _root_containing(t, c: Chamber) -> TwinRoot:
    root = TwinRoot(t, True)
    return root if root.contains(c) else -root


def levi_root_partition(Rp: Residue, Rm: Residue, L: int) -> LeviRootPartition:
    _require_input(Rp, Rm)
    Cp, Cm = refine(Rp, Rm)
    levi = residue_walls(Cp)
    assert levi == residue_walls(Cm)
    ut = []
    for R, C in ((Rp, Cp), (Rm, Cm)):
        c0 = Chamber(C.rep, C.sign)
        ut.append(frozenset(_root_containing(t, c0) for t in residue_walls(R) - residue_walls(C)))
    a, m, b = cx.double_coset_factor_min(Rp.J, Rp.rep.inverse() * Rm.rep, Rm.J)
    xp = Chamber(Rp.rep * a, PLUS)
    xm = Chamber(Rm.rep * b.inverse(), MINUS)
    core = []
    g = xp.element
    for s in m.word:
        t = g.times_word((s,)) * g.inverse()
        core.append(TwinRoot(t, True) if TwinRoot(t, True).contains(Chamber(g, PLUS)) else TwinRoot(t, False))
        g = g.times_word((s,))
    everything = list(levi) + [r.wall for r in ut[0] | ut[1]] + [r.wall for r in core]
    if any(t.length > L for t in everything):
        raise BoundTooSmall(f"a wall of the partition is longer than {L}")
    return LeviRootPartition(levi, ut[0], ut[1], tuple(core), (xp, xm))
