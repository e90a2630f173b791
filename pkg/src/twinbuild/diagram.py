"""Coxeter diagram analysis: spherical subsets and the obstruction conditions.

The conditions (R1), (R2), (R3) and the reformulations (R2'), (R3'), (R3'')
are evaluated literally over the lattice of spherical subsets, each by its
own quantifier structure, so that the equivalence audit compares genuinely
independent computations.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterator

from . import coxeter as cx
from .coxeter import INF, CoxeterMatrix
from .errors import RankTooLarge

MAX_RANK = 12
CONDITIONS = ("R1", "R2", "R2'", "R3", "R3'", "R3''")
_ALIASES = {"R2′": "R2'", "R3′": "R3'", "R3″": "R3''", "R3′′": "R3''"}


@dataclass(frozen=True)
class SphericalLattice:
    spherical: frozenset
    maximal: frozenset

    def is_spherical(self, J) -> bool:
        return frozenset(J) in self.spherical

    def maximal_containing(self, J) -> list:
        J = frozenset(J)
        return [K for K in self.maximal if J <= K]


def spherical_subsets(cm: CoxeterMatrix) -> SphericalLattice:
    if cm.rank > MAX_RANK:
        raise RankTooLarge(f"rank {cm.rank} exceeds {MAX_RANK}")
    sph = frozenset(J for J in cx.iter_subsets(cm) if cx.is_spherical(J, cm))
    gens = frozenset(cm.gens)
    maximal = frozenset(J for J in sph if all(J | {s} not in sph for s in gens - J))
    return SphericalLattice(sph, maximal)


def _r1(cm, lat):
    return all(cm.order(s, t) != 3 for s in cm.gens for t in cm.gens if s != t)


def _r2(cm, lat):
    gens = frozenset(cm.gens)
    for K in lat.maximal:
        for J in lat.spherical:
            if J < K and not any(
                (J | {s}) in lat.spherical and (K | {s}) not in lat.spherical for s in gens - K
            ):
                return False
    return True


def _r2p(cm, lat):
    for J in lat.spherical - lat.maximal:
        if len(lat.maximal_containing(J)) < 2:
            return False
    return True


def _r3(cm, lat):
    return all(sum(1 for K in lat.maximal if j in K) == 1 for j in cm.gens)


def _r3p(cm, lat):
    gens = frozenset(cm.gens)
    return all(cm.order(s, j) == INF for J in lat.maximal for j in J for s in gens - J)


def set_partitions(items: list) -> Iterator[list]:
    """All partitions of a list into nonempty blocks."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1 :]


def _partition_ok(blocks, cm, lat):
    if any(frozenset(b) not in lat.spherical for b in blocks):
        return False
    for i, a in enumerate(blocks):
        for b in blocks[i + 1 :]:
            if any(cm.order(s, t) != INF for s in a for t in b):
                return False
    return True


def _r3pp(cm, lat):
    gens = list(cm.gens)
    if len(gens) <= 7:
        return any(_partition_ok(p, cm, lat) for p in set_partitions(gens))
    # any admissible partition must be the one into components of finite bonds
    comps = []
    todo = set(gens)
    while todo:
        comp, stack = set(), [todo.pop()]
        while stack:
            s = stack.pop()
            comp.add(s)
            for t in list(todo):
                if cm.order(s, t) != INF:
                    todo.discard(t)
                    stack.append(t)
        comps.append(sorted(comp))
    return _partition_ok(comps, cm, lat)


_CHECKS = {"R1": _r1, "R2": _r2, "R2'": _r2p, "R3": _r3, "R3'": _r3p, "R3''": _r3pp}


def normalize_condition(which: str) -> str:
    which = which.strip().upper()
    which = _ALIASES.get(which, which)
    if which not in _CHECKS:
        raise ValueError(f"unknown condition {which!r}; expected one of {', '.join(CONDITIONS)}")
    return which


def check_condition(cm: CoxeterMatrix, which: str, lattice: SphericalLattice | None = None) -> bool:
    which = normalize_condition(which)
    lat = lattice or spherical_subsets(cm)
    return _CHECKS[which](cm, lat)


@dataclass(frozen=True)
class AuditReport:
    values: dict
    r2_agree: bool
    r3_agree: bool

    @property
    def passed(self) -> bool:
        return self.r2_agree and self.r3_agree

    def to_json(self) -> dict:
        return {"values": dict(self.values), "r2_agree": self.r2_agree, "r3_agree": self.r3_agree, "pass": self.passed}


def equivalence_audit(cm: CoxeterMatrix) -> AuditReport:
    lat = spherical_subsets(cm)
    vals = {c: _CHECKS[c](cm, lat) for c in CONDITIONS}
    return AuditReport(
        vals,
        vals["R2"] == vals["R2'"],
        vals["R3"] == vals["R3'"] == vals["R3''"],
    )


RANDOM_ENTRIES = (2, 3, 4, 5, 6, INF)


def random_matrix(rank: int, rng: random.Random) -> CoxeterMatrix:
    m = [[1] * rank for _ in range(rank)]
    for i in range(rank):
        for j in range(i + 1, rank):
            m[i][j] = m[j][i] = rng.choice(RANDOM_ENTRIES)
    return CoxeterMatrix(tuple(tuple(r) for r in m))


def _chain(n, bonds=None):
    b = {(i, i + 1): 3 for i in range(1, n)}
    b.update(bonds or {})
    return CoxeterMatrix.from_bonds(n, b)


def affine_catalog() -> dict:
    """Irreducible affine Coxeter diagrams of rank at most 5."""
    cat = {"~A1": CoxeterMatrix.from_bonds(2, {(1, 2): INF})}
    for n in (2, 3, 4):
        b = {(i, i + 1): 3 for i in range(1, n + 1)}
        b[(1, n + 1)] = 3
        cat[f"~A{n}"] = CoxeterMatrix.from_bonds(n + 1, b)
    cat["~B3"] = CoxeterMatrix.from_bonds(4, {(1, 3): 3, (2, 3): 3, (3, 4): 4})
    cat["~B4"] = CoxeterMatrix.from_bonds(5, {(1, 3): 3, (2, 3): 3, (3, 4): 3, (4, 5): 4})
    for n in (2, 3, 4):
        cat[f"~C{n}"] = _chain(n + 1, {(1, 2): 4, (n, n + 1): 4})
    cat["~D4"] = CoxeterMatrix.from_bonds(5, {(1, 3): 3, (2, 3): 3, (3, 4): 3, (3, 5): 3})
    cat["~G2"] = CoxeterMatrix.from_bonds(3, {(1, 2): 3, (2, 3): 6})
    cat["~F4"] = _chain(5, {(3, 4): 4})
    return cat
