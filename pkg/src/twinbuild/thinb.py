"""The thin twin building of a Coxeter system.

Chambers are pairs (w, sign).  Distance and codistance are both ``x^-1 y``;
which one is meant depends on whether the signs agree.  A residue of type J
is a coset ``rep W_J`` with a sign, ``rep`` being the minimal element.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from . import coxeter as cx
from .coxeter import CoxeterMatrix, Element
from .errors import (
    MatrixMismatch,
    NotCodistanceOne,
    NotParallel,
    NotPrenilpotent,
    NotSpherical,
)

PLUS, MINUS = "+", "-"
DEFAULT_RADIUS = 10


def flip(sign: str) -> str:
    return MINUS if sign == PLUS else PLUS


def _check_sign(sign):
    if sign not in (PLUS, MINUS):
        raise ValueError(f"sign must be '+' or '-', got {sign!r}")


@dataclass(frozen=True)
class Chamber:
    element: Element
    sign: str

    def __post_init__(self):
        _check_sign(self.sign)

    @property
    def cm(self) -> CoxeterMatrix:
        return self.element.cm

    def __str__(self):
        return f"{self.element}:{self.sign}"

    def sortkey(self):
        return (self.sign != PLUS, self.element.sortkey())


@dataclass(frozen=True)
class Residue:
    sign: str
    J: frozenset
    rep: Element

    def __post_init__(self):
        _check_sign(self.sign)
        J = frozenset(self.J)
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "rep", cx.min_coset_rep(self.rep, J))

    @property
    def cm(self) -> CoxeterMatrix:
        return self.rep.cm

    @property
    def rank(self) -> int:
        return len(self.J)

    def is_spherical(self) -> bool:
        return cx.is_spherical(self.J, self.cm)

    def contains(self, c: Chamber) -> bool:
        return c.sign == self.sign and cx.in_parabolic(self.rep.inverse() * c.element, self.J)

    def __contains__(self, c: Chamber) -> bool:
        return self.contains(c)

    def chambers(self) -> list:
        """All chambers (J spherical)."""
        return [Chamber(self.rep * u, self.sign) for u in cx.parabolic_elements(self.J, self.cm)]

    def chamber_set(self) -> frozenset:
        return frozenset(self.chambers())

    def __str__(self):
        inner = ",".join(str(j) for j in sorted(self.J))
        return f"{self.rep}:J{{{inner}}}:{self.sign}"

    def sortkey(self):
        return (self.sign != PLUS, len(self.J), tuple(sorted(self.J)), self.rep.sortkey())


def residue_of(c: Chamber, J: Iterable[int]) -> Residue:
    return Residue(c.sign, frozenset(J), c.element)


def chamber(word, cm: CoxeterMatrix, sign: str = PLUS) -> Chamber:
    return Chamber(cx.reduce(word, cm), sign)


def parse_chamber(text: str, cm: CoxeterMatrix) -> Chamber:
    word, sign = text.rsplit(":", 1)
    return Chamber(cx.reduce(cx.parse_word(word), cm), sign.strip())


def parse_residue(text: str, cm: CoxeterMatrix) -> Residue:
    word, jpart, sign = text.rsplit(":", 2)
    jpart = jpart.strip()
    if not (jpart.startswith("J{") and jpart.endswith("}")):
        raise ValueError(f"bad residue type {jpart!r}")
    inner = jpart[2:-1].replace(",", " ").split()
    J = frozenset(int(x) for x in inner)
    for j in J:
        cx._check_index(j, cm)
    return Residue(sign.strip(), J, cx.reduce(cx.parse_word(word), cm))


def parse_root(text: str, cm: CoxeterMatrix) -> TwinRoot:
    """``"<wall word>|<+ or ->"``; the side is + when the positive base chamber lies in the root."""
    word, side = text.rsplit("|", 1)
    t = cx.reduce(cx.parse_word(word), cm)
    if t.length == 0 or t not in cx.reflections_up_to(cm, t.length):
        raise ValueError(f"{t} is not a reflection")
    side = side.strip()
    if side not in (PLUS, MINUS):
        raise ValueError(f"root side must be + or -, got {side!r}")
    return TwinRoot(t, side == PLUS)


def _same_cm(a, b):
    if a.cm != b.cm:
        raise MatrixMismatch("objects over different Coxeter matrices")


def wdist(x: Chamber, y: Chamber) -> Element:
    """``x^-1 y``: the W-distance for equal signs, the codistance otherwise."""
    _same_cm(x, y)
    return x.element.inverse() * y.element


def opposite(x: Chamber) -> Chamber:
    return Chamber(x.element, flip(x.sign))


def opposite_residue(R: Residue) -> Residue:
    """The residue of the other half opposite R (same coset, other sign)."""
    return Residue(flip(R.sign), R.J, R.rep)


def _require_spherical(J, cm):
    if not cx.is_spherical(J, cm):
        raise NotSpherical(f"type {sorted(J)} is not spherical")


def project_chamber(R: Residue, c: Chamber) -> Chamber:
    _same_cm(R, c)
    d = R.rep.inverse() * c.element
    if c.sign == R.sign:
        u, _ = cx.coset_factor_left(R.J, d)
        return Chamber(R.rep * u, R.sign)
    _require_spherical(R.J, R.cm)
    a, _, _ = cx.double_coset_factor_max(R.J, d, ())
    return Chamber(R.rep * a, R.sign)


def _conj_type(J: frozenset, w: Element, K: frozenset) -> frozenset:
    """Generators s of J with w^-1 s w a generator in K."""
    wi = w.inverse()
    out = set()
    for s in J:
        c = wi.times_word((s,)) * w
        if c.length == 1 and c.word[0] in K:
            out.add(s)
    return frozenset(out)


def _conj_by(x: Element, J: frozenset) -> frozenset:
    """The set x J x^-1, assumed to consist of generators."""
    xi = x.inverse()
    out = set()
    for s in J:
        c = x.times_word((s,)) * xi
        assert c.length == 1
        out.add(c.word[0])
    return frozenset(out)


def residue_distance(R: Residue, Q: Residue) -> Element:
    """Minimal element of the double coset of distances (same sign) or maximal codistance (opposite signs)."""
    _same_cm(R, Q)
    d = R.rep.inverse() * Q.rep
    if R.sign == Q.sign:
        return cx.double_coset_min(R.J, d, Q.J)
    _require_spherical(R.J, R.cm)
    _require_spherical(Q.J, R.cm)
    return cx.double_coset_max(R.J, d, Q.J)


def project_residue(R: Residue, Q: Residue) -> Residue:
    """``proj_R(Q)`` as a residue contained in R."""
    _same_cm(R, Q)
    cm = R.cm
    d = R.rep.inverse() * Q.rep
    if R.sign == Q.sign:
        a, w, _ = cx.double_coset_factor_min(R.J, d, Q.J)
        return Residue(R.sign, _conj_type(R.J, w, Q.J), R.rep * a)
    _require_spherical(R.J, cm)
    _require_spherical(Q.J, cm)
    a, w, _ = cx.double_coset_factor_max(R.J, d, Q.J)
    return Residue(R.sign, _conj_type(R.J, w, Q.J), R.rep * a)


def cross_type_formula(R: Residue, Q: Residue) -> frozenset:
    """``w0_J (J cap w K w^-1) w0_J`` for residues of opposite signs.

    Here w is the minimal element of the codistance double coset; with the
    maximal element the conjugation by w0_J must be dropped, see
    :func:`cross_type_max`.
    """
    _require_spherical(R.J, R.cm)
    _require_spherical(Q.J, R.cm)
    w = cx.double_coset_min(R.J, R.rep.inverse() * Q.rep, Q.J)
    w0 = cx.longest_element(R.J, R.cm)
    return _conj_by(w0, _conj_type(R.J, w, Q.J))


def cross_type_max(R: Residue, Q: Residue) -> frozenset:
    """``J cap w K w^-1`` with w the maximal codistance between R and Q."""
    return _conj_type(R.J, residue_distance(R, Q), Q.J)


def is_parallel(R: Residue, Q: Residue) -> bool:
    return project_residue(R, Q) == R and project_residue(Q, R) == Q


def is_opposite_in(A: Residue, B: Residue, T: Residue) -> bool:
    """A and B lie in the spherical residue T and are opposite there."""
    if not (A.sign == B.sign == T.sign):
        return False
    if not (A.J <= T.J and B.J <= T.J):
        return False
    if not (T.contains(Chamber(A.rep, A.sign)) and T.contains(Chamber(B.rep, B.sign))):
        return False
    w0 = cx.longest_element(T.J, T.cm)
    if _conj_by(w0, A.J) != B.J:
        return False
    return B.contains(Chamber(A.rep * w0, A.sign))


def residues_opposite(R: Residue, Q: Residue) -> bool:
    """Opposition of spherical residues of opposite signs (same type, opposite chambers)."""
    return R.sign != Q.sign and R.J == Q.J and R.rep == Q.rep


def stabilizing_walls(R: Residue, L: int) -> set:
    """Reflections of length <= L stabilizing the residue."""
    out = set()
    ri = R.rep.inverse()
    for t in cx.reflections_up_to(R.cm, L):
        if cx.in_parabolic(ri * t * R.rep, R.J):
            out.add(t)
    return out


@dataclass(frozen=True)
class ParallelChain:
    residues: tuple
    envelopes: tuple = field(default=())

    @property
    def n(self) -> int:
        return len(self.envelopes)

    def verify(self) -> bool:
        if len(self.residues) != len(self.envelopes) + 1:
            return False
        first, last = self.residues[0], self.residues[-1]
        for i, T in enumerate(self.envelopes):
            a, b = self.residues[i], self.residues[i + 1]
            if T.rank != first.rank + 1 or not T.is_spherical():
                return False
            if not is_opposite_in(a, b, T):
                return False
            if project_residue(T, first) != a or project_residue(T, last) != b:
                return False
        return True


def parallelism_chain(R: Residue, Q: Residue) -> ParallelChain:
    """A chain of pairwise opposite residues in spherical envelopes joining parallel R and Q."""
    _same_cm(R, Q)
    if R.sign != Q.sign or not is_parallel(R, Q):
        raise NotParallel(f"{R} and {Q} are not parallel residues of the same sign")
    cm = R.cm
    residues, envelopes = [R], []
    cur = R
    while cur != Q:
        w = residue_distance(cur, Q)
        s = min(w.left_descents())
        I = cur.J | {s}
        if not cx.is_spherical(I, cm):
            raise NotParallel("envelope is not spherical")
        T = Residue(cur.sign, I, cur.rep)
        nxt = project_residue(T, Q)
        envelopes.append(T)
        residues.append(nxt)
        cur = nxt
    return ParallelChain(tuple(residues), tuple(envelopes))


def panel_sphericity_witness(R: Residue, radius: int):
    """Search chambers x, y of R (within the radius) with proj of x onto each J-panel of y different from y."""
    cm = R.cm
    els = [u for u in cx.ball(cm, radius) if cx.in_parabolic(u, R.J)]
    chs = [Chamber(R.rep * u, R.sign) for u in els]
    for y in chs:
        panels = [residue_of(y, {j}) for j in R.J]
        for x in chs:
            if all(project_chamber(p, x) != y for p in panels):
                return x, y
    return None


# --- twin roots ----------------------------------------------------------


@dataclass(frozen=True)
class TwinRoot:
    wall: Element
    side: bool

    @property
    def cm(self) -> CoxeterMatrix:
        return self.wall.cm

    def contains(self, c: Chamber) -> bool:
        w = c.element
        up = (self.wall * w).length > w.length
        return up == self.side if c.sign == PLUS else up == (not self.side)

    def __contains__(self, c: Chamber) -> bool:
        return self.contains(c)

    def __neg__(self) -> "TwinRoot":
        return TwinRoot(self.wall, not self.side)

    def __str__(self):
        return f"{self.wall}|{'+' if self.side else '-'}"

    def sortkey(self):
        return (self.wall.sortkey(), not self.side)


def twin_root_from(x: Chamber, y: Chamber) -> TwinRoot:
    """The twin root spanned by two chambers at codistance a generator."""
    _same_cm(x, y)
    if x.sign == y.sign:
        raise NotCodistanceOne("chambers must have opposite signs")
    s = wdist(x, y)
    if s.length != 1:
        raise NotCodistanceOne(f"codistance {s} is not a generator")
    t = x.element * s * x.element.inverse()
    for side in (True, False):
        root = TwinRoot(t, side)
        if root.contains(x):
            return root
    raise AssertionError("unreachable")


def _positive_ball(cm, radius):
    return [Chamber(w, PLUS) for w in cx.ball(cm, radius)]


def prenilpotent(phi: TwinRoot, psi: TwinRoot, radius: int = DEFAULT_RADIUS) -> bool:
    """Both ``phi & psi`` and ``-phi & -psi`` meet the positive half (searched up to the radius)."""
    _same_cm(phi, psi)
    a = b = False
    for c in _positive_ball(phi.cm, radius):
        ip, iq = phi.contains(c), psi.contains(c)
        a = a or (ip and iq)
        b = b or (not ip and not iq)
        if a and b:
            return True
    return False


def interval(phi: TwinRoot, psi: TwinRoot, L: int, radius: int = DEFAULT_RADIUS) -> set:
    """Twin roots with wall length <= L containing ``phi & psi`` and whose negatives contain ``-phi & -psi``."""
    if not prenilpotent(phi, psi, radius):
        raise NotPrenilpotent(f"{phi} and {psi} are not prenilpotent")
    ball = _positive_ball(phi.cm, radius)
    inside = [c for c in ball if phi.contains(c) and psi.contains(c)]
    outside = [c for c in ball if not phi.contains(c) and not psi.contains(c)]
    out = set()
    for t in cx.reflections_up_to(phi.cm, L):
        for side in (True, False):
            a = TwinRoot(t, side)
            if all(a.contains(c) for c in inside) and not any(a.contains(c) for c in outside):
                out.add(a)
    return out


def spherical_residues_in_ball(cm: CoxeterMatrix, radius: int, sign: str = PLUS) -> list:
    """Every residue of spherical type whose minimal representative has length <= radius."""
    subsets = [J for J in cx.iter_subsets(cm) if cx.is_spherical(J, cm)]
    out = set()
    for w in cx.ball(cm, radius):
        for J in subsets:
            if cx.min_coset_rep(w, J) == w:
                out.add(Residue(sign, J, w))
    return sorted(out, key=Residue.sortkey)
