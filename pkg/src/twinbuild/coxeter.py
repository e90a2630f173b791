"""Exact Coxeter-system engine.

Elements are stored as ShortLex normal forms (1-based generator indices,
lexicographically least reduced word).  The word problem is solved by
rank-2 rewriting: to decide whether a generator ``t`` is a right descent of
``x = p.a`` we split ``p = y.z`` with ``z`` in the dihedral subgroup
``<a, t>`` and ``y`` minimal in its coset; lengths then add and the question
reduces to a computation in a dihedral group.  Everything is memoised per
Coxeter matrix on normal forms, so each element is processed once.

Infinite bonds are written ``0`` in serialized matrices.
"""

from __future__ import annotations

import itertools
import json
import sys
import threading
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import IndexOutOfRange, InvalidMatrix, MatrixMismatch, NotSpherical

INF = 0

sys.setrecursionlimit(max(sys.getrecursionlimit(), 20000))


@dataclass(frozen=True, eq=False)
class CoxeterMatrix:
    """Symmetric bond-order matrix; ``m[i][j] == 0`` encodes an infinite bond."""

    m: tuple

    def __post_init__(self):
        m = tuple(tuple(int(v) for v in row) for row in self.m)
        object.__setattr__(self, "m", m)
        n = len(m)
        if n == 0:
            raise InvalidMatrix("rank must be positive")
        for i in range(n):
            if len(m[i]) != n:
                raise InvalidMatrix("matrix must be square")
            if m[i][i] != 1:
                raise InvalidMatrix(f"diagonal entry ({i + 1},{i + 1}) must be 1")
            for j in range(n):
                if m[i][j] != m[j][i]:
                    raise InvalidMatrix(f"matrix not symmetric at ({i + 1},{j + 1})")
                if i != j and m[i][j] != INF and m[i][j] < 2:
                    raise InvalidMatrix(f"off-diagonal entry ({i + 1},{j + 1}) must be >= 2 or 0 (infinity)")

    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash(self.m)
            object.__setattr__(self, "_hash", h)
        return h

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, CoxeterMatrix) and self.m == other.m

    @property
    def rank(self) -> int:
        return len(self.m)

    @property
    def gens(self) -> range:
        return range(1, self.rank + 1)

    def order(self, s: int, t: int) -> int:
        """Order of ``st`` (0 for infinity)."""
        return self.m[s - 1][t - 1]

    def element(self, word: Iterable[int] = ()) -> "Element":
        return reduce(word, self)

    def identity(self) -> "Element":
        return Element((), self)

    def to_json(self) -> dict:
        return {"rank": self.rank, "m": [list(r) for r in self.m]}

    @classmethod
    def from_json(cls, data) -> "CoxeterMatrix":
        if isinstance(data, str):
            data = json.loads(data)
        m = data["m"]
        if "rank" in data and data["rank"] != len(m):
            raise InvalidMatrix("rank does not match matrix size")
        return cls(tuple(tuple(r) for r in m))

    @classmethod
    def from_bonds(cls, rank: int, bonds: dict) -> "CoxeterMatrix":
        """Build from ``{(i, j): m_ij}``; unlisted pairs commute (m = 2)."""
        m = [[1 if i == j else 2 for j in range(rank)] for i in range(rank)]
        for (i, j), v in bonds.items():
            m[i - 1][j - 1] = m[j - 1][i - 1] = v
        return cls(tuple(tuple(r) for r in m))

    def __repr__(self):
        return f"CoxeterMatrix({[list(r) for r in self.m]})"


def _alt(first: int, other: int, n: int) -> tuple:
    return tuple(first if k % 2 == 0 else other for k in range(n))


def _free_reduce(word) -> list:
    out: list = []
    for x in word:
        if out and out[-1] == x:
            out.pop()
        else:
            out.append(x)
    return out


def dihedral_reduce(word: Sequence[int], a: int, b: int, m: int) -> tuple:
    """Canonical reduced word of a product in the dihedral group <a, b> of order 2m."""
    w = _free_reduce(word)
    if m != INF:
        while len(w) > m:
            other = b if w[0] == a else a
            w = _free_reduce(_alt(other, w[0], m) + tuple(w[m:]))
        if len(w) == m and m > 0 and w[0] != min(a, b):
            w = list(_alt(min(a, b), max(a, b), m))
    return tuple(w)


class _Engine:
    """Memo tables for one Coxeter matrix; guarded by a re-entrant lock."""

    def __init__(self, cm: CoxeterMatrix):
        self.cm = cm
        self.lock = threading.RLock()
        self._desc: dict = {}
        self._down: dict = {}
        self._up: dict = {}
        self._strip: dict = {}
        self._inv: dict = {}

    def desc(self, x: tuple, t: int) -> bool:
        if not x:
            return False
        key = (x, t)
        r = self._desc.get(key)
        if r is not None:
            return r
        a = x[-1]
        if a == t:
            r = True
        else:
            y, z = self.strip(x[:-1], a, t)
            m = self.cm.order(a, t)
            za = dihedral_reduce(z + (a,), a, t, m)
            r = len(dihedral_reduce(za + (t,), a, t, m)) < len(za)
        self._desc[key] = r
        return r

    def strip(self, x: tuple, a: int, b: int):
        """Split ``x = y.z`` with z in <a,b> and y without right descents in {a,b}."""
        if a > b:
            a, b = b, a
        key = (x, a, b)
        r = self._strip.get(key)
        if r is not None:
            return r
        cur, z = x, ()
        while True:
            if self.desc(cur, a):
                cur, z = self.down(cur, a), (a,) + z
            elif self.desc(cur, b):
                cur, z = self.down(cur, b), (b,) + z
            else:
                break
        r = (cur, dihedral_reduce(z, a, b, self.cm.order(a, b)))
        self._strip[key] = r
        return r

    def down(self, x: tuple, t: int) -> tuple:
        key = (x, t)
        r = self._down.get(key)
        if r is not None:
            return r
        a = x[-1]
        if a == t:
            r = x[:-1]
        else:
            y, z = self.strip(x[:-1], a, t)
            u = dihedral_reduce(z + (a, t), a, t, self.cm.order(a, t))
            r = y
            for letter in u:
                r = self.up(r, letter)
        self._down[key] = r
        return r

    def up(self, x: tuple, t: int) -> tuple:
        key = (x, t)
        r = self._up.get(key)
        if r is not None:
            return r
        best = x + (t,)
        for b in self.cm.gens:
            if b == t:
                continue
            y, z = self.strip(x, t, b)
            m = self.cm.order(t, b)
            zt = dihedral_reduce(z + (t,), t, b, m)
            ztb = dihedral_reduce(zt + (b,), t, b, m)
            if len(ztb) < len(zt):
                v = y
                for letter in ztb:
                    v = self.up(v, letter)
                cand = v + (b,)
                if cand < best:
                    best = cand
        self._up[key] = best
        return best

    def mul(self, x: tuple, t: int) -> tuple:
        return self.down(x, t) if self.desc(x, t) else self.up(x, t)

    def mulw(self, x: tuple, word) -> tuple:
        with self.lock:
            for t in word:
                x = self.down(x, t) if self.desc(x, t) else self.up(x, t)
        return x

    def inverse(self, x: tuple) -> tuple:
        r = self._inv.get(x)
        if r is None:
            r = self.mulw((), reversed(x))
            self._inv[x] = r
            self._inv[r] = x
        return r


_ENGINES: dict = {}
_ENGINES_LOCK = threading.Lock()


def _engine(cm: CoxeterMatrix) -> _Engine:
    e = cm.__dict__.get("_engine")
    if e is not None:
        return e
    with _ENGINES_LOCK:
        e = _ENGINES.get(cm)
        if e is None:
            e = _ENGINES[cm] = _Engine(cm)
    object.__setattr__(cm, "_engine", e)
    return e


@dataclass(frozen=True, order=False)
class Element:
    """A member of W held as its ShortLex normal form."""

    word: tuple
    cm: CoxeterMatrix

    @property
    def length(self) -> int:
        return len(self.word)

    def __len__(self):
        return len(self.word)

    def is_identity(self) -> bool:
        return not self.word

    def __mul__(self, other: "Element") -> "Element":
        if other.cm != self.cm:
            raise MatrixMismatch("elements over different Coxeter matrices")
        return Element(_engine(self.cm).mulw(self.word, other.word), self.cm)

    def times_word(self, word: Iterable[int]) -> "Element":
        e = _engine(self.cm)
        cur = self.word
        with e.lock:
            for s in word:
                _check_index(s, self.cm)
                cur = e.mul(cur, s)
        return Element(cur, self.cm)

    def lmul_word(self, word: Sequence[int]) -> "Element":
        """Product ``word * self``."""
        return reduce(tuple(word), self.cm) * self

    def inverse(self) -> "Element":
        return Element(_engine(self.cm).inverse(self.word), self.cm)

    def has_right_descent(self, s: int) -> bool:
        e = _engine(self.cm)
        with e.lock:
            return e.desc(self.word, s)

    def has_left_descent(self, s: int) -> bool:
        return self.inverse().has_right_descent(s)

    def right_descents(self) -> frozenset:
        return frozenset(s for s in self.cm.gens if self.has_right_descent(s))

    def left_descents(self) -> frozenset:
        inv = self.inverse()
        return frozenset(s for s in self.cm.gens if inv.has_right_descent(s))

    def support(self) -> frozenset:
        return frozenset(self.word)

    def conj(self, g: "Element") -> "Element":
        """``g * self * g^-1``."""
        return g * self * g.inverse()

    def sortkey(self):
        return (len(self.word), self.word)

    def __lt__(self, other):
        return self.sortkey() < other.sortkey()

    def __str__(self):
        return format_word(self.word)

    def __repr__(self):
        return f"Element({format_word(self.word)!r})"


def _check_index(s, cm):
    if not isinstance(s, int) or not 1 <= s <= cm.rank:
        raise IndexOutOfRange(f"generator index {s!r} out of range 1..{cm.rank}")


def reduce(word: Iterable[int], cm: CoxeterMatrix) -> Element:
    """ShortLex normal form of the product of the generators in ``word``."""
    word = tuple(word)
    for s in word:
        _check_index(s, cm)
    e = _engine(cm)
    cur: tuple = ()
    with e.lock:
        for s in word:
            cur = e.mul(cur, s)
    return Element(cur, cm)


def format_word(word: Sequence[int]) -> str:
    return " ".join(str(s) for s in word) if word else "e"


def parse_word(text: str) -> tuple:
    text = text.strip()
    if text in ("", "e"):
        return ()
    return tuple(int(tok) for tok in text.replace(",", " ").split())


# --- parabolic subgroups -------------------------------------------------


def _components(J: frozenset, cm: CoxeterMatrix) -> list:
    """Connected components of the Coxeter graph on J (edges where m != 2)."""
    J = set(J)
    comps = []
    while J:
        start = J.pop()
        comp, todo = {start}, [start]
        while todo:
            s = todo.pop()
            for t in list(J):
                if cm.order(s, t) != 2:
                    J.discard(t)
                    comp.add(t)
                    todo.append(t)
        comps.append(frozenset(comp))
    return comps


def _component_is_finite(comp: frozenset, cm: CoxeterMatrix) -> bool:
    n = len(comp)
    if n <= 1:
        return True
    nodes = sorted(comp)
    edges = [(s, t, cm.order(s, t)) for s, t in itertools.combinations(nodes, 2) if cm.order(s, t) != 2]
    if any(m == INF for _, _, m in edges):
        return False
    if n == 2:
        return True
    if len(edges) != n - 1:  # connected graph with a cycle
        return False
    labels = sorted(m for _, _, m in edges)
    if labels[-1] > 5 or (len(labels) > 1 and labels[-2] > 3):
        return False
    deg = {s: 0 for s in nodes}
    for s, t, _ in edges:
        deg[s] += 1
        deg[t] += 1
    big = [e for e in edges if e[2] > 3]
    if big:
        if max(deg.values()) > 2:
            return False
        s, t, m = big[0]
        at_end = deg[s] == 1 or deg[t] == 1
        if m == 4:
            return at_end or n == 4  # B_n, or F_4 with the 4-bond in the middle
        return at_end and n in (3, 4)  # H_3, H_4
    branch = [s for s in nodes if deg[s] >= 3]
    if not branch:
        return True  # A_n
    if len(branch) > 1 or deg[branch[0]] > 3:
        return False
    c = branch[0]
    adj = {s: set() for s in nodes}
    for s, t, _ in edges:
        adj[s].add(t)
        adj[t].add(s)
    arms = []
    for nb in adj[c]:
        length, prev, cur = 1, c, nb
        while True:
            nxt = [v for v in adj[cur] if v != prev]
            if not nxt:
                break
            prev, cur = cur, nxt[0]
            length += 1
        arms.append(length)
    # D_n, E_6, E_7, E_8: sum of 1/(arm+1) > 1
    return sum(1 / (a + 1) for a in arms) > 1 + 1e-12


def is_spherical(J: Iterable[int], cm: CoxeterMatrix) -> bool:
    """True iff the parabolic subgroup W_J is finite (classification of finite Coxeter graphs)."""
    J = frozenset(J)
    for s in J:
        _check_index(s, cm)
    return all(_component_is_finite(c, cm) for c in _components(J, cm))


def is_infinite_group(cm: CoxeterMatrix) -> bool:
    return not is_spherical(cm.gens, cm)


def parabolic_elements(J: Iterable[int], cm: CoxeterMatrix, limit: int | None = None) -> list:
    """All elements of W_J (J spherical), in ShortLex order."""
    J = sorted(frozenset(J))
    if limit is None and not is_spherical(J, cm):
        raise NotSpherical(f"J={set(J)} is not spherical")
    seen = {(): None}
    frontier = [()]
    e = _engine(cm)
    with e.lock:
        while frontier:
            nxt = []
            for x in frontier:
                for s in J:
                    if not e.desc(x, s):
                        y = e.up(x, s)
                        if y not in seen:
                            seen[y] = None
                            nxt.append(y)
                            if limit is not None and len(seen) > limit:
                                return [Element(w, cm) for w in sorted(seen, key=lambda w: (len(w), w))]
            frontier = nxt
    return [Element(w, cm) for w in sorted(seen, key=lambda w: (len(w), w))]


def ball(cm: CoxeterMatrix, radius: int) -> list:
    """All elements of length <= radius, in ShortLex order."""
    layers = [[()]]
    seen = {()}
    e = _engine(cm)
    with e.lock:
        for _ in range(radius):
            nxt = []
            for x in layers[-1]:
                for s in cm.gens:
                    if not e.desc(x, s):
                        y = e.up(x, s)
                        if y not in seen:
                            seen.add(y)
                            nxt.append(y)
            layers.append(sorted(nxt))
    return [Element(w, cm) for layer in layers for w in layer]


def in_parabolic(w: Element, J: Iterable[int]) -> bool:
    return w.support() <= frozenset(J)


def longest_element(J: Iterable[int], cm: CoxeterMatrix) -> Element:
    """The longest element of W_J."""
    J = sorted(frozenset(J))
    if not is_spherical(J, cm):
        raise NotSpherical(f"J={set(J)} is not spherical")
    e = _engine(cm)
    cur: tuple = ()
    with e.lock:
        while True:
            for s in J:
                if not e.desc(cur, s):
                    cur = e.up(cur, s)
                    break
            else:
                return Element(cur, cm)


def coset_factor_right(w: Element, J: Iterable[int]):
    """``w = v * u`` with u in W_J and v the minimal element of w W_J; returns (v, u)."""
    J = sorted(frozenset(J))
    cm = w.cm
    e = _engine(cm)
    cur, u = w.word, []
    with e.lock:
        changed = True
        while changed:
            changed = False
            for s in J:
                if e.desc(cur, s):
                    cur = e.down(cur, s)
                    u.append(s)
                    changed = True
                    break
    return Element(cur, cm), reduce(reversed(u), cm)


def coset_factor_left(J: Iterable[int], w: Element):
    """``w = u * v`` with u in W_J and v minimal in W_J w; returns (u, v)."""
    v, u = coset_factor_right(w.inverse(), J)
    return u.inverse(), v.inverse()


def min_coset_rep(w: Element, J: Iterable[int]) -> Element:
    return coset_factor_right(w, J)[0]


def double_coset_factor_min(J: Iterable[int], w: Element, K: Iterable[int]):
    """``w = a * d * b`` with a in W_J, b in W_K and d minimal in W_J w W_K."""
    J, K = frozenset(J), frozenset(K)
    a = w.cm.identity()
    b = w.cm.identity()
    d = w
    while True:
        u, d1 = coset_factor_left(J, d)
        d2, v = coset_factor_right(d1, K)
        a, b = a * u, v * b
        if d2 == d:
            return a, d, b
        d = d2


def double_coset_min(J: Iterable[int], w: Element, K: Iterable[int]) -> Element:
    """Minimal-length member of W_J w W_K."""
    return double_coset_factor_min(J, w, K)[1]


def double_coset_factor_max(J: Iterable[int], w: Element, K: Iterable[int]):
    """``w = a * d * b`` with a in W_J, b in W_K and d maximal in W_J w W_K."""
    J, K = sorted(frozenset(J)), sorted(frozenset(K))
    cm = w.cm
    for X in (J, K):
        if not is_spherical(X, cm):
            raise NotSpherical(f"{set(X)} is not spherical")
    d = w
    left, right = [], []
    while True:
        for s in J:
            if not d.has_left_descent(s):
                d = reduce((s,), cm) * d
                left.append(s)
                break
        else:
            for t in K:
                if not d.has_right_descent(t):
                    d = d.times_word((t,))
                    right.append(t)
                    break
            else:
                break
    # d = l * w * r with l = s_k..s_1, r = t_1..t_k
    a = reduce(left, cm)  # a = s_1...s_k = l^-1
    b = reduce(reversed(right), cm)
    return a, d, b


def double_coset_max(J: Iterable[int], w: Element, K: Iterable[int]) -> Element:
    """Maximal-length member of W_J w W_K (J, K spherical)."""
    return double_coset_factor_max(J, w, K)[1]


def reflections_up_to(cm: CoxeterMatrix, L: int) -> list:
    """All reflections of length <= L, ShortLex ordered."""
    if L < 1:
        return []
    out = set()
    for u in ball(cm, (L - 1) // 2):
        ui = u.inverse()
        for s in cm.gens:
            t = u.times_word((s,)) * ui
            if t.length <= L:
                out.add(t)
    return sorted(out)


def reflections_of_parabolic(J: Iterable[int], cm: CoxeterMatrix) -> list:
    """Reflections of the finite group W_J."""
    J = frozenset(J)
    out = set()
    for u in parabolic_elements(J, cm):
        ui = u.inverse()
        for s in J:
            out.add(u.times_word((s,)) * ui)
    return sorted(out)


def word_reflections(w: Element) -> list:
    """Walls crossed by the gallery spelled by the normal form of w, in order."""
    cm = w.cm
    out = []
    prefix = cm.identity()
    for s in w.word:
        out.append(prefix.times_word((s,)) * prefix.inverse())
        prefix = prefix.times_word((s,))
    return out


def iter_subsets(cm: CoxeterMatrix) -> Iterator[frozenset]:
    gens = list(cm.gens)
    for k in range(len(gens) + 1):
        for c in itertools.combinations(gens, k):
            yield frozenset(c)


def group_order_bfs(J: Iterable[int], cm: CoxeterMatrix, cutoff: int = 10000) -> int | None:
    """|W_J| by breadth-first enumeration, or None once the cutoff is exceeded."""
    els = parabolic_elements(J, cm, limit=cutoff)
    return None if len(els) > cutoff else len(els)


def matrix_from_name(name: str) -> CoxeterMatrix:
    """A few standard matrices by name: A1..A8, B2..B8, D4.., E6-8, F4, H3, H4, I2(m), affine ~A1..."""
    name = name.strip()
    table = {
        "A1~": {(1, 2): INF},
    }
    if name in ("~A1", "A1~", "affA1"):
        return CoxeterMatrix.from_bonds(2, table["A1~"])
    if name.startswith("~A") or name.startswith("affA"):
        n = int(name.lstrip("~affA"))
        bonds = {(i, i + 1): 3 for i in range(1, n + 1)}
        bonds[(1, n + 1)] = 3
        return CoxeterMatrix.from_bonds(n + 1, bonds)
    if name.startswith("I2(") and name.endswith(")"):
        m = int(name[3:-1])
        return CoxeterMatrix.from_bonds(2, {(1, 2): m})
    kind, n = name[0], int(name[1:])
    if kind == "A":
        return CoxeterMatrix.from_bonds(n, {(i, i + 1): 3 for i in range(1, n)})
    if kind in "BC":
        bonds = {(i, i + 1): 3 for i in range(1, n)}
        bonds[(n - 1, n)] = 4
        return CoxeterMatrix.from_bonds(n, bonds)
    if kind == "D":
        bonds = {(i, i + 1): 3 for i in range(1, n - 1)}
        bonds[(n - 2, n)] = 3
        return CoxeterMatrix.from_bonds(n, bonds)
    if kind == "E":
        bonds = {(1, 3): 3, (3, 4): 3, (2, 4): 3}
        for i in range(4, n):
            bonds[(i, i + 1)] = 3
        return CoxeterMatrix.from_bonds(n, bonds)
    if kind == "F" and n == 4:
        return CoxeterMatrix.from_bonds(4, {(1, 2): 3, (2, 3): 4, (3, 4): 3})
    if kind == "H" and n in (3, 4):
        bonds = {(i, i + 1): 3 for i in range(1, n)}
        bonds[(1, 2)] = 5
        return CoxeterMatrix.from_bonds(n, bonds)
    raise InvalidMatrix(f"unknown Coxeter type {name!r}")
