"""Laurent polynomials and 2x2 matrices over GF(q)[t, t^-1].

A polynomial is a sorted tuple of ``(exponent, coefficient)`` pairs with no
zero coefficients, so equality and hashing are structural.
"""

from __future__ import annotations

from dataclasses import dataclass

from ..errors import InvalidMatrix
from .field import GF, gf

ZERO: tuple = ()


def poly(F: GF, terms) -> tuple:
    """Normalize ``{exp: coeff}`` or an iterable of pairs."""
    items = terms.items() if isinstance(terms, dict) else terms
    acc: dict = {}
    for e, c in items:
        acc[e] = F.add(acc.get(e, 0), c)
    return tuple(sorted((e, c) for e, c in acc.items() if c))


def const(c: int) -> tuple:
    return ((0, c),) if c else ZERO


def mono(c: int, e: int) -> tuple:
    return ((e, c),) if c else ZERO


def padd(F: GF, a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    acc = dict(a)
    for e, c in b:
        acc[e] = F.add(acc.get(e, 0), c)
    return tuple(sorted((e, c) for e, c in acc.items() if c))


def pneg(F: GF, a: tuple) -> tuple:
    return tuple((e, F.neg(c)) for e, c in a)


def psub(F: GF, a: tuple, b: tuple) -> tuple:
    return padd(F, a, pneg(F, b))


def pmul(F: GF, a: tuple, b: tuple) -> tuple:
    if not a or not b:
        return ZERO
    mt, at = F.mul_t, F.add_t
    acc: dict = {}
    for e1, c1 in a:
        row = mt[c1]
        for e2, c2 in b:
            e = e1 + e2
            acc[e] = at[acc.get(e, 0)][row[c2]]
    return tuple(sorted((e, c) for e, c in acc.items() if c))


def pscale(F: GF, c: int, a: tuple) -> tuple:
    if c == 0:
        return ZERO
    return tuple((e, F.mul(c, x)) for e, x in a)


def pshift(a: tuple, k: int) -> tuple:
    return tuple((e + k, c) for e, c in a)


def low(a: tuple):
    """Lowest exponent (t-adic valuation); None for zero."""
    return a[0][0] if a else None


def high(a: tuple):
    """Highest exponent (minus the valuation at infinity); None for zero."""
    return a[-1][0] if a else None


def coeff(a: tuple, e: int) -> int:
    for x, c in a:
        if x == e:
            return c
    return 0


def is_const(a: tuple) -> bool:
    return all(e == 0 for e, _ in a)


def pinvert_t(a: tuple) -> tuple:
    """Substitute t -> t^-1."""
    return tuple(sorted((-e, c) for e, c in a))


@dataclass(frozen=True)
class LaurentMat:
    """A 2x2 matrix ``[[a, b], [c, d]]`` over GF(q)[t, t^-1]."""

    q: int
    a: tuple
    b: tuple
    c: tuple
    d: tuple

    @property
    def F(self) -> GF:
        return gf(self.q)

    @property
    def entries(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def __mul__(self, o: "LaurentMat") -> "LaurentMat":
        F = gf(self.q)
        return LaurentMat(
            self.q,
            padd(F, pmul(F, self.a, o.a), pmul(F, self.b, o.c)),
            padd(F, pmul(F, self.a, o.b), pmul(F, self.b, o.d)),
            padd(F, pmul(F, self.c, o.a), pmul(F, self.d, o.c)),
            padd(F, pmul(F, self.c, o.b), pmul(F, self.d, o.d)),
        )

    def det(self) -> tuple:
        F = gf(self.q)
        return psub(F, pmul(F, self.a, self.d), pmul(F, self.b, self.c))

    def adjugate(self) -> "LaurentMat":
        F = gf(self.q)
        return LaurentMat(self.q, self.d, pneg(F, self.b), pneg(F, self.c), self.a)

    def inverse(self) -> "LaurentMat":
        """Inverse of a matrix whose determinant is a unit ``c t^k``."""
        det = self.det()
        if len(det) != 1:
            raise InvalidMatrix("determinant is not a unit of GF(q)[t, t^-1]")
        (k, c), = det
        F = gf(self.q)
        ci = F.inv(c)
        adj = self.adjugate()
        return LaurentMat(self.q, *(pshift(pscale(F, ci, x), -k) for x in adj.entries))

    def is_identity(self) -> bool:
        return self.a == ((0, 1),) and self.d == ((0, 1),) and not self.b and not self.c

    def max_exp(self) -> int:
        return max((high(x) for x in self.entries if x), default=0)

    def min_exp(self) -> int:
        return min((low(x) for x in self.entries if x), default=0)

    def eval_coeff(self, e: int) -> tuple:
        """Coefficient matrix of t^e, as a 4-tuple of scalars."""
        return tuple(coeff(x, e) for x in self.entries)

    def conj(self, g: "LaurentMat") -> "LaurentMat":
        """``g * self * g^-1``."""
        return g * self * g.inverse()

    def sigma(self) -> "LaurentMat":
        """Apply t -> t^-1 entrywise."""
        return LaurentMat(self.q, *(pinvert_t(x) for x in self.entries))

    def to_json(self) -> list:
        F = gf(self.q)
        return [{str(e): F.to_json(c) for e, c in x} for x in self.entries]

    @classmethod
    def from_json(cls, q: int, data) -> "LaurentMat":
        F = gf(q)
        if isinstance(data, dict):
            data = data.get("entries", data.get("m"))
        flat = list(data)
        if len(flat) == 2 and all(isinstance(r, list) for r in flat):
            flat = flat[0] + flat[1]
        if len(flat) != 4:
            raise InvalidMatrix("a Laurent matrix needs four entries")
        ents = [poly(F, [(int(e), F.from_json(c)) for e, c in ent.items()]) for ent in flat]
        m = cls(q, *ents)
        if m.det() != ((0, 1),):
            raise InvalidMatrix("determinant must be 1")
        return m

    def __str__(self):
        return "[[{}, {}], [{}, {}]]".format(*(fmt_poly(x, self.q) for x in self.entries))


def fmt_poly(a: tuple, q: int) -> str:
    if not a:
        return "0"
    F = gf(q)
    parts = []
    for e, c in a:
        cs = str(F.to_json(c)).replace(" ", "")
        if e == 0:
            parts.append(cs)
        elif e == 1:
            parts.append(f"{cs}t" if c != 1 else "t")
        else:
            parts.append(f"{cs}t^{e}" if c != 1 else f"t^{e}")
    return "+".join(parts)


def mat(q: int, a, b, c, d) -> LaurentMat:
    """Build from entries given as ints (constants), dicts or pair lists."""
    F = gf(q)

    def conv(x):
        if isinstance(x, int):
            return const(F.from_json(x))
        return poly(F, x)

    return LaurentMat(q, conv(a), conv(b), conv(c), conv(d))


def identity(q: int) -> LaurentMat:
    return LaurentMat(q, const(1), ZERO, ZERO, const(1))


def diag(q: int, x: tuple, y: tuple) -> LaurentMat:
    return LaurentMat(q, x, ZERO, ZERO, y)
