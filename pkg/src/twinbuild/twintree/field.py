"""Small finite fields GF(q) as lookup tables.

Elements are the integers 0..q-1.  For q = p^e with e > 1 the integer
encodes the coefficient vector (base p, low degree first) of a polynomial
modulo a fixed irreducible.
"""

from __future__ import annotations

from functools import lru_cache

from ..errors import FieldTooLarge

SUPPORTED = (2, 3, 4, 5, 7, 8, 9)

# irreducible moduli, low degree first (monic, leading coefficient omitted)
_MODULI = {4: (2, (1, 1)), 8: (2, (1, 1, 0)), 9: (3, (1, 0))}


def _digits(x: int, p: int, e: int) -> list:
    out = []
    for _ in range(e):
        out.append(x % p)
        x //= p
    return out


def _undigits(ds, p: int) -> int:
    return sum(d * p**i for i, d in enumerate(ds))


class GF:
    """The field with q elements; use :func:`gf` for a shared instance."""

    def __init__(self, q: int):
        if q not in SUPPORTED:
            raise FieldTooLarge(f"GF({q}) is not supported; choose one of {SUPPORTED}")
        self.q = q
        if q in _MODULI:
            p, low = _MODULI[q]
            e = len(low)
        else:
            p, low, e = q, (), 1
        self.p, self.e = p, e
        self.add_t = [[_undigits([(a + b) % p for a, b in zip(_digits(x, p, e), _digits(y, p, e))], p) for y in range(q)] for x in range(q)]
        self.mul_t = [[self._polymul(x, y, low) for y in range(q)] for x in range(q)]
        self.neg_t = [_undigits([(-a) % p for a in _digits(x, p, e)], p) for x in range(q)]
        self.inv_t = [0] * q
        for x in range(1, q):
            self.inv_t[x] = next(y for y in range(1, q) if self.mul_t[x][y] == 1)
        self.elements = tuple(range(q))
        self.units = tuple(range(1, q))
        self.primitive = next(g for g in self.units if len({self.pow(g, k) for k in range(q - 1)}) == q - 1)

    def _polymul(self, x, y, low):
        p, e = self.p, self.e
        if e == 1:
            return (x * y) % p
        a, b = _digits(x, p, e), _digits(y, p, e)
        prod = [0] * (2 * e - 1)
        for i, ai in enumerate(a):
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
        # reduce with x^e = -(low)
        for k in range(2 * e - 2, e - 1, -1):
            c = prod[k]
            if c:
                prod[k] = 0
                for i, li in enumerate(low):
                    prod[k - e + i] = (prod[k - e + i] - c * li) % p
        return _undigits(prod[:e], p)

    def add(self, x, y):
        return self.add_t[x][y]

    def sub(self, x, y):
        return self.add_t[x][self.neg_t[y]]

    def mul(self, x, y):
        return self.mul_t[x][y]

    def neg(self, x):
        return self.neg_t[x]

    def inv(self, x):
        if x == 0:
            raise ZeroDivisionError("inverse of zero in GF(q)")
        return self.inv_t[x]

    def pow(self, x, k: int):
        r = 1
        for _ in range(k):
            r = self.mul_t[r][x]
        return r

    def to_json(self, x):
        if self.e == 1:
            return x
        return _digits(x, self.p, self.e)

    def from_json(self, v) -> int:
        if isinstance(v, (list, tuple)):
            if len(v) != self.e:
                raise ValueError(f"GF({self.q}) coordinates need {self.e} entries")
            return _undigits([int(c) % self.p for c in v], self.p)
        v = int(v)
        if self.e == 1:
            return v % self.p
        if not 0 <= v < self.q:
            raise ValueError(f"GF({self.q}) element out of range: {v}")
        return v

    def __repr__(self):
        return f"GF({self.q})"


@lru_cache(maxsize=None)
def gf(q: int) -> GF:
    return GF(q)
