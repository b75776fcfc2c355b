"""Arithmetic in small finite fields and their one-digit 2-adic lift rings.

Elements of GF(p^m) are plain ints in [0, p^m): the base-p digits of the
int are the coefficients of the polynomial representative, lowest degree
first.  Arithmetic is table-driven; the supported fields are tiny and the
moduli are fixed so results are reproducible across runs.
"""

from __future__ import annotations

from functools import lru_cache
from typing import Iterable

# Monic irreducible modulus per (p, m), coefficients lowest degree first,
# leading 1 included.  Fixed once and for all.
MODULI: dict[tuple[int, int], tuple[int, ...]] = {
    (2, 1): (1, 1),          # x + 1
    (2, 2): (1, 1, 1),       # x^2 + x + 1
    (2, 4): (1, 1, 0, 0, 1),  # x^4 + x + 1
    (3, 1): (1, 1),          # x + 1
    (3, 2): (1, 0, 1),       # x^2 + 1
    (5, 1): (3, 1),          # x + 3
    (5, 2): (2, 0, 1),       # x^2 + 2
}


def _digits(value: int, p: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        out.append(value % p)
        value //= p
    return out


def _value(digits: Iterable[int], p: int) -> int:
    out = 0
    for d in reversed(list(digits)):
        out = out * p + d
    return out


class Field:
    """GF(p^m) with all binary operations precomputed.

    Instances should be obtained through :func:`GF` so that equal
    parameters share tables.
    """

    __slots__ = ("p", "m", "q", "_add", "_mul", "_neg", "_inv")

    def __init__(self, p: int, m: int) -> None:
        if m == 1 and p >= 2 and all(p % d for d in range(2, p)):
            modulus = MODULI.get((p, m), (1, 1))
        elif (p, m) in MODULI:
            modulus = MODULI[(p, m)]
        else:
            raise ValueError(f"unsupported field GF({p}^{m})")
        self.p = p
        self.m = m
        self.q = p**m

        # Powers of x modulo the modulus, as digit vectors, up to x^(2m-2).
        xpow: list[list[int]] = []
        cur = [0] * m
        cur[0] = 1
        for _ in range(2 * m - 1):
            xpow.append(cur[:])
            cur = [0] + cur  # multiply by x
            top = cur.pop()  # coefficient of x^m
            if top:
                for i in range(m):
                    cur[i] = (cur[i] - top * modulus[i]) % p

        q = self.q
        self._add = [[0] * q for _ in range(q)]
        self._mul = [[0] * q for _ in range(q)]
        self._neg = [0] * q
        self._inv = [0] * q
        for a in range(q):
            da = _digits(a, p, m)
            self._neg[a] = _value(((-d) % p for d in da), p)
            for b in range(q):
                db = _digits(b, p, m)
                self._add[a][b] = _value(
                    ((x + y) % p for x, y in zip(da, db)), p
                )
                prod = [0] * m
                for i, x in enumerate(da):
                    if not x:
                        continue
                    for j, y in enumerate(db):
                        if not y:
                            continue
                        for k, c in enumerate(xpow[i + j]):
                            prod[k] = (prod[k] + x * y * c) % p
                self._mul[a][b] = _value(prod, p)
        for a in range(1, q):
            for b in range(1, q):
                if self._mul[a][b] == 1:
                    self._inv[a] = b
                    break

    # -- ring operations ------------------------------------------------

    def add(self, a: int, b: int) -> int:
        return self._add[a][b]

    def sub(self, a: int, b: int) -> int:
        return self._add[a][self._neg[b]]

    def mul(self, a: int, b: int) -> int:
        return self._mul[a][b]

    def neg(self, a: int) -> int:
        return self._neg[a]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._inv[a]

    def div(self, a: int, b: int) -> int:
        return self._mul[a][self.inv(b)]

    def pow(self, a: int, n: int) -> int:
        if n < 0:
            a, n = self.inv(a), -n
        out = 1
        while n:
            if n & 1:
                out = self._mul[out][a]
            a = self._mul[a][a]
            n >>= 1
        return out

    def frobenius(self, a: int) -> int:
        return self.pow(a, self.p)

    # -- structure ------------------------------------------------------

    def elements(self) -> range:
        return range(self.q)

    def units(self) -> range:
        return range(1, self.q)

    def digits(self, a: int) -> list[int]:
        """Base-p digit vector of a, lowest degree first."""
        return _digits(a, self.p, self.m)

    def from_digits(self, digits: Iterable[int]) -> int:
        return _value((d % self.p for d in digits), self.p)

    def __repr__(self) -> str:  # pragma: no cover
        return f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"


@lru_cache(maxsize=None)
def GF(p: int, m: int = 1) -> Field:
    return Field(p, m)


class LiftRing:
    """Z/4 (residue field F_2) or its unramified quadratic extension
    GR(4,2) = Z/4[x]/(x^2+x+1) (residue field F_4).

    Elements are ints: for Z/4 the value itself, for GR(4,2) the pair
    a0 + 4*a1 with digits a0, a1 in Z/4.  These are the only lift rings
    the even-trace-form construction needs.
    """

    __slots__ = ("residue", "size", "_ext")

    def __init__(self, residue: Field) -> None:
        if residue.p != 2 or residue.m not in (1, 2):
            raise ValueError("lift ring defined only over GF(2) and GF(4)")
        self.residue = residue
        self._ext = residue.m == 2
        self.size = 16 if self._ext else 4

    def _split(self, t: int) -> tuple[int, int]:
        return t % 4, t // 4

    def add(self, s: int, t: int) -> int:
        if not self._ext:
            return (s + t) % 4
        a0, a1 = self._split(s)
        b0, b1 = self._split(t)
        return (a0 + b0) % 4 + 4 * ((a1 + b1) % 4)

    def neg(self, t: int) -> int:
        if not self._ext:
            return (-t) % 4
        a0, a1 = self._split(t)
        return (-a0) % 4 + 4 * ((-a1) % 4)

    def sub(self, s: int, t: int) -> int:
        return self.add(s, self.neg(t))

    def mul(self, s: int, t: int) -> int:
        if not self._ext:
            return (s * t) % 4
        # x^2 = -x - 1 in GR(4,2)
        a0, a1 = self._split(s)
        b0, b1 = self._split(t)
        c0 = (a0 * b0 - a1 * b1) % 4
        c1 = (a0 * b1 + a1 * b0 - a1 * b1) % 4
        return c0 + 4 * c1

    def lift(self, a: int) -> int:
        """Digit-wise (Teichmueller-free) lift of a residue-field element."""
        d = self.residue.digits(a)
        if not self._ext:
            return d[0]
        return d[0] + 4 * d[1]

    def reduce(self, t: int) -> int:
        a0, a1 = self._split(t)
        if not self._ext:
            return a0 % 2
        return self.residue.from_digits([a0 % 2, a1 % 2])

    def halve(self, t: int) -> int:
        """For t in 2R, the residue of t/2; anything else is an error."""
        a0, a1 = self._split(t)
        if a0 % 2 or (self._ext and a1 % 2):
            raise ValueError("element not divisible by 2")
        if not self._ext:
            return (a0 // 2) % 2
        return self.residue.from_digits([(a0 // 2) % 2, (a1 // 2) % 2])

    def elements(self) -> range:
        return range(self.size)

    def __repr__(self) -> str:  # pragma: no cover
        return "GR(4,2)" if self._ext else "Z/4"


@lru_cache(maxsize=None)
def lift_ring(p: int, m: int = 1) -> LiftRing:
    return LiftRing(GF(p, m))


@lru_cache(maxsize=None)
def embed(small: Field, big: Field) -> tuple[int, ...]:
    """The image table of the (deterministic) field embedding of `small`
    into `big`: element a maps to embed(small, big)[a].

    The prime subfield embeds code-for-code.  Otherwise the generator x
    of `small` is sent to the smallest-code root in `big` of the modulus
    polynomial of `small`, which pins the embedding uniquely.
    """
    if small.p != big.p or big.m % small.m != 0:
        raise ValueError("no embedding between these fields")
    if small.m == 1:
        return tuple(range(small.p))
    if small.q == big.q:
        return tuple(range(small.q))
    modulus = MODULI[(small.p, small.m)]
    root = None
    for cand in big.elements():
        acc = 0
        for c in reversed(modulus):
            acc = big.add(big.mul(acc, cand), c % big.p)
        if acc == 0:
            root = cand
            break
    assert root is not None, "extension field lacks a subfield root"
    table = []
    for a in small.elements():
        acc = 0
        for c in reversed(small.digits(a)):
            acc = big.add(big.mul(acc, root), c)
        table.append(acc)
    assert len(set(table)) == small.q
    return tuple(table)
