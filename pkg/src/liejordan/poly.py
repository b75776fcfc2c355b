"""Exact univariate polynomial arithmetic over the small fields.

Polynomials are lists of coefficients, lowest degree first, with no
trailing zeros; the zero polynomial is the empty list.  Includes the
characteristic-2 square root and the characteristic-p squarefree radical
that the decomposition routines depend on.
"""

from __future__ import annotations

from . import linalg
from .fields import Field

Poly = list[int]


def normalize(c: list[int]) -> Poly:
    out = list(c)
    while out and out[-1] == 0:
        out.pop()
    return out


def deg(f: Poly) -> int:
    return len(f) - 1


def is_zero_poly(f: Poly) -> bool:
    return not f


def constant(c: int) -> Poly:
    return [c] if c else []


def add(field: Field, f: Poly, g: Poly) -> Poly:
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        a = f[i] if i < len(f) else 0
        b = g[i] if i < len(g) else 0
        out.append(field.add(a, b))
    return normalize(out)


def sub(field: Field, f: Poly, g: Poly) -> Poly:
    n = max(len(f), len(g))
    out = []
    for i in range(n):
        a = f[i] if i < len(f) else 0
        b = g[i] if i < len(g) else 0
        out.append(field.sub(a, b))
    return normalize(out)


def mul(field: Field, f: Poly, g: Poly) -> Poly:
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if not a:
            continue
        for j, b in enumerate(g):
            if b:
                out[i + j] = field.add(out[i + j], field.mul(a, b))
    return normalize(out)


def scale(field: Field, c: int, f: Poly) -> Poly:
    return normalize([field.mul(c, a) for a in f])


def monic(field: Field, f: Poly) -> Poly:
    f = normalize(f)
    if not f or f[-1] == 1:
        return f
    return scale(field, field.inv(f[-1]), f)


def divmod_poly(field: Field, f: Poly, g: Poly) -> tuple[Poly, Poly]:
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = normalize(f)
    g = normalize(g)
    if len(f) < len(g):
        return [], f
    rem = f[:]
    lead_inv = field.inv(g[-1])
    quot = [0] * (len(f) - len(g) + 1)
    for i in range(len(f) - len(g), -1, -1):
        c = field.mul(rem[i + len(g) - 1], lead_inv)
        if c:
            quot[i] = c
            for j, b in enumerate(g):
                rem[i + j] = field.sub(rem[i + j], field.mul(c, b))
    return normalize(quot), normalize(rem)


def mod(field: Field, f: Poly, g: Poly) -> Poly:
    return divmod_poly(field, f, g)[1]


def gcd(field: Field, f: Poly, g: Poly) -> Poly:
    f, g = normalize(f), normalize(g)
    while g:
        f, g = g, mod(field, f, g)
    return monic(field, f)


def lcm(field: Field, f: Poly, g: Poly) -> Poly:
    if not f or not g:
        return []
    d = gcd(field, f, g)
    return monic(field, divmod_poly(field, mul(field, f, g), d)[0])


def ext_gcd(field: Field, f: Poly, g: Poly) -> tuple[Poly, Poly, Poly]:
    """(d, s, t) with s f + t g = d = monic gcd."""
    r0, r1 = normalize(f), normalize(g)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        q, r = divmod_poly(field, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(field, s0, mul(field, q, s1))
        t0, t1 = t1, sub(field, t0, mul(field, q, t1))
    if r0 and r0[-1] != 1:
        c = field.inv(r0[-1])
        r0, s0, t0 = scale(field, c, r0), scale(field, c, s0), scale(field, c, t0)
    return r0, s0, t0


def derivative(field: Field, f: Poly) -> Poly:
    out = []
    for i in range(1, len(f)):
        c = 0
        for _ in range(i % field.p if field.p else i):
            c = field.add(c, f[i])
        out.append(c)
    return normalize(out)


def eval_poly(field: Field, f: Poly, x: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = field.add(field.mul(acc, x), c)
    return acc


def eval_poly_mat(field: Field, f: Poly, a: linalg.Mat) -> linalg.Mat:
    n = len(a)
    acc = linalg.zeros(n, n)
    for c in reversed(f):
        acc = linalg.mat_mul(field, acc, a)
        if c:
            for i in range(n):
                acc[i][i] = field.add(acc[i][i], c)
    return acc


def pow_mod(field: Field, base: Poly, e: int, modulus: Poly) -> Poly:
    out = [1]
    base = mod(field, base, modulus)
    while e:
        if e & 1:
            out = mod(field, mul(field, out, base), modulus)
        base = mod(field, mul(field, base, base), modulus)
        e >>= 1
    return out


def compose_mod(field: Field, f: Poly, g: Poly, modulus: Poly) -> Poly:
    """f(g) reduced mod modulus, by Horner on the coefficients of f."""
    out: Poly = [0]
    g = mod(field, g, modulus)
    for c in reversed(f):
        out = mod(field, mul(field, out, g), modulus)
        out = add(field, out, [c])
    return normalize(out)


def poly_sqrt_char2(field: Field, f: Poly) -> Poly:
    """The unique square root of a polynomial over F_{2^m}.

    A polynomial is a square exactly when every odd-degree coefficient
    vanishes; coefficient square roots are x -> x^(2^(m-1)).
    """
    if field.p != 2:
        raise ValueError("square root routine requires characteristic 2")
    f = normalize(f)
    for i in range(1, len(f), 2):
        if f[i]:
            raise ValueError("not a perfect square")
    e = 2 ** (field.m - 1)
    return normalize([field.pow(f[i], e) for i in range(0, len(f), 2)])


def pth_root_poly(field: Field, f: Poly) -> Poly:
    """Given f = g(x^p), recover g (all other inputs are errors)."""
    p = field.p
    f = normalize(f)
    for i, c in enumerate(f):
        if c and i % p:
            raise ValueError("polynomial is not a p-th power composition")
    e = p ** (field.m - 1)
    return normalize([field.pow(f[i], e) for i in range(0, len(f), p)])


def radical(field: Field, f: Poly) -> Poly:
    """Product of the distinct monic irreducible factors of f.

    Characteristic-p-correct: the f' = 0 branch strips inseparability
    via p-th roots before recursing.
    """
    f = monic(field, normalize(f))
    if deg(f) < 1:
        return [1]
    fp = derivative(field, f)
    if is_zero_poly(fp):
        return radical(field, pth_root_poly(field, f))
    g = gcd(field, f, fp)
    if deg(g) == 0:
        return f
    w = divmod_poly(field, f, g)[0]
    return lcm(field, w, radical(field, g))


def minpoly(field: Field, a: linalg.Mat) -> Poly:
    """Monic minimal polynomial of a square matrix, by the first linear
    relation among flattened powers I, a, a^2, ..."""
    n = len(a)
    flat_powers: list[list[int]] = []
    power = linalg.identity(n)
    for k in range(n + 1):
        flat = [x for row in power for x in row]
        if flat_powers:
            # express flat in the span of the previous powers, if possible
            coeffs = linalg.solve(
                field, linalg.transpose(flat_powers), flat
            )
            if coeffs is not None:
                rel = [field.neg(c) for c in coeffs] + [1]
                return normalize(rel)
        flat_powers.append(flat)
        power = linalg.mat_mul(field, power, a)
    raise AssertionError("no relation among matrix powers up to dimension")


def irreducible_polys(field: Field, d: int) -> list[Poly]:
    """All monic irreducible polynomials of degree d, in lexicographic
    order of coefficient vectors."""
    if d < 1:
        raise ValueError("degree must be positive")
    lower: list[Poly] = []
    for dd in range(1, d // 2 + 1):
        lower.extend(irreducible_polys(field, dd))
    out = []
    q = field.q
    for code in range(q**d):
        coeffs = []
        c = code
        for _ in range(d):
            coeffs.append(c % q)
            c //= q
        f = coeffs + [1]
        if d > 1 and f[0] == 0:
            continue
        if all(mod(field, f, g) for g in lower):
            out.append(f)
    return out


def factor(field: Field, f: Poly) -> list[tuple[Poly, int]]:
    """Monic irreducible factorization by trial division, smallest
    degrees first.  Meant for the low-degree minimal polynomials that
    arise here, not as a general-purpose factoring routine."""
    f = monic(field, normalize(f))
    if deg(f) < 1:
        raise ValueError("cannot factor a constant")
    out: list[tuple[Poly, int]] = []
    d = 1
    while deg(f) >= 1:
        if d > deg(f):
            raise AssertionError("trial division ran past the degree")
        for g in irreducible_polys(field, d):
            if deg(g) > deg(f):
                break
            e = 0
            while True:
                q, r = divmod_poly(field, f, g)
                if r:
                    break
                f = q
                e += 1
            if e:
                out.append((g, e))
        d += 1
    return out
