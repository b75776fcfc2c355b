"""Exact dense linear algebra over the small fields and lift rings.

Matrices are plain lists of rows of ints; the field (or lift ring) is
passed explicitly.  Row reduction always picks the first nonzero entry in
row-major scan order, so echelon forms, kernels, and solutions are
deterministic for a fixed input.
"""

from __future__ import annotations

from itertools import combinations

from .fields import GF, Field

Mat = list[list[int]]


def zeros(rows: int, cols: int) -> Mat:
    return [[0] * cols for _ in range(rows)]


def identity(n: int) -> Mat:
    out = zeros(n, n)
    for i in range(n):
        out[i][i] = 1
    return out


def copy(a: Mat) -> Mat:
    return [row[:] for row in a]


def transpose(a: Mat) -> Mat:
    return [list(col) for col in zip(*a)]


def mat_add(ring, a: Mat, b: Mat) -> Mat:
    if len(a) != len(b) or len(a[0]) != len(b[0]):
        raise ValueError("dimension mismatch")
    return [
        [ring.add(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)
    ]


def mat_sub(ring, a: Mat, b: Mat) -> Mat:
    if len(a) != len(b) or len(a[0]) != len(b[0]):
        raise ValueError("dimension mismatch")
    return [
        [ring.sub(x, y) for x, y in zip(ra, rb)] for ra, rb in zip(a, b)
    ]


def mat_scale(ring, c: int, a: Mat) -> Mat:
    return [[ring.mul(c, x) for x in row] for row in a]


def mat_mul(ring, a: Mat, b: Mat) -> Mat:
    if len(a[0]) != len(b):
        raise ValueError("dimension mismatch")
    bt = transpose(b)
    out = zeros(len(a), len(bt))
    for i, row in enumerate(a):
        for j, col in enumerate(bt):
            acc = 0
            for x, y in zip(row, col):
                if x and y:
                    acc = ring.add(acc, ring.mul(x, y))
            out[i][j] = acc
    return out


def mat_vec(ring, a: Mat, v: list[int]) -> list[int]:
    if len(a[0]) != len(v):
        raise ValueError("dimension mismatch")
    out = []
    for row in a:
        acc = 0
        for x, y in zip(row, v):
            if x and y:
                acc = ring.add(acc, ring.mul(x, y))
        out.append(acc)
    return out


def trace(ring, a: Mat) -> int:
    acc = 0
    for i in range(len(a)):
        acc = ring.add(acc, a[i][i])
    return acc


def scale_vec(ring, c: int, v: list[int]) -> list[int]:
    return [ring.mul(c, x) for x in v]


def add_vec(ring, u: list[int], v: list[int]) -> list[int]:
    return [ring.add(x, y) for x, y in zip(u, v)]


def sub_vec(ring, u: list[int], v: list[int]) -> list[int]:
    return [ring.sub(x, y) for x, y in zip(u, v)]


def rref(field: Field, a: Mat) -> tuple[Mat, list[int]]:
    """Reduced row echelon form and the list of pivot columns."""
    m = copy(a)
    rows = len(m)
    cols = len(m[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        pivot = None
        for i in range(r, rows):
            if m[i][c]:
                pivot = i
                break
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.mul(inv, x) for x in m[r]]
        for i in range(rows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [
                    field.sub(x, field.mul(f, y)) for x, y in zip(m[i], m[r])
                ]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return m, pivots


def rank(field: Field, a: Mat) -> int:
    return len(rref(field, a)[1])


def kernel(field: Field, a: Mat) -> list[list[int]]:
    """Echelonized basis of the right null space, deterministic."""
    if not a:
        return []
    red, pivots = rref(field, a)
    cols = len(a[0])
    pivot_set = set(pivots)
    free = [c for c in range(cols) if c not in pivot_set]
    basis = []
    for fc in free:
        v = [0] * cols
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = field.neg(red[r][fc])
        basis.append(v)
    return basis


def linsolve(field: Field, a: Mat, mode: str = "kernel", v: list[int] | None = None):
    """Null-space basis (mode="kernel") or exact span membership
    (mode="span-membership", v required: is v in the row span of a?)."""
    if mode == "kernel":
        return kernel(field, a)
    if mode == "span-membership":
        if v is None:
            raise ValueError("span-membership mode needs a vector")
        if a and len(v) != len(a[0]):
            raise ValueError("dimension mismatch")
        return in_span(field, v, a)
    raise ValueError(f"unknown mode {mode!r}")


def in_span(field: Field, v: list[int], vectors: list[list[int]]) -> bool:
    if not vectors:
        return all(x == 0 for x in v)
    red, pivots = rref(field, vectors)
    w = v[:]
    for r, pc in enumerate(pivots):
        if w[pc]:
            f = w[pc]
            w = [field.sub(x, field.mul(f, y)) for x, y in zip(w, red[r])]
    return all(x == 0 for x in w)


def span_basis(field: Field, vectors: list[list[int]]) -> list[list[int]]:
    """Echelonized basis of the span of the given vectors."""
    if not vectors:
        return []
    red, pivots = rref(field, vectors)
    return [red[r] for r in range(len(pivots))]


def solve(field: Field, a: Mat, b: list[int]) -> list[int] | None:
    """One solution of a x = b, or None."""
    if len(a) != len(b):
        raise ValueError("dimension mismatch")
    cols = len(a[0]) if a else 0
    aug = [row[:] + [bv] for row, bv in zip(a, b)]
    red, pivots = rref(field, aug)
    if cols in pivots:
        return None
    x = [0] * cols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][cols]
    return x


def det(field: Field, a: Mat) -> int:
    n = len(a)
    m = copy(a)
    out = 1
    for c in range(n):
        pivot = None
        for i in range(c, n):
            if m[i][c]:
                pivot = i
                break
        if pivot is None:
            return 0
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            out = field.neg(out)
        out = field.mul(out, m[c][c])
        inv = field.inv(m[c][c])
        for i in range(c + 1, n):
            if m[i][c]:
                f = field.mul(inv, m[i][c])
                m[i] = [
                    field.sub(x, field.mul(f, y)) for x, y in zip(m[i], m[c])
                ]
    return out


def inverse(field: Field, a: Mat) -> Mat:
    n = len(a)
    aug = [row[:] + ident_row for row, ident_row in zip(a, identity(n))]
    red, pivots = rref(field, aug)
    if pivots != list(range(n)):
        raise ValueError("matrix not invertible")
    return [row[n:] for row in red]


def charpoly(field: Field, a: Mat) -> list[int]:
    """Coefficients of det(lambda I - a), lowest degree first, monic.

    Computed from sums of principal minors, which stays exact and is
    fast at the matrix sizes used here (n <= 6).
    """
    n = len(a)
    coeffs = [0] * (n + 1)
    coeffs[n] = 1
    for k in range(1, n + 1):
        e = 0
        for idx in combinations(range(n), k):
            sub = [[a[i][j] for j in idx] for i in idx]
            e = field.add(e, det(field, sub))
        # coefficient of lambda^(n-k) is (-1)^k e_k
        if k % 2:
            e = field.neg(e)
        coeffs[n - k] = e
    return coeffs


def mat_eq(a: Mat, b: Mat) -> bool:
    return a == b


def is_zero(a: Mat) -> bool:
    return all(x == 0 for row in a for x in row)


# -- text format -------------------------------------------------------

def format_matrix(field: Field, a: Mat) -> str:
    """Text serialization: header "p m rows cols", then one line per row,
    entries space-separated, each entry m base-p digits lowest degree
    first."""
    lines = [f"{field.p} {field.m} {len(a)} {len(a[0]) if a else 0}"]
    for row in a:
        lines.append(
            " ".join("".join(str(d) for d in field.digits(x)) for x in row)
        )
    return "\n".join(lines) + "\n"


def parse_matrix(text: str) -> tuple[Field, Mat]:
    lines = [ln for ln in text.strip().splitlines() if ln.strip()]
    if not lines:
        raise ValueError("empty matrix text")
    header = lines[0].split()
    if len(header) != 4:
        raise ValueError("bad header, expected 'p m rows cols'")
    p, m, rows, cols = (int(x) for x in header)
    field = GF(p, m)
    if len(lines) != rows + 1:
        raise ValueError("dimension mismatch")
    out: Mat = []
    for ln in lines[1:]:
        entries = ln.split()
        if len(entries) != cols:
            raise ValueError("dimension mismatch")
        row = []
        for ent in entries:
            if len(ent) != m:
                raise ValueError(f"entry {ent!r} is not {m} digits")
            row.append(field.from_digits(int(ch) for ch in ent))
        out.append(row)
    return field, out
