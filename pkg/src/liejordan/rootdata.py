"""Root data for the classical families and G2, F4.

A datum stores explicit integer root and coroot vectors in a fixed
lattice basis; the pairing is the literal dot product.  The isogeny tag
selects the lattice: "sc" uses fundamental-weight coordinates (simple
roots are rows of the Cartan matrix, simple coroots are standard basis
vectors), "adjoint" uses simple-root coordinates (roots are standard
basis vectors, simple coroots are Cartan columns), and "matrix" uses
the epsilon coordinates of the classical matrix groups Sp_2n, SO_2n+1,
SO_2n.  The reductions h_alpha mod p and d(alpha) mod p, which drive
everything downstream, are plain coordinate reductions of these vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

Vec = tuple[int, ...]

CARTAN: dict[tuple[str, int], tuple[tuple[int, ...], ...]] = {
    ("A", 1): ((2,),),
    ("A", 2): ((2, -1), (-1, 2)),
    ("A", 3): ((2, -1, 0), (-1, 2, -1), (0, -1, 2)),
    # B_n: alpha_n short; entry [i][j] is <alpha_i, alpha_j^vee>
    ("B", 2): ((2, -2), (-1, 2)),
    ("B", 3): ((2, -1, 0), (-1, 2, -2), (0, -1, 2)),
    # C_n: alpha_n long
    ("C", 2): ((2, -1), (-2, 2)),
    ("C", 3): ((2, -1, 0), (-1, 2, -1), (0, -2, 2)),
    ("D", 3): ((2, -1, -1), (-1, 2, 0), (-1, 0, 2)),
    # G2: alpha_1 short
    ("G", 2): ((2, -1), (-3, 2)),
    # F4: alpha_1, alpha_2 long, alpha_3, alpha_4 short
    ("F", 4): ((2, -1, 0, 0), (-1, 2, -2, 0), (0, -1, 2, -1), (0, 0, -1, 2)),
}

WEYL_ORDER = {
    ("A", 1): 2, ("A", 2): 6, ("A", 3): 24,
    ("B", 1): 2, ("B", 2): 8, ("B", 3): 48,
    ("C", 2): 8, ("C", 3): 48,
    ("D", 3): 24,
    ("G", 2): 12, ("F", 4): 1152,
}


@dataclass(frozen=True, slots=True)
class ModPVector:
    """A vector over F_p on a declared side: "t" for X_*(T) tensor k,
    "tstar" for X^*(T) tensor k."""

    coords: Vec
    side: str
    p: int

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)


@dataclass(frozen=True, slots=True)
class RootDatum:
    family: str
    n: int
    isogeny: str
    roots: tuple[Vec, ...]
    coroots: tuple[Vec, ...]
    simple_indices: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.roots[0])

    def simple_roots(self) -> tuple[Vec, ...]:
        return tuple(self.roots[i] for i in self.simple_indices)

    def simple_coroots(self) -> tuple[Vec, ...]:
        return tuple(self.coroots[i] for i in self.simple_indices)

    def coroot(self, root: Vec) -> Vec:
        return self.coroots[self.roots.index(tuple(root))]

    def is_root(self, v: Vec) -> bool:
        return tuple(v) in self.roots

    def __repr__(self) -> str:  # pragma: no cover
        return f"RootDatum({self.family}{self.n}, {self.isogeny})"


def pairing(x: Vec, y: Vec) -> int:
    return sum(a * b for a, b in zip(x, y))


def _vsub(x: Vec, y: Vec) -> Vec:
    return tuple(a - b for a, b in zip(x, y))


def _vscale(c: int, x: Vec) -> Vec:
    return tuple(c * a for a in x)


def _generate_pairs(
    simples: list[tuple[Vec, Vec]]
) -> tuple[tuple[Vec, ...], tuple[Vec, ...]]:
    """Close a set of simple (root, coroot) pairs under all simple
    reflections, reflecting roots and coroots simultaneously."""
    table: dict[Vec, Vec] = {r: c for r, c in simples}
    order: list[Vec] = [r for r, _ in simples]
    queue = list(order)
    while queue:
        root = queue.pop(0)
        coroot = table[root]
        for s_root, s_coroot in simples:
            n1 = pairing(root, s_coroot)
            n2 = pairing(s_root, coroot)
            new_root = _vsub(root, _vscale(n1, s_root))
            new_coroot = _vsub(coroot, _vscale(n2, s_coroot))
            seen = table.get(new_root)
            if seen is None:
                table[new_root] = new_coroot
                order.append(new_root)
                queue.append(new_root)
            elif seen != new_coroot:
                raise AssertionError("inconsistent coroot during generation")
    return tuple(order), tuple(table[r] for r in order)


def _matrix_datum(family: str, n: int) -> RootDatum:
    def e(i: int) -> Vec:
        return tuple(1 if k == i else 0 for k in range(n))

    def add(x: Vec, y: Vec) -> Vec:
        return tuple(a + b for a, b in zip(x, y))

    def neg(x: Vec) -> Vec:
        return tuple(-a for a in x)

    roots: list[Vec] = []
    coroots: list[Vec] = []

    def put(r: Vec, c: Vec) -> None:
        roots.append(r)
        coroots.append(c)
        roots.append(neg(r))
        coroots.append(neg(c))

    for i in range(n):
        for j in range(i + 1, n):
            put(_vsub(e(i), e(j)), _vsub(e(i), e(j)))
            put(add(e(i), e(j)), add(e(i), e(j)))
    if family == "C":
        for i in range(n):
            put(_vscale(2, e(i)), e(i))
    elif family == "B":
        for i in range(n):
            put(e(i), _vscale(2, e(i)))

    simple: list[Vec] = [_vsub(e(i), e(i + 1)) for i in range(n - 1)]
    if family == "C":
        simple.append(_vscale(2, e(n - 1)))
    elif family == "B":
        simple.append(e(n - 1))
    elif family == "D":
        simple.append(add(e(n - 2), e(n - 1)))
    simple_indices = tuple(roots.index(s) for s in simple)
    return RootDatum(family, n, "matrix", tuple(roots), tuple(coroots),
                     simple_indices)


@lru_cache(maxsize=None)
def build_root_datum(family: str, n: int, isogeny: str = "sc") -> RootDatum:
    """Construct a root datum for the given family, rank, and lattice.

    Supported: A1-A3, B2-B3, C2-C3, D3, G2, F4 with isogeny "sc" or
    "adjoint" (G2 and F4 accept either tag, the lattices coincide), and
    the classical matrix conventions "matrix" for B (SO_2n+1, n >= 1),
    C (Sp_2n), D (SO_2n).
    """
    family = family.upper()
    if isogeny == "matrix":
        if family == "B" and 1 <= n <= 3:
            return _matrix_datum(family, n)
        if family == "C" and 2 <= n <= 3:
            return _matrix_datum(family, n)
        if family == "D" and n == 3:
            return _matrix_datum(family, n)
        raise ValueError(f"unsupported (family, n, isogeny) ({family}, {n}, matrix)")
    if isogeny not in ("sc", "adjoint"):
        raise ValueError(f"unknown isogeny tag {isogeny!r}")
    key = (family, n)
    if key not in CARTAN:
        raise ValueError(f"unsupported (family, n) ({family}, {n})")
    cartan = CARTAN[key]
    rank = len(cartan)

    def basis(i: int) -> Vec:
        return tuple(1 if k == i else 0 for k in range(rank))

    simples: list[tuple[Vec, Vec]] = []
    for i in range(rank):
        if isogeny == "sc":
            simples.append((tuple(cartan[i]), basis(i)))
        else:
            simples.append((basis(i), tuple(row[i] for row in cartan)))
    roots, coroots = _generate_pairs(simples)
    simple_indices = tuple(roots.index(r) for r, _ in simples)
    return RootDatum(family, n, isogeny, roots, coroots, simple_indices)


# -- lengths and positivity -------------------------------------------

def is_simply_laced(d: RootDatum) -> bool:
    return d.family in ("A", "D")


def length_class(d: RootDatum, root: Vec) -> str:
    """"long" or "short"; in simply laced types every root is "long"."""
    root = tuple(root)
    coroot = d.coroot(root)
    if is_simply_laced(d):
        return "long"
    for beta in d.roots:
        if beta in (root, tuple(-x for x in root)):
            continue
        if abs(pairing(beta, coroot)) >= 2:
            return "short"
    return "long"


def simple_root_coords(d: RootDatum, v: Vec) -> tuple[Fraction, ...] | None:
    """Coordinates of v in the simple-root basis, or None if v is not in
    the rational span.  Exact rational arithmetic."""
    simples = d.simple_roots()
    rank = d.rank
    cols = len(simples)
    aug = [
        [Fraction(simples[j][i]) for j in range(cols)] + [Fraction(v[i])]
        for i in range(rank)
    ]
    # fraction-free-ish Gauss over Q
    pivots = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rank) if aug[i][c]), None)
        if piv is None:
            continue
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = 1 / aug[r][c]
        aug[r] = [x * inv for x in aug[r]]
        for i in range(rank):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[r])]
        pivots.append(c)
        r += 1
    for i in range(r, rank):
        if aug[i][cols]:
            return None
    out = [Fraction(0)] * cols
    for rr, pc in enumerate(pivots):
        out[pc] = aug[rr][cols]
    return tuple(out)


def root_height(d: RootDatum, root: Vec) -> int:
    coords = simple_root_coords(d, tuple(root))
    assert coords is not None
    total = sum(coords)
    assert total.denominator == 1
    return int(total)


def positive_roots(d: RootDatum) -> tuple[Vec, ...]:
    return tuple(r for r in d.roots if root_height(d, r) > 0)


def highest_root(d: RootDatum) -> Vec:
    return max(d.roots, key=lambda r: root_height(d, r))


# -- mod-p reductions --------------------------------------------------

def mod_p_images(
    d: RootDatum, p: int
) -> dict[Vec, tuple[ModPVector, ModPVector]]:
    """Per root alpha: (h_alpha mod p in t, d(alpha) mod p in t*)."""
    out = {}
    for root, coroot in zip(d.roots, d.coroots):
        h = ModPVector(tuple(c % p for c in coroot), "t", p)
        da = ModPVector(tuple(c % p for c in root), "tstar", p)
        out[root] = (h, da)
    return out


def vanishing_sets(d: RootDatum, p: int) -> tuple[set[Vec], set[Vec]]:
    """({alpha : h_alpha = 0 mod p}, {alpha : d(alpha) = 0 mod p})."""
    images = mod_p_images(d, p)
    h_zero = {r for r, (h, _) in images.items() if h.is_zero()}
    d_zero = {r for r, (_, da) in images.items() if da.is_zero()}
    return h_zero, d_zero


def is_type_B_adjoint(d: RootDatum) -> bool:
    """Whether the datum is an adjoint odd orthogonal group, honouring
    the rank coincidences PGL2 = SO3 (B1) and PSp4 = SO5 (B2)."""
    if d.family == "B" and d.isogeny in ("adjoint", "matrix"):
        return True
    if d.family == "A" and d.n == 1 and d.isogeny == "adjoint":
        return True
    if d.family == "C" and d.n == 2 and d.isogeny == "adjoint":
        return True
    return False


# -- rank-2 subsystems and the counterexample criterion ---------------

def _rational_combo(alpha: Vec, beta: Vec, gamma: Vec) -> tuple[Fraction, Fraction] | None:
    """gamma = x alpha + y beta with rational x, y, if possible."""
    rank = len(alpha)
    rows = [[Fraction(alpha[i]), Fraction(beta[i]), Fraction(gamma[i])]
            for i in range(rank)]
    # eliminate
    piv_rows = []
    r = 0
    for c in range(2):
        piv = next((i for i in range(r, rank) if rows[i][c]), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = 1 / rows[r][c]
        rows[r] = [x * inv for x in rows[r]]
        for i in range(rank):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        piv_rows.append(c)
        r += 1
    for i in range(r, rank):
        if rows[i][2]:
            return None
    x = y = Fraction(0)
    for rr, pc in enumerate(piv_rows):
        if pc == 0:
            x = rows[rr][2]
        else:
            y = rows[rr][2]
    return x, y


def rank2_subsystem(d: RootDatum, alpha: Vec, beta: Vec) -> dict:
    """Phi intersect (Z alpha + Z beta), with a closedness flag and a
    type label among A1xA1, A2, B2, G2."""
    alpha, beta = tuple(alpha), tuple(beta)
    if not d.is_root(alpha) or not d.is_root(beta):
        raise ValueError("inputs must be roots")
    if _rational_combo(alpha, (0,) * d.rank, beta) is not None:
        raise ValueError("roots are proportional")
    members = []
    for gamma in d.roots:
        combo = _rational_combo(alpha, beta, gamma)
        if combo is None:
            continue
        x, y = combo
        if x.denominator == 1 and y.denominator == 1:
            members.append(gamma)
    mset = set(members)
    closed = all(
        tuple(a + b for a, b in zip(g1, g2)) in mset
        for g1 in members
        for g2 in members
        if d.is_root(tuple(a + b for a, b in zip(g1, g2)))
    )
    types = {4: "A1xA1", 6: "A2", 8: "B2", 12: "G2"}
    return {
        "members": tuple(members),
        "closed": closed,
        "type": types[len(members)],
    }


def counterexample_pairs(d: RootDatum, p: int) -> list[tuple[Vec, Vec]]:
    """Ordered root pairs (alpha, beta) with alpha + beta a root whose
    coroot reduction lies outside the F_p-span of h_alpha and h_beta."""
    from . import linalg
    from .fields import GF

    field = GF(p)
    images = mod_p_images(d, p)
    out = []
    for alpha in d.roots:
        for beta in d.roots:
            if beta == alpha or beta == tuple(-x for x in alpha):
                continue
            total = tuple(a + b for a, b in zip(alpha, beta))
            if not d.is_root(total):
                continue
            h_a = list(images[alpha][0].coords)
            h_b = list(images[beta][0].coords)
            h_ab = list(images[total][0].coords)
            if not linalg.in_span(field, h_ab, [h_a, h_b]):
                out.append((alpha, beta))
    return out


def f4_coroot_identity_check(d: RootDatum) -> bool:
    """The integer coroot identity from the F4 subsystem argument:
    3 alpha_2^vee = theta^vee - 2 alpha_1^vee - 2 alpha_3^vee - alpha_4^vee
    where theta = 2 alpha_1 + 3 alpha_2 + 4 alpha_3 + 2 alpha_4, together
    with the root-level companion
    3 alpha_2 = theta - 2 alpha_1 - 4 alpha_3 - 2 alpha_4."""
    if d.family != "F":
        raise ValueError("not F4")
    a1, a2, a3, a4 = d.simple_roots()
    theta = tuple(
        2 * w + 3 * x + 4 * y + 2 * z for w, x, y, z in zip(a1, a2, a3, a4)
    )
    if not d.is_root(theta):
        return False
    root_lhs = _vscale(3, a2)
    root_rhs = tuple(
        t - 2 * w - 4 * y - 2 * z for t, w, y, z in zip(theta, a1, a3, a4)
    )
    if root_lhs != root_rhs:
        return False
    c1, c2, c3, c4 = d.simple_coroots()
    ctheta = d.coroot(theta)
    co_lhs = _vscale(3, c2)
    co_rhs = tuple(
        t - 2 * w - 2 * y - z for t, w, y, z in zip(ctheta, c1, c3, c4)
    )
    return co_lhs == co_rhs


# -- Weyl group --------------------------------------------------------

def _reflection_matrix_tstar(root: Vec, coroot: Vec) -> tuple[Vec, ...]:
    """Matrix of s_alpha on X^*(T) acting on column vectors."""
    rank = len(root)
    rows = []
    for a in range(rank):
        row = []
        for b in range(rank):
            val = (1 if a == b else 0) - root[a] * coroot[b]
            row.append(val)
        rows.append(tuple(row))
    return tuple(rows)


def _mat_apply(m: tuple[Vec, ...], v: Vec) -> Vec:
    return tuple(sum(row[j] * v[j] for j in range(len(v))) for row in m)


def _mat_prod(a: tuple[Vec, ...], b: tuple[Vec, ...]) -> tuple[Vec, ...]:
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


@lru_cache(maxsize=None)
def weyl_elements(d: RootDatum) -> tuple[tuple[tuple[Vec, ...], tuple[int, ...]], ...]:
    """All Weyl elements as matrices on X^*(T), in BFS order over words
    in the simple reflections (shortest word first, lexicographic among
    equal lengths, first word reached is kept)."""
    gens = [
        _reflection_matrix_tstar(r, c)
        for r, c in zip(d.simple_roots(), d.simple_coroots())
    ]
    rank = d.rank
    ident = tuple(
        tuple(1 if i == j else 0 for j in range(rank)) for i in range(rank)
    )
    seen = {ident: ()}
    order = [ident]
    frontier = [ident]
    while frontier:
        new_frontier = []
        for m in frontier:
            word = seen[m]
            for gi, g in enumerate(gens):
                nm = _mat_prod(m, g)
                if nm not in seen:
                    seen[nm] = word + (gi,)
                    order.append(nm)
                    new_frontier.append(nm)
        frontier = new_frontier
    expected = WEYL_ORDER.get((d.family, d.n))
    if expected is not None and len(order) != expected:
        raise AssertionError("Weyl group order mismatch")
    return tuple((m, seen[m]) for m in order)


def weyl_orbit(d: RootDatum, v, side: str = "tstar"):
    """Full Weyl orbit of a lattice vector or a ModPVector.  The action
    on the "t" side uses the transposed matrices."""
    if isinstance(v, ModPVector):
        p = v.p
        side = v.side
        coords = v.coords
    else:
        p = None
        coords = tuple(v)
    orbit = set()
    for m, _ in weyl_elements(d):
        if side == "t":
            m = tuple(zip(*m))
        image = _mat_apply(m, coords)
        if p is not None:
            image = tuple(c % p for c in image)
        orbit.add(image)
    if p is not None:
        return {ModPVector(im, side, p) for im in orbit}
    return orbit


# -- serialization -----------------------------------------------------

def datum_json(d: RootDatum, primes: list[int]) -> dict:
    pairing_matrix = [
        [pairing(r, c) for c in d.coroots] for r in d.roots
    ]
    payload = {
        "family": d.family,
        "rank": d.n,
        "isogeny": d.isogeny,
        "lattice_rank": d.rank,
        "roots": [list(r) for r in d.roots],
        "coroots": [list(c) for c in d.coroots],
        "simple_indices": list(d.simple_indices),
        "pairing_matrix": pairing_matrix,
        "weyl_order": len(weyl_elements(d)),
        "vanishing": {},
    }
    for p in primes:
        h_zero, d_zero = vanishing_sets(d, p)
        payload["vanishing"][str(p)] = {
            "h_zero": sorted([list(r) for r in h_zero]),
            "d_zero": sorted([list(r) for r in d_zero]),
        }
    return payload
