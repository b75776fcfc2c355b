"""Matrix realizations of Sp_2n, SO_2n+1, SL_n, and PGL_n over small
finite fields.

Each group carries its defining form, torus and root-element generators,
an explicit Lie algebra basis, and the data needed to work with the dual
Lie algebra: functionals are stored as trace-pairing representative
matrices modulo the annihilator g_perp = {Y : Tr(YX) = 0 for all X in g}.

Conventions fixed here and relied on everywhere else:
  * Sp_2n preserves the antidiagonal Gram matrix with +1 in the upper
    right block and -1 in the lower left (all +1 in characteristic 2,
    matching the form x1 y4 + x2 y3 + x3 y2 + x4 y1 for n = 2).
  * SO_2n+1 (characteristic 2 only) preserves the quadratic form
    q(x) = x_mid^2 + sum_i x_i x_(N+1-i) whose polar form has a
    1-dimensional radical, the middle coordinate line.
  * PGL_n elements are GL_n matrices with the first nonzero entry
    normalized to 1; its Lie algebra elements are gl_n matrices modulo
    scalars, and its dual elements are trace-zero representatives
    (functionals on gl_n vanishing on the scalar line).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from . import linalg, rootdata
from .fields import GF, Field
from .linalg import Mat


class BoundExceeded(RuntimeError):
    """Raised when a point enumeration would exceed the configured bound."""


DEFAULT_MAX_ENUM = 10_000_000


def field_from_q(q: int) -> Field:
    p = next((d for d in range(2, q + 1) if q % d == 0), q)
    m = 0
    rest = q
    while rest % p == 0:
        rest //= p
        m += 1
    if rest != 1:
        raise ValueError(f"{q} is not a prime power")
    return GF(p, m)


@lru_cache(maxsize=None)
def _gl_datum(n: int) -> rootdata.RootDatum:
    """GL_n-style type A data in Z^n epsilon coordinates, shared by SL_n
    and PGL_n at the matrix level."""
    roots = []
    coroots = []
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            v = tuple(1 if k == i else -1 if k == j else 0 for k in range(n))
            roots.append(v)
            coroots.append(v)
    simples = []
    for i in range(n - 1):
        v = tuple(1 if k == i else -1 if k == i + 1 else 0 for k in range(n))
        simples.append(roots.index(v))
    return rootdata.RootDatum(
        "GL", n, "matrix", tuple(roots), tuple(coroots), tuple(simples)
    )


class MatrixGroup:
    """A classical group over F_q together with its Lie-algebra data.

    Use :func:`build_group`; instances are cached and safe to share.
    """

    def __init__(self, family: str, n: int, field: Field) -> None:
        self.family = family
        self.n = n
        self.field = field
        if family == "Sp":
            self._init_sp()
        elif family == "SO":
            self._init_so()
        elif family == "SL":
            self._init_sl()
        elif family == "PGL":
            self._init_pgl()
        else:
            raise ValueError(f"unsupported family {family!r}")
        self._finish()

    # -- construction ---------------------------------------------------

    def _init_sp(self) -> None:
        n, F = self.n, self.field
        N = self.N = 2 * n
        self.datum = rootdata.build_root_datum("C", n, "matrix")
        self.torus_rank = n
        gram = linalg.zeros(N, N)
        for i in range(n):
            gram[i][N - 1 - i] = 1
            gram[N - 1 - i][i] = F.neg(1)
        self.gram = gram
        self.diag_exponents = [
            tuple(1 if k == i else 0 for k in range(n)) for i in range(n)
        ] + [
            tuple(-1 if k == i else 0 for k in range(n))
            for i in reversed(range(n))
        ]
        pat = {}
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                # eps_i - eps_j
                v = tuple(
                    1 if k == i else -1 if k == j else 0 for k in range(n)
                )
                pat[v] = {(i, j): 1, (N - 1 - j, N - 1 - i): -1}
        for i in range(n):
            for j in range(i + 1, n):
                v = tuple(1 if k in (i, j) else 0 for k in range(n))
                pat[v] = {(i, N - 1 - j): 1, (j, N - 1 - i): 1}
                vneg = tuple(-x for x in v)
                pat[vneg] = {(N - 1 - j, i): 1, (N - 1 - i, j): 1}
        for i in range(n):
            v = tuple(2 if k == i else 0 for k in range(n))
            pat[v] = {(i, N - 1 - i): 1}
            pat[tuple(-x for x in v)] = {(N - 1 - i, i): 1}
        self._root_patterns = pat
        self._torus_patterns = [
            {(i, i): 1, (N - 1 - i, N - 1 - i): -1} for i in range(n)
        ]
        self._sqrt_roots: set = set()

    def _init_so(self) -> None:
        # ambient N = 2n + 1; characteristic 2 only, where the polar form
        # of the quadratic form degenerates on the middle line
        N = self.N = self.n
        F = self.field
        if N % 2 == 0 or N < 3:
            raise ValueError("SO supported for odd ambient dimension >= 3")
        if F.p != 2:
            raise ValueError("SO model implemented for characteristic 2 only")
        n = self.so_rank = (N - 1) // 2
        self.datum = rootdata.build_root_datum("B", n, "matrix")
        self.torus_rank = n
        mid = n  # 0-indexed middle position
        polar = linalg.zeros(N, N)
        for i in range(N):
            if i != mid:
                polar[i][N - 1 - i] = 1
        self.polar = polar
        self.quad_pairs = [(i, N - 1 - i) for i in range(n)]
        self.mid = mid
        self.diag_exponents = (
            [tuple(1 if k == i else 0 for k in range(n)) for i in range(n)]
            + [tuple(0 for _ in range(n))]
            + [
                tuple(-1 if k == i else 0 for k in range(n))
                for i in reversed(range(n))
            ]
        )

        def amb(i: int) -> int:
            # ambient row of basis vector v_i, i in 1..n
            return i - 1

        pat = {}
        sqrt_roots = set()
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                v = tuple(
                    1 if k == i else -1 if k == j else 0 for k in range(n)
                )
                pat[v] = {(amb(i + 1), amb(j + 1)): 1,
                          (N - 1 - amb(j + 1), N - 1 - amb(i + 1)): 1}
        for i in range(n):
            for j in range(i + 1, n):
                v = tuple(1 if k in (i, j) else 0 for k in range(n))
                pat[v] = {(amb(i + 1), N - 1 - amb(j + 1)): 1,
                          (amb(j + 1), N - 1 - amb(i + 1)): 1}
                pat[tuple(-x for x in v)] = {
                    (N - 1 - amb(j + 1), amb(i + 1)): 1,
                    (N - 1 - amb(i + 1), amb(j + 1)): 1,
                }
        for i in range(n):
            v = tuple(1 if k == i else 0 for k in range(n))
            pat[v] = {(mid, N - 1 - amb(i + 1)): 1}
            pat[tuple(-x for x in v)] = {(mid, amb(i + 1)): 1}
            sqrt_roots.add(v)
            sqrt_roots.add(tuple(-x for x in v))
        self._root_patterns = pat
        self._sqrt_roots = sqrt_roots
        self._torus_patterns = [
            {(i, i): 1, (N - 1 - i, N - 1 - i): -1} for i in range(n)
        ]

    def _init_sl(self) -> None:
        N = self.N = self.n
        self.datum = _gl_datum(N)
        self.torus_rank = N - 1
        self.diag_exponents = [
            tuple(1 if k == i else 0 for k in range(N)) for i in range(N)
        ]
        pat = {}
        for i in range(N):
            for j in range(N):
                if i != j:
                    v = tuple(
                        1 if k == i else -1 if k == j else 0 for k in range(N)
                    )
                    pat[v] = {(i, j): 1}
        self._root_patterns = pat
        self._torus_patterns = [
            {(i, i): 1, (i + 1, i + 1): -1} for i in range(N - 1)
        ]
        self._sqrt_roots = set()

    def _init_pgl(self) -> None:
        N = self.N = self.n
        self.datum = _gl_datum(N)
        self.torus_rank = N - 1
        self.diag_exponents = [
            tuple(1 if k == i else 0 for k in range(N)) for i in range(N)
        ]
        pat = {}
        for i in range(N):
            for j in range(N):
                if i != j:
                    v = tuple(
                        1 if k == i else -1 if k == j else 0 for k in range(N)
                    )
                    pat[v] = {(i, j): 1}
        self._root_patterns = pat
        # torus coset representatives diag(1, t_2, ..., t_N); Lie torus
        # representatives E_ii modulo scalars
        self._torus_patterns = [{(i, i): 1} for i in range(N - 1)]
        self._sqrt_roots = set()

    def _finish(self) -> None:
        F = self.field
        N = self.N
        self.is_quotient = self.family == "PGL"
        basis: list[tuple[tuple, Mat]] = []
        for i, tp in enumerate(self._torus_patterns):
            basis.append((("h", i), self._pattern_matrix(tp)))
        for root in self.datum.roots:
            basis.append(
                (("e", root), self._pattern_matrix(self._root_patterns[root]))
            )
        self.lie_basis = basis
        self.dim = len(basis)
        self._flat_basis = [
            [x for row in mat for x in row] for _, mat in basis
        ]
        # annihilator of g inside gl_N under the trace pairing; for PGL
        # the dual representatives are instead cut out by trace zero and
        # the annihilator is trivial
        if self.is_quotient:
            self.g_perp: list[list[int]] = []
        else:
            pairing_rows = [
                [mat[b][a] for a in range(N) for b in range(N)]
                for _, mat in basis
            ]
            self.g_perp = [
                self._unflatten(v) for v in linalg.kernel(F, pairing_rows)
            ]
        # echelonize the flattened annihilator in reversed coordinate
        # order so canonical representatives concentrate support in the
        # upper-left, like the displayed matrices in small examples
        rev = [list(reversed([x for row in m for x in row]))
               for m in self.g_perp]
        red, pivots = linalg.rref(F, rev) if rev else ([], [])
        self._perp_echelon = [red[r] for r in range(len(pivots))]
        self._perp_pivots = pivots
        self._points: list | None = None

    def _pattern_matrix(self, pattern: dict[tuple[int, int], int]) -> Mat:
        F = self.field
        out = linalg.zeros(self.N, self.N)
        for (i, j), c in pattern.items():
            out[i][j] = c % F.p if F.m == 1 else F.from_digits(
                [c % F.p] + [0] * (F.m - 1)
            )
        return out

    def _unflatten(self, flat: list[int]) -> Mat:
        N = self.N
        return [flat[i * N:(i + 1) * N] for i in range(N)]

    # -- membership -----------------------------------------------------

    def is_group_point(self, g: Mat) -> bool:
        F = self.field
        if len(g) != self.N or any(len(r) != self.N for r in g):
            return False
        if linalg.det(F, g) == 0:
            return False
        if self.family == "Sp":
            gt = linalg.transpose(g)
            return linalg.mat_mul(F, gt, linalg.mat_mul(F, self.gram, g)) \
                == self.gram
        if self.family == "SO":
            for j in range(self.N):
                col = [g[i][j] for i in range(self.N)]
                if self._quad(col) != self._quad(
                    [1 if i == j else 0 for i in range(self.N)]
                ):
                    return False
            gt = linalg.transpose(g)
            return linalg.mat_mul(F, gt, linalg.mat_mul(F, self.polar, g)) \
                == self.polar
        if self.family == "SL":
            return linalg.det(F, g) == 1
        return True  # PGL: any invertible representative

    def _quad(self, v: list[int]) -> int:
        F = self.field
        out = F.mul(v[self.mid], v[self.mid])
        for i, j in self.quad_pairs:
            out = F.add(out, F.mul(v[i], v[j]))
        return out

    def is_lie_element(self, x: Mat) -> bool:
        F = self.field
        if self.family == "Sp":
            xt = linalg.transpose(x)
            lhs = linalg.mat_add(
                F,
                linalg.mat_mul(F, xt, self.gram),
                linalg.mat_mul(F, self.gram, x),
            )
            return linalg.is_zero(lhs)
        if self.family == "SO":
            # The condition b(v, xv) = 0 for all v is necessary but admits
            # one extra dimension in characteristic 2 (any endomorphism
            # supported on the radical line of the polar form passes it).
            # The Lie algebra of the smooth group is the span of the
            # Chevalley basis, so membership is a span check.
            for i in range(self.N):
                ei = [1 if k == i else 0 for k in range(self.N)]
                xe = linalg.mat_vec(F, x, ei)
                if self._polar_pair(ei, xe) != 0:
                    return False
            for i in range(self.N):
                for j in range(i + 1, self.N):
                    ei = [1 if k == i else 0 for k in range(self.N)]
                    ej = [1 if k == j else 0 for k in range(self.N)]
                    a = self._polar_pair(ei, linalg.mat_vec(F, x, ej))
                    b = self._polar_pair(ej, linalg.mat_vec(F, x, ei))
                    if F.add(a, b) != 0:
                        return False
            return self.lie_coords(x) is not None
        if self.family == "SL":
            return linalg.trace(F, x) == 0
        return True  # PGL: any gl_N representative

    def _polar_pair(self, u: list[int], v: list[int]) -> int:
        F = self.field
        out = 0
        for i in range(self.N):
            for j in range(self.N):
                if self.polar[i][j]:
                    out = F.add(out, F.mul(u[i], F.mul(self.polar[i][j], v[j])))
        return out

    # -- canonical representatives -------------------------------------

    def canonical_point(self, g: Mat) -> tuple:
        if self.is_quotient:
            F = self.field
            lead = next(x for row in g for x in row if x)
            inv = F.inv(lead)
            g = [[F.mul(inv, x) for x in row] for row in g]
        return tuple(tuple(row) for row in g)

    def canonical_dual_rep(self, rep: Mat) -> tuple:
        F = self.field
        flat = list(reversed([x for row in rep for x in row]))
        for r, pc in enumerate(self._perp_pivots):
            if flat[pc]:
                c = flat[pc]
                flat = [
                    F.sub(x, F.mul(c, y))
                    for x, y in zip(flat, self._perp_echelon[r])
                ]
        mat = self._unflatten(list(reversed(flat)))
        return tuple(tuple(row) for row in mat)

    def lie_coords(self, x: Mat) -> list[int] | None:
        """Coordinates of x in the stored Lie basis (PGL: of some scalar
        shift of x), or None if x is not in the Lie algebra's span."""
        F = self.field
        flat = [v for row in x for v in row]
        cols = list(self._flat_basis)
        if self.is_quotient:
            ident = [v for row in linalg.identity(self.N) for v in row]
            cols = cols + [ident]
        sol = linalg.solve(F, linalg.transpose(cols), flat)
        if sol is None:
            return None
        return sol[: self.dim]

    def lie_from_coords(self, coords: list[int]) -> Mat:
        F = self.field
        out = linalg.zeros(self.N, self.N)
        for c, (_, mat) in zip(coords, self.lie_basis):
            if c:
                out = linalg.mat_add(F, out, linalg.mat_scale(F, c, mat))
        return out

    def lie_equal(self, x: Mat, y: Mat) -> bool:
        if x == y:
            return True
        if not self.is_quotient:
            return False
        F = self.field
        diff = linalg.mat_sub(F, x, y)
        scalars = {diff[i][i] for i in range(self.N)}
        return len(scalars) == 1 and all(
            diff[i][j] == 0 for i in range(self.N) for j in range(self.N)
            if i != j
        )

    # -- torus and root elements ---------------------------------------

    def torus_matrix(self, params: tuple[int, ...]) -> Mat:
        F = self.field
        if len(params) != self.torus_rank:
            raise ValueError("dimension mismatch")
        if any(t == 0 for t in params):
            raise ValueError("torus parameters must be units")
        if self.family in ("Sp", "SO"):
            diag = list(params) + ([1] if self.family == "SO" else [])
            diag += [F.inv(t) for t in reversed(params)]
        elif self.family == "SL":
            prod = 1
            for t in params:
                prod = F.mul(prod, t)
            diag = list(params) + [F.inv(prod)]
        else:  # PGL gauge: first entry 1
            diag = [1] + list(params)
        out = linalg.zeros(self.N, self.N)
        for i, t in enumerate(diag):
            out[i][i] = t
        return out

    def torus_elements(self) -> list[Mat]:
        F = self.field
        out = []
        for params in itertools.product(F.units(), repeat=self.torus_rank):
            out.append(self.torus_matrix(params))
        return out

    def root_vector(self, alpha) -> Mat:
        alpha = tuple(alpha)
        if alpha not in self._root_patterns:
            raise ValueError(f"{alpha} is not a root of this group")
        return self._pattern_matrix(self._root_patterns[alpha])

    def integral_root_pattern(self, alpha) -> Mat:
        """e_alpha as an integer matrix (entries -1, 0, 1) before
        reduction mod p; the Chevalley signs matter to callers that lift
        one p-adic digit up."""
        alpha = tuple(alpha)
        if alpha not in self._root_patterns:
            raise ValueError(f"{alpha} is not a root of this group")
        out = [[0] * self.N for _ in range(self.N)]
        for (i, j), c in self._root_patterns[alpha].items():
            out[i][j] = c
        return out

    def integral_torus_pattern(self, index: int) -> Mat:
        """The index-th torus basis direction as an integer matrix."""
        out = [[0] * self.N for _ in range(self.N)]
        for (i, j), c in self._torus_patterns[index].items():
            out[i][j] = c
        return out

    def coroot_matrix(self, alpha) -> Mat:
        """h_alpha = d(alpha^vee)(1) as a diagonal Lie element (for PGL,
        a representative modulo scalars)."""
        alpha = tuple(alpha)
        coroot = self.datum.coroot(alpha)
        F = self.field
        out = linalg.zeros(self.N, self.N)
        if self.family in ("Sp", "SO"):
            n = self.torus_rank
            for i, c in enumerate(coroot):
                cc = c % F.p
                out[i][i] = cc
                out[self.N - 1 - i][self.N - 1 - i] = (-c) % F.p
        else:
            for i, c in enumerate(coroot):
                out[i][i] = c % F.p
        return out

    def weight_of_entry(self, i: int, j: int) -> tuple[int, ...]:
        """T-weight of the (i, j) matrix entry under conjugation.  For
        type A groups distinct entry weights stay distinct as characters
        of the constrained torus, so no normalization is needed."""
        return tuple(
            a - b for a, b in zip(self.diag_exponents[i], self.diag_exponents[j])
        )


@lru_cache(maxsize=None)
def build_group(family: str, n: int, q: int) -> MatrixGroup:
    """Build a supported classical group over F_q.

    family "Sp": rank n, ambient 2n.  family "SO": ambient n (odd).
    family "SL"/"PGL": ambient n.
    """
    field = field_from_q(q)
    if field.p not in (2, 3, 5):
        raise ValueError("supported characteristics are 2, 3, 5")
    if family == "Sp" and not 1 <= n <= 3:
        raise ValueError("Sp supported for rank 1..3")
    if family == "SO" and n not in (3, 5, 7):
        raise ValueError("SO supported for ambient dimension 3, 5, 7")
    if family in ("SL", "PGL") and not 2 <= n <= 4:
        raise ValueError(f"{family} supported for ambient dimension 2..4")
    return MatrixGroup(family, n, field)


# -- dual elements -----------------------------------------------------

class DualElement:
    """A functional on the Lie algebra, stored as a trace-pairing
    representative matrix.  Equality and hashing go through the canonical
    representative, so orbit enumeration can use sets."""

    __slots__ = ("group", "rep", "canon")

    def __init__(self, group: MatrixGroup, rep: Mat) -> None:
        if len(rep) != group.N or any(len(r) != group.N for r in rep):
            raise ValueError("dimension mismatch")
        if group.is_quotient and linalg.trace(group.field, rep) != 0:
            raise ValueError(
                "dual representatives must vanish on scalars for a quotient group"
            )
        self.group = group
        self.rep = [row[:] for row in rep]
        self.canon = group.canonical_dual_rep(rep)

    def value(self, x: Mat) -> int:
        # Tr(rep . x) without building the product matrix; certificate
        # sweeps call this in tight loops
        F = self.group.field
        total = 0
        for i, row in enumerate(self.rep):
            for j, a in enumerate(row):
                if a:
                    total = F.add(total, F.mul(a, x[j][i]))
        return total

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.canon for v in row)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, DualElement)
            and self.group is other.group
            and self.canon == other.canon
        )

    def __hash__(self) -> int:
        return hash(self.canon)

    def __repr__(self) -> str:  # pragma: no cover
        return f"DualElement({self.canon})"


def dual_from_values(
    group: MatrixGroup, assignments: list[tuple[Mat, int]]
) -> DualElement:
    """A functional with prescribed values on given Lie elements, zero on
    the rest of the Lie basis when underdetermined is not requested; the
    assignments must cover a spanning list.  Solved exactly."""
    F = group.field
    N = group.N
    rows = []
    rhs = []
    for x, val in assignments:
        rows.append([x[b][a] for a in range(N) for b in range(N)])
        rhs.append(val)
    if group.is_quotient:
        rows.append([1 if a == b else 0 for a in range(N) for b in range(N)])
        rhs.append(0)
    sol = linalg.solve(F, rows, rhs)
    if sol is None:
        raise ValueError("inconsistent functional assignments")
    return DualElement(group, group._unflatten(sol))


def zero_functional(group: MatrixGroup) -> DualElement:
    return DualElement(group, linalg.zeros(group.N, group.N))


# -- actions -----------------------------------------------------------

def adjoint(group: MatrixGroup, g: Mat, x: Mat) -> Mat:
    F = group.field
    return linalg.mat_mul(
        F, linalg.mat_mul(F, g, x), linalg.inverse(F, g)
    )


def coadjoint(group: MatrixGroup, g: Mat, x: DualElement) -> DualElement:
    return DualElement(group, adjoint(group, g, x.rep))


def act(group: MatrixGroup, g: Mat, x):
    """Ad(g) on Lie elements, Ad*(g) on dual elements."""
    if isinstance(x, DualElement):
        return coadjoint(group, g, x)
    return adjoint(group, g, x)


def bracket(field: Field, x: Mat, y: Mat) -> Mat:
    return linalg.mat_sub(
        field, linalg.mat_mul(field, x, y), linalg.mat_mul(field, y, x)
    )


def root_element(group: MatrixGroup, alpha, t: int) -> Mat:
    """u_alpha(t).  For the short roots of the odd orthogonal group the
    one-parameter subgroup carries a divided-power t^2 term; everywhere
    else the root vector squares to zero and I + t e_alpha is exact."""
    F = group.field
    alpha = tuple(alpha)
    e = group.root_vector(alpha)
    out = linalg.mat_add(
        F, linalg.identity(group.N), linalg.mat_scale(F, t, e)
    )
    if alpha in group._sqrt_roots:
        # the short orthogonal root subgroups carry a divided-power term
        # at the corner entry pairing the two isotropic lines
        i = [k for k, c in enumerate(alpha) if c][0]
        t2 = F.mul(t, t)
        if alpha[i] > 0:
            out[i][group.N - 1 - i] = F.add(out[i][group.N - 1 - i], t2)
        else:
            out[group.N - 1 - i][i] = F.add(out[group.N - 1 - i][i], t2)
    return out


def weight_decompose(group: MatrixGroup, x) -> dict:
    """Split into T-weight components.  Lie elements are decomposed
    as matrices; dual elements are decomposed through their canonical
    representative re-expressed in the weight-graded complement of
    g_perp, so components are again functionals (weight mu components
    are supported on the -mu root space)."""
    F = group.field
    if isinstance(x, DualElement):
        rep = _weight_graded_rep(group, x)
        is_dual = True
    else:
        rep = x
        is_dual = False
    comps: dict[tuple, Mat] = {}
    for i in range(group.N):
        for j in range(group.N):
            if rep[i][j] == 0:
                continue
            w = group.weight_of_entry(i, j)
            if w not in comps:
                comps[w] = linalg.zeros(group.N, group.N)
            comps[w][i][j] = rep[i][j]
    if is_dual:
        return {w: DualElement(group, m) for w, m in comps.items()}
    return comps


@lru_cache(maxsize=None)
def _graded_perp_echelon(group: MatrixGroup):
    """Echelon bases of the weight components of g_perp, in reversed
    flattened coordinates, keyed by weight."""
    F = group.field
    by_weight: dict[tuple, list[list[int]]] = {}
    for y in group.g_perp:
        for w, comp in weight_decompose(group, y).items():
            flat = list(reversed([v for row in comp for v in row]))
            by_weight.setdefault(w, []).append(flat)
    out = {}
    for w, rows in by_weight.items():
        red, pivots = linalg.rref(F, rows)
        out[w] = ([red[r] for r in range(len(pivots))], pivots)
    return out


def _weight_graded_rep(group: MatrixGroup, x: DualElement) -> Mat:
    """The representative of x inside the weight-graded complement of
    g_perp: reduce each weight component against that weight's slice of
    the annihilator."""
    F = group.field
    graded = _graded_perp_echelon(group)
    comps: dict[tuple, Mat] = {}
    for i in range(group.N):
        for j in range(group.N):
            if x.rep[i][j]:
                w = group.weight_of_entry(i, j)
                comps.setdefault(w, linalg.zeros(group.N, group.N))
                comps[w][i][j] = x.rep[i][j]
    out = linalg.zeros(group.N, group.N)
    for w, comp in comps.items():
        flat = list(reversed([v for row in comp for v in row]))
        if w in graded:
            ech, pivots = graded[w]
            for r, pc in enumerate(pivots):
                if flat[pc]:
                    c = flat[pc]
                    flat = [F.sub(a, F.mul(c, b)) for a, b in zip(flat, ech[r])]
        comp = group._unflatten(list(reversed(flat)))
        out = linalg.mat_add(F, out, comp)
    return out


# -- enumeration -------------------------------------------------------

def _generators(group: MatrixGroup) -> list[Mat]:
    gens = group.torus_elements()
    for alpha in group.datum.roots:
        for t in group.field.units():
            gens.append(root_element(group, alpha, t))
    return gens


def standard_generators(group: MatrixGroup) -> list[Mat]:
    """All torus points and all root elements; generates the rational
    point group (the order checks pin this down for every shipped
    family)."""
    return _generators(group)


def _enumerate_python(group: MatrixGroup, max_enum: int) -> list[Mat]:
    return subgroup_closure(group, _generators(group), max_enum)


def _enumerate_f4_numpy(group: MatrixGroup, max_enum: int) -> list[Mat]:
    """Generator-closure enumeration over GF(4) with numpy batch
    multiplication in bit-plane form.  Entries are pairs of GF(2)
    digits; visited elements are tracked as packed integer keys in a
    sorted array so the inner loops stay vectorized."""
    import numpy as np

    F = group.field
    N = group.N
    gens = _generators(group)

    def planes(mat: Mat) -> "np.ndarray":
        a = np.zeros((N, N, 2), dtype=np.uint8)
        for i in range(N):
            for j in range(N):
                d = F.digits(mat[i][j])
                a[i, j, 0] = d[0]
                a[i, j, 1] = d[1]
        return a

    gen_planes = [planes(g) for g in gens]
    powers = (1 << np.arange(2 * N * N, dtype=np.int64))

    def keys(batch: "np.ndarray") -> "np.ndarray":
        flat = batch.reshape(batch.shape[0], -1).astype(np.int64)
        return flat @ powers

    def mul(batch: "np.ndarray", g: "np.ndarray") -> "np.ndarray":
        a0 = batch[:, :, :, 0].astype(np.int16)
        a1 = batch[:, :, :, 1].astype(np.int16)
        b0 = g[:, :, 0].astype(np.int16)
        b1 = g[:, :, 1].astype(np.int16)
        c0 = (a0 @ b0 + a1 @ b1) % 2
        c1 = (a0 @ b1 + a1 @ b0 + a1 @ b1) % 2
        return np.stack([c0, c1], axis=-1).astype(np.uint8)

    ident = planes(linalg.identity(N))[None, :, :, :]
    visited_keys = keys(ident)
    chunks = [ident]
    frontier = ident
    while frontier.shape[0]:
        fresh_chunks = []
        for g in gen_planes:
            prod = mul(frontier, g)
            ks = keys(prod)
            uniq, first = np.unique(ks, return_index=True)
            prod = prod[first]
            pos = np.searchsorted(visited_keys, uniq)
            pos = np.clip(pos, 0, len(visited_keys) - 1)
            new_mask = visited_keys[pos] != uniq
            if not new_mask.any():
                continue
            prod = prod[new_mask]
            fresh_chunks.append(prod)
            visited_keys = np.sort(
                np.concatenate([visited_keys, uniq[new_mask]])
            )
            if len(visited_keys) > max_enum:
                raise BoundExceeded(f"enumeration bound exceeded ({max_enum})")
        if not fresh_chunks:
            break
        frontier = np.concatenate(fresh_chunks, axis=0)
        chunks.append(frontier)
    stacked = np.concatenate(chunks, axis=0)

    def unplanes(a: "np.ndarray") -> Mat:
        return [
            [F.from_digits([int(a[i, j, 0]), int(a[i, j, 1])])
             for j in range(N)]
            for i in range(N)
        ]

    return [unplanes(stacked[i]) for i in range(stacked.shape[0])]


def subgroup_closure(
    group: MatrixGroup, gens: list[Mat], max_enum: int = DEFAULT_MAX_ENUM
) -> list[Mat]:
    """Closure of a list of group points under multiplication, starting
    from the identity."""
    F = group.field
    start = group.canonical_point(linalg.identity(group.N))
    seen = {start}
    order = [start]
    frontier = [start]
    while frontier:
        nxt = []
        for gt in frontier:
            gm = [list(row) for row in gt]
            for h in gens:
                prod = group.canonical_point(linalg.mat_mul(F, gm, h))
                if prod not in seen:
                    seen.add(prod)
                    order.append(prod)
                    nxt.append(prod)
                    if len(order) > max_enum:
                        raise BoundExceeded(
                            f"enumeration bound exceeded ({max_enum})"
                        )
        frontier = nxt
    return [[list(row) for row in gt] for gt in order]


def enumerate_points(
    group: MatrixGroup, max_enum: int = DEFAULT_MAX_ENUM
) -> list[Mat]:
    """All F_q-points, by generator closure from the torus and the root
    elements.  Cached on the group after the first call."""
    if group._points is not None:
        return group._points
    if group.field.q == 4 and group.N >= 4:
        pts = _enumerate_f4_numpy(group, max_enum)
    else:
        pts = _enumerate_python(group, max_enum)
    group._points = pts
    return pts


def group_order(group: MatrixGroup, max_enum: int = DEFAULT_MAX_ENUM) -> int:
    return len(enumerate_points(group, max_enum))


# -- centralizers ------------------------------------------------------

def lie_centralizer(group: MatrixGroup, x) -> list[Mat]:
    """Basis of {Y in g : ad*(Y) x = 0} for a dual element (the Lie
    algebra of the schematic centralizer at our desk scale), or of
    {Y in g : [Y, x] = 0 (mod scalars for a quotient)} for a Lie element.
    """
    F = group.field
    if isinstance(x, DualElement):
        # condition on Y = sum c_i B_i: x([B_i, B_j]) c_i = 0 for all j
        rows = [
            [x.value(bracket(F, bi, bj)) for _, bi in group.lie_basis]
            for _, bj in group.lie_basis
        ]
        ker = linalg.kernel(F, rows)
        return [group.lie_from_coords(v) for v in ker]
    cols = [
        [v for row in bracket(F, bi, x) for v in row]
        for _, bi in group.lie_basis
    ]
    if group.is_quotient:
        cols.append([v for row in linalg.identity(group.N) for v in row])
    ker = linalg.kernel(F, linalg.transpose(cols))
    return [group.lie_from_coords(v[: group.dim]) for v in ker]


def point_centralizer(
    group: MatrixGroup, x, max_enum: int = DEFAULT_MAX_ENUM
) -> list[Mat]:
    out = []
    for g in enumerate_points(group, max_enum):
        gx = act(group, g, x)
        if isinstance(x, DualElement):
            if gx == x:
                out.append(g)
        elif group.lie_equal(gx, x):
            out.append(g)
    return out


def centralizer(
    group: MatrixGroup, x, max_enum: int = DEFAULT_MAX_ENUM
) -> tuple[list[Mat], list[Mat]]:
    """(group points fixing x, Lie-algebra centralizer basis)."""
    return point_centralizer(group, x, max_enum), lie_centralizer(group, x)


# -- Borel data --------------------------------------------------------

@dataclass(frozen=True)
class BorelData:
    torus_basis: tuple
    unipotent_basis: tuple
    basis: tuple
    positive: tuple


def borel(group: MatrixGroup, weyl_index: int = 0) -> BorelData:
    """Borel subalgebra data for the weyl_index-th translate of the
    standard positive system."""
    w, _ = rootdata.weyl_elements(group.datum)[weyl_index]
    pos = tuple(
        rootdata._mat_apply(w, r) for r in rootdata.positive_roots(group.datum)
    )
    t_basis = tuple(mat for (lbl, mat) in group.lie_basis if lbl[0] == "h")
    u_basis = tuple(group.root_vector(a) for a in pos)
    return BorelData(
        torus_basis=tuple(tuple(tuple(r) for r in m) for m in t_basis),
        unipotent_basis=tuple(tuple(tuple(r) for r in m) for m in u_basis),
        basis=tuple(
            tuple(tuple(r) for r in m) for m in list(t_basis) + list(u_basis)
        ),
        positive=pos,
    )


def _span_signature(group: MatrixGroup, mats: list[Mat]) -> tuple:
    F = group.field
    rows = [[v for row in m for v in row] for m in mats]
    if group.is_quotient:
        rows.append([1 if i == j else 0
                     for i in range(group.N) for j in range(group.N)])
    basis = linalg.span_basis(F, rows)
    return tuple(tuple(r) for r in basis)


def borel_conjugates(
    group: MatrixGroup, max_enum: int = DEFAULT_MAX_ENUM
) -> list[list[Mat]]:
    """All distinct conjugates of the standard Borel subalgebra under
    the F_q-points, deduplicated as subspaces."""
    F = group.field
    std = [list(map(list, m)) for m in borel(group).basis]
    seen = {}
    for g in enumerate_points(group, max_enum):
        conj = [adjoint(group, g, m) for m in std]
        sig = _span_signature(group, conj)
        if sig not in seen:
            seen[sig] = conj
    return list(seen.values())


def t_stable_complement(group: MatrixGroup, h_basis: list[Mat]) -> list[Mat]:
    """The sum of the root spaces of g not contained in a T-stable
    subalgebra h containing t.  Errors out if h is not T-stable."""
    F = group.field
    flat_h = [[v for row in m for v in row] for m in h_basis]
    if group.is_quotient:
        flat_h.append([1 if i == j else 0
                       for i in range(group.N) for j in range(group.N)])
    span, pivots = linalg.rref(F, flat_h)
    span = [span[r] for r in range(len(pivots))]

    def in_h(m: Mat) -> bool:
        return linalg.in_span(F, [v for row in m for v in row], span)

    for t_mat in (m for (lbl, m) in group.lie_basis if lbl[0] == "h"):
        if not in_h(t_mat):
            raise ValueError("subalgebra does not contain the torus")
    for m in h_basis:
        for comp in weight_decompose(group, m).values():
            if not in_h(comp):
                raise ValueError("subalgebra is not T-stable")
    out = []
    for alpha in group.datum.roots:
        e = group.root_vector(alpha)
        if not in_h(e):
            out.append(e)
    return out


# -- exhaustive spaces -------------------------------------------------

def lie_space_elements(group: MatrixGroup) -> list[Mat]:
    """Every element of g(F_q) (coset representatives for PGL)."""
    F = group.field
    out = []
    for coords in itertools.product(F.elements(), repeat=group.dim):
        out.append(group.lie_from_coords(list(coords)))
    return out


def dual_space_elements(group: MatrixGroup) -> list[DualElement]:
    """Every functional on g(F_q), as canonical representatives."""
    F = group.field
    N = group.N
    if group.is_quotient:
        # trace-zero representatives: free entries everywhere except one
        # diagonal position balancing the trace
        out = []
        positions = [(i, j) for i in range(N) for j in range(N)
                     if (i, j) != (N - 1, N - 1)]
        for vals in itertools.product(F.elements(), repeat=len(positions)):
            rep = linalg.zeros(N, N)
            tr = 0
            for (i, j), v in zip(positions, vals):
                rep[i][j] = v
                if i == j:
                    tr = F.add(tr, v)
            rep[N - 1][N - 1] = F.neg(tr)
            out.append(DualElement(group, rep))
        return out
    pivots = set(group._perp_pivots)
    free_rev_positions = [
        k for k in range(N * N) if k not in pivots
    ]
    out = []
    for vals in itertools.product(F.elements(), repeat=len(free_rev_positions)):
        flat_rev = [0] * (N * N)
        for k, v in zip(free_rev_positions, vals):
            flat_rev[k] = v
        rep = group._unflatten(list(reversed(flat_rev)))
        out.append(DualElement(group, rep))
    return out
