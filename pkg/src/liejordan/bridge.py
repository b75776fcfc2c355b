"""The characteristic-2 passage between odd orthogonal and symplectic
groups, and the structures riding on it.

In characteristic 2 the polar form of a (2n+1)-dimensional quadratic
space has a 1-dimensional radical; dividing the radical out maps the
odd orthogonal group onto the symplectic group of the quotient space.
In the shipped matrix models the radical is the middle coordinate line,
so the quotient map simply deletes the middle row and column.  Built on
that map are:

  * the even orthogonal subalgebra inside the symplectic one (the image
    of the differential, cut out by an explicit vanishing condition),
  * the image of the dual differential inside the odd orthogonal dual,
    which canonically lifts even orthogonal functionals,
  * the half-trace bilinear form obtained by lifting matrices one
    2-adic digit up; it is symplectic-invariant and nondegenerate, so
    it converts dual-side questions back into matrix questions,
  * the square-root characteristic-polynomial invariants, and
  * the closure of the semisimple locus, both by the root-datum formula
    and by an independent orbit-span computation.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from . import fields, groups, linalg, poly, rootdata
from .groups import DEFAULT_MAX_ENUM, DualElement, MatrixGroup
from .linalg import Mat


def _freeze(mat: Mat) -> tuple:
    return tuple(tuple(row) for row in mat)


def _thaw(mat) -> Mat:
    return [list(row) for row in mat]


@dataclass(frozen=True, slots=True)
class IsogenyBridge:
    """The quotient-by-the-radical map and the bases hung off it.

    radical_index is the ambient coordinate spanning the radical of the
    polar form.  even_so_basis spans the even orthogonal subalgebra of
    the symplectic Lie algebra over the working field; even_so_ints are
    the same matrices with their integer Chevalley entries, which is
    what the half-trace form lifts.  dual_image_basis spans the image
    of the dual differential inside the odd orthogonal dual.
    """

    so_group: MatrixGroup
    sp_group: MatrixGroup
    radical_index: int
    even_so_basis: tuple
    even_so_ints: tuple
    dual_image_basis: tuple


def point_image(bridge: IsogenyBridge, g: Mat) -> Mat:
    """The quotient map on points: delete the radical row and column."""
    m = bridge.radical_index
    return [
        [v for j, v in enumerate(row) if j != m]
        for i, row in enumerate(g)
        if i != m
    ]


def differential(bridge: IsogenyBridge, x: Mat) -> Mat:
    """The induced Lie algebra map; same deletion as on points."""
    return point_image(bridge, x)


def dual_differential(bridge: IsogenyBridge, xi: DualElement) -> DualElement:
    """Pull a symplectic functional back to an odd orthogonal one."""
    if xi.group is not bridge.sp_group:
        raise ValueError("functional does not live on the symplectic side")
    big = linalg.zeros(bridge.so_group.N, bridge.so_group.N)
    amb = _ambient_indices(bridge)
    for a, i in enumerate(amb):
        for b, j in enumerate(amb):
            big[i][j] = xi.rep[a][b]
    return DualElement(bridge.so_group, big)


def _ambient_indices(bridge: IsogenyBridge) -> list[int]:
    return [i for i in range(bridge.so_group.N) if i != bridge.radical_index]


def embed_even(
    bridge: IsogenyBridge, x: Mat, shifts: tuple[int, ...] | None = None
) -> Mat:
    """Embed an even orthogonal matrix into the odd orthogonal Lie
    algebra through a complement of the radical line.

    The default complement is the span of the non-radical coordinates.
    `shifts` tilts it: coordinate j of the complement becomes
    e_j + shifts[j] * e_radical.  The composition with `differential`
    is the identity for every choice, which is the point.
    """
    F = bridge.so_group.field
    N = bridge.so_group.N
    m = bridge.radical_index
    amb = _ambient_indices(bridge)
    big = linalg.zeros(N, N)
    for a, i in enumerate(amb):
        for b, j in enumerate(amb):
            big[i][j] = x[a][b]
    if shifts is None:
        return big
    basis_change = linalg.identity(N)
    for a, i in enumerate(amb):
        basis_change[m][i] = shifts[a]
    return linalg.mat_mul(
        F,
        linalg.mat_mul(F, basis_change, big),
        linalg.inverse(F, basis_change),
    )


def _even_int_patterns(sp_group: MatrixGroup) -> tuple[list, list[Mat]]:
    """Labels and integer matrices spanning the even orthogonal pattern:
    the torus directions plus the short-root vectors."""
    labels: list = []
    mats: list[Mat] = []
    for i in range(sp_group.torus_rank):
        labels.append(("h", i))
        mats.append(sp_group.integral_torus_pattern(i))
    for alpha in sp_group.datum.roots:
        if rootdata.length_class(sp_group.datum, alpha) == "short":
            labels.append(("e", alpha))
            mats.append(sp_group.integral_root_pattern(alpha))
    return labels, mats


@lru_cache(maxsize=None)
def _dual_basis(group: MatrixGroup) -> tuple:
    """Functionals dual to the Lie basis, in Lie basis order."""
    out = []
    mats = [mat for _, mat in group.lie_basis]
    for k in range(len(mats)):
        assignments = [(mat, 1 if j == k else 0) for j, mat in enumerate(mats)]
        out.append(groups.dual_from_values(group, assignments))
    return tuple(out)


def _flat_canon(xi: DualElement) -> list[int]:
    return [v for row in xi.canon for v in row]


def _sum_field(F, values) -> int:
    total = 0
    for v in values:
        total = F.add(total, v)
    return total


def _vanishing_rows(group: MatrixGroup, x: Mat) -> list[int]:
    """Coefficients of the quadratic form v -> b(xv, v): the diagonal
    values b(x e_i, e_i) then the polarized off-diagonal ones."""
    F = group.field
    N = group.N
    gram = group.gram
    vals = []
    for i in range(N):
        vals.append(
            _sum_field(F, [F.mul(x[a][i], gram[a][i]) for a in range(N)])
        )
    for i in range(N):
        for j in range(i + 1, N):
            s = _sum_field(F, [F.mul(x[a][i], gram[a][j]) for a in range(N)])
            t = _sum_field(F, [F.mul(x[a][j], gram[a][i]) for a in range(N)])
            vals.append(F.add(s, t))
    return vals


def build_bridge(n: int, q: int) -> IsogenyBridge:
    """Construct and internally audit the bridge for SO_{2n+1} over F_q.

    Raises ValueError outside characteristic 2.  The audits cover the
    homomorphism property of the point map on generators, bijectivity on
    torus points, the exact vanishing-condition description of the even
    orthogonal subalgebra, and the section property of the embeddings;
    failures would mean the matrix models have drifted and raise
    RuntimeError.
    """
    F = groups.field_from_q(q)
    if F.p != 2:
        raise ValueError("the radical-line quotient exists only in characteristic 2")
    so_group = groups.build_group("SO", 2 * n + 1, q)
    sp_group = groups.build_group("Sp", n, q)
    labels, int_mats = _even_int_patterns(sp_group)
    even = [
        [[c % F.p if F.m == 1 else F.from_digits([c % F.p] + [0] * (F.m - 1))
          for c in row] for row in mat]
        for mat in int_mats
    ]
    bridge = IsogenyBridge(
        so_group=so_group,
        sp_group=sp_group,
        radical_index=so_group.mid,
        even_so_basis=tuple(_freeze(m) for m in even),
        even_so_ints=tuple(_freeze(m) for m in int_mats),
        dual_image_basis=_dual_image_basis(so_group),
    )
    _audit_bridge(bridge)
    return bridge


def _dual_image_basis(so_group: MatrixGroup) -> tuple:
    """The torus-fixed functionals plus the long-root weight
    functionals, in Lie basis order."""
    duals = _dual_basis(so_group)
    out = []
    for (label, _), xi in zip(so_group.lie_basis, duals):
        if label[0] == "h":
            out.append(xi)
        elif rootdata.length_class(so_group.datum, label[1]) == "long":
            out.append(xi)
    return tuple(out)


def _audit_bridge(bridge: IsogenyBridge) -> None:
    F = bridge.sp_group.field
    sp = bridge.sp_group
    so = bridge.so_group
    gens = groups.standard_generators(so)
    for g in gens:
        if not sp.is_group_point(point_image(bridge, g)):
            raise RuntimeError("point image left the symplectic group")
    for g in gens:
        for h in gens:
            lhs = point_image(bridge, linalg.mat_mul(F, g, h))
            rhs = linalg.mat_mul(
                F, point_image(bridge, g), point_image(bridge, h)
            )
            if lhs != rhs:
                raise RuntimeError("point image is not a homomorphism")
    seen = set()
    for params in itertools.product(F.units(), repeat=so.torus_rank):
        img = point_image(bridge, so.torus_matrix(params))
        if img != sp.torus_matrix(params):
            raise RuntimeError("torus images do not line up")
        seen.add(_freeze(img))
    if len(seen) != (F.q - 1) ** so.torus_rank:
        raise RuntimeError("torus image not bijective")
    # the even subalgebra is exactly the vanishing locus of v -> b(Xv, v);
    # kernel wants the map basis-coefficients -> condition values, so
    # transpose the per-basis-element condition rows
    basis_mats = [mat for _, mat in sp.lie_basis]
    rows = [_vanishing_rows(sp, m) for m in basis_mats]
    coeff_kernel = linalg.kernel(F, linalg.transpose(rows))
    cut = []
    for coords in coeff_kernel:
        acc = linalg.zeros(sp.N, sp.N)
        for c, m in zip(coords, basis_mats):
            acc = linalg.mat_add(F, acc, linalg.mat_scale(F, c, m))
        cut.append([v for row in acc for v in row])
    even_flat = [[v for row in m for v in row] for m in bridge.even_so_basis]
    if linalg.span_basis(F, cut) != linalg.span_basis(F, even_flat):
        raise RuntimeError("vanishing condition does not cut the even subalgebra")
    n = sp.torus_rank
    if len(bridge.even_so_basis) != n * (2 * n - 1):
        raise RuntimeError("even subalgebra has the wrong dimension")
    for mat in bridge.even_so_basis:
        lifted = embed_even(bridge, _thaw(mat))
        if not so.is_lie_element(lifted):
            raise RuntimeError("embedding left the odd orthogonal algebra")
        if differential(bridge, lifted) != _thaw(mat):
            raise RuntimeError("differential is not a retraction")
    pulled = [_flat_canon(dual_differential(bridge, xi)) for xi in _dual_basis(sp)]
    image_span = linalg.span_basis(F, pulled)
    stored_span = linalg.span_basis(
        F, [_flat_canon(xi) for xi in bridge.dual_image_basis]
    )
    if image_span != stored_span:
        raise RuntimeError("stored dual image basis does not span the image")
    if len(bridge.dual_image_basis) != len(bridge.even_so_basis):
        raise RuntimeError("dual image has the wrong dimension")


# -- the half-trace form ----------------------------------------------

def even_coordinates(bridge: IsogenyBridge, x: Mat) -> list[int]:
    """Coordinates of x in the even orthogonal basis.  Raises ValueError
    when x is outside the even subalgebra."""
    F = bridge.sp_group.field
    cols = [[v for row in m for v in row] for m in bridge.even_so_basis]
    target = [v for row in x for v in row]
    system = [[col[i] for col in cols] for i in range(len(target))]
    sol = linalg.solve(F, system, target)
    if sol is None:
        raise ValueError("matrix is not in the even orthogonal subalgebra")
    return sol


def lift_ring_for(bridge: IsogenyBridge) -> fields.LiftRing:
    F = bridge.sp_group.field
    return fields.lift_ring(F.p, F.m)


def integral_lift(
    bridge: IsogenyBridge, x: Mat, twist: tuple[int, ...] | None = None
) -> Mat:
    """A lift of x to the integral even orthogonal pattern, one 2-adic
    digit up.  The canonical lift takes digit-wise lifts of the basis
    coordinates; `twist` adds 2 * twist[k] to coordinate k, with twist
    entries read as lift-ring elements, which ranges over every lift
    supported on the pattern."""
    R = lift_ring_for(bridge)
    coords = even_coordinates(bridge, x)
    if twist is None:
        twist = (0,) * len(coords)
    N = bridge.sp_group.N
    out = [[0] * N for _ in range(N)]
    for c, extra, mat in zip(coords, twist, bridge.even_so_ints):
        coeff = R.add(R.lift(c), R.mul(2, extra % R.size))
        for i in range(N):
            for j in range(N):
                if mat[i][j]:
                    out[i][j] = R.add(
                        out[i][j], R.mul(coeff, _int_in_ring(R, mat[i][j]))
                    )
    return out


def _int_in_ring(R: fields.LiftRing, value: int) -> int:
    """A plain integer as a lift-ring element (first digit only)."""
    return value % 4


def bprime_from_lifts(bridge: IsogenyBridge, xl: Mat, yl: Mat) -> int:
    """Half the trace of the product of two integral lifts, reduced to
    the working field.  Traces of pattern lifts are always divisible by
    2; anything else means the lift left the pattern and raises."""
    R = lift_ring_for(bridge)
    N = bridge.sp_group.N
    tr = 0
    for i in range(N):
        for j in range(N):
            tr = R.add(tr, R.mul(xl[i][j], yl[j][i]))
    return R.halve(tr)


def bprime(bridge: IsogenyBridge, x: Mat, y: Mat) -> int:
    """The half-trace bilinear form on the even orthogonal subalgebra."""
    return bprime_from_lifts(
        bridge, integral_lift(bridge, x), integral_lift(bridge, y)
    )


def gram_matrix(bridge: IsogenyBridge) -> Mat:
    """Gram matrix of the half-trace form on the even basis."""
    mats = [_thaw(m) for m in bridge.even_so_basis]
    return [[bprime(bridge, a, b) for b in mats] for a in mats]


def duality_values(bridge: IsogenyBridge, x: Mat) -> tuple:
    """x paired against the even basis: the functional B'(x, .) in
    values-on-the-basis form."""
    return tuple(bprime(bridge, x, _thaw(b)) for b in bridge.even_so_basis)


def duality_preimage(bridge: IsogenyBridge, values) -> Mat:
    """The even orthogonal matrix whose half-trace pairing realizes the
    given values on the basis; inverts `duality_values`."""
    F = bridge.sp_group.field
    gram = gram_matrix(bridge)
    coords = linalg.solve(F, linalg.transpose(gram), list(values))
    if coords is None:
        raise ValueError("values outside the image of the half-trace pairing")
    acc = linalg.zeros(bridge.sp_group.N, bridge.sp_group.N)
    for c, m in zip(coords, bridge.even_so_basis):
        acc = linalg.mat_add(F, acc, linalg.mat_scale(F, c, _thaw(m)))
    return acc


# -- dual restrictions and the canonical lift -------------------------

def sp_dual_restriction(bridge: IsogenyBridge, xi: DualElement) -> tuple:
    """Restrict a symplectic functional to the even subalgebra:
    the quotient map to even orthogonal functionals, in values form."""
    if xi.group is not bridge.sp_group:
        raise ValueError("functional does not live on the symplectic side")
    return tuple(xi.value(_thaw(m)) for m in bridge.even_so_basis)


def so_dual_restriction(bridge: IsogenyBridge, xi: DualElement) -> tuple:
    """Restrict an odd orthogonal functional through the standard
    complement embedding, in values form."""
    if xi.group is not bridge.so_group:
        raise ValueError("functional does not live on the orthogonal side")
    return tuple(
        xi.value(embed_even(bridge, _thaw(m))) for m in bridge.even_so_basis
    )


def canonical_so_dual_lift(bridge: IsogenyBridge, values) -> DualElement:
    """The unique functional in the dual-differential image restricting
    to the given even orthogonal functional."""
    F = bridge.so_group.field
    cols = [
        so_dual_restriction(bridge, xi) for xi in bridge.dual_image_basis
    ]
    system = [[col[i] for col in cols] for i in range(len(cols[0]))]
    coords = linalg.solve(F, system, list(values))
    if coords is None:
        raise ValueError("no lift in the dual image")
    acc = linalg.zeros(bridge.so_group.N, bridge.so_group.N)
    for c, xi in zip(coords, bridge.dual_image_basis):
        acc = linalg.mat_add(F, acc, linalg.mat_scale(F, c, xi.rep))
    return DualElement(bridge.so_group, acc)


def in_dual_image(bridge: IsogenyBridge, xi: DualElement) -> bool:
    """Whether a functional lies in the image of the dual differential."""
    F = bridge.so_group.field
    span = [_flat_canon(b) for b in bridge.dual_image_basis]
    return linalg.in_span(F, _flat_canon(xi), span)


# -- square-root characteristic polynomial invariants -----------------

def a_invariants(bridge: IsogenyBridge, x: Mat) -> tuple:
    """Coefficients (a_0, ..., a_n) with charpoly(x) = (sum a_i t^i)^2.

    Defined on the even orthogonal subalgebra, where the characteristic
    polynomial is always a perfect square; a non-square input raises,
    which doubles as the squareness probe for arbitrary matrices.
    """
    F = bridge.sp_group.field
    cp = linalg.charpoly(F, x)
    root = poly.poly_sqrt_char2(F, cp)
    n = bridge.sp_group.torus_rank
    return tuple(root[i] if i < len(root) else 0 for i in range(n + 1))


# -- the semisimple-locus closure -------------------------------------

def _zero_in_quotient_mod_p(vec, p: int) -> bool:
    """Whether vec vanishes in (Z^N / all-ones) tensor F_p, meaning it
    is congruent mod p to a multiple of the all-ones vector."""
    residues = {c % p for c in vec}
    return len(residues) == 1


def _zero_in_sublattice_mod_p(vec, p: int) -> bool:
    """Whether vec vanishes in (zero-sum sublattice) tensor F_p; since
    dividing by p preserves a zero coordinate sum, this is the plain
    componentwise test."""
    return all(c % p == 0 for c in vec)


def _closure_vanishing_sets(group: MatrixGroup) -> tuple[set, set]:
    """({alpha : h_alpha = 0 mod p}, {alpha : d(alpha) = 0 mod p}) in
    the character and cocharacter lattices of the group's own torus.

    The epsilon-coordinate datum shared by SL_N and PGL_N overstates
    both lattices: SL_N characters live in the quotient of Z^N by the
    all-ones vector while its cocharacters are the zero-sum sublattice,
    and PGL_N swaps the two.  For every other shipped family the datum
    coordinates are already the honest lattices.
    """
    p = group.field.p
    d = group.datum
    if d.family != "GL":
        return rootdata.vanishing_sets(d, p)
    if group.family == "SL":
        d_zero = {r for r in d.roots if _zero_in_quotient_mod_p(r, p)}
        h_zero = {r for r in d.roots if _zero_in_sublattice_mod_p(r, p)}
    else:
        d_zero = {r for r in d.roots if _zero_in_sublattice_mod_p(r, p)}
        h_zero = {r for r in d.roots if _zero_in_quotient_mod_p(r, p)}
    return h_zero, d_zero


def semisimple_closure_subspace(group: MatrixGroup, side: str) -> list:
    """Basis of the closure of the semisimple locus, from the root-datum
    formula: the torus(-fixed) part plus the root (or weight) spaces
    whose defining datum vector survives reduction mod p.

    side "g" keeps roots whose differential is nonzero mod p and returns
    Lie matrices; side "gdual" keeps roots whose coroot is nonzero mod p
    and returns functionals.
    """
    h_zero, d_zero = _closure_vanishing_sets(group)
    if side == "g":
        out = [
            linalg.copy(mat)
            for (label, mat) in group.lie_basis
            if label[0] == "h"
        ]
        for label, mat in group.lie_basis:
            if label[0] == "e" and label[1] not in d_zero:
                out.append(linalg.copy(mat))
        return out
    if side == "gdual":
        duals = _dual_basis(group)
        out = []
        for (label, _), xi in zip(group.lie_basis, duals):
            if label[0] == "h":
                out.append(xi)
            elif label[1] not in h_zero:
                out.append(xi)
        return out
    raise ValueError("side must be 'g' or 'gdual'")


def semisimple_closure_oracle(
    group: MatrixGroup, side: str, max_enum: int = DEFAULT_MAX_ENUM
) -> list:
    """The span of the full point-group orbit of the torus(-fixed)
    basis, the independent check on the formula subspace.

    The orbit of each seed is saturated under the standard generators,
    which generate every rational point, so the union of the saturated
    orbits is exactly the action of the whole point group on the seeds;
    the span of that union is the span of Ad(G(F_q)) applied to the
    seed space.  Orbits larger than max_enum raise BoundExceeded.
    """
    F = group.field
    gens = groups.standard_generators(group)
    if side == "g":
        seeds = [mat for (label, mat) in group.lie_basis if label[0] == "h"]

        def coords_of(x):
            c = group.lie_coords(x)
            if c is None:
                raise RuntimeError("orbit left the Lie algebra")
            return tuple(c)

    elif side == "gdual":
        duals = _dual_basis(group)
        seeds = [
            xi for (label, _), xi in zip(group.lie_basis, duals)
            if label[0] == "h"
        ]

        def coords_of(x):
            return tuple(_flat_canon(x))

    else:
        raise ValueError("side must be 'g' or 'gdual'")
    span_rows: list[list[int]] = []
    basis_out: list = []
    seen: set = set()
    frontier = list(seeds)
    for s in seeds:
        seen.add(coords_of(s))
    while frontier:
        fresh = []
        for x in frontier:
            for g in gens:
                y = groups.act(group, g, x)
                key = coords_of(y)
                if key in seen:
                    continue
                seen.add(key)
                if len(seen) > max_enum:
                    raise groups.BoundExceeded(
                        "orbit saturation exceeded max_enum"
                    )
                fresh.append(y)
        frontier = fresh
    for key in sorted(seen):
        vec = list(key)
        if linalg.in_span(F, vec, span_rows):
            continue
        span_rows.append(vec)
        if side == "g":
            basis_out.append(group.lie_from_coords(vec))
        else:
            basis_out.append(
                DualElement(group, group._unflatten(vec))
            )
    return basis_out
