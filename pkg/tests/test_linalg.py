from __future__ import annotations

import random

import pytest

from liejordan import linalg
from liejordan.fields import GF

FIELDS = [(2, 1), (2, 2), (2, 4), (3, 1), (5, 1)]


def random_matrix(rng, F, rows, cols):
    return [[rng.randrange(F.q) for _ in range(cols)] for _ in range(rows)]


def test_kernel_of_zero_matrix_is_everything():
    F = GF(2)
    ker = linalg.kernel(F, linalg.zeros(2, 2))
    assert len(ker) == 2
    assert ker == [[1, 0], [0, 1]]


def test_span_membership_distinct_lines():
    F = GF(2)
    assert linalg.linsolve(F, [[1, 1]], mode="span-membership", v=[1, 0]) is False
    assert linalg.linsolve(F, [[1, 1]], mode="span-membership", v=[1, 1]) is True


def test_c2_pairing_matrix_kernel_matches_enumeration():
    # Cartan matrix of type C2 as the pairing <alpha_i, alpha_j^vee>,
    # reduced mod 2.  Oracle: enumerate the whole 2-dim lattice mod 2.
    F = GF(2)
    cartan = [[2 % 2, (-1) % 2], [(-2) % 2, 2 % 2]]
    ker = linalg.kernel(F, cartan)
    brute = [
        v
        for v in ([x, y] for x in range(2) for y in range(2))
        if all(c == 0 for c in linalg.mat_vec(F, cartan, v))
    ]
    # brute force includes the zero vector
    assert len(brute) == 2 ** len(ker)
    for v in ker:
        assert v in brute


@pytest.mark.parametrize("p,m", FIELDS)
def test_rank_nullity_on_random_matrices(p, m):
    F = GF(p, m)
    rng = random.Random(1000 * p + m)
    for _ in range(200):
        rows = rng.randrange(1, 6)
        cols = rng.randrange(1, 6)
        a = random_matrix(rng, F, rows, cols)
        assert linalg.rank(F, a) + len(linalg.kernel(F, a)) == cols
        for v in linalg.kernel(F, a):
            assert all(x == 0 for x in linalg.mat_vec(F, a, v))


def test_rref_is_reduced_and_deterministic():
    F = GF(5)
    a = [[2, 4, 1], [1, 2, 3], [3, 1, 4]]
    red, pivots = linalg.rref(F, a)
    red2, pivots2 = linalg.rref(F, a)
    assert (red, pivots) == (red2, pivots2)
    for r, pc in enumerate(pivots):
        assert red[r][pc] == 1
        for i in range(len(red)):
            if i != r:
                assert red[i][pc] == 0


@pytest.mark.parametrize("p,m", FIELDS)
def test_inverse_and_det(p, m):
    F = GF(p, m)
    rng = random.Random(7 * p + m)
    found = 0
    while found < 10:
        a = random_matrix(rng, F, 3, 3)
        if linalg.det(F, a) == 0:
            continue
        found += 1
        inv = linalg.inverse(F, a)
        assert linalg.mat_mul(F, a, inv) == linalg.identity(3)
        b = random_matrix(rng, F, 3, 3)
        assert linalg.det(F, linalg.mat_mul(F, a, b)) == F.mul(
            linalg.det(F, a), linalg.det(F, b)
        )


def test_det_singular():
    F = GF(2)
    assert linalg.det(F, [[1, 1], [1, 1]]) == 0
    with pytest.raises(ValueError):
        linalg.inverse(F, [[1, 1], [1, 1]])


def test_charpoly_of_diagonal_matrix():
    F = GF(5)
    # (x-1)(x-2) = x^2 - 3x + 2 = x^2 + 2x + 2 over F_5
    assert linalg.charpoly(F, [[1, 0], [0, 2]]) == [2, 2, 1]


def test_charpoly_of_companion_matrix():
    # companion matrix of f has charpoly f
    F = GF(2, 2)
    f = [3, 1, 2, 1]  # omega^2 + x + omega x^2 + x^3, coefficients low first
    n = 3
    comp = linalg.zeros(n, n)
    for i in range(1, n):
        comp[i][i - 1] = 1
    for i in range(n):
        comp[i][n - 1] = F.neg(f[i])
    assert linalg.charpoly(F, comp) == f


def test_charpoly_constant_term_is_det():
    F = GF(3)
    rng = random.Random(5)
    for _ in range(20):
        a = random_matrix(rng, F, 4, 4)
        cp = linalg.charpoly(F, a)
        d = linalg.det(F, a)
        assert cp[0] == d  # (-1)^4 det


def test_solve():
    F = GF(2)
    a = [[1, 1], [0, 1]]
    x = linalg.solve(F, a, [1, 1])
    assert x is not None
    assert linalg.mat_vec(F, a, x) == [1, 1]
    assert linalg.solve(F, [[1, 1], [1, 1]], [1, 0]) is None


def test_dimension_mismatch_errors():
    F = GF(2)
    with pytest.raises(ValueError, match="dimension mismatch"):
        linalg.mat_mul(F, [[1, 0]], [[1, 0]])
    with pytest.raises(ValueError, match="dimension mismatch"):
        linalg.mat_add(F, [[1]], [[1, 0]])


def test_text_format_roundtrip():
    F = GF(2, 2)
    a = [[0, 1], [2, 3]]
    text = linalg.format_matrix(F, a)
    assert text.splitlines()[0] == "2 2 2 2"
    F2, b = linalg.parse_matrix(text)
    assert F2 is F
    assert b == a


def test_text_format_prime_field():
    F = GF(5)
    a = [[4, 0, 3]]
    text = linalg.format_matrix(F, a)
    assert text == "5 1 1 3\n4 0 3\n"
    _, b = linalg.parse_matrix(text)
    assert b == a


def test_text_format_bad_inputs():
    with pytest.raises(ValueError):
        linalg.parse_matrix("")
    with pytest.raises(ValueError):
        linalg.parse_matrix("2 1 1\n0\n")
    with pytest.raises(ValueError, match="dimension mismatch"):
        linalg.parse_matrix("2 1 2 1\n0\n")
    with pytest.raises(ValueError, match="dimension mismatch"):
        linalg.parse_matrix("2 1 1 2\n0\n")


def test_span_basis_and_in_span():
    F = GF(2)
    vs = [[1, 1, 0], [0, 1, 1], [1, 0, 1]]
    basis = linalg.span_basis(F, vs)
    assert len(basis) == 2
    assert linalg.in_span(F, [1, 0, 1], basis)
    assert not linalg.in_span(F, [1, 0, 0], basis)
    assert linalg.in_span(F, [0, 0, 0], [])
