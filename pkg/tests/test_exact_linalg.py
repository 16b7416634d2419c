from fractions import Fraction
from itertools import combinations, permutations
from math import comb, gcd

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from zn_ktheory.exact_linalg import (
    IntMatrix,
    LinalgError,
    RatMatrix,
    char_poly,
    elementary_symmetric,
    exterior_power,
    inverse_unimodular,
    matrix_power,
    multiplicative_order,
    rational_rank,
    saturated_kernel,
    smith_normal_form,
    solve_sublattice,
)
from zn_ktheory.families import finite_order_corpus

PHI3 = IntMatrix.from_rows([[0, -1], [1, -1]])


def int_matrices(max_rows=5, max_cols=5, square=False, lo=-6, hi=6):
    @st.composite
    def build(draw):
        r = draw(st.integers(0, max_rows))
        c = r if square else draw(st.integers(0, max_cols))
        vals = draw(st.lists(st.integers(lo, hi), min_size=r * c, max_size=r * c))
        return IntMatrix(r, c, tuple(vals))
    return build()


def leibniz_det(M: IntMatrix) -> int:
    n = M.rows
    total = 0
    for perm in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = sign
        for i in range(n):
            term *= M[i, perm[i]]
        total += term
    return total


def fraction_rank(M: IntMatrix) -> int:
    """Plain Gaussian elimination over Fraction, used as an independent check."""
    rows = [[Fraction(x) for x in r] for r in M.to_rows()]
    rank = 0
    for c in range(M.cols):
        piv = next((i for i in range(rank, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for i in range(len(rows)):
            if i != rank and rows[i][c] != 0:
                f = rows[i][c] / rows[rank][c]
                rows[i] = [a - f * b for a, b in zip(rows[i], rows[rank])]
        rank += 1
    return rank


# ---------------------------------------------------------------------------
# construction and arithmetic


def test_zero_dimensional_matrices_are_legal():
    E = IntMatrix.identity(0)
    assert E.shape == (0, 0) and E.is_identity()
    assert (E @ E).is_identity()
    assert IntMatrix.zeros(0, 3).shape == (0, 3)
    assert (IntMatrix.zeros(2, 0) @ IntMatrix.zeros(0, 3)).is_zero()
    assert E.det() == 1


def test_entries_length_checked():
    with pytest.raises(LinalgError):
        IntMatrix(2, 2, (1, 2, 3))


def test_matrix_power_examples():
    assert matrix_power(PHI3, 3).is_identity()
    assert matrix_power(IntMatrix.from_rows([[5, 3], [2, 7]]), 0).is_identity()
    assert matrix_power(IntMatrix.from_rows([[-1]]), 2) == IntMatrix.from_rows([[1]])


def test_matrix_power_rejects_non_square():
    with pytest.raises(LinalgError):
        matrix_power(IntMatrix.zeros(2, 3), 2)


def test_multiplicative_order_examples():
    assert multiplicative_order(IntMatrix.from_rows([[-1]]), 2) == 2
    assert multiplicative_order(PHI3, 6) == 3
    assert multiplicative_order(IntMatrix.identity(3), 30) == 1


def test_multiplicative_order_must_divide_bound():
    with pytest.raises(LinalgError, match="order does not divide"):
        multiplicative_order(PHI3, 2)


# ---------------------------------------------------------------------------
# characteristic polynomial and symmetric functions


def test_char_poly_examples():
    assert char_poly(PHI3) == [1, 1, 1]
    assert char_poly(IntMatrix.identity(4)) == [comb(4, k) * (-1) ** (4 - k) for k in range(5)]
    assert char_poly(IntMatrix.from_rows([[-1, 0], [0, -1]])) == [1, 2, 1]
    assert char_poly(IntMatrix.identity(0)) == [1]


def _poly_at_matrix(coeffs, M):
    acc = IntMatrix.zeros(M.rows, M.cols)
    for c in reversed(coeffs):
        acc = acc @ M + IntMatrix.identity(M.rows).scale(c)
    return acc


@settings(max_examples=150, deadline=None)
@given(int_matrices(max_rows=5, square=True))
def test_cayley_hamilton(M):
    assert _poly_at_matrix(char_poly(M), M).is_zero()


@settings(max_examples=100, deadline=None)
@given(int_matrices(max_rows=5, square=True))
def test_char_poly_constant_term_is_signed_determinant(M):
    c = char_poly(M)
    assert c[-1] == 1
    assert c[0] == (-1) ** M.rows * leibniz_det(M)
    if M.rows:
        assert c[-2] == -M.trace()


def test_exterior_power_examples():
    a, b, c, d = 3, -2, 5, 7
    M = IntMatrix.from_rows([[a, b], [c, d]])
    assert exterior_power(M, 2) == IntMatrix.from_rows([[a * d - b * c]])
    assert exterior_power(M, 1) == M
    assert exterior_power(IntMatrix.identity(3), 2).is_identity()
    assert exterior_power(M, 0) == IntMatrix.identity(1)


def test_exterior_power_out_of_range():
    with pytest.raises(LinalgError):
        exterior_power(PHI3, 3)


@settings(max_examples=60, deadline=None)
@given(int_matrices(max_rows=4, square=True), st.data())
def test_exterior_power_matches_minor_brute_force(M, data):
    s = data.draw(st.integers(0, M.rows))
    subsets = list(combinations(range(M.rows), s))
    P = exterior_power(M, s)
    for i, r in enumerate(subsets):
        for j, c in enumerate(subsets):
            minor = IntMatrix.from_rows([[M[x, y] for y in c] for x in r], cols=s)
            assert P[i, j] == leibniz_det(minor)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 5).flatmap(lambda n: st.tuples(
    st.lists(st.integers(-4, 4), min_size=n * n, max_size=n * n),
    st.lists(st.integers(-4, 4), min_size=n * n, max_size=n * n),
    st.just(n))))
def test_cauchy_binet(args):
    a, b, n = args
    M, N = IntMatrix(n, n, tuple(a)), IntMatrix(n, n, tuple(b))
    for s in range(n + 1):
        assert exterior_power(M @ N, s) == exterior_power(M, s) @ exterior_power(N, s)


def test_elementary_symmetric_examples():
    for n in range(5):
        for s in range(n + 1):
            assert elementary_symmetric(IntMatrix.identity(n), s) == comb(n, s)
    assert elementary_symmetric(PHI3, 1) == -1
    assert elementary_symmetric(IntMatrix.from_rows([[-1, 0], [0, -1]]), 2) == 1


@pytest.mark.parametrize("M,d", finite_order_corpus(40, seed=11))
def test_trace_of_exterior_power_is_elementary_symmetric(M, d):
    for t in range(1, d + 1):
        Mt = matrix_power(M, t)
        for s in range(M.rows + 1):
            assert exterior_power(Mt, s).trace() == elementary_symmetric(Mt, s)


# ---------------------------------------------------------------------------
# ranks and Smith normal form


def test_rational_rank_examples():
    assert rational_rank(IntMatrix.zeros(3, 4)) == 0
    assert rational_rank(IntMatrix.identity(5)) == 5
    assert rational_rank(IntMatrix.from_rows([[1, 1], [-1, 2]])) == 2
    half = RatMatrix.from_rows([[Fraction(1, 2), Fraction(1, 3)], [Fraction(3, 2), 1]])
    assert rational_rank(half) == 1


@settings(max_examples=150, deadline=None)
@given(int_matrices(max_rows=6, max_cols=6, lo=-3, hi=3))
def test_rational_rank_matches_fraction_elimination(M):
    assert rational_rank(M) == fraction_rank(M)


def test_rat_matrix_canonical_entries():
    R = RatMatrix.from_rows([[Fraction(4, -6)]])
    (x,), = R.to_rows()
    assert x.denominator > 0 and gcd(x.numerator, x.denominator) == 1


def test_snf_examples():
    assert smith_normal_form(IntMatrix.diagonal([2, 3])).divisors == (1, 6)
    assert smith_normal_form(IntMatrix.from_rows([[-1, 1], [1, -1]])).divisors == (1, 0)
    assert smith_normal_form(IntMatrix.identity(0)).divisors == ()


def _check_snf(M):
    snf = smith_normal_form(M)
    assert snf.U @ M @ snf.V == snf.D
    assert abs(snf.U.det()) == 1 and abs(snf.V.det()) == 1
    k = min(M.rows, M.cols)
    for i in range(M.rows):
        for j in range(M.cols):
            if i != j:
                assert snf.D[i, j] == 0
    divs = [snf.D[i, i] for i in range(k)]
    assert divs == list(snf.divisors)
    assert all(d >= 0 for d in divs)
    nz = [d for d in divs if d]
    assert divs == nz + [0] * (k - len(nz))
    assert all(b % a == 0 for a, b in zip(nz, nz[1:]))
    return snf


@settings(max_examples=200, deadline=None)
@given(int_matrices(max_rows=6, max_cols=6, lo=-20, hi=20))
def test_snf_contract(M):
    _check_snf(M)


@settings(max_examples=50, deadline=None)
@given(int_matrices(max_rows=4, max_cols=4, lo=-9, hi=9))
def test_snf_determinant_and_determinism(M):
    snf = _check_snf(M)
    assert smith_normal_form(M) == snf
    if M.is_square:
        prod = 1
        for d in snf.divisors:
            prod *= d
        assert prod == abs(leibniz_det(M))


def test_inverse_unimodular():
    M = IntMatrix.from_rows([[-26, -93], [7, 25]])
    assert (M @ inverse_unimodular(M)).is_identity()
    with pytest.raises(LinalgError):
        inverse_unimodular(IntMatrix.diagonal([2, 1]))


# ---------------------------------------------------------------------------
# saturation


def test_saturated_kernel_examples():
    swap = IntMatrix.from_rows([[0, 1], [1, 0]])
    K = saturated_kernel(swap - IntMatrix.identity(2))
    assert K.cols == 1 and abs(K[0, 0]) == 1 and K[0, 0] == K[1, 0]
    assert saturated_kernel(IntMatrix.from_rows([[2, 1], [1, 1]])).shape == (2, 0)
    Z = saturated_kernel(IntMatrix.zeros(3, 3))
    assert Z.cols == 3 and abs(Z.det()) == 1


@settings(max_examples=150, deadline=None)
@given(int_matrices(max_rows=5, max_cols=5, lo=-5, hi=5))
def test_saturated_kernel_properties(M):
    B = saturated_kernel(M)
    f = M.cols - rational_rank(M)
    assert B.shape == (M.cols, f)
    assert rational_rank(B) == f
    assert (M @ B).is_zero()
    assert all(d == 1 for d in smith_normal_form(B).divisors)


def test_saturation_is_needed():
    # ker [[2, -4]] over Q is spanned by (2, 1); the primitive generator has gcd 1
    B = saturated_kernel(IntMatrix.from_rows([[2, -4]]))
    assert gcd(B[0, 0], B[1, 0]) == 1


def test_solve_sublattice_round_trip():
    basis = IntMatrix.from_rows([[1, 0], [1, 1], [0, 2]])
    X = IntMatrix.from_rows([[3, -1], [2, 5]])
    assert solve_sublattice(basis, basis @ X) == X
    with pytest.raises(LinalgError):
        solve_sublattice(basis, IntMatrix.from_rows([[1], [0], [0]]))
