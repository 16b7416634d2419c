"""Exact integer and rational linear algebra.

Everything here works on arbitrary-precision Python integers (and
``fractions.Fraction`` where a rational intermediate is unavoidable). There is
no floating-point path. Zero-dimensional matrices (0x0, 0xk, kx0) are ordinary
values; the 0x0 matrix is the identity on the rank-0 lattice.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb
from typing import Iterable, Sequence


class LinalgError(ValueError):
    """Raised on malformed input to an exact linear algebra routine."""


@dataclass(frozen=True)
class IntMatrix:
    """Integer matrix stored row-major as a flat tuple.

    Use :meth:`from_rows` to build one from nested lists. Instances are
    immutable and hashable, so they can be used as dict keys and compared
    with ``==``.
    """

    rows: int
    cols: int
    entries: tuple[int, ...]

    def __post_init__(self):
        if self.rows < 0 or self.cols < 0:
            raise LinalgError("matrix dimensions must be nonnegative")
        if len(self.entries) != self.rows * self.cols:
            raise LinalgError(
                f"expected {self.rows * self.cols} entries, got {len(self.entries)}"
            )

    # -- construction -----------------------------------------------------

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], cols: int | None = None) -> "IntMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        for r in rows:
            if len(r) != cols:
                raise LinalgError("ragged rows")
        flat = []
        for r in rows:
            for x in r:
                if isinstance(x, bool) or not isinstance(x, int):
                    if isinstance(x, Fraction) and x.denominator == 1:
                        x = x.numerator
                    else:
                        raise LinalgError(f"non-integer entry {x!r}")
                flat.append(int(x))
        return cls(len(rows), cols, tuple(flat))

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(n, n, tuple(int(i == j) for i in range(n) for j in range(n)))

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "IntMatrix":
        return cls(rows, cols, (0,) * (rows * cols))

    @classmethod
    def diagonal(cls, values: Sequence[int]) -> "IntMatrix":
        n = len(values)
        return cls(n, n, tuple(values[i] if i == j else 0 for i in range(n) for j in range(n)))

    @classmethod
    def block_diagonal(cls, blocks: Iterable["IntMatrix"]) -> "IntMatrix":
        blocks = list(blocks)
        n = sum(b.rows for b in blocks)
        k = sum(b.cols for b in blocks)
        out = [[0] * k for _ in range(n)]
        r0 = c0 = 0
        for b in blocks:
            for i, row in enumerate(b.to_rows()):
                out[r0 + i][c0:c0 + b.cols] = row
            r0 += b.rows
            c0 += b.cols
        return cls.from_rows(out, cols=k)

    # -- access -----------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    @property
    def is_square(self) -> bool:
        return self.rows == self.cols

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        if not (0 <= i < self.rows and 0 <= j < self.cols):
            raise IndexError(ij)
        return self.entries[i * self.cols + j]

    def to_rows(self) -> list[list[int]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def column(self, j: int) -> list[int]:
        return [self.entries[i * self.cols + j] for i in range(self.rows)]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "IntMatrix":
        c = self.cols
        e = self.entries
        return IntMatrix(len(rows), len(cols), tuple(e[i * c + j] for i in rows for j in cols))

    def columns(self, cols: Sequence[int]) -> "IntMatrix":
        return self.submatrix(range(self.rows), cols)

    def row_block(self, rows: Sequence[int]) -> "IntMatrix":
        return self.submatrix(rows, range(self.cols))

    # -- arithmetic -------------------------------------------------------

    @property
    def T(self) -> "IntMatrix":
        r, c = self.rows, self.cols
        e = self.entries
        return IntMatrix(c, r, tuple(e[i * c + j] for j in range(c) for i in range(r)))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self.cols != other.rows:
            raise LinalgError(f"shape mismatch {self.shape} @ {other.shape}")
        return IntMatrix.from_rows(_mul(self.to_rows(), other.to_rows(), other.cols), cols=other.cols)

    def __add__(self, other: "IntMatrix") -> "IntMatrix":
        self._same_shape(other)
        return IntMatrix(self.rows, self.cols, tuple(a + b for a, b in zip(self.entries, other.entries)))

    def __sub__(self, other: "IntMatrix") -> "IntMatrix":
        self._same_shape(other)
        return IntMatrix(self.rows, self.cols, tuple(a - b for a, b in zip(self.entries, other.entries)))

    def __neg__(self) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(-a for a in self.entries))

    def scale(self, k: int) -> "IntMatrix":
        return IntMatrix(self.rows, self.cols, tuple(k * a for a in self.entries))

    def _same_shape(self, other):
        if self.shape != other.shape:
            raise LinalgError(f"shape mismatch {self.shape} vs {other.shape}")

    def is_zero(self) -> bool:
        return not any(self.entries)

    def is_identity(self) -> bool:
        return self.is_square and self == IntMatrix.identity(self.rows)

    def trace(self) -> int:
        _require_square(self)
        return sum(self.entries[i * self.cols + i] for i in range(self.rows))

    def det(self) -> int:
        _require_square(self)
        return _bareiss_det(self.to_rows())

    def __repr__(self) -> str:
        return f"IntMatrix({self.to_rows()!r})" if self.rows else f"IntMatrix.zeros({self.rows}, {self.cols})"


@dataclass(frozen=True)
class RatMatrix:
    """Rational matrix; entries are ``Fraction`` in lowest terms."""

    rows: int
    cols: int
    entries: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise LinalgError("entry count does not match shape")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RatMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        flat = tuple(Fraction(x) for r in rows for x in r)
        return cls(len(rows), cols, flat)

    @classmethod
    def from_int(cls, M: IntMatrix) -> "RatMatrix":
        return cls(M.rows, M.cols, tuple(Fraction(x) for x in M.entries))

    def to_rows(self) -> list[list[Fraction]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]


@dataclass(frozen=True)
class SnfDecomposition:
    """``U @ M @ V == D`` with ``U``, ``V`` unimodular and ``D`` in Smith form."""

    U: IntMatrix
    D: IntMatrix
    V: IntMatrix
    divisors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.divisors if d != 0)


# ---------------------------------------------------------------------------
# helpers on nested lists


def _mul(a: list[list[int]], b: list[list[int]], bcols: int) -> list[list[int]]:
    bt = list(zip(*b)) if b else [()] * bcols
    return [[sum(x * y for x, y in zip(row, col)) for col in bt] for row in a]


def _require_square(M: IntMatrix):
    if not M.is_square:
        raise LinalgError(f"square matrix required, got {M.rows}x{M.cols}")


def _bareiss_det(a: list[list[int]]) -> int:
    n = len(a)
    if n == 0:
        return 1
    a = [row[:] for row in a]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        akk = a[k][k]
        rk = a[k]
        for i in range(k + 1, n):
            ri = a[i]
            aik = ri[k]
            for j in range(k + 1, n):
                ri[j] = (ri[j] * akk - aik * rk[j]) // prev
        prev = akk
    return sign * a[n - 1][n - 1]


# ---------------------------------------------------------------------------
# operations


def matrix_power(M: IntMatrix, e: int) -> IntMatrix:
    """``M**e`` by repeated squaring; ``M**0`` is the identity."""
    _require_square(M)
    if e < 0:
        raise LinalgError("negative exponent")
    n = M.rows
    result = [[int(i == j) for j in range(n)] for i in range(n)]
    base = M.to_rows()
    while e:
        if e & 1:
            result = _mul(result, base, n)
        e >>= 1
        if e:
            base = _mul(base, base, n)
    return IntMatrix.from_rows(result, cols=n)


def multiplicative_order(M: IntMatrix, bound: int) -> int:
    """Smallest ``d >= 1`` with ``M**d == I``, searched among divisors of ``bound``.

    Raises:
        LinalgError: if no divisor of ``bound`` annihilates ``M - I``.
    """
    _require_square(M)
    if bound < 1:
        raise LinalgError("bound must be positive")
    for d in _divisors(bound):
        if matrix_power(M, d).is_identity():
            return d
    raise LinalgError(f"order does not divide m={bound}")


def _divisors(k: int) -> list[int]:
    return [d for d in range(1, k + 1) if k % d == 0]


def char_poly(M: IntMatrix) -> list[int]:
    """Coefficients ``c[0..n]`` of ``det(xI - M)``, lowest degree first.

    Uses Berkowitz's division-free recursion, so all intermediates stay
    integral.
    """
    _require_square(M)
    a = M.to_rows()
    n = len(a)
    # high-degree-first coefficient vector of the trailing principal block
    poly = [1]
    for k in range(n - 1, -1, -1):
        # block a[k:, k:] = [[akk, R], [C, S]] with S = a[k+1:, k+1:]
        akk = a[k][k]
        R = a[k][k + 1:]
        C = [a[i][k] for i in range(k + 1, n)]
        S = [row[k + 1:] for row in a[k + 1:]]
        size = n - k
        col = [1, -akk]
        v = C
        for _ in range(size - 1):
            col.append(-sum(r * x for r, x in zip(R, v)))
            v = [sum(s * x for s, x in zip(row, v)) for row in S]
        # Toeplitz (size+1) x size lower-triangular product with poly
        poly = [sum(col[i - j] * poly[j] for j in range(max(0, i - size), min(i, size - 1) + 1))
                for i in range(size + 1)]
    return poly[::-1]


def exterior_power(M: IntMatrix, s: int) -> IntMatrix:
    """The ``s``-th compound matrix of ``M``.

    Rows and columns are indexed by the size-``s`` subsets of ``range(n)`` in
    lexicographic order of their sorted tuples; each entry is the matching
    ``s x s`` minor.
    """
    _require_square(M)
    n = M.rows
    if not 0 <= s <= n:
        raise LinalgError(f"exterior degree {s} out of range 0..{n}")
    subsets = list(combinations(range(n), s))
    a = M.to_rows()
    out = [[_bareiss_det([[a[i][j] for j in J] for i in I]) for J in subsets] for I in subsets]
    return IntMatrix.from_rows(out, cols=len(subsets))


def elementary_symmetric(M: IntMatrix, s: int) -> int:
    """``e_s`` of the eigenvalues of ``M``, read off the characteristic polynomial."""
    _require_square(M)
    n = M.rows
    if not 0 <= s <= n:
        raise LinalgError(f"degree {s} out of range 0..{n}")
    return (-1) ** s * char_poly(M)[n - s]


def elementary_symmetric_all(M: IntMatrix) -> list[int]:
    """``[e_0, ..., e_n]`` of the eigenvalues of ``M`` from one char-poly call."""
    c = char_poly(M)
    n = M.rows
    return [(-1) ** s * c[n - s] for s in range(n + 1)]


def rational_rank(M: RatMatrix | IntMatrix) -> int:
    """Rank over Q by fraction-free elimination."""
    if isinstance(M, IntMatrix):
        rows = M.to_rows()
    else:
        rows = []
        for r in M.to_rows():
            den = 1
            for x in r:
                den = den * x.denominator // _gcd(den, x.denominator)
            rows.append([int(x * den) for x in r])
    return _bareiss_rank(rows)


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return abs(a)


def _bareiss_rank(a: list[list[int]]) -> int:
    a = [row[:] for row in a]
    nrows = len(a)
    ncols = len(a[0]) if a else 0
    rank = 0
    prev = 1
    for c in range(ncols):
        piv = next((i for i in range(rank, nrows) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][c]
        for i in range(rank + 1, nrows):
            ri = a[i]
            f = ri[c]
            rr = a[rank]
            for j in range(c + 1, ncols):
                ri[j] = (ri[j] * p - f * rr[j]) // prev
            ri[c] = 0
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def smith_normal_form(M: IntMatrix) -> SnfDecomposition:
    """Smith normal form with unimodular transforms.

    Pivoting takes the nonzero entry of smallest absolute value in the
    remaining block, ties broken by lowest row then lowest column, so the
    output is reproducible.
    """
    r, c = M.rows, M.cols
    a = M.to_rows()
    U = [[int(i == j) for j in range(r)] for i in range(r)]
    V = [[int(i == j) for j in range(c)] for i in range(c)]

    def swap_rows(i, j):
        a[i], a[j] = a[j], a[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in V:
            row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row dst += q * row src
        a[dst] = [x + q * y for x, y in zip(a[dst], a[src])]
        U[dst] = [x + q * y for x, y in zip(U[dst], U[src])]

    def add_col(dst, src, q):  # col dst += q * col src
        for row in a:
            row[dst] += q * row[src]
        for row in V:
            row[dst] += q * row[src]

    for k in range(min(r, c)):
        while True:
            best = None
            for i in range(k, r):
                row = a[i]
                for j in range(k, c):
                    x = row[j]
                    if x and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                break
            _, pi, pj = best
            if pi != k:
                swap_rows(pi, k)
            if pj != k:
                swap_cols(pj, k)
            p = a[k][k]
            dirty = False
            for i in range(k + 1, r):
                if a[i][k]:
                    add_row(i, k, -(a[i][k] // p))
                    dirty = dirty or a[i][k] != 0
            for j in range(k + 1, c):
                if a[k][j]:
                    add_col(j, k, -(a[k][j] // p))
                    dirty = dirty or a[k][j] != 0
            if dirty:
                continue
            bad = next(((i, j) for i in range(k + 1, r) for j in range(k + 1, c) if a[i][j] % p), None)
            if bad is None:
                break
            add_row(k, bad[0], 1)
        if a[k][k] < 0:
            a[k] = [-x for x in a[k]]
            U[k] = [-x for x in U[k]]
    D = IntMatrix.from_rows(a, cols=c)
    divisors = tuple(a[i][i] for i in range(min(r, c)))
    return SnfDecomposition(
        U=IntMatrix.from_rows(U, cols=r),
        D=D,
        V=IntMatrix.from_rows(V, cols=c),
        divisors=divisors,
    )


def inverse_unimodular(M: IntMatrix) -> IntMatrix:
    """Exact inverse of a matrix with determinant +-1."""
    _require_square(M)
    inv = rational_inverse(M)
    if any(x.denominator != 1 for row in inv for x in row):
        raise LinalgError("matrix is not unimodular")
    return IntMatrix.from_rows([[int(x) for x in row] for row in inv], cols=M.rows)


def rational_inverse(M: IntMatrix) -> list[list[Fraction]]:
    """Gauss-Jordan inverse over Q; raises on singular input."""
    n = M.rows
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)]
         for i, row in enumerate(M.to_rows())]
    for k in range(n):
        piv = next((i for i in range(k, n) if a[i][k] != 0), None)
        if piv is None:
            raise LinalgError("singular matrix")
        a[k], a[piv] = a[piv], a[k]
        p = a[k][k]
        a[k] = [x / p for x in a[k]]
        for i in range(n):
            if i != k and a[i][k] != 0:
                f = a[i][k]
                a[i] = [x - f * y for x, y in zip(a[i], a[k])]
    return [row[n:] for row in a]


def saturated_kernel(M: IntMatrix) -> IntMatrix:
    """Basis (as columns) of the integer kernel ``{x in Z^n : Mx = 0}``.

    The integer kernel is always a pure sublattice. The basis is read off the
    right Smith transform, so it extends to a basis of ``Z^n``.
    """
    snf = smith_normal_form(M)
    return snf.V.columns(range(snf.rank, M.cols))


def solve_sublattice(basis: IntMatrix, image: IntMatrix) -> IntMatrix:
    """Integer ``X`` with ``basis @ X == image``.

    ``basis`` must have independent columns spanning a lattice that contains
    every column of ``image``.
    """
    snf = smith_normal_form(basis)
    f = basis.cols
    if snf.rank != f:
        raise LinalgError("basis columns are dependent")
    # basis = U^-1 D V^-1, so basis X = Y  <=>  D (V^-1 X) = U Y
    UY = (snf.U @ image).to_rows()
    W = []
    for i in range(f):
        d = snf.divisors[i]
        row = []
        for x in UY[i]:
            if x % d:
                raise LinalgError("image leaves the sublattice")
            row.append(x // d)
        W.append(row)
    if any(x for row in UY[f:] for x in row):
        raise LinalgError("image leaves the sublattice")
    X = snf.V @ IntMatrix.from_rows(W, cols=image.cols)
    return X


def binomial(n: int, k: int) -> int:
    return comb(n, k) if 0 <= k <= n else 0
