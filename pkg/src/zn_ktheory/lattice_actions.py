"""Cyclic actions on lattices and the finite abelian groups they produce.

An :class:`ActionSpec` is a unimodular integer matrix ``A`` whose order
divides a square-free ``m``; it encodes ``Z^n x| Z/m`` with the generator of
``Z/m`` acting by ``A``. :func:`prime_split` separates, for a prime ``p | m``,
the fixed lattice of the order-``p`` subgroup from the quotient lattice on
which that subgroup acts without nonzero fixed vectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import prod
from typing import Sequence

from .exact_linalg import (
    IntMatrix,
    LinalgError,
    inverse_unimodular,
    matrix_power,
    multiplicative_order,
    rational_rank,
    saturated_kernel,
    smith_normal_form,
)

E_SHAPE = "E_SHAPE"
E_MODULUS = "E_MODULUS"
E_SQUAREFREE = "E_SQUAREFREE"
E_UNIMODULAR = "E_UNIMODULAR"
E_ORDER = "E_ORDER"
E_PRIME = "E_PRIME"

FLAG_K_UNDEFINED = "k_l undefined for this split"
FLAG_DEGENERATE = "degenerate split"


class ActionValidationError(ValueError):
    """Invalid action datum. ``code`` is one of the ``E_*`` constants."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code
        self.message = message


class InternalConsistencyError(AssertionError):
    """A structural identity that must hold for every valid input failed."""


def prime_factors(m: int) -> list[int]:
    out = []
    q = 2
    while q * q <= m:
        while m % q == 0:
            out.append(q)
            m //= q
        q += 1
    if m > 1:
        out.append(m)
    return out


def is_prime(p: int) -> bool:
    return p >= 2 and prime_factors(p) == [p]


@dataclass(frozen=True)
class ActionSpec:
    n: int
    m: int
    primes: tuple[int, ...]
    A: IntMatrix
    name: str | None = None
    order: int = 1

    @property
    def matrix(self) -> list[list[int]]:
        return self.A.to_rows()

    def with_matrix(self, A: IntMatrix, name: str | None = None) -> "ActionSpec":
        return validate_action(self.n, self.m, A, name if name is not None else self.name)


def validate_action(n: int, m: int, matrix, name: str | None = None) -> ActionSpec:
    """Check an action datum and return it as an :class:`ActionSpec`.

    Raises:
        ActionValidationError: with code ``E_SHAPE``, ``E_MODULUS``,
            ``E_SQUAREFREE``, ``E_UNIMODULAR`` or ``E_ORDER``.
    """
    if isinstance(n, bool) or not isinstance(n, int) or n < 0:
        raise ActionValidationError(E_SHAPE, f"lattice rank must be a nonnegative integer, got {n!r}")
    if isinstance(m, bool) or not isinstance(m, int) or m < 2:
        raise ActionValidationError(E_MODULUS, f"group order must be an integer >= 2, got {m!r}")
    try:
        A = matrix if isinstance(matrix, IntMatrix) else IntMatrix.from_rows(matrix, cols=n)
    except LinalgError as exc:
        raise ActionValidationError(E_SHAPE, str(exc)) from None
    if A.shape != (n, n):
        raise ActionValidationError(E_SHAPE, f"matrix is {A.rows}x{A.cols}, expected {n}x{n}")
    factors = prime_factors(m)
    if len(set(factors)) != len(factors):
        raise ActionValidationError(E_SQUAREFREE, f"m not square-free: {m}")
    if abs(A.det()) != 1:
        raise ActionValidationError(E_UNIMODULAR, f"det(A) = {A.det()}, expected +-1")
    try:
        order = multiplicative_order(A, m)
    except LinalgError:
        raise ActionValidationError(E_ORDER, f"A^{m} != I (order does not divide m)") from None
    return ActionSpec(n=n, m=m, primes=tuple(factors), A=A, name=name, order=order)


@dataclass(frozen=True)
class PrimeSplit:
    """Decomposition ``0 -> F -> Z^n -> Z^l -> 0`` for the order-``p`` subgroup.

    ``basis`` is a unimodular matrix whose first ``n - l`` columns are
    ``F_basis``; in that basis ``A`` is block upper triangular with diagonal
    blocks ``A_on_F`` and ``A_quot``.
    """

    p: int
    m: int
    tau: IntMatrix
    F_basis: IntMatrix
    l: int
    A_on_F: IntMatrix
    A_quot: IntMatrix
    tau_quot: IntMatrix
    k_l: int | None
    k_l_value: Fraction | None
    free_outside_origin_at_p: bool
    basis: IntMatrix
    projection: IntMatrix
    flags: tuple[str, ...] = ()

    @property
    def fixed_rank(self) -> int:
        return self.F_basis.cols

    def pure_p_spec(self) -> ActionSpec:
        """``Z^l`` with ``Z/p`` acting by ``tau_quot``."""
        return validate_action(self.l, self.p, self.tau_quot, name=f"quotient at p={self.p}")


def prime_split(spec: ActionSpec, p: int) -> PrimeSplit:
    """Split ``Z^n`` along the fixed lattice of ``tau = A^(m/p)``.

    Every structural identity of the split is checked before returning;
    a failure raises :class:`InternalConsistencyError`.
    """
    if p not in spec.primes:
        raise ActionValidationError(E_PRIME, f"{p} is not a prime factor of m={spec.m}")
    n, m, A = spec.n, spec.m, spec.A
    tau = matrix_power(A, m // p)
    I = IntMatrix.identity(n)
    F = saturated_kernel(tau - I)
    f = F.cols
    l = n - f

    # complete F to a basis of Z^n: F = U^-1 [I_f; 0] V^-1
    snf = smith_normal_form(F)
    W = inverse_unimodular(snf.U)
    P = IntMatrix.from_rows(
        [F.to_rows()[i] + W.to_rows()[i][f:] for i in range(n)], cols=n
    )
    Pinv = inverse_unimodular(P)
    conj = Pinv @ A @ P
    rows = conj.to_rows()
    if any(rows[i][j] for i in range(f, n) for j in range(f)):
        raise InternalConsistencyError("fixed lattice is not A-invariant")
    A_on_F = conj.submatrix(range(f), range(f))
    A_quot = conj.submatrix(range(f, n), range(f, n))
    projection = Pinv.row_block(range(f, n))
    tau_quot = matrix_power(A_quot, m // p)

    if projection @ A != A_quot @ projection:
        raise InternalConsistencyError("projection does not intertwine A")
    if A @ F != F @ A_on_F:
        raise InternalConsistencyError("restriction of A to F is inconsistent")
    Il = IntMatrix.identity(l)
    if rational_rank(tau_quot - Il) != l:
        raise InternalConsistencyError("tau has a nonzero fixed vector on the quotient")
    norm = IntMatrix.zeros(l, l)
    power = Il
    for _ in range(p):
        norm = norm + power
        power = power @ tau_quot
    if not norm.is_zero():
        raise InternalConsistencyError("norm element of tau does not vanish on the quotient")

    flags = []
    k_l = None
    k_value = None
    if l % (p - 1) == 0:
        k_value = Fraction(p * (p ** (l // (p - 1)) - 1), m)
        classes = prod(coker_presentation(Il - tau_quot)[0].divisors)
        if classes != p ** (l // (p - 1)):
            raise InternalConsistencyError(
                f"|Z^l/(1-tau)Z^l| = {classes}, expected p^(l/(p-1)) = {p ** (l // (p - 1))}"
            )
        if k_value.denominator == 1:
            k_l = int(k_value)
        else:
            flags.append(f"{FLAG_K_UNDEFINED}: p(p^(l/(p-1))-1)/m = {k_value} is not an integer")
    else:
        flags.append(f"{FLAG_K_UNDEFINED}: (p-1) does not divide l={l}")
    if l == 0:
        flags.append(FLAG_DEGENERATE)

    return PrimeSplit(
        p=p,
        m=m,
        tau=tau,
        F_basis=F,
        l=l,
        A_on_F=A_on_F,
        A_quot=A_quot,
        tau_quot=tau_quot,
        k_l=k_l,
        k_l_value=k_value,
        free_outside_origin_at_p=(f == 0),
        basis=P,
        projection=projection,
        flags=tuple(flags),
    )


@dataclass(frozen=True)
class FiniteAbelianPresentation:
    """``Z/d_1 + ... + Z/d_k`` with ``d_1 | d_2 | ... | d_k`` and every ``d_i >= 2``."""

    divisors: tuple[int, ...] = ()

    def __post_init__(self):
        d = self.divisors
        if any(x < 2 for x in d):
            raise ValueError(f"elementary divisors must be >= 2: {d}")
        if any(d[i + 1] % d[i] for i in range(len(d) - 1)):
            raise ValueError(f"not a divisibility chain: {d}")

    @property
    def order(self) -> int:
        return prod(self.divisors)


@dataclass(frozen=True)
class InducedEndomorphism:
    """An endomorphism of a finite abelian group, in its Smith coordinates.

    Row ``i`` of ``matrix`` is reduced modulo the ``i``-th divisor.
    """

    target: FiniteAbelianPresentation
    matrix: IntMatrix

    def __post_init__(self):
        d = self.target.divisors
        for j, dj in enumerate(d):
            for i, di in enumerate(d):
                if (self.matrix[i, j] * dj) % di:
                    raise ValueError("matrix does not respect the relations")

    def power(self, j: int) -> "InducedEndomorphism":
        return InducedEndomorphism(self.target, _reduce_rows(matrix_power(self.matrix, j), self.target.divisors))

    def apply(self, x: Sequence[int]) -> tuple[int, ...]:
        d = self.target.divisors
        rows = self.matrix.to_rows()
        return tuple(sum(a * b for a, b in zip(rows[i], x)) % d[i] for i in range(len(d)))


def _reduce_rows(M: IntMatrix, divisors: Sequence[int]) -> IntMatrix:
    return IntMatrix.from_rows(
        [[x % divisors[i] for x in row] for i, row in enumerate(M.to_rows())], cols=M.cols
    )


def coker_presentation(M: IntMatrix) -> tuple[FiniteAbelianPresentation, int, IntMatrix]:
    """Torsion of ``Z^n / M Z^n``, its free rank, and the coordinate change.

    The returned ``transform`` is the left Smith transform ``U``; a vector
    ``x`` in ``Z^n`` maps to the class with coordinates ``(U x)_i mod d_i``.
    """
    snf = smith_normal_form(M)
    divisors = list(snf.divisors) + [0] * (M.rows - len(snf.divisors))
    torsion = tuple(d for d in divisors if d >= 2)
    free_rank = sum(1 for d in divisors if d == 0)
    return FiniteAbelianPresentation(torsion), free_rank, snf.U


def induce_on_coker(M: IntMatrix, B: IntMatrix) -> InducedEndomorphism:
    """The map ``B`` induces on the torsion of ``coker M`` (requires ``BM = MB``)."""
    if not M.is_square or B.shape != M.shape:
        raise LinalgError("induce_on_coker needs square matrices of equal size")
    if B @ M != M @ B:
        raise LinalgError("B does not commute with M")
    snf = smith_normal_form(M)
    n = M.rows
    divisors = list(snf.divisors) + [0] * (n - len(snf.divisors))
    tors = [i for i, d in enumerate(divisors) if d >= 2]
    free = [i for i, d in enumerate(divisors) if d == 0]
    C = snf.U @ B @ inverse_unimodular(snf.U)
    if any(C[i, j] for i in free for j in tors):
        raise InternalConsistencyError("torsion is not mapped into torsion")
    d = [divisors[i] for i in tors]
    block = C.submatrix(tors, tors)
    return InducedEndomorphism(FiniteAbelianPresentation(tuple(d)), _reduce_rows(block, d))


def fixed_count(e: InducedEndomorphism, j: int) -> int:
    """``|{x : e^j(x) = x}|``, as the order of ``coker(e^j - 1)`` on the group.

    Kernel and cokernel of an endomorphism of a finite group have the same
    order, and the cokernel is presented by ``[e^j - 1 | diag(d)]``.
    """
    d = e.target.divisors
    k = len(d)
    if k == 0:
        return 1
    E = e.power(j).matrix.to_rows()
    rows = [[E[i][c] - (i == c) for c in range(k)] + [d[i] if c == i else 0 for c in range(k)]
            for i in range(k)]
    snf = smith_normal_form(IntMatrix.from_rows(rows, cols=2 * k))
    return prod(snf.divisors)


def free_outside_origin(spec: ActionSpec) -> bool:
    """True iff no nontrivial power of ``A`` fixes a nonzero vector."""
    I = IntMatrix.identity(spec.n)
    power = I
    for _ in range(1, spec.order):
        power = power @ spec.A
        if (power - I).det() == 0:
            return False
    return True
