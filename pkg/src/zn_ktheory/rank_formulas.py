"""Rank computations for ``K_*(C*_r(Z^n x| Z/m))``.

Three routes live here:

* :func:`literal_rank` evaluates the closed-form rank formula exactly as
  printed, under each of its readings (which eigenvalue tuple, and whether
  ``k_l`` multiplies or exponentiates);
* :func:`pure_p_ranks` assembles ``Z^l x| Z/p`` from the conjugacy-class
  count and the coinvariant ranks of the exterior powers;
* :func:`assembled_rank` follows the reduction pipeline (coinvariants over
  ``G_p``, fixed lattice tensor quotient, permutation module over the class
  group), with the permutation module computed rather than assumed free.

None of these adjusts its output to agree with another. Disagreements are
reported as flags and tabulated by :mod:`zn_ktheory.oracles`.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from fractions import Fraction

from .exact_linalg import (
    IntMatrix,
    LinalgError,
    elementary_symmetric_all,
    exterior_power,
    matrix_power,
    rational_rank,
)
from .lattice_actions import (
    ActionSpec,
    PrimeSplit,
    coker_presentation,
    fixed_count,
    induce_on_coker,
    prime_split,
)

MODE_LITERAL = "literal"
MODE_ASSEMBLED = "assembled"
MODE_ORACLE = "oracle"
MODE_PURE_P = "pure-p"

FULL_TUPLE = "full-tuple"
RESTRICTED_TUPLE = "restricted-tuple"
MULTIPLIER = "multiplier"
EXPONENT = "exponent"
DEFAULT_VARIANT = f"{FULL_TUPLE}+{MULTIPLIER}"
LITERAL_VARIANTS = tuple(
    f"{t}+{c}" for t in (FULL_TUPLE, RESTRICTED_TUPLE) for c in (MULTIPLIER, EXPONENT)
)

FLAG_PRINTED = "printed-formula evaluation; compare against oracle"
FLAG_NOT_FREE_MODEL = "permutation module differs from the asserted free model Z[G_p]^k_l"
FLAG_QUOTIENT_GROUP = "ranks of Z^l x| Z/p, not of the input group"

TORSION_FREE_PROVENANCE = (
    "K_*(C*_r(Z^n x| Z/m)) is finitely generated and torsion free for square-free m; "
    "each K_alpha is reported as a free abelian group of the computed rank"
)


class RankIntegralityError(ArithmeticError):
    """A character average that must be an integer was not."""


class FormulaUndefinedError(ValueError):
    """The printed formula cannot be evaluated on this split."""


@dataclass(frozen=True)
class Term:
    alpha: int
    label: str
    value: int


@dataclass(frozen=True)
class RankReport:
    mode: str
    rank0: int
    rank1: int
    prime_used: int | None = None
    variant: str | None = None
    breakdown: tuple[Term, ...] = ()
    flags: tuple[str, ...] = ()
    details: dict = field(default_factory=dict, compare=False)
    groups: str | None = None
    provenance: str | None = None

    def __post_init__(self):
        if self.rank0 < 0 or self.rank1 < 0:
            raise RankIntegralityError(f"negative rank ({self.rank0}, {self.rank1})")
        for alpha, total in ((0, self.rank0), (1, self.rank1)):
            if self.breakdown and sum(t.value for t in self.breakdown if t.alpha == alpha) != total:
                raise RankIntegralityError(f"breakdown does not sum to rank{alpha}")

    def rank(self, alpha: int) -> int:
        return (self.rank0, self.rank1)[_check_alpha(alpha)]

    @property
    def ranks(self) -> tuple[int, int]:
        return (self.rank0, self.rank1)


def _check_alpha(alpha: int) -> int:
    if alpha not in (0, 1):
        raise ValueError(f"alpha must be 0 or 1, got {alpha!r}")
    return alpha


def _exact_div(num: int, den: int, what: str) -> int:
    q, r = divmod(num, den)
    if r:
        raise RankIntegralityError(f"{what}: {Fraction(num, den)} is not an integer")
    return q


def _require_order(M: IntMatrix, d: int):
    if d < 1 or not matrix_power(M, d).is_identity():
        raise RankIntegralityError(f"input not of order d={d}")


def symmetric_power_sums(M: IntMatrix, d: int) -> list[int]:
    """``[sum_{t=1..d} e_s(M^t) for s in 0..n]``."""
    n = M.rows
    sums = [0] * (n + 1)
    power = IntMatrix.identity(n)
    for _ in range(d):
        power = power @ M
        for s, e in enumerate(elementary_symmetric_all(power)):
            sums[s] += e
    return sums


def lemma_rank(M: IntMatrix, d: int, s: int) -> int:
    """Coinvariant rank of ``Lambda^s`` under ``<M>``, as ``(1/d) sum_t e_s(M^t)``.

    Raises:
        RankIntegralityError: if ``M^d != I`` or the average is fractional;
            the latter means ``M^d == I`` was false.
    """
    if not 0 <= s <= M.rows:
        raise LinalgError(f"degree {s} out of range 0..{M.rows}")
    _require_order(M, d)
    return _exact_div(symmetric_power_sums(M, d)[s], d, "input not of order d")


def lemma_ranks(M: IntMatrix, d: int) -> list[int]:
    """:func:`lemma_rank` for every ``s`` at once."""
    _require_order(M, d)
    return [_exact_div(x, d, "input not of order d") for x in symmetric_power_sums(M, d)]


def coinvariant_rank_kernel(M: IntMatrix, d: int, s: int) -> int:
    """Rank of the averaging projector ``(1/d) sum_t Lambda^s(M)^t`` over Q.

    Independent of :func:`lemma_rank`: it builds the compound matrix and
    eliminates, never touching eigenvalues or characteristic polynomials.
    """
    _require_order(M, d)
    P = exterior_power(M, s)
    k = P.rows
    total = IntMatrix.zeros(k, k)
    power = IntMatrix.identity(k)
    for _ in range(d):
        power = power @ P
        total = total + power
    return rational_rank(total)


def _parity_sum(values, alpha: int) -> int:
    return sum(v for s, v in enumerate(values) if s % 2 == alpha)


def literal_rank(spec: ActionSpec, p: int, variant: str = DEFAULT_VARIANT) -> RankReport:
    """Evaluate the printed closed formula for both parities.

    ``variant`` is ``"<tuple>+<combine>"`` with tuple in ``full-tuple`` (all
    ``n`` eigenvalues of ``A^(pt)``) or ``restricted-tuple`` (eigenvalues of
    ``A^(pt)`` on the fixed lattice only) and combine in ``multiplier``
    (``k_l * S1``) or ``exponent`` (``S1 ** k_l``).

    Raises:
        FormulaUndefinedError: when ``k_l`` is not a nonnegative integer.
    """
    if variant not in LITERAL_VARIANTS:
        raise ValueError(f"unknown literal variant {variant!r}; choose from {LITERAL_VARIANTS}")
    reading, combine = variant.split("+")
    split = prime_split(spec, p)
    if split.k_l is None:
        raise FormulaUndefinedError(
            f"k_l undefined for p={p}: value {split.k_l_value}"
            if split.k_l_value is not None else f"k_l undefined for p={p}"
        )
    k = split.k_l
    m, q = spec.m, spec.m // p
    base = matrix_power(spec.A, p) if reading == FULL_TUPLE else matrix_power(split.A_on_F, p)
    s1_sums = symmetric_power_sums(base, q)
    s2_sums = symmetric_power_sums(spec.A, m)

    terms = []
    details = {"k_l": k, "l": split.l}
    for alpha in (0, 1):
        s1 = _exact_div(_parity_sum(s1_sums, alpha), q, "first average")
        s2 = _exact_div(_parity_sum(s2_sums, alpha), m, "second average")
        first = k * s1 if combine == MULTIPLIER else s1 ** k
        details[f"S1[{alpha}]"] = s1
        details[f"S2[{alpha}]"] = s2
        terms.append(Term(alpha, f"first term ({combine} k_l={k}, S1={s1})", first))
        terms.append(Term(alpha, "second term S2", s2))
    r0 = sum(t.value for t in terms if t.alpha == 0)
    r1 = sum(t.value for t in terms if t.alpha == 1)
    return RankReport(
        mode=MODE_LITERAL,
        rank0=r0,
        rank1=r1,
        prime_used=p,
        variant=variant,
        breakdown=tuple(terms),
        flags=(FLAG_PRINTED,) + split.flags,
        details=details,
    )


def pure_p_ranks(split: PrimeSplit) -> RankReport:
    """Ranks for ``Z^l x| Z/p`` with ``Z/p`` acting by ``split.tau_quot``.

    ``K_1`` is the odd part of the coinvariant exterior algebra; ``K_0`` adds
    ``p - 1`` for every conjugacy class of order-``p`` subgroups, one per
    element of ``Z^l / (1 - tau) Z^l``. When ``m != p`` or ``Z/p`` fixes a
    nonzero vector this group differs from the input one and the report is
    flagged accordingly.
    """
    p, l = split.p, split.l
    invariants = lemma_ranks(split.tau_quot, p)
    classes = coker_presentation(IntMatrix.identity(l) - split.tau_quot)[0].order
    terms = (
        Term(0, f"reduced representation rings ({classes} classes x {p - 1})", classes * (p - 1)),
        Term(0, "even coinvariants", _parity_sum(invariants, 0)),
        Term(1, "odd coinvariants", _parity_sum(invariants, 1)),
    )
    return RankReport(
        mode=MODE_PURE_P,
        rank0=terms[0].value + terms[1].value,
        rank1=terms[2].value,
        prime_used=p,
        breakdown=terms,
        flags=split.flags + ((FLAG_QUOTIENT_GROUP,) if split.m != p or split.fixed_rank else ()),
        details={"classes": classes, "l": l, "coinvariant_ranks": invariants},
    )


def assembled_rank(spec: ActionSpec, p: int) -> RankReport:
    """Ranks by the reduction pipeline at the prime ``p``.

    ``term1`` is the ``G_p``-coinvariant rank of ``K_alpha(B F)`` tensored
    with the permutation module on the class group, averaged over ``G_p``
    with explicit fixed-point counts; ``term2`` is the coinvariant rank of
    ``K_alpha(B Z^n)`` under the whole group.
    """
    split = prime_split(spec, p)
    q = spec.m // p
    l = split.l
    cls_map = IntMatrix.identity(l) - split.tau_quot
    action = induce_on_coker(cls_map, split.A_quot)
    classes = action.target.order

    fixed = []
    sums = [0, 0]
    power = IntMatrix.identity(split.fixed_rank)
    for j in range(q):
        fj = fixed_count(action, j)
        fixed.append(fj)
        es = elementary_symmetric_all(power)
        for alpha in (0, 1):
            sums[alpha] += (p - 1) * fj * _parity_sum(es, alpha)
        power = power @ split.A_on_F
    invariants = lemma_ranks(spec.A, spec.m)

    flags = list(split.flags)
    perm_rank = (p - 1) * classes
    free_rank = split.k_l * q if split.k_l is not None else None
    if free_rank != perm_rank:
        flags.append(f"{FLAG_NOT_FREE_MODEL} (computed rank {perm_rank}, asserted {free_rank})")

    terms = []
    for alpha in (0, 1):
        t1 = _exact_div(sums[alpha], q, "G_p-average of the permutation module")
        terms.append(Term(alpha, "fixed lattice x reduced representations, G_p-coinvariants", t1))
        terms.append(Term(alpha, "coinvariants of K(B Z^n) under G", _parity_sum(invariants, alpha)))
    return RankReport(
        mode=MODE_ASSEMBLED,
        rank0=terms[0].value + terms[1].value,
        rank1=terms[2].value + terms[3].value,
        prime_used=p,
        breakdown=tuple(terms),
        flags=tuple(flags),
        details={
            "l": l,
            "class_group": list(action.target.divisors),
            "classes": classes,
            "fixed_counts": fixed,
            "permutation_module_rank": perm_rank,
            "free_model_rank": free_rank,
        },
    )


_SUPERSCRIPTS = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")


def _render(rank: int) -> str:
    if rank == 0:
        return "0"
    if rank == 1:
        return "ℤ"
    return "ℤ" + str(rank).translate(_SUPERSCRIPTS)


def package_groups(report: RankReport) -> RankReport:
    """Attach ``"ℤ^r0 / ℤ^r1"`` and the torsion-freeness provenance; idempotent."""
    return replace(
        report,
        groups=f"{_render(report.rank0)} / {_render(report.rank1)}",
        provenance=TORSION_FREE_PROVENANCE,
    )
