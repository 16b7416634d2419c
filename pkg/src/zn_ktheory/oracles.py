"""Independent checks that do not go through the reduction pipeline.

:func:`delocalized_rank` computes the ranks from fixed-point data of the
dual action on the torus ``T^n = R^n / Z^n``: for every group element ``g``
it takes the fixed set ``(T^n)^g`` (a disjoint union of translated
subtori), and counts the ``Z/m``-invariant part of its cohomology with the
character formula, one fixed-component count times one exterior-power trace
per group element.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .exact_linalg import (
    IntMatrix,
    elementary_symmetric_all,
    inverse_unimodular,
    matrix_power,
    saturated_kernel,
    solve_sublattice,
)
from .lattice_actions import ActionSpec, fixed_count, induce_on_coker, is_prime, prime_split
from .rank_formulas import (
    LITERAL_VARIANTS,
    MODE_ASSEMBLED,
    MODE_LITERAL,
    MODE_ORACLE,
    MODE_PURE_P,
    FormulaUndefinedError,
    RankIntegralityError,
    RankReport,
    Term,
    assembled_rank,
    coinvariant_rank_kernel,
    lemma_rank,
    literal_rank,
    pure_p_ranks,
)


def dual_action(A: IntMatrix) -> IntMatrix:
    """``(A^-1)^T``, the action on the Pontryagin dual torus."""
    return inverse_unimodular(A).T


def delocalized_rank(spec: ActionSpec) -> RankReport:
    """Ranks from the fixed sets of every group element on the dual torus.

    For ``g = h^t`` let ``V_t = ker(B^t - 1)`` with ``B`` the dual action.
    ``(T^n)^g`` has one component per element of the torsion of
    ``coker(B^t - 1)``, each a torus with lattice ``V_t``; ``h^j`` permutes
    the components through the induced map on that cokernel and acts on a
    fixed component through ``B^j`` restricted to ``V_t``.

    Raises:
        RankIntegralityError: if a per-element average is not a nonnegative
            integer.
    """
    n, m = spec.n, spec.m
    B = dual_action(spec.A)
    I = IntMatrix.identity(n)
    terms = []
    per_element = []
    Bt = I
    for t in range(m):
        K = Bt - I
        V = saturated_kernel(K)
        restricted = solve_sublattice(V, B @ V)
        components = induce_on_coker(K, B)
        sums = [0, 0]
        power = IntMatrix.identity(V.cols)
        for j in range(m):
            fj = fixed_count(components, j)
            es = elementary_symmetric_all(power)
            sums[0] += fj * sum(es[0::2])
            sums[1] += fj * sum(es[1::2])
            power = power @ restricted
        contribution = []
        for alpha in (0, 1):
            q, r = divmod(sums[alpha], m)
            if r or q < 0:
                raise RankIntegralityError(
                    f"fixed-set average for t={t}, alpha={alpha} is {sums[alpha]}/{m}"
                )
            contribution.append(q)
            terms.append(Term(alpha, f"g=h^{t}", q))
        per_element.append(
            {"t": t, "fixed_rank": V.cols, "components": components.target.order,
             "rank0": contribution[0], "rank1": contribution[1]}
        )
        Bt = Bt @ B
    return RankReport(
        mode=MODE_ORACLE,
        rank0=sum(x["rank0"] for x in per_element),
        rank1=sum(x["rank1"] for x in per_element),
        breakdown=tuple(terms),
        details={"per_element": per_element},
    )


# ---------------------------------------------------------------------------
# cross-mode tabulation


@dataclass(frozen=True)
class Cell:
    mode: str
    prime: int | None = None
    variant: str | None = None

    @property
    def label(self) -> str:
        parts = [self.mode]
        if self.prime is not None:
            parts.append(f"p={self.prime}")
        if self.variant is not None:
            parts.append(self.variant)
        return " ".join(parts)


@dataclass(frozen=True)
class Divergence:
    first: Cell
    second: Cell
    delta0: int
    delta1: int


@dataclass
class ConsistencyReport:
    spec_name: str | None
    table: dict[Cell, tuple[int, int]]
    agreements: list[tuple[Cell, Cell]]
    divergences: list[Divergence]
    skipped: dict[Cell, str] = field(default_factory=dict)
    reports: dict[Cell, RankReport] = field(default_factory=dict)

    @property
    def verdict(self) -> str:
        return "all-agree" if not self.divergences else "divergent"

    def divergence(self, a: Cell, b: Cell) -> Divergence | None:
        for d in self.divergences:
            if (d.first, d.second) == (a, b):
                return d
            if (d.first, d.second) == (b, a):
                return Divergence(a, b, -d.delta0, -d.delta1)
        return None

    def agree(self, a: Cell, b: Cell) -> bool:
        return (a, b) in self.agreements or (b, a) in self.agreements


ALL_MODES = (MODE_ORACLE, MODE_ASSEMBLED, MODE_PURE_P, MODE_LITERAL)


def cross_check(spec: ActionSpec, modes=ALL_MODES, variants=LITERAL_VARIANTS) -> ConsistencyReport:
    """Run every requested mode and compare all pairs of results exactly.

    The oracle is listed first. The pure-p cell is only produced when ``m``
    is prime and ``Z/m`` fixes no nonzero vector, since otherwise
    ``Z^l x| Z/p`` is a different group from the input one. A literal cell
    whose ``k_l`` is undefined is recorded under ``skipped``.
    """
    reports: dict[Cell, RankReport] = {}
    skipped: dict[Cell, str] = {}
    if MODE_ORACLE in modes:
        reports[Cell(MODE_ORACLE)] = delocalized_rank(spec)
    for p in spec.primes:
        if MODE_ASSEMBLED in modes:
            reports[Cell(MODE_ASSEMBLED, p)] = assembled_rank(spec, p)
        if MODE_PURE_P in modes and is_prime(spec.m):
            split = prime_split(spec, p)
            if split.free_outside_origin_at_p:
                reports[Cell(MODE_PURE_P, p)] = pure_p_ranks(split)
        if MODE_LITERAL in modes:
            for v in variants:
                cell = Cell(MODE_LITERAL, p, v)
                try:
                    reports[cell] = literal_rank(spec, p, v)
                except FormulaUndefinedError as exc:
                    skipped[cell] = str(exc)
    table = {c: r.ranks for c, r in reports.items()}
    agreements = []
    divergences = []
    for a, b in combinations(table, 2):
        (a0, a1), (b0, b1) = table[a], table[b]
        if (a0, a1) == (b0, b1):
            agreements.append((a, b))
        else:
            divergences.append(Divergence(a, b, a0 - b0, a1 - b1))
    return ConsistencyReport(spec.name, table, agreements, divergences, skipped, reports)


# ---------------------------------------------------------------------------
# rank lemma, both routes


@dataclass(frozen=True)
class LemmaSuiteResult:
    passed: bool
    checked: int
    witness: tuple | None = None


def lemma_equivalence_suite(corpus) -> LemmaSuiteResult:
    """Check ``lemma_rank == coinvariant_rank_kernel`` for every ``(M, d)`` and ``s``.

    Stops at the first mismatch and returns it as ``witness``.
    """
    checked = 0
    for M, d in corpus:
        if not matrix_power(M, d).is_identity():
            return LemmaSuiteResult(False, checked, (M, d, None, "M^d != I"))
        for s in range(M.rows + 1):
            a = lemma_rank(M, d, s)
            b = coinvariant_rank_kernel(M, d, s)
            checked += 1
            if a != b:
                return LemmaSuiteResult(False, checked, (M, d, s, (a, b)))
    return LemmaSuiteResult(True, checked)
