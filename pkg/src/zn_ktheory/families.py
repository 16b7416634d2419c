"""Generators for action data: companions, permutations, sums, conjugates.

Also builds the seeded random corpora that the test and acceptance suites
run over. Everything that draws random numbers takes an explicit seed.
"""

from __future__ import annotations

import random
from math import lcm

from .exact_linalg import IntMatrix, multiplicative_order
from .lattice_actions import (
    E_MODULUS,
    E_PRIME,
    E_SQUAREFREE,
    ActionSpec,
    ActionValidationError,
    is_prime,
    prime_factors,
    validate_action,
)

# integer coefficients of the cyclotomic polynomials with square-free index
# and degree <= 8, low degree first
CYCLOTOMIC = {
    1: (-1, 1),
    2: (1, 1),
    3: (1, 1, 1),
    5: (1, 1, 1, 1, 1),
    6: (1, -1, 1),
    7: (1, 1, 1, 1, 1, 1, 1),
    10: (1, -1, 1, -1, 1),
    15: (1, -1, 0, 1, -1, 1, 0, -1, 1),
    30: (1, 1, 0, -1, -1, -1, 0, 1, 1),
}


def companion(coeffs) -> IntMatrix:
    """Companion matrix of the monic polynomial with the given coefficients."""
    *low, lead = coeffs
    if lead != 1:
        raise ValueError("polynomial must be monic")
    d = len(low)
    rows = [[0] * d for _ in range(d)]
    for i in range(1, d):
        rows[i][i - 1] = 1
    for i in range(d):
        rows[i][d - 1] = -low[i]
    return IntMatrix.from_rows(rows, cols=d)


def cyclotomic_block(k: int) -> IntMatrix:
    return companion(CYCLOTOMIC[k])


def cyclotomic(p: int) -> ActionSpec:
    """Companion of ``1 + x + ... + x^(p-1)`` on ``Z^(p-1)``, with ``m = p``."""
    if not is_prime(p):
        raise ActionValidationError(E_PRIME, f"cyclotomic family needs a prime, got {p}")
    A = companion((1,) * p)
    return validate_action(p - 1, p, A, name=f"cyclotomic({p})")


def trivial(n: int, m: int) -> ActionSpec:
    return validate_action(n, m, IntMatrix.identity(n), name=f"trivial({n})")


def permutation(cycle_type, m: int | None = None) -> ActionSpec:
    """Permutation action with the given cycle lengths."""
    blocks = [_cycle(c) for c in cycle_type]
    order = lcm(*cycle_type) if cycle_type else 1
    if m is None:
        m = order
        if m < 2:
            raise ActionValidationError(E_MODULUS, "cycle type generates the trivial group; pass m")
    A = IntMatrix.block_diagonal(blocks)
    return validate_action(A.rows, m, A, name=f"permutation({','.join(map(str, cycle_type))})")


def direct_sum(*specs: ActionSpec) -> ActionSpec:
    """Block sum; the group order is the lcm of the summands' orders."""
    if not specs:
        raise ValueError("direct_sum needs at least one summand")
    m = lcm(*(s.m for s in specs))
    f = prime_factors(m)
    if len(set(f)) != len(f):
        raise ActionValidationError(E_SQUAREFREE, f"lcm of summand orders is {m}, not square-free")
    A = IntMatrix.block_diagonal(s.A for s in specs)
    name = " + ".join(s.name or f"[{s.n}]" for s in specs)
    return validate_action(A.rows, m, A, name=name)


def random_unimodular(n: int, rng: random.Random, steps: int = 8) -> tuple[IntMatrix, IntMatrix]:
    """A product of elementary transvections and its inverse."""
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    Uinv = [row[:] for row in U]
    if n < 2:
        return IntMatrix.from_rows(U, cols=n), IntMatrix.from_rows(Uinv, cols=n)
    for _ in range(steps):
        i, j = rng.sample(range(n), 2)
        c = rng.choice((-2, -1, 1, 2))
        # U <- U (1 + c e_ij), Uinv <- (1 - c e_ij) Uinv
        for row in U:
            row[j] += c * row[i]
        Uinv[i] = [x - c * y for x, y in zip(Uinv[i], Uinv[j])]
    return IntMatrix.from_rows(U, cols=n), IntMatrix.from_rows(Uinv, cols=n)


def conjugate(spec: ActionSpec, seed: int, steps: int = 8) -> ActionSpec:
    """``U A U^-1`` for a seeded random unimodular ``U``."""
    if isinstance(seed, bool) or not isinstance(seed, int):
        raise TypeError("conjugate needs an explicit integer seed")
    U, Uinv = random_unimodular(spec.n, random.Random(seed), steps)
    return validate_action(spec.n, spec.m, U @ spec.A @ Uinv,
                           name=f"{spec.name or 'spec'}~conj(seed={seed})")


FAMILIES = {
    "cyclotomic": cyclotomic,
    "trivial": trivial,
    "permutation": permutation,
    "direct_sum": direct_sum,
    "conjugate": conjugate,
}


def generate_family(family: str, *args, **kwargs) -> ActionSpec:
    try:
        fn = FAMILIES[family.replace("-", "_")]
    except KeyError:
        raise ValueError(f"unknown family {family!r}; choose from {sorted(FAMILIES)}") from None
    return fn(*args, **kwargs)


# ---------------------------------------------------------------------------
# seeded corpora

ORDERS = (1, 2, 3, 5, 6, 7, 10, 15, 30)


def _cycle(c: int) -> IntMatrix:
    return IntMatrix.from_rows([[int(i == (j + 1) % c) for j in range(c)] for i in range(c)], cols=c)


def _random_blocks(rng: random.Random, max_n: int) -> list[IntMatrix]:
    pieces = []
    budget = rng.randint(1, max_n)
    while budget > 0:
        kind = rng.random()
        if kind < 0.6:
            k = rng.choice([k for k, c in CYCLOTOMIC.items() if len(c) - 1 <= budget])
            block = cyclotomic_block(k)
        elif kind < 0.85 and budget >= 2:
            block = _cycle(rng.choice([c for c in (2, 3, 5) if c <= budget]))
        else:
            block = -_cycle(rng.choice([c for c in (1, 3) if c <= budget]))
        pieces.append(block)
        budget -= block.rows
    return pieces


def finite_order_corpus(count: int, seed: int = 0, max_n: int = 6) -> list[tuple[IntMatrix, int]]:
    """``count`` pairs ``(M, d)`` with ``M^d = I`` and ``d`` in :data:`ORDERS`.

    Matrices are conjugated block sums of cyclotomic companions and signed
    permutation matrices, so both split and non-split lattices occur.
    """
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        blocks = _random_blocks(rng, max_n)
        M = IntMatrix.block_diagonal(blocks)
        U, Uinv = random_unimodular(M.rows, rng, steps=rng.randint(0, 6))
        M = U @ M @ Uinv
        order = multiplicative_order(M, 30 * 7)
        choices = [d for d in ORDERS if d % order == 0]
        if not choices:
            continue
        out.append((M, rng.choice(choices)))
    return out


def spec_corpus(count: int, seed: int = 0, max_n: int = 6) -> list[ActionSpec]:
    """Valid action data with square-free ``m >= 2``; some are non-faithful."""
    out = []
    for i, (M, d) in enumerate(finite_order_corpus(count * 2, seed, max_n)):
        if d < 2:
            continue
        out.append(validate_action(M.rows, d, M, name=f"corpus-{seed}-{i}"))
        if len(out) == count:
            break
    return out
