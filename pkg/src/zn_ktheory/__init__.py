"""Exact rank computations for the K-theory of ``Z^n x| Z/m`` with ``m`` square-free."""

from .exact_linalg import (
    IntMatrix,
    RatMatrix,
    SnfDecomposition,
    char_poly,
    elementary_symmetric,
    exterior_power,
    matrix_power,
    multiplicative_order,
    rational_rank,
    saturated_kernel,
    smith_normal_form,
)
from .lattice_actions import (
    ActionSpec,
    ActionValidationError,
    FiniteAbelianPresentation,
    InducedEndomorphism,
    PrimeSplit,
    coker_presentation,
    fixed_count,
    free_outside_origin,
    induce_on_coker,
    prime_split,
    validate_action,
)
from .rank_formulas import (
    RankReport,
    assembled_rank,
    coinvariant_rank_kernel,
    lemma_rank,
    literal_rank,
    package_groups,
    pure_p_ranks,
)
from .oracles import ConsistencyReport, cross_check, delocalized_rank, lemma_equivalence_suite
from .families import conjugate, cyclotomic, direct_sum, generate_family, permutation, trivial
from .catalog import CatalogEntry, parse_spec, run_batch, serialize_spec

__version__ = "0.1.0"
