"""
Coinvariant ranks of exterior powers, two ways
==============================================

The average of e_s over the powers of M against the rank of the averaging
projector on the s-th compound matrix.
"""

from zn_ktheory import coinvariant_rank_kernel, lemma_rank
from zn_ktheory.families import finite_order_corpus
from zn_ktheory.oracles import lemma_equivalence_suite

corpus = finite_order_corpus(8, seed=4)
for M, d in corpus:
    by_eigen = [lemma_rank(M, d, s) for s in range(M.rows + 1)]
    by_kernel = [coinvariant_rank_kernel(M, d, s) for s in range(M.rows + 1)]
    print(f"n={M.rows} d={d:2d}  {by_eigen}  {'==' if by_eigen == by_kernel else '!='}  {by_kernel}")

print(lemma_equivalence_suite(finite_order_corpus(200, seed=0)))
