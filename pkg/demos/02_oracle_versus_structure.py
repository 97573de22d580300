"""
Brute force versus structure
============================

Build the nonabelian group ``Z_3^2 x| Z_2`` as a Cayley table, list all of
its subgroups directly, and compare with the structured description in
which every subgroup is either inside ``H = Z_3^2`` or is ``T`` together
with one element of order 2.
"""

from fractions import Fraction

import numpy as np

from sdpgroup import cayley, pgrouplat

G = cayley.build_pgroup(3, 3, 2)
print(G.name, "order", G.order, "abelian:", G.is_abelian())

subs = cayley.all_subgroups(G)
print("subgroups found by closure:", len(subs))
print("orders:", sorted({S.order for S in subs}))

# Pairwise permutability straight from product sets.
P = cayley.permutability_matrix(G, subs)
print("permuting ordered pairs:", int(P.sum()), "of", P.size)
print("sd from the table:", Fraction(int(P.sum()), P.size))

# Structured side: the same lattice, one record per subgroup.
params = pgrouplat.make_params(3, 3, 2)
structured = pgrouplat.enumerate_psubgroups(params)
print("structured subgroups:", len(structured))
for S in structured[:3] + structured[-3:]:
    print("  ", S)

# Every structured subgroup maps onto one of the closures, and the
# dimension-only predicate reproduces the matrix exactly.
where = {S.mask: i for i, S in enumerate(subs)}
idx = [where[pgrouplat.to_element_set(params, S, G).mask] for S in structured]
Q = np.array([[pgrouplat.permutes_structural(params, S, K) for K in structured] for S in structured])
print("predicate matches table:", bool((Q == P[np.ix_(idx, idx)]).all()))

# The closed form needs no enumeration at all.
print("sd closed form:", pgrouplat.sd_fast(params))
print("sd via |C(K)| :", pgrouplat.sd_via_csizes(params))
