"""
Auditing a candidate upper bound
=================================

A candidate upper bound for sd of the nonabelian groups ``Z_p^(n-1) x| Z_q`` is
built from a per-subgroup estimate of ``|C(K)|``.  Here we measure
both exactly: the per-subgroup estimate always holds; the final bound does not.
"""

from sdpgroup import pgrouplat

for n in (2, 3, 4):
    rep = pgrouplat.audit(n, 3, 2)
    print(f"n={n}: sd = {rep.sd_value}  bound = {rep.bound_rhs}  sd <= bound: {rep.sd_le_bound}")
    for b in rep.per_k:
        print(f"   k={b.k}: max |C(K)| = {b.c_max}  estimate = {b.c_bound}  ok: {b.ok}")
    print(f"   sum of |C(K)| over mixed K = {rep.eq4_lhs_exact}, majorant = {rep.eq4_majorant}")

# Larger n is out of reach for any enumeration, but the closed form is exact
# and fast.  For p = 3 sd levels off near 0.365 instead of going to zero.
print()
print(" n   a(n-1)/a(n)   p^-floor(n/2)   sd")
for row in pgrouplat.trend_table(3, 2, 20):
    s = row.as_strings()
    print(f"{row.n:2d}   {s['a_ratio_decimal']:>10}   {s['p_pow_decimal']:>13}   {s['sd_decimal']}")
