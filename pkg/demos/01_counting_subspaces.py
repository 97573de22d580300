"""
Counting subgroups of elementary abelian groups
===============================================

The subgroups of ``Z_p^n`` are the subspaces of ``F_p^n``.  Their number by
dimension is a Gaussian coefficient, and the total is a polynomial in ``p``.
"""

from sdpgroup import gfspace, qcount

# Three independent ways to get the same Gaussian coefficient.
n, p, k = 5, 3, 2
print("sum form      ", qcount.gaussian_sum(n, p, k))
print("product form  ", qcount.gaussian_product(n, p, k))
print("recurrence    ", qcount.gaussian_rec(n, p, k))

# Listing the subspaces directly gives the same count.
planes = gfspace.enumerate_subspaces(p, n, k)
print("enumerated    ", len(planes))
print("first plane   ", planes[0])
print("last plane    ", planes[-1])

# The total over all dimensions, as a polynomial in p.
for n in range(1, 8):
    f = qcount.poly_f(n)
    print(f"n={n}  f(X) = {f}   f(3) = {f(3)}   degree {f.degree}")

# The ratio of consecutive totals drops by about one power of p every two
# steps of n, which is the gap in degree.
for n in range(2, 10):
    ratio = qcount.total_subgroups(n - 1, 3) / qcount.total_subgroups(n, 3)
    print(f"n={n}  a(n-1)/a(n) = {ratio:.6f}   degree gap {qcount.degree_gap(n)}")
