"""Exact subgroup commutativity degrees for the nonabelian P-groups ``G_{n,p}``.

Modules:

* :mod:`sdpgroup.qcount`    Gaussian coefficients, subgroup totals, ``f_n``
* :mod:`sdpgroup.gfspace`   canonical subspaces of ``F_p^m``
* :mod:`sdpgroup.cayley`    brute-force Cayley-table oracle
* :mod:`sdpgroup.pgrouplat` structured lattice of ``G_{n,p}`` and fast ``sd``
* :mod:`sdpgroup.cli`       command-line front end
"""

__version__ = "0.1.0"

from .cayley import build_pgroup, sd_exact
from .pgrouplat import audit, bound_rhs, make_params, sd_fast, sd_via_csizes, trend_table
from .qcount import gaussian, poly_f, total_subgroups

__all__ = [
    "__version__",
    "audit",
    "bound_rhs",
    "build_pgroup",
    "gaussian",
    "make_params",
    "poly_f",
    "sd_exact",
    "sd_fast",
    "sd_via_csizes",
    "total_subgroups",
    "trend_table",
]
