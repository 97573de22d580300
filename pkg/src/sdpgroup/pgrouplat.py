"""Structured subgroup lattice of the nonabelian P-group ``G = H<x>``.

``H = F_p^m`` (``m = n - 1``) and ``x`` of prime order ``q`` acts on ``H`` by
the power map ``h -> h^r``.  Every subgroup is either

* ``PPart(T)``: a subspace ``T`` of ``H`` (all of these are normal), or
* ``Mixed(T, c)``: the semidirect product of ``T`` with ``<(c)x>``, where the
  coset label ``c`` is reduced modulo ``T``.

Two mixed subgroups ``Mixed(T, c)`` and ``Mixed(U, d)`` permute exactly when
they share a Sylow q-subgroup modulo ``T + U``, i.e. when ``d - c`` lies in
``T + U``.  This predicate is checked against the Cayley-table oracle over
all pairs in the test suite; everything else here builds on it to count
permuting pairs without touching group elements.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterator

from .cayley import CayleyGroup, SubgroupSet, find_r, generated_subgroup, pgroup_index
from .gfspace import (
    Subspace,
    coset_labels,
    is_prime,
    iter_subspaces,
    pair_profile,
    subspace_sum,
)
from .qcount import gaussian, poly_f, total_subgroups

__all__ = [
    "DEFAULT_BUDGET",
    "BudgetExceeded",
    "PGroupParams",
    "PSubgroup",
    "AuditReport",
    "KBound",
    "make_params",
    "mixed_count",
    "order_profile",
    "listing_profile",
    "iter_psubgroups",
    "enumerate_psubgroups",
    "to_element_set",
    "permutes_structural",
    "c_size",
    "c_size_by_dim",
    "sd_fast",
    "permuting_pairs",
    "sd_via_csizes",
    "bound_rhs",
    "audit",
    "TrendRow",
    "trend_table",
    "format_ratio",
    "format_decimal",
]

DEFAULT_BUDGET = 5_000_000


class BudgetExceeded(RuntimeError):
    """Refusal to enumerate; ``count`` is the number of subgroups it would have produced."""

    def __init__(self, count: int, budget: int):
        super().__init__(f"enumeration would produce {count} subgroups (budget {budget})")
        self.count = count
        self.budget = budget


@dataclass(frozen=True)
class PGroupParams:
    p: int
    n: int
    q: int
    r: int

    def __post_init__(self) -> None:
        if self.p == 2 or not is_prime(self.p):
            raise ValueError(f"p must be an odd prime, got {self.p}")
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if not is_prime(self.q) or (self.p - 1) % self.q:
            raise ValueError(f"q must be a prime dividing p-1, got q={self.q}, p={self.p}")
        if pow(self.r, self.q, self.p) != 1 or self.r % self.p == 1:
            raise ValueError(f"r={self.r} is not of order {self.q} mod {self.p}")

    @property
    def m(self) -> int:
        return self.n - 1

    @property
    def order(self) -> int:
        return self.p**self.m * self.q


def make_params(p: int, n: int, q: int) -> PGroupParams:
    return PGroupParams(p, n, q, find_r(p, q))


@dataclass(frozen=True)
class PSubgroup:
    """``kind`` is ``"ppart"`` or ``"mixed"``; ``c`` is ``None`` for p-parts."""

    kind: str
    T: Subspace
    c: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        if self.kind == "ppart":
            if self.c is not None:
                raise ValueError("a p-part carries no coset label")
        elif self.kind == "mixed":
            if self.c is None or self.T.reduce(self.c) != tuple(self.c):
                raise ValueError("mixed subgroup needs a canonical coset label")
        else:
            raise ValueError(f"unknown kind {self.kind!r}")

    @classmethod
    def ppart(cls, T: Subspace) -> PSubgroup:
        return cls("ppart", T)

    @classmethod
    def mixed(cls, T: Subspace, c) -> PSubgroup:
        return cls("mixed", T, T.reduce(c))

    @property
    def is_mixed(self) -> bool:
        return self.kind == "mixed"

    @property
    def k(self) -> int:
        return self.T.dim

    def order(self, q: int) -> int:
        return self.T.p**self.T.dim * (q if self.is_mixed else 1)

    def __str__(self) -> str:
        if self.is_mixed:
            return f"Mixed({self.T}, c={self.c})"
        return f"PPart({self.T})"


def mixed_count(p: int, m: int) -> int:
    """Number of mixed subgroups: ``sum_k [m choose k]_p p**(m-k)``."""
    return sum(gaussian(m, p, k) * p ** (m - k) for k in range(m + 1))


def listing_profile(params: PGroupParams) -> dict[int, int]:
    """Subgroup counts by order, straight from the multiplicities of the listing.

    ``[m choose k]_p`` subgroups of order ``p^k`` and ``[m choose k]_p p^(m-k)``
    of order ``p^k q``.
    """
    p, m, q = params.p, params.m, params.q
    out: dict[int, int] = {}
    for k in range(m + 1):
        out[p**k] = out.get(p**k, 0) + gaussian(m, p, k)
        out[p**k * q] = out.get(p**k * q, 0) + gaussian(m, p, k) * p ** (m - k)
    return out


def order_profile(subs, q: int) -> dict[int, int]:
    out: dict[int, int] = {}
    for S in subs:
        o = S.order(q)
        out[o] = out.get(o, 0) + 1
    return out


def iter_psubgroups(params: PGroupParams, budget: int = DEFAULT_BUDGET) -> Iterator[PSubgroup]:
    """All subgroups: p-parts by dimension, then mixed by dimension, label order."""
    p, m = params.p, params.m
    total = total_subgroups(params.n, p)
    if total > budget:
        raise BudgetExceeded(total, budget)
    for k in range(m + 1):
        for T in iter_subspaces(p, m, k):
            yield PSubgroup("ppart", T)
    for k in range(m + 1):
        for T in iter_subspaces(p, m, k):
            for c in coset_labels(T):
                yield PSubgroup("mixed", T, c)


def enumerate_psubgroups(params: PGroupParams, budget: int = DEFAULT_BUDGET) -> list[PSubgroup]:
    return list(iter_psubgroups(params, budget))


def to_element_set(params: PGroupParams, S: PSubgroup, G: CayleyGroup) -> SubgroupSet:
    """The subgroup of ``G = build_pgroup(p, n, q)`` generated by ``T`` (and ``(c)x``)."""
    p, m = params.p, params.m
    if G.order != params.order:
        raise ValueError(f"group of order {G.order} does not match {params}")
    if (S.T.p, S.T.m) != (p, m):
        raise ValueError("subgroup lives over a different H")
    gens = [pgroup_index(p, m, row, 0) for row in S.T.basis]
    if S.is_mixed:
        gens.append(pgroup_index(p, m, S.c, 1))
    out = generated_subgroup(G, gens)
    if out.order != S.order(params.q):
        raise AssertionError(f"{S} generated a subgroup of order {out.order}")
    return out


_span = lru_cache(maxsize=1 << 16)(subspace_sum)


def permutes_structural(params: PGroupParams, S: PSubgroup, K: PSubgroup) -> bool:
    """Whether ``S`` and ``K`` permute, decided on labels alone.

    p-parts are normal.  ``Mixed(T, c)`` and ``Mixed(U, d)`` permute iff
    ``d - c`` lies in ``T + U``.
    """
    if S.kind != "mixed" or K.kind != "mixed":
        return True
    span = _span(S.T, K.T)
    if span.dim == span.m:
        return True
    p = params.p
    return tuple((a - b) % p for a, b in zip(K.c, S.c)) in span


@lru_cache(maxsize=None)
def c_size_by_dim(p: int, m: int, k: int) -> int:
    """``|C(K)|`` for a mixed ``K`` whose p-part has dimension ``k``.

    Normal subgroups (``1 + a_m``) plus the mixed ``Mixed(U, d)`` with
    ``d - c`` in ``T + U``; there are ``p**(dim(T+U) - dim U)`` such labels
    per ``U``.  The whole group sits in both parts and is removed once.
    """
    a_m = total_subgroups(m, p)
    shared = 0
    for t in range(m + 1):
        for i in range(max(0, k + t - m), min(k, t) + 1):
            # U of dim t meeting a fixed k-dim T in dim i
            n_u = gaussian(k, p, i) * gaussian(m - k, p, t - i) * p ** ((k - i) * (t - i))
            shared += n_u * p ** (k - i)
    return (1 + a_m) + shared - 1


def c_size(params: PGroupParams, K: PSubgroup) -> int:
    """Number of subgroups permuting with ``K``, without element enumeration."""
    if not K.is_mixed:
        return total_subgroups(params.n, params.p)
    return c_size_by_dim(params.p, params.m, K.k)


def permuting_pairs(p: int, n: int) -> int:
    """Ordered permuting pairs, from the subspace pair profile of ``H``.

    Pairs involving a p-part always permute.  For mixed ``(T, c)``, ``(U, d)``
    the admissible label pairs number ``p**(m - dim(T & U))``.
    """
    m = n - 1
    a = total_subgroups(n, p)
    mixed = a - total_subgroups(m, p)
    profile = pair_profile(p, m)
    mm = sum(count * p ** (m - i) for _, _, i, count in profile.cells())
    return a * a - mixed * mixed + mm


def sd_fast(params: PGroupParams) -> Fraction:
    a = total_subgroups(params.n, params.p)
    return Fraction(permuting_pairs(params.p, params.n), a * a)


def sd_via_csizes(params: PGroupParams, budget: int = DEFAULT_BUDGET) -> Fraction:
    """``(a_m a_n + sum over mixed K of |C(K)|) / a_n**2``, summing over the enumeration."""
    p, n = params.p, params.n
    a = total_subgroups(n, p)
    a_m = total_subgroups(params.m, p)
    mixed_sum = sum(c_size(params, K) for K in iter_psubgroups(params, budget) if K.is_mixed)
    return Fraction(a_m * a + mixed_sum, a * a)


def bound_rhs(n: int, p: int) -> Fraction:
    """``(a_{n-1} / a_n) (2 + 1 / a_n)``."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got n={n}")
    a, a_prev = total_subgroups(n, p), total_subgroups(n - 1, p)
    return Fraction(a_prev, a) * (2 + Fraction(1, a))


@dataclass(frozen=True)
class KBound:
    k: int
    c_max: int
    c_bound: int

    @property
    def ok(self) -> bool:
        return self.c_max <= self.c_bound


@dataclass(frozen=True)
class AuditReport:
    """Exact measurements around the upper bound for ``sd``; nothing here is asserted."""

    params: PGroupParams
    sd_value: Fraction
    bound_rhs: Fraction
    per_k: tuple[KBound, ...]
    eq4_lhs_exact: int
    eq4_majorant: int

    @property
    def sd_le_bound(self) -> bool:
        return self.sd_value <= self.bound_rhs

    @property
    def eq4_le_majorant(self) -> bool:
        return self.eq4_lhs_exact <= self.eq4_majorant

    @property
    def flags(self) -> dict[str, bool]:
        return {
            "sd_le_bound": self.sd_le_bound,
            "per_k_ok": all(b.ok for b in self.per_k),
            "eq4_le_majorant": self.eq4_le_majorant,
        }

    def to_dict(self) -> dict:
        return {
            "params": asdict(self.params),
            "sd": format_ratio(self.sd_value),
            "bound_rhs": format_ratio(self.bound_rhs),
            "sd_le_bound": self.sd_le_bound,
            "per_k": [
                {"k": b.k, "c_max": str(b.c_max), "c_bound": str(b.c_bound), "ok": b.ok}
                for b in self.per_k
            ],
            "eq4_exact": str(self.eq4_lhs_exact),
            "eq4_majorant": str(self.eq4_majorant),
        }


def audit(n: int, p: int, q: int, budget: int = DEFAULT_BUDGET) -> AuditReport:
    """Measure ``sd`` against the bound, per subgroup and in aggregate.

    The per-``k`` maxima and the exact sum of ``|C(K)|`` over mixed ``K``
    walk the full enumeration, so this refuses beyond ``budget``.
    """
    params = make_params(p, n, q)
    m = params.m
    a_m = total_subgroups(m, p)
    a = total_subgroups(n, p)
    c_max: dict[int, int] = {}
    total = 0
    for K in iter_psubgroups(params, budget):
        if K.is_mixed:
            c = c_size(params, K)
            total += c
            c_max[K.k] = max(c_max.get(K.k, 0), c)
    per_k = tuple(KBound(k, c_max[k], 1 + a_m * (1 + p**k)) for k in sorted(c_max))
    return AuditReport(params, sd_fast(params), bound_rhs(n, p), per_k, total, a_m * (1 + a))


@dataclass(frozen=True)
class TrendRow:
    n: int
    a_ratio: Fraction
    p_pow: Fraction
    sd: Fraction
    degree_gap: int

    def as_strings(self, places: int = 6) -> dict[str, str]:
        out: dict[str, str] = {"n": str(self.n)}
        for name in ("a_ratio", "p_pow", "sd"):
            value = getattr(self, name)
            out[name] = format_ratio(value)
            out[name + "_decimal"] = format_decimal(value, places)
        return out


def trend_table(p: int, n_min: int, n_max: int, q: int | None = None) -> list[TrendRow]:
    """Rows ``n = n_min..n_max`` of ``a_{n-1}/a_n``, ``p**-(n//2)`` and ``sd``.

    ``sd`` does not depend on ``q``; the smallest prime divisor of ``p - 1``
    is used when ``q`` is omitted.
    """
    if n_min < 2 or n_max < n_min:
        raise ValueError(f"need 2 <= n_min <= n_max, got {n_min}..{n_max}")
    q = q if q is not None else 2
    rows = []
    for n in range(n_min, n_max + 1):
        params = make_params(p, n, q)
        rows.append(
            TrendRow(
                n,
                Fraction(total_subgroups(n - 1, p), total_subgroups(n, p)),
                Fraction(1, p ** (n // 2)),
                sd_fast(params),
                poly_f(n).degree - poly_f(n - 1).degree,
            )
        )
    return rows


def format_ratio(x: Fraction) -> str:
    # always num/den, so the string form is stable under re-parsing
    return f"{x.numerator}/{x.denominator}"


def format_decimal(x: Fraction, places: int = 6) -> str:
    """Round half to even at ``places`` digits, computed from the exact value."""
    scaled = round(x * 10**places)
    sign = "-" if scaled < 0 else ""
    whole, frac = divmod(abs(scaled), 10**places)
    return f"{sign}{whole}.{frac:0{places}d}" if places else f"{sign}{whole}"
