"""Desk-scale self-test: oracle equivalence and invariant checks across modules.

Each check is a named callable that raises ``AssertionError`` on failure.
:func:`run_selftest` runs them and returns a pass/fail matrix.  The
structural predicate is injectable so that a deliberately broken predicate
can be shown to trip the ``predicate certification`` check.
"""

from __future__ import annotations

import time
import traceback
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable

import numpy as np

from . import cayley, gfspace, pgrouplat, qcount
from .cayley import MAX_ORDER
from .gfspace import is_prime

Predicate = Callable[[pgrouplat.PGroupParams, pgrouplat.PSubgroup, pgrouplat.PSubgroup], bool]


def oracle_instances(max_order: int = MAX_ORDER) -> list[tuple[int, int, int]]:
    """Every ``(p, n, q)`` with ``q`` a prime dividing ``p - 1`` and ``p^(n-1) q <= max_order``."""
    out = []
    for p in range(3, max_order // 2 + 1):
        if not is_prime(p):
            continue
        for q in range(2, p):
            if not is_prime(q) or (p - 1) % q:
                continue
            n = 2
            while p ** (n - 1) * q <= max_order:
                out.append((p, n, q))
                n += 1
    return out


@dataclass
class OracleInstance:
    params: pgrouplat.PGroupParams
    group: cayley.CayleyGroup
    subgroups: list[cayley.SubgroupSet]
    structured: list[pgrouplat.PSubgroup]
    images: list[cayley.SubgroupSet]
    matrix: object  # numpy bool matrix, oracle permutability in `subgroups` order

    @property
    def image_index(self) -> list[int]:
        where = {S.mask: i for i, S in enumerate(self.subgroups)}
        return [where[S.mask] for S in self.images]


@lru_cache(maxsize=None)
def oracle_instance(p: int, n: int, q: int) -> OracleInstance:
    params = pgrouplat.make_params(p, n, q)
    G = cayley.build_pgroup(p, n, q)
    subs = cayley.all_subgroups(G)
    structured = pgrouplat.enumerate_psubgroups(params)
    images = [pgrouplat.to_element_set(params, S, G) for S in structured]
    return OracleInstance(params, G, subs, structured, images, cayley.permutability_matrix(G, subs))


# ---------------------------------------------------------------------------
# checks


def check_counting(quick: bool) -> None:
    primes = (2, 3, 5) if quick else (2, 3, 5, 7, 11, 13)
    top = 6 if quick else 10
    for p in primes:
        for n in range(1, top + 1):
            for k in range(n + 1):
                a = qcount.gaussian_sum(n, p, k)
                assert a == qcount.gaussian_product(n, p, k) == qcount.gaussian_rec(n, p, k), (n, p, k)
                assert a == qcount.gaussian_rec(n, p, n - k)
            assert qcount.total_subgroups(n, p) == qcount.total_rec(n, p) == qcount.poly_f(n)(p)
    for n in range(1, 13):
        f = qcount.poly_f(n)
        assert f.degree == n * n // 4 and f.leading == (1 if n % 2 == 0 else 2), n
        if n >= 2:
            assert qcount.degree_gap(n) == n // 2


def check_subspaces(quick: bool) -> None:
    for p in (2, 3) if quick else (2, 3, 5):
        for m in range(4 if quick else 5):
            for k in range(m + 1):
                subs = gfspace.enumerate_subspaces(p, m, k)
                assert len(subs) == len(set(subs)) == qcount.gaussian(m, p, k), (p, m, k)


def check_pair_profile(quick: bool) -> None:
    for p in (2, 3) if quick else (2, 3, 5):
        for m in range(4 if quick else 5):
            assert gfspace.pair_profile(p, m) == gfspace.pair_profile_bruteforce(p, m), (p, m)


def _instances(quick: bool) -> list[tuple[int, int, int]]:
    return oracle_instances(60 if quick else MAX_ORDER)


def check_lattice(quick: bool) -> None:
    for p, n, q in _instances(quick):
        inst = oracle_instance(p, n, q)
        assert len(inst.subgroups) == qcount.total_subgroups(n, p), (p, n, q)
        normals = cayley.normal_subgroups(inst.group, inst.subgroups)
        assert len(normals) == 1 + qcount.total_subgroups(n - 1, p), (p, n, q)
        assert sorted(S.mask for S in inst.images) == sorted(S.mask for S in inst.subgroups)


def check_predicate(quick: bool, predicate: Predicate) -> None:
    for p, n, q in _instances(quick):
        inst = oracle_instance(p, n, q)
        idx = inst.image_index
        P = inst.matrix[np.ix_(idx, idx)].tolist()
        params, subs = inst.params, inst.structured
        for S, row in zip(subs, P):
            for K, expected in zip(subs, row):
                if predicate(params, S, K) != expected:
                    raise AssertionError(f"{(p, n, q)}: {S} vs {K}")


def check_sd_agreement(quick: bool) -> None:
    for p, n, q in _instances(quick):
        inst = oracle_instance(p, n, q)
        oracle = Fraction(int(inst.matrix.sum()), len(inst.subgroups) ** 2)
        fast = pgrouplat.sd_fast(inst.params)
        assert fast == pgrouplat.sd_via_csizes(inst.params) == oracle, (p, n, q)


def check_c_size(quick: bool) -> None:
    for p, n, q in _instances(quick):
        inst = oracle_instance(p, n, q)
        idx = inst.image_index
        col = inst.matrix.sum(axis=0)
        for a, K in enumerate(inst.structured):
            assert pgrouplat.c_size(inst.params, K) == int(col[idx[a]]), (p, n, q, str(K))


def check_bound(quick: bool) -> None:
    top = {3: 4, 5: 3} if quick else {3: 6, 5: 6}
    for p in (3, 5):
        for n in range(2, top[p] + 1):
            rep = pgrouplat.audit(n, p, 2)
            assert all(b.ok for b in rep.per_k), (p, n)


def check_q_independence(quick: bool) -> None:
    for p in (7, 13):
        values = {pgrouplat.sd_fast(pgrouplat.make_params(p, 2, q)) for q in (2, 3)}
        oracle = {cayley.sd_exact(cayley.build_pgroup(p, 2, q)) for q in (2, 3)}
        assert len(values) == 1 and values == oracle, p


def check_abelian(quick: bool) -> None:
    for p, n in ((2, 1), (2, 3), (3, 2), (5, 2)) if quick else ((2, 1), (2, 4), (3, 3), (5, 2), (7, 2)):
        assert cayley.sd_exact(cayley.build_elementary_abelian(p, n)) == 1, (p, n)


CHECKS: list[tuple[str, bool, Callable]] = [
    ("counting exactness", True, check_counting),
    ("subspace enumeration", True, check_subspaces),
    ("pair profile", True, check_pair_profile),
    ("lattice size", True, check_lattice),
    ("predicate certification", True, check_predicate),
    ("sd agreement", True, check_sd_agreement),
    ("c_size oracle", True, check_c_size),
    ("per-subgroup bound", True, check_bound),
    ("q-independence", False, check_q_independence),
    ("abelian sanity", True, check_abelian),
]


@dataclass
class CheckResult:
    name: str
    passed: bool
    seconds: float
    detail: str = ""


def run_selftest(quick: bool = False, predicate: Predicate | None = None) -> list[CheckResult]:
    predicate = predicate or pgrouplat.permutes_structural
    results = []
    for name, in_quick, fn in CHECKS:
        if quick and not in_quick:
            continue
        start = time.perf_counter()
        try:
            if fn is check_predicate:
                fn(quick, predicate)
            else:
                fn(quick)
        except Exception as exc:  # any failure is reported against the check's name
            detail = "".join(traceback.format_exception_only(type(exc), exc)).strip()
            results.append(CheckResult(name, False, time.perf_counter() - start, detail))
        else:
            results.append(CheckResult(name, True, time.perf_counter() - start))
    return results
