"""Subspaces of ``F_p^m`` in reduced row-echelon form.

A :class:`Subspace` is identified by its reduced echelon basis, so equality
and hashing are structural.  Vectors are plain tuples of residues.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product
from typing import Iterable, Iterator, Sequence

from .qcount import gaussian

__all__ = [
    "Subspace",
    "PairProfile",
    "is_prime",
    "canonicalize",
    "enumerate_subspaces",
    "iter_subspaces",
    "all_subspaces",
    "subspace_sum",
    "intersect",
    "coset_label",
    "coset_labels",
    "pair_profile",
    "pair_profile_bruteforce",
]

MAX_PRIME = 1 << 16

Vector = tuple[int, ...]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    d = 3
    while d * d <= p:
        if p % d == 0:
            return False
        d += 2
    return True


def _check_prime(p: int) -> None:
    if not is_prime(p) or p >= MAX_PRIME:
        raise ValueError(f"modulus must be a prime below 2**16, got {p}")


def _rref(rows: list[list[int]], p: int, ncols: int) -> list[list[int]]:
    """Reduced row-echelon form of ``rows`` over F_p (in place; zero rows dropped)."""
    pivot_row = 0
    nrows = len(rows)
    for col in range(ncols):
        sel = next((r for r in range(pivot_row, nrows) if rows[r][col] % p), None)
        if sel is None:
            continue
        rows[pivot_row], rows[sel] = rows[sel], rows[pivot_row]
        prow = rows[pivot_row]
        inv = pow(prow[col], -1, p)
        for j in range(ncols):
            prow[j] = prow[j] * inv % p
        for r in range(nrows):
            if r != pivot_row:
                f = rows[r][col] % p
                if f:
                    row = rows[r]
                    for j in range(ncols):
                        row[j] = (row[j] - f * prow[j]) % p
        pivot_row += 1
        if pivot_row == nrows:
            break
    return rows[:pivot_row]


@dataclass(frozen=True, eq=True)
class Subspace:
    """Subspace of ``F_p^m`` stored as its reduced echelon basis."""

    p: int
    m: int
    basis: tuple[Vector, ...]

    @property
    def dim(self) -> int:
        return len(self.basis)

    def __hash__(self) -> int:
        return self._hash

    @cached_property
    def _hash(self) -> int:
        return hash((self.p, self.m, self.basis))

    @cached_property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(row) if x) for row in self.basis)

    @classmethod
    def zero(cls, p: int, m: int) -> Subspace:
        return cls(p, m, ())

    @classmethod
    def full(cls, p: int, m: int) -> Subspace:
        return cls(p, m, tuple(tuple(int(i == j) for j in range(m)) for i in range(m)))

    def reduce(self, v: Sequence[int]) -> Vector:
        """Representative of ``v + self`` with zeros at every pivot column."""
        w = [x % self.p for x in v]
        for row, c in zip(self.basis, self.pivots):
            f = w[c]
            if f:
                w = [(a - f * b) % self.p for a, b in zip(w, row)]
        return tuple(w)

    def __contains__(self, v: Sequence[int]) -> bool:
        return not any(self.reduce(v))

    def elements(self) -> Iterator[Vector]:
        """All ``p**dim`` vectors of the subspace."""
        p, m = self.p, self.m
        for coeffs in product(range(p), repeat=self.dim):
            v = [0] * m
            for a, row in zip(coeffs, self.basis):
                if a:
                    for j in range(m):
                        v[j] = (v[j] + a * row[j]) % p
            yield tuple(v)

    def __str__(self) -> str:
        rows = ", ".join("(" + ",".join(map(str, r)) + ")" for r in self.basis)
        return f"<{rows}> <= F_{self.p}^{self.m}"


def canonicalize(vectors: Iterable[Sequence[int]], p: int, m: int) -> Subspace:
    """Span of ``vectors`` in canonical (reduced echelon) form."""
    _check_prime(p)
    rows = []
    for v in vectors:
        if len(v) != m:
            raise ValueError(f"vector {tuple(v)} does not lie in F_{p}^{m}")
        rows.append([x % p for x in v])
    return Subspace(p, m, tuple(tuple(r) for r in _rref(rows, p, m)))


def iter_subspaces(p: int, m: int, k: int) -> Iterator[Subspace]:
    """Dimension-``k`` subspaces ordered by pivot set, then by free entries."""
    _check_prime(p)
    if not 0 <= k <= m:
        raise ValueError(f"need 0 <= k <= m, got k={k}, m={m}")
    for pivots in combinations(range(m), k):
        pivset = set(pivots)
        free = [(r, j) for r, c in enumerate(pivots) for j in range(c + 1, m) if j not in pivset]
        for values in product(range(p), repeat=len(free)):
            rows = [[0] * m for _ in range(k)]
            for r, c in enumerate(pivots):
                rows[r][c] = 1
            for (r, j), x in zip(free, values):
                rows[r][j] = x
            yield Subspace(p, m, tuple(tuple(r) for r in rows))


def enumerate_subspaces(p: int, m: int, k: int) -> list[Subspace]:
    return list(iter_subspaces(p, m, k))


def all_subspaces(p: int, m: int) -> list[Subspace]:
    """Every subspace of ``F_p^m``, by dimension then canonical order."""
    return [S for k in range(m + 1) for S in iter_subspaces(p, m, k)]


def _same_ambient(T: Subspace, U: Subspace) -> None:
    if (T.p, T.m) != (U.p, U.m):
        raise ValueError(f"ambient mismatch: F_{T.p}^{T.m} vs F_{U.p}^{U.m}")


def subspace_sum(T: Subspace, U: Subspace) -> Subspace:
    _same_ambient(T, U)
    if T.dim == T.m or U.dim == 0:
        return T
    if U.dim == U.m or T.dim == 0:
        return U
    rows = [list(r) for r in T.basis + U.basis]
    return Subspace(T.p, T.m, tuple(tuple(r) for r in _rref(rows, T.p, T.m)))


def intersect(T: Subspace, U: Subspace) -> Subspace:
    """Intersection by the Zassenhaus block elimination."""
    _same_ambient(T, U)
    p, m = T.p, T.m
    if T.dim == 0 or U.dim == m:
        return T
    if U.dim == 0 or T.dim == m:
        return U
    rows = [list(r) + list(r) for r in T.basis] + [list(r) + [0] * m for r in U.basis]
    red = _rref(rows, p, 2 * m)
    meet = [r[m:] for r in red if not any(r[:m])]
    return Subspace(p, m, tuple(tuple(r) for r in _rref(meet, p, m)))


def coset_label(T: Subspace, v: Sequence[int]) -> Vector:
    """Canonical representative of the coset ``v + T``."""
    if len(v) != T.m:
        raise ValueError(f"vector {tuple(v)} does not lie in F_{T.p}^{T.m}")
    return T.reduce(v)


def coset_labels(T: Subspace) -> Iterator[Vector]:
    """The ``p**(m - dim T)`` canonical coset labels of ``T``, lexicographically."""
    free = [j for j in range(T.m) if j not in set(T.pivots)]
    for values in product(range(T.p), repeat=len(free)):
        v = [0] * T.m
        for j, x in zip(free, values):
            v[j] = x
        yield tuple(v)


@dataclass(frozen=True)
class PairProfile:
    """``counts[s][t][i]``: ordered pairs (T, U) with dims s, t and ``dim(T & U) = i``."""

    p: int
    m: int
    counts: tuple[tuple[tuple[int, ...], ...], ...]

    def total(self) -> int:
        return sum(c for plane in self.counts for row in plane for c in row)

    def cells(self) -> Iterator[tuple[int, int, int, int]]:
        """Nonzero cells as ``(s, t, i, count)``."""
        for s, plane in enumerate(self.counts):
            for t, row in enumerate(plane):
                for i, c in enumerate(row):
                    if c:
                        yield s, t, i, c


def pair_profile(p: int, m: int) -> PairProfile:
    """Closed-form pair profile.

    For fixed T of dimension s, the U of dimension t meeting T in dimension i
    number ``[s choose i] [m-s choose t-i] p**((s-i)(t-i))``.
    """
    _check_prime(p)
    counts = [[[0] * (m + 1) for _ in range(m + 1)] for _ in range(m + 1)]
    for s in range(m + 1):
        a_s = gaussian(m, p, s)
        for t in range(m + 1):
            for i in range(max(0, s + t - m), min(s, t) + 1):
                counts[s][t][i] = (
                    a_s * gaussian(s, p, i) * gaussian(m - s, p, t - i) * p ** ((s - i) * (t - i))
                )
    return PairProfile(p, m, tuple(tuple(tuple(r) for r in pl) for pl in counts))


def pair_profile_bruteforce(p: int, m: int) -> PairProfile:
    """Pair profile by double enumeration, with subspaces as element bitmasks."""
    _check_prime(p)
    index = {v: i for i, v in enumerate(product(range(p), repeat=m))}
    subs = []
    for S in all_subspaces(p, m):
        mask = 0
        for v in S.elements():
            mask |= 1 << index[v]
        subs.append((S.dim, mask))
    # popcount p**i -> i
    log = {p**i: i for i in range(m + 1)}
    counts = [[[0] * (m + 1) for _ in range(m + 1)] for _ in range(m + 1)]
    for s, ms in subs:
        for t, mt in subs:
            counts[s][t][log[(ms & mt).bit_count()]] += 1
    return PairProfile(p, m, tuple(tuple(tuple(r) for r in pl) for pl in counts))
