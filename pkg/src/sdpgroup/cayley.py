"""Brute-force group oracle built on explicit multiplication tables.

Groups are small (order at most :data:`MAX_ORDER`) and every answer here
comes from element-level computation: subgroups are found by closure
saturation, permutability by comparing product sets ``AB`` and ``BA``.
Subgroups carry their members as a Python int bitmask.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

import numpy as np

from .gfspace import is_prime

__all__ = [
    "MAX_ORDER",
    "CayleyGroup",
    "SubgroupSet",
    "build_elementary_abelian",
    "build_cyclic",
    "find_r",
    "build_pgroup",
    "pgroup_index",
    "build_dihedral",
    "build_quaternion",
    "build_semidihedral",
    "as_subgroup",
    "generated_subgroup",
    "all_subgroups",
    "derived_subgroup",
    "is_solvable",
    "permutes",
    "permutability_matrix",
    "sd_exact",
    "normal_subgroups",
    "is_normal",
    "commuting_set_size",
]

MAX_ORDER = 400


def _mask(indices: Iterable[int]) -> int:
    out = 0
    for i in indices:
        out |= 1 << i
    return out


def _bits(mask: int) -> list[int]:
    out = []
    while mask:
        low = mask & -mask
        out.append(low.bit_length() - 1)
        mask ^= low
    return out


@dataclass(frozen=True, eq=False)
class CayleyGroup:
    """Finite group given by its multiplication table.

    ``table[a, b]`` is the index of the product ``a*b``.  Construction checks
    the Latin-square property, identity, inverses and (exhaustively)
    associativity.
    """

    table: np.ndarray
    labels: tuple[str, ...]
    name: str = "G"
    identity: int = field(init=False)
    inverse: np.ndarray = field(init=False, repr=False)

    def __post_init__(self) -> None:
        t = np.asarray(self.table, dtype=np.int64)
        n = t.shape[0]
        if t.shape != (n, n) or n == 0:
            raise ValueError("table must be a non-empty square array")
        if n > MAX_ORDER:
            raise ValueError(f"order {n} exceeds the oracle cap {MAX_ORDER}")
        if len(self.labels) != n:
            raise ValueError("need one label per element")
        full = np.arange(n)
        if not (np.sort(t, axis=1) == full).all() or not (np.sort(t, axis=0) == full[:, None]).all():
            raise ValueError("table is not a Latin square")
        ids = [e for e in range(n) if (t[e] == full).all() and (t[:, e] == full).all()]
        if len(ids) != 1:
            raise ValueError("no two-sided identity")
        e = ids[0]
        inv = np.argmax(t == e, axis=1)
        if not (t[full, inv] == e).all() or not (t[inv, full] == e).all():
            raise ValueError("missing inverses")
        # (ab)c == a(bc), one left factor at a time
        for a in range(n):
            if not (t[t[a]] == t[a][t]).all():
                raise ValueError(f"associativity fails with left factor {self.labels[a]}")
        t.setflags(write=False)
        inv.setflags(write=False)
        object.__setattr__(self, "table", t)
        object.__setattr__(self, "identity", e)
        object.__setattr__(self, "inverse", inv)

    @property
    def order(self) -> int:
        return self.table.shape[0]

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def element_order(self, g: int) -> int:
        k, x = 1, g
        while x != self.identity:
            x = int(self.table[x, g])
            k += 1
        return k

    def is_abelian(self) -> bool:
        return bool((self.table == self.table.T).all())

    def to_json(self) -> str:
        """``{order, labels, table}`` document."""
        return json.dumps(
            {"order": self.order, "labels": list(self.labels), "table": self.table.tolist()}
        )

    @classmethod
    def from_json(cls, text: str) -> CayleyGroup:
        doc = json.loads(text)
        if len(doc["table"]) != doc["order"]:
            raise ValueError("order does not match table size")
        return cls(np.array(doc["table"]), tuple(doc["labels"]))

    def __repr__(self) -> str:
        return f"CayleyGroup({self.name}, order={self.order})"


@dataclass(frozen=True)
class SubgroupSet:
    """Subgroup of a :class:`CayleyGroup` as a membership bitmask."""

    n: int
    mask: int

    @property
    def order(self) -> int:
        return self.mask.bit_count()

    @cached_property
    def members(self) -> tuple[int, ...]:
        return tuple(_bits(self.mask))

    def __contains__(self, g: int) -> bool:
        return bool(self.mask >> g & 1)

    def __le__(self, other: SubgroupSet) -> bool:
        return self.mask & ~other.mask == 0

    def sort_key(self) -> tuple[int, tuple[int, ...]]:
        return (self.order, self.members)


def as_subgroup(G: CayleyGroup, members: Iterable[int]) -> SubgroupSet:
    """Validate ``members`` as a subgroup of ``G``."""
    ms = sorted(set(members))
    t = G.table
    sub = np.asarray(ms)
    if G.identity not in ms:
        raise ValueError("not a subgroup: identity missing")
    if not np.isin(t[np.ix_(sub, sub)], sub).all():
        raise ValueError("not a subgroup: not closed under product")
    if G.order % len(ms):
        raise ArithmeticError("subgroup order does not divide group order")
    return SubgroupSet(G.order, _mask(ms))


# ----------------------------------------------------------------------------
# constructors


def build_cyclic(n: int) -> CayleyGroup:
    idx = np.arange(n)
    return CayleyGroup((idx[:, None] + idx[None, :]) % n, tuple(f"{i}" for i in range(n)), f"C{n}")


def build_elementary_abelian(p: int, n: int) -> CayleyGroup:
    """``Z_p^n``; element ``i`` has base-``p`` digits as coordinates (least significant first)."""
    if not is_prime(p):
        raise ValueError(f"p must be prime, got {p}")
    if n < 0 or p**n > MAX_ORDER:
        raise ValueError(f"order {p}^{n} exceeds the oracle cap {MAX_ORDER}")
    vecs = list(_vectors(p, n))
    index = {v: i for i, v in enumerate(vecs)}
    table = np.array(
        [[index[tuple((a + b) % p for a, b in zip(u, v))] for v in vecs] for u in vecs]
    ).reshape(len(vecs), len(vecs))
    labels = tuple("(" + ",".join(map(str, v)) + ")" for v in vecs)
    return CayleyGroup(table, labels, f"Z{p}^{n}")


def _vectors(p: int, m: int):
    # least significant coordinate first, matching pgroup_index
    for digits in product(range(p), repeat=m):
        yield tuple(reversed(digits))


def _mult_order(r: int, p: int) -> int:
    k, x = 1, r % p
    while x != 1:
        x = x * r % p
        k += 1
    return k


def find_r(p: int, q: int) -> int:
    """Smallest ``r`` in ``[2, p-1]`` of multiplicative order exactly ``q`` mod ``p``."""
    if not (is_prime(p) and is_prime(q)) or q == p or (p - 1) % q:
        raise ValueError(f"no nonabelian P-group for p={p}, q={q}: need primes with q | p-1")
    for r in range(2, p):
        if _mult_order(r, p) == q:
            return r
    raise AssertionError("unreachable: an element of order q exists when q | p-1")


def pgroup_index(p: int, m: int, v: Sequence[int], e: int) -> int:
    """Element index of ``(v, e)`` in :func:`build_pgroup`'s encoding."""
    i = 0
    for x in reversed(v):
        i = i * p + x % p
    return e * p**m + i


def build_pgroup(p: int, n: int, q: int, r: int | None = None) -> CayleyGroup:
    """The nonabelian group ``H<x>`` with ``H = Z_p^(n-1)``, ``o(x) = q``, ``x^-1 h x = h^r``.

    Elements are pairs ``(v, e)`` with product ``(v, e)(w, f) = (v + s^e w, e + f)``,
    ``s = r^-1 mod p``.  ``r`` defaults to :func:`find_r`.
    """
    if p == 2 or not is_prime(p):
        raise ValueError(f"p must be an odd prime, got {p}")
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    if r is None:
        r = find_r(p, q)
    else:
        find_r(p, q)
        if _mult_order(r, p) != q:
            raise ValueError(f"r={r} does not have order {q} mod {p}")
    m = n - 1
    N = p**m * q
    if N > MAX_ORDER:
        raise ValueError(f"order {N} exceeds the oracle cap {MAX_ORDER}")
    s = pow(r, -1, p)
    vecs = np.array(list(_vectors(p, m)), dtype=np.int64).reshape(p**m, m)
    weights = p ** np.arange(m, dtype=np.int64)
    elems = [(v, e) for e in range(q) for v in vecs]
    table = np.empty((N, N), dtype=np.int64)
    for i, (v, e) in enumerate(elems):
        se = pow(s, e, p)
        w = (v[None, :] + se * vecs) % p  # v + s^e * w for every w
        base = w @ weights
        for f in range(q):
            table[i, f * p**m : (f + 1) * p**m] = ((e + f) % q) * p**m + base
    labels = tuple(
        "(" + ",".join(map(str, v)) + ")" + ("" if e == 0 else "x" if e == 1 else f"x^{e}")
        for v, e in elems
    )
    G = CayleyGroup(table, labels, f"G({p},{n},{q})")
    # conjugation x^-1 h x must be the r-th power on H
    x = pgroup_index(p, m, (0,) * m, 1)
    xinv = int(G.inverse[x])
    for h in range(p**m):
        conj = G.mul(G.mul(xinv, h), x)
        power = G.identity
        for _ in range(r):
            power = G.mul(power, h)
        if conj != power:
            raise AssertionError(f"conjugation law fails at {labels[h]}")
    return G


def _presented(N: int, name: str, rule) -> CayleyGroup:
    # elements a^i b^j, i < N/2, j < 2, indexed i + j*N/2
    half = N // 2
    table = np.empty((N, N), dtype=np.int64)
    for j1 in range(2):
        for i1 in range(half):
            for j2 in range(2):
                for i2 in range(half):
                    i, j = rule(i1, j1, i2, j2, half)
                    table[i1 + j1 * half, i2 + j2 * half] = i % half + j * half
    labels = tuple(f"a^{i}" + ("b" if j else "") for j in range(2) for i in range(half))
    return CayleyGroup(table, labels, name)


def _two_power(N: int, least: int) -> int:
    if N < least or N & (N - 1) or N > MAX_ORDER:
        raise ValueError(f"order must be a power of 2 with {least} <= N <= {MAX_ORDER}; got {N}")
    return N


def build_dihedral(N: int) -> CayleyGroup:
    """Dihedral group of order ``N`` (``N`` even, ``N >= 4``): ``b a b^-1 = a^-1``."""
    if N < 4 or N % 2 or N > MAX_ORDER:
        raise ValueError(f"dihedral order must be even, 4 <= N <= {MAX_ORDER}; got {N}")

    def rule(i1, j1, i2, j2, half):
        return (i1 + (-i2 if j1 else i2), (j1 + j2) % 2)

    return _presented(N, f"D{N}", rule)


def build_quaternion(N: int) -> CayleyGroup:
    """Generalized quaternion group of order ``N = 2**k >= 8``: ``b^2 = a^(N/4)``, ``b a b^-1 = a^-1``."""
    _two_power(N, 8)

    def rule(i1, j1, i2, j2, half):
        i = i1 + (-i2 if j1 else i2)
        if j1 and j2:
            i += half // 2
        return (i, (j1 + j2) % 2)

    return _presented(N, f"Q{N}", rule)


def build_semidihedral(N: int) -> CayleyGroup:
    """Quasi-dihedral group of order ``N = 2**k >= 16``: ``b^2 = 1``, ``b a b^-1 = a^(N/4 - 1)``."""
    _two_power(N, 16)

    def rule(i1, j1, i2, j2, half):
        return (i1 + (i2 * (half // 2 - 1) if j1 else i2), (j1 + j2) % 2)

    return _presented(N, f"SD{N}", rule)


# ----------------------------------------------------------------------------
# subgroup lattice


def _extend(G: CayleyGroup, members: list[int], mask: int, gens: list[int]) -> tuple[list[int], int]:
    """Closure of a subgroup (``members``/``mask``) with extra generators, by right cosets."""
    t = G.table
    base = np.asarray(members)
    elems = list(members)
    reps = [G.identity]
    i = 0
    while i < len(reps):
        x = reps[i]
        i += 1
        for s in gens:
            y = int(t[x, s])
            if not mask >> y & 1:
                coset = t[base, y].tolist()
                elems.extend(coset)
                mask |= _mask(coset)
                reps.append(y)
    return elems, mask


def generated_subgroup(G: CayleyGroup, gens: Iterable[int]) -> SubgroupSet:
    gens = list(gens)
    e = G.identity
    elems, mask = _extend(G, [e], 1 << e, gens)
    return SubgroupSet(G.order, mask)


def derived_subgroup(G: CayleyGroup, S: SubgroupSet | None = None) -> SubgroupSet:
    """Commutator subgroup of ``S`` (default: of ``G``)."""
    t, inv = G.table, G.inverse
    members = np.arange(G.order) if S is None else np.asarray(S.members)
    a, b = members[:, None], members[None, :]
    comms = np.unique(t[t[inv[a], inv[b]], t[a, b]])
    return generated_subgroup(G, comms.tolist())


def is_solvable(G: CayleyGroup) -> bool:
    S = SubgroupSet(G.order, (1 << G.order) - 1)
    while S.order > 1:
        D = derived_subgroup(G, S)
        if D == S:
            return False
        S = D
    return True


def _saturation(G: CayleyGroup) -> list[int]:
    e = G.identity
    cyclic: dict[int, int] = {}
    for g in range(G.order):
        mask = generated_subgroup(G, [g]).mask
        cyclic.setdefault(mask, g)
    found: dict[int, tuple[list[int], list[int]]] = {1 << e: ([e], [])}
    for mask, g in cyclic.items():
        found.setdefault(mask, (_bits(mask), [g]))
    queue = list(found)
    cyc = list(cyclic.items())
    while queue:
        mask = queue.pop()
        members, gens = found[mask]
        for cmask, g in cyc:
            if cmask & ~mask == 0:
                continue
            _, new = _extend(G, members, mask, gens + [g])
            if new not in found:
                found[new] = (_bits(new), gens + [g])
                queue.append(new)
    return list(found)


def _cyclic_extension(G: CayleyGroup) -> list[int]:
    # every subgroup U != 1 of a solvable group is V<g> with V normal of prime index in U
    t, inv, N = G.table, G.inverse, G.order
    everything = np.arange(N)
    found = {1 << G.identity}
    layer = [1 << G.identity]
    while layer:
        upcoming = []
        for mask in layer:
            members = np.asarray(_bits(mask))
            inside = np.zeros(N, dtype=bool)
            inside[members] = True
            conj = t[t[inv[everything][:, None], members[None, :]], everything[:, None]]
            normalizer = inside[conj].all(axis=1)
            covered = inside.copy()
            for g in np.nonzero(normalizer & ~inside)[0].tolist():
                if covered[g]:
                    continue
                x, k = g, 1
                while not inside[x]:
                    x = int(t[x, g])
                    k += 1
                if not is_prime(k):
                    continue
                cosets, y = [members], g
                for _ in range(k - 1):
                    cosets.append(t[members, y])
                    y = int(t[y, g])
                elems = np.concatenate(cosets)
                covered[elems] = True
                new = _mask(elems.tolist())
                if new not in found:
                    found.add(new)
                    upcoming.append(new)
        layer = upcoming
    return list(found)


def all_subgroups(G: CayleyGroup, method: str = "auto") -> list[SubgroupSet]:
    """Every subgroup, sorted by (order, member list).

    ``method="saturation"`` seeds with the cyclic subgroups and closes each
    known subgroup with each cyclic generator until nothing new appears.
    ``method="extension"`` (solvable groups only) grows each subgroup ``V``
    by elements ``g`` normalizing it with ``g^l`` in ``V`` for a prime
    ``l``.  ``"auto"`` uses extension when ``G`` is solvable.
    """
    if method == "auto":
        method = "extension" if is_solvable(G) else "saturation"
    if method == "extension":
        masks = _cyclic_extension(G)
    elif method == "saturation":
        masks = _saturation(G)
    else:
        raise ValueError(f"unknown method {method!r}")
    subs = [SubgroupSet(G.order, m) for m in masks]
    for S in subs:
        if G.order % S.order:
            raise ArithmeticError("Lagrange violated: enumeration bug")
    subs.sort(key=SubgroupSet.sort_key)
    return subs


def _product_mask(G: CayleyGroup, A: SubgroupSet, B: SubgroupSet) -> int:
    prods = G.table[np.ix_(np.asarray(A.members), np.asarray(B.members))]
    return _mask(np.unique(prods).tolist())


def permutes(G: CayleyGroup, A: SubgroupSet, B: SubgroupSet, check: bool = True) -> bool:
    """Whether the product sets ``AB`` and ``BA`` coincide.

    With ``check`` the answer is cross-checked against "``AB`` is closed
    under multiplication".
    """
    ab = _product_mask(G, A, B)
    ba = _product_mask(G, B, A)
    result = ab == ba
    if check:
        members = np.asarray(_bits(ab))
        closed = bool(np.isin(G.table[np.ix_(members, members)], members).all())
        if closed != result:
            raise AssertionError("AB == BA disagrees with AB being a subgroup")
    return result


def _packed_rows(G: CayleyGroup, subs: Sequence[SubgroupSet]) -> np.ndarray:
    member = np.zeros((len(subs), G.order), dtype=bool)
    for i, S in enumerate(subs):
        member[i, list(S.members)] = True
    return member


def permutability_matrix(
    G: CayleyGroup, subs: Sequence[SubgroupSet], check: bool = True
) -> np.ndarray:
    """Boolean matrix ``P[i, j] = (subs[i] subs[j] == subs[j] subs[i])``.

    All product sets are formed explicitly: for a fixed ``A`` the rows
    ``AB`` (union of left translates ``aB``) and ``BA`` (union of right
    translates ``Ba``) are built for every ``B`` at once on packed bitsets.
    With ``check`` every ``AB`` is also looked up among the subgroups, and
    "``AB`` is a subgroup" must agree with ``AB == BA``.
    """
    t, inv = G.table, G.inverse
    member = _packed_rows(G, subs)
    L = len(subs)
    # left[g][j] = packed g*B_j ;  x in gB  <=>  g^-1 x in B
    left = np.stack([np.packbits(member[:, t[inv[g]]], axis=1) for g in range(G.order)])
    right = np.stack([np.packbits(member[:, t[:, inv[g]]], axis=1) for g in range(G.order)])
    known = {row.tobytes() for row in np.packbits(member, axis=1)}
    P = np.zeros((L, L), dtype=bool)
    for i, A in enumerate(subs):
        idx = list(A.members)
        ab = np.bitwise_or.reduce(left[idx], axis=0)
        ba = np.bitwise_or.reduce(right[idx], axis=0)
        row = (ab == ba).all(axis=1)
        if check:
            is_sub = np.fromiter((r.tobytes() in known for r in ab), dtype=bool, count=L)
            if not (is_sub == row).all():
                raise AssertionError(f"AB == BA disagrees with AB being a subgroup (A = #{i})")
        P[i] = row
    return P


def sd_exact(G: CayleyGroup, subs: Sequence[SubgroupSet] | None = None) -> Fraction:
    """Fraction of ordered subgroup pairs ``(A, B)`` with ``AB = BA``."""
    if subs is None:
        subs = all_subgroups(G)
    P = permutability_matrix(G, subs)
    return Fraction(int(P.sum()), len(subs) ** 2)


def is_normal(G: CayleyGroup, A: SubgroupSet) -> bool:
    """Whether ``g^-1 A g = A`` for every element ``g``."""
    t, inv = G.table, G.inverse
    members = np.asarray(A.members)
    inside = np.zeros(G.order, dtype=bool)
    inside[members] = True
    g = np.arange(G.order)[:, None]
    conj = t[t[inv[g], members[None, :]], g]
    return bool(inside[conj].all())


def normal_subgroups(G: CayleyGroup, subs: Sequence[SubgroupSet] | None = None) -> list[SubgroupSet]:
    if subs is None:
        subs = all_subgroups(G)
    return [A for A in subs if is_normal(G, A)]


def commuting_set_size(
    G: CayleyGroup, K: SubgroupSet, subs: Sequence[SubgroupSet] | None = None
) -> int:
    """Number of subgroups ``A`` with ``AK = KA``."""
    if subs is None:
        subs = all_subgroups(G)
    if K not in subs:
        raise ValueError("K is not a subgroup of G")
    return sum(permutes(G, A, K, check=False) for A in subs)
