import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from sdpgroup.gfspace import (
    Subspace,
    all_subspaces,
    canonicalize,
    coset_label,
    enumerate_subspaces,
    intersect,
    pair_profile,
    pair_profile_bruteforce,
    subspace_sum,
)
from sdpgroup.qcount import gaussian


def span_set(vectors, p, m):
    """All F_p-combinations of ``vectors``, as a frozenset."""
    out = set()
    for coeffs in product(range(p), repeat=len(vectors)):
        out.add(tuple(sum(a * v[j] for a, v in zip(coeffs, vectors)) % p for j in range(m)))
    return frozenset(out)


def test_canonicalize_examples():
    assert canonicalize([], 3, 2) == Subspace.zero(3, 2)
    assert canonicalize([(1, 2), (2, 4)], 5, 2).basis == ((1, 2),)
    S = canonicalize([(1, 0, 1), (0, 1, 1), (1, 1, 2)], 3, 3)
    assert S.basis == ((1, 0, 1), (0, 1, 1))
    assert frozenset(S.elements()) == span_set([(1, 0, 1), (0, 1, 1), (1, 1, 2)], 3, 3)


def test_canonicalize_errors():
    with pytest.raises(ValueError):
        canonicalize([(1, 0), (1, 0, 0)], 3, 2)
    with pytest.raises(ValueError):
        canonicalize([(1, 0)], 4, 2)


@pytest.mark.parametrize("p,m", [(2, 3), (3, 3), (5, 2), (3, 4)])
def test_canonical_form_is_basis_independent(p, m):
    rng = random.Random(1000 * p + m)
    for S in all_subspaces(p, m)[:: max(1, len(all_subspaces(p, m)) // 12)]:
        for _ in range(100):
            # random combinations of the basis plus redundant vectors, shuffled
            vecs = []
            for _ in range(S.dim + rng.randrange(3)):
                coeffs = [rng.randrange(p) for _ in range(S.dim)]
                vecs.append(tuple(sum(c * r[j] for c, r in zip(coeffs, S.basis)) % p for j in range(m)))
            vecs += list(S.basis)
            rng.shuffle(vecs)
            assert canonicalize(vecs, p, m) == S


def test_enumeration_examples():
    assert len(enumerate_subspaces(3, 2, 1)) == 4
    assert enumerate_subspaces(3, 2, 0) == [Subspace.zero(3, 2)]
    subs = enumerate_subspaces(3, 4, 2)
    assert len(subs) == 130
    vecs = [v for v in product(range(3), repeat=4) if any(v)]
    planes = {span_set([u, w], 3, 4) for u in vecs for w in vecs}
    planes = {P for P in planes if len(P) == 9}
    assert {frozenset(S.elements()) for S in subs} == planes
    with pytest.raises(ValueError):
        enumerate_subspaces(3, 2, 3)


def test_enumeration_order_is_deterministic():
    subs = enumerate_subspaces(2, 3, 1)
    assert [S.basis for S in subs][:3] == [((1, 0, 0),), ((1, 0, 1),), ((1, 1, 0),)]
    assert subs == enumerate_subspaces(2, 3, 1)


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("m", range(5))
def test_enumeration_counts(p, m):
    for k in range(m + 1):
        subs = enumerate_subspaces(p, m, k)
        assert len(subs) == len(set(subs)) == gaussian(m, p, k)
        assert all(S.dim == k for S in subs)


def test_sum_intersection_examples():
    a, b = enumerate_subspaces(3, 2, 1)[:2]
    assert subspace_sum(a, b) == Subspace.full(3, 2)
    assert intersect(a, b) == Subspace.zero(3, 2)
    assert subspace_sum(a, a) == intersect(a, a) == a
    T = canonicalize([(1, 0, 0), (0, 1, 0)], 3, 3)
    U = canonicalize([(0, 1, 0), (0, 0, 1)], 3, 3)
    meet = intersect(T, U)
    assert meet.basis == ((0, 1, 0),)
    assert set(meet.elements()) == set(T.elements()) & set(U.elements())
    assert subspace_sum(T, U) == Subspace.full(3, 3)


@pytest.mark.parametrize("p,m", [(2, 3), (3, 3), (5, 2), (2, 2)])
def test_modularity_and_brute_force_meet(p, m):
    subs = all_subspaces(p, m)
    for T in subs:
        for U in subs:
            s, i = subspace_sum(T, U), intersect(T, U)
            assert s.dim + i.dim == T.dim + U.dim
            assert frozenset(i.elements()) == frozenset(T.elements()) & frozenset(U.elements())


def test_mismatched_ambient():
    with pytest.raises(ValueError):
        intersect(Subspace.zero(3, 2), Subspace.zero(3, 3))
    with pytest.raises(ValueError):
        subspace_sum(Subspace.zero(3, 2), Subspace.zero(5, 2))


def test_coset_label_examples():
    assert coset_label(Subspace.full(3, 2), (2, 1)) == (0, 0)
    assert coset_label(Subspace.zero(3, 2), (2, 1)) == (2, 1)
    T = canonicalize([(1, 0)], 3, 2)
    assert coset_label(T, (2, 1)) == (0, 1)
    assert tuple((a - b) % 3 for a, b in zip((2, 1), (0, 1))) in T


@pytest.mark.parametrize("p,m", [(2, 3), (3, 3), (5, 2)])
def test_coset_labels_partition(p, m):
    vecs = list(product(range(p), repeat=m))
    for T in all_subspaces(p, m):
        labels = {v: coset_label(T, v) for v in vecs}
        assert len(set(labels.values())) == p ** (m - T.dim)
        for v in vecs:
            for w in vecs:
                diff = tuple((a - b) % p for a, b in zip(v, w))
                assert (labels[v] == labels[w]) == (diff in T)


def test_pair_profile_examples():
    prof = pair_profile(3, 2)
    assert prof.counts[1][1][1] == 4
    assert prof.counts[1][1][0] == 12
    assert prof.counts[2][2][2] == 1
    assert pair_profile(3, 3).counts[1][2][1] == 52
    assert pair_profile_bruteforce(3, 3).counts[1][2][1] == 52


@pytest.mark.parametrize("p", [2, 3, 5])
@pytest.mark.parametrize("m", range(5))
def test_pair_profile_closed_form_matches_enumeration(p, m):
    prof = pair_profile(p, m)
    assert prof == pair_profile_bruteforce(p, m)
    a = sum(gaussian(m, p, k) for k in range(m + 1))
    assert prof.total() == a * a
    for s in range(m + 1):
        for t in range(m + 1):
            for i in range(m + 1):
                assert prof.counts[s][t][i] == prof.counts[t][s][i]
                if not max(0, s + t - m) <= i <= min(s, t):
                    assert prof.counts[s][t][i] == 0


@settings(max_examples=60)
@given(st.sampled_from([2, 3, 5, 7]), st.integers(1, 5), st.data())
def test_random_spans(p, m, data):
    vecs = data.draw(st.lists(st.tuples(*[st.integers(0, p - 1)] * m), max_size=4))
    S = canonicalize(vecs, p, m)
    assert all(v in S for v in vecs)
    assert S.dim <= min(m, len(vecs))
    if p ** m <= 250 and len(vecs) <= 4:
        assert frozenset(S.elements()) == span_set(vecs, p, m) if vecs else True
