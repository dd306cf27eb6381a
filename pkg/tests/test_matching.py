"""Matching kernel, star packing / Hall violators, cascading decomposition."""



import pytest

from treeramsey import rand
from treeramsey.matching import (
    audit_cascade,
    cascade,
    has_augmenting_path,
    max_matching,
    star_packing,
)


def brute_force_matching_size(adj, nb):
    """Exhaustive maximum matching size (oracle): try every assignment."""
    na = len(adj)
    best = 0

    def rec(a, used_b, size):
        nonlocal best
        if size + (na - a) <= best:
            return
        if a == na:
            best = max(best, size)
            return
        for b in adj[a]:
            if not (used_b >> b) & 1:
                rec(a + 1, used_b | (1 << b), size + 1)
        rec(a + 1, used_b, size)  # leave a unmatched

    rec(0, 0, 0)
    return best


def random_bipartite(na, nb, p, seed):
    rng = rand.stream(seed, "bip", na, nb)
    return [[b for b in range(nb) if rng.random() < p] for a in range(na)]


def test_matching_complete():
    adj = [[0, 1, 2]] * 3
    assert len(max_matching(adj, 3)) == 3


def test_matching_empty():
    assert max_matching([[], []], 2) == {}


def test_matching_against_bruteforce():
    for seed in range(40):
        adj = random_bipartite(8, 8, 0.3, seed)
        m = max_matching(adj, 8)
        for a, b in m.items():
            assert b in adj[a]
        assert len(set(m.values())) == len(m)
        assert len(m) == brute_force_matching_size(adj, 8)


def test_star_packing_unit_demands_is_matching():
    adj = [[0], [1], [2]]
    stars, viol = star_packing(adj, 3, [1, 1, 1])
    assert viol is None
    assert sorted(x for leaves in stars.values() for x in leaves) == [0, 1, 2]


def test_star_packing_single_overdemand():
    adj = [[0, 1]]
    stars, viol = star_packing(adj, 2, [3])
    assert stars is None and viol == [0]


def test_star_packing_agrees_with_bruteforce():
    # existence of the packing == expanded matching saturates all clones;
    # cross-check against brute force on the expanded graph
    for seed in range(25):
        rng = rand.stream(seed, "sp")
        adj = random_bipartite(6, 12, 0.3, seed + 100)
        demands = [int(rng.integers(0, 3)) for _ in range(6)]
        stars, viol = star_packing(adj, 12, demands)
        expanded = []
        for a in range(6):
            expanded.extend([adj[a]] * demands[a])
        want = brute_force_matching_size(expanded, 12)
        if stars is not None:
            # stars are vertex-disjoint, centered in A, with exact demands
            used = [b for leaves in stars.values() for b in leaves]
            assert len(used) == len(set(used))
            for a, leaves in stars.items():
                assert len(leaves) == demands[a]
                assert all(b in adj[a] for b in leaves)
            assert want == sum(demands)
        else:
            assert want < sum(demands)
            # violator satisfies the strict Hall inequality
            nbhd = set()
            for a in viol:
                nbhd.update(adj[a])
            assert len(nbhd) < sum(demands[a] for a in viol)


def test_cascade_hand_example():
    # A = {a0,a1}, B = {b0,b1}, edges a0b0, a0b1; M = {a0-b0}
    adj = [[0, 1], []]
    m = {0: 0}
    dec = cascade(adj, 2, m)
    assert dec.Aplus == {0} and dec.Bminus == {0}
    assert dec.Abar == set() and dec.Bbar == set()
    assert dec.Aprime == {1} and dec.Bprime == {1}
    audit_cascade(adj, dec)


def test_cascade_perfect_matching_vacuous():
    adj = [[0, 1], [0, 1]]
    m = {0: 0, 1: 1}
    dec = cascade(adj, 2, m)
    assert dec.Abar == {0, 1} and dec.Bbar == {0, 1}
    audit_cascade(adj, dec)


def test_cascade_refuses_non_maximum():
    adj = [[0], [0, 1]]
    with pytest.raises(ValueError):
        cascade(adj, 2, {1: 0})  # a0 and b1 both free, a1's edge misused


def test_cascade_random_audits():
    for seed in range(500):
        adj = random_bipartite(10, 10, 0.18, seed)
        m = max_matching(adj, 10)
        assert not has_augmenting_path(adj, 10, m)
        dec = cascade(adj, 10, m)
        audit_cascade(adj, dec)
        # cascade preserves the matching itself
        assert dict(dec.M) == m
