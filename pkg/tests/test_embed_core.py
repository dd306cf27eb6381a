"""Embedding kernels: greedy, exact mono-copy search, path cover, bare paths."""

from itertools import permutations

import pytest

from treeramsey import rand
from treeramsey.embed_core import (
    Embedding,
    embed_bare_paths_bipartite,
    embed_bare_paths_dense,
    find_mono_copy,
    greedy_embed,
    greedy_embed_bipartite,
    hamilton_cycle,
    nth_set_bit,
    validate_embedding,
)
from treeramsey.errors import HypothesisError
from treeramsey.rbgraph import RBGraph, burr_type1, iter_bits, mask_of, perturb
from treeramsey.trees import Tree, bipartition, enumerate_trees, random_tree
from treeramsey.decomp import bare_paths

from test_trees import path, star
from test_rbgraph import random_coloring


def all_red(n):
    full = (1 << n) - 1
    return RBGraph(n, [full & ~(1 << v) for v in range(n)])


def oracle_has_copy(g, t, color):
    """Naive permutation-search oracle."""
    rows = g.rows(color)
    edges = t.edges()
    for im in permutations(range(g.n), t.n):
        if all((rows[im[u]] >> im[v]) & 1 for u, v in edges):
            return True
    return False


def test_nth_set_bit():
    x = (1 << 3) | (1 << 70) | (1 << 200)
    assert nth_set_bit(x, 0) == 3
    assert nth_set_bit(x, 1) == 70
    assert nth_set_bit(x, 2) == 200


def test_greedy_embed_complete_host():
    g = all_red(8)
    for t in enumerate_trees(8):
        for anchor_tree in (0, t.n - 1):
            emb = greedy_embed(t, g.red, g.full, anchor=(anchor_tree, 5))
            validate_embedding(g, t, Embedding(emb, "red"))
            assert emb[anchor_tree] == 5


def test_greedy_embed_degree_gate():
    g = burr_type1(5, 4)  # sparse red side
    t = path(8)
    with pytest.raises(HypothesisError):
        greedy_embed(t, g.blue, g.full)


def test_greedy_bipartite_p6():
    # K_{3,3} red host, P6 with parity-respecting anchor
    g = burr_type1(4, 4)  # red complete bipartite K_{7,3}... use burr2 instead
    from treeramsey.rbgraph import burr_type2

    g = burr_type2(4)  # red K_{3,3}
    t = path(6)
    b = bipartition(t)
    side_of = [1 if v in b.V1 else 2 for v in range(6)]
    U1 = mask_of(range(3))
    U2 = g.full ^ U1
    emb = greedy_embed_bipartite(t, g.red, side_of, {1: U1, 2: U2}, anchor=(0, 0))
    validate_embedding(g, t, Embedding(emb, "red"))
    for v in range(6):
        assert (emb[v] < 3) == (side_of[v] == 1)


def test_greedy_random_dense_hosts():
    rng = rand.stream(21, "ghost")
    n = 50
    for seed in range(100):
        t = random_tree(n, 5, rng, "uniform")
        # 0.9-dense host: flip 5% of edges of complete red graph
        g = perturb(all_red(60), 0.05, seed=seed)
        pool_bits = [v for v in range(60) if (g.red[v] & g.full).bit_count() >= 55]
        pool = mask_of(pool_bits[:n])
        if pool.bit_count() < n:
            continue
        if min((g.red[v] & pool).bit_count() for v in iter_bits(pool)) < n - 1:
            continue
        emb = greedy_embed(t, g.red, pool)
        validate_embedding(g, t, Embedding(emb, "red"))


def test_find_mono_copy_star_in_all_red():
    g = all_red(4)
    e = find_mono_copy(g, star(4), "red")
    assert e is not None
    validate_embedding(g, star(4), e)
    assert find_mono_copy(g, star(4), "blue") is None


def test_find_mono_copy_p4_burr():
    g = burr_type1(2, 2)  # N=4 witness for R(P4) >= 5
    assert g.n == 4
    assert find_mono_copy(g, path(4), "red") is None
    assert find_mono_copy(g, path(4), "blue") is None


def test_p4_in_all_colorings_of_k5():
    t = path(4)
    n = 5
    for code in range(1 << 10):
        rows = [0] * n
        idx = 0
        for v in range(1, n):
            for u in range(v):
                if (code >> idx) & 1:
                    rows[v] |= 1 << u
                    rows[u] |= 1 << v
                idx += 1
        g = RBGraph(n, rows)
        assert (
            find_mono_copy(g, t, "red") is not None
            or find_mono_copy(g, t, "blue") is not None
        )


def test_find_mono_copy_matches_oracle():
    rng = rand.stream(33, "oracle")
    trees = [t for n in range(2, 8) for t in enumerate_trees(n)]
    for seed in range(1000):
        g = random_coloring(int(rng.integers(4, 9)), seed + 5000)
        t = trees[int(rng.integers(len(trees)))]
        if t.n > g.n:
            continue
        color = "red" if rng.random() < 0.5 else "blue"
        got = find_mono_copy(g, t, color)
        want = oracle_has_copy(g, t, color)
        assert (got is not None) == want
        if got is not None:
            validate_embedding(g, t, got)


def test_find_mono_copy_forced():
    g = burr_type1(3, 3)  # blue K_5 + K_2, red K_{5,2}
    t = path(4)
    # blue P4 exists inside the K_5 but not through the K_2 vertices
    for v in range(5):
        assert find_mono_copy(g, t, "blue", force=v) is not None
    for v in (5, 6):
        assert find_mono_copy(g, t, "blue", force=v) is None


def test_hamilton_cycle_dense():
    rng = rand.stream(9, "ham")
    for seed in range(20):
        g = perturb(all_red(60), 0.2, seed=seed)
        pool = g.full
        ok = all((g.red[v] & pool).bit_count() >= 30 for v in range(60))
        if not ok:
            continue
        cyc = hamilton_cycle(g.red, pool)
        assert sorted(cyc) == list(range(60))


def test_embed_bare_paths_dense_complete():
    g = all_red(40)
    t = path(40)
    emb = embed_bare_paths_dense(t, g.red, g.full, anchor=(0, 7), mu=0.0)
    validate_embedding(g, t, Embedding(emb, "red"))
    assert emb[0] == 7


def test_embed_bare_paths_dense_noisy():
    n = 200
    g = perturb(all_red(n), 0.02, seed=3)
    t = path(n)
    mindeg = min(g.red[v].bit_count() for v in range(n))
    mu = (n - mindeg) / n + 0.001
    emb = embed_bare_paths_dense(t, g.red, g.full, anchor=(0, 0), mu=mu)
    validate_embedding(g, t, Embedding(emb, "red"))


def test_embed_bare_paths_dense_star_gate():
    # a star offers no bare paths, so any real degree deficiency trips the gate
    g = perturb(all_red(40), 0.05, seed=2)
    mindeg = min(g.red[v].bit_count() for v in range(40))
    assert mindeg < 39
    with pytest.raises(HypothesisError):
        embed_bare_paths_dense(star(40), g.red, g.full, anchor=(0, 0), mu=0.2)


def _bipartite_host(n1, n2, eta, seed):
    """Red complete bipartite host with eta noise, sides [0,n1) and [n1,n1+n2)."""
    n = n1 + n2
    maskA = (1 << n1) - 1
    rows = [((1 << n) - 1 - maskA) if v < n1 else maskA for v in range(n)]
    g = RBGraph(n, rows)
    if eta:
        g = perturb(g, eta, seed)
    return g, maskA, ((1 << n) - 1) ^ maskA


def test_embed_bare_paths_bipartite_clean():
    t = path(100)
    b = bipartition(t)
    g, U1, U2 = _bipartite_host(60, 55, 0.0, 0)
    side_of = [1 if v in b.V1 else 2 for v in range(t.n)]
    paths = [p for p in bare_paths(t, 4) if side_of[p[0]] == 2][:4]
    emb = embed_bare_paths_bipartite(
        t, g.red, U1, U2, side_of, paths, R=None, W=0, mu=0.02, beta=0.1
    )
    validate_embedding(g, t, Embedding(emb, "red"))


def test_embed_bare_paths_bipartite_covers_w():
    t = path(120)
    b = bipartition(t)
    g, U1, U2 = _bipartite_host(70, 62, 0.0, 0)
    # plant three low-degree vertices on the U2 side: cut their edges to
    # most of U1, keeping beta*n neighbours
    rows = list(g.red)
    W = 0
    n = g.n
    wverts = [70, 71, 72]
    for w in wverts:
        keep = mask_of(range(20))
        cut = rows[w] & U1 & ~keep
        for u in iter_bits(cut):
            rows[u] &= ~(1 << w)
        rows[w] &= ~cut
        W |= 1 << w
    g = RBGraph(n, rows)
    side_of = [1 if v in b.V1 else 2 for v in range(t.n)]
    paths = [p for p in bare_paths(t, 4) if side_of[p[0]] == 2][:6]
    assert len(paths) >= 3
    emb = embed_bare_paths_bipartite(
        t, g.red, U1, U2, side_of, paths, R=None, W=W, mu=0.05, beta=0.1
    )
    validate_embedding(g, t, Embedding(emb, "red"))
    centers = {emb[p[2]] for p in paths}
    for w in wverts:
        assert w in centers or not any(emb[v] == w for v in range(t.n)) or w in centers
    # every W vertex used must be a path center
    used_w = {w for w in wverts if any(emb[v] == w for v in range(t.n))}
    assert used_w <= centers
    for w in wverts:
        assert w in centers


def test_embed_bare_paths_bipartite_too_few_paths():
    t = star(50)
    b = bipartition(t)
    g, U1, U2 = _bipartite_host(60, 55, 0.0, 0)
    side_of = [1 if v in b.V1 else 2 for v in range(t.n)]
    with pytest.raises(HypothesisError):
        embed_bare_paths_bipartite(
            t, g.red, U1, U2, side_of, [], R=None, W=1 << 60, mu=0.02, beta=0.1
        )
