"""Type I extremal-case embeddings on constructed hosts."""

import pytest

from treeramsey import rand
from treeramsey.constants import DeskConstants
from treeramsey.embed_core import Embedding, validate_embedding
from treeramsey.embed_type1 import embed_leaves_IB1, embed_red_IB2
from treeramsey.errors import HypothesisError
from treeramsey.rbgraph import RBGraph, iter_bits, mask_of, perturb
from treeramsey.trees import Tree, bipartition, random_tree

from test_embed_core import all_red


def leafy_tree(n, seed):
    rng = rand.stream(seed, "leafy", n)
    return random_tree(n, 6, rng, "leaf_rich")


def blue_clique_host(n1, n2, eta, seed, cross_blue=()):
    """Blue K_{n1} plus n2 extra vertices, all cross edges red except the
    (u1, u2) pairs listed in cross_blue; then eta noise."""
    n = n1 + n2
    maskA = (1 << n1) - 1
    rows = []
    for v in range(n):
        rows.append(((1 << n) - 1 - maskA) if v < n1 else maskA)
    for u, w in cross_blue:
        rows[u] &= ~(1 << w)
        rows[w] &= ~(1 << u)
    g = RBGraph(n, rows)
    if eta:
        g = perturb(g, eta, seed)
    return g


def test_ib1_anchored_complete():
    n, k = 240, 2
    g = all_red(n + k)  # treat red as the host color
    t = leafy_tree(n, 1)
    assert len(t.leaves()) >= n / 20
    dc = DeskConstants(c=0.04, mu=0.04, beta=0.05, eps=0.05, seed=5)
    emb, info = embed_leaves_IB1(
        t, g.red, g.full, 0, k=k, D=0, X=0, dc=dc, mu=0.04, beta=0.05, anchor=(3, 17)
    )
    assert emb[3] == 17
    validate_embedding(g, t, Embedding(emb, "red"))


def test_ib1_noisy_with_planted_D():
    n1, n2 = 400, 12
    n = n1  # tree size equals |U1| (k = 0)
    t = leafy_tree(n, 2)
    ok = 0
    for seed in range(10):
        # plant helpers: 170 U1 vertices get 4 blue cross edges each
        cross = []
        for i in range(170):
            for j in range(4):
                cross.append((i, n1 + (i + j) % n2))
        g = blue_clique_host(n1, n2, 0.004, seed, cross_blue=cross)
        U1 = mask_of(range(n1))
        U2 = g.full ^ U1
        D = 3
        dc = DeskConstants(c=0.04, mu=0.04, beta=0.06, eps=0.06, seed=seed)
        try:
            emb, info = embed_leaves_IB1(
                t, g.blue, U1, U2, k=0, D=D, X=0, dc=dc, mu=0.04, beta=0.06
            )
        except HypothesisError:
            continue
        validate_embedding(g, t, Embedding(emb, "blue"))
        ok += 1
    assert ok >= 8


def test_ib1_gate_k_plus_d_negative():
    g = all_red(100)
    t = leafy_tree(101, 3)
    dc = DeskConstants(c=0.06, mu=0.06, beta=0.06, eps=0.06, seed=1)
    with pytest.raises(HypothesisError):
        embed_leaves_IB1(t, g.red, g.full, 0, k=-1, D=0, X=0, dc=dc, mu=0.04, beta=0.05)


def test_ib1_bare_path_route():
    # path-like tree, D=0: the dense bare-path route fires
    n, k = 200, 1
    g = perturb(all_red(n + k), 0.004, seed=9)
    t = Tree(n, [(i, i + 1) for i in range(n - 1)])
    dc = DeskConstants(c=0.04, mu=0.04, beta=0.05, eps=0.05, seed=2)
    emb, info = embed_leaves_IB1(
        t, g.red, g.full, 0, k=k, D=0, X=0, dc=dc, mu=0.04, beta=0.05
    )
    assert info["route"] == "bare_paths"
    validate_embedding(g, t, Embedding(emb, "red"))


def red_bipartite_with_patch(nu1, nu2, patch, eta, seed):
    """Red K_{nu1,nu2} plus a red clique on the first `patch` U1 vertices."""
    n = nu1 + nu2
    maskA = (1 << nu1) - 1
    rows = []
    for v in range(n):
        rows.append(((1 << n) - 1 - maskA) if v < nu1 else maskA)
    pm = (1 << patch) - 1
    for v in range(patch):
        rows[v] |= pm & ~(1 << v)
    g = RBGraph(n, rows)
    if eta:
        g = perturb(g, eta, seed)
    return g


def caterpillar_2leaves(spine):
    edges = [(i, i + 1) for i in range(spine - 1)]
    nxt = spine
    for i in range(spine):
        edges.append((i, nxt))
        edges.append((i, nxt + 1))
        nxt += 2
    return Tree(nxt, edges)


def test_ib2_caterpillar_case_ii():
    t = caterpillar_2leaves(100)  # n = 300, classes (150, 150)
    b = bipartition(t)
    n = t.n
    k, D = 0, 0
    nu1, nu2 = 260, b.t2 - k - 1
    g = red_bipartite_with_patch(nu1, nu2, 180, 0.0, 0)
    U1 = mask_of(range(nu1))
    U2 = g.full ^ U1
    dc = DeskConstants(c=0.02, mu=0.02, beta=0.05, eps=0.05, seed=3, edge_constant=50)
    emb, info = embed_red_IB2(t, g.red, U1, U2, k=k, D=D, X=0, dc=dc, mu=0.02, beta=0.05)
    validate_embedding(g, t, Embedding(emb, "red"))
    assert info["case"] in ("II", "III")


def test_ib2_path_case_i():
    t = Tree(300, [(i, i + 1) for i in range(299)])
    b = bipartition(t)
    k, D = 0, 0
    nu1, nu2 = 260, b.t2 - k - 1
    g = red_bipartite_with_patch(nu1, nu2, 180, 0.0, 0)
    U1 = mask_of(range(nu1))
    U2 = g.full ^ U1
    dc = DeskConstants(c=0.02, mu=0.02, beta=0.05, eps=0.05, seed=4, edge_constant=50)
    emb, info = embed_red_IB2(t, g.red, U1, U2, k=k, D=D, X=0, dc=dc, mu=0.02, beta=0.05)
    validate_embedding(g, t, Embedding(emb, "red"))
    assert info["case"] == "I"


def test_ib2_gate_u1_small():
    t = caterpillar_2leaves(100)
    b = bipartition(t)
    nu1 = int(1.05 * b.t1)
    nu2 = b.t2 - 1
    g = red_bipartite_with_patch(nu1, nu2, 60, 0.0, 0)
    U1 = mask_of(range(nu1))
    dc = DeskConstants(c=0.02, mu=0.02, beta=0.05, eps=0.05, seed=3, edge_constant=50)
    with pytest.raises(HypothesisError):
        embed_red_IB2(t, g.red, U1, g.full ^ U1, k=0, D=0, X=0, dc=dc, mu=0.02, beta=0.05)
