"""Tree decomposition lemma suite: exhaustive small-n audits plus larger spot checks."""

import math

import pytest

from treeramsey import rand
from treeramsey.errors import HypothesisError
from treeramsey.decomp import (
    SHomomorphism,
    audit_cutset,
    audit_few_leafy_boundary,
    audit_s_homomorphism,
    audit_sparse_cut,
    audit_sparse_cut_leaves,
    audit_split,
    balanced_split,
    bare_paths,
    bipartite_surplus_split,
    half_component_vertex,
    leaves_in_v1,
    no_more_bare_paths,
    s_homomorphism,
    small_component_cutset,
    sparse_cut,
    sparse_cut_with_leaves,
    two_vertex_split,
    v2_rich_subtree,
    weighted_split,
)
from treeramsey.trees import Tree, bipartition, enumerate_trees, random_tree

from test_trees import double_star, path, spider, star


def complete_binary_tree(depth):
    n = 2 ** (depth + 1) - 1
    return Tree(n, [((i - 1) // 2, i) for i in range(1, n)])


def broom(spine, leaves):
    """Path of `spine` vertices with `leaves` pendant leaves at the far end."""
    edges = [(i, i + 1) for i in range(spine - 1)]
    nxt = spine
    for _ in range(leaves):
        edges.append((spine - 1, nxt))
        nxt += 1
    return Tree(nxt, edges)


def caterpillar(spine, leaves_per):
    edges = [(i, i + 1) for i in range(spine - 1)]
    nxt = spine
    for i in range(spine):
        for _ in range(leaves_per):
            edges.append((i, nxt))
            nxt += 1
    return Tree(nxt, edges)


# -- leaves in V1 -----------------------------------------------------------


def test_leaves_in_v1_examples():
    t = double_star(4, 2)
    b = bipartition(t)
    assert len(leaves_in_v1(t, b)) == 3 == b.t1 - b.t2 + 1
    t = path(4)
    b = bipartition(t)
    assert len(leaves_in_v1(t, b)) >= b.t1 - b.t2 + 1 == 1
    t = star(7)  # K_{1,6}
    b = bipartition(t)
    assert len(leaves_in_v1(t, b)) == 6 == b.t1 - b.t2 + 1


def test_leaves_in_v1_exhaustive():
    for n in range(2, 13):
        for t in enumerate_trees(n):
            b = bipartition(t)
            assert len(leaves_in_v1(t, b)) >= b.t1 - b.t2 + 1


# -- bare paths -------------------------------------------------------------


def test_bare_paths_p10():
    got = bare_paths(path(10), 4)
    assert len(got) == 2


def test_bare_paths_star():
    assert bare_paths(star(7), 2) == []


def test_bare_paths_internal_degree_and_disjoint():
    for n in (10, 11, 12):
        for t in enumerate_trees(n):
            for k in (1, 2, 3, 4):
                got = bare_paths(t, k)
                seen = set()
                for p in got:
                    assert len(p) == k + 1
                    for u, w in zip(p, p[1:]):
                        assert w in t.adj[u]
                    for v in p[1:-1]:
                        assert t.degree(v) == 2
                    assert not (set(p) & seen)
                    seen.update(p)
                assert no_more_bare_paths(t, k, got)


def test_bare_paths_count_bound_n10():
    """count >= ceil(n/(k+1)) - (2l-2) whenever positive, all trees on 10."""
    n = 10
    for t in enumerate_trees(n):
        ell = len(t.leaves())
        for k in (1, 2, 3, 4):
            bound = math.ceil(n / (k + 1)) - (2 * ell - 2)
            if bound > 0:
                assert len(bare_paths(t, k)) >= bound, (t.edges(), k)


# -- cutset and half-component vertex --------------------------------------


def test_cutset_path100():
    t = path(100)
    X = small_component_cutset(t, 0.25)
    assert len(X) <= 8
    audit_cutset(t, X, 0.25)


def test_cutset_xi_one():
    t = path(10)
    assert small_component_cutset(t, 1.0) == set()


def test_cutset_binary_tree():
    t = complete_binary_tree(6)  # 127 vertices
    X = small_component_cutset(t, 0.2)
    audit_cutset(t, X, 0.2)


def test_cutset_gate():
    with pytest.raises(HypothesisError):
        small_component_cutset(path(10), 0.1)  # n < 4/xi^2 = 400


def test_half_component_vertex_examples():
    assert half_component_vertex(path(5)) == 2
    assert half_component_vertex(star(7)) == 0


def test_half_component_exhaustive():
    for n in range(1, 13):
        for t in enumerate_trees(n):
            v = half_component_vertex(t)
            seen = {v}
            for w in t.adj[v]:
                if w in seen:
                    continue
                comp = {w}
                seen.add(w)
                stack = [w]
                while stack:
                    u = stack.pop()
                    for x in t.adj[u]:
                        if x not in seen:
                            seen.add(x)
                            comp.add(x)
                            stack.append(x)
                assert len(comp) <= n / 2


# -- splits -----------------------------------------------------------------


def test_balanced_split_p6():
    s = balanced_split(path(6))
    assert sorted(s.sizes()) == [3, 4]
    audit_split(path(6), s)


def test_balanced_split_star3():
    s = balanced_split(star(3))
    assert sorted(s.sizes()) == [2, 2]


def test_balanced_split_exhaustive():
    for n in range(2, 13):
        for t in enumerate_trees(n):
            s = balanced_split(t)
            audit_split(t, s)
            a, b = sorted(s.sizes())
            assert math.ceil(n / 3) <= a <= b <= math.ceil(2 * n / 3)


def test_weighted_split_full_q():
    t = path(9)
    s = weighted_split(t, range(9))
    audit_split(t, s)
    assert min(s.sizes()) >= 3


def test_weighted_split_endpoints():
    t = path(9)
    s = weighted_split(t, {0, 8})
    audit_split(t, s)
    assert len(s.T1 & {0, 8}) >= 1 and len(s.T2 & {0, 8}) >= 1


def test_weighted_split_exhaustive_random_q():
    rng = rand.stream(5, "wsq")
    for n in range(2, 13):
        for t in enumerate_trees(n):
            q = [v for v in range(n) if rng.random() < 0.5]
            s = weighted_split(t, q)
            audit_split(t, s)
            W = len(q)
            assert 3 * len(s.T1 & set(q)) >= W
            assert 3 * len(s.T2 & set(q)) >= W


# -- S-homomorphism ---------------------------------------------------------


def test_s_hom_single_edge():
    hom = s_homomorphism(path(2), 1.0, 0.9)
    assert set(hom.phi) == {"X0", "Y0"}


def test_s_hom_p1000():
    t = path(1000)
    hom = s_homomorphism(t, 0.3, 0.004)
    audit_s_homomorphism(t, bipartition(t), hom)


def test_s_hom_random_bounded_degree():
    for seed in range(20):
        rng = rand.stream(seed, "shom")
        t = random_tree(2000, 8, rng, "uniform")
        hom = s_homomorphism(t, 0.2, 0.004)
        audit_s_homomorphism(t, bipartition(t), hom)


def test_s_hom_degree_gate():
    with pytest.raises(HypothesisError):
        s_homomorphism(star(100), 0.3, 0.01)  # Delta = 99 > c*n


# -- two-vertex split -------------------------------------------------------


def test_two_vertex_split_p300():
    t = path(300)
    A, B = two_vertex_split(t, 0.01)
    bd = [v for v in A if any(w in B for w in t.adj[v])]
    assert len(bd) <= 2


def test_two_vertex_split_double_broom():
    edges = [(i, i + 1) for i in range(99)]
    nxt = 100
    for _ in range(100):
        edges.append((0, nxt))
        nxt += 1
    for _ in range(100):
        edges.append((99, nxt))
        nxt += 1
    t = Tree(nxt, edges)
    A, B = two_vertex_split(t, 0.01)
    bd = [v for v in A if any(w in B for w in t.adj[v])]
    assert len(bd) <= 2
    for u in bd:
        for w in bd:
            assert w not in t.adj[u]


def test_two_vertex_split_three_way():
    t = spider([100, 100, 100])
    A, B = two_vertex_split(t, 0.01)
    bd = [v for v in A if any(w in B for w in t.adj[v])]
    assert 1 <= len(bd) <= 2


def test_two_vertex_split_random():
    for seed in range(10):
        rng = rand.stream(seed, "tvs")
        t = random_tree(400, 12, rng, "uniform")
        A, B = two_vertex_split(t, 0.01)
        n = t.n
        assert len(A) <= (2 / 3 - 0.01) * n and len(B) <= (2 / 3 - 0.01) * n


# -- bipartite surplus split ------------------------------------------------


def test_surplus_split_broom():
    t = broom(334, 666)  # t1 heavy with leaves
    b = bipartition(t)
    assert b.t1 >= 1.1 * b.t2
    mu = 0.005
    s = bipartite_surplus_split(t, mu)
    audit_split(t, s)
    surplus = len(s.T1 & b.V1) - len(s.T1 & b.V2)
    assert 10 * mu * t.n <= surplus <= 25 * mu * t.n


def test_surplus_split_caterpillar():
    # spine of 400 plus a leaf on every even spine vertex: t1 = 400 = 2*t2
    edges = [(i, i + 1) for i in range(399)]
    nxt = 400
    for i in range(0, 400, 2):
        edges.append((i, nxt))
        nxt += 1
    t = Tree(nxt, edges)
    b = bipartition(t)
    assert b.t1 == 2 * b.t2 and t.n == 600
    mu = 0.01
    s = bipartite_surplus_split(t, mu)
    surplus = len(s.T1 & b.V1) - len(s.T1 & b.V2)
    assert 10 * mu * t.n <= surplus <= 25 * mu * t.n


def test_surplus_split_gate():
    with pytest.raises(HypothesisError):
        bipartite_surplus_split(path(100), 0.01)  # t1 = t2


# -- V2-rich subtree --------------------------------------------------------


def test_v2_rich_path():
    t = path(200)
    sub, boundary = v2_rich_subtree(t, 11)
    b = bipartition(t)
    assert sum(1 for x in sub if x in b.V2) >= 11
    assert len(sub) <= 10_000 * 11
    outside = [x for x in sub if x in b.V2 and any(w not in sub for w in t.adj[x])]
    assert len(outside) <= 1


def test_v2_rich_binary():
    t = complete_binary_tree(7)  # 255 vertices
    sub, boundary = v2_rich_subtree(t, 14)
    b = bipartition(t)
    assert sum(1 for x in sub if x in b.V2) >= 14


def test_v2_rich_gate():
    with pytest.raises(HypothesisError):
        v2_rich_subtree(path(100), 6)  # m > n/18


# -- sparse cuts ------------------------------------------------------------


def bounded_broom(spine, leaves, per):
    """Path plus `leaves` pendant leaves, at most `per` on any one spine
    vertex, hosts taken from the even spine positions."""
    edges = [(i, i + 1) for i in range(spine - 1)]
    nxt = spine
    host = 0
    placed = 0
    while placed < leaves:
        take = min(per, leaves - placed)
        for _ in range(take):
            edges.append((host, nxt))
            nxt += 1
        placed += take
        host += 2
    return Tree(nxt, edges)


def test_sparse_cut_broom():
    t = bounded_broom(1667, 3333, 40)
    cut = sparse_cut(t, 0.015)
    audit_sparse_cut(t, cut)
    audit_few_leafy_boundary(t, cut)


def test_sparse_cut_spider():
    legs = [740, 740, 740]
    t = spider(legs)
    b = bipartition(t)
    cut = sparse_cut(t, 0.015, b, c=0.01, require_unbalanced=False)
    audit_sparse_cut(t, cut)
    assert cut.trace.startswith("case3")


def test_sparse_cut_path():
    t = path(2000)
    cut = sparse_cut(t, 0.015, require_unbalanced=False)
    audit_sparse_cut(t, cut)
    audit_few_leafy_boundary(t, cut)


def test_sparse_cut_random():
    for seed in range(10):
        rng = rand.stream(seed, "sc")
        t = random_tree(3000, 20, rng, "leaf_rich")
        b = bipartition(t)
        if b.t1 < (2 - 0.02) * b.t2:
            continue
        cut = sparse_cut(t, 0.015, b)
        audit_sparse_cut(t, cut)
        audit_few_leafy_boundary(t, cut)


def test_sparse_cut_with_leaves_caterpillar():
    # two leaves on every even spine vertex: t1 = 1500 = 3*t2, leaves thin
    edges = [(i, i + 1) for i in range(999)]
    nxt = 1000
    for i in range(0, 1000, 2):
        edges.append((i, nxt))
        edges.append((i, nxt + 1))
        nxt += 2
    t = Tree(nxt, edges)
    res = sparse_cut_with_leaves(t, 0.01, 0.0004, 0.02, 0.01)
    audit_sparse_cut_leaves(t, bipartition(t), res, 0.0004, 0.01)
    assert res.mode == "A1"


def test_sparse_cut_with_leaves_hub():
    # nearly all V1 leaves cluster on heavy hubs (> sqrt(n) children each),
    # so the spread-leaf payload is unavailable and the A2 route fires
    spine = 2000
    edges = [(i, i + 1) for i in range(spine - 1)]
    nxt = spine
    for hub in (0, 500, 1000):  # even spine vertices: leaves land in V1
        for _ in range(300):
            edges.append((hub, nxt))
            nxt += 1
    t = Tree(nxt, edges)
    b = bipartition(t)
    assert b.t1 >= 1.5 * b.t2
    res = sparse_cut_with_leaves(t, 0.01, 0.0004, 0.5, 0.2)
    audit_sparse_cut_leaves(t, b, res, 0.0004, 0.01)
    assert res.mode == "A2"


def test_sparse_cut_with_leaves_gate():
    t = path(3000)
    with pytest.raises(HypothesisError):
        sparse_cut_with_leaves(t, 0.01, 0.0004, 0.02, 0.01)  # t1 < (2-mu)t2
