"""RBGraph: color partition, Burr constructions, perturbation, detection."""

import math

import pytest

from treeramsey import rand
from treeramsey.errors import HypothesisError
from treeramsey.rbgraph import (
    RBGraph,
    burr_type1,
    burr_type2,
    detect_extremal,
    graph6_decode,
    graph6_encode,
    iter_bits,
    mask_of,
    partition_plus_type1,
    partition_plus_type2,
    perturb,
    verify_witness,
    ExtremalWitness,
)


def random_coloring(n, seed):
    rng = rand.stream(seed, "randcol", n)
    rows = [0] * n
    for v in range(1, n):
        for u in range(v):
            if rng.random() < 0.5:
                rows[v] |= 1 << u
                rows[u] |= 1 << v
    return RBGraph(n, rows)


def test_color_partition_exact():
    g = random_coloring(20, 3)
    for v in range(20):
        assert g.red[v] & g.blue[v] == 0
        assert g.red[v] | g.blue[v] == g.full & ~(1 << v)


def test_burr1_sizes():
    # |U1| = t1+t2-1 (blue clique), |U2| = t2-1, N = t1+2t2-2; with
    # (t1,t2) = (3,2) the blue components have sizes 4 and 1 (the single
    # U2 vertex carries no blue edge) and the red graph is the complete
    # bipartite graph between the parts.
    g = burr_type1(3, 2)
    assert g.n == 3 + 2 * 2 - 2 == 5
    comps = sorted(c.bit_count() for c in g.components("blue"))
    assert comps == [1, 4]
    u1 = mask_of(range(4))
    u2 = mask_of([4])
    assert g.count_edges_within(u1, "blue") == 6  # K_4
    assert g.count_edges_within(u1, "red") == 0
    assert g.count_edges_between(u1, u2, "red") == 4
    assert g.count_edges_between(u1, u2, "blue") == 0


def test_burr1_component_structure():
    # any blue component has <= t1+t2-1 vertices; red is complete bipartite
    for t1, t2 in [(4, 3), (5, 2), (6, 6)]:
        g = burr_type1(t1, t2)
        assert max(c.bit_count() for c in g.components("blue")) <= t1 + t2 - 1
        a = t1 + t2 - 1
        for v in range(g.n):
            if v < a:
                assert g.red[v] == g.full ^ ((1 << a) - 1)
            else:
                assert g.red[v] == (1 << a) - 1


def test_burr2_shape():
    g = burr_type2(4)
    assert g.n == 6
    assert max(c.bit_count() for c in g.components("blue")) == 3
    # red graph is K_{3,3}
    u1 = mask_of(range(3))
    assert g.count_edges_between(u1, g.full ^ u1, "red") == 9


def test_burr_param_validation():
    with pytest.raises(HypothesisError):
        burr_type1(2, 3)
    with pytest.raises(HypothesisError):
        burr_type2(1)


def test_perturb_identity_and_complement():
    g = burr_type2(5)
    same = perturb(g, 0.0, seed=1)
    assert same.red == g.red
    flipped = perturb(g, 1.0, seed=1)
    assert flipped.red == g.blue and flipped.blue == g.red


def test_perturb_flip_count_and_determinism():
    n = 500
    g = burr_type1(150, 120)
    n = g.n
    h1 = perturb(g, 0.01, seed=42)
    h2 = perturb(g, 0.01, seed=42)
    assert h1.red == h2.red
    flips = sum((h1.red[v] ^ g.red[v]).bit_count() for v in range(n)) // 2
    m = n * (n - 1) // 2
    mean = 0.01 * m
    sigma = math.sqrt(m * 0.01 * 0.99)
    assert abs(flips - mean) <= 3 * sigma


def test_graph6_roundtrip():
    for seed in range(5):
        g = random_coloring(17, seed)
        n, rows = graph6_decode(graph6_encode(g.n, g.red))
        assert n == g.n and rows == g.red
    g = burr_type1(40, 30)
    assert RBGraph.from_graph6(g.to_graph6()) == g


def test_graph6_known_vector():
    # path 0-1-2 on 3 vertices has graph6 encoding "Bg" (wait: edges 01,12)
    rows = [0b010, 0b101, 0b010]
    enc = graph6_encode(3, rows)
    n, back = graph6_decode(enc)
    assert n == 3 and back == rows


def test_detect_extremal_burr1_unperturbed():
    g = burr_type1(300, 200)
    w = detect_extremal(g, 0.01, 300, 200)
    assert w is not None and w.kind == "I" and not w.swapped
    assert verify_witness(g, w)


def test_detect_extremal_burr2_perturbed():
    g = perturb(burr_type2(300), 0.001, seed=9)
    w = detect_extremal(g, 0.05, 300, 150)
    assert w is not None and w.kind == "II"
    assert verify_witness(g, w)


def test_detect_extremal_random_soundness():
    g = random_coloring(200, 77)
    w = detect_extremal(g, 0.05, 100, 100)
    if w is not None:
        assert verify_witness(g, w)


def test_partition_plus_type1_unperturbed():
    t1 = t2 = 50
    n = t1 + t2
    g = burr_type1(t1, t2)
    U1 = mask_of(range(t1 + t2 - 1))
    U2 = g.full ^ U1
    U1p, U2p, k, D, X = partition_plus_type1(g, U1, U2, beta=0.05, mu=0.02, n=n)
    assert U1p | U2p == g.full and U1p & U2p == 0
    assert U1p == U1 and U2p == U2
    assert k == U1p.bit_count() - n == -1
    assert D == 0 and X == 0


def test_partition_plus_type1_membership_audit():
    g = perturb(burr_type1(60, 40), 0.01, seed=5)
    n = 100
    beta = 0.1
    U1 = mask_of(range(99))  # deliberately off; partition recomputes from degrees
    U1w = mask_of(range(60 + 40 - 1))
    U2w = g.full ^ U1w
    U1p, U2p, k, D, X = partition_plus_type1(g, U1w, U2w, beta=beta, mu=0.02, n=n)
    for v in iter_bits(U2p):
        assert (g.red[v] & U1w).bit_count() >= beta * n
    for v in iter_bits(U1p):
        assert (g.red[v] & U1w).bit_count() < beta * n
    assert X.bit_count() <= 2 * 0.02 * n + 1


def test_partition_plus_type1_beta_one():
    g = burr_type1(10, 8)
    U1 = mask_of(range(17))
    U2 = g.full ^ U1
    U1p, U2p, k, D, X = partition_plus_type1(g, U1, U2, beta=1.0, mu=0.05, n=18)
    assert U2p == 0  # threshold beta*n exceeds any degree


def test_partition_plus_type2():
    t1 = 60
    g = burr_type2(t1)
    n = 90
    a = t1 - 1
    U1 = mask_of(range(a))
    U2 = g.full ^ U1
    U1p, U2p, left = partition_plus_type2(g, U1, U2, beta=0.1, n=n)
    assert (U1p, U2p, left) == (U1, U2, 0)


def test_partition_plus_type2_planted_blue_vertex():
    t1 = 40
    g = burr_type2(t1)
    # recolor all edges at vertex 0 blue
    rows = list(g.red)
    for u in iter_bits(rows[0]):
        rows[u] &= ~1
    rows[0] = 0
    g = RBGraph(t1 - 1 + t1 - 1, rows)
    U1 = mask_of(range(1, t1 - 1))
    U2 = mask_of(range(t1 - 1, 2 * (t1 - 1)))
    U1p, U2p, left = partition_plus_type2(g, U1, U2, beta=0.2, n=60)
    assert left == 1  # the planted all-blue vertex qualifies for neither side


def test_partition_plus_type2_maximality_audit():
    g = perturb(burr_type2(80), 0.005, seed=3)
    a = 79
    U1 = mask_of(range(a))
    U2 = mask_of(range(a, 2 * a))
    n = 120
    beta = 0.1
    U1p, U2p, left = partition_plus_type2(g, U1, U2, beta=beta, n=n)
    for v in iter_bits(left):
        assert (g.red[v] & U2).bit_count() < beta * n
        assert (g.red[v] & U1).bit_count() < beta * n
