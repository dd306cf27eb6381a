"""Structural tree lemmas consumed by the embedding arguments.

Leaf counts, bare paths, cutsets, balanced and weighted splits, the
8-vertex-path homomorphism, two-vertex splits, bipartite-surplus splits,
small subtrees rich in the smaller color class, and sparse cuts.

Asymptotic hypotheses become runtime-checked inequality chains: each
operation verifies the concrete facts its construction needs (preferring
measured quantities over worst-case formulas) and raises HypothesisError
with the violated inequality instead of silently degrading.  All
operations are pure functions of immutable inputs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from treeramsey.errors import HypothesisError
from treeramsey.trees import Bipartition, Tree, bipartition, centroids


# -- shared result types ---------------------------------------------------


@dataclass(frozen=True)
class TreeSplit:
    """Decomposition into two subtrees sharing exactly one vertex."""

    T1: frozenset[int]
    T2: frozenset[int]
    v: int

    def sizes(self) -> tuple[int, int]:
        return len(self.T1), len(self.T2)


def audit_split(t: Tree, s: TreeSplit) -> None:
    """Assert the TreeSplit invariants exactly."""
    assert s.T1 & s.T2 == {s.v}
    assert s.T1 | s.T2 == set(range(t.n))
    for side in (s.T1, s.T2):
        assert _induces_tree(t, side)
    # edge partition: every edge lies within exactly one side
    for u, w in t.edges():
        in1 = u in s.T1 and w in s.T1
        in2 = u in s.T2 and w in s.T2
        assert in1 != in2, f"edge ({u},{w}) not split cleanly"


def _induces_tree(t: Tree, vs: Iterable[int]) -> bool:
    vset = set(vs)
    if not vset:
        return False
    edges = sum(1 for u in vset for w in t.adj[u] if w in vset) // 2
    if edges != len(vset) - 1:
        return False
    start = next(iter(vset))
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in t.adj[u]:
            if w in vset and w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(vset)


@dataclass(frozen=True)
class SparseCut:
    """Partition A u B with a small independent boundary: see audit_sparse_cut."""

    A: frozenset[int]
    B: frozenset[int]
    eps: float
    d: int
    boundary: frozenset[int]
    trace: str = ""


def audit_sparse_cut(t: Tree, cut: SparseCut) -> None:
    """Assert all four defining clauses of an (eps, d)-sparse cut."""
    n = t.n
    assert cut.A | cut.B == set(range(n)) and not (cut.A & cut.B)
    assert _induces_tree(t, cut.A), "T[A] is not a tree"
    assert len(cut.A) <= (2 / 3 - cut.eps) * n, f"|A|={len(cut.A)} too big"
    assert len(cut.B) <= (2 / 3 - cut.eps) * n, f"|B|={len(cut.B)} too big"
    boundary = set()
    for v in cut.A:
        db = sum(1 for w in t.adj[v] if w in cut.B)
        assert db <= cut.d, f"vertex {v} has {db} > d={cut.d} edges into B"
        if db > 0:
            boundary.add(v)
    assert boundary == set(cut.boundary)
    assert len(boundary) <= 2 * t.max_degree()
    for v in boundary:
        assert not any(w in boundary for w in t.adj[v]), "boundary not independent"


# -- leaf counts -----------------------------------------------------------


def leaves_in_v1(t: Tree, b: Bipartition) -> set[int]:
    """Degree-1 vertices in the larger class; always at least t1-t2+1 of them."""
    return {v for v in b.V1 if t.degree(v) == 1}


# -- bare paths ------------------------------------------------------------


def _segments(t: Tree) -> list[list[int]]:
    """Maximal bare paths: runs of degree-2 vertices between junctions.

    A junction is any vertex of degree != 2.  Each segment is returned as
    its full vertex sequence including both junction endpoints.
    """
    n = t.n
    if n == 1:
        return []
    deg = [t.degree(v) for v in range(n)]
    if all(d <= 2 for d in deg):
        # the whole tree is a path
        start = min(v for v in range(n) if deg[v] == 1)
        seq = [start]
        prev, cur = -1, start
        while True:
            nxts = [w for w in t.adj[cur] if w != prev]
            if not nxts:
                break
            prev, cur = cur, nxts[0]
            seq.append(cur)
        return [seq]
    segs = []
    seen_edges = set()
    junctions = [v for v in range(n) if deg[v] != 2]
    for u in sorted(junctions):
        for w in sorted(t.adj[u]):
            if (u, w) in seen_edges:
                continue
            seq = [u, w]
            seen_edges.add((u, w))
            seen_edges.add((w, u))
            prev, cur = u, w
            while deg[cur] == 2:
                nxt = next(x for x in t.adj[cur] if x != prev)
                seen_edges.add((cur, nxt))
                seen_edges.add((nxt, cur))
                seq.append(nxt)
                prev, cur = cur, nxt
            segs.append(seq)
    return segs


def bare_paths(t: Tree, k: int) -> list[tuple[int, ...]]:
    """A maximal family of vertex-disjoint bare paths with k edges each.

    Internal vertices of every returned path have degree 2 in T.  Packs
    segment interiors (plus leaf endpoints) left to right first, which
    meets the count bound n/(k+1) - (2l-2) for a tree with l leaves, then
    sweeps once more allowing junction endpoints so no further disjoint
    bare path of length k remains.
    """
    if k < 1:
        raise HypothesisError(f"path length must be >= 1, got {k}")
    n = t.n
    if n < k + 1:
        return []
    deg = [t.degree(v) for v in range(n)]
    used = [False] * n
    out: list[tuple[int, ...]] = []
    segs = _segments(t)

    def pack(seq: list[int]) -> None:
        i = 0
        while i + k < len(seq):
            window = seq[i : i + k + 1]
            if any(used[v] for v in window):
                i += 1
                continue
            for v in window:
                used[v] = True
            out.append(tuple(window))
            i += k + 1

    # phase 1: interiors plus degree-1 endpoints only
    for seq in segs:
        core = list(seq)
        if deg[core[0]] != 1:
            core = core[1:]
        if core and deg[core[-1]] != 1:
            core = core[:-1]
        pack(core)
    # phase 2: allow junction endpoints; one sweep keeps maximality since
    # taking paths only consumes vertices
    for seq in segs:
        pack(list(seq))
    return out


def no_more_bare_paths(t: Tree, k: int, taken: Sequence[Sequence[int]]) -> bool:
    """Whether no further disjoint bare path of length k exists (audit)."""
    used = [False] * t.n
    for p in taken:
        for v in p:
            used[v] = True
    for seq in _segments(t):
        run = 0
        for v in seq:
            run = run + 1 if not used[v] else 0
            if run >= k + 1:
                return False
    return True


# -- cutsets and centroid-style vertices -----------------------------------


def half_component_vertex(t: Tree) -> int:
    """A vertex whose removal leaves components of size at most n/2."""
    return min(centroids(t))


def small_component_cutset(t: Tree, xi: float) -> set[int]:
    """X with |X| <= 2/xi such that every component of T - X has <= xi*n vertices.

    Repeatedly removes the deepest vertex whose remaining subtree still
    holds at least xi*n/2 vertices; each removal strips that subtree, so
    at most 2/xi removals happen and all shed components stay small.
    """
    n = t.n
    if not (0 < xi <= 1):
        raise HypothesisError(f"xi must be in (0,1], got {xi}")
    if n < 4 / (xi * xi):
        raise HypothesisError(
            f"cutset needs n >= 4/xi^2 = {4 / (xi * xi):.1f}, got n={n}",
            violated="n >= 4/xi^2",
        )
    target = xi * n
    par = t.parents_from(0)
    order = t.bfs_order(0)
    size = [1] * n
    for u in reversed(order):
        if par[u] >= 0:
            size[par[u]] += size[u]
    depth = [0] * n
    for u in order[1:]:
        depth[u] = depth[par[u]] + 1
    alive = [True] * n
    remaining = n
    X: set[int] = set()
    while remaining > target:
        pick = -1
        for u in order:
            if alive[u] and size[u] >= target / 2:
                if pick < 0 or depth[u] > depth[pick] or (depth[u] == depth[pick] and u < pick):
                    pick = u
        assert pick >= 0  # the root always qualifies while remaining > target
        X.add(pick)
        # strip the whole subtree of pick and update ancestor sizes
        sub = size[pick]
        stack = [pick]
        while stack:
            u = stack.pop()
            alive[u] = False
            for w in t.adj[u]:
                if w != par[u] and alive[w]:
                    stack.append(w)
        a = par[pick]
        while a >= 0:
            size[a] -= sub
            a = par[a]
        remaining -= sub
    return X


def audit_cutset(t: Tree, X: set[int], xi: float) -> None:
    assert len(X) <= 2 / xi
    seen = set(X)
    for v in range(t.n):
        if v in seen:
            continue
        comp = {v}
        stack = [v]
        seen.add(v)
        while stack:
            u = stack.pop()
            for w in t.adj[u]:
                if w not in seen and w not in X:
                    seen.add(w)
                    comp.add(w)
                    stack.append(w)
        assert len(comp) <= xi * t.n, f"component of size {len(comp)} > xi*n"


# -- splits ----------------------------------------------------------------


def _components_of_removal(t: Tree, v: int) -> list[list[int]]:
    comps = []
    seen = {v}
    for start in t.adj[v]:
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        stack = [start]
        while stack:
            u = stack.pop()
            for w in t.adj[u]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        comps.append(comp)
    return comps


def weighted_split(t: Tree, Q: Iterable[int]) -> TreeSplit:
    """Split into two subtrees sharing one vertex, each holding >= |Q|/3 of Q.

    Splits at a Q-centroid; every hanging component then carries at most
    |Q|/2 of the weight and a largest-first greedy grouping meets the
    bound on both sides.
    """
    Qset = set(Q)
    n = t.n
    if n == 1:
        return TreeSplit(frozenset([0]), frozenset([0]), 0)
    W = len(Qset)
    weight = [1 if v in Qset else 0 for v in range(n)]
    # Q-centroid via subtree weights
    par = t.parents_from(0)
    order = t.bfs_order(0)
    wsub = weight[:]
    for u in reversed(order):
        if par[u] >= 0:
            wsub[par[u]] += wsub[u]
    best_v, best_val = 0, W + 1
    for v in range(n):
        worst = W - wsub[v]
        for w in t.adj[v]:
            if w != par[v]:
                worst = max(worst, wsub[w])
        if worst < best_val:
            best_v, best_val = v, worst
    v = best_v
    comps = _components_of_removal(t, v)
    wts = [sum(weight[x] for x in c) for c in comps]
    idx = sorted(range(len(comps)), key=lambda i: (-wts[i], comps[i][0]))
    side1: list[int] = []
    side2: list[int] = []
    if idx and wts[idx[0]] * 3 >= W:
        side1 = [idx[0]]
        side2 = idx[1:]
    else:
        w1 = w2 = 0
        for i in idx:
            if w1 <= w2:
                side1.append(i)
                w1 += wts[i]
            else:
                side2.append(i)
                w2 += wts[i]
    T1 = {v}
    for i in side1:
        T1.update(comps[i])
    T2 = {v}
    for i in side2:
        T2.update(comps[i])
    wv = weight[v]
    q1 = sum(weight[x] for x in T1)
    q2 = sum(weight[x] for x in T2)
    if not (3 * q1 >= W and 3 * q2 >= W):
        # tiny/degenerate Q: exhaust groupings of nonzero components
        nz = [i for i in range(len(comps)) if wts[i] > 0]
        if len(nz) <= 20:
            for mask in range(1 << len(nz)):
                g1 = wv + sum(wts[nz[j]] for j in range(len(nz)) if (mask >> j) & 1)
                g2 = wv + sum(wts[nz[j]] for j in range(len(nz)) if not (mask >> j) & 1)
                if 3 * g1 >= W and 3 * g2 >= W:
                    chosen = {nz[j] for j in range(len(nz)) if (mask >> j) & 1}
                    T1 = {v}
                    T2 = {v}
                    for i in range(len(comps)):
                        (T1 if i in chosen else T2).update(comps[i])
                    break
            else:
                raise AssertionError("weighted split bound unreachable")
    return TreeSplit(frozenset(T1), frozenset(T2), v)


def balanced_split(t: Tree) -> TreeSplit:
    """Split with ceil(n/3) <= |T1| <= |T2| <= ceil(2n/3).

    Weighted split at Q = V(T); when n = 3k lands on the one bad shape
    (k, 2k+1), repair by moving the shared vertex or the smallest hanging
    component across.
    """
    n = t.n
    if n < 2:
        raise HypothesisError("balanced split needs n >= 2")
    s = weighted_split(t, range(n))
    T1, T2, v = set(s.T1), set(s.T2), s.v
    if len(T1) > len(T2):
        T1, T2 = T2, T1
    lo, hi = math.ceil(n / 3), math.ceil(2 * n / 3)
    if len(T2) > hi:
        # only possible shape: n = 3k, |T1| = k, |T2| = 2k+1
        assert n % 3 == 0 and len(T1) == n // 3 and len(T2) == 2 * n // 3 + 1
        nbrs_in_t2 = [w for w in t.adj[v] if w in T2 and w != v]
        if len(nbrs_in_t2) == 1:
            vp = nbrs_in_t2[0]
            T1.add(vp)
            T2.discard(v)
            v = vp
        else:
            comps = []
            seen = {v}
            for start in nbrs_in_t2:
                comp = [start]
                seen.add(start)
                stack = [start]
                while stack:
                    u = stack.pop()
                    for w in t.adj[u]:
                        if w in T2 and w not in seen:
                            seen.add(w)
                            comp.append(w)
                            stack.append(w)
                comps.append(comp)
            S = min(comps, key=lambda c: (len(c), min(c)))
            T1.update(S)
            T2.difference_update(S)
        if len(T1) > len(T2):
            T1, T2 = T2, T1
    assert lo <= len(T1) <= len(T2) <= hi
    return TreeSplit(frozenset(T1), frozenset(T2), v)


# -- the eight-vertex-path homomorphism ------------------------------------

S_LABELS = ("Y3", "X2", "Y1", "X0", "Y0", "X1", "Y2", "X3")
S_EDGES = {
    frozenset(p)
    for p in (("Y3", "X2"), ("X2", "Y1"), ("Y1", "X0"), ("X0", "Y0"), ("Y0", "X1"), ("X1", "Y2"), ("Y2", "X3"))
}


@dataclass(frozen=True)
class SHomomorphism:
    """Labels in the 8-vertex path Y3-X2-Y1-X0-Y0-X1-Y2-X3, X* in V1, Y* in V2."""

    phi: tuple[str, ...]
    xi: float
    Z: frozenset[int]
    A: frozenset[int]
    B: frozenset[int]
    C: frozenset[int]


def s_homomorphism(t: Tree, xi: float, c: float) -> SHomomorphism:
    """Homomorphism into S cutting T into pieces of size <= xi*n.

    Every component of T - phi^{-1}(X0 u Y0) has at most xi*n vertices and
    |phi^{-1}(X0 u Y0 u X1 u Y1)| <= xi*n.  The conservative arithmetic
    (2cn/xi <= xi*n/10 and xi*n/10 + (4+2*Delta)/xi <= xi*n) guarantees
    this in advance; when only the conservative form fails we still build
    the map and accept it if the measured sizes pass.
    """
    n = t.n
    b = bipartition(t)
    delta = t.max_degree()
    if delta > c * n:
        raise HypothesisError(
            f"Delta(T)={delta} exceeds c*n={c * n:.1f}", violated="Delta(T) <= c*n"
        )
    if n <= 2:
        phi = ["X0"] * n
        for v in b.V2:
            phi[v] = "Y0"
        return SHomomorphism(tuple(phi), xi, frozenset(range(n)), frozenset(), frozenset(), frozenset())
    try:
        Z = small_component_cutset(t, xi)
    except HypothesisError:
        Z = set()
    if not Z:
        Z = {half_component_vertex(t)}

    root = min(Z)
    # ordering: parents to the left, components of T - Z consecutive
    comp_id = [-1] * n
    ncomp = 0
    for v in range(n):
        if v in Z or comp_id[v] >= 0:
            continue
        stack = [v]
        comp_id[v] = ncomp
        while stack:
            u = stack.pop()
            for w in t.adj[u]:
                if w not in Z and comp_id[w] < 0:
                    comp_id[w] = ncomp
                    stack.append(w)
        ncomp += 1

    order: list[int] = []
    parent = [-1] * n
    seen = [False] * n

    def emit(v: int, par: int) -> None:
        seen[v] = True
        parent[v] = par
        order.append(v)

    entry_of_comp: dict[int, int] = {}

    def emit_component(entry: int, par: int) -> list[int]:
        """Emit a whole component of T - Z consecutively; return the Z
        vertices hanging off it (with their component-side parents set)."""
        cid = comp_id[entry]
        entry_of_comp[cid] = entry
        emit(entry, par)
        pending: list[tuple[int, int]] = []
        cstack = [entry]
        while cstack:
            x = cstack.pop()
            for y in sorted(t.adj[x], reverse=True):
                if seen[y]:
                    continue
                if y in Z:
                    pending.append((x, y))
                else:
                    emit(y, x)
                    cstack.append(y)
        zs = []
        for x, y in pending:
            if not seen[y]:
                emit(y, x)
                zs.append(y)
        return zs

    emit(root, -1)
    zstack = [root]
    while zstack:
        z = zstack.pop()
        for w in sorted(t.adj[z], reverse=True):
            if seen[w]:
                continue
            if w in Z:
                emit(w, z)
                zstack.append(w)
            else:
                zstack.extend(emit_component(w, z))
    assert all(seen)

    A = set(entry_of_comp.values())
    B = {parent[z] for z in Z if parent[z] >= 0}
    C = set()
    for bb in B:
        if parent[bb] >= 0:
            C.add(parent[bb])
        for w in t.adj[bb]:
            if parent[w] == bb:
                C.add(w)

    phi = [""] * n
    for z in Z:
        phi[z] = "X0" if z in b.V1 else "Y0"
    for cid, e in entry_of_comp.items():
        members = [v for v in range(n) if comp_id[v] == cid and v not in Z]
        special = A | B | C
        if e in b.V1:
            for v in members:
                if v in b.V1:
                    phi[v] = "X1" if v in special else "X3"
                else:
                    phi[v] = "Y0" if v in B else "Y2"
        else:
            for v in members:
                if v in b.V2:
                    phi[v] = "Y1" if v in special else "Y3"
                else:
                    phi[v] = "X0" if v in B else "X2"

    hom = SHomomorphism(tuple(phi), xi, frozenset(Z), frozenset(A), frozenset(B), frozenset(C))
    violations = audit_s_homomorphism(t, b, hom, collect=True)
    if violations:
        formula_ok = (2 * c * n / xi <= xi * n / 10) and (
            xi * n / 10 + (4 + 2 * delta) / xi <= xi * n
        )
        raise HypothesisError(
            "homomorphism audit failed: " + "; ".join(violations)
            + ("" if formula_ok else " (conservative arithmetic also fails: "
               f"2cn/xi={2 * c * n / xi:.1f} vs xi*n/10={xi * n / 10:.1f}, "
               f"xi*n/10+(4+2D)/xi={xi * n / 10 + (4 + 2 * delta) / xi:.1f} vs xi*n={xi * n:.1f})"),
            violated=violations[0],
        )
    return hom


def audit_s_homomorphism(
    t: Tree, b: Bipartition, hom: SHomomorphism, collect: bool = False
) -> list[str]:
    """Check edge validity, class sides, and the two size bounds."""
    n = t.n
    bad: list[str] = []
    for v in range(n):
        lab = hom.phi[v]
        if (lab[0] == "X") != (v in b.V1):
            bad.append(f"label {lab} of {v} on wrong side")
            break
    for u, w in t.edges():
        if frozenset((hom.phi[u], hom.phi[w])) not in S_EDGES:
            bad.append(f"edge ({u},{w}) maps to non-edge ({hom.phi[u]},{hom.phi[w]})")
            break
    centers = {v for v in range(n) if hom.phi[v] in ("X0", "Y0")}
    seen = set(centers)
    for v in range(n):
        if v in seen:
            continue
        comp = {v}
        seen.add(v)
        stack = [v]
        while stack:
            u = stack.pop()
            for w in t.adj[u]:
                if w not in seen and w not in centers:
                    seen.add(w)
                    comp.add(w)
                    stack.append(w)
        if len(comp) > hom.xi * n:
            bad.append(f"component of T-phi^-1(X0uY0) has {len(comp)} > xi*n")
            break
    small = sum(1 for v in range(n) if hom.phi[v] in ("X0", "Y0", "X1", "Y1"))
    if small > hom.xi * n:
        bad.append(f"|phi^-1(X0uY0uX1uY1)|={small} > xi*n={hom.xi * n:.1f}")
    if collect:
        return bad
    assert not bad, bad
    return []


# -- two-vertex split (boundary of size at most 2) -------------------------


def two_vertex_split(t: Tree, eps: float) -> tuple[set[int], set[int]]:
    """Partition A u B with |A|,|B| <= (2/3-eps)n, T[A] a tree, and the
    vertices of A touching B an independent set of size at most 2."""
    n = t.n
    if eps > 1 / 100:
        raise HypothesisError(f"eps must be <= 1/100, got {eps}", violated="eps <= 1/100")
    if n < 1 / eps:
        raise HypothesisError(
            f"two_vertex_split needs n >= 1/eps = {1 / eps:.0f}, got {n}",
            violated="n >= 1/eps",
        )
    s = balanced_split(t)
    T1, T2 = set(s.T1), set(s.T2)
    if len(T1) > len(T2):
        T1, T2 = T2, T1
    tv = s.v
    limit = (2 / 3 - eps) * n
    while len(T2) > limit:
        nbrs2 = [w for w in t.adj[tv] if w in T2]
        if len(nbrs2) == 1:
            tp = nbrs2[0]
            T1.add(tp)
            T2.discard(tv)
            tv = tp
            continue
        comps = []
        seenc = {tv}
        for start in nbrs2:
            if start in seenc:
                continue
            comp = [start]
            seenc.add(start)
            stack = [start]
            while stack:
                u = stack.pop()
                for w in t.adj[u]:
                    if w in T2 and w not in seenc:
                        seenc.add(w)
                        comp.append(w)
                        stack.append(w)
            comps.append(comp)
        small = [c for c in comps if len(c) <= (1 / 3 - 2 * eps) * n]
        if small:
            S = min(small, key=lambda c: (len(c), min(c)))
            T1.update(S)
            T2.difference_update(S)
            continue
        # exactly two components, both large: peel a balanced piece of one
        if len(comps) != 2:
            raise HypothesisError(
                f"split invariant broke: {len(comps)} large components at shared vertex",
                violated="exactly two large components",
            )
        S1, S2 = comps
        t1v = next(w for w in t.adj[tv] if w in set(S1))
        t2v = next(w for w in t.adj[tv] if w in set(S2))
        sub = _induced_subtree(t, S1)
        ssplit = balanced_split(sub.tree)
        side_a = {sub.back[x] for x in ssplit.T1}
        side_b = {sub.back[x] for x in ssplit.T2}
        if t1v in side_a and t1v in side_b:
            s1p = side_a if len(side_a) <= len(side_b) else side_b
        elif t1v in side_a:
            s1p = side_a
        else:
            s1p = side_b
        A = T1 | s1p | {t2v}
        B = set(range(n)) - A
        _audit_two_vertex(t, A, B, eps)
        return A, B
    A = set(T2)
    B = set(range(n)) - A
    _audit_two_vertex(t, A, B, eps)
    return A, B


def _audit_two_vertex(t: Tree, A: set[int], B: set[int], eps: float) -> None:
    n = t.n
    if not (_induces_tree(t, A) and len(A) <= (2 / 3 - eps) * n and len(B) <= (2 / 3 - eps) * n):
        raise HypothesisError(
            f"two_vertex_split sizes failed: |A|={len(A)}, |B|={len(B)}, "
            f"limit={(2 / 3 - eps) * n:.1f}",
            violated="|A|,|B| <= (2/3-eps)n",
        )
    bd = [v for v in A if any(w in B for w in t.adj[v])]
    if len(bd) > 2 or any(w in bd for v in bd for w in t.adj[v]):
        raise HypothesisError(f"boundary {bd} not an independent set of size <= 2")


@dataclass
class _Rebased:
    tree: Tree
    back: list[int]
    fwd: dict[int, int]


def _induced_subtree(t: Tree, vs: Sequence[int]) -> _Rebased:
    back = sorted(vs)
    fwd = {v: i for i, v in enumerate(back)}
    edges = [
        (fwd[u], fwd[w]) for u in back for w in t.adj[u] if w in fwd and u < w
    ]
    return _Rebased(Tree(len(back), edges), back, fwd)


# -- bipartite surplus split ------------------------------------------------


def bipartite_surplus_split(t: Tree, mu: float) -> TreeSplit:
    """Split so T1's V1-over-V2 surplus lands in [10*mu*n, 25*mu*n].

    Shrinks T1 from the whole tree by repeatedly shedding components that
    never push the surplus below 12*mu*n, stopping when any further shed
    would; the stopping arithmetic pins the surplus in the window.
    """
    n = t.n
    b = bipartition(t)
    t1c, t2c = b.t1, b.t2
    if t1c < 1.1 * t2c:
        raise HypothesisError(
            f"surplus split needs t1 >= 1.1*t2, got ({t1c},{t2c})", violated="t1 >= 1.1*t2"
        )
    if n < 1 / mu:
        raise HypothesisError(f"needs n >= 1/mu = {1 / mu:.0f}, got {n}", violated="n >= 1/mu")
    lo = 12 * mu * n
    if t1c - t2c < lo:
        raise HypothesisError(
            f"initial surplus {t1c - t2c} below 12*mu*n = {lo:.1f}",
            violated="t1-t2 >= 12*mu*n",
        )
    sign = [1 if v in b.V1 else -1 for v in range(n)]
    T1 = set(range(n))
    T2 = {0}
    v = 0
    surplus = t1c - t2c

    def comp_surplus(comp: list[int]) -> int:
        return sum(sign[x] for x in comp)

    while True:
        nbrs = [w for w in t.adj[v] if w in T1]
        if len(nbrs) == 0:
            break
        if len(nbrs) == 1:
            new_surplus = surplus - sign[v]
            if new_surplus < lo:
                break
            vp = nbrs[0]
            T1.discard(v)
            T2.add(vp)
            surplus = new_surplus
            v = vp
            continue
        comps = []
        seenc = {v}
        for start in nbrs:
            comp = [start]
            seenc.add(start)
            stack = [start]
            while stack:
                u = stack.pop()
                for w in t.adj[u]:
                    if w in T1 and w not in seenc:
                        seenc.add(w)
                        comp.append(w)
                        stack.append(w)
            comps.append(comp)
        surps = [comp_surplus(c) for c in comps]
        neg = [i for i in range(len(comps)) if surps[i] < 0]
        if neg:
            i = min(neg, key=lambda j: (min(comps[j])))
            T2.update(comps[i])
            T1.difference_update(comps[i])
            surplus -= surps[i]
            continue
        i = min(range(len(comps)), key=lambda j: (surps[j], min(comps[j])))
        if surplus - surps[i] >= lo:
            T2.update(comps[i])
            T1.difference_update(comps[i])
            surplus -= surps[i]
            continue
        break
    hi = 25 * mu * n
    if not (10 * mu * n <= surplus <= hi):
        raise HypothesisError(
            f"surplus {surplus} escaped window [{10 * mu * n:.1f}, {hi:.1f}]",
            violated="10*mu*n <= surplus <= 25*mu*n",
        )
    return TreeSplit(frozenset(T1), frozenset(T2), v)


# -- subtree rich in V2 ------------------------------------------------------


def v2_rich_subtree(t: Tree, m: int) -> tuple[set[int], int | None]:
    """A subtree with >= m vertices of V2, at most 10^4*m vertices, and at
    most one V2 vertex having a neighbour outside.

    Returns (vertex set, the boundary V2 vertex or None).
    """
    n = t.n
    b = bipartition(t)
    if not (1 <= m <= n / 18):
        raise HypothesisError(f"need 1 <= m <= n/18, got m={m}, n={n}", violated="m <= n/18")
    if 3 * b.t2 < b.t1:
        raise HypothesisError(
            f"need t2 >= t1/3, got ({b.t1},{b.t2})", violated="t2 >= t1/3"
        )

    pieces: list[tuple[set[int], int]] = []  # (vertices, attach vertex within prefix)

    def split_all(vs: list[int], anchor: int) -> None:
        """Emit pieces of size in [6m, 18m]; `anchor` is the vertex where
        this subtree meets everything already emitted."""
        if len(vs) <= 18 * m:
            pieces.append((set(vs), anchor))
            return
        sub = _induced_subtree(t, vs)
        s = balanced_split(sub.tree)
        P = {sub.back[x] for x in s.T1}
        Qs = {sub.back[x] for x in s.T2}
        w = sub.back[s.v]
        if anchor in P and (anchor != w or len(P) <= len(Qs)):
            split_all(sorted(P), anchor)
            split_all(sorted(Qs), w)
        else:
            split_all(sorted(Qs), anchor)
            split_all(sorted(P), w)

    split_all(list(range(n)), 0)
    ell = len(pieces)
    for vs, _ in pieces:
        if not (6 * m <= len(vs) <= 18 * m):
            raise AssertionError(f"piece size {len(vs)} outside [6m,18m]")
    rich = [i for i in range(ell) if sum(1 for x in pieces[i][0] if x in b.V2) >= m]
    if not rich:
        raise HypothesisError("no piece holds m vertices of V2", violated="|I| >= 1")
    # auxiliary attachment tree: piece j hangs off the smallest earlier piece
    # containing its attach vertex
    degK = [0] * ell
    attach_parent = [-1] * ell
    for j in range(1, ell):
        aj = pieces[j][1]
        for i in range(j):
            if aj in pieces[i][0]:
                attach_parent[j] = i
                degK[i] += 1
                degK[j] += 1
                break
    i = min(rich, key=lambda x: (degK[x], x))
    if degK[i] > 200:
        raise HypothesisError(
            f"every V2-rich piece has attachment degree > 200 (got {degK[i]})",
            violated="d_K(i) <= 200",
        )
    body, ti = pieces[i]
    ext = set()
    for x in body:
        if x == ti:
            continue
        for w in t.adj[x]:
            if w not in body and w in b.V1:
                ext.add(w)
    Tp = body | ext
    if len(Tp) > 10_000 * m:
        raise HypothesisError(f"|T'|={len(Tp)} exceeds 10^4*m", violated="|T'| <= 10^4*m")
    boundary = None
    for x in sorted(Tp):
        if x in b.V2 and any(w not in Tp for w in t.adj[x]):
            if boundary is not None:
                raise AssertionError("two boundary V2 vertices in T'")
            boundary = x
    assert _induces_tree(t, Tp)
    assert sum(1 for x in Tp if x in b.V2) >= m
    return Tp, boundary


# -- sparse cuts -------------------------------------------------------------


def _comp_with_root(t: Tree, v: int) -> list[tuple[list[int], int]]:
    """Components of T - v, each with the neighbour of v it hangs from."""
    out = []
    seen = {v}
    for start in t.adj[v]:
        if start in seen:
            continue
        comp = [start]
        seen.add(start)
        stack = [start]
        while stack:
            u = stack.pop()
            for w in t.adj[u]:
                if w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        out.append((comp, start))
    return out


def _deep_heavy_vertex(t: Tree, root: int, comp: set[int], need: int) -> int:
    """Deepest vertex of the subtree `comp` (rooted at root) whose own
    subtree still has >= need vertices."""
    par = {root: -1}
    order = [root]
    depth = {root: 0}
    stack = [root]
    while stack:
        u = stack.pop()
        for w in t.adj[u]:
            if w in comp and w not in par and w != par.get(u):
                par[w] = u
                depth[w] = depth[u] + 1
                order.append(w)
                stack.append(w)
    size = {u: 1 for u in order}
    for u in reversed(order):
        if par[u] != -1:
            size[par[u]] += size[u]
    best = root
    for u in order:
        if size[u] >= need and (depth[u] > depth[best] or (depth[u] == depth[best] and u < best)):
            best = u
    return best


def _subtree_children(t: Tree, root_of_comp: int, comp: set[int], vp: int) -> list[tuple[list[int], int]]:
    """Child subtrees hanging below vp inside `comp` rooted at root_of_comp."""
    par = {root_of_comp: -1}
    stack = [root_of_comp]
    while stack:
        u = stack.pop()
        for w in t.adj[u]:
            if w in comp and w not in par:
                par[w] = u
                stack.append(w)
    out = []
    for ch in t.adj[vp]:
        if ch in comp and par.get(ch) == vp:
            sub = [ch]
            stack = [ch]
            while stack:
                u = stack.pop()
                for w in t.adj[u]:
                    if w in comp and par.get(w) == u:
                        sub.append(w)
                        stack.append(w)
            out.append((sub, ch))
    return out


def _finish_cut(t: Tree, B: set[int], eps: float, d: int, trace: str) -> SparseCut:
    A = set(range(t.n)) - B
    boundary = frozenset(v for v in A if any(w in B for w in t.adj[v]))
    cut = SparseCut(frozenset(A), frozenset(B), eps, d, boundary, trace)
    try:
        audit_sparse_cut(t, cut)
    except AssertionError as e:
        raise HypothesisError(f"sparse cut audit failed in {trace}: {e}", violated=str(e))
    return cut


def sparse_cut(
    t: Tree,
    eps: float,
    b: Bipartition | None = None,
    mu: float = 0.02,
    c: float = 0.01,
    require_unbalanced: bool = True,
) -> SparseCut:
    """An (eps, ceil(sqrt(n)))-sparse cut, following the existence proof's
    case order; the trace names the branch taken.

    Also guarantees at most two boundary vertices are adjacent to leaves
    of T lying in A (audited).  The t1 >= (2-mu)t2 hypothesis is where
    the statement lives, but the construction never uses it, so callers
    exploring balanced trees may disable that gate.
    """
    n = t.n
    if b is None:
        b = bipartition(t)
    d = math.ceil(math.sqrt(n))
    delta = t.max_degree()
    if require_unbalanced and b.t1 < (2 - mu) * b.t2:
        raise HypothesisError(
            f"sparse cut needs t1 >= (2-mu)t2: ({b.t1},{b.t2}), mu={mu}",
            violated="t1 >= (2-mu)t2",
        )
    if delta > c * n:
        raise HypothesisError(f"Delta(T)={delta} > c*n={c * n:.1f}", violated="Delta <= c*n")
    if eps > 1 / 64:
        raise HypothesisError(f"eps={eps} too large for the case windows", violated="eps <= 1/64")
    if n * eps < 2:
        raise HypothesisError(f"needs n*eps >= 2, got {n * eps:.2f}", violated="n*eps >= 2")

    v = half_component_vertex(t)
    comps = _comp_with_root(t, v)
    comps.sort(key=lambda cr: (-len(cr[0]), min(cr[0])))
    sizes = [len(c0) for c0, _ in comps]
    total = sum(sizes)  # = n - 1
    prefix = 0
    r = 0
    for i, s in enumerate(sizes):
        if prefix + s <= (2 / 3 - 2 * eps) * n:
            prefix += s
            r = i + 1
        else:
            break
    if r == 0:
        raise HypothesisError(
            f"largest component {sizes[0]} exceeds (2/3-2eps)n", violated="|T_1| <= (2/3-2eps)n"
        )

    if sizes[r - 1] <= d:
        # all components from index r-1 on are small; peel the tail
        lo = (1 / 3 + 1.5 * eps) * n
        tail = total - sum(sizes[: r - 1])
        rp = r - 1
        while rp < len(sizes) and tail > lo + d:
            tail -= sizes[rp]
            rp += 1
        if tail < lo:
            raise HypothesisError(
                f"tail window missed: tail={tail} < {lo:.1f}", violated="tail >= (1/3+1.5eps)n"
            )
        B: set[int] = set()
        for comp, root in comps[rp:]:
            B.update(comp)
            B.discard(root)
        return _finish_cut(t, B, eps, d, "case1_small_components")

    if prefix >= (1 / 3 + eps) * n:
        B = set()
        for comp, _root in comps[:r]:
            B.update(comp)
        if r > d:
            raise HypothesisError(f"cut vertex degree r={r} > d={d}", violated="r <= sqrt(n)")
        return _finish_cut(t, B, eps, d, "case2_big_prefix")

    # two nearly balanced components
    if not (r == 1 and len(sizes) >= 2):
        raise HypothesisError(
            f"case trace: r={r}, sizes={sizes[:4]}...; expected r=1 with two big components",
            violated="r == 1",
        )
    if not ((1 / 3 - 3 * eps) * n <= sizes[1] <= sizes[0] <= (1 / 3 + eps) * n):
        raise HypothesisError(
            f"component sizes {sizes[0]},{sizes[1]} outside the case-3 window",
            violated="(1/3-3eps)n <= |T_2| <= |T_1| <= (1/3+eps)n",
        )
    legs = []
    need = math.ceil((1 / 3 - 10 * eps) * n)
    for j in range(2):
        comp, root = comps[j]
        cset = set(comp)
        vp = _deep_heavy_vertex(t, root, cset, need)
        children = _subtree_children(t, root, cset, vp)
        legs.append((comp, root, vp, children))

    for j in range(2):
        comp_other = comps[1 - j][0]
        _comp, _root, vp, children = legs[j]
        smalls = [(sub, ch) for sub, ch in children if len(sub) <= d]
        if sum(len(s) for s, _ in smalls) >= 5 * eps * n:
            smalls.sort(key=lambda sc: (len(sc[0]), min(sc[0])))
            B = set(comp_other)
            got = 0
            for sub, ch in smalls:
                if got >= 5 * eps * n:
                    break
                B.update(sub)
                B.discard(ch)
                got += len(sub)
            if got > 5 * eps * n + d:
                raise HypothesisError(
                    f"small-subtree total {got} overshot", violated="sum <= 5*eps*n + d"
                )
            return _finish_cut(t, B, eps, d, f"case3_leg{j + 1}_smalls")

    bigs = []
    for j in range(2):
        _comp, _root, vp, children = legs[j]
        leg_bigs = [(sub, ch) for sub, ch in children if len(sub) > d]
        if sum(len(s) for s, _ in leg_bigs) < (1 / 3 - 20 * eps) * n:
            raise HypothesisError(
                f"leg {j + 1} big-subtree mass below (1/3-20eps)n", violated="big mass >= (1/3-20eps)n"
            )
        bigs.extend(leg_bigs)
    bigs.sort(key=lambda sc: (-len(sc[0]), min(sc[0])))
    B = set()
    got = 0
    for sub, _ch in bigs:
        if got >= (1 / 3 + eps) * n:
            break
        B.update(sub)
        got += len(sub)
    if got < (1 / 3 + eps) * n or got >= (2 / 3 - 9 * eps) * n:
        raise HypothesisError(
            f"big-subtree selection {got} missed [{(1 / 3 + eps) * n:.0f}, {(2 / 3 - 9 * eps) * n:.0f})",
            violated="(1/3+eps)n <= |B| < (2/3-9eps)n",
        )
    return _finish_cut(t, B, eps, d, "case3_big_subtrees")


def audit_few_leafy_boundary(t: Tree, cut: SparseCut) -> None:
    """At most two boundary vertices are adjacent to leaves of T inside A."""
    leafy = 0
    for v in cut.boundary:
        if any(w in cut.A and t.degree(w) == 1 for w in t.adj[v]):
            leafy += 1
    assert leafy <= 2, f"{leafy} boundary vertices adjacent to A-leaves"


@dataclass(frozen=True)
class SparseCutLeaves:
    """Sparse cut plus the leaf payload one of the two modes provides.

    Mode A1: L is a set of >= alpha*n leaves of T in V1 whose parents
    each see at most d of them.  Mode A2: V1prime has one vertex of V1
    per boundary vertex of the cut, no two sharing a neighbour, with
    |N(V1prime)| <= eps*n, and L is a disjoint set of >= alpha*n leaves
    in V1 with N(V1prime) and N(L) disjoint.
    """

    cut: SparseCut
    mode: str
    L: frozenset[int]
    V1prime: frozenset[int]


def audit_sparse_cut_leaves(t: Tree, b: Bipartition, res: SparseCutLeaves, alpha: float, eps: float) -> None:
    audit_sparse_cut(t, res.cut)
    n = t.n
    assert len(res.L) >= alpha * n, f"|L|={len(res.L)} < alpha*n"
    for u in res.L:
        assert u in b.V1 and t.degree(u) == 1, f"{u} is not a V1-leaf"
    if res.mode == "A1":
        parents = {t.adj[u][0] for u in res.L}
        for p in parents:
            assert sum(1 for w in t.adj[p] if w in res.L) <= res.cut.d
    else:
        assert res.mode == "A2"
        assert len(res.V1prime) == len(res.cut.boundary)
        assert not (res.V1prime & res.L)
        nbrs: dict[int, int] = {}
        nv1p = set()
        for x in res.V1prime:
            assert x in b.V1
            for w in t.adj[x]:
                assert w not in nbrs, f"{x} and {nbrs[w]} share neighbour {w}"
                nbrs[w] = x
                nv1p.add(w)
        assert len(nv1p) <= eps * n, f"|N(V1')|={len(nv1p)} > eps*n"
        nl = {t.adj[u][0] for u in res.L}
        assert not (nv1p & nl), "N(V1') meets N(L)"


def _components_after_removing(t: Tree, removed: set[int]) -> dict[int, set[int]]:
    """Map each vertex outside `removed` to its component (shared sets)."""
    comp_of: dict[int, set[int]] = {}
    for v in range(t.n):
        if v in removed or v in comp_of:
            continue
        comp = {v}
        stack = [v]
        while stack:
            u = stack.pop()
            for w in t.adj[u]:
                if w not in removed and w not in comp:
                    comp.add(w)
                    stack.append(w)
        for u in comp:
            comp_of[u] = comp
    return comp_of


def sparse_cut_with_leaves(
    t: Tree, eps: float, alpha: float, mu: float, c: float, gamma: float | None = None
) -> SparseCutLeaves:
    """Sparse cut together with the leaf payload (mode A1 or A2).

    Follows the source construction: start from a slightly stricter cut
    (eps + 12*alpha margin, which is exactly what the repair steps spend,
    in place of the paper's larger slack), classify the hanging boundary
    components, and either harvest spread-out leaves (A1) or build the
    component-representative set V1' (A2).  Every output is audited
    against the stated payload conditions before being returned.
    """
    n = t.n
    b = bipartition(t)
    d = math.ceil(math.sqrt(n))
    if b.t1 < (2 - mu) * b.t2:
        raise HypothesisError(
            f"needs t1 >= (2-mu)t2: ({b.t1},{b.t2})", violated="t1 >= (2-mu)t2"
        )
    if alpha > eps:
        raise HypothesisError(f"needs alpha <= eps, got alpha={alpha}, eps={eps}")
    if eps + 12 * alpha > 1 / 64:
        raise HypothesisError(
            f"eps + 12*alpha = {eps + 12 * alpha:.4f} exceeds the 1/64 window cap",
            violated="eps + 12*alpha <= 1/64",
        )
    if gamma is None:
        gamma = eps * eps
    alpha_count = math.ceil(alpha * n)

    def a1_payload() -> SparseCutLeaves | None:
        leaf_set = {u for u in b.V1 if t.degree(u) == 1}
        all_leaves = {u for u in range(n) if t.degree(u) == 1}
        good = set()
        for u in sorted(leaf_set):
            p = t.adj[u][0]
            if sum(1 for w in t.adj[p] if w in all_leaves) <= d:
                good.add(u)
        if len(good) < alpha_count:
            return None
        cut = sparse_cut(t, eps, b, mu, c)
        L = frozenset(sorted(good)[:alpha_count])
        res = SparseCutLeaves(cut, "A1", L, frozenset())
        audit_sparse_cut_leaves(t, b, res, alpha, eps)
        return res

    def claim(cutA: set[int], cutB: set[int], boundary: list[int], r_of: dict[int, int], L: set[int], trace: str) -> SparseCutLeaves:
        comp_of = _components_after_removing(t, cutA - set(boundary))
        R = {a: comp_of[a] for a in boundary}
        ranked = sorted(
            boundary, key=lambda a: (-(len(R[a] & L) / len(R[a])), a)
        )
        picked: list[int] = []
        got = 0
        for a in ranked:
            if got >= 2 * alpha_count:
                break
            picked.append(a)
            got += len(R[a] & L)
        if got < 2 * alpha_count:
            raise HypothesisError(
                f"{trace}: boundary components hold only {got} < 2*alpha*n leaves",
                violated="sum |R_a cap L| >= 2*alpha*n",
            )
        if got <= 4 * alpha_count:
            body = set()
            for a in picked:
                body |= R[a]
            if len(body) > 12 * alpha * n:
                raise HypothesisError(
                    f"{trace}: picked components carry {len(body)} > 12*alpha*n vertices",
                    violated="sum |R_a| <= 12*alpha*n",
                )
            Lp = sorted(x for a in picked for x in (R[a] & L))[:alpha_count]
            newB = set()
            keep = [a for a in boundary if a not in picked]
            for a in keep:
                newB |= R[a] - {a}
            cut = _finish_cut(t, newB, eps, d, trace + "+claim_shrink")
            res = SparseCutLeaves(cut, "A2", frozenset(Lp), frozenset(r_of[a] for a in keep))
            audit_sparse_cut_leaves(t, b, res, alpha, eps)
            return res
        astar = picked[-1]
        pool = sorted(R[astar] & L)
        if len(pool) < 2 * alpha_count:
            raise HypothesisError(
                f"{trace}: last component holds {len(pool)} < 2*alpha*n leaves",
                violated="|R_a* cap L| >= 2*alpha*n",
            )
        by_parent: dict[int, list[int]] = {}
        for u in pool:
            by_parent.setdefault(t.adj[u][0], []).append(u)
        groups = sorted(by_parent.values(), key=lambda g: (-len(g), g[0]))
        Lp2: list[int] = []
        gi = 0
        while len(Lp2) < alpha_count and gi < len(groups) - 1:
            take = groups[gi][: alpha_count - len(Lp2)]
            Lp2.extend(take)
            gi += 1
        if len(Lp2) < alpha_count or gi >= len(groups):
            raise HypothesisError(
                f"{trace}: cannot reserve a leaf with untouched parent for V1'",
                violated="leaf groups admit a spare parent",
            )
        rprime = groups[gi][0]
        cut = _finish_cut(t, set(cutB), eps, d, trace + "+claim_keep")
        v1p = frozenset(r_of[a] for a in boundary if a != astar) | {rprime}
        res = SparseCutLeaves(cut, "A2", frozenset(Lp2), v1p)
        audit_sparse_cut_leaves(t, b, res, alpha, eps)
        return res

    def representatives(boundary: list[int], cutA: set[int]) -> tuple[dict[int, set[int]], dict[int, int], list[int]]:
        comp_of = _components_after_removing(t, cutA - set(boundary))
        R = {a: comp_of[a] for a in boundary}
        r_of = {}
        rich = []
        for a in boundary:
            body = R[a] - {a}
            v1_in = [x for x in body if x in b.V1]
            if len(v1_in) >= gamma * len(R[a]):
                rich.append(a)
                r_of[a] = min(v1_in, key=lambda x: (t.degree(x), x))
        return R, r_of, rich

    # spread-out leaves give the A1 payload with any valid cut; prefer it
    # before the heavier case analysis
    quick = a1_payload()
    if quick is not None:
        return quick
    try:
        cut0 = sparse_cut(t, eps + 12 * alpha, b, mu, c)
        boundary0 = sorted(cut0.boundary)
        A0, B0 = set(cut0.A), set(cut0.B)
        R, r_of, rich = representatives(boundary0, A0)
        mass_rich = sum(len(R[a]) - 1 for a in rich)
        if mass_rich >= (1 / 3 + 2 * eps) * n:
            # Case I: rich components dominate
            lf = [
                u
                for u in sorted(A0 - set(boundary0))
                if u in b.V1 and t.degree(u) == 1 and t.adj[u][0] not in cut0.boundary
            ]
            if len(lf) >= alpha_count:
                newB = set()
                for a in rich:
                    newB |= R[a] - {a}
                cut = _finish_cut(t, newB, eps, d, "caseI_outside_leaves")
                res = SparseCutLeaves(
                    cut, "A2", frozenset(lf[:alpha_count]), frozenset(r_of[a] for a in rich)
                )
                audit_sparse_cut_leaves(t, b, res, alpha, eps)
                return res
            L1 = {
                u
                for a in rich
                for u in R[a]
                if u in b.V1 and t.degree(u) == 1
            }
            newB = set()
            for a in rich:
                newB |= R[a] - {a}
            newA = set(range(n)) - newB
            return claim(newA, newB, rich, r_of, L1, "caseI")
        # Case II
        res = a1_payload()
        if res is not None:
            return res
        return _case_ii_heavy_parents(t, b, eps, alpha, mu, c, d, alpha_count, claim)
    except HypothesisError:
        res = a1_payload()
        if res is not None:
            return res
        raise


def _case_ii_heavy_parents(t, b, eps, alpha, mu, c, d, alpha_count, claim):
    """Leaves cluster on few heavy parents: carve out whole parent subtrees."""
    n = t.n
    all_leaves = {u for u in range(n) if t.degree(u) == 1}
    v = half_component_vertex(t)
    par = t.parents_from(v)
    order = t.bfs_order(v)
    depth = [0] * n
    for u in order[1:]:
        depth[u] = depth[par[u]] + 1
    L2 = set()
    for u in sorted(b.V1):
        if t.degree(u) != 1 or u == v:
            continue
        p = t.adj[u][0]
        if p == v:
            continue
        if sum(1 for w in t.adj[p] if w in all_leaves) > d:
            L2.add(u)
    if len(L2) < alpha_count:
        raise HypothesisError(
            f"neither spread-out nor clustered V1-leaves reach alpha*n (|L2|={len(L2)})",
            violated="|L2| >= alpha*n",
        )
    parents = sorted({t.adj[u][0] for u in L2})
    if len(parents) > d:
        raise HypothesisError(f"{len(parents)} heavy parents > sqrt(n)", violated="k <= sqrt(n)")
    # subtree of each parent below the root v
    size = [1] * n
    for u in reversed(order):
        if par[u] >= 0:
            size[par[u]] += size[u]

    def subtree(p: int) -> set[int]:
        out = {p}
        stack = [p]
        while stack:
            x = stack.pop()
            for w in t.adj[x]:
                if par[w] == x:
                    out.add(w)
                    stack.append(w)
        return out

    def is_desc(x: int, anc: int) -> bool:
        while x >= 0:
            if x == anc:
                return True
            x = par[x]
        return False

    tops = [
        p for p in parents if not any(q != p and is_desc(p, q) for q in parents)
    ]
    tops.sort(key=lambda p: (-size[p], p))
    acc = 0
    I_prime = []
    for p in tops:
        if acc >= (1 / 3 + 2 * eps) * n:
            break
        I_prime.append(p)
        acc += size[p]
    if acc < (1 / 3 + 2 * eps) * n:
        raise HypothesisError(
            f"heavy-parent subtrees total {acc} < (1/3+2eps)n", violated="sum |P_i| >= (1/3+2eps)n"
        )
    if acc <= (2 / 3 - 2 * eps) * n:
        Bbar = set()
        for p in I_prime:
            Bbar |= subtree(p)
    else:
        if len(I_prime) != 2:
            raise HypothesisError(
                f"case II.2 expected two dominant subtrees, got {len(I_prime)}",
                violated="|I'| == 2",
            )
        p1, p2 = I_prime
        if len(subtree(p1) & L2) < len(subtree(p2) & L2):
            p1, p2 = p2, p1
        sub1 = subtree(p1)
        qs = [q for q in parents if q != p1 and q in sub1]
        qs.sort(key=lambda q: (-depth[q], q))
        got = 0
        chosen: set[int] = set()
        Qs: set[int] = set()
        for q in qs:
            if got >= 20 * eps * n:
                break
            sq = subtree(q)
            new = sq - Qs
            Qs |= sq
            got += len(new & L2)
        Bbar = subtree(p2) | Qs
    boundary = sorted(a for a in set(range(n)) - Bbar if any(w in Bbar for w in t.adj[a]))
    r_of = {}
    for a in boundary:
        roots = sorted(w for w in t.adj[a] if w in Bbar)
        root = roots[0]
        kids = sorted(w for w in t.adj[root] if w in L2 and w in Bbar)
        if not kids:
            raise HypothesisError(
                f"boundary vertex {a} hangs a subtree without L2 leaves",
                violated="chosen roots own L2 leaves",
            )
        r_of[a] = kids[0]
    Abar = set(range(n)) - Bbar
    inA = sorted(u for u in L2 & Abar if t.adj[u][0] not in boundary and u not in r_of.values())
    if len(inA) >= alpha_count:
        cut = _finish_cut(t, Bbar, eps, d, "caseII_heavy_keepA")
        res = SparseCutLeaves(
            cut, "A2", frozenset(inA[:alpha_count]), frozenset(r_of[a] for a in boundary)
        )
        audit_sparse_cut_leaves(t, b, res, alpha, eps)
        return res
    return claim(Abar, Bbar, boundary, r_of, L2, "caseII_heavy")
