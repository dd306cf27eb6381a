"""Embedding kernels: greedy tree embeddings, the exact monochromatic-copy
search, and the bare-path embeddings into dense and bipartite hosts.

Hosts are monochromatic views of an RBGraph: full-length bit-adjacency
rows plus a vertex mask.  Tree vertices map to host vertices through
plain dicts; every embedding any operation returns has been re-validated
by the independent checker first.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from treeramsey.errors import HypothesisError, RetryBudgetExceeded
from treeramsey.matching import max_matching, star_packing
from treeramsey.rbgraph import RBGraph, bits_of, iter_bits, mask_of
from treeramsey.trees import Bipartition, Tree, bipartition
from treeramsey.decomp import bare_paths


@dataclass(frozen=True)
class Embedding:
    """Injective map from tree vertices to host vertices, with its color."""

    map: dict[int, int]
    color: str

    def image_mask(self) -> int:
        return mask_of(self.map.values())


def validate_embedding(g: RBGraph, t: Tree, emb: Embedding) -> None:
    """Independent checker: injectivity plus per-edge color membership."""
    assert len(emb.map) == t.n, f"embedded {len(emb.map)} of {t.n} vertices"
    assert set(emb.map.keys()) == set(range(t.n))
    images = list(emb.map.values())
    assert len(set(images)) == len(images), "not injective"
    rows = g.rows(emb.color)
    for u, w in t.edges():
        a, b = emb.map[u], emb.map[w]
        assert (rows[a] >> b) & 1, f"tree edge ({u},{w}) not {emb.color} at ({a},{b})"


def nth_set_bit(x: int, k: int) -> int:
    """Index of the k-th (0-based) set bit of x."""
    idx = 0
    while x:
        chunk = x & 0xFFFFFFFFFFFFFFFF
        c = chunk.bit_count()
        if k < c:
            while True:
                low = chunk & -chunk
                if k == 0:
                    return idx + low.bit_length() - 1
                k -= 1
                chunk &= chunk - 1
        k -= c
        x >>= 64
        idx += 64
    raise IndexError("bit index out of range")


def pick_random_bit(x: int, rng) -> int:
    c = x.bit_count()
    if c == 0:
        raise IndexError("empty candidate set")
    return nth_set_bit(x, int(rng.integers(c)))


def _bfs_order_with_parents(t: Tree, root: int) -> list[tuple[int, int]]:
    """[(vertex, parent)] in BFS order from root (parent -1 for the root)."""
    from collections import deque

    seen = [False] * t.n
    seen[root] = True
    out = [(root, -1)]
    q = deque([root])
    while q:
        u = q.popleft()
        for w in t.adj[u]:
            if not seen[w]:
                seen[w] = True
                out.append((w, u))
                q.append(w)
    return out


def _forest_orders(t: Tree, vertices: Iterable[int], roots: Sequence[int] = ()) -> list[tuple[int, int]]:
    """BFS orders over the induced forest T[vertices], preferring the given
    roots; other components are rooted at their smallest vertex."""
    from collections import deque

    vset = set(vertices)
    seen: set[int] = set()
    out: list[tuple[int, int]] = []

    def run(r: int) -> None:
        seen.add(r)
        out.append((r, -1))
        q = deque([r])
        while q:
            u = q.popleft()
            for w in t.adj[u]:
                if w in vset and w not in seen:
                    seen.add(w)
                    out.append((w, u))
                    q.append(w)

    for r in roots:
        if r in vset and r not in seen:
            run(r)
    for r in sorted(vset):
        if r not in seen:
            run(r)
    return out


# -- greedy embeddings ------------------------------------------------------


def greedy_embed(
    t: Tree,
    rows: Sequence[int],
    pool: int,
    anchor: tuple[int, int] | None = None,
    partial: dict[int, int] | None = None,
    vertices: Iterable[int] | None = None,
) -> dict[int, int]:
    """Greedy embedding into a pool with minimum degree >= |T| - 1.

    Each vertex goes to the lowest-id unused pool neighbour of its
    parent's image; components without an embedded vertex start at the
    lowest unused pool vertex.  `partial` seeds an existing embedding;
    `vertices` restricts to a sub-forest of T.
    """
    vs = set(vertices) if vertices is not None else set(range(t.n))
    need = len(vs)
    for v in iter_bits(pool):
        if (rows[v] & pool).bit_count() < need - 1:
            raise HypothesisError(
                f"pool vertex {v} has degree {(rows[v] & pool).bit_count()} < {need - 1}",
                violated="delta(pool) >= |T|-1",
            )
    emb = dict(partial) if partial else {}
    used = mask_of(emb.values())
    roots = [tv for tv in emb if tv in vs]
    if anchor is not None:
        tv, gv = anchor
        if tv not in emb:
            emb[tv] = gv
            used |= 1 << gv
            roots.append(tv)
    for v, par in _forest_orders(t, vs, roots):
        if v in emb:
            continue
        cands = (rows[emb[par]] if par >= 0 and par in emb else ~0) & pool & ~used
        if not cands:
            raise HypothesisError(f"greedy ran out of candidates at tree vertex {v}")
        g = (cands & -cands).bit_length() - 1
        emb[v] = g
        used |= 1 << g
    return emb


def greedy_embed_bipartite(
    t: Tree,
    rows: Sequence[int],
    side_of: Sequence[int],
    pools: dict[int, int],
    anchor: tuple[int, int] | None = None,
    partial: dict[int, int] | None = None,
    vertices: Iterable[int] | None = None,
    special: dict[int, int] | None = None,
) -> dict[int, int]:
    """Greedy embedding with a prescribed side (1 or 2) per tree vertex.

    pools[i] is the mask available to side i; `special` pins specific
    tree vertices to specific hosts.  Candidate choice is the lowest-id
    unused neighbour of the parent's image within the vertex's own pool.
    """
    vs = set(vertices) if vertices is not None else set(range(t.n))
    emb = dict(partial) if partial else {}
    used = mask_of(emb.values())
    special = special or {}
    roots = [tv for tv in emb if tv in vs]
    if anchor is not None and anchor[0] not in emb:
        emb[anchor[0]] = anchor[1]
        used |= 1 << anchor[1]
        roots.append(anchor[0])
    for v, par in _forest_orders(t, vs, roots):
        if v in emb:
            continue
        if v in special:
            g = special[v]
            if used >> g & 1:
                raise HypothesisError(f"pinned host {g} already used")
            if par >= 0 and par in emb and not (rows[emb[par]] >> g) & 1:
                raise HypothesisError(f"pinned host {g} not adjacent to parent image")
        else:
            pool = pools[side_of[v]]
            cands = (rows[emb[par]] if par >= 0 and par in emb else ~0) & pool & ~used
            if not cands:
                raise HypothesisError(
                    f"bipartite greedy ran out of side-{side_of[v]} candidates at {v}"
                )
            g = (cands & -cands).bit_length() - 1
        emb[v] = g
        used |= 1 << g
    return emb


# -- exact monochromatic copy search ----------------------------------------


def _host_components(rows: Sequence[int], mask: int) -> list[int]:
    comps = []
    todo = mask
    while todo:
        v = (todo & -todo).bit_length() - 1
        comp = 1 << v
        frontier = rows[v] & todo
        while frontier:
            comp |= frontier
            new = 0
            for w in iter_bits(frontier):
                new |= rows[w]
            frontier = new & todo & ~comp
        comps.append(comp)
        todo &= ~comp
    return comps


def _bipartite_sides(rows: Sequence[int], comp: int) -> tuple[int, int] | None:
    """(side0, side1) masks if the component is bipartite, else None."""
    start = (comp & -comp).bit_length() - 1
    color = {start: 0}
    s0, s1 = 1 << start, 0
    frontier = [start]
    while frontier:
        nxt = []
        for u in frontier:
            for w in iter_bits(rows[u] & comp):
                if w in color:
                    if color[w] == color[u]:
                        return None
                else:
                    color[w] = 1 - color[u]
                    if color[w]:
                        s1 |= 1 << w
                    else:
                        s0 |= 1 << w
                    nxt.append(w)
        frontier = nxt
    return s0, s1


def _embed_exact(
    t: Tree, rows: Sequence[int], comp: int, anchor: tuple[int, int] | None = None
) -> dict[int, int] | None:
    """Complete backtracking search for T inside one host component,
    optionally with a tree vertex pinned to a host vertex."""
    n = t.n
    if anchor is None:
        root = max(range(n), key=lambda v: t.degree(v))
    else:
        root = anchor[0]
    order = _bfs_order_with_parents(t, root)
    degs = [t.degree(v) for v in range(n)]
    emb: dict[int, int] = {}

    def rec(i: int, used: int) -> bool:
        if i == len(order):
            return True
        v, par = order[i]
        if par < 0:
            cands = (1 << anchor[1]) if anchor is not None else comp & ~used
        else:
            cands = rows[emb[par]] & comp & ~used
        for g in iter_bits(cands):
            if (rows[g] & comp).bit_count() < degs[v]:
                continue
            emb[v] = g
            if rec(i + 1, used | (1 << g)):
                return True
            del emb[v]
        return False

    if rec(0, 0):
        return dict(emb)
    return None


def find_mono_copy(g: RBGraph, t: Tree, color: str, force: int | None = None) -> Embedding | None:
    """Exact decision search for a monochromatic copy of T.

    Complete backtracking with component restriction, bipartite class-fit
    pruning and degree pruning; deterministic.  With `force`, only copies
    whose image contains that host vertex count.
    """
    rows = g.rows(color)
    n = t.n
    if n > g.n:
        return None
    b = bipartition(t)
    maxdeg = t.max_degree()
    for comp in _host_components(rows, g.full):
        if comp.bit_count() < n:
            continue
        if force is not None and not (comp >> force) & 1:
            continue
        if max((rows[v] & comp).bit_count() for v in iter_bits(comp)) < maxdeg:
            continue
        sides = _bipartite_sides(rows, comp)
        if sides is not None and n >= 2:
            p, q = sides[0].bit_count(), sides[1].bit_count()
            if not (
                (b.t1 <= p and b.t2 <= q) or (b.t1 <= q and b.t2 <= p)
            ):
                continue
        if force is None:
            m = _embed_exact(t, rows, comp)
            if m is not None:
                return Embedding(m, color)
        else:
            # a copy through `force` exists iff some tree vertex maps there
            tried: set[bytes] = set()
            for tv in range(n):
                key = _rooted_code(t, tv)
                if key in tried:
                    continue
                tried.add(key)
                if (rows[force] & comp).bit_count() < t.degree(tv):
                    continue
                m = _embed_exact(t, rows, comp, anchor=(tv, force))
                if m is not None:
                    return Embedding(m, color)
    return None


def _rooted_code(t: Tree, root: int) -> bytes:
    """AHU code of T rooted at `root` (to dedup anchored searches)."""
    par = t.parents_from(root)
    order = t.bfs_order(root)
    code: list[bytes | None] = [None] * t.n
    for u in reversed(order):
        kids = sorted(code[v] for v in t.adj[u] if v != par[u])  # type: ignore[type-var]
        code[u] = b"(" + b"".join(kids) + b")"  # type: ignore[arg-type]
    return code[root]  # type: ignore[return-value]


def find_mono_copy_any(g: RBGraph, t: Tree, force: int | None = None) -> Embedding | None:
    for color in ("red", "blue"):
        e = find_mono_copy(g, t, color, force)
        if e is not None:
            return e
    return None


# -- Dirac-style path cover --------------------------------------------------


def hamilton_cycle(rows: Sequence[int], pool: int) -> list[int]:
    """Hamilton cycle of the graph induced on `pool` (delta >= |pool|/2).

    Constructive rotation-extension following the classical minimum-degree
    argument; audited before returning.
    """
    verts = bits_of(pool)
    m = len(verts)
    if m == 0:
        return []
    if m == 1:
        return verts
    if m == 2:
        if (rows[verts[0]] >> verts[1]) & 1:
            return verts
        raise HypothesisError("two isolated vertices cannot close a cycle")
    for v in verts:
        if (rows[v] & pool).bit_count() < m / 2:
            raise HypothesisError(
                f"vertex {v} has pool degree below |pool|/2", violated="Dirac condition"
            )

    path = [verts[0]]
    on_path = 1 << verts[0]

    def extend() -> bool:
        nonlocal on_path
        grew = False
        while True:
            tail_n = rows[path[-1]] & pool & ~on_path
            if tail_n:
                w = (tail_n & -tail_n).bit_length() - 1
                path.append(w)
            else:
                head_n = rows[path[0]] & pool & ~on_path
                if not head_n:
                    return grew
                w = (head_n & -head_n).bit_length() - 1
                path.insert(0, w)
            on_path |= 1 << w
            grew = True

    guard = 0
    while True:
        guard += 1
        if guard > 4 * m * m:
            raise HypothesisError("path cover iteration guard tripped")
        extend()
        if len(path) == m:
            # close the cycle
            if (rows[path[-1]] >> path[0]) & 1:
                cycle = list(path)
            else:
                cycle = None
                for i in range(1, len(path) - 1):
                    if (rows[path[-1]] >> path[i]) & 1 and (rows[path[0]] >> path[i + 1]) & 1:
                        cycle = path[: i + 1] + path[i + 1 :][::-1]
                        break
                if cycle is None:
                    raise HypothesisError("rotation failed to close the cycle")
            for i in range(m):
                assert (rows[cycle[i]] >> cycle[(i + 1) % m]) & 1
            return cycle
        # spanning path not yet reached: close current path into a cycle,
        # then absorb an outside vertex
        k = len(path)
        if (rows[path[-1]] >> path[0]) & 1:
            cyc = list(path)
        else:
            cyc = None
            for i in range(1, k - 1):
                if (rows[path[-1]] >> path[i]) & 1 and (rows[path[0]] >> path[i + 1]) & 1:
                    cyc = path[: i + 1] + path[i + 1 :][::-1]
                    break
            if cyc is None:
                raise HypothesisError("rotation failed on partial path")
        outside = pool & ~on_path
        w = -1
        pos = -1
        for cand in iter_bits(outside):
            nb = rows[cand]
            for i in range(k):
                if (nb >> cyc[i]) & 1:
                    w = cand
                    pos = i
                    break
            if w >= 0:
                break
        if w < 0:
            raise HypothesisError("pool not connected enough to absorb")
        # break the cycle next to cyc[pos] and hang w on the end
        path = cyc[pos + 1 :] + cyc[: pos + 1] + [w]
        on_path |= 1 << w


# -- bare-path embedding into a dense host ------------------------------------


def embed_bare_paths_dense(
    t: Tree,
    rows: Sequence[int],
    pool: int,
    anchor: tuple[int, int],
    mu: float,
    retry_budget: int = 8,
) -> dict[int, int]:
    """Spanning embedding into an almost complete host via bare paths.

    Removes the interiors of ceil(10*mu*n) disjoint length-4 bare paths
    (avoiding the anchor), embeds the rest greedily, covers the leftover
    vertices by length-2 paths from a Hamilton cycle, and stitches the
    paths back with a perfect matching in the endpoint graph.
    """
    n = t.n
    if pool.bit_count() != n:
        raise HypothesisError(f"host has {pool.bit_count()} vertices, tree has {n}")
    mindeg = min((rows[v] & pool).bit_count() for v in iter_bits(pool))
    if mindeg < min((1 - mu) * n, n - 1):
        raise HypothesisError(
            f"host min degree {mindeg} below (1-mu)n = {(1 - mu) * n:.1f}",
            violated="delta(H) >= (1-mu)n",
        )
    deficiency = n - 1 - mindeg
    if deficiency == 0:
        return greedy_embed(t, rows, pool, anchor=anchor)
    paths = [p for p in bare_paths(t, 4) if anchor[0] not in p]
    # the construction spends 10*mu*n paths when the tree has them; it only
    # truly needs enough to absorb the measured degree deficiency (greedy
    # slack, the Dirac condition on the leftover, and Hall slack in the
    # endpoint graph)
    ell = min(math.ceil(10 * mu * n), len(paths))
    need = max(
        math.ceil(deficiency / 3), math.ceil(2 * (deficiency + 1) / 3), 2 * deficiency + 2
    )
    if ell < need:
        raise HypothesisError(
            f"tree offers {len(paths)} disjoint bare 4-paths off the anchor; "
            f"need at least {need} for deficiency {deficiency}",
            violated="enough bare paths for the deficiency",
        )
    paths = paths[:ell]
    interior = {v for p in paths for v in p[1:-1]}
    keep = [v for v in range(n) if v not in interior]
    emb = greedy_embed(t, rows, pool, anchor=anchor, vertices=keep)
    used = mask_of(emb.values())
    leftover = pool & ~used
    assert leftover.bit_count() == 3 * ell
    for attempt in range(retry_budget):
        cycle = hamilton_cycle(rows, leftover)
        # triples x_i w_i y_i along the cycle; retry rotates the frame
        cyc = cycle[attempt % 3 :] + cycle[: attempt % 3]
        xs = [cyc[3 * i] for i in range(ell)]
        ws = [cyc[3 * i + 1] for i in range(ell)]
        ys = [cyc[3 * i + 2] for i in range(ell)]
        adj = []
        for i in range(ell):
            u_img = emb[paths[i][0]]
            v_img = emb[paths[i][-1]]
            adj.append(
                [
                    j
                    for j in range(ell)
                    if (rows[u_img] >> xs[j]) & 1 and (rows[v_img] >> ys[j]) & 1
                ]
            )
        m = max_matching(adj, ell)
        if len(m) == ell:
            for i, j in m.items():
                p = paths[i]
                emb[p[1]] = xs[j]
                emb[p[2]] = ws[j]
                emb[p[3]] = ys[j]
            return emb
    raise RetryBudgetExceeded("bare-path endpoint matching", retry_budget)


# -- bare-path embedding into an almost complete bipartite host ---------------


def embed_bare_paths_bipartite(
    t: Tree,
    rows: Sequence[int],
    U1: int,
    U2: int,
    side_of: Sequence[int],
    paths: Sequence[Sequence[int]],
    R: dict[int, int] | None,
    W: int,
    mu: float,
    beta: float,
    vertices: Iterable[int] | None = None,
) -> dict[int, int]:
    """Forest embedding into an almost complete bipartite host where the
    low-degree side-2 vertices W are covered by bare-path centers.

    side_of[v] in {1, 2} names the host side for each tree vertex; paths
    are vertex-disjoint bare 4-paths of the forest with side-2 endpoints.
    R is a pre-embedded subforest (may sit off-pattern, e.g. a red patch;
    its images are avoided and skipped by the degree audits), and W a
    mask of side-2 vertices whose degree into U1 may be as low as beta*n.
    """
    n1, n2 = U1.bit_count(), U2.bit_count()
    rmask = mask_of(R.values()) if R else 0
    for u in iter_bits(U1 & ~rmask):
        if (rows[u] & U2).bit_count() < n2 - mu * t.n:
            raise HypothesisError(
                f"U1 vertex {u} misses more than mu*n of U2", violated="d(u,U2) >= |U2|-mu*n"
            )
    bad = 0
    for u in iter_bits(U2):
        d1 = (rows[u] & U1).bit_count()
        if d1 < beta * t.n:
            raise HypothesisError(
                f"U2 vertex {u} has degree {d1} < beta*n into U1", violated="d(u,U1) >= beta*n"
            )
        if d1 < n1 - mu * t.n:
            bad += 1
            if not (W >> u) & 1:
                raise HypothesisError(
                    f"low-degree U2 vertex {u} missing from W", violated="W covers low degrees"
                )
    if W.bit_count() > mu * t.n:
        raise HypothesisError(f"|W|={W.bit_count()} exceeds mu*n", violated="|W| <= mu*n")
    ell = len(paths)
    r = W.bit_count()
    if ell < r:
        raise HypothesisError(f"{ell} paths cannot cover |W|={r} vertices")
    for p in paths:
        if side_of[p[0]] != 2 or side_of[p[-1]] != 2:
            raise HypothesisError("bare path endpoints must sit on side 2")

    emb = dict(R) if R else {}
    used = mask_of(emb.values())
    # reserve x_i, y_i in U1 for each W vertex w_i
    wlist = sorted(bits_of(W))
    xy: list[tuple[int, int, int]] = []
    for w in wlist:
        cands = rows[w] & U1 & ~used
        if cands.bit_count() < 2:
            raise HypothesisError(f"W vertex {w} lacks two free U1 neighbours")
        x = (cands & -cands).bit_length() - 1
        cands &= cands - 1
        y = (cands & -cands).bit_length() - 1
        used |= (1 << x) | (1 << y) | (1 << w)
        xy.append((x, w, y))
    reserved = used & ~mask_of(emb.values())

    interior = {v for p in paths for v in p[1:-1]}
    vs = set(vertices) if vertices is not None else set(range(t.n))
    keep = vs - interior
    pools = {1: U1 & ~reserved, 2: U2 & ~reserved & ~W}
    emb = greedy_embed_bipartite(t, rows, side_of, pools, partial=emb, vertices=keep)
    used = mask_of(emb.values()) | reserved

    # remaining centers from unused side-2 vertices, two side-1 legs each
    free2 = U2 & ~used & ~W
    centers = []
    for _ in range(ell - r):
        if not free2:
            raise HypothesisError("ran out of side-2 vertices for path centers")
        w = (free2 & -free2).bit_length() - 1
        free2 &= ~(1 << w)
        centers.append(w)
    if centers:
        pool1 = bits_of(U1 & ~used)
        index = {g: i for i, g in enumerate(pool1)}
        adj = [[index[g] for g in iter_bits(rows[w] & U1 & ~used)] for w in centers]
        stars, viol = star_packing(adj, len(pool1), [2] * len(centers))
        if stars is None:
            raise HypothesisError(f"Hall failure reserving path legs: violator {viol}")
        for i, w in enumerate(centers):
            legs = sorted(pool1[j] for j in stars[i])
            xy.append((legs[0], w, legs[1]))
            used |= (1 << legs[0]) | (1 << legs[1]) | (1 << w)

    adj = []
    for i in range(ell):
        u_img = emb[paths[i][0]]
        v_img = emb[paths[i][-1]]
        adj.append(
            [
                j
                for j in range(ell)
                if (rows[u_img] >> xy[j][0]) & 1 and (rows[v_img] >> xy[j][2]) & 1
            ]
        )
    m = max_matching(adj, ell)
    if len(m) != ell:
        raise HypothesisError("endpoint graph has no perfect matching")
    for i, j in m.items():
        x, w, y = xy[j]
        p = paths[i]
        emb[p[1]] = x
        emb[p[2]] = w
        emb[p[3]] = y
    return emb
