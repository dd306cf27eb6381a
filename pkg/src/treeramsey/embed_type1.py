"""Type I extremal-case embeddings: almost complete hosts with spare leaf
room (IB1) and almost complete bipartite hosts patched through a dense
red spot (IB2).

Both lemmas are randomized in the source; every probabilistic success
claim is realized by redrawing up to the retry budget and auditing the
claimed event exactly.  Hypothesis gates check measured quantities and
refuse with diagnostics.
"""

from __future__ import annotations

import math
from typing import Sequence

from treeramsey import rand
from treeramsey.constants import DeskConstants
from treeramsey.decomp import bare_paths, v2_rich_subtree, weighted_split
from treeramsey.embed_core import (
    embed_bare_paths_bipartite,
    embed_bare_paths_dense,
    greedy_embed,
    greedy_embed_bipartite,
    pick_random_bit,
)
from treeramsey.errors import HypothesisError, RetryBudgetExceeded
from treeramsey.matching import star_packing
from treeramsey.rbgraph import bits_of, iter_bits, mask_of
from treeramsey.trees import Tree, bipartition


def validate_map_rows(rows: Sequence[int], t: Tree, emb: dict[int, int]) -> None:
    """Injectivity plus every tree edge present in the host rows."""
    assert len(emb) == t.n and len(set(emb.values())) == t.n
    for u, w in t.edges():
        assert (rows[emb[u]] >> emb[w]) & 1, f"edge ({u},{w}) missing in host"


def count_non_edges(rows: Sequence[int], mask: int) -> int:
    m = mask.bit_count()
    present = sum((rows[v] & mask).bit_count() for v in iter_bits(mask)) // 2
    return m * (m - 1) // 2 - present


def count_edges(rows: Sequence[int], mask: int) -> int:
    return sum((rows[v] & mask).bit_count() for v in iter_bits(mask)) // 2


def _bfs_order(t: Tree, root: int, vertices: set[int]) -> list[tuple[int, int]]:
    from collections import deque

    seen = {root}
    out = [(root, -1)]
    q = deque([root])
    while q:
        u = q.popleft()
        for w in t.adj[u]:
            if w in vertices and w not in seen:
                seen.add(w)
                out.append((w, u))
                q.append(w)
    return out


# -- Case IB1: almost complete host with spare leaf room ---------------------


def embed_leaves_IB1(
    t: Tree,
    rows: Sequence[int],
    U1: int,
    U2: int,
    k: int,
    D: int,
    X: int,
    dc: DeskConstants,
    mu: float,
    beta: float,
    anchor: tuple[int, int] | None = None,
    rng_label: object = "ib1",
) -> tuple[dict[int, int], dict]:
    """Embed T into G[U1 u U2] with T - L placed in U1.

    |U1| = n + k; D leaves may spill into U2 through high-cross-degree
    helpers; X vertices (low degree inside U1, rich toward U2) are half
    consumed by designated tree vertices.  The randomized placement is
    redrawn until at most floor((k+D+1)/2) vertices of U1 \\ X are bad in
    the dyadic sense, then the leaves finish by a star packing.
    Anchoring is supported exactly when D = 0 and X is empty.
    """
    n = t.n
    n1 = U1.bit_count()
    info: dict = {"route": "leaves"}
    if n1 != n + k:
        raise HypothesisError(f"|U1|={n1} but n+k={n + k}", violated="|U1| = n+k")
    if k + D < 0:
        raise HypothesisError(f"k+D = {k + D} < 0", violated="k+D >= 0")
    if anchor is not None and (D != 0 or X):
        raise HypothesisError("anchored form requires D=0 and X empty")
    if t.max_degree() > dc.c * n:
        raise HypothesisError(f"Delta(T) > c*n", violated="Delta <= c*n")
    for v in iter_bits(U1):
        if (rows[v] & U1).bit_count() < n1 - 1 - beta * n:
            raise HypothesisError(
                f"U1 vertex {v} misses more than beta*n inside U1",
                violated="delta(G[U1]) >= |U1|-beta*n",
            )
    for v in iter_bits(X):
        if (rows[v] & U2).bit_count() < n / 10:
            raise HypothesisError(f"X vertex {v} has fewer than n/10 neighbours in U2")
    ne = count_non_edges(rows, U1 & ~X)
    cap = dc.edge_constant * (k + D + 1) * n
    if ne > cap:
        raise HypothesisError(
            f"non-edges inside U1\\X: {ne} > edge_constant*(k+D+1)*n = {cap:.0f}",
            violated="e(G^c[U1\\X]) <= C(k+D+1)n",
        )
    leaves = t.leaves()
    if D == 0 and len(leaves) < n / 20:
        # path-like tree: bare-path route inside U1 on exactly n vertices
        info["route"] = "bare_paths"
        keep = sorted(iter_bits(U1), key=lambda v: (-(rows[v] & U1).bit_count(), v))[:n]
        pool = mask_of(keep)
        if anchor is not None and not (pool >> anchor[1]) & 1:
            pool = (pool & ~(1 << keep[-1])) | (1 << anchor[1])
        mind = min((rows[v] & pool).bit_count() for v in iter_bits(pool))
        mu_dense = (n - mind) / n
        a = anchor if anchor is not None else (_off_path_vertex(t), (pool & -pool).bit_length() - 1)
        emb = embed_bare_paths_dense(t, rows, pool, a, mu_dense, dc.retry_budget)
        validate_map_rows(rows, t, emb)
        return emb, info

    # leaf route
    tv = anchor[0] if anchor is not None else 0
    near_t = set(t.adj[tv]) | {tv}
    b = bipartition(t)
    cls1 = [u for u in leaves if u in b.V1 and u not in near_t]
    cls2 = [u for u in leaves if u in b.V2 and u not in near_t]
    chosen = cls1 if len(cls1) >= len(cls2) else cls2
    want = math.ceil(n / 49)
    if len(chosen) < want:
        raise HypothesisError(
            f"largest leaf class off the anchor has {len(chosen)} < n/49 = {want}",
            violated="n/49 leaves in one class",
        )
    Lp = sorted(chosen)[:want]
    Lp_set = set(Lp)
    parent_of = {u: t.adj[u][0] for u in Lp}
    P: dict[int, list[int]] = {}
    for u in Lp:
        P.setdefault(parent_of[u], []).append(u)
    parents = sorted(P)

    P1: list[int] = []
    got = 0
    if D > 0:
        for p in parents:
            if got >= D:
                break
            P1.append(p)
            got += len(P[p])
        if got < D:
            raise HypothesisError(f"cannot gather D={D} leaf demand for P1")
    xsz = X.bit_count()
    half_up = (xsz + 1) // 2
    P2p: list[int] = []
    got2 = 0
    if xsz:
        for p in parents:
            if p in P1:
                continue
            if got2 >= half_up:
                break
            P2p.append(p)
            got2 += len(P[p])
        if got2 < half_up:
            raise HypothesisError(f"cannot gather ceil(|X|/2) leaf demand for P2")
    P3 = [p for p in parents if p not in P1 and p not in P2p]
    L3p: list[int] = []
    need_extra = half_up - len(P2p)
    if need_extra > 0:
        pool3 = sorted(u for p in P3 for u in P[p])
        if len(pool3) < need_extra:
            raise HypothesisError("not enough P3 leaves to pad P2")
        L3p = pool3[:need_extra]
    P2 = set(P2p) | set(L3p)
    L = [u for u in Lp if u not in set(L3p)]
    Lset = set(L)
    if 3 * len({u for p in P3 for u in P[p] if u in Lset}) < len(Lp):
        raise HypothesisError("P3 keeps too little of the leaf reservoir")

    qualifying = [v for v in iter_bits(U1 & ~X) if (rows[v] & U2).bit_count() >= D]
    if len(qualifying) < max(2 * D, 10 * mu * n if D > 0 else 0):
        raise HypothesisError(
            f"{len(qualifying)} vertices have >= D neighbours in U2, "
            f"need {max(2 * D, math.ceil(10 * mu * n))}",
            violated="10*mu*n vertices with D cross neighbours",
        )
    Y = mask_of(qualifying[: 2 * D])
    U1m = 0
    for v in iter_bits(U1):
        if D and (rows[v] & Y).bit_count() < D:
            continue
        if xsz and 2 * (rows[v] & X).bit_count() < xsz:
            continue
        U1m |= 1 << v

    if anchor is not None:
        s1 = anchor[1]
        if not ((U1m & ~(X | Y)) >> s1) & 1:
            raise HypothesisError(f"anchor host {s1} not in U1- \\ (X u Y)")
    else:
        free = U1m & ~(X | Y)
        if not free:
            raise HypothesisError("U1- \\ (X u Y) is empty")
        s1 = (free & -free).bit_length() - 1

    body = set(range(n)) - Lset
    order = _bfs_order(t, tv, body)
    d_of = {p: sum(1 for u in P[p] if u in Lset) for p in parents}
    jstar = max(1, int(dc.c * n).bit_length())
    budget = dc.retry_budget
    last_fail = "no attempt"
    for attempt in range(budget):
        rng = rand.stream(dc.seed, rng_label, attempt)
        emb = {tv: s1}
        used = 1 << s1
        ok = True
        for v, par in order[1:]:
            sj = emb[par]
            if v in P1:
                cands = rows[sj] & Y & ~used
            elif v in P2:
                cands = rows[sj] & X & ~used
            else:
                cands = rows[sj] & U1m & ~(X | Y) & ~used
            if not cands:
                ok = False
                last_fail = f"no candidates at tree vertex {v}"
                break
            g = pick_random_bit(cands, rng)
            emb[v] = g
            used |= 1 << g
        if not ok:
            continue
        # dyadic badness audit
        masks = [0] * (jstar + 1)
        sizes = [0] * (jstar + 1)
        for p in P3:
            d = d_of[p]
            if d < 1:
                continue
            j = min(jstar, d.bit_length())
            masks[j] |= 1 << emb[p]
            sizes[j] += 1
        bad = 0
        for v in iter_bits(U1 & ~X):
            for j in range(1, jstar + 1):
                if sizes[j] == 0:
                    continue
                hit = (rows[v] & masks[j]).bit_count()
                if hit <= (2 / 3) * sizes[j] - 20 * (jstar - j + 1):
                    bad += 1
                    break
        if bad > (k + D + 1) // 2:
            last_fail = f"{bad} bad vertices exceed floor((k+D+1)/2)"
            continue
        info["bad_vertices"] = bad
        # star packing of the leaves into unused U1 plus U2
        centers = [p for p in parents if d_of.get(p, 0) > 0]
        pool = sorted(iter_bits((U1 & ~used) | U2))
        index = {g: i for i, g in enumerate(pool)}
        poolmask = mask_of(pool)
        adj = [
            [index[g] for g in iter_bits(rows[emb[p]] & poolmask)] for p in centers
        ]
        stars, viol = star_packing(adj, len(pool), [d_of[p] for p in centers])
        if stars is None:
            last_fail = f"Hall violation at parents {[centers[i] for i in viol]}"
            continue
        for i, p in enumerate(centers):
            targets = sorted(pool[j] for j in stars[i])
            for u, g in zip(sorted(u for u in P[p] if u in Lset), targets):
                emb[u] = g
        validate_map_rows(rows, t, emb)
        info["attempts"] = attempt + 1
        return emb, info
    raise RetryBudgetExceeded(f"IB1 ({last_fail})", budget)


def _off_path_vertex(t: Tree) -> int:
    """A vertex lying on no bare 4-path (falls back to vertex 0)."""
    onpath = {v for p in bare_paths(t, 4) for v in p}
    for v in range(t.n):
        if v not in onpath:
            return v
    return 0


# -- Case IB2: almost complete bipartite host with a dense patch -------------


def _peel_core(rows: Sequence[int], mask: int, mindeg: int) -> int:
    cur = mask
    changed = True
    while changed and cur:
        changed = False
        for v in list(iter_bits(cur)):
            if (rows[v] & cur).bit_count() < mindeg:
                cur &= ~(1 << v)
                changed = True
    return cur


def _soft_greedy(
    t: Tree,
    rows: Sequence[int],
    pool: int,
    partial: dict[int, int],
    vertices: set[int],
    special: dict[int, int] | None = None,
) -> dict[int, int]:
    """Greedy without the global degree pre-audit; fails where it fails."""
    emb = dict(partial)
    used = mask_of(emb.values())
    roots = [v for v in emb if v in vertices]
    special = special or {}
    from treeramsey.embed_core import _forest_orders

    for v, par in _forest_orders(t, vertices, roots):
        if v in emb:
            continue
        if v in special:
            g = special[v]
            if (used >> g) & 1 or (par >= 0 and par in emb and not (rows[emb[par]] >> g) & 1):
                raise HypothesisError(f"pinned vertex {v} cannot take host {g}")
        else:
            cands = (rows[emb[par]] if par >= 0 else ~0) & pool & ~used
            if not cands:
                raise HypothesisError(f"greedy stalled at tree vertex {v}")
            g = (cands & -cands).bit_length() - 1
        emb[v] = g
        used |= 1 << g
    return emb


def embed_red_IB2(
    t: Tree,
    rows: Sequence[int],
    U1: int,
    U2: int,
    k: int,
    D: int,
    X: int,
    dc: DeskConstants,
    mu: float,
    beta: float,
    rng_label: object = "ib2",
) -> tuple[dict[int, int], dict]:
    """Embed T into the almost complete bipartite host G[U1, U2] by first
    sinking enough V2 vertices into a dense patch of G[U1].

    |U2| = t2 - k - 1, so the host is short of V2 room by k + 1; a subtree
    holding at least 10(k+D+1) vertices of V2 is embedded into a peeled
    dense core of G[U1 \\ (X u Z)], and the rest follows one of the three
    finishing cases (bare paths / free leaves / leaves at the subtree).
    """
    n = t.n
    b = bipartition(t)
    t1, t2 = b.t1, b.t2
    info: dict = {}
    if not (t2 <= t1 <= 2 * t2 + 1):
        raise HypothesisError(f"needs t2 <= t1 <= 2t2+1, got ({t1},{t2})")
    if t.max_degree() > dc.c * n:
        raise HypothesisError("Delta(T) > c*n", violated="Delta <= c*n")
    n1 = U1.bit_count()
    if not (1.1 * t1 <= n1 <= 2 * n):
        raise HypothesisError(
            f"|U1|={n1} outside [1.1*t1, 2n] = [{1.1 * t1:.0f}, {2 * n}]",
            violated="1.1*t1 <= |U1| <= 2n",
        )
    if U2.bit_count() != t2 - k - 1:
        raise HypothesisError(
            f"|U2|={U2.bit_count()} but t2-k-1={t2 - k - 1}", violated="|U2| = t2-k-1"
        )
    if k + D < -1:
        # shed the surplus: keep the best-connected t2+D vertices of U2
        keep = sorted(
            iter_bits(U2), key=lambda v: (-(rows[v] & U1).bit_count(), v)
        )[: t2 + D]
        U2 = mask_of(keep)
        k = -D - 1
    n2 = U2.bit_count()
    for u in iter_bits(U2):
        if (rows[u] & U1).bit_count() < beta * n:
            raise HypothesisError(f"U2 vertex {u} has under beta*n neighbours in U1")
    Y1 = mask_of(
        v for v in iter_bits(U1) if (rows[v] & U2).bit_count() < n2 - D
    )
    if Y1.bit_count() > 10 * mu * n:
        raise HypothesisError(
            f"|Y1|={Y1.bit_count()} exceeds 10*mu*n", violated="d(u,U2)>=|U2|-D for most"
        )
    Y2 = mask_of(
        v for v in iter_bits(U2) if (rows[v] & U1).bit_count() < n1 - mu * n
    )
    if Y2.bit_count() > mu * n:
        raise HypothesisError(f"|Y2|={Y2.bit_count()} exceeds mu*n")
    U1m = U1 & ~Y1
    U2m = U2 & ~Y2
    need = k + D + 1
    cap = dc.edge_constant * max(need, 0) * n
    if count_edges(rows, U1 & ~X) < cap:
        raise HypothesisError(
            f"e(G[U1\\X]) below edge_constant*(k+D+1)*n = {cap:.0f}",
            violated="e(G[U1\\X]) >= C(k+D+1)n",
        )

    budget = dc.retry_budget
    last = "no attempt"
    for attempt in range(budget):
        rng = rand.stream(dc.seed, rng_label, attempt)
        zdraw = rng.random(n1)
        Z = 0
        for i, v in enumerate(iter_bits(U1m)):
            if zdraw[i] < beta:
                Z |= 1 << v
        if Z.bit_count() > 3 * beta * n:
            last = "Z too big"
            continue
        zneed = max(1, math.ceil(beta * beta * n / 2))
        if any((rows[u] & Z).bit_count() < zneed for u in iter_bits(U2)):
            last = "some U2 vertex sees too little of Z"
            continue
        if need > 0 and count_edges(rows, U1 & ~(X | Z)) < cap / 2:
            last = "Z ate the dense patch"
            continue
        try:
            emb, case = _ib2_attempt(
                t, rows, U1, U2, U1m, U2m, X, Z, k, D, need, dc, mu, beta, b, rng
            )
        except HypothesisError as e:
            last = str(e)
            continue
        validate_map_rows(rows, t, emb)
        info["case"] = case
        info["attempts"] = attempt + 1
        return emb, info
    raise RetryBudgetExceeded(f"IB2 ({last})", budget)


def _contract(t: Tree, body: set[int]) -> tuple[Tree, dict[int, int], int]:
    """Contract the subtree `body` of T to a single vertex r = 0.

    Returns (F, old->new map for vertices outside body, new id of r)."""
    outside = [v for v in range(t.n) if v not in body]
    newid = {v: i + 1 for i, v in enumerate(outside)}
    edges = []
    seen_r = set()
    for u, w in t.edges():
        iu, iw = u in body, w in body
        if iu and iw:
            continue
        if iu:
            edges.append((0, newid[w]))
        elif iw:
            edges.append((0, newid[u]))
        else:
            edges.append((newid[u], newid[w]))
    return Tree(len(outside) + 1, edges), newid, 0


def _ib2_attempt(t, rows, U1, U2, U1m, U2m, X, Z, k, D, need, dc, mu, beta, b, rng):
    n = t.n
    t1, t2 = b.t1, b.t2
    n2 = U2.bit_count()
    emb: dict[int, int] = {}
    Tp: set[int] = set()
    t_bnd = None
    v_host = None
    Hp = 0
    if need > 0:
        core_min = max(1, math.ceil(dc.edge_constant * need / 4))
        Hp = _peel_core(rows, U1 & ~(X | Z), core_min)
        if not Hp:
            raise HypothesisError("dense core peeled to nothing")
        v_host = max(
            iter_bits(U2m), key=lambda v: ((rows[v] & Hp).bit_count(), -v)
        )
        if (rows[v_host] & Hp).bit_count() < 1:
            raise HypothesisError("no U2 vertex sees the dense core")
        Tp, t_bnd = v2_rich_subtree(t, 10 * need)
    body = Tp if Tp else set()

    # leaves of T in V1 outside the subtree
    L1 = [u for u in range(n) if t.degree(u) == 1 and u in b.V1 and u not in body]
    L1set = set(L1)
    if body:
        F, newid, r = _contract(t, body)
    else:
        F, newid, r = t, {v: v for v in range(n)}, -1
    backid = {i: v for v, i in newid.items()}
    FL_vs = [i for v, i in newid.items() if v not in L1set]
    if r >= 0:
        FL_vs.append(r)
    FL_vset = set(FL_vs)

    def fl_degree(i):
        return sum(1 for j in F.adj[i] if j in FL_vset)

    n_paths = []
    for p in bare_paths_within(F, FL_vset, 5):
        if r in p:
            continue
        tp = [backid[i] for i in p]
        # shift to the length-4 subpath with V2 endpoints
        if tp[0] in b.V2:
            n_paths.append(tuple(tp[:5]))
        else:
            n_paths.append(tuple(tp[1:6]))
    fl_leaves = [i for i in FL_vs if i != r and fl_degree(i) == 1]
    adj_Tp = {u for x in body for u in t.adj[x] if u not in body}
    l2_out = sorted(backid[i] for i in fl_leaves if backid[i] not in adj_Tp)
    l2_in = sorted(backid[i] for i in fl_leaves if backid[i] in adj_Tp)

    if len(n_paths) >= math.ceil(n / 200):
        case = "I"
    elif len(l2_out) >= math.ceil(n / 200):
        case = "II"
    elif len(l2_in) >= math.ceil(n / 200):
        case = "III"
    else:
        raise HypothesisError("no finishing case available (few paths and few leaves)")

    side_of = [1 if v in b.V1 else 2 for v in range(n)]
    l1_nbrs = {u: sum(1 for w in t.adj[u] if w in L1set) for u in range(n)}

    if case == "I":
        if body:
            emb = _soft_greedy(
                t, rows, Hp | (1 << v_host), {}, body,
                special={t_bnd: v_host} if t_bnd is not None else None,
            )
        centers_sorted = sorted(n_paths, key=lambda p: (l1_nbrs[p[2]], p[2]))
        w_count = (U2 & ~U2m).bit_count()
        ell = max(w_count, min(len(centers_sorted), math.ceil(10 * mu * n)))
        if len(centers_sorted) < ell:
            raise HypothesisError("not enough V2-ended bare paths for the cover")
        chosen = centers_sorted[:ell]
        zload = sum(l1_nbrs[p[2]] for p in chosen)
        if any((rows[u] & Z).bit_count() < zload for u in iter_bits(U2)):
            raise HypothesisError("Z reservoir smaller than the center leaf load")
        u1side = (U1m & ~Z) | (mask_of(emb.values()) & U1)
        emb = embed_bare_paths_bipartite(
            t,
            rows,
            u1side,
            U2,
            side_of,
            chosen,
            R=emb,
            W=U2 & ~U2m,
            mu=(mu * n + D) / n,
            beta=beta,
            vertices=set(range(n)) - L1set,
        )
        _finish_L1(t, rows, emb, L1, Z, U1m, set(p[2] for p in chosen))
        return emb, case

    if case == "II":
        quota = max(0, need - _v2_sunk(body, b, t_bnd)) + math.ceil(mu * n)
        cands2 = sorted(l2_out, key=lambda u: (l1_nbrs[u], u))
        ell2 = min(len(cands2), max(quota, min(len(cands2), math.ceil(10 * mu * n))))
        if ell2 < quota:
            raise HypothesisError("not enough removable V2 leaves for the deficit")
        L2 = cands2[:ell2]
        zload = sum(l1_nbrs[u] for u in L2)
        if any((rows[u] & Z).bit_count() < zload for u in iter_bits(U2)):
            raise HypothesisError("Z reservoir smaller than the L2 leaf load")
        if body:
            emb = _soft_greedy(
                t, rows, Hp | (1 << v_host), {}, body,
                special={t_bnd: v_host} if t_bnd is not None else None,
            )
        rest = set(range(n)) - L1set - set(L2)
        emb = greedy_embed_bipartite(
            t, rows, side_of, {1: U1m & ~Z, 2: U2m}, partial=emb, vertices=rest
        )
        _finish_L2(t, rows, emb, L2, U2)
        _finish_L1(t, rows, emb, L1, Z, U1m, set(L2))
        return emb, case

    # case III: leaves cluster at the subtree boundary
    sub = _induced_tree(t, body)
    q = [sub.fwd[x] for x in body if x in b.V2]
    ws = weighted_split(sub.tree, q)
    side_a = {sub.back[i] for i in ws.T1}
    side_b = {sub.back[i] for i in ws.T2}
    tprime = sub.back[ws.v]
    na = sum(1 for u in l2_in if any(w in side_a for w in t.adj[u]))
    nb = sum(1 for u in l2_in if any(w in side_b for w in t.adj[u]))
    T1v, T2v = (side_b, side_a) if nb >= na else (side_a, side_b)
    att = [
        u
        for u in l2_in
        if any(w in T2v for w in t.adj[u]) and tprime not in t.adj[u]
    ]
    quota = max(0, need - 0) + math.ceil(mu * n)
    att.sort(key=lambda u: (l1_nbrs[u], u))
    ell2 = min(len(att), max(quota, min(len(att), math.ceil(10 * mu * n))))
    if ell2 < quota:
        raise HypothesisError("not enough boundary leaves for the deficit")
    L2 = att[:ell2]
    zload = sum(l1_nbrs[u] for u in L2)
    if any((rows[u] & Z).bit_count() < zload for u in iter_bits(U2)):
        raise HypothesisError("Z reservoir smaller than the L2 leaf load")
    emb = {}
    if t_bnd is not None and t_bnd not in T1v:
        emb[t_bnd] = v_host
    if tprime in b.V2:
        # the split vertex lands in U2 on a helper with good spare core degree
        emb_t1 = _embed_T1_with_connector(t, rows, T1v, Hp, U2m, tprime, v_host, t_bnd)
    else:
        special = {t_bnd: v_host} if (t_bnd is not None and t_bnd in T1v) else None
        emb_t1 = _soft_greedy(
            t, rows, Hp | ((1 << v_host) if v_host is not None else 0), emb, T1v,
            special=special,
        )
    emb.update(emb_t1)
    sunk = sum(1 for x in T1v if x in b.V2 and ((U1 >> emb[x]) & 1))
    if need > 0 and sunk < need:
        raise HypothesisError(f"only {sunk} V2 vertices sank into U1, need {need}")
    rest = set(range(n)) - L1set - set(L2)
    emb = greedy_embed_bipartite(
        t, rows, side_of, {1: U1m & ~Z, 2: U2m}, partial=emb, vertices=rest
    )
    _finish_L2(t, rows, emb, L2, U2)
    _finish_L1(t, rows, emb, L1, Z, U1m, set(L2))
    return emb, case


def _v2_sunk(body: set[int], b, t_bnd) -> int:
    return sum(1 for x in body if x in b.V2 and x != t_bnd)


def _finish_L2(t: Tree, rows, emb: dict[int, int], L2, U2: int) -> None:
    used = mask_of(emb.values())
    for u in sorted(L2):
        p = t.adj[u][0]
        cands = rows[emb[p]] & U2 & ~used
        if not cands:
            raise HypothesisError(f"L2 leaf {u} has no free U2 slot")
        g = (cands & -cands).bit_length() - 1
        emb[u] = g
        used |= 1 << g


def _finish_L1(t: Tree, rows, emb: dict[int, int], L1, Z: int, U1m: int, l2set: set[int]) -> None:
    used = mask_of(emb.values())
    for u in sorted(L1):
        p = t.adj[u][0]
        pool = Z if p in l2set else (U1m & ~Z)
        cands = rows[emb[p]] & pool & ~used
        if not cands:
            raise HypothesisError(f"L1 leaf {u} has no free slot (pool {'Z' if p in l2set else 'U1-'})")
        g = (cands & -cands).bit_length() - 1
        emb[u] = g
        used |= 1 << g


def _embed_T1_with_connector(t, rows, T1v, Hp, U2m, tprime, v_host, t_bnd):
    """Greedy T1 into the core with t' diverted to a helper in U2."""
    from treeramsey.embed_core import _forest_orders

    emb: dict[int, int] = {}
    used = 0
    if t_bnd is not None and t_bnd in T1v:
        emb[t_bnd] = v_host
        used |= 1 << v_host
    pool = Hp
    roots = list(emb.keys())
    for v, par in _forest_orders(t, T1v, roots):
        if v in emb:
            continue
        if v == tprime:
            base = rows[emb[par]] if par >= 0 and par in emb else ~0
            cands = base & U2m & ~used
            if not cands:
                raise HypothesisError("no U2 helper available for the split vertex")
            g = max(iter_bits(cands), key=lambda x: ((rows[x] & pool & ~used).bit_count(), -x))
        else:
            base = rows[emb[par]] if par >= 0 and par in emb else ~0
            cands = base & pool & ~used
            if not cands:
                raise HypothesisError(f"T1 greedy stalled at {v}")
            g = (cands & -cands).bit_length() - 1
        emb[v] = g
        used |= 1 << g
    return emb


def _induced_tree(t: Tree, vs: set[int]):
    from treeramsey.decomp import _induced_subtree

    return _induced_subtree(t, sorted(vs))


def bare_paths_within(F: Tree, vset: set[int], k: int) -> list[tuple[int, ...]]:
    """Vertex-disjoint bare paths of length k of the induced forest F[vset]."""
    from treeramsey.decomp import _induced_subtree

    comps: list[list[int]] = []
    seen: set[int] = set()
    for v in sorted(vset):
        if v in seen:
            continue
        comp = [v]
        seen.add(v)
        stack = [v]
        while stack:
            u = stack.pop()
            for w in F.adj[u]:
                if w in vset and w not in seen:
                    seen.add(w)
                    comp.append(w)
                    stack.append(w)
        comps.append(comp)
    out: list[tuple[int, ...]] = []
    for comp in comps:
        if len(comp) < k + 1:
            continue
        sub = _induced_subtree(F, comp)
        for p in bare_paths(sub.tree, k):
            out.append(tuple(sub.back[i] for i in p))
    return out
