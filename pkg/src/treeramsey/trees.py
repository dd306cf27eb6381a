"""Labeled free trees: representation, enumeration, canonical codes.

Vertices are dense 0-based integers everywhere.  Trees are immutable
after construction and safe to share between workers.

Enumeration walks canonical level sequences of rooted trees (the
Beyer-Hedetniemi successor) and keeps exactly the sequences that are the
centroid-rooted canonical form of their underlying free tree, so each
isomorphism class is emitted once, in a fixed order, with linear memory.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterator, Sequence

from treeramsey.errors import HypothesisError


class Tree:
    """A labeled free tree on vertices 0..n-1 with optional root."""

    __slots__ = ("n", "adj", "root")

    def __init__(self, n: int, edges: Sequence[tuple[int, int]], root: int | None = None):
        if n < 1:
            raise ValueError("tree needs at least one vertex")
        if len(edges) != n - 1:
            raise ValueError(f"tree on {n} vertices needs {n - 1} edges, got {len(edges)}")
        adj: list[list[int]] = [[] for _ in range(n)]
        seen = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
            adj[u].append(v)
            adj[v].append(u)
        for row in adj:
            row.sort()
        self.adj: tuple[tuple[int, ...], ...] = tuple(tuple(row) for row in adj)
        self.n = n
        self.root = root
        if n > 1 and not self._connected():
            raise ValueError("edges do not form a connected tree")
        if root is not None and not (0 <= root < n):
            raise ValueError("root out of range")

    def _connected(self) -> bool:
        seen = [False] * self.n
        seen[0] = True
        stack = [0]
        count = 1
        while stack:
            u = stack.pop()
            for v in self.adj[u]:
                if not seen[v]:
                    seen[v] = True
                    count += 1
                    stack.append(v)
        return count == self.n

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def max_degree(self) -> int:
        return max(len(row) for row in self.adj)

    def leaves(self) -> list[int]:
        if self.n == 1:
            return [0]
        return [v for v in range(self.n) if len(self.adj[v]) == 1]

    def edges(self) -> list[tuple[int, int]]:
        return [(u, v) for u in range(self.n) for v in self.adj[u] if u < v]

    def with_root(self, root: int) -> "Tree":
        t = object.__new__(Tree)
        t.n = self.n
        t.adj = self.adj
        t.root = root
        return t

    def parents_from(self, root: int) -> list[int]:
        """Parent array of the tree rooted at `root` (parent[root] = -1)."""
        par = [-1] * self.n
        seen = [False] * self.n
        seen[root] = True
        order = [root]
        stack = [root]
        while stack:
            u = stack.pop()
            for v in self.adj[u]:
                if not seen[v]:
                    seen[v] = True
                    par[v] = u
                    order.append(v)
                    stack.append(v)
        return par

    def bfs_order(self, root: int) -> list[int]:
        from collections import deque

        seen = [False] * self.n
        seen[root] = True
        order = []
        q = deque([root])
        while q:
            u = q.popleft()
            order.append(u)
            for v in self.adj[u]:
                if not seen[v]:
                    seen[v] = True
                    q.append(v)
        return order

    def __eq__(self, other) -> bool:
        return isinstance(other, Tree) and self.n == other.n and self.adj == other.adj

    def __hash__(self) -> int:
        return hash((self.n, self.adj))

    def __repr__(self) -> str:
        return f"Tree(n={self.n}, edges={self.edges()})"

    # -- serialization ------------------------------------------------

    def to_json(self) -> str:
        return json.dumps({"n": self.n, "edges": sorted(self.edges())})

    @classmethod
    def from_json(cls, text: str) -> "Tree":
        d = json.loads(text)
        return cls(d["n"], [tuple(e) for e in d["edges"]])

    def to_parent_array(self) -> list[int]:
        """Compact form [p_1, ..., p_{n-1}] for the canonical rooted form.

        The tree is rooted at its centroid-canonical root and vertices are
        renumbered in the canonical preorder, so isomorphic trees yield
        identical arrays.
        """
        seq = _free_canonical_levels(self)
        return _levels_to_parents(seq)

    @classmethod
    def from_parent_array(cls, parents: Sequence[int]) -> "Tree":
        n = len(parents) + 1
        return cls(n, [(parents[i - 1], i) for i in range(1, n)])

    def to_dot(self, name: str = "T") -> str:
        lines = [f"graph {name} {{"]
        for v in range(self.n):
            lines.append(f"  {v};")
        for u, v in sorted(self.edges()):
            lines.append(f"  {u} -- {v};")
        lines.append("}")
        return "\n".join(lines)


@dataclass(frozen=True)
class Bipartition:
    """The unique 2-coloring of a tree, larger class first (t1 >= t2)."""

    V1: frozenset[int]
    V2: frozenset[int]

    @property
    def t1(self) -> int:
        return len(self.V1)

    @property
    def t2(self) -> int:
        return len(self.V2)

    def side(self, v: int) -> int:
        """1 if v in V1, else 2."""
        return 1 if v in self.V1 else 2


def bipartition(t: Tree) -> Bipartition:
    """2-color by BFS parity; the larger class is V1, ties broken so that
    V1 is the class containing the smallest vertex id."""
    color = [-1] * t.n
    color[0] = 0
    stack = [0]
    while stack:
        u = stack.pop()
        for v in t.adj[u]:
            if color[v] < 0:
                color[v] = 1 - color[u]
                stack.append(v)
    even = frozenset(v for v in range(t.n) if color[v] == 0)
    odd = frozenset(v for v in range(t.n) if color[v] == 1)
    if len(even) > len(odd):
        return Bipartition(even, odd)
    if len(odd) > len(even):
        return Bipartition(odd, even)
    # tie: vertex 0 has the smallest id and sits in `even`
    return Bipartition(even, odd)


# -- enumeration ----------------------------------------------------------

MAX_ENUM_N = 24


def _rooted_level_sequences(n: int) -> Iterator[list[int]]:
    """All canonical level sequences of rooted trees on n vertices.

    Beyer-Hedetniemi successor method; sequences appear in decreasing
    lexicographic order, starting from the path (1,2,...,n).
    """
    if n == 1:
        yield [1]
        return
    levels = list(range(1, n + 1))
    while True:
        yield levels
        p = -1
        for i in range(n - 1, -1, -1):
            if levels[i] > 2:
                p = i
                break
        if p < 0:
            return
        q = p - 1
        while levels[q] != levels[p] - 1:
            q -= 1
        levels = levels[:p] + [levels[i - (p - q)] for i in range(p, n)]


def _levels_to_parents(levels: Sequence[int]) -> list[int]:
    """Parent array [p_1..p_{n-1}] from a level sequence (preorder)."""
    parents = []
    last_at_level = {levels[0]: 0}
    for i in range(1, len(levels)):
        lv = levels[i]
        parents.append(last_at_level[lv - 1])
        last_at_level[lv] = i
    return parents


def _levels_to_tree(levels: Sequence[int]) -> Tree:
    parents = _levels_to_parents(levels)
    n = len(levels)
    return Tree(n, [(parents[i - 1], i) for i in range(1, n)], root=0)


def _canonical_levels_from_root(t: Tree, root: int) -> tuple[int, ...]:
    """Canonical (lexicographically greatest) level sequence rooted at root."""

    # Work bottom-up over the rooted tree; each vertex's canonical sequence
    # is 1 followed by its children's sequences (+1) sorted descending.
    par = t.parents_from(root)
    order = t.bfs_order(root)
    seq: list[tuple[int, ...] | None] = [None] * t.n
    for u in reversed(order):
        kids = sorted(
            (seq[v] for v in t.adj[u] if v != par[u]),
            reverse=True,
        )
        out = [1]
        for k in kids:
            out.extend(x + 1 for x in k)  # type: ignore[union-attr]
        seq[u] = tuple(out)
    return seq[root]  # type: ignore[return-value]


def centroids(t: Tree) -> list[int]:
    """The 1 or 2 centroid vertices (minimizing the largest component of T-v)."""
    n = t.n
    if n == 1:
        return [0]
    par = t.parents_from(0)
    order = t.bfs_order(0)
    size = [1] * n
    for u in reversed(order):
        if par[u] >= 0:
            size[par[u]] += size[u]
    best: list[int] = []
    best_val = n + 1
    for v in range(n):
        worst = n - size[v]
        for w in t.adj[v]:
            if w != par[v]:
                worst = max(worst, size[w])
        if worst < best_val:
            best_val = worst
            best = [v]
        elif worst == best_val:
            best.append(v)
    return best


def centers(t: Tree) -> list[int]:
    """The 1 or 2 center vertices (minimizing eccentricity); via leaf peeling."""
    n = t.n
    if n <= 2:
        return list(range(n))
    deg = [len(t.adj[v]) for v in range(n)]
    layer = [v for v in range(n) if deg[v] == 1]
    removed = [False] * n
    remaining = n
    while remaining > 2:
        nxt = []
        for v in layer:
            removed[v] = True
        remaining -= len(layer)
        for v in layer:
            for w in t.adj[v]:
                if not removed[w]:
                    deg[w] -= 1
                    if deg[w] == 1:
                        nxt.append(w)
        layer = nxt
    return sorted(layer)


def _free_canonical_levels(t: Tree) -> tuple[int, ...]:
    """Level sequence of the canonical rooting of the free tree (at a centroid)."""
    cs = centroids(t)
    return max(_canonical_levels_from_root(t, c) for c in cs)


def enumerate_trees(n: int) -> Iterator[Tree]:
    """One representative per isomorphism class of free trees on n vertices.

    Deterministic order, linear memory.  1 <= n <= 24.
    """
    if not (1 <= n <= MAX_ENUM_N):
        raise ValueError(f"n must be in [1, {MAX_ENUM_N}], got {n}")
    for levels in _rooted_level_sequences(n):
        t = _levels_to_tree(levels)
        if _free_canonical_levels(t) == tuple(levels):
            yield t


def canonical_code(t: Tree) -> bytes:
    """Canonical byte code; equal codes iff isomorphic.

    AHU-style parenthesis encoding of the tree rooted at its center; with
    two centers we take the lexicographically larger of the two rootings.
    """

    def ahu(root: int) -> bytes:
        par = t.parents_from(root)
        order = t.bfs_order(root)
        code: list[bytes | None] = [None] * t.n
        for u in reversed(order):
            kids = sorted((code[v] for v in t.adj[u] if v != par[u]), reverse=True)
            code[u] = b"(" + b"".join(kids) + b")"  # type: ignore[arg-type]
        return code[root]  # type: ignore[return-value]

    return max(ahu(c) for c in centers(t))


# -- leaf padding ---------------------------------------------------------


def pad_to_balanced(t: Tree, c: float) -> Tree:
    """Rebalance a lopsided tree by attaching new leaves to leaves of V1.

    Requires t1 >= 2*t2 + 2.  Attaches floor((t1-2*t2)/2) fresh leaves to
    ceil(2/c) existing degree-1 vertices of V1, none receiving more than
    c*|T'| of them, so that the padded tree T' has t1' = t1,
    t2' = floor(t1/2), t1' <= 2*t2' + 1 and
    max{t1'+2t2', 2t1'} = 2*t1 = max{t1+2t2, 2t1}.
    """
    import math

    if not (0 < c <= 1):
        raise HypothesisError(f"c must be in (0,1], got {c}", violated="0 < c <= 1")
    b = bipartition(t)
    t1, t2 = b.t1, b.t2
    if t1 < 2 * t2 + 2:
        raise HypothesisError(
            f"padding needs t1 >= 2*t2 + 2, got t1={t1}, t2={t2}",
            violated="t1 >= 2*t2 + 2",
        )
    receivers_needed = max(1, math.ceil(2.0 / c))
    v1_leaves = sorted(v for v in b.V1 if t.degree(v) == 1)
    if len(v1_leaves) < receivers_needed:
        raise HypothesisError(
            f"padding needs at least ceil(2/c)={receivers_needed} leaves in V1, "
            f"found {len(v1_leaves)}",
            violated="leaves_in_V1 >= 2/c",
        )
    m = (t1 - 2 * t2) // 2
    receivers = v1_leaves[:receivers_needed]
    new_n = t.n + m
    cap = int(c * new_n)
    if cap * len(receivers) < m:
        raise HypothesisError(
            f"cannot place {m} new leaves on {len(receivers)} receivers at "
            f"<= {cap} per receiver",
            violated="m <= ceil(2/c) * c*|T'|",
        )
    edges = t.edges()
    nxt = t.n
    for i in range(m):
        edges.append((receivers[i % len(receivers)], nxt))
        nxt += 1
    return Tree(new_n, edges)


# -- random trees (test/driver corpus plumbing) ---------------------------


def random_tree(n: int, max_degree: int, rng, shape: str = "uniform") -> Tree:
    """A random labeled tree with Delta <= max_degree.

    shape 'uniform' draws a degree-capped Pruefer sequence; 'path_rich'
    grows a long spine with sparse short branches; 'leaf_rich' grows a
    short spine and hangs most vertices as leaves.
    """
    if n == 1:
        return Tree(1, [])
    if n == 2:
        return Tree(2, [(0, 1)])
    if max_degree < 2:
        raise ValueError("max_degree must be at least 2")
    if shape == "uniform":
        counts = [0] * n
        seq = []
        for _ in range(n - 2):
            while True:
                v = int(rng.integers(n))
                if counts[v] < max_degree - 1:
                    counts[v] += 1
                    seq.append(v)
                    break
        return _tree_from_pruefer(seq, n)
    if shape == "path_rich":
        spine = max(2, int(n * 0.8))
    elif shape == "leaf_rich":
        spine = max(2, int(n * 0.35))
    else:
        raise ValueError(f"unknown shape {shape!r}")
    edges = [(i, i + 1) for i in range(spine - 1)]
    deg = [2] * spine
    deg[0] = deg[spine - 1] = 1
    attach_pool = list(range(spine))
    nxt = spine
    while nxt < n:
        while True:
            host = attach_pool[int(rng.integers(len(attach_pool)))]
            if deg[host] < max_degree:
                break
        if shape == "path_rich":
            # short branch path of up to 4 vertices
            blen = min(int(rng.integers(1, 5)), n - nxt)
            prev = host
            deg[host] += 1
            for _ in range(blen):
                edges.append((prev, nxt))
                deg.append(1)
                if prev != host:
                    deg[prev] += 1
                attach_pool.append(nxt)
                prev = nxt
                nxt += 1
        else:
            edges.append((host, nxt))
            deg[host] += 1
            deg.append(1)
            nxt += 1
    return Tree(n, edges)


def random_tree_with_classes(
    t1: int, t2: int, max_degree: int, rng, shape: str = "uniform"
) -> Tree:
    """A random tree with prescribed bipartition class sizes (t1 >= t2).

    Grows the tree one leaf at a time, steering which class each new
    vertex lands in until both class targets are met.  'leaf_rich' hangs
    new vertices on a few hubs; 'path_rich' extends current leaves so
    long bare paths form; 'uniform' picks parents uniformly.
    """
    if t1 < t2 or t2 < 1:
        raise ValueError("need t1 >= t2 >= 1")
    n = t1 + t2
    if n == 1:
        return Tree(1, [])
    if max_degree < 2:
        raise ValueError("max_degree must be at least 2")
    side = [1, 2]  # vertex 0 in class 1, vertex 1 in class 2
    counts = {1: 1, 2: 1}
    targets = {1: t1, 2: t2}
    deg = [1, 1]
    edges = [(0, 1)]
    tips = [0, 1]  # degree-1 vertices, for path extension
    hub_of_class = {1: 0, 2: 1}
    while counts[1] < t1 or counts[2] < t2:
        # class for the new vertex: the one still in deficit (prefer the
        # larger deficit; random tie-break)
        d1, d2 = targets[1] - counts[1], targets[2] - counts[2]
        if d1 > 0 and d2 > 0:
            cls = 1 if rng.random() < d1 / (d1 + d2) else 2
        else:
            cls = 1 if d1 > 0 else 2
        other = 3 - cls
        parent = None
        if shape == "leaf_rich" and rng.random() < 0.85:
            h = hub_of_class[other]
            if deg[h] < max_degree:
                parent = h
            else:
                cands = [v for v in range(len(side)) if side[v] == other and deg[v] < max_degree]
                parent = cands[int(rng.integers(len(cands)))]
                hub_of_class[other] = parent
        elif shape == "path_rich" and rng.random() < 0.9:
            cands = [v for v in tips if side[v] == other and deg[v] < max_degree]
            if cands:
                parent = cands[int(rng.integers(len(cands)))]
        if parent is None:
            cands = [v for v in range(len(side)) if side[v] == other and deg[v] < max_degree]
            parent = cands[int(rng.integers(len(cands)))]
        new = len(side)
        side.append(cls)
        counts[cls] += 1
        deg.append(1)
        deg[parent] += 1
        edges.append((parent, new))
        if parent in tips:
            tips.remove(parent)
        tips.append(new)
    return Tree(n, edges)


def _tree_from_pruefer(seq: Sequence[int], n: int) -> Tree:
    deg = [1] * n
    for v in seq:
        deg[v] += 1
    import heapq

    leaves = [v for v in range(n) if deg[v] == 1]
    heapq.heapify(leaves)
    edges = []
    for v in seq:
        leaf = heapq.heappop(leaves)
        edges.append((leaf, v))
        deg[v] -= 1
        if deg[v] == 1:
            heapq.heappush(leaves, v)
    u = heapq.heappop(leaves)
    w = heapq.heappop(leaves)
    edges.append((u, w))
    return Tree(n, edges)


def pruefer_trees(n: int) -> Iterator[Tree]:
    """All labeled trees on n vertices via Pruefer sequences (test oracle)."""
    from itertools import product

    if n == 1:
        yield Tree(1, [])
        return
    if n == 2:
        yield Tree(2, [(0, 1)])
        return
    for seq in product(range(n), repeat=n - 2):
        yield _tree_from_pruefer(seq, n)
