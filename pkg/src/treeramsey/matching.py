"""Bipartite matching, star packings with Hall violators, and the
cascading decomposition of a maximum matching.

Bipartite graphs come in as adjacency lists over dense indices: adj[a] is
the list of B-side neighbours of A-side vertex a.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from typing import Sequence

INF = float("inf")


def max_matching(adj: Sequence[Sequence[int]], nb: int) -> dict[int, int]:
    """Maximum-cardinality matching via Hopcroft-Karp.

    adj[a] lists neighbours of A-vertex a among 0..nb-1.  Returns the
    matching as a dict A-index -> B-index.
    """
    na = len(adj)
    match_a = [-1] * na
    match_b = [-1] * nb
    dist = [0] * na

    def bfs() -> bool:
        q = deque()
        for a in range(na):
            if match_a[a] < 0:
                dist[a] = 0
                q.append(a)
            else:
                dist[a] = -1
        found = False
        while q:
            a = q.popleft()
            for b in adj[a]:
                a2 = match_b[b]
                if a2 < 0:
                    found = True
                elif dist[a2] < 0:
                    dist[a2] = dist[a] + 1
                    q.append(a2)
        return found

    def dfs(a: int) -> bool:
        for b in adj[a]:
            a2 = match_b[b]
            if a2 < 0 or (dist[a2] == dist[a] + 1 and dfs(a2)):
                match_a[a] = b
                match_b[b] = a
                return True
        dist[a] = -1
        return False

    while bfs():
        for a in range(na):
            if match_a[a] < 0:
                dfs(a)
    return {a: match_a[a] for a in range(na) if match_a[a] >= 0}


def has_augmenting_path(adj: Sequence[Sequence[int]], nb: int, matching: dict[int, int]) -> bool:
    """Whether the given matching admits an augmenting path (i.e. is not maximum)."""
    na = len(adj)
    match_b = [-1] * nb
    for a, b in matching.items():
        match_b[b] = a
    seen_a = [False] * na
    q = deque()
    for a in range(na):
        if a not in matching:
            seen_a[a] = True
            q.append(a)
    seen_b = [False] * nb
    while q:
        a = q.popleft()
        for b in adj[a]:
            if seen_b[b]:
                continue
            seen_b[b] = True
            a2 = match_b[b]
            if a2 < 0:
                return True
            if not seen_a[a2]:
                seen_a[a2] = True
                q.append(a2)
    return False


def star_packing(
    adj: Sequence[Sequence[int]], nb: int, demands: Sequence[int]
) -> tuple[dict[int, list[int]], None] | tuple[None, list[int]]:
    """Vertex-disjoint stars with prescribed leaf counts, or a Hall violator.

    Returns (stars, None) with stars[a] = the f_a leaves assigned to a,
    or (None, S) where S is a set of A-vertices with |N(S)| < sum of
    their demands (the strict Hall violation, which callers audit).

    Demands are expanded into clones so the matching kernel does the
    work; sizes here are desk scale.
    """
    na = len(adj)
    if any(d < 0 for d in demands):
        raise ValueError("demands must be nonnegative")
    clone_owner: list[int] = []
    clone_adj: list[Sequence[int]] = []
    for a in range(na):
        for _ in range(demands[a]):
            clone_owner.append(a)
            clone_adj.append(adj[a])
    m = max_matching(clone_adj, nb)
    if len(m) == len(clone_adj):
        stars: dict[int, list[int]] = {a: [] for a in range(na) if demands[a] > 0}
        for clone, b in m.items():
            stars[clone_owner[clone]].append(b)
        return stars, None
    # extract a violator: A-clones reachable from an unmatched clone by
    # alternating paths form a deficient set, and all clones of a touched
    # original are reachable, so demands sum correctly.
    match_b = [-1] * nb
    for c, b in m.items():
        match_b[b] = c
    seen_c = [False] * len(clone_adj)
    q = deque()
    for c in range(len(clone_adj)):
        if c not in m:
            seen_c[c] = True
            q.append(c)
    seen_b = [False] * nb
    while q:
        c = q.popleft()
        for b in clone_adj[c]:
            if not seen_b[b]:
                seen_b[b] = True
                c2 = match_b[b]
                if c2 >= 0 and not seen_c[c2]:
                    seen_c[c2] = True
                    q.append(c2)
    violator = sorted({clone_owner[c] for c in range(len(clone_adj)) if seen_c[c]})
    return None, violator


@dataclass(frozen=True)
class CascadeDecomposition:
    """Fixed point of the cascading exchange process on a maximum matching.

    A-side classes Aplus/Aminus/Abar partition the matched A-vertices
    (same for B); Aprime/Bprime are the unmatched vertices.  M matches
    Aplus with Bminus, Aminus with Bplus, Abar with Bbar, and both
    G[A' u A-, B' u B- u Bbar] and G[A' u A- u Abar, B' u B-] are empty.
    """

    Aplus: frozenset[int]
    Aminus: frozenset[int]
    Abar: frozenset[int]
    Bplus: frozenset[int]
    Bminus: frozenset[int]
    Bbar: frozenset[int]
    Aprime: frozenset[int]
    Bprime: frozenset[int]
    M: frozenset[tuple[int, int]]


def cascade(adj: Sequence[Sequence[int]], nb: int, matching: dict[int, int]) -> CascadeDecomposition:
    """Run the exchange process to its fixed point.

    Moves are processed smallest vertex id first; the emptiness
    guarantees are order-independent even though the class assignment is
    not.  Refuses if the matching is not maximum.
    """
    na = len(adj)
    if has_augmenting_path(adj, nb, matching):
        raise ValueError("matching is not maximum (augmenting path exists)")
    match_b: dict[int, int] = {b: a for a, b in matching.items()}
    nbr_b: list[set[int]] = [set() for _ in range(nb)]
    for a in range(na):
        for b in adj[a]:
            nbr_b[b].add(a)

    a_prime = {a for a in range(na) if a not in matching}
    b_prime = {b for b in range(nb) if b not in match_b}
    a_plus: set[int] = set()
    a_minus: set[int] = set()
    a_bar = set(matching.keys())
    b_plus: set[int] = set()
    b_minus: set[int] = set()
    b_bar = set(match_b.keys())

    while True:
        move = None
        # a in Abar adjacent to B' u B-: promote a -> A+, its mate -> B-
        target_b = b_prime | b_minus
        for a in sorted(a_bar):
            if any(b in target_b for b in adj[a]):
                move = ("a", a)
                break
        if move is None:
            target_a = a_prime | a_minus
            for b in sorted(b_bar):
                if any(x in target_a for x in nbr_b[b]):
                    move = ("b", b)
                    break
        if move is None:
            break
        if move[0] == "a":
            a = move[1]
            b = matching[a]
            a_bar.remove(a)
            a_plus.add(a)
            b_bar.remove(b)
            b_minus.add(b)
        else:
            b = move[1]
            a = match_b[b]
            b_bar.remove(b)
            b_plus.add(b)
            a_bar.remove(a)
            a_minus.add(a)

    return CascadeDecomposition(
        frozenset(a_plus),
        frozenset(a_minus),
        frozenset(a_bar),
        frozenset(b_plus),
        frozenset(b_minus),
        frozenset(b_bar),
        frozenset(a_prime),
        frozenset(b_prime),
        frozenset(matching.items()),
    )


def audit_cascade(adj: Sequence[Sequence[int]], dec: CascadeDecomposition) -> None:
    """Assert the two emptiness conditions and the class pairing exactly."""
    m = dict(dec.M)
    for a in dec.Aplus:
        assert m[a] in dec.Bminus
    for a in dec.Aminus:
        assert m[a] in dec.Bplus
    for a in dec.Abar:
        assert m[a] in dec.Bbar
    left1 = dec.Aprime | dec.Aminus
    right1 = dec.Bprime | dec.Bminus | dec.Bbar
    left2 = dec.Aprime | dec.Aminus | dec.Abar
    right2 = dec.Bprime | dec.Bminus
    for a in left1:
        assert not any(b in right1 for b in adj[a]), f"edge from {a} into B'uB-uBbar"
    for a in left2:
        assert not any(b in right2 for b in adj[a]), f"edge from {a} into B'uB-"
