"""Red/blue colored complete graphs.

The two color classes are stored as bit-adjacency rows (arbitrary
precision ints), so degree queries are masked popcounts.  RBGraph values
are immutable after construction; `perturb` returns a new graph.

Includes the two Burr extremal constructions (blue cliques joined in
red), the closeness-to-extremal detector (verify-after-guess: returned
witnesses always check out against the definition, absence proves
nothing), and the augmented partitions both extremal-case drivers
compute first.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from treeramsey.errors import HypothesisError


def mask_of(vertices: Iterable[int]) -> int:
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def bits_of(mask: int) -> list[int]:
    out = []
    v = 0
    while mask:
        tz = (mask & -mask).bit_length() - 1
        out.append(tz)
        mask &= mask - 1
    return out


def iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask &= mask - 1


class RBGraph:
    """Complete graph on n vertices with every edge red or blue."""

    __slots__ = ("n", "red", "blue", "full")

    def __init__(self, n: int, red_rows: Sequence[int], validate: bool = True):
        self.n = n
        full = (1 << n) - 1
        self.full = full
        red = list(red_rows)
        blue = [(~red[v]) & full & ~(1 << v) for v in range(n)]
        self.red = red
        self.blue = blue
        if validate:
            self._validate()

    def _validate(self):
        n, full = self.n, self.full
        for v in range(n):
            if self.red[v] & (1 << v):
                raise ValueError(f"red loop at {v}")
            if self.red[v] >> n:
                raise ValueError(f"red row {v} out of range")
            if (self.red[v] | self.blue[v]) != full & ~(1 << v):
                raise ValueError(f"color partition broken at {v}")
            if self.red[v] & self.blue[v]:
                raise ValueError(f"colors overlap at {v}")
        for u in range(n):
            for w in iter_bits(self.red[u]):
                if not (self.red[w] >> u) & 1:
                    raise ValueError(f"red not symmetric at ({u},{w})")

    # -- queries -----------------------------------------------------

    def rows(self, color: str) -> list[int]:
        return self.red if color == "red" else self.blue

    def d_red(self, v: int, mask: int | None = None) -> int:
        row = self.red[v]
        return (row & mask).bit_count() if mask is not None else row.bit_count()

    def d_blue(self, v: int, mask: int | None = None) -> int:
        row = self.blue[v]
        return (row & mask).bit_count() if mask is not None else row.bit_count()

    def edge_color(self, u: int, v: int) -> str:
        return "red" if (self.red[u] >> v) & 1 else "blue"

    def count_edges_within(self, mask: int, color: str = "red") -> int:
        rows = self.rows(color)
        total = 0
        for v in iter_bits(mask):
            total += (rows[v] & mask).bit_count()
        return total // 2

    def count_edges_between(self, mask_a: int, mask_b: int, color: str = "red") -> int:
        # for disjoint masks
        rows = self.rows(color)
        return sum((rows[v] & mask_b).bit_count() for v in iter_bits(mask_a))

    def components(self, color: str, within: int | None = None) -> list[int]:
        """Connected components (as masks) of the chosen color subgraph."""
        rows = self.rows(color)
        todo = within if within is not None else self.full
        comps = []
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

    def __eq__(self, other) -> bool:
        return isinstance(other, RBGraph) and self.n == other.n and self.red == other.red

    def __repr__(self) -> str:
        return f"RBGraph(n={self.n}, red_edges={self.count_edges_within(self.full, 'red')})"

    # -- file format: red subgraph as graph6, blue is its complement --

    def to_graph6(self) -> bytes:
        return graph6_encode(self.n, self.red)

    @classmethod
    def from_graph6(cls, data: bytes) -> "RBGraph":
        n, rows = graph6_decode(data)
        return cls(n, rows)

    def sidecar(self) -> dict:
        return {"n": self.n, "format": "graph6-red"}


def graph6_encode(n: int, rows: Sequence[int]) -> bytes:
    """Standard graph6 encoding of the graph given by bit-adjacency rows."""
    if n < 0 or n > 258047:
        raise ValueError("graph6 size out of supported range")
    if n <= 62:
        head = bytes([n + 63])
    else:
        head = bytes([126, (n >> 12) + 63, ((n >> 6) & 63) + 63, (n & 63) + 63])
    bits = []
    for v in range(1, n):
        for u in range(v):
            bits.append((rows[v] >> u) & 1)
    while len(bits) % 6:
        bits.append(0)
    body = bytearray()
    for i in range(0, len(bits), 6):
        x = 0
        for b in bits[i : i + 6]:
            x = (x << 1) | b
        body.append(x + 63)
    return head + bytes(body)


def graph6_decode(data: bytes) -> tuple[int, list[int]]:
    data = data.strip()
    if not data:
        raise ValueError("empty graph6 data")
    if data[0] == 126:
        if len(data) < 4:
            raise ValueError("truncated graph6 header")
        n = ((data[1] - 63) << 12) | ((data[2] - 63) << 6) | (data[3] - 63)
        body = data[4:]
    else:
        n = data[0] - 63
        body = data[1:]
    need = (n * (n - 1) // 2 + 5) // 6
    if len(body) < need:
        raise ValueError("truncated graph6 body")
    bits = []
    for byte in body[:need]:
        x = byte - 63
        if not (0 <= x < 64):
            raise ValueError("invalid graph6 byte")
        for k in range(5, -1, -1):
            bits.append((x >> k) & 1)
    rows = [0] * n
    i = 0
    for v in range(1, n):
        for u in range(v):
            if bits[i]:
                rows[v] |= 1 << u
                rows[u] |= 1 << v
            i += 1
    return n, rows


# -- Burr constructions ---------------------------------------------------


def burr_type1(t1: int, t2: int) -> RBGraph:
    """Blue cliques on |U1| = t1+t2-1 and |U2| = t2-1, all cross edges red.

    On N = t1+2t2-2 vertices; any blue component has at most t1+t2-1
    vertices and any red subgraph is bipartite with one side below t2, so
    no monochromatic tree with classes (t1, t2) fits.  U1 is vertices
    [0, t1+t2-1), U2 the rest.
    """
    if not (t1 >= t2 >= 1):
        raise HypothesisError(f"burr_type1 needs t1 >= t2 >= 1, got ({t1},{t2})")
    a = t1 + t2 - 1
    b = t2 - 1
    n = a + b
    mask_a = (1 << a) - 1
    rows = []
    for v in range(n):
        rows.append(((1 << n) - 1 - mask_a) if v < a else mask_a)
    return RBGraph(n, rows)


def burr_type2(t1: int) -> RBGraph:
    """Blue cliques of size t1-1 on each side, complete red bipartite across.

    On N = 2t1-2 vertices; blue components have t1-1 < |T| vertices and
    the red graph is bipartite with both sides below t1.
    """
    if t1 < 2:
        raise HypothesisError(f"burr_type2 needs t1 >= 2, got {t1}")
    a = t1 - 1
    n = 2 * a
    mask_a = (1 << a) - 1
    rows = []
    for v in range(n):
        rows.append(((1 << n) - 1 - mask_a) if v < a else mask_a)
    return RBGraph(n, rows)


def perturb(g: RBGraph, eta: float, seed: int) -> RBGraph:
    """Flip each edge's color independently with probability eta."""
    if not (0.0 <= eta <= 1.0):
        raise HypothesisError(f"eta must be in [0,1], got {eta}")
    from treeramsey import rand

    rng = rand.stream(seed, "perturb", g.n, eta)
    red = list(g.red)
    if eta > 0.0:
        for v in range(1, g.n):
            flips = np.nonzero(rng.random(v) < eta)[0]
            for u in flips:
                u = int(u)
                red[v] ^= 1 << u
                red[u] ^= 1 << v
    return RBGraph(g.n, red, validate=False)


# -- extremality (closeness to a Burr construction) -----------------------


@dataclass(frozen=True)
class ExtremalWitness:
    """Certificate that a coloring is close to a Burr construction.

    kind 'I' or 'II'; U1/U2 are vertex masks; swapped means the roles of
    red and blue are exchanged relative to the definition (so the 'blue'
    cliques are actually red).
    """

    kind: str
    U1: int
    U2: int
    mu: float
    t1: int
    t2: int
    swapped: bool

    def sets(self) -> tuple[list[int], list[int]]:
        return bits_of(self.U1), bits_of(self.U2)


def _wit_colors(g: RBGraph, swapped: bool) -> tuple[list[int], list[int]]:
    """(clique_color_rows, cross_color_rows): blue cliques unless swapped."""
    return (g.red, g.blue) if swapped else (g.blue, g.red)


def verify_witness(g: RBGraph, w: ExtremalWitness) -> bool:
    """Exact check of the extremality definition; soundness gate."""
    n = w.t1 + w.t2
    mun = w.mu * n
    if w.U1 & w.U2:
        return False
    clique, cross = _wit_colors(g, w.swapped)
    U1, U2 = w.U1, w.U2
    if w.kind == "I":
        if U1.bit_count() < (1 - w.mu) * n or U2.bit_count() < (1 - w.mu) * w.t2:
            return False
        for u in iter_bits(U1):
            if (cross[u] & U1).bit_count() > mun:
                return False
            if (clique[u] & U2).bit_count() > mun:
                return False
        for u in iter_bits(U2):
            if (clique[u] & U1).bit_count() > mun:
                return False
        return True
    if w.kind == "II":
        if U1.bit_count() < (1 - w.mu) * w.t1 or U2.bit_count() < (1 - w.mu) * w.t1:
            return False
        for i, (A, B) in enumerate(((U1, U2), (U2, U1))):
            for u in iter_bits(A):
                if (cross[u] & A).bit_count() > mun:
                    return False
                if (clique[u] & B).bit_count() > mun:
                    return False
        return True
    return False


def _refine_clique(rows: list[int], seedmask: int, universe: int, rounds: int = 3) -> int:
    """Vertices with >= half their candidates adjacent in `rows`."""
    cur = seedmask
    for _ in range(rounds):
        size = cur.bit_count()
        if size == 0:
            return 0
        nxt = 0
        half = size / 2
        for v in iter_bits(universe):
            if ((rows[v] | (1 << v)) & cur).bit_count() >= half:
                nxt |= 1 << v
        if nxt == cur:
            break
        cur = nxt
    return cur


def _trim_type1(g: RBGraph, U1: int, U2: int, mu: float, n: int, swapped: bool) -> tuple[int, int]:
    clique, cross = _wit_colors(g, swapped)
    mun = mu * n
    changed = True
    while changed:
        changed = False
        for u in list(iter_bits(U1)):
            if (cross[u] & U1).bit_count() > mun or (clique[u] & U2).bit_count() > mun:
                U1 &= ~(1 << u)
                changed = True
        for u in list(iter_bits(U2)):
            if (clique[u] & U1).bit_count() > mun:
                U2 &= ~(1 << u)
                changed = True
    return U1, U2


def _trim_type2(g: RBGraph, U1: int, U2: int, mu: float, n: int, swapped: bool) -> tuple[int, int]:
    clique, cross = _wit_colors(g, swapped)
    mun = mu * n
    changed = True
    while changed:
        changed = False
        for A_name in (1, 2):
            A = U1 if A_name == 1 else U2
            B = U2 if A_name == 1 else U1
            for u in list(iter_bits(A)):
                if (cross[u] & A).bit_count() > mun or (clique[u] & B).bit_count() > mun:
                    A &= ~(1 << u)
                    changed = True
            if A_name == 1:
                U1 = A
            else:
                U2 = A
    return U1, U2


def detect_extremal(g: RBGraph, mu: float, t1: int, t2: int) -> ExtremalWitness | None:
    """Greedy seeded search for an extremality witness.

    Heuristic (may miss witnesses); every returned witness is re-verified
    against the definition, so a non-None answer is always sound.  The
    unswapped orientation is tried first when both verify.
    """
    n = t1 + t2
    full = g.full
    for kind in ("I", "II"):
        for swapped in (False, True):
            clique, _cross = _wit_colors(g, swapped)
            # seed U1 around the vertex of largest clique-color degree
            u0 = max(range(g.n), key=lambda v: clique[v].bit_count())
            U1 = _refine_clique(clique, clique[u0] | (1 << u0), full)
            rest = full & ~U1
            if not rest:
                continue
            u1 = max(iter_bits(rest), key=lambda v: (clique[v] & rest).bit_count())
            U2 = _refine_clique(clique, (clique[u1] | (1 << u1)) & rest, rest)
            U2 &= ~U1
            if kind == "I" and U1.bit_count() < U2.bit_count():
                U1, U2 = U2, U1
            if kind == "I":
                U1, U2 = _trim_type1(g, U1, U2, mu, n, swapped)
            else:
                if U1.bit_count() < U2.bit_count():
                    U1, U2 = U2, U1
                U1, U2 = _trim_type2(g, U1, U2, mu, n, swapped)
            w = ExtremalWitness(kind, U1, U2, mu, t1, t2, swapped)
            if verify_witness(g, w):
                return w
    return None


# -- augmented partitions used by the extremal drivers --------------------


def partition_plus_type1(
    g: RBGraph, U1: int, U2: int, beta: float, mu: float, n: int
) -> tuple[int, int, int, int, int]:
    """(U1plus, U2plus, k, D, X) for the Type I driver.

    U2plus collects every vertex with at least beta*n red neighbours in
    U1 (cross color as seen by the witness orientation must be red; pass
    a color-swapped view if needed); U1plus is the rest.  k = |U1plus|-n.
    D is the ceil(30*mu*n)-th biggest blue degree from U1plus into U2plus
    (0 if there are fewer vertices), rank rounded up so ties resolve to
    the smaller, safer value.  X collects U1plus vertices with blue
    degree at least n/10 into U2plus.
    """
    if U1 & U2:
        raise HypothesisError("U1 and U2 must be disjoint")
    threshold = beta * n
    U2p = 0
    for v in range(g.n):
        if (g.red[v] & U1).bit_count() >= threshold:
            U2p |= 1 << v
    U1p = g.full & ~U2p
    k = U1p.bit_count() - n
    blue_degs = sorted(
        ((g.blue[v] & U2p).bit_count() for v in iter_bits(U1p)), reverse=True
    )
    r = max(1, int(-(-30 * mu * n // 1)))
    D = blue_degs[r - 1] if r <= len(blue_degs) else 0
    X = 0
    for v in iter_bits(U1p):
        if (g.blue[v] & U2p).bit_count() >= n / 10:
            X |= 1 << v
    return U1p, U2p, k, D, X


def partition_plus_type2(
    g: RBGraph, U1: int, U2: int, beta: float, n: int
) -> tuple[int, int, int]:
    """(U1plus, U2plus, leftover) for the Type II driver.

    Augments U1, U2 by every outside vertex with at least beta*n red
    neighbours in the opposite original set (qualifying for both goes to
    the first side).  Leftover vertices qualify for neither, which the
    caller may audit as near-full blue degree into both sides.
    """
    if U1 & U2:
        raise HypothesisError("U1 and U2 must be disjoint")
    threshold = beta * n
    U1p, U2p = U1, U2
    for v in range(g.n):
        bit = 1 << v
        if bit & (U1 | U2):
            continue
        if (g.red[v] & U2).bit_count() >= threshold:
            U1p |= bit
        elif (g.red[v] & U1).bit_count() >= threshold:
            U2p |= bit
    leftover = g.full & ~(U1p | U2p)
    return U1p, U2p, leftover
