"""Dense 3-uniform hypergraphs with pair-indexed link sets.

Vertices are integers in [0, n).  Vertex sets are int bitmasks throughout
(bit v set means vertex v is in the set); edges are sorted 3-tuples.  The
primary representation is the pair-link table: for every ordered pair
(u, v) it stores the bitmask of vertices w with {u, v, w} an edge.  This
makes codegree a popcount and every set-restricted degree count a masked
popcount, which is what the tiling classifiers and connectors hammer on.

Graphs are immutable after construction and safe to share across threads.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Optional


# ---------------------------------------------------------------------------
# bitmask helpers
# ---------------------------------------------------------------------------

def mask_of(vertices: Iterable[int]) -> int:
    """Bitmask of a vertex collection."""
    m = 0
    for v in vertices:
        m |= 1 << v
    return m


def iter_bits(mask: int) -> Iterator[int]:
    """Yield set bit positions in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bit_list(mask: int) -> list[int]:
    return list(iter_bits(mask))


def canon_triple(a: int, b: int, c: int) -> tuple[int, int, int]:
    """Sorted form of a triple; raises on repeated vertices."""
    if a == b or a == c or b == c:
        raise ValueError(f"triple ({a},{b},{c}) has repeated vertices")
    if a > b:
        a, b = b, a
    if b > c:
        b, c = c, b
    if a > b:
        a, b = b, a
    return (a, b, c)


# ---------------------------------------------------------------------------
# ThreeGraph
# ---------------------------------------------------------------------------

class ThreeGraph:
    """Immutable 3-uniform hypergraph on vertex set [0, n).

    ``link(u, v)`` is the bitmask of vertices completing the pair to an
    edge; the flat triple list is materialized lazily (it is only needed
    for serialization and edge iteration, not for the counting kernels).
    """

    __slots__ = ("n", "full_mask", "_link", "_edges", "_degs", "_num_edges")

    def __init__(self, n: int, link: list[int], edges: Optional[tuple] = None):
        # private; use build_graph() / from_edges() instead
        self.n = n
        self.full_mask = (1 << n) - 1
        self._link = link  # flat n*n list, _link[u*n+v] == _link[v*n+u]
        self._edges = edges
        self._degs: Optional[list[int]] = None
        self._num_edges: Optional[int] = None

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, triples: Iterable[tuple[int, int, int]]) -> "ThreeGraph":
        """Canonicalize, deduplicate, validate and index a triple list."""
        if n < 1:
            raise ValueError("n must be at least 1")
        seen = set()
        for t in triples:
            a, b, c = t
            if not (0 <= a < n and 0 <= b < n and 0 <= c < n):
                raise ValueError(f"triple {t} has a vertex outside [0, {n})")
            seen.add(canon_triple(a, b, c))
        edges = tuple(sorted(seen))
        link = [0] * (n * n)
        for (a, b, c) in edges:
            link[a * n + b] |= 1 << c
            link[b * n + a] |= 1 << c
            link[a * n + c] |= 1 << b
            link[c * n + a] |= 1 << b
            link[b * n + c] |= 1 << a
            link[c * n + b] |= 1 << a
        g = cls(n, link, edges)
        g._num_edges = len(edges)
        return g

    @classmethod
    def from_link_table(cls, n: int, link: list[int]) -> "ThreeGraph":
        """Construct directly from a symmetric pair-link table.

        Used by the dense structured families where enumerating every
        triple would dominate the build; the caller guarantees symmetry
        and consistency (link[u][v] bit w set iff link[u][w] bit v set).
        """
        return cls(n, link)

    # -- basic accessors ----------------------------------------------------

    def link(self, u: int, v: int) -> int:
        """Bitmask of w with {u, v, w} an edge."""
        return self._link[u * self.n + v]

    @property
    def edges(self) -> tuple:
        if self._edges is None:
            n = self.n
            lk = self._link
            out = []
            for a in range(n):
                base = a * n
                for b in range(a + 1, n):
                    m = lk[base + b] >> (b + 1)
                    c = b + 1
                    while m:
                        low = m & -m
                        out.append((a, b, c + low.bit_length() - 1))
                        m ^= low
            self._edges = tuple(out)
        return self._edges

    @property
    def num_edges(self) -> int:
        if self._num_edges is None:
            n = self.n
            lk = self._link
            total = 0
            for u in range(n):
                base = u * n
                for v in range(u + 1, n):
                    total += lk[base + v].bit_count()
            assert total % 3 == 0
            self._num_edges = total // 3
        return self._num_edges

    def has_edge(self, a: int, b: int, c: int) -> bool:
        return bool(self._link[a * self.n + b] >> c & 1)

    def _check_vertex(self, v: int) -> None:
        if not (0 <= v < self.n):
            raise ValueError(f"vertex {v} outside [0, {self.n})")

    # -- degrees and codegrees ----------------------------------------------

    def degree(self, v: int) -> int:
        self._check_vertex(v)
        if self._degs is not None:
            return self._degs[v]
        base = v * self.n
        lk = self._link
        s = 0
        for u in range(self.n):
            s += lk[base + u].bit_count()
        return s // 2  # each edge at v is seen through both of its pairs

    def degrees(self) -> list[int]:
        if self._degs is None:
            self._degs = [self.degree(v) for v in range(self.n)]
        return self._degs

    def min_vertex_degree(self) -> int:
        return min(self.degrees())

    def codegree(self, u: int, v: int) -> int:
        if u == v:
            raise ValueError("codegree needs two distinct vertices")
        self._check_vertex(u)
        self._check_vertex(v)
        return self._link[u * self.n + v].bit_count()

    def min_codegree(self) -> int:
        n = self.n
        lk = self._link
        return min(lk[u * n + v].bit_count()
                   for u in range(n) for v in range(u + 1, n))

    # -- set-restricted counts ----------------------------------------------

    def deg_into(self, v: int, B: int) -> int:
        """Edges containing v and two vertices of B (other than v)."""
        self._check_vertex(v)
        B &= self.full_mask & ~(1 << v)
        base = v * self.n
        lk = self._link
        s = 0
        for x in iter_bits(B):
            s += (lk[base + x] & B).bit_count()
        return s // 2

    def deg_into_bar(self, v: int, B: int) -> int:
        """Non-edges counterpart: C(|B'|, 2) - deg_into with B' = B minus v."""
        k = (B & ~(1 << v)).bit_count()
        return k * (k - 1) // 2 - self.deg_into(v, B)

    def deg_cross(self, v: int, S: int, T: int) -> int:
        """Edges containing v, one vertex of S and one of T."""
        self._check_vertex(v)
        if S & T:
            raise ValueError("deg_cross needs disjoint S and T")
        vb = 1 << v
        S &= ~vb
        T &= ~vb
        base = v * self.n
        lk = self._link
        s = 0
        for x in iter_bits(S):
            s += (lk[base + x] & T).bit_count()
        return s

    def deg_cross_bar(self, v: int, S: int, T: int) -> int:
        vb = 1 << v
        return ((S & ~vb).bit_count() * (T & ~vb).bit_count()
                - self.deg_cross(v, S, T))

    def e_inside(self, B: int) -> int:
        """Edges with all three vertices in B."""
        B &= self.full_mask
        n = self.n
        lk = self._link
        vs = bit_list(B)
        s = 0
        for i, u in enumerate(vs):
            base = u * n
            for v in vs[i + 1:]:
                s += (lk[base + v] & B).bit_count()
        return s // 3

    def e_triple(self, X: int, Y: int, Z: int) -> int:
        """Edges admitting one vertex in each of X, Y, Z (sets may overlap)."""
        s = 0
        for (a, b, c) in self.edges:
            am, bm, cm = 1 << a, 1 << b, 1 << c
            for (p, q, r) in ((am, bm, cm), (am, cm, bm), (bm, am, cm),
                              (bm, cm, am), (cm, am, bm), (cm, bm, am)):
                if (p & X) and (q & Y) and (r & Z):
                    s += 1
                    break
        return s

    # -- link graphs ---------------------------------------------------------

    def link_graph(self, v: int) -> "Graph":
        """Graph of pairs completing v to an edge, on V minus v."""
        self._check_vertex(v)
        n = self.n
        base = v * n
        verts = self.full_mask & ~(1 << v)
        adj = [self._link[base + x] if x != v else 0 for x in range(n)]
        return Graph(n, verts, adj)

    def link_bipartite(self, v: int, S: int, T: int) -> "Graph":
        """Bipartite link of v restricted to pairs between S and T."""
        self._check_vertex(v)
        if S & T:
            raise ValueError("link_bipartite needs disjoint S and T")
        if (1 << v) & (S | T):
            raise ValueError("link_bipartite: v must avoid S and T")
        n = self.n
        base = v * n
        adj = [0] * n
        for x in iter_bits(S):
            adj[x] = self._link[base + x] & T
        for y in iter_bits(T):
            adj[y] = self._link[base + y] & S
        return Graph(n, S | T, adj, parts=(S, T))

    # -- induced subgraph ----------------------------------------------------

    def induced(self, S: int) -> tuple["ThreeGraph", list[int]]:
        """Induced subgraph on S, re-indexed; returns (graph, old labels)."""
        S &= self.full_mask
        if S == 0:
            raise ValueError("induced set must be nonempty")
        old = bit_list(S)
        index = {v: i for i, v in enumerate(old)}
        triples = []
        for i, u in enumerate(old):
            base = u * self.n
            for v in old[i + 1:]:
                m = self._link[base + v] & S
                for w in iter_bits(m):
                    if w > v:
                        triples.append((index[u], index[v], index[w]))
        return ThreeGraph.from_edges(len(old), triples), old

    def relabeled(self, perm: list[int]) -> "ThreeGraph":
        """Image under the vertex permutation v -> perm[v] (test helper)."""
        return ThreeGraph.from_edges(
            self.n, [(perm[a], perm[b], perm[c]) for (a, b, c) in self.edges])

    def __repr__(self) -> str:
        return f"ThreeGraph(n={self.n}, edges={self.num_edges})"


def build_graph(n: int, triples: Iterable[tuple[int, int, int]]) -> ThreeGraph:
    """Public constructor: canonicalized, deduplicated, fully validated."""
    return ThreeGraph.from_edges(n, triples)


# ---------------------------------------------------------------------------
# plain graphs (links, centers graph, completion auxiliaries)
# ---------------------------------------------------------------------------

class Graph:
    """Undirected graph on a subset of [0, n), adjacency stored as bitmasks.

    ``parts`` carries an optional bipartition (L, R); edges are then
    guaranteed to cross it.
    """

    __slots__ = ("n", "verts", "adj", "parts")

    def __init__(self, n: int, verts: int, adj: list[int],
                 parts: Optional[tuple[int, int]] = None):
        self.n = n
        self.verts = verts
        self.adj = adj
        self.parts = parts

    @classmethod
    def empty(cls, n: int, verts: int,
              parts: Optional[tuple[int, int]] = None) -> "Graph":
        return cls(n, verts, [0] * n, parts)

    def add_edge(self, u: int, v: int) -> None:
        if u == v:
            raise ValueError("no loops")
        if not ((self.verts >> u) & 1 and (self.verts >> v) & 1):
            raise ValueError("edge endpoint outside declared vertex set")
        if self.parts is not None:
            L, R = self.parts
            um, vm = 1 << u, 1 << v
            if not ((um & L and vm & R) or (um & R and vm & L)):
                raise ValueError("edge does not cross the bipartition")
        self.adj[u] |= 1 << v
        self.adj[v] |= 1 << u

    def has_edge(self, u: int, v: int) -> bool:
        return bool(self.adj[u] >> v & 1)

    def degree(self, v: int) -> int:
        return self.adj[v].bit_count()

    def neighbors(self, v: int) -> int:
        return self.adj[v]

    @property
    def num_edges(self) -> int:
        return sum(self.adj[v].bit_count() for v in iter_bits(self.verts)) // 2

    def edge_list(self) -> list[tuple[int, int]]:
        out = []
        for v in iter_bits(self.verts):
            m = self.adj[v] >> (v + 1)
            w = v + 1
            while m:
                low = m & -m
                out.append((v, w + low.bit_length() - 1))
                m ^= low
        return out

    def __repr__(self) -> str:
        return f"Graph(|V|={self.verts.bit_count()}, |E|={self.num_edges})"


# ---------------------------------------------------------------------------
# parameters
# ---------------------------------------------------------------------------

@dataclass
class Parameters:
    """Knobs shared by the searchers and the extremal pipeline.

    eps0 and eps1 default to the derived values 18*beta and 8*sqrt(eps0);
    rho defaults to 4*eps1 capped below 1.  All randomized operations draw
    from rng_seed; there is no global randomness anywhere.
    """

    beta: float = 0.0005
    eps0: Optional[float] = None
    eps1: Optional[float] = None
    gamma: float = 0.05
    rho: Optional[float] = None
    search_node_budget: int = 2_000_000
    resample_limit: int = 50
    rng_seed: int = 0
    # centers-graph thresholds; defaults are the proof constants
    centers_witnesses: int = 16
    centers_min_degree: int = 7
    centers_neighbor_degree: int = 2

    def __post_init__(self) -> None:
        if self.eps0 is None:
            self.eps0 = 18.0 * self.beta
        if self.eps1 is None:
            self.eps1 = 8.0 * math.sqrt(self.eps0)
        if self.rho is None:
            self.rho = min(4.0 * self.eps1, 63 / 64)
        for name in ("beta", "eps0", "eps1", "gamma", "rho"):
            x = getattr(self, name)
            if not (0.0 < x < 1.0):
                raise ValueError(f"{name}={x} must lie in (0, 1)")
        if self.search_node_budget <= 0 or self.resample_limit <= 0:
            raise ValueError("budgets must be positive")


def binom2(k: int) -> int:
    return k * (k - 1) // 2


def all_triples(n: int) -> list[tuple[int, int, int]]:
    return list(itertools.combinations(range(n), 3))
