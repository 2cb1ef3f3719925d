"""Y-copies (four vertices, two edges through a shared pair): detection,
greedy and exact tilings, the linear-hypergraph edge bound, bipartite link
classification, and the centers-graph extraction of a candidate sparse set.

A 3-graph is Y-free exactly when every pair has codegree at most one, so a
Y-free graph on m vertices has at most binom(m, 2) / 3 edges; Steiner
triple systems attain this with equality.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Optional

from .core import Graph, Parameters, ThreeGraph, binom2, bit_list, iter_bits, mask_of
from .matching import max_bipartite_matching, min_vertex_cover

T_LE6 = "T_le6"
T7_1 = "T7_1"
T_GE7_2 = "T_ge7_2"
T_GE7_3 = "T_ge7_3"


# ---------------------------------------------------------------------------
# domain types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class YCopy:
    """Vertices (v1, v2, v3, v4) with edges {v1,v2,v3} and {v2,v3,v4}.

    (v2, v3) is the shared pair; stored with v2 < v3 and v1 < v4.
    """

    v1: int
    v2: int
    v3: int
    v4: int

    @staticmethod
    def make(end1: int, p: int, q: int, end2: int) -> "YCopy":
        if p > q:
            p, q = q, p
        if end1 > end2:
            end1, end2 = end2, end1
        return YCopy(end1, p, q, end2)

    @property
    def vertices(self) -> tuple[int, int, int, int]:
        return (self.v1, self.v2, self.v3, self.v4)

    @property
    def vertex_mask(self) -> int:
        return (1 << self.v1) | (1 << self.v2) | (1 << self.v3) | (1 << self.v4)

    def is_valid_in(self, H: ThreeGraph) -> bool:
        if len(set(self.vertices)) != 4:
            return False
        return (H.has_edge(self.v1, self.v2, self.v3)
                and H.has_edge(self.v2, self.v3, self.v4))


@dataclass(frozen=True)
class YTiling:
    """Vertex-disjoint Y-copies."""

    copies: tuple[YCopy, ...]

    @property
    def size(self) -> int:
        return len(self.copies)

    @property
    def vertex_mask(self) -> int:
        m = 0
        for c in self.copies:
            m |= c.vertex_mask
        return m

    def is_valid_in(self, H: ThreeGraph) -> bool:
        used = 0
        for c in self.copies:
            vm = c.vertex_mask
            if vm & used or not c.is_valid_in(H):
                return False
            used |= vm
        return True


@dataclass(frozen=True)
class LinkClass:
    """Classification of one bipartite link on two 4-sets, with witness."""

    kind: str
    edge_count: int
    matching: Optional[tuple[tuple[int, int], ...]] = None  # (vi, vj) pairs
    cover: Optional[tuple[tuple[int, str], ...]] = None     # (vertex, side)


@dataclass
class TilingAnalysis:
    """Centers-graph analysis of a tiling: the candidate extremal split."""

    tiling: YTiling
    U: int                      # uncovered vertices
    centers_graph: Graph
    C: int
    I_C: tuple[int, ...]
    A_candidate: int
    B_candidate: int
    e_A: int = 0
    A_is_y_free: bool = True
    e_B: int = 0
    class_counts: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# Y-freeness and the edge bound
# ---------------------------------------------------------------------------

def find_y_copy(H: ThreeGraph, avail: Optional[int] = None) -> Optional[YCopy]:
    """Lowest Y-copy (by shared pair, then ends) inside an available set."""
    if avail is None:
        avail = H.full_mask
    vs = bit_list(avail)
    n = H.n
    for i, u in enumerate(vs):
        base = u * n
        for v in vs[i + 1:]:
            ends = H._link[base + v] & avail
            if ends.bit_count() >= 2:
                e1 = (ends & -ends).bit_length() - 1
                ends &= ends - 1
                e2 = (ends & -ends).bit_length() - 1
                return YCopy.make(e1, u, v, e2)
    return None


def is_y_free(H: ThreeGraph) -> bool:
    return find_y_copy(H) is None


def max_codegree_le_one(H: ThreeGraph) -> bool:
    n = H.n
    return all(H._link[u * n + v].bit_count() <= 1
               for u in range(n) for v in range(u + 1, n))


def y_free_edge_bound_check(H: ThreeGraph) -> bool:
    """Vacuous unless Y-free; then asserts 3 e(H) <= binom(n, 2)."""
    if not is_y_free(H):
        return True
    return 3 * H.num_edges <= binom2(H.n)


# ---------------------------------------------------------------------------
# tilings: greedy with exchange augmentation, exact branch and bound
# ---------------------------------------------------------------------------

def _greedy_fill(H: ThreeGraph, copies: list[YCopy], pair_order: list,
                 prio: Optional[list[int]] = None) -> None:
    """Extend to a maximal tiling, scanning shared pairs in a fixed order.

    Copy ends are chosen by the priority vector, so differently seeded
    orders produce genuinely different maximal tilings.
    """
    avail = H.full_mask
    for c in copies:
        avail &= ~c.vertex_mask
    n = H.n
    progress = True
    while progress:
        progress = False
        for (u, v) in pair_order:
            pm = (1 << u) | (1 << v)
            if pm & ~avail:
                continue
            ends = H._link[u * n + v] & avail & ~pm
            if ends.bit_count() >= 2:
                es = bit_list(ends)
                if prio is not None:
                    es.sort(key=lambda w: prio[w])
                c = YCopy.make(es[0], u, v, es[1])
                copies.append(c)
                avail &= ~c.vertex_mask
                progress = True


def greedy_max_y_tiling(H: ThreeGraph, seed: int = 0) -> YTiling:
    """Maximal tiling from a seeded greedy pass plus exchange augmentation.

    After the greedy pass no Y-copy survives among uncovered vertices;
    the augmentation then applies the two-for-three and three-for-four
    replacements until neither configuration exists.
    """
    rng = random.Random(seed)
    n = H.n
    pair_order = [(u, v) for u in range(n) for v in range(u + 1, n)]
    rng.shuffle(pair_order)
    prio = list(range(n))
    rng.shuffle(prio)
    copies: list[YCopy] = []
    _greedy_fill(H, copies, pair_order, prio)
    tiling = YTiling(tuple(copies))
    while True:
        better = find_forbidden_configuration(H, tiling)
        if better is None:
            return tiling
        copies = list(better.copies)
        _greedy_fill(H, copies, pair_order, prio)
        tiling = YTiling(tuple(copies))


def _copies_through(H: ThreeGraph, v: int, avail: int) -> list[YCopy]:
    """All Y-copies containing v with every vertex available."""
    n = H.n
    out = []
    rest = avail & ~(1 << v)
    # v in the shared pair
    base = v * n
    for q in iter_bits(rest):
        ends = H._link[base + q] & rest & ~(1 << q)
        es = bit_list(ends)
        for i, e1 in enumerate(es):
            for e2 in es[i + 1:]:
                out.append(YCopy.make(e1, v, q, e2))
    # v as an end
    vs = bit_list(rest)
    for i, p in enumerate(vs):
        pb = p * n
        for q in vs[i + 1:]:
            lk = H._link[pb + q]
            if not (lk >> v) & 1:
                continue
            for w in iter_bits(lk & rest & ~(1 << p) & ~(1 << q)):
                out.append(YCopy.make(v, p, q, w))
    return out


def _all_copies(H: ThreeGraph, cap: int) -> Optional[list[YCopy]]:
    """Every Y-copy of H, or None once more than cap have been seen."""
    n = H.n
    out: list[YCopy] = []
    for u in range(n):
        base = u * n
        for v in range(u + 1, n):
            ends = H._link[base + v]
            es = bit_list(ends)
            for i, e1 in enumerate(es):
                for e2 in es[i + 1:]:
                    out.append(YCopy.make(e1, u, v, e2))
                    if len(out) > cap:
                        return None
    return out


def _greedy_hitting_set(copies: list[YCopy], n: int) -> int:
    """Vertex set met by every copy (greedy); bounds any tiling's size."""
    remaining = [c.vertex_mask for c in copies]
    hit = 0
    while remaining:
        counts = [0] * n
        for cm in remaining:
            for w in iter_bits(cm):
                counts[w] += 1
        v = max(range(n), key=lambda w: counts[w])
        hit |= 1 << v
        remaining = [cm for cm in remaining if not (cm >> v) & 1]
    return hit


def exact_max_y_tiling(H: ThreeGraph, budget: int = 2_000_000
                       ) -> tuple[YTiling, bool]:
    """Maximum tiling by branch and bound; optimal=True iff the tree closed.

    Branches on the lowest uncovered vertex: either some copy through it
    is in the tiling, or the vertex stays uncovered.  Two admissible
    bounds prune: a quarter of the remaining available vertices, and the
    remnant of a root hitting set (disjoint copies each consume a hit
    vertex, which is what collapses the near-extremal families).
    """
    pair_order = [(u, v) for u in range(H.n) for v in range(u + 1, H.n)]
    best = 0
    best_copies: tuple = ()
    for s in range(5):
        rng = random.Random(s)
        order = pair_order[:]
        rng.shuffle(order)
        prio = list(range(H.n))
        rng.shuffle(prio)
        init: list[YCopy] = []
        _greedy_fill(H, init, order, prio)
        if len(init) > best:
            best = len(init)
            best_copies = tuple(init)

    copies_all = _all_copies(H, cap=200_000)
    hit_mask = (_greedy_hitting_set(copies_all, H.n)
                if copies_all is not None else H.full_mask)

    nodes = 0
    over = False
    stack: list[YCopy] = []

    def rec(avail: int) -> None:
        nonlocal best, best_copies, nodes, over
        if over:
            return
        nodes += 1
        if nodes > budget:
            over = True
            return
        cur = len(stack)
        if cur > best:
            best = cur
            best_copies = tuple(stack)
        ub = min(avail.bit_count() // 4, (avail & hit_mask).bit_count())
        if cur + ub <= best:
            return
        v = (avail & -avail).bit_length() - 1
        for copy in _copies_through(H, v, avail):
            stack.append(copy)
            rec(avail & ~copy.vertex_mask)
            stack.pop()
            if over:
                return
        rec(avail & ~(1 << v))

    rec(H.full_mask)
    return YTiling(best_copies), not over


# ---------------------------------------------------------------------------
# link classification (Koenig--Egervary on 4x4 bipartite links)
# ---------------------------------------------------------------------------

def classify_bipartite(vi: list[int], vj: list[int],
                       adj: dict[int, list[int]]) -> LinkClass:
    """Classify a bipartite graph on two labeled 4-sets.

    adj maps each vi vertex to its vj neighbors.  Every graph lands in
    exactly one class: at most 6 edges; exactly 7 with a cross cover;
    at least 7 with a one-sided cover; or a matching of size three.
    """
    e = sum(len(adj.get(x, ())) for x in vi)
    if e <= 6:
        return LinkClass(T_LE6, e)
    matching = max_bipartite_matching(vi, adj)
    if len(matching) >= 3:
        wit = tuple(sorted(matching.items())[:3])
        return LinkClass(T_GE7_3, e, matching=wit)
    cover_l, cover_r = min_vertex_cover(vi, vj, adj, matching)
    cover = tuple(sorted((x, "i") for x in cover_l)
                  + sorted((y, "j") for y in cover_r))
    if cover_l and cover_r:
        if e != 7:
            raise AssertionError("cross cover forces exactly 7 edges")
        return LinkClass(T7_1, e, cover=cover)
    return LinkClass(T_GE7_2, e, cover=cover)


def classify_link(H: ThreeGraph, u: int, Vi: int, Vj: int) -> LinkClass:
    """Classify the bipartite link of u between two 4-vertex member sets."""
    if Vi & Vj:
        raise ValueError("member sets must be disjoint")
    if (1 << u) & (Vi | Vj):
        raise ValueError("u must avoid both member sets")
    if Vi.bit_count() != 4 or Vj.bit_count() != 4:
        raise ValueError("member sets must have four vertices")
    vi, vj = bit_list(Vi), bit_list(Vj)
    adj = {x: bit_list(H.link(u, x) & Vj) for x in vi}
    return classify_bipartite(vi, vj, adj)


# ---------------------------------------------------------------------------
# centers graph and extraction of the candidate sparse set
# ---------------------------------------------------------------------------

def analyze_tiling(H: ThreeGraph, tiling: YTiling,
                   params: Optional[Parameters] = None) -> TilingAnalysis:
    """Centers graph, the set C, and the candidate (A, B) extraction.

    The candidate B is V minus C truncated to floor(3n/4) vertices,
    lowest degree first.  Diagnostics (edge counts, Y-freeness of the
    A side, raw link-class counts) are reported, never asserted: the
    quantitative dichotomy belongs to a regime far beyond desk scale.
    """
    if not tiling.is_valid_in(H):
        raise ValueError("invalid tiling for this graph")
    p = params or Parameters()
    n = H.n
    covered = tiling.vertex_mask
    U = H.full_mask & ~covered
    members = [c.vertex_mask for c in tiling.copies]
    mlen = len(members)

    counts = {T_LE6: 0, T7_1: 0, T_GE7_2: 0, T_GE7_3: 0}
    center_hits: dict[tuple[int, int], int] = {}
    for u in iter_bits(U):
        for i in range(mlen):
            for j in range(i + 1, mlen):
                lc = classify_link(H, u, members[i], members[j])
                counts[lc.kind] += 1
                if lc.kind == T7_1:
                    (c1, _), (c2, _) = lc.cover
                    key = (c1, c2) if c1 < c2 else (c2, c1)
                    center_hits[key] = center_hits.get(key, 0) + 1

    G = Graph.empty(n, covered)
    for (v1, v2), hits in center_hits.items():
        if hits >= p.centers_witnesses:
            G.add_edge(v1, v2)

    C = 0
    for v in iter_bits(covered):
        if G.degree(v) >= p.centers_min_degree and any(
                G.degree(w) >= p.centers_neighbor_degree
                for w in iter_bits(G.neighbors(v))):
            C |= 1 << v

    I_C = tuple(i for i in range(mlen) if members[i] & C)
    A_cand = U
    for i in I_C:
        A_cand |= members[i] & ~C

    target = 3 * n // 4
    pool = sorted(bit_list(H.full_mask & ~C),
                  key=lambda v: (H.degree(v), v))
    if len(pool) < target:  # C larger than n/4; pad from C itself
        pool += sorted(bit_list(C), key=lambda v: (H.degree(v), v))
    B_cand = mask_of(pool[:target])

    analysis = TilingAnalysis(tiling, U, G, C, I_C, A_cand, B_cand,
                              class_counts=counts)
    analysis.e_B = H.e_inside(B_cand)
    if A_cand:
        sub, _ = H.induced(A_cand)
        analysis.e_A = sub.num_edges
        analysis.A_is_y_free = is_y_free(sub)
    return analysis


# ---------------------------------------------------------------------------
# exchange augmentations (the two forbidden configurations)
# ---------------------------------------------------------------------------

def _link_pack(H: ThreeGraph, u: int, vi: list[int], vj: list[int]) -> int:
    """16-bit labeled link of u on (vi, vj)."""
    pack = 0
    for a, x in enumerate(vi):
        row = H.link(u, x)
        for b, y in enumerate(vj):
            if (row >> y) & 1:
                pack |= 1 << (a * 4 + b)
    return pack


def find_forbidden_configuration(H: ThreeGraph, tiling: YTiling
                                 ) -> Optional[YTiling]:
    """Strictly larger tiling via the proof's replacement moves, if any.

    Two members go to three copies when six uncovered vertices share a
    link on the pair containing a 3-matching; three members go to four
    copies when two groups of four share one-sided-cover links against a
    common member.  Returns None when neither configuration exists.
    """
    U = H.full_mask & ~tiling.vertex_mask
    u_verts = bit_list(U)
    if len(u_verts) < 6:
        return None
    members = [bit_list(c.vertex_mask) for c in tiling.copies]
    mlen = len(members)

    for i in range(mlen):
        for j in range(i + 1, mlen):
            groups: dict[int, list[int]] = {}
            for u in u_verts:
                pack = _link_pack(H, u, members[i], members[j])
                groups.setdefault(pack, []).append(u)
            for pack, us in groups.items():
                if len(us) < 6:
                    continue
                mt = _pack_matching3(pack, members[i], members[j])
                if mt is None:
                    continue
                new = [c for k, c in enumerate(tiling.copies) if k not in (i, j)]
                for t, (a, b) in enumerate(mt):
                    new.append(YCopy.make(us[2 * t], a, b, us[2 * t + 1]))
                out = YTiling(tuple(new))
                assert out.is_valid_in(H) and out.size > tiling.size
                return out
    return _try_one_sided_exchange(H, tiling, u_verts)


def _pack_matching3(pack: int, vi: list[int], vj: list[int]
                    ) -> Optional[list[tuple[int, int]]]:
    adj = {vi[a]: [vj[b] for b in range(4) if (pack >> (a * 4 + b)) & 1]
           for a in range(4)}
    m = max_bipartite_matching(vi, adj)
    if len(m) < 3:
        return None
    return sorted(m.items())[:3]


def _one_sided_cover(pack: int) -> Optional[tuple[int, int]]:
    """Indices (b1, b2) of a right-side 2-cover of a >=7 edge 4x4 link."""
    if pack.bit_count() < 7:
        return None
    for b1 in range(4):
        for b2 in range(b1 + 1, 4):
            covered = sum((pack >> (a * 4 + b)) & 1
                          for a in range(4) for b in (b1, b2))
            if covered == pack.bit_count():
                return (b1, b2)
    return None


def _try_one_sided_exchange(H: ThreeGraph, tiling: YTiling,
                            u_verts: list[int]) -> Optional[YTiling]:
    """Three members to four copies via paired one-sided-cover groups."""
    if len(u_verts) < 8:
        return None
    members = [bit_list(c.vertex_mask) for c in tiling.copies]
    mlen = len(members)
    # flagged[i]: (other member, cover columns, group, packed link) entries
    flagged: dict[int, list[tuple]] = {}
    for i in range(mlen):
        for k in range(mlen):
            if i == k:
                continue
            groups: dict[int, list[int]] = {}
            for u in u_verts:
                pack = _link_pack(H, u, members[i], members[k])
                groups.setdefault(pack, []).append(u)
            for pack, us in groups.items():
                if len(us) < 4:
                    continue
                cov = _one_sided_cover(pack)
                if cov is not None:
                    flagged.setdefault(i, []).append((k, cov, us, pack))
    for i, lst in flagged.items():
        for a in range(len(lst)):
            for b in range(len(lst)):
                if a == b:
                    continue
                j, covj, us1, pack1 = lst[a]
                k, covk, us2, pack2 = lst[b]
                if j == k:
                    continue
                pick1 = [u for u in us1 if u not in us2][:4]
                pick1 += [u for u in us1 if u not in pick1][:4 - len(pick1)]
                pick2 = [u for u in us2 if u not in pick1][:4]
                if len(pick1) < 4 or len(pick2) < 4:
                    continue
                built = _build_one_sided_copies(
                    H, members[i], members[j], members[k],
                    covj, covk, pick1, pick2)
                if built is None:
                    continue
                new = [c for t, c in enumerate(tiling.copies)
                       if t not in (i, j, k)]
                new.extend(built)
                out = YTiling(tuple(new))
                assert out.is_valid_in(H) and out.size > tiling.size
                return out
    return None


def _build_one_sided_copies(H, vi, vjm, vkm, covj, covk, us1, us2
                            ) -> Optional[list[YCopy]]:
    """Four copies through a split of the common member's four vertices."""
    x1, y1 = (vjm[c] for c in covj)
    x2, y2 = (vkm[c] for c in covk)
    for perm in itertools.permutations(vi):
        a, b, c, d = perm
        if (H.has_edge(us1[0], x1, a) and H.has_edge(us1[1], x1, a)
                and H.has_edge(us1[2], y1, b) and H.has_edge(us1[3], y1, b)
                and H.has_edge(us2[0], x2, c) and H.has_edge(us2[1], x2, c)
                and H.has_edge(us2[2], y2, d) and H.has_edge(us2[3], y2, d)):
            return [YCopy.make(us1[0], x1, a, us1[1]),
                    YCopy.make(us1[2], y1, b, us1[3]),
                    YCopy.make(us2[0], x2, c, us2[1]),
                    YCopy.make(us2[2], y2, d, us2[3])]
    return None
