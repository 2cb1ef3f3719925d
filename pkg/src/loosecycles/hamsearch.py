"""Loose paths and cycles: verification, barrier certificates, exact search.

The searcher anchors on vertex 0 (which every spanning cycle must cover),
then grows a loose path from both open junction ends, always extending the
end with fewer available (middle, junction) continuations.  Refutation by
exhaustion is only ever claimed when the whole tree closed within budget.

Barrier certificates mechanize the two counting arguments that kill the
sharp constructions: a loose Hamilton cycle has n/2 edges and a vertex
outside B lies in at most two of them, so at least n/2 - 2|V \\ B| of its
edges sit entirely inside B.  An independent B with slack >= 1, or a B
whose internal edges all share one fixed pair with slack >= 2, is
therefore impossible to span.  The same counting runs inside the search
tree as a prune, which is what lets the tree close fast on the sharp
families and their solvable neighbors.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass
from typing import Optional

from .core import Parameters, ThreeGraph, bit_list, iter_bits

INDEPENDENT_BARRIER = "independent-barrier"
PAIR_COVER_BARRIER = "pair-cover-barrier"

FOUND = "found"
REFUTED_EXHAUSTIVE = "refuted-exhaustive"
REFUTED_CERTIFICATE = "refuted-certificate"
BUDGET_EXCEEDED = "budget-exceeded"
STAGE_FAILED = "stage-failed"

# run the leftover-coverability prune only below this many open vertices
_COVER_PRUNE_LIMIT = 24


# ---------------------------------------------------------------------------
# path / cycle types and verification
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LoosePath:
    """Vertex sequence v1..v_{2k+1}; edges are the odd-position triples.

    The empty sequence is allowed as a builder marker (no path yet); it is
    never a valid loose path against a graph.
    """

    seq: tuple[int, ...]

    @property
    def is_empty(self) -> bool:
        return not self.seq

    @property
    def ends(self) -> tuple[int, int]:
        return self.seq[0], self.seq[-1]

    @property
    def num_edges(self) -> int:
        return (len(self.seq) - 1) // 2

    def edge_triples(self) -> list[tuple[int, int, int]]:
        s = self.seq
        return [(s[i], s[i + 1], s[i + 2]) for i in range(0, len(s) - 2, 2)]


@dataclass(frozen=True)
class LooseCycle:
    """Cyclic vertex sequence of even length; n'/2 edges, wrap included."""

    seq: tuple[int, ...]

    @property
    def num_edges(self) -> int:
        return len(self.seq) // 2

    def edge_triples(self) -> list[tuple[int, int, int]]:
        s = self.seq
        k = len(s)
        return [(s[i], s[i + 1], s[(i + 2) % k]) for i in range(0, k, 2)]


def loose_path_violation(H: ThreeGraph, seq) -> Optional[str]:
    """First violated path invariant, or None."""
    seq = tuple(seq)
    if len(seq) < 3 or len(seq) % 2 == 0:
        return f"length {len(seq)} is not odd and >= 3"
    if any(not (0 <= v < H.n) for v in seq):
        return "vertex out of range"
    if len(set(seq)) != len(seq):
        return "repeated vertex"
    for i in range(0, len(seq) - 2, 2):
        a, b, c = seq[i], seq[i + 1], seq[i + 2]
        if not H.has_edge(a, b, c):
            return f"missing edge {{{a},{b},{c}}}"
    return None


def loose_cycle_violation(H: ThreeGraph, seq, spanning: bool = False
                          ) -> Optional[str]:
    """First violated cycle invariant, or None."""
    seq = tuple(seq)
    k = len(seq)
    if k < 6 or k % 2 != 0:
        return f"length {k} is not even and >= 6"
    if any(not (0 <= v < H.n) for v in seq):
        return "vertex out of range"
    if len(set(seq)) != k:
        return "repeated vertex"
    for i in range(0, k, 2):
        a, b, c = seq[i], seq[i + 1], seq[(i + 2) % k]
        if not H.has_edge(a, b, c):
            return f"missing edge {{{a},{b},{c}}}"
    if spanning and k != H.n:
        return f"covers {k} of {H.n} vertices"
    return None


def verify_loose_path(H: ThreeGraph, path) -> bool:
    seq = path.seq if isinstance(path, LoosePath) else path
    return loose_path_violation(H, seq) is None


def verify_loose_cycle(H: ThreeGraph, cycle, spanning: bool = False) -> bool:
    seq = cycle.seq if isinstance(cycle, LooseCycle) else cycle
    return loose_cycle_violation(H, seq, spanning=spanning) is None


def verify_loose_hamilton_cycle(H: ThreeGraph, cycle) -> bool:
    return verify_loose_cycle(H, cycle, spanning=True)


# ---------------------------------------------------------------------------
# certificates
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Certificate:
    """Non-Hamiltonicity witness: a barrier set B with its edge structure."""

    kind: str
    B: int  # bitmask
    pair: Optional[tuple[int, int]] = None

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "B": bit_list(self.B)}
        if self.pair is not None:
            d["pair"] = list(self.pair)
        return d


def _barrier_slack(n: int, B: int) -> int:
    # edges of a spanning loose cycle forced inside B
    return n // 2 - 2 * (n - B.bit_count())


def check_certificate(H: ThreeGraph, cert: Certificate) -> bool:
    """Soundly implies no loose Hamilton cycle exists when True."""
    if cert.B & ~H.full_mask or cert.B == 0:
        raise ValueError("certificate set outside vertex range")
    slack = _barrier_slack(H.n, cert.B)
    if cert.kind == INDEPENDENT_BARRIER:
        return slack >= 1 and H.e_inside(cert.B) == 0
    if cert.kind == PAIR_COVER_BARRIER:
        if cert.pair is None:
            raise ValueError("pair-cover certificate without a pair")
        b1, b2 = cert.pair
        if b1 == b2 or not (0 <= b1 < H.n and 0 <= b2 < H.n):
            raise ValueError("malformed pair")
        if not ((cert.B >> b1) & 1 and (cert.B >> b2) & 1):
            return False
        if slack < 2:
            return False
        through_pair = (H.link(b1, b2) & cert.B).bit_count()
        return H.e_inside(cert.B) == through_pair
    raise ValueError(f"unknown certificate kind {cert.kind!r}")


def find_barrier_certificate(H: ThreeGraph, hint_B: Optional[int] = None
                             ) -> Optional[Certificate]:
    """Scan complements of high-degree prefixes (and a hint) for a barrier."""
    n = H.n
    degs = H.degrees()
    order = sorted(range(n), key=lambda v: (-degs[v], v))
    candidates = []
    max_a_ind = (n - 2) // 4       # slack >= 1
    max_a_pair = (n - 4) // 4      # slack >= 2
    for k in range(max(max_a_ind, max_a_pair) + 1):
        A = 0
        for v in order[:k]:
            A |= 1 << v
        candidates.append((k, H.full_mask & ~A))
    if hint_B is not None:
        candidates.append((n - hint_B.bit_count(), hint_B))

    for k, B in candidates:
        if _barrier_slack(n, B) >= 1 and H.e_inside(B) == 0:
            return Certificate(INDEPENDENT_BARRIER, B)
    for k, B in candidates:
        if _barrier_slack(n, B) < 2:
            continue
        common = _common_pair_of_internal_edges(H, B)
        if common is not None:
            return Certificate(PAIR_COVER_BARRIER, B, pair=common)
    return None


def _common_pair_of_internal_edges(H: ThreeGraph, B: int
                                   ) -> Optional[tuple[int, int]]:
    """Two vertices lying in every edge inside B, if such a pair exists."""
    n = H.n
    common = None  # bitmask of vertices present in all internal edges seen
    seen_any = False
    vs = bit_list(B)
    for i, u in enumerate(vs):
        base = u * n
        for v in vs[i + 1:]:
            m = H._link[base + v] & B
            for w in iter_bits(m):
                if w <= v:
                    continue
                edge_mask = (1 << u) | (1 << v) | (1 << w)
                common = edge_mask if not seen_any else common & edge_mask
                seen_any = True
                if common.bit_count() < 2:
                    return None
    if not seen_any:
        return None  # independent case; stronger barrier applies
    b = bit_list(common)
    return (b[0], b[1])


# ---------------------------------------------------------------------------
# search outcome
# ---------------------------------------------------------------------------

@dataclass
class SearchOutcome:
    status: str
    cycle: Optional[LooseCycle] = None
    certificate: Optional[Certificate] = None
    nodes_expanded: int = 0
    millis: float = 0.0
    stage: Optional[str] = None
    trace: Optional[object] = None

    @property
    def found(self) -> bool:
        return self.status == FOUND

    @property
    def refuted(self) -> bool:
        return self.status in (REFUTED_EXHAUSTIVE, REFUTED_CERTIFICATE)

    def to_dict(self) -> dict:
        d = {"status": self.status, "nodes_expanded": self.nodes_expanded,
             "millis": round(self.millis, 3)}
        if self.cycle is not None:
            d["cycle"] = list(self.cycle.seq)
        if self.certificate is not None:
            d["certificate"] = self.certificate.to_dict()
        if self.stage is not None:
            d["stage"] = self.stage
        if self.trace is not None:
            d["trace"] = self.trace.to_dict()
        return d


# ---------------------------------------------------------------------------
# exact backtracking search
# ---------------------------------------------------------------------------

def _backtrack_hamilton(H: ThreeGraph, budget: int
                        ) -> tuple[Optional[tuple], int, bool]:
    """Exhaustive loose-Hamilton-cycle search.

    Returns (cycle sequence or None, nodes expanded, budget hit).  The
    first edge always covers vertex 0, under every choice of its middle
    vertex; the remaining tree extends whichever open end branches least.
    """
    n = H.n
    link = H._link
    full = H.full_mask
    target_edges = n // 2
    nodes = 0
    over = False
    path: deque = deque()

    # counting prune: take a low-degree set B whose internal edges either
    # vanish or all pass through one fixed pair.  Every other edge meets
    # A = V \ B; an available A-vertex lies in at most two future edges,
    # an open end in at most one, and the pair admits at most one future
    # internal edge (two would share both its vertices).
    ac_mask = None
    pair_mask = 0
    if n >= 10:  # the probe only pays for itself beyond trivial trees
        degs = H.degrees()
        by_degree = sorted(range(n), key=lambda v: (-degs[v], v))
        probe_B = full
        e_probe = H.num_edges
        for k in range(n // 3 + 1):
            if e_probe == 0:
                ac_mask = full ^ probe_B
                break
            common = _common_pair_of_internal_edges(H, probe_B)
            if common is not None:
                ac_mask = full ^ probe_B
                pair_mask = (1 << common[0]) | (1 << common[1])
                break
            v = by_degree[k]
            e_probe -= H.deg_into(v, probe_B)
            probe_B &= ~(1 << v)

    def continuations(e: int, avail: int) -> int:
        base = e * n
        s = 0
        for m in iter_bits(avail):
            s += (link[base + m] & avail & ~(1 << m)).bit_count()
        return s

    def coverable(avail: int, ends_mask: int) -> bool:
        pool = avail | ends_mask
        for w in iter_bits(avail):
            base = w * n
            rest = pool & ~(1 << w)
            ok = False
            for x in iter_bits(rest):
                if link[base + x] & rest & ~(1 << x):
                    ok = True
                    break
            if not ok:
                return False
        return True

    def extend(a: int, b: int, avail: int, edges_left: int) -> bool:
        nonlocal nodes, over
        nodes += 1
        if nodes > budget:
            over = True
            return False
        if edges_left == 1:
            w = link[a * n + b] & avail
            if w:
                path.append((w & -w).bit_length() - 1)
                return True
            return False
        if ac_mask is not None:
            cover = 2 * (avail & ac_mask).bit_count()
            cover += (ac_mask >> a) & 1
            cover += (ac_mask >> b) & 1
            if pair_mask and not pair_mask & ~(avail | (1 << a) | (1 << b)):
                cover += 1
            if edges_left > cover:
                return False
        ca = continuations(a, avail)
        if ca == 0:
            return False
        cb = continuations(b, avail)
        if cb == 0:
            return False
        if avail.bit_count() <= _COVER_PRUNE_LIMIT and \
                not coverable(avail, (1 << a) | (1 << b)):
            return False
        at_right = not (cb < ca or (cb == ca and b < a))
        e = b if at_right else a
        base = e * n
        for m in iter_bits(avail):
            js = link[base + m] & avail & ~(1 << m)
            for j in iter_bits(js):
                nxt = avail & ~(1 << m) & ~(1 << j)
                if at_right:
                    path.append(m)
                    path.append(j)
                    if extend(a, j, nxt, edges_left - 1):
                        return True
                    path.pop()
                    path.pop()
                else:
                    path.appendleft(m)
                    path.appendleft(j)
                    if extend(j, b, nxt, edges_left - 1):
                        return True
                    path.popleft()
                    path.popleft()
                if over:
                    return False
        return False

    # roots: the edge covering vertex 0, with every middle designation
    link0 = link[0:n]
    # vertex 0 as the middle of the first edge: ends x < y
    for x in range(1, n):
        ys = link0[x] >> (x + 1)
        y = x + 1
        while ys:
            low = ys & -ys
            yy = y + low.bit_length() - 1
            ys ^= low
            avail = full & ~1 & ~(1 << x) & ~(1 << yy)
            path.clear()
            path.extend((x, 0, yy))
            if extend(x, yy, avail, target_edges - 1):
                return tuple(path), nodes, over
            if over:
                return None, nodes, True
    # vertex 0 as a junction of the first edge {0, m, j}
    for m in range(1, n):
        js = link0[m] & ~(1 << m) & ~1
        for j in iter_bits(js):
            avail = full & ~1 & ~(1 << m) & ~(1 << j)
            path.clear()
            path.extend((0, m, j))
            if extend(0, j, avail, target_edges - 1):
                return tuple(path), nodes, over
            if over:
                return None, nodes, True
    return None, nodes, False


def find_loose_hamilton_cycle(
    H: ThreeGraph,
    params: Optional[Parameters] = None,
    use_certificates: bool = True,
    hint_B: Optional[int] = None,
) -> SearchOutcome:
    """Certificate-first exact decision for loose Hamiltonicity.

    Found outcomes carry a verified cycle; RefutedExhaustive is reported
    only when the backtracking tree closed within the node budget.
    """
    if H.n % 2 != 0:
        raise ValueError("loose Hamilton cycles need an even vertex count")
    if H.n < 6:
        raise ValueError("need n >= 6")
    budget = params.search_node_budget if params else 2_000_000
    t0 = time.perf_counter()
    if use_certificates:
        cert = find_barrier_certificate(H, hint_B=hint_B)
        if cert is not None:
            return SearchOutcome(REFUTED_CERTIFICATE, certificate=cert,
                                 millis=(time.perf_counter() - t0) * 1e3)
    seq, nodes, over = _backtrack_hamilton(H, budget)
    millis = (time.perf_counter() - t0) * 1e3
    if seq is not None:
        cycle = LooseCycle(seq)
        bad = loose_cycle_violation(H, seq, spanning=True)
        if bad is not None:
            raise AssertionError(f"searcher produced an invalid cycle: {bad}")
        return SearchOutcome(FOUND, cycle=cycle, nodes_expanded=nodes,
                             millis=millis)
    if over:
        return SearchOutcome(BUDGET_EXCEEDED, nodes_expanded=nodes,
                             millis=millis)
    return SearchOutcome(REFUTED_EXHAUSTIVE, nodes_expanded=nodes,
                         millis=millis)


# ---------------------------------------------------------------------------
# generic two-edge connector
# ---------------------------------------------------------------------------

def find_loose_path_between(H: ThreeGraph, u: int, v: int,
                            forbidden: int = 0,
                            budget: Optional[int] = None
                            ) -> Optional[LoosePath]:
    """A 5-vertex loose path u, b1, a, b2, v avoiding a forbidden set."""
    if u == v:
        raise ValueError("distinct endpoints required")
    if (1 << u) & forbidden or (1 << v) & forbidden:
        raise ValueError("endpoints must avoid the forbidden set")
    n = H.n
    blocked = forbidden | (1 << u) | (1 << v)
    avail = H.full_mask & ~blocked
    scanned = 0
    for a in iter_bits(avail):
        if budget is not None and scanned >= budget:
            return None
        scanned += 1
        pool = avail & ~(1 << a)
        l1 = H.link(u, a) & pool
        l2 = H.link(a, v) & pool
        if not l1 or not l2:
            continue
        b1 = (l1 & -l1).bit_length() - 1
        l2x = l2 & ~(1 << b1)
        if l2x:
            b2 = (l2x & -l2x).bit_length() - 1
            return LoosePath((u, b1, a, b2, v))
        l1x = l1 & ~l2  # l2 is a single bit equal to the only b1 choice
        if l1x:
            b1 = (l1x & -l1x).bit_length() - 1
            b2 = (l2 & -l2).bit_length() - 1
            return LoosePath((u, b1, a, b2, v))
    return None


# ---------------------------------------------------------------------------
# greedy almost-spanning path in a degree-regular tripartite triple
# ---------------------------------------------------------------------------

def greedy_tripartite_path(H: ThreeGraph, V1: int, V2: int, V3: int,
                           d: float, eps: float) -> LoosePath:
    """Greedy loose path through (V1, V2, V3) with |V2| = 2|V1| = 2|V3|.

    Junctions alternate V1/V3 and middles come from V2.  Each new junction
    must keep its forward pair-degree above (d - eps) times the product of
    the two pools it will draw from next, which is the invariant that
    keeps the greedy construction alive; growth stops once some part's
    remainder drops below (2 eps / d) of the part.  The caller interprets
    the omitted-vertex bound; the path itself is always structurally valid.
    """
    if V1 & V2 or V1 & V3 or V2 & V3:
        raise ValueError("parts must be disjoint")
    m = V1.bit_count()
    if V3.bit_count() != m or V2.bit_count() != 2 * m or m == 0:
        raise ValueError("parts must have sizes m, 2m, m")
    if not (d > 2 * eps > 0):
        raise ValueError("need d > 2*eps > 0")

    need = d - eps
    stop13 = (2 * eps / d) * m
    stop2 = (2 * eps / d) * 2 * m

    start = None
    for v in iter_bits(V1):
        if H.deg_cross(v, V2, V3) >= need * (2 * m) * m:
            start = v
            break
    if start is None:
        return LoosePath(())

    seq = [start]
    used = 1 << start
    cur, cur_part, other_part = start, V1, V3
    while True:
        if ((V1 & ~used).bit_count() < stop13
                or (V3 & ~used).bit_count() < stop13
                or (V2 & ~used).bit_count() < stop2):
            break
        u2 = V2 & ~used
        uo = other_part & ~used
        ucur = cur_part & ~used
        u2_size = u2.bit_count()
        ucur_size = ucur.bit_count()
        found = None
        base = cur * H.n
        for mid in iter_bits(u2):
            js = H._link[base + mid] & uo
            for j in iter_bits(js):
                if H.deg_cross(j, u2, ucur) >= need * u2_size * ucur_size:
                    found = (mid, j)
                    break
            if found:
                break
        if found is None:
            break
        mid, j = found
        seq.append(mid)
        seq.append(j)
        used |= (1 << mid) | (1 << j)
        cur = j
        cur_part, other_part = other_part, cur_part
    return LoosePath(tuple(seq))
