"""Maximum bipartite matching and minimum vertex cover on small graphs.

Kuhn's augmenting-path algorithm: deterministic for a fixed vertex order,
so callers wanting varied matchings pass shuffled orders.  Cover extraction
is the standard alternating-reachability argument from a maximum matching,
so matching size always equals cover size.
"""

from __future__ import annotations

from typing import Hashable, Optional, Sequence


def max_bipartite_matching(
    left: Sequence[Hashable],
    adj: dict,
    order: Optional[Sequence[Hashable]] = None,
) -> dict:
    """Maximum matching as a left->right dict.

    adj maps each left vertex to an iterable of right vertices; ``order``
    overrides the augmentation order of the left side.
    """
    match_r: dict = {}
    match_l: dict = {}

    def try_augment(u, seen: set) -> bool:
        for w in adj.get(u, ()):
            if w in seen:
                continue
            seen.add(w)
            if w not in match_r or try_augment(match_r[w], seen):
                match_r[w] = u
                match_l[u] = w
                return True
        return False

    for u in (order if order is not None else left):
        try_augment(u, set())
    return match_l


def min_vertex_cover(
    left: Sequence[Hashable],
    right: Sequence[Hashable],
    adj: dict,
    matching: dict,
) -> tuple[set, set]:
    """Minimum vertex cover (cover_left, cover_right) from a maximum matching."""
    match_r = {w: u for u, w in matching.items()}
    unmatched = [u for u in left if u not in matching]
    seen_l = set(unmatched)
    seen_r: set = set()
    stack = list(unmatched)
    while stack:
        u = stack.pop()
        for w in adj.get(u, ()):
            if w in seen_r:
                continue
            seen_r.add(w)
            u2 = match_r.get(w)
            if u2 is not None and u2 not in seen_l:
                seen_l.add(u2)
                stack.append(u2)
    cover_l = {u for u in left if u not in seen_l}
    cover_r = {w for w in right if w in seen_r}
    return cover_l, cover_r


def perfect_matching_randomized(
    left: Sequence[Hashable],
    adj: dict,
    rng,
    restarts: int = 8,
) -> Optional[dict]:
    """Perfect matching of the left side, trying shuffled orders.

    Kuhn's algorithm always finds a maximum matching, so a single pass
    decides existence; extra shuffled passes only vary which perfect
    matching is returned.
    """
    n = len(left)
    for _ in range(max(1, restarts)):
        order = list(left)
        rng.shuffle(order)
        shuffled_adj = {}
        for u in order:
            nbrs = list(adj.get(u, ()))
            rng.shuffle(nbrs)
            shuffled_adj[u] = nbrs
        m = max_bipartite_matching(left, shuffled_adj, order=order)
        if len(m) == n:
            return m
    m = max_bipartite_matching(left, adj)
    return m if len(m) == n else None
