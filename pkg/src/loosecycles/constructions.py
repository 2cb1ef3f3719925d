"""Generators: threshold formula, the two extremal examples, a solvable
near-extremal family, and seeded random instances.

The structured families build their pair-link tables directly instead of
enumerating triples; at n = 200 the H2 family has ~760k edges and listing
them would dominate every caller that only wants degrees.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from .core import ThreeGraph, binom2, mask_of


@dataclass(frozen=True)
class LabeledPartitionGraph:
    """A ThreeGraph together with its defining partition V = A + B."""

    graph: ThreeGraph
    A: int  # bitmask
    B: int  # bitmask
    special_pair: Optional[tuple[int, int]] = None  # (b1, b2) for the pair family
    e_in_B: Optional[int] = None  # actual planted e(B), reported by random_extremal


def threshold(n: int) -> int:
    """Exact minimum vertex degree forcing a loose Hamilton cycle.

    binom(n-1, 2) - binom(floor(3n/4), 2) + c with c = 2 when 4 | n and
    c = 1 otherwise.
    """
    if n % 2 != 0 or n < 6:
        raise ValueError("threshold needs even n >= 6")
    c = 2 if n % 4 == 0 else 1
    return binom2(n - 1) - binom2(3 * n // 4) + c


def _partition_link_table(n: int, a_size: int) -> tuple[list[int], int, int]:
    """Link table for 'all triples meeting A', A = [0, a_size)."""
    full = (1 << n) - 1
    a_mask = (1 << a_size) - 1
    b_mask = full ^ a_mask
    link = [0] * (n * n)
    for u in range(n):
        row = u * n
        um = 1 << u
        for v in range(u + 1, n):
            vm = 1 << v
            if (um & a_mask) or (vm & a_mask):
                w = full & ~um & ~vm
            else:
                w = a_mask
            link[row + v] = w
            link[v * n + u] = w
    return link, a_mask, b_mask


def build_H1(n: int) -> LabeledPartitionGraph:
    """|A| = ceil(n/4) - 1, |B| = floor(3n/4) + 1, edges = triples meeting A.

    Degree-sharp (threshold - 1) exactly when n = 2 mod 4; other even n
    are accepted because the tiling and partition suites use the family
    at n in 4N as well.
    """
    if n % 2 != 0 or n < 6:
        raise ValueError("build_H1 needs even n >= 6")
    a_size = (n + 3) // 4 - 1
    link, a_mask, b_mask = _partition_link_table(n, a_size)
    return LabeledPartitionGraph(ThreeGraph.from_link_table(n, link), a_mask, b_mask)


def build_H2(n: int) -> LabeledPartitionGraph:
    """|A| = n/4 - 1 plus all triples through one fixed pair b1, b2 in B."""
    if n % 4 != 0 or n < 8:
        raise ValueError("build_H2 needs n divisible by 4, n >= 8")
    a_size = n // 4 - 1
    link, a_mask, b_mask = _partition_link_table(n, a_size)
    full = (1 << n) - 1
    b1, b2 = a_size, a_size + 1  # two fixed vertices of B
    link[b1 * n + b2] = link[b2 * n + b1] = full & ~(1 << b1) & ~(1 << b2)
    for v in range(a_size + 2, n):
        extra1 = a_mask | (1 << b2)
        extra2 = a_mask | (1 << b1)
        link[b1 * n + v] = link[v * n + b1] = extra1 & ~(1 << v)
        link[b2 * n + v] = link[v * n + b2] = extra2 & ~(1 << v)
    return LabeledPartitionGraph(ThreeGraph.from_link_table(n, link),
                                 a_mask, b_mask, special_pair=(b1, b2))


def build_H1_plus(n: int) -> LabeledPartitionGraph:
    """Solvable analogue of the first family: |A| = ceil(n/4).

    One vertex more than the sharp construction, so the counting barrier
    vanishes (2|A| >= n/2) and a loose Hamilton cycle exists with the
    A-vertices at every other junction.
    """
    if n % 2 != 0 or n < 8:
        raise ValueError("build_H1_plus needs even n >= 8")
    a_size = (n + 3) // 4
    link, a_mask, b_mask = _partition_link_table(n, a_size)
    return LabeledPartitionGraph(ThreeGraph.from_link_table(n, link), a_mask, b_mask)


def random_graph(n: int, p: float, seed: int) -> ThreeGraph:
    """Each triple present independently with probability p."""
    if not (0.0 <= p <= 1.0):
        raise ValueError("p must be a probability")
    if n < 1:
        raise ValueError("n must be positive")
    rng = random.Random(seed)
    triples = []
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                if rng.random() < p:
                    triples.append((a, b, c))
    return ThreeGraph.from_edges(n, triples)


def random_extremal(n: int, beta: float, seed: int, q: float = 0.98
                    ) -> LabeledPartitionGraph:
    """Planted near-extremal instance with known partition.

    B is a random set of floor(3n/4) vertices.  Triples inside B appear
    with probability tuned so e(B) stays below beta * n^3 with room to
    spare (target mean is half the budget); triples meeting A appear with
    probability q >= 0.9, keeping degrees near the threshold regime.
    """
    if n < 6:
        raise ValueError("n too small")
    if q < 0.9:
        raise ValueError("q must be at least 0.9")
    rng = random.Random(seed)
    b_size = 3 * n // 4
    b_verts = sorted(rng.sample(range(n), b_size))
    b_mask = mask_of(b_verts)
    full = (1 << n) - 1
    a_mask = full ^ b_mask
    inner = b_size * (b_size - 1) * (b_size - 2) // 6
    p_in = min(1.0, beta * n ** 3 / (2 * inner)) if inner else 0.0
    triples = []
    e_in = 0
    for a in range(n):
        for b in range(a + 1, n):
            for c in range(b + 1, n):
                if (1 << a) & b_mask and (1 << b) & b_mask and (1 << c) & b_mask:
                    if rng.random() < p_in:
                        triples.append((a, b, c))
                        e_in += 1
                elif rng.random() < q:
                    triples.append((a, b, c))
    g = ThreeGraph.from_edges(n, triples)
    return LabeledPartitionGraph(g, a_mask, b_mask, e_in_B=e_in)


def is_beta_extremal(g: ThreeGraph, B: int, beta: float) -> bool:
    """Does B witness beta-extremality (right size, few internal edges)?"""
    if B.bit_count() != 3 * g.n // 4:
        return False
    return g.e_inside(B) <= beta * g.n ** 3
