import itertools
import random

import pytest

from loosecycles.core import Parameters, ThreeGraph, bit_list, build_graph, mask_of
from loosecycles.constructions import build_H1, build_H2, random_graph
from loosecycles.hamsearch import (BUDGET_EXCEEDED, INDEPENDENT_BARRIER,
                                   PAIR_COVER_BARRIER, REFUTED_CERTIFICATE,
                                   REFUTED_EXHAUSTIVE, Certificate, LoosePath,
                                   check_certificate, find_barrier_certificate,
                                   find_loose_hamilton_cycle,
                                   find_loose_path_between,
                                   greedy_tripartite_path, loose_path_violation,
                                   verify_loose_cycle, verify_loose_path)


def complete(n):
    return build_graph(n, itertools.combinations(range(n), 3))


# -- verification ------------------------------------------------------------

def test_verify_cycle_k6():
    k6 = complete(6)
    assert verify_loose_cycle(k6, (0, 1, 2, 3, 4, 5))
    assert not verify_loose_cycle(k6, (0, 1, 2, 3, 4, 0))
    assert not verify_loose_cycle(k6, (0, 1, 2, 3))
    assert verify_loose_cycle(k6, (0, 1, 2, 3, 4, 5), spanning=True)


def test_verify_path():
    k6 = complete(6)
    assert verify_loose_path(k6, (0, 1, 2))
    assert verify_loose_path(k6, (0, 1, 2, 3, 4))
    assert not verify_loose_path(k6, (0, 1))
    assert not verify_loose_path(k6, (0, 1, 2, 3))
    g = build_graph(6, [(0, 1, 2)])
    assert loose_path_violation(g, (0, 1, 2, 3, 4)).startswith("missing edge")
    assert not verify_loose_path(g, LoosePath(()))


def test_h1_6_has_no_spanning_cycle_exhaustively():
    h1 = build_H1(6)
    for perm in itertools.permutations(range(6)):
        assert not verify_loose_cycle(h1.graph, perm, spanning=True)


# -- certificates ------------------------------------------------------------

def test_check_certificate_examples():
    h1 = build_H1(10)
    assert check_certificate(h1.graph, Certificate(INDEPENDENT_BARRIER, h1.B))
    k6 = complete(6)
    assert not check_certificate(
        k6, Certificate(INDEPENDENT_BARRIER, mask_of([0, 1, 2, 3])))
    h2 = build_H2(8)
    assert check_certificate(
        h2.graph, Certificate(PAIR_COVER_BARRIER, h2.B, pair=h2.special_pair))
    # malformed certificates raise
    with pytest.raises(ValueError):
        check_certificate(k6, Certificate(PAIR_COVER_BARRIER, k6.full_mask))
    with pytest.raises(ValueError):
        check_certificate(k6, Certificate("bogus", k6.full_mask))


def test_certificates_are_sound_at_n6():
    # every barrier the scanner finds must coincide with exhaustive refutation
    rng = random.Random(5)
    triples = list(itertools.combinations(range(6), 3))
    for _ in range(3000):
        mask = rng.getrandbits(20)
        g = ThreeGraph.from_edges(
            6, [triples[i] for i in range(20) if (mask >> i) & 1])
        cert = find_barrier_certificate(g)
        if cert is not None:
            assert check_certificate(g, cert)
            assert find_loose_hamilton_cycle(
                g, use_certificates=False).status == REFUTED_EXHAUSTIVE


# -- the searcher ------------------------------------------------------------

def test_complete_graphs_are_hamiltonian():
    for n in range(6, 41, 2):
        g = complete(n)
        out = find_loose_hamilton_cycle(g)
        assert out.found
        assert verify_loose_cycle(g, out.cycle, spanning=True)


def test_wrap_edge_is_checked():
    # all cycle edges except the wrapping one
    seq = (0, 1, 2, 3, 4, 5)
    edges = [(0, 1, 2), (2, 3, 4)]
    g = build_graph(6, edges)
    assert not verify_loose_cycle(g, seq)
    g2 = build_graph(6, edges + [(0, 4, 5)])
    assert verify_loose_cycle(g2, seq)


def test_isolated_anchor_refutes_immediately():
    g = build_graph(8, [t for t in itertools.combinations(range(8), 3)
                        if 0 not in t])
    out = find_loose_hamilton_cycle(g, use_certificates=False)
    assert out.status == REFUTED_EXHAUSTIVE
    assert out.nodes_expanded == 0


def test_connector_budget():
    k10 = complete(10)
    assert find_loose_path_between(k10, 0, 1, budget=0) is None
    assert find_loose_path_between(k10, 0, 1, budget=1) is not None


def test_h1_h2_refutations():
    h1 = build_H1(10)
    out = find_loose_hamilton_cycle(h1.graph)
    assert out.status == REFUTED_CERTIFICATE
    assert out.certificate.kind == INDEPENDENT_BARRIER
    assert out.certificate.B.bit_count() == 8

    h2 = build_H2(8)
    out2 = find_loose_hamilton_cycle(h2.graph)
    assert out2.status == REFUTED_CERTIFICATE
    assert out2.certificate.kind == PAIR_COVER_BARRIER

    # the counting prunes close the trees of both families quickly
    for n in (6, 10, 14):
        g = build_H1(n).graph
        assert find_loose_hamilton_cycle(
            g, use_certificates=False).status == REFUTED_EXHAUSTIVE
    for n in (8, 12, 16):
        g = build_H2(n).graph
        assert find_loose_hamilton_cycle(
            g, use_certificates=False).status == REFUTED_EXHAUSTIVE


def test_searcher_finds_on_near_extremal_family():
    from loosecycles.constructions import build_H1_plus
    for n in (16, 18, 24, 28):
        lp = build_H1_plus(n)
        out = find_loose_hamilton_cycle(lp.graph)
        assert out.found and out.nodes_expanded < 50_000
        assert verify_loose_cycle(lp.graph, out.cycle, spanning=True)


def test_searcher_rejects_odd_or_tiny_n():
    with pytest.raises(ValueError):
        find_loose_hamilton_cycle(complete(7))
    with pytest.raises(ValueError):
        find_loose_hamilton_cycle(build_graph(4, []))


def test_budget_exceeded_is_reported():
    g = complete(14)
    # remove one vertex's edges so no cycle exists; force a deep search
    g2 = build_graph(14, [e for e in g.edges if 13 not in e])
    out = find_loose_hamilton_cycle(g2, Parameters(search_node_budget=50),
                                    use_certificates=False)
    assert out.status == BUDGET_EXCEEDED
    assert out.nodes_expanded > 50


def test_oracle_agreement_random_n6():
    rng = random.Random(123)
    triples = list(itertools.combinations(range(6), 3))
    cases = [rng.getrandbits(20) for _ in range(10000)]
    for mask in cases:
        g = ThreeGraph.from_edges(
            6, [triples[i] for i in range(20) if (mask >> i) & 1])
        a = find_loose_hamilton_cycle(g)
        b = find_loose_hamilton_cycle(g, use_certificates=False)
        assert a.found == b.found
    for lp in (build_H1(6), build_H2(8)):
        a = find_loose_hamilton_cycle(lp.graph)
        b = find_loose_hamilton_cycle(lp.graph, use_certificates=False)
        assert a.refuted and b.refuted


def test_oracle_agreement_n8_mask_oracle():
    # independent oracle: the 5040 edge-triple masks of loose Hamilton
    # cycles on eight labeled vertices
    triples = list(itertools.combinations(range(8), 3))
    tid = {t: i for i, t in enumerate(triples)}
    masks = set()
    for perm in itertools.permutations(range(8)):
        m = 0
        for i in range(0, 8, 2):
            e = tuple(sorted((perm[i], perm[i + 1], perm[(i + 2) % 8])))
            m |= 1 << tid[e]
        masks.add(m)
    assert len(masks) == 5040
    rng = random.Random(555)
    for trial in range(400):
        p = rng.choice([0.05, 0.1, 0.15, 0.2, 0.3, 0.5])
        g = random_graph(8, p, seed=trial)
        gm = 0
        for e in g.edges:
            gm |= 1 << tid[e]
        oracle = any(gm & m == m for m in masks)
        assert find_loose_hamilton_cycle(g).found == oracle
        assert find_loose_hamilton_cycle(
            g, use_certificates=False).found == oracle


def test_isomorphism_invariance():
    rng = random.Random(77)
    for trial in range(1000):
        n = rng.choice([6, 8, 10])
        g = random_graph(n, rng.choice([0.1, 0.25, 0.45]), seed=trial)
        perm = list(range(n))
        rng.shuffle(perm)
        h = g.relabeled(perm)
        assert (find_loose_hamilton_cycle(g).found
                == find_loose_hamilton_cycle(h).found)


# -- two-edge connector -------------------------------------------------------

def test_connector_in_h1():
    h1 = build_H1(6)
    b = bit_list(h1.B)
    p = find_loose_path_between(h1.graph, b[0], b[1])
    assert p is not None and verify_loose_path(h1.graph, p)
    a = bit_list(h1.A)[0]
    assert p.seq[2] == a  # the middle junction must be the A-vertex


def test_connector_dense_with_forbidden():
    k10 = complete(10)
    forb = mask_of([5, 6, 7, 8, 9])
    p = find_loose_path_between(k10, 0, 1, forbidden=forb)
    assert p is not None and verify_loose_path(k10, p)
    assert mask_of(p.seq) & forb == 0


def test_connector_absent_in_empty_graph():
    g = build_graph(8, [])
    assert find_loose_path_between(g, 0, 1) is None


def test_connector_validates_endpoints():
    k10 = complete(10)
    with pytest.raises(ValueError):
        find_loose_path_between(k10, 3, 3)
    with pytest.raises(ValueError):
        find_loose_path_between(k10, 0, 1, forbidden=mask_of([0]))


# -- greedy tripartite path ---------------------------------------------------

def tripartite_parts(m):
    V1 = mask_of(range(m))
    V2 = mask_of(range(m, 3 * m))
    V3 = mask_of(range(3 * m, 4 * m))
    return V1, V2, V3


def complete_tripartite(m):
    triples = []
    for a in range(m):
        for b in range(m, 3 * m):
            for c in range(3 * m, 4 * m):
                triples.append((a, b, c))
    return build_graph(4 * m, triples)


def random_tripartite(m, p, seed):
    rng = random.Random(seed)
    triples = []
    for a in range(m):
        for b in range(m, 3 * m):
            for c in range(3 * m, 4 * m):
                if rng.random() < p:
                    triples.append((a, b, c))
    return build_graph(4 * m, triples)


def check_pattern(path, V1, V2, V3):
    for idx, v in enumerate(path.seq, start=1):
        if idx % 2 == 0:
            assert (V2 >> v) & 1
        elif idx % 4 == 1:
            assert (V1 >> v) & 1
        else:
            assert (V3 >> v) & 1


def test_greedy_path_complete_instance():
    m = 20
    g = complete_tripartite(m)
    V1, V2, V3 = tripartite_parts(m)
    path = greedy_tripartite_path(g, V1, V2, V3, d=1.0, eps=0.01)
    assert verify_loose_path(g, path)
    check_pattern(path, V1, V2, V3)
    assert 4 * m - len(path.seq) <= 3


def test_greedy_path_empty_graph():
    m = 5
    g = build_graph(4 * m, [])
    V1, V2, V3 = tripartite_parts(m)
    path = greedy_tripartite_path(g, V1, V2, V3, d=0.5, eps=0.1)
    assert path.is_empty


def test_greedy_path_random_instances():
    m, d, eps = 50, 0.8, 0.1
    bound = 8 * eps * m / d + 3
    V1, V2, V3 = tripartite_parts(m)
    for seed in range(5):
        g = random_tripartite(m, 0.8, seed)
        path = greedy_tripartite_path(g, V1, V2, V3, d=d, eps=eps)
        assert verify_loose_path(g, path)
        check_pattern(path, V1, V2, V3)
        assert 4 * m - len(path.seq) <= bound


def test_greedy_path_validates_parts():
    g = complete_tripartite(3)
    V1, V2, V3 = tripartite_parts(3)
    with pytest.raises(ValueError):
        greedy_tripartite_path(g, V1, V2, V1, 0.5, 0.1)
    with pytest.raises(ValueError):
        greedy_tripartite_path(g, V1, V2, V3, 0.1, 0.2)
