import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from echosim.graph import (DirectedGraph, FormatError, GraphError, RewireError,
                           TriadCensus, in_degree_ccdf, induced_subgraph,
                           k_core, largest_strongly_connected_component,
                           load_edge_list, random_directed_graph,
                           save_edge_list, strongly_connected_components,
                           triad_census, weakly_connected_components)

from conftest import brute_triads, graph_from_edges, random_graph


# -- construction -------------------------------------------------------------

def test_add_edge_rejects_self_loop():
    g = DirectedGraph(3)
    with pytest.raises(GraphError):
        g.add_edge(1, 1)


def test_add_edge_rejects_duplicate():
    g = DirectedGraph(3)
    g.add_edge(0, 1)
    with pytest.raises(GraphError):
        g.add_edge(0, 1)


def test_negative_node_count_rejected():
    with pytest.raises(GraphError):
        DirectedGraph(-1)


def test_copy_is_independent():
    g = graph_from_edges(3, [(0, 1), (1, 2)])
    h = g.copy()
    h.rewire_edge(0, 1, 2)
    assert g.has_edge(0, 1) and not g.has_edge(0, 2)
    assert h.has_edge(0, 2) and not h.has_edge(0, 1)


# -- random sampling ----------------------------------------------------------

def test_random_graph_saturated_two_nodes():
    g = random_directed_graph(2, 2, random.Random(0))
    assert g.sorted_edges() == [(0, 1), (1, 0)]


def test_random_graph_empty():
    g = random_directed_graph(5, 0, random.Random(0))
    assert g.edge_count == 0
    assert g.sorted_edges() == []


def test_random_graph_counts():
    g = random_directed_graph(100, 400, random.Random(7))
    assert g.edge_count == 400
    assert sum(len(g.out[u]) for u in range(100)) == 400
    assert sum(len(g.inn[u]) for u in range(100)) == 400
    assert all(u != v for u, v in g.edges())


def test_random_graph_dense_branch_matches_count():
    # e > n(n-1)/2 exercises the shuffle fallback
    g = random_directed_graph(10, 80, random.Random(3))
    assert g.edge_count == 80
    assert len(set(g.edges())) == 80


def test_random_graph_bad_edge_count():
    with pytest.raises(GraphError):
        random_directed_graph(3, 7, random.Random(0))


def test_random_graph_deterministic_per_seed():
    a = random_directed_graph(30, 120, random.Random(42))
    b = random_directed_graph(30, 120, random.Random(42))
    assert a.sorted_edges() == b.sorted_edges()


# -- rewiring -----------------------------------------------------------------

def test_rewire_moves_edge():
    g = graph_from_edges(3, [(0, 1)])
    g.rewire_edge(0, 1, 2)
    assert g.sorted_edges() == [(0, 2)]
    assert g.inn[1] == set() and g.inn[2] == {0}


def test_rewire_to_existing_friend_rejected():
    g = graph_from_edges(3, [(0, 1), (0, 2)])
    with pytest.raises(RewireError):
        g.rewire_edge(0, 1, 2)


def test_rewire_self_loop_rejected():
    g = graph_from_edges(3, [(0, 1)])
    with pytest.raises(RewireError):
        g.rewire_edge(0, 1, 0)


def test_rewire_missing_edge_rejected():
    g = graph_from_edges(3, [(0, 1)])
    with pytest.raises(RewireError):
        g.rewire_edge(1, 0, 2)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 32 - 1))
def test_rewire_sequences_preserve_structure(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 12)
    e = rng.randint(1, n * (n - 1) // 2)
    g = random_graph(rng, n, e)
    out_degrees = [len(g.out[u]) for u in range(n)]
    for _ in range(50):
        u = rng.randrange(n)
        if not g.out[u]:
            continue
        old = rng.choice(sorted(g.out[u]))
        pool = [v for v in range(n) if v != u and v not in g.out[u]]
        if not pool:
            continue
        g.rewire_edge(u, old, rng.choice(pool))
        assert g.edge_count == e
        assert [len(g.out[w]) for w in range(n)] == out_degrees
        edges = list(g.edges())
        assert len(edges) == len(set(edges)) == e
        assert all(a != b for a, b in edges)
        # the two adjacency indexes always mirror each other
        assert all(a in g.inn[b] for a, b in edges)


# -- components ---------------------------------------------------------------

def test_wcc_two_pairs():
    g = graph_from_edges(4, [(0, 1), (2, 3)])
    assert weakly_connected_components(g) == [[0, 1], [2, 3]]


def test_wcc_ring_is_single_component():
    g = graph_from_edges(5, [(i, (i + 1) % 5) for i in range(5)])
    assert weakly_connected_components(g) == [list(range(5))]


def test_wcc_empty_graph_all_singletons():
    g = DirectedGraph(3)
    assert weakly_connected_components(g) == [[0], [1], [2]]


def test_wcc_ignores_direction():
    g = graph_from_edges(3, [(0, 1), (2, 1)])
    assert weakly_connected_components(g) == [[0, 1, 2]]


def test_scc_mutual_pair():
    g = graph_from_edges(4, [(0, 1), (1, 0), (1, 2)])
    scc, old_ids = largest_strongly_connected_component(g)
    assert old_ids == [0, 1]
    assert scc.sorted_edges() == [(0, 1), (1, 0)]


def test_scc_cycle_is_whole_graph():
    g = graph_from_edges(3, [(0, 1), (1, 2), (2, 0)])
    scc, old_ids = largest_strongly_connected_component(g)
    assert old_ids == [0, 1, 2]
    assert scc.edge_count == 3


def test_scc_dag_tie_breaks_to_min_id():
    g = graph_from_edges(4, [(0, 1), (1, 2), (2, 3)])
    _scc, old_ids = largest_strongly_connected_component(g)
    assert old_ids == [0]


def test_scc_partition_covers_all_nodes():
    rng = random.Random(5)
    g = random_graph(rng, 10, 25)
    comps = strongly_connected_components(g)
    flat = sorted(u for comp in comps for u in comp)
    assert flat == list(range(10))


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 32 - 1))
def test_scc_of_scc_is_itself(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 10)
    e = rng.randint(1, n * (n - 1))
    g = random_graph(rng, n, e)
    scc, _ids = largest_strongly_connected_component(g)
    again, ids2 = largest_strongly_connected_component(scc)
    assert ids2 == list(range(scc.n))
    assert again.sorted_edges() == scc.sorted_edges()


# -- k-core ---------------------------------------------------------------------

def test_k_core_triangle_survives_k2():
    g = graph_from_edges(3, [(0, 1), (1, 2), (2, 0)])
    core, old_ids = k_core(g, 2)
    assert old_ids == [0, 1, 2]
    assert core.edge_count == 3


def test_k_core_star_collapses_at_k2():
    g = graph_from_edges(5, [(1, 2), (1, 3), (1, 4)])
    core, old_ids = k_core(g, 2)
    assert old_ids == []
    assert core.n == 0


def test_k_core_zero_keeps_everything():
    g = graph_from_edges(4, [(0, 1)])
    core, old_ids = k_core(g, 0)
    assert old_ids == [0, 1, 2, 3]
    assert core.edge_count == 1


def test_k_core_negative_k_rejected():
    with pytest.raises(GraphError):
        k_core(DirectedGraph(2), -1)


@settings(max_examples=40, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 32 - 1),
       st.integers(min_value=0, max_value=5))
def test_k_core_idempotent(seed, k):
    rng = random.Random(seed)
    n = rng.randint(2, 10)
    e = rng.randint(0, n * (n - 1))
    g = random_graph(rng, n, e)
    core, _ = k_core(g, k)
    twice, ids = k_core(core, k)
    assert ids == list(range(core.n))
    assert twice.sorted_edges() == core.sorted_edges()
    # definition check: every surviving node meets the degree floor
    for u in range(core.n):
        assert len(core.out[u]) + len(core.inn[u]) >= k


# -- induced subgraph -----------------------------------------------------------

def test_induced_subgraph_remaps_densely():
    g = graph_from_edges(5, [(0, 3), (3, 4), (4, 0), (1, 2)])
    sub, old_ids = induced_subgraph(g, [0, 3, 4])
    assert old_ids == [0, 3, 4]
    assert sub.sorted_edges() == [(0, 1), (1, 2), (2, 0)]


# -- triads ----------------------------------------------------------------------

def test_triad_feed_forward_counts_one_closed():
    g = graph_from_edges(3, [(0, 1), (0, 2), (2, 1)])
    census = triad_census(g)
    assert census.closed == 1
    assert census == TriadCensus(*brute_triads(g))


def test_triad_empty_graph():
    census = triad_census(DirectedGraph(4))
    assert (census.closed, census.open) == (0, 0)
    assert census.fraction == 0.0


def test_triad_complete_graph_all_closed():
    g = graph_from_edges(3, [(u, v) for u in range(3) for v in range(3) if u != v])
    census = triad_census(g)
    assert census.open == 0
    assert census.closed == 6  # every ordered triplet of 3 nodes
    assert census.fraction == 1.0


def test_triad_two_node_graph():
    g = graph_from_edges(2, [(0, 1), (1, 0)])
    assert triad_census(g) == TriadCensus(0, 0)


@settings(max_examples=150, deadline=None)
@given(st.integers(min_value=0, max_value=2 ** 32 - 1))
def test_triad_census_matches_brute_force(seed):
    rng = random.Random(seed)
    n = rng.randint(3, 7)
    e = rng.randint(0, n * (n - 1))
    g = random_graph(rng, n, e)
    census = triad_census(g)
    closed, opened = brute_triads(g)
    assert (census.closed, census.open) == (closed, opened)
    assert census.closed + census.open <= n * (n - 1) * (n - 2)


# -- degree distribution ----------------------------------------------------------

def test_in_degree_ccdf_hand_example():
    g = graph_from_edges(3, [(0, 1), (2, 1)])
    assert in_degree_ccdf(g) == [(0, 1.0), (1, 1 / 3), (2, 1 / 3)]


def test_in_degree_ccdf_empty():
    assert in_degree_ccdf(DirectedGraph(0)) == [(0, 1.0)]
    assert in_degree_ccdf(DirectedGraph(3)) == [(0, 1.0)]


def test_in_degree_ccdf_ring():
    g = graph_from_edges(4, [(i, (i + 1) % 4) for i in range(4)])
    assert in_degree_ccdf(g) == [(0, 1.0), (1, 1.0)]


def test_in_degree_ccdf_monotone():
    g = random_graph(random.Random(9), 20, 60)
    ccdf = in_degree_ccdf(g)
    fractions = [f for _d, f in ccdf]
    assert fractions[0] == 1.0
    assert all(a >= b for a, b in zip(fractions, fractions[1:]))


# -- edge-list I/O -----------------------------------------------------------------

def test_edge_list_roundtrip(tmp_path):
    g = random_graph(random.Random(1), 8, 20)
    path = tmp_path / "edges.txt"
    save_edge_list(g, path)
    loaded, ids = load_edge_list(path)
    assert loaded.n == 8
    assert len(ids) == 8
    # ids are remapped in first-appearance order; compare through the mapping
    expected = {(ids[str(u)], ids[str(v)]) for u, v in g.edges()}
    assert set(loaded.edges()) == expected


def test_edge_list_string_ids_and_comments(tmp_path):
    path = tmp_path / "edges.txt"
    path.write_text("# retweet graph\nalice bob\nbob carol extra fields\n\n"
                    "alice bob\ncarol carol\n")
    g, ids = load_edge_list(path)
    assert set(ids) == {"alice", "bob", "carol"}
    # duplicate and self-loop lines are dropped
    assert g.edge_count == 2
    assert g.has_edge(ids["alice"], ids["bob"])
    assert g.has_edge(ids["bob"], ids["carol"])


def test_edge_list_malformed_line_reports_position(tmp_path):
    path = tmp_path / "edges.txt"
    path.write_text("a b\nlonely\n")
    with pytest.raises(FormatError) as err:
        load_edge_list(path)
    assert ":2:" in str(err.value)


def test_edge_list_named_save_roundtrip(tmp_path):
    path = tmp_path / "edges.txt"
    path.write_text("u1 u2\nu2 u3\n")
    g, ids = load_edge_list(path)
    out = tmp_path / "out.txt"
    save_edge_list(g, out, id_map=ids)
    text = out.read_text()
    assert "u1\tu2" in text and "u2\tu3" in text
