"""Graph parsing, generators, and the near-complete subgraph search."""

import itertools

import pytest

from hadamard_powers.graphs import (
    Graph,
    GraphParseError,
    band,
    complete,
    complete_bipartite,
    connected_components,
    cycle,
    generate,
    graph_from_json,
    graph_to_json,
    induced_subgraph,
    max_near_complete_order,
    max_near_complete_order_fast,
    max_outerplanar,
    near_complete,
    parse_edge_list,
    path,
    random_chordal,
    random_graph,
    random_tree,
    split_graph,
    to_edge_list,
)


def test_parse_basic_path():
    g = parse_edge_list("1 2\n2 3")
    assert g.n == 3
    assert g.sorted_edges() == [(1, 2), (2, 3)]


def test_parse_four_cycle():
    g = parse_edge_list("1 2\n2 3\n3 4\n1 4")
    assert g == cycle(4)


def test_parse_header_isolated_vertex():
    g = parse_edge_list("n 3\n1 2")
    assert g.n == 3
    assert g.sorted_edges() == [(1, 2)]
    assert g.degree(3) == 0


def test_parse_comments_blanks_and_duplicates():
    g = parse_edge_list("# a comment\n\n1 2  # trailing\n2 1\n")
    assert g.n == 2
    assert g.sorted_edges() == [(1, 2)]


@pytest.mark.parametrize("text,fragment", [
    ("1 2 3", "line 1"),
    ("1 2\nfoo bar", "line 2"),
    ("0 2", "positive"),
    ("2 2", "self-loop"),
    ("n 2\n1 3", "exceeds"),
])
def test_parse_errors_carry_line_numbers(text, fragment):
    with pytest.raises(GraphParseError, match=fragment):
        parse_edge_list(text)


def test_serialize_roundtrip():
    samples = [complete(4), cycle(5), parse_edge_list("n 6\n1 2"), path(1),
               random_graph(7, 0.4, seed=3)]
    for g in samples:
        assert parse_edge_list(to_edge_list(g)) == g
        assert graph_from_json(graph_to_json(g)) == g


def test_generate_examples():
    assert len(generate("complete", n=3).edges) == 3
    assert len(generate("near_complete", n=4).edges) == 5
    b = generate("band", n=5, d=2)
    assert b.sorted_edges() == [(i, j) for i in range(1, 6) for j in range(i + 1, 6)
                                if j - i <= 2]
    assert len(b.edges) == 7


def test_generate_family_counts():
    for n in range(3, 8):
        assert len(complete(n).edges) == n * (n - 1) // 2
        assert len(cycle(n).edges) == n
        assert band(n, n - 1) == complete(n)
    assert len(complete_bipartite(2, 3).edges) == 6
    assert len(max_outerplanar(6).edges) == 2 * 6 - 3


def test_generate_bad_parameters():
    with pytest.raises(ValueError):
        cycle(2)
    with pytest.raises(ValueError):
        band(5, 6)
    with pytest.raises(ValueError):
        generate("no_such_family", n=3)
    with pytest.raises(ValueError):
        split_graph(3, 2, 3, seed=0)  # attach degree must stay below clique size


def test_seeded_generators_reproducible():
    for gen, kwargs in [(random_tree, {"n": 9}),
                        (random_chordal, {"n": 9, "density": 0.6}),
                        (split_graph, {"clique_size": 4, "independent_size": 3,
                                       "attach_degrees": 2})]:
        assert gen(seed=5, **kwargs) == gen(seed=5, **kwargs)
        # trees on >= 4 vertices: different seeds eventually differ
    assert any(random_tree(8, seed=a) != random_tree(8, seed=b)
               for a, b in [(0, 1), (1, 2), (2, 3)])


def test_tree_is_a_tree():
    for seed in range(6):
        t = random_tree(8, seed=seed)
        assert len(t.edges) == 7
        assert len(connected_components(t)) == 1


def test_induced_subgraph():
    tri, mapping = induced_subgraph(complete(3), {1, 2})
    assert tri == path(2) and mapping == {1: 1, 2: 2}
    p, _ = induced_subgraph(cycle(4), {1, 2, 3})
    assert p == path(3)
    t, _ = induced_subgraph(complete(5), {2, 4, 5})
    assert t == complete(3)
    with pytest.raises(ValueError):
        induced_subgraph(complete(3), {0, 1})


def test_near_complete_order_examples():
    for n in range(2, 7):
        assert max_near_complete_order(complete(n)) == n
    for seed in range(4):
        assert max_near_complete_order(random_tree(6, seed=seed)) == 3
    assert max_near_complete_order(Graph.from_edges(2, [])) == 2
    assert max_near_complete_order(cycle(4)) == 3
    assert max_near_complete_order(complete_bipartite(2, 3)) == 3
    assert max_near_complete_order(near_complete(6)) == 6


def test_near_complete_order_rejects_single_vertex():
    with pytest.raises(ValueError):
        max_near_complete_order(Graph.from_edges(1, []))
    with pytest.raises(ValueError):
        max_near_complete_order_fast(Graph.from_edges(1, []))


def test_fast_matches_bruteforce_on_random_graphs():
    checked = 0
    for n in range(2, 10):
        for seed in range(64):
            g = random_graph(n, 0.15 + 0.07 * (seed % 10), seed=seed)
            assert max_near_complete_order_fast(g) == max_near_complete_order(g)
            checked += 1
    assert checked >= 500


def test_fast_matches_bruteforce_on_families():
    family_members = [complete(5), near_complete(6), cycle(6), path(5),
                      random_tree(7, seed=2), complete_bipartite(3, 3),
                      band(7, 3), split_graph(4, 3, 2, seed=1),
                      generate("apollonian", n=7, seed=2), max_outerplanar(7),
                      random_chordal(8, 0.6, seed=4)]
    for g in family_members:
        assert max_near_complete_order_fast(g) == max_near_complete_order(g)


def test_adding_an_edge_never_decreases_order():
    for seed in range(10):
        g = random_graph(7, 0.35, seed=seed)
        r = max_near_complete_order(g)
        missing = [e for e in itertools.combinations(range(1, 8), 2)
                   if e not in g.edges]
        if not missing:
            continue
        g2 = Graph.from_edges(7, set(g.edges) | {missing[seed % len(missing)]})
        assert max_near_complete_order(g2) >= r
