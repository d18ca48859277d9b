import itertools

import networkx as nx
import pytest
from hypothesis import given
from hypothesis import strategies as st

from reference import brute_force_mis_check
from spacelca.entropy import Entropy
from spacelca.errors import LoadError, ParameterError
from spacelca.graph import Graph, load_graph, verify_mis
from spacelca.harness.generators import gen_graph, gen_hypergraph_cycle
from spacelca.hypergraph import BLUE, RED, Hypergraph, load_hypergraph, verify_coloring


def test_cycle_generator_shapes():
    h = gen_hypergraph_cycle(3, 3)
    assert h.m == 6 and h.N == 3 and h.k == 3
    assert all(len(h.dependency_neighbors(e)) == 2 for e in range(3))
    big = gen_hypergraph_cycle(1000, 19)
    assert big.m == 18000 and big.d == 2 and big.k == 19
    for e in range(big.N):
        f = (e + 1) % big.N
        assert len(set(big.edges[e]) & set(big.edges[f])) == 1
    assert big.dependency_neighbors(500) == [499, 501]


@pytest.mark.parametrize("N,k", [(2, 3), (3, 2)])
def test_cycle_generator_errors(N, k):
    with pytest.raises(ParameterError):
        gen_hypergraph_cycle(N, k)


def test_cycle_roundtrips_through_loader():
    h = gen_hypergraph_cycle(40, 19)
    back = load_hypergraph(h.dumps())
    assert back == h and back.d == 2


def test_single_edge_loads_with_d0():
    h = load_hypergraph("H 3 1 3 0\n0 1 2\n")
    assert h.d == 0 and h.dependency_neighbors(0) == []


def test_shared_pair_listed_once():
    h = load_hypergraph("H 4 2 3 1\n0 1 2\n1 2 3\n")
    assert h.dependency_neighbors(0) == [1] and h.dependency_neighbors(1) == [0]


@pytest.mark.parametrize(
    "text,line,msg",
    [
        ("H 4 2 3 1\n0 1 2\n1 2\n", 3, "non-uniform edge"),
        ("H 4 1 3 0\n0 1 1\n", 2, "duplicate vertex"),
        ("H 4 1 3 0\n0 1 7\n", 2, "dangling"),
        ("H 5 3 3 0\n0 1 2\n2 3 4\n0 3 4\n", 2, "intersection degree"),
        ("X 1 2\n", 1, "header"),
        ("H 4 2 3 1\n0 1 2\n", 1, "declares 2 edges"),
    ],
)
def test_hypergraph_load_errors_name_line(text, line, msg):
    with pytest.raises(LoadError, match=msg) as exc:
        load_hypergraph(text)
    assert exc.value.line == line and str(exc.value).startswith(f"line {line}:")


def test_verify_coloring_examples():
    h = gen_hypergraph_cycle(4, 3)
    assert verify_coloring(h, [RED] * h.m) == (False, 0)
    two = Hypergraph.build(4, [[0, 1], [2, 3]])
    assert verify_coloring(two, [RED, BLUE, RED, BLUE]) == (True, None)
    with pytest.raises(ParameterError):
        verify_coloring(h, [RED] * (h.m - 1))


@given(st.integers(3, 12), st.integers(3, 6), st.data())
def test_verify_coloring_matches_definition(N, k, data):
    h = gen_hypergraph_cycle(N, k)
    colors = data.draw(st.lists(st.sampled_from([RED, BLUE]), min_size=h.m, max_size=h.m))
    mono = [e for e in range(h.N) if len({colors[v] for v in h.edges[e]}) == 1]
    ok, witness = verify_coloring(h, colors)
    assert ok == (not mono)
    assert witness == (mono[0] if mono else None)


def test_gen_graph_examples():
    assert list(gen_graph(10, 0, 1.0, Entropy("01")).edges()) == []
    assert list(gen_graph(2, 1, 1.0, Entropy("01")).edges()) == [(0, 1)]
    g = gen_graph(10**4, 8, 1.0, Entropy("02"))
    assert g.max_degree <= 8 and g.d == 8
    assert g.n == 10**4 and sum(1 for _ in g.edges()) > 30000


def test_gen_graph_replays():
    a = gen_graph(500, 5, 0.7, Entropy("03"))
    b = gen_graph(500, 5, 0.7, Entropy("03"))
    assert a == b


def test_graph_roundtrip_and_errors():
    g = gen_graph(200, 4, 1.0, Entropy("04"))
    assert load_graph(g.dumps()) == g
    assert load_graph("G 3 1\n0 1\n1 0\n").adj == ((1,), (0,), ())
    for text, line in [("G 3 1\n0 1\n1 2\n", 3), ("G 3 2\n0 0\n", 2), ("G 3 2\n0 5\n", 2), ("graph\n", 1)]:
        with pytest.raises(LoadError) as exc:
            load_graph(text)
        assert exc.value.line == line


def test_verify_mis_examples():
    path = Graph.from_edges(3, [(0, 1), (1, 2)])
    assert verify_mis(path, [False] * 3) == (False, 0)
    assert verify_mis(Graph.from_edges(4, []), [True] * 4) == (True, None)
    assert verify_mis(path, [True, False, True]) == (True, None)
    assert verify_mis(path, [True, True, False])[0] is False


@given(st.integers(1, 9), st.data())
def test_verify_mis_matches_brute_force(n, data):
    pairs = list(itertools.combinations(range(n), 2))
    edges = data.draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    member = data.draw(st.lists(st.booleans(), min_size=n, max_size=n))
    g = Graph.from_edges(n, edges)
    assert verify_mis(g, member)[0] == brute_force_mis_check(n, edges, member)


@given(st.integers(1, 9), st.data())
def test_networkx_maximal_independent_sets_verify(n, data):
    pairs = list(itertools.combinations(range(n), 2))
    edges = data.draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    G = nx.Graph()
    G.add_nodes_from(range(n))
    G.add_edges_from(edges)
    chosen = set(nx.maximal_independent_set(G, seed=n))
    assert verify_mis(Graph.from_edges(n, edges), [v in chosen for v in range(n)]) == (True, None)
