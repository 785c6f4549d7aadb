import json
from itertools import combinations

import networkx as nx
import numpy as np
import pytest

from runcube.errors import CapacityError, DomainError
from runcube.graph import (
    APEX,
    bfs_connected,
    build_graph,
    decompose,
    decomposition_edge_total,
    edge_count_closed_form,
    edge_count_difference,
    edge_recursion_check,
    fibcube_edge_count,
    injection_phi_check,
    is_isomorphic_small,
)
from runcube.series import fib

EDGES = [1, 2, 5, 10, 19, 36, 66, 120, 215, 382, 673, 1178]

PRINTED_DECOMPOSITIONS = {
    1: "0R_0 + 1R_0",
    2: "0R_1 + 10R_0",
    3: "0R_2 + 100R_0 + 110R_0",
    4: "0R_3 + 100R_1 + 1100R_0",
    5: "0R_4 + 100R_2 + 11000R_0 + 11100R_0",
    6: "0R_5 + 100R_3 + 11000R_1 + 111000R_0",
    7: "0R_6 + 100R_4 + 11000R_2 + 1110000R_0 + 1111000R_0",
    8: "0R_7 + 100R_5 + 11000R_3 + 1110000R_1 + 11110000R_0",
}


def pairwise_edges(g):
    """Independent O(V^2) edge oracle: Hamming distance one."""
    lab = [int(b) for b in g.labels]
    return sorted(
        (i, j) for i, j in combinations(range(len(lab)), 2) if bin(lab[i] ^ lab[j]).count("1") == 1
    )


@pytest.mark.parametrize("family, n, nv, ne", [("run", 4, 8, 10), ("run", 1, 2, 1), ("fibcube", 5, 13, 20), ("run", 0, 1, 0)])
def test_build_examples(family, n, nv, ne):
    g = build_graph(family, n)
    assert (g.num_vertices, g.edge_count) == (nv, ne)


@pytest.mark.parametrize("n", range(0, 11))
@pytest.mark.parametrize("family", ["run", "fibcube"])
def test_edges_match_pairwise_oracle(family, n):
    g = build_graph(family, n)
    assert [tuple(e) for e in g.edges.tolist()] == pairwise_edges(g)


@pytest.mark.parametrize("n", range(1, 13))
def test_csr_invariants(n):
    g = build_graph("run", n)
    for i in range(g.num_vertices):
        nb = g.neighbors(i)
        assert (np.diff(nb) > 0).all() and i not in nb
        for j in nb:
            assert g.has_edge(int(j), i)
            assert bin(int(g.labels[i]) ^ int(g.labels[j])).count("1") == 1
    assert g.degrees.sum() == 2 * g.edge_count
    assert bfs_connected(g)
    assert (g.degrees >= 1).all()


def test_graph_is_immutable():
    g = build_graph("run", 5)
    with pytest.raises(ValueError):
        g.indices[0] = 3


def test_capacity_and_domain():
    with pytest.raises(CapacityError):
        build_graph("run", 31)
    with pytest.raises(DomainError):
        build_graph("run", -1)
    with pytest.raises(DomainError):
        edge_count_closed_form(0)


@pytest.mark.parametrize("n", range(1, 25))
def test_edge_counts_three_ways(n):
    e = build_graph("run", n).edge_count
    assert e == edge_count_closed_form(n)
    if n >= 5:
        assert e == edge_count_difference(n)
        assert e < build_graph("fibcube", n).edge_count
    else:
        assert e == build_graph("fibcube", n).edge_count


def test_edge_series_prefix():
    assert [edge_count_closed_form(n) for n in range(1, 13)] == EDGES


@pytest.mark.parametrize("n", range(0, 25))
def test_fibcube_edge_formula(n):
    assert fibcube_edge_count(n) == build_graph("fibcube", n).edge_count


def test_edge_recursion():
    assert edge_recursion_check(16).ok
    assert 10 == 5 + 2 + fib(3) + fib(1)
    assert 36 == 19 + 10 + fib(5) + fib(3)


def test_edge_recursion_reports_failure():
    counts = {n: edge_count_closed_form(n) for n in range(2, 9)}
    counts[7] += 1
    assert edge_recursion_check(8, counts).first_failure == 7


@pytest.mark.parametrize("n", sorted(PRINTED_DECOMPOSITIONS))
def test_decomposition_formula_matches_print(n):
    assert decompose(build_graph("run", n)).formula() == PRINTED_DECOMPOSITIONS[n]


@pytest.mark.parametrize("n", range(1, 17))
def test_decomposition_audit(n):
    rep = decompose(build_graph("run", n))
    assert sum(p.size for p in rep.parts) + 1 == fib(n + 2)
    assert sum(rep.internal_edges.values()) + sum(rep.cross_edges.values()) == rep.edge_count
    for (a, b), c in rep.cross_edges.items():
        if a == APEX:
            continue
        if a == 0:
            assert c == fib(n - 2 * b + 1)
        else:
            assert b == a + 1 and c == fib(n - 2 * a - 1)


def test_decomposition_apex_neighbours():
    rep = decompose(build_graph("run", 5))
    assert rep.apex == "11100"
    assert rep.apex_neighbors == ["01100", "11000"]


@pytest.mark.parametrize("n", range(5, 17))
def test_assembled_edge_total(n):
    assert decomposition_edge_total(n) == edge_count_closed_form(n)


def test_decompose_rejects_fibcube():
    with pytest.raises(DomainError):
        decompose(build_graph("fibcube", 4))


@pytest.mark.parametrize("n", range(2, 15))
def test_injection(n):
    res = injection_phi_check(build_graph("run", n))
    assert res.ok, res.counterexample


@pytest.mark.parametrize("n", range(1, 5))
def test_small_isomorphism(n):
    g, h = build_graph("run", n), build_graph("fibcube", n)
    assert is_isomorphic_small(g, h)
    gx = nx.Graph(g.edges.tolist())
    hx = nx.Graph(h.edges.tolist())
    assert nx.is_isomorphic(gx, hx)


@pytest.mark.parametrize("n", range(5, 8))
def test_not_isomorphic_beyond_four(n):
    assert not is_isomorphic_small(build_graph("run", n), build_graph("fibcube", n))


def test_exports():
    g = build_graph("run", 3)
    dot = g.to_dot()
    assert dot.count("--") == 5 and dot.count(";\n") == 10
    data = json.loads(g.to_json())
    assert data == {
        "family": "run",
        "n": 3,
        "vertices": ["000", "001", "010", "100", "110"],
        "edges": [[0, 1], [0, 2], [0, 3], [2, 4], [3, 4]],
    }
    assert build_graph("run", 1).to_csv() == "0,1\n"
    assert g.to_dot() == build_graph("run", 3).to_dot()


def test_index_of():
    g = build_graph("run", 4)
    assert g.index_of("1100") == 7
    assert g.index_of("1010") == -1
    assert g.index_of("110") == -1
