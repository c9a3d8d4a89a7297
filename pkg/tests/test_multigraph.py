import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hitchin_supports.multigraph import (
    GraphError,
    HitchinPartition,
    Multigraph,
    build_dual_graph,
    contract_edge,
    cycle_space,
    delete_edge,
    delta_aff,
    double_edges,
    graph_from_json,
    graph_to_json,
)

from conftest import complete_graph, parallel_graph


def path_graph(n: int) -> Multigraph:
    return Multigraph(n, tuple((i, i + 1, i) for i in range(n - 1)))


# ---------------------------------------------------------------------------
# dual graphs
# ---------------------------------------------------------------------------


def test_dual_graph_two_parts_genus_two():
    g = build_dual_graph(HitchinPartition(2, (1, 1)))
    assert g.vertex_count == 2
    assert g.edge_count == 2
    assert all((u, v) == (0, 1) for u, v, _ in g.edges)


def test_dual_graph_three_parts_genus_two():
    g = build_dual_graph(HitchinPartition(2, (1, 1, 1)))
    assert g.vertex_count == 3
    assert g.edge_count == 6
    classes = g.edge_classes()
    assert {pair: len(labs) for pair, labs in classes.items()} == {
        (0, 1): 2,
        (0, 2): 2,
        (1, 2): 2,
    }


def test_dual_graph_single_part_has_no_edges():
    g = build_dual_graph(HitchinPartition(3, (2,)))
    assert g.vertex_count == 1
    assert g.edge_count == 0


def test_dual_graph_labels_are_lexicographic():
    g = build_dual_graph(HitchinPartition(2, (2, 1, 1)))
    # pair (0,1): 2*1*2 = 4 edges first, then (0,2): 4, then (1,2): 2
    expected_pairs = [(0, 1)] * 4 + [(0, 2)] * 4 + [(1, 2)] * 2
    ordered = sorted(g.edges, key=lambda e: e[2])
    assert [(u, v) for u, v, _ in ordered] == expected_pairs
    assert [lab for _, _, lab in ordered] == list(range(10))


def test_partition_validation():
    with pytest.raises(GraphError):
        HitchinPartition(1, (1, 1))
    with pytest.raises(GraphError):
        HitchinPartition(2, (1, 2))
    with pytest.raises(GraphError):
        HitchinPartition(2, ())
    p = HitchinPartition(2, (3, 2, 2, 1))
    assert p.n == 8
    assert p.k == 4
    assert p.multiplicities() == {3: 1, 2: 2, 1: 1}


# ---------------------------------------------------------------------------
# delta invariant
# ---------------------------------------------------------------------------


def test_delta_on_tree_is_zero():
    assert delta_aff(path_graph(4)) == 0


def test_delta_on_dual_graph_matches_sphere_case():
    g = build_dual_graph(HitchinPartition(2, (1, 1)))
    assert delta_aff(g) == 1  # 2g-3 at g=2


def test_delta_on_k4():
    assert delta_aff(complete_graph(4)) == 3


@given(
    st.integers(min_value=2, max_value=6),
    st.lists(st.integers(min_value=1, max_value=4), min_size=1, max_size=5),
)
@settings(max_examples=60, deadline=None)
def test_delta_formula_against_graph(genus, raw_parts):
    parts = tuple(sorted(raw_parts, reverse=True))
    if sum(parts) > 8:
        parts = parts[:2]
    p = HitchinPartition(genus, parts)
    g = build_dual_graph(p)
    expected = (
        sum(
            p.parts[i] * p.parts[j] * (2 * genus - 2)
            for i in range(p.k)
            for j in range(i + 1, p.k)
        )
        - p.k
        + 1
    )
    assert delta_aff(g) == expected


def test_delta_invariant_under_relabeling():
    g = complete_graph(4)
    shuffled = Multigraph(
        4, tuple((v, u, 100 - lab) for u, v, lab in g.edges)
    )
    assert delta_aff(shuffled) == delta_aff(g)


# ---------------------------------------------------------------------------
# doubling and contraction
# ---------------------------------------------------------------------------


def test_double_single_edge():
    g = Multigraph(2, ((0, 1, 0),))
    doubled, label_map = double_edges(g, {0})
    assert doubled.edge_count == 2
    assert label_map == {0: 1}
    assert doubled.edge_classes() == {(0, 1): [0, 1]}


def test_double_whole_triangle():
    doubled, label_map = double_edges(complete_graph(3), {0, 1, 2})
    assert doubled.vertex_count == 3
    assert doubled.edge_count == 6
    assert sorted(label_map.values()) == [3, 4, 5]


def test_double_nothing_is_identity():
    g = complete_graph(3)
    doubled, label_map = double_edges(g, set())
    assert doubled == g
    assert label_map == {}


def test_double_unknown_label():
    with pytest.raises(GraphError, match="no such edge"):
        double_edges(complete_graph(3), {9})


def test_contract_two_cycle_gives_loop():
    g = parallel_graph(2)
    out = contract_edge(g, 0)
    assert out.vertex_count == 1
    assert out.edges == ((0, 0, 1),)


def test_contract_loop_just_deletes_it():
    g = Multigraph(1, ((0, 0, 5),))
    out = contract_edge(g, 5)
    assert out.vertex_count == 1
    assert out.edge_count == 0


def test_contract_tree_edge_of_path():
    g = path_graph(3)
    out = contract_edge(g, 0)
    assert out.vertex_count == 2
    assert out.edge_count == 1


def _canonical_form(g: Multigraph):
    """Tiny isomorphism invariant-or-certificate for small graphs."""
    best = None
    for perm in itertools.permutations(range(g.vertex_count)):
        pairs = sorted(
            tuple(sorted((perm[u], perm[v]))) for u, v, _ in g.edges
        )
        key = tuple(pairs)
        if best is None or key < best:
            best = key
    return (g.vertex_count, best)


def test_delete_contract_commute_on_disjoint_edges():
    g = complete_graph(4)
    a = contract_edge(delete_edge(g, 5), 0)
    b = delete_edge(contract_edge(g, 0), 5)
    assert _canonical_form(a) == _canonical_form(b)


# ---------------------------------------------------------------------------
# cycle space
# ---------------------------------------------------------------------------


def test_cycle_space_of_tree_is_empty():
    basis = cycle_space(path_graph(4))
    assert basis.rank == 0
    assert basis.cycles == ()


def test_cycle_space_two_parallel_edges():
    basis = cycle_space(parallel_graph(2))
    assert basis.forest == frozenset({0})
    assert basis.chords == (1,)
    # +1 on the defining chord, the unique cycle up to sign
    assert basis.cycles[0] == {1: 1, 0: -1}


def test_cycle_space_k4_fundamental_cycles():
    g = complete_graph(4)
    basis = cycle_space(g)
    assert basis.rank == delta_aff(g) == 3
    by_label = {lab: (u, v) for u, v, lab in g.edges}
    for chord, cyc in zip(basis.chords, basis.cycles):
        assert cyc[chord] == 1
        assert len(cyc) <= 4  # chord plus at most 3 tree edges
        # each cycle vector is a 1-cycle: its boundary vanishes
        boundary = [0] * g.vertex_count
        for lab, coeff in cyc.items():
            u, v = by_label[lab]
            boundary[v] += coeff
            boundary[u] -= coeff
        assert not any(boundary)


def test_cycle_count_matches_delta_and_pairing_invertible():
    from fractions import Fraction

    for g in (complete_graph(4), parallel_graph(3), complete_graph(3)):
        basis = cycle_space(g)
        assert basis.rank == delta_aff(g)
        gram = [list(map(Fraction, row)) for row in basis.pairing_matrix()]
        n = len(gram)
        # Gaussian elimination determinant-nonzero check
        rank = 0
        for col in range(n):
            piv = next((r for r in range(rank, n) if gram[r][col]), None)
            if piv is None:
                continue
            gram[rank], gram[piv] = gram[piv], gram[rank]
            for r in range(n):
                if r != rank and gram[r][col]:
                    f = gram[r][col] / gram[rank][col]
                    gram[r] = [x - f * y for x, y in zip(gram[r], gram[rank])]
            rank += 1
        assert rank == n


def test_cocycle_quotient_rows_are_cycle_vectors():
    g = parallel_graph(3)
    basis = cycle_space(g)
    labels = g.labels()
    quotient = basis.cocycle_quotient(labels)
    assert len(quotient) == 2
    for row, cyc in zip(quotient, basis.cycles):
        assert row == tuple(cyc.get(lab, 0) for lab in labels)


# ---------------------------------------------------------------------------
# JSON round trips
# ---------------------------------------------------------------------------


def test_json_round_trip_is_bit_exact():
    g = complete_graph(4)
    text = graph_to_json(g)
    again = graph_from_json(text)
    assert again == g
    assert graph_to_json(again) == text


def test_json_loader_assigns_labels_by_position():
    g = graph_from_json('{"vertices": 3, "edges": [[0, 1], [1, 2], [0, 2]]}')
    assert g.labels() == (0, 1, 2)
    assert g.endpoints(1) == (1, 2)


def test_json_rejects_garbage():
    with pytest.raises(GraphError):
        graph_from_json("{not json")
    with pytest.raises(GraphError):
        graph_from_json('{"vertices": 2}')
