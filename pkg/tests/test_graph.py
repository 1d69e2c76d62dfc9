import itertools

import pytest

from homcone.errors import BadIndex, NotHomogeneousChordal, ParseError
from homcone.graph import (
    Graph,
    Ordering,
    find_p4_or_c4,
    induced_subgraph,
    is_homogeneous_chordal,
    trivially_perfect_ordering,
    verify_tpeo,
)

from helpers import all_graphs, brute_force_homogeneous_chordal


def complete_graph(n):
    return Graph(n, frozenset(itertools.combinations(range(1, n + 1), 2)))


def path_graph(n):
    return Graph(n, frozenset((i, i + 1) for i in range(1, n)))


class TestRecognition:
    def test_path_on_four_vertices_rejected(self):
        assert not is_homogeneous_chordal(path_graph(4))

    def test_four_cycle_rejected(self):
        c4 = Graph(4, frozenset({(1, 2), (2, 3), (3, 4), (1, 4)}))
        assert not is_homogeneous_chordal(c4)

    def test_star_accepted(self, star):
        assert is_homogeneous_chordal(star)

    @pytest.mark.parametrize("n", range(1, 9))
    def test_complete_graphs_accepted(self, n):
        assert is_homogeneous_chordal(complete_graph(n))

    def test_agrees_with_brute_force_up_to_five(self):
        for n in range(1, 6):
            for g in all_graphs(n):
                assert is_homogeneous_chordal(g) == brute_force_homogeneous_chordal(g)

    def test_hereditary_on_accepted_graphs(self):
        for g in all_graphs(4):
            if not is_homogeneous_chordal(g):
                continue
            for k in range(1, g.n + 1):
                for keep in itertools.combinations(g.vertices(), k):
                    assert is_homogeneous_chordal(induced_subgraph(g, keep))


class TestOrdering:
    def test_center_first_star_gets_center_last(self):
        g = Graph(3, frozenset({(1, 2), (1, 3)}))
        ordering = trivially_perfect_ordering(g)
        assert ordering.new_label(1) == 3
        assert verify_tpeo(g, ordering)

    def test_already_ordered_star_identity_is_valid(self, star):
        assert verify_tpeo(star, Ordering.identity(3))

    def test_single_vertex_identity(self):
        assert trivially_perfect_ordering(Graph(1)).perm == (1,)

    def test_deterministic(self):
        g = Graph(5, frozenset({(1, 5), (2, 5), (3, 5), (4, 5), (1, 2)}))
        assert trivially_perfect_ordering(g) == trivially_perfect_ordering(g)

    def test_every_accepted_graph_gets_verified_ordering(self):
        for n in range(1, 6):
            for g in all_graphs(n):
                if is_homogeneous_chordal(g):
                    ordering = trivially_perfect_ordering(g)
                    assert ordering.verified
                    assert verify_tpeo(g, ordering)

    def test_rejection_names_a_witness(self):
        with pytest.raises(NotHomogeneousChordal) as err:
            trivially_perfect_ordering(path_graph(4))
        assert err.value.kind in ("P4", "C4")
        assert sorted(err.value.vertices) == [1, 2, 3, 4]

    def test_witness_scan_finds_cycle(self):
        c4 = Graph(4, frozenset({(1, 2), (2, 3), (3, 4), (1, 4)}))
        kind, quad = find_p4_or_c4(c4)
        assert kind == "C4" and sorted(quad) == [1, 2, 3, 4]


class TestVerify:
    def test_star_identity_true(self, star):
        assert verify_tpeo(star, Ordering.identity(3))

    def test_center_first_violates_first_condition(self):
        # with the center labeled 1, edges {1,2} and {1,3} need {2,3}
        g = Graph(3, frozenset({(1, 2), (1, 3)}))
        assert not verify_tpeo(g, Ordering.identity(3))

    def test_edgeless_any_ordering(self):
        g = Graph(3)
        for perm in itertools.permutations((1, 2, 3)):
            assert verify_tpeo(g, Ordering(perm))


class TestInducedSubgraph:
    def test_star_keep_leaves(self, star):
        sub = induced_subgraph(star, {1, 2})
        assert sub == Graph(2)

    def test_keep_all(self, star):
        assert induced_subgraph(star, {1, 2, 3}) == star

    def test_clique_hereditary(self):
        assert induced_subgraph(complete_graph(4), {2, 3, 4}) == complete_graph(3)

    def test_bad_index(self, star):
        with pytest.raises(BadIndex):
            induced_subgraph(star, {0, 1})


class TestValidationAndJson:
    def test_self_loop_rejected(self):
        with pytest.raises(ParseError):
            Graph(2, frozenset({(1, 1)}))

    def test_out_of_range_edge_rejected(self):
        with pytest.raises(ParseError):
            Graph(2, frozenset({(1, 3)}))

    def test_graph_json_round_trip(self, star):
        assert Graph.from_json(star.to_json()) == star

    def test_ordering_json_round_trip(self):
        ordering = Ordering((2, 3, 1))
        assert Ordering.from_json(ordering.to_json()) == ordering

    def test_bad_perm_rejected(self):
        with pytest.raises(ParseError):
            Ordering((1, 1, 2))
