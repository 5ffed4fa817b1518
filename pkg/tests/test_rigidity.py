import networkx as nx
import pytest

from pseudoform.core.rigidity import (
    Configuration,
    check_cone_lemma,
    check_union_lemma,
    expected_rigid_rank,
    is_stress,
    lower_bound_check,
    rigidity_matrix,
    stress_basis,
    stress_dimension,
    verify_g2_stress,
)
from pseudoform.utils.errors import CodimTooSmall, HypothesisNotMet, MissingCoordinate


def k4_pair(shared):
    """Two copies of K4 glued along the given shared vertices."""
    first = nx.complete_graph([0, 1, 2, 3])
    others = list(shared) + list(range(10, 10 + 4 - len(shared)))
    return first, nx.complete_graph(others)


class TestStressDimension:
    def test_simplex_boundary_is_stress_free(self, sd4):
        report = stress_dimension(sd4, 4, seed=11)
        assert report.matrix_rank == 10
        assert report.stress_dim == 0
        assert report.is_generically_rigid

    @pytest.mark.parametrize(
        "fixture, ambient, rank, stresses",
        [("rp2", 3, 12, 3), ("torus", 3, 15, 6), ("sigma_rp2", 4, 18, 3)],
    )
    def test_stress_dimension_is_g2(self, request, fixture, ambient, rank, stresses):
        K = request.getfixturevalue(fixture)
        report = stress_dimension(K, ambient, seed=5)
        assert report.matrix_rank == rank
        assert report.stress_dim == stresses
        assert len(report.trial_ranks) == report.trials

    def test_k4_in_the_plane(self):
        report = stress_dimension(nx.complete_graph(4), 2, seed=1, parallel=False)
        assert report.matrix_rank == 5
        assert report.stress_dim == 1
        assert report.is_generically_rigid

    def test_path_is_flexible(self):
        report = stress_dimension(nx.path_graph(3), 2, seed=1)
        assert report.matrix_rank == 2
        assert not report.is_generically_rigid

    def test_small_graphs(self):
        assert expected_rigid_rank(3, 4) == 3
        assert stress_dimension(nx.complete_graph(3), 4, seed=2).is_generically_rigid

    def test_seeded_runs_agree(self, rp2):
        assert stress_dimension(rp2, 3, seed=9) == stress_dimension(rp2, 3, seed=9)

    def test_bad_arguments(self, rp2):
        with pytest.raises(ValueError):
            stress_dimension(rp2, 0)
        with pytest.raises(ValueError):
            stress_dimension(rp2, 3, trials=0)


class TestStressBasis:
    def test_basis_vectors_are_stresses(self, rp2):
        edges, basis, cfg = stress_basis(rp2, 3, seed=4)
        assert len(edges) == 15
        assert len(basis) == 3
        assert all(is_stress(edges, vector, cfg) for vector in basis)

    def test_rigid_without_stress(self, sd4):
        _, basis, _ = stress_basis(sd4, 4, seed=4)
        assert basis == []

    def test_missing_coordinate(self):
        cfg = Configuration(ambient_d=2, seed=0, bound=10, points={0: [0, 0], 1: [1, 0]})
        with pytest.raises(MissingCoordinate):
            rigidity_matrix(nx.complete_graph(3), cfg)

    def test_matrix_rows_follow_sorted_edges(self):
        cfg = Configuration(ambient_d=2, seed=0, bound=10, points={0: [0, 0], 1: [3, 1]})
        assert rigidity_matrix(nx.Graph([(1, 0)]), cfg) == [[-3, -1, 3, 1]]


class TestG2Stress:
    def test_normal_complexes(self, sd4, rp2, torus, sigma_rp2, cyclic7):
        for K in (sd4, rp2, torus, sigma_rp2, cyclic7):
            assert verify_g2_stress(K, seed=3)

    def test_golden_vertex_fold(self, golden):
        assert verify_g2_stress(golden["vertex_fold"].complex, seed=3)


class TestLemmas:
    def test_union_of_rigid_graphs(self):
        first, second = k4_pair([2, 3])
        assert check_union_lemma(first, second, 2, seed=1)

    def test_union_needs_a_shared_clique(self):
        first, second = k4_pair([3])
        with pytest.raises(HypothesisNotMet) as excinfo:
            check_union_lemma(first, second, 2, seed=1)
        assert excinfo.value.context["hypothesis"] == "shared_clique"

    def test_union_needs_rigid_inputs(self):
        first, _ = k4_pair([2, 3])
        with pytest.raises(HypothesisNotMet) as excinfo:
            check_union_lemma(nx.path_graph(3), first, 2, seed=1)
        assert excinfo.value.context["hypothesis"] == "rigid_first"

    def test_cone_lemma(self, rp2, sd3):
        assert check_cone_lemma(rp2, 3, seed=2)
        assert check_cone_lemma(sd3, 3, seed=2)

    def test_cone_lemma_needs_rigid_base(self):
        with pytest.raises(HypothesisNotMet):
            check_cone_lemma(nx.path_graph(4), 2, seed=2)

    def test_lower_bound(self, sigma_rp2, sd4):
        assert lower_bound_check(sigma_rp2, [6])
        assert lower_bound_check(sd4, [0])

    def test_lower_bound_codimension(self, sigma_rp2):
        with pytest.raises(CodimTooSmall):
            lower_bound_check(sigma_rp2, [1, 2])
