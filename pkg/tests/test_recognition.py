from itertools import combinations

import pytest

from pseudoform.catalog import cyclic_polytope_boundary, golden_instances, stacked_sphere, subdivided, suspended_rp2, torus_7
from pseudoform.core.complex import g2, is_isomorphic
from pseudoform.operations.constructions import (
    FacetBijection,
    NormalityFlag,
    connected_sum,
    edge_fold,
    facet_subdivide,
    one_vertex_suspension,
    vertex_fold,
)
from pseudoform.operations.recognition import (
    HandleWitness,
    Verdict,
    classify_all,
    classify_missing_tetrahedron,
    edge_unfold,
    edge_unfold_bijection,
    split_connected_sum,
    vertex_unfold,
    vertex_unfold_bijection,
)
from pseudoform.utils.errors import AnnulusCaseUnsupported, NotMissing, VerdictMismatch
from tests.planted import planted_edge_fold, planted_handle, planted_sum, planted_vertex_fold

THREE_DIMENSIONAL = [entry for entry in golden_instances() if entry.complex.dim == 3]


@pytest.fixture
def subdivided_sd4(sd4):
    return facet_subdivide(sd4, (0, 1, 2, 3), apex=5)


@pytest.fixture
def suspended_torus():
    return one_vertex_suspension(torus_7(), 0, x=7, y=8)


class TestClassification:
    def test_edge_fold_in_suspended_rp2(self, sigma_rp2):
        result = classify_missing_tetrahedron(sigma_rp2, (1, 3, 6, 7))
        assert result.verdict == Verdict.EDGE_FOLD_AT
        assert result.edge == [6, 7]
        separating = {r.vertex for r in result.vertices if r.separates}
        assert separating == {1, 3}
        assert "edge folding at [6, 7]" in result.explain()

    def test_subdivided_facet_is_a_sum(self, subdivided_sd4):
        result = classify_missing_tetrahedron(subdivided_sd4, (3, 2, 1, 0))
        assert result.verdict == Verdict.SUM_OR_HANDLE
        assert result.tetra == [0, 1, 2, 3]

    def test_vertex_fold_golden(self, golden):
        result = classify_missing_tetrahedron(golden["vertex_fold"].complex, (7, 11, 12, 13))
        assert result.verdict == Verdict.VERTEX_FOLD_AT
        assert result.apex == 7

    def test_annulus(self, suspended_torus):
        result = classify_missing_tetrahedron(suspended_torus, (1, 2, 7, 8))
        assert result.verdict == Verdict.EDGE_FOLD_ANNULUS_NONSEPARATING
        assert result.edge == [7, 8]

    def test_not_missing(self, subdivided_sd4):
        with pytest.raises(NotMissing):
            classify_missing_tetrahedron(subdivided_sd4, (0, 1, 2, 4))
        with pytest.raises(NotMissing):
            classify_missing_tetrahedron(subdivided_sd4, (0, 1, 2))

    def test_classify_all(self, sigma_rp2):
        results = classify_all(sigma_rp2)
        assert [r.tetra for r in results] == sorted(r.tetra for r in results)
        assert results == classify_all(sigma_rp2, parallel=False)
        assert any(r.tetra == [1, 3, 6, 7] for r in results)


class TestSplit:
    def test_split_subdivided_simplex(self, subdivided_sd4, sd4):
        K1, K2 = split_connected_sum(subdivided_sd4, (0, 1, 2, 3))
        assert K1 == sd4
        assert sorted(K2.vertices) == [0, 1, 2, 3, 5]
        assert g2(K1) + g2(K2) == g2(subdivided_sd4)

    def test_handle_does_not_separate(self, golden):
        witness = split_connected_sum(golden["handle"].complex, (0, 1, 2, 3))
        assert isinstance(witness, HandleWitness)
        assert witness.g2 == 10

    def test_split_needs_a_sum_verdict(self, sigma_rp2):
        with pytest.raises(VerdictMismatch):
            split_connected_sum(sigma_rp2, (1, 3, 6, 7))


class TestVertexUnfold:
    def test_rp2_unfolds_to_stacked_sphere(self, rp2, golden):
        assert vertex_unfold(rp2, (0, 1, 3), 0) == golden["stacked_sphere_8"].complex

    def test_refold_bijection(self, rp2):
        psi = vertex_unfold_bijection(rp2, (0, 1, 3), 0)
        assert psi.apex == 0
        assert psi.mapping == {0: 0, 1: 6, 3: 7}

    def test_golden_vertex_fold(self, golden):
        unfolded = vertex_unfold(golden["vertex_fold"].complex, (7, 11, 12, 13), 7)
        assert g2(unfolded) == 3
        assert is_isomorphic(unfolded, golden["vertex_fold_base"].complex) is not None

    def test_wrong_apex(self, golden):
        with pytest.raises(VerdictMismatch):
            vertex_unfold(golden["vertex_fold"].complex, (7, 11, 12, 13), 11)

    def test_edge_fold_is_not_a_vertex_fold(self, sigma_rp2):
        with pytest.raises(VerdictMismatch):
            vertex_unfold(sigma_rp2, (1, 3, 6, 7), 6)


class TestEdgeUnfold:
    def test_suspended_rp2_unfolds_to_stacked_sphere(self, sigma_rp2, golden):
        assert edge_unfold(sigma_rp2, (1, 3, 6, 7), (6, 7)) == golden["stacked_sphere_9"].complex

    def test_refold_bijection(self, sigma_rp2):
        psi = edge_unfold_bijection(sigma_rp2, (1, 3, 6, 7), (6, 7))
        assert psi.edge == [6, 7]
        assert psi.mapping == {1: 8, 3: 9, 6: 6, 7: 7}

    def test_golden_edge_fold(self, golden):
        entry = golden["edge_fold"]
        result = classify_missing_tetrahedron(entry.complex, (0, 1, 7, 8))
        assert result.verdict == Verdict.EDGE_FOLD_AT
        unfolded = edge_unfold(entry.complex, (0, 1, 7, 8), (0, 1))
        assert g2(unfolded) == 0
        assert is_isomorphic(unfolded, golden["edge_fold_base"].complex) is not None

    def test_annulus_is_unsupported(self, suspended_torus):
        with pytest.raises(AnnulusCaseUnsupported):
            edge_unfold(suspended_torus, (1, 2, 7, 8), (7, 8))

    def test_wrong_edge(self, sigma_rp2, subdivided_sd4):
        with pytest.raises(VerdictMismatch):
            edge_unfold(sigma_rp2, (1, 3, 6, 7), (1, 3))
        with pytest.raises(VerdictMismatch):
            edge_unfold(subdivided_sd4, (0, 1, 2, 3), (0, 1))


def _sum_partner(seed):
    return [suspended_rp2(), cyclic_polytope_boundary(7), stacked_sphere(3, 6 + seed % 5, seed=seed + 100)][seed % 3]


class TestPlantedRoundTrips:
    @pytest.mark.parametrize("seed", range(30))
    def test_vertex_fold(self, seed):
        site = planted_vertex_fold(5 + seed % 8, seed)
        apex = site.psi.apex
        result = classify_missing_tetrahedron(site.result, site.tetra)
        assert result.verdict == Verdict.VERTEX_FOLD_AT
        assert result.apex == apex

        unfolded = vertex_unfold(site.result, site.tetra, apex)
        assert is_isomorphic(unfolded, site.base) is not None
        assert vertex_fold(unfolded, vertex_unfold_bijection(site.result, site.tetra, apex)) == site.result

    @pytest.mark.parametrize("seed", range(20))
    def test_edge_fold(self, seed):
        site = planted_edge_fold(5 + seed % 8, seed)
        edge = site.psi.edge
        result = classify_missing_tetrahedron(site.result, site.tetra)
        assert result.verdict == Verdict.EDGE_FOLD_AT
        assert result.edge == edge

        unfolded = edge_unfold(site.result, site.tetra, edge)
        assert is_isomorphic(unfolded, site.base) is not None
        refolded, flag = edge_fold(unfolded, edge_unfold_bijection(site.result, site.tetra, edge))
        assert refolded == site.result
        assert flag == NormalityFlag.NORMAL

    @pytest.mark.parametrize("seed", range(20))
    def test_split_and_resum(self, seed):
        site = planted_sum(5 + seed % 8, _sum_partner(seed), seed)
        assert classify_missing_tetrahedron(site.result, site.tetra).verdict == Verdict.SUM_OR_HANDLE

        pieces = split_connected_sum(site.result, site.tetra)
        first, second = pieces if pieces[0] == site.base else pieces[::-1]
        assert first == site.base
        assert is_isomorphic(second, site.other) is not None
        identity = FacetBijection.from_mapping({v: v for v in site.tetra})
        assert connected_sum(first, second, identity) == site.result

    @pytest.mark.parametrize("seed", range(5))
    def test_handle_does_not_split(self, seed):
        site = planted_handle(5 + seed, seed)
        witness = split_connected_sum(site.result, site.tetra)
        assert isinstance(witness, HandleWitness)
        assert witness.g2 == g2(site.base) + 10


def assert_side_parity(results):
    """Whenever two vertices of a missing tetrahedron separate, the other two have
    sides of the same type."""
    for result in results:
        by_vertex = {report.vertex: report for report in result.vertices}
        separating = [report.vertex for report in result.vertices if report.separates]
        for a, b in combinations(separating, 2):
            u, v = [w for w in result.tetra if w not in (a, b)]
            assert by_vertex[u].side.two_sided == by_vertex[v].side.two_sided, result.tetra


class TestSideParity:
    @pytest.mark.parametrize("entry", THREE_DIMENSIONAL, ids=lambda e: e.name)
    def test_golden(self, entry):
        assert_side_parity(classify_all(entry.complex))

    def test_suspended_torus(self, suspended_torus):
        assert_side_parity(classify_all(suspended_torus))

    @pytest.mark.parametrize("seed", range(6))
    def test_planted(self, seed):
        n = 5 + seed
        for K in (
            planted_vertex_fold(n, seed).result,
            planted_edge_fold(n, seed).result,
            planted_handle(n, seed).result,
            planted_sum(n, suspended_rp2(), seed).result,
            subdivided(suspended_rp2(), seed, seed=seed)[0],
        ):
            assert_side_parity(classify_all(K))

    def test_worker_cap(self, sigma_rp2):
        assert classify_all(sigma_rp2, max_workers=1) == classify_all(sigma_rp2, max_workers=2)
