import math

import pytest

from pseudoform.core.complex import (
    SimplicialComplex,
    cone,
    edge_distance,
    euler_characteristic,
    face_vectors,
    fresh_labels,
    g2,
    graph_cone_points,
    h_from_f,
    h_to_f,
    induced_circles,
    induced_subcomplex,
    is_isomorphic,
    link,
    make_face,
    missing_simplices,
    relabel,
    star,
)
from pseudoform.operations.constructions import facet_subdivide
from pseudoform.utils.errors import (
    DuplicateVertexInFacet,
    FaceNotPresent,
    SizeLimitExceeded,
    VertexNotPresent,
)

OCTAHEDRON = SimplicialComplex.from_facets(
    [[a, b, c] for a in (0, 1) for b in (2, 3) for c in (4, 5)], name="octahedron"
)


class TestConstruction:
    def test_non_maximal_faces_are_dropped(self):
        K = SimplicialComplex.from_facets([[2, 1, 0], [0, 1], [3]])
        assert K.facets == ((0, 1, 2), (3,))
        assert not K.is_pure

    def test_duplicate_vertex_rejected(self):
        with pytest.raises(DuplicateVertexInFacet):
            SimplicialComplex.from_facets([[0, 0, 1]])

    def test_negative_label_rejected(self):
        with pytest.raises(ValueError):
            make_face([0, -1])

    def test_empty_complex(self):
        K = SimplicialComplex()
        assert K.dim == -1
        assert K.f_vector == (1,)
        assert K.vertices == ()

    def test_equality_ignores_name_and_order(self):
        assert SimplicialComplex.from_facets([[1, 0]], name="a") == SimplicialComplex.from_facets([[0, 1]], name="b")


class TestFaceVectors:
    def test_boundary_simplex(self, sd4):
        report = face_vectors(sd4)
        assert report.f == [1, 5, 10, 10, 5]
        assert report.h == [1, 1, 1, 1, 1]
        assert report.g2 == 0
        assert report.euler == 0

    def test_rp2(self, rp2):
        report = face_vectors(rp2)
        assert report.f == [1, 6, 15, 10]
        assert report.g2 == 3
        assert euler_characteristic(rp2) == 1

    def test_torus(self, torus):
        assert torus.f_vector == (1, 7, 21, 14)
        assert g2(torus) == 6
        assert euler_characteristic(torus) == 0

    def test_suspended_rp2(self, sigma_rp2):
        report = face_vectors(sigma_rp2)
        assert report.f == [1, 7, 21, 30, 15]
        assert report.g2 == 3
        assert report.h[3] - report.h[1] == 2

    def test_h_to_f_inverts_h_from_f(self, sigma_rp2):
        f = list(sigma_rp2.f_vector)
        assert h_to_f(h_from_f(f, 3), 3) == f


class TestLinksAndStars:
    def test_vertex_link_of_simplex_boundary(self, sd4):
        assert link(sd4, [0]) == SimplicialComplex.from_facets([[1, 2, 3], [1, 2, 4], [1, 3, 4], [2, 3, 4]])

    def test_link_of_empty_face_is_complex(self, rp2):
        assert link(rp2, ()) == rp2

    def test_link_of_missing_face(self, rp2):
        with pytest.raises(FaceNotPresent):
            link(rp2, (0, 1, 3))

    def test_edge_link_in_surface_is_two_points(self, rp2):
        assert link(rp2, (1, 3)).vertices == (4, 5)

    def test_star(self, sd4):
        assert len(star(sd4, [0]).facets) == 4

    def test_induced_subcomplex(self, sd4):
        assert induced_subcomplex(sd4, [0, 1, 2, 3]) == SimplicialComplex.from_facets([[0, 1, 2, 3]])


class TestDerivedComplexes:
    def test_cone_keeps_g2(self, rp2, sd3):
        assert g2(cone(rp2)) == g2(rp2) == 3
        assert g2(cone(sd3)) == 0
        assert max(cone(rp2).vertices) == 6

    def test_cone_rejects_existing_apex(self, rp2):
        with pytest.raises(ValueError):
            cone(rp2, apex=0)

    def test_relabel(self, rp2):
        K = relabel(rp2, {0: 10, 10: 0})
        assert 10 in K.vertex_set and 0 not in K.vertex_set
        assert K.f_vector == rp2.f_vector

    def test_relabel_must_be_injective(self, rp2):
        with pytest.raises(ValueError):
            relabel(rp2, {0: 1})

    def test_fresh_labels(self, sd4):
        assert fresh_labels(sd4, 2) == [5, 6]
        assert fresh_labels(sd4, 2, start=3) == [5, 6]
        assert fresh_labels(SimplicialComplex(), 1) == [0]


class TestGraphQueries:
    def test_edge_distance(self, sd4):
        assert edge_distance(sd4, 0, 4) == 1
        assert edge_distance(sd4, 2, 2) == 0
        K = SimplicialComplex.from_facets([[0, 1, 2], [3, 4, 5]])
        assert edge_distance(K, 0, 5) == math.inf

    def test_edge_distance_unknown_vertex(self, sd4):
        with pytest.raises(VertexNotPresent):
            edge_distance(sd4, 0, 9)

    def test_graph_cone_points(self, rp2, torus, golden):
        assert graph_cone_points(rp2) == [0, 1, 2, 3, 4, 5]
        assert graph_cone_points(torus) == list(range(7))
        assert graph_cone_points(golden["stacked_sphere_8"].complex) == [0]

    def test_missing_triangles_of_rp2(self, rp2):
        assert len(missing_simplices(rp2, 2)) == 10
        assert (0, 1, 3) in missing_simplices(rp2, 2)

    def test_missing_tetrahedron_after_subdivision(self, sd4):
        K = facet_subdivide(sd4, (0, 1, 2, 3), apex=5)
        assert missing_simplices(K, 3) == [(0, 1, 2, 3)]

    def test_missing_simplices_needs_dim_two(self, sd4):
        with pytest.raises(ValueError):
            missing_simplices(sd4, 1)

    def test_induced_circles(self, sd3, rp2):
        assert induced_circles(sd3, 6) == []
        circles = induced_circles(rp2, 6)
        assert len(circles) == 10
        assert all(len(c) == 3 for c in circles)

    def test_induced_circles_of_octahedron(self):
        circles = induced_circles(OCTAHEDRON, 6)
        assert len(circles) == 3
        assert all(len(c) == 4 for c in circles)
        assert (0, 2, 1, 3) in circles


class TestIsomorphism:
    def test_relabeled_copy(self, rp2):
        permutation = {0: 3, 1: 5, 2: 0, 3: 1, 4: 2, 5: 4}
        other = relabel(rp2, permutation)
        mapping = is_isomorphic(rp2, other)
        assert mapping is not None
        assert relabel(rp2, mapping) == other

    def test_different_complexes(self, sd4, cyclic7, sigma_rp2):
        assert is_isomorphic(sd4, cyclic7) is None
        assert is_isomorphic(cyclic7, sigma_rp2) is None

    def test_size_limit(self, rp2):
        with pytest.raises(SizeLimitExceeded):
            is_isomorphic(rp2, rp2, max_vertices=5)
