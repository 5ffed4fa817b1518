import pytest

from pseudoform.catalog import (
    GENERATORS,
    boundary_simplex,
    cone_point_surface,
    cyclic_polytope_boundary,
    golden_instances,
    klein_bottle,
    stacked_sphere,
    subdivided,
)
from pseudoform.core.analysis import (
    KLEIN_BOTTLE,
    SurfaceClass,
    is_normal,
    is_pseudomanifold,
    singularity_multiset,
    surface_classify,
)
from pseudoform.core.complex import g2, graph_cone_points
from pseudoform.operations.constructions import apply_record
from pseudoform.utils.errors import BadParameters


@pytest.mark.parametrize("entry", golden_instances(), ids=lambda e: e.name)
def test_golden_instances(entry):
    K = entry.complex
    assert K.f_vector == entry.f_vector
    assert g2(K) == entry.g2
    assert is_pseudomanifold(K)
    assert is_normal(K)
    if K.dim == 3:
        assert singularity_multiset(K) == entry.multiset


class TestGenerators:
    def test_boundary_simplex(self):
        assert boundary_simplex(2).f_vector == (1, 3, 3)
        with pytest.raises(BadParameters):
            boundary_simplex(0)

    def test_stacked_sphere(self):
        K = stacked_sphere(3, 10, seed=6)
        assert len(K.vertices) == 10
        assert K.f_vector[2] == 4 * 10 - 10
        assert g2(K) == 0
        assert stacked_sphere(3, 10, seed=6) == K
        with pytest.raises(BadParameters):
            stacked_sphere(3, 4)

    def test_subdivided_records_replay(self, sd4):
        K, records = subdivided(sd4, 3, seed=1)
        replayed = sd4
        for record in records:
            replayed = apply_record(record, [replayed])
        assert replayed == K

    def test_cyclic_polytope(self):
        K = cyclic_polytope_boundary(8)
        assert K.f_vector == (1, 8, 28, 40, 20)
        assert singularity_multiset(K) == []
        with pytest.raises(BadParameters):
            cyclic_polytope_boundary(5)

    @pytest.mark.parametrize("b1, orientable", [(0, True), (1, False), (2, False), (3, False), (2, True), (4, True)])
    def test_cone_point_surfaces(self, b1, orientable):
        S = cone_point_surface(b1, orientable, seed=4)
        assert surface_classify(S) == SurfaceClass(b1=b1, orientable=orientable)
        assert graph_cone_points(S)

    def test_bad_surfaces(self):
        with pytest.raises(BadParameters):
            cone_point_surface(1, True)
        with pytest.raises(BadParameters):
            cone_point_surface(0, False)

    def test_klein_bottle(self):
        assert surface_classify(klein_bottle()) == KLEIN_BOTTLE

    def test_generator_table(self):
        assert GENERATORS["boundary_simplex"]({"n": "3"}) == boundary_simplex(3)
        K = GENERATORS["cone_point_surface"]({"b1": "2", "orientable": "true", "seed": 0})
        assert surface_classify(K).orientable
