# pseudoform/__init__.py
"""
pseudoform - combinatorics of normal 3-pseudomanifolds.

This package provides:
1. Simplicial complexes with face vectors, g2, links, stars and missing faces
2. Pseudomanifold analysis: normality, vertex-link surfaces, singularity multisets
3. Constructions (suspension, subdivision, sums, handles, vertex and edge foldings)
   and their recognition from missing tetrahedra
4. Exact generic rigidity: stress spaces over the rationals
5. Decomposition of relatively minimal complexes into replayable traces, and
   builders for pseudocompression bodies

Usage:
    import pseudoform

    K = pseudoform.suspended_rp2()
    report = pseudoform.info(K)          # f-vector, g2, singularities
    trace = pseudoform.decompose_relmin(K, 6)
    assert pseudoform.replay(trace) == K
"""

__version__ = "0.1.0"

from .catalog import (
    boundary_simplex,
    cone_point_surface,
    cyclic_polytope_boundary,
    golden_instances,
    klein_bottle,
    rp2_6,
    stacked_sphere,
    subdivided,
    suspended_rp2,
    torus_7,
)
from .core.analysis import (
    SurfaceClass,
    cut_along_circle,
    is_normal,
    is_pseudomanifold,
    is_stacked_sphere,
    singularity_multiset,
    surface_classify,
    vertex_link_classes,
)
from .core.complex import (
    SimplicialComplex,
    face_vectors,
    g2,
    is_isomorphic,
    link,
    missing_simplices,
    star,
)
from .core.rigidity import stress_basis, stress_dimension, verify_g2_stress
from .operations.constructions import (
    FacetBijection,
    check_admissible,
    connected_sum,
    edge_fold,
    facet_subdivide,
    handle_addition,
    one_vertex_suspension,
    vertex_fold,
)
from .operations.decomposition import (
    TraceNode,
    build_pseudocompression,
    classify_g2_3,
    decompose_relmin,
    pcb_multiset_admissible,
    relatively_minimal_witnesses,
    replay,
)
from .operations.recognition import classify_missing_tetrahedron, edge_unfold, split_connected_sum, vertex_unfold
from .utils.errors import PseudoformError
from .utils.io import load_complex, save_complex


def info(K: SimplicialComplex) -> dict:
    """Face vectors and, for normal 3-pseudomanifolds, the singularity multiset.

    Args:
        K: a simplicial complex

    Returns:
        dict with keys f, h, g2, euler and (when defined) singularities
    """
    report = face_vectors(K).model_dump()
    if K.dim == 3 and is_pseudomanifold(K) and is_normal(K):
        report["singularities"] = [c.model_dump() for c in singularity_multiset(K)]
    return report


def from_facets(facets, name: str = None) -> SimplicialComplex:
    """Build a complex from facet lists, validating labels."""
    return SimplicialComplex.from_facets(facets, name=name)
