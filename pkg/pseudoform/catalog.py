"""
Catalog for pseudoform

Named complexes: simplex boundaries, seeded stacked spheres, the minimal RP^2
and torus, cyclic 4-polytope boundaries, surfaces with a graph cone point, and
the hand-checked golden instances used as regression data.
"""

import logging
import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Tuple

from .core.analysis import PROJECTIVE_PLANE, SurfaceClass
from .core.complex import SimplicialComplex, fresh_labels, graph_cone_points, make_face
from .operations.constructions import (
    BijectionKind,
    ConstructionRecord,
    FacetBijection,
    connected_sum,
    edge_fold,
    facet_subdivide,
    grow_chain,
    grow_fold_sites,
    handle_addition,
    one_vertex_suspension,
    vertex_fold,
)
from .utils.config import resolve_seed
from .utils.errors import BadParameters

logger = logging.getLogger(__name__)


RP2_6_FACETS = [
    [0, 1, 2], [0, 2, 3], [0, 3, 4], [0, 4, 5], [0, 1, 5],
    [1, 2, 4], [2, 3, 5], [1, 3, 4], [2, 4, 5], [1, 3, 5],
]

# Unfolding RP2_6 at the missing triangle {0, 1, 3} with apex 0.
STACKED_SPHERE_8_FACETS = [
    [1, 2, 4], [2, 5, 7], [1, 3, 4], [2, 4, 5], [5, 6, 7], [0, 1, 2],
    [0, 2, 7], [0, 6, 7], [0, 5, 6], [0, 4, 5], [0, 3, 4], [0, 1, 3],
]

# Edge unfolding of the suspended RP^2 at {1, 3, 6, 7} along the edge 67.
STACKED_SPHERE_9_FACETS = [
    [1, 2, 6, 7], [2, 6, 7, 9], [3, 4, 6, 7], [4, 5, 6, 7], [5, 6, 7, 8], [1, 2, 4, 6],
    [2, 5, 6, 9], [1, 3, 4, 6], [2, 4, 5, 6], [5, 6, 8, 9], [1, 2, 4, 7], [2, 5, 7, 9],
    [1, 3, 4, 7], [2, 4, 5, 7], [5, 7, 8, 9], [1, 3, 6, 7], [6, 7, 8, 9],
]


def boundary_simplex(n: int) -> SimplicialComplex:
    """∂Δ^n on the vertices 0..n."""
    if n < 1:
        raise BadParameters(f"Simplex boundary needs n >= 1, got {n}")
    return SimplicialComplex(combinations(range(n + 1), n), name=f"boundary_simplex_{n}")


def subdivided(
    K: SimplicialComplex, count: int, seed: Optional[int] = None
) -> Tuple[SimplicialComplex, List[ConstructionRecord]]:
    """`count` facet subdivisions at seeded random facets."""
    rng = random.Random(resolve_seed(seed))
    records = []
    for _ in range(count):
        sigma = rng.choice(K.facets)
        apex = fresh_labels(K, 1)[0]
        K = facet_subdivide(K, sigma, apex=apex)
        records.append(ConstructionRecord(op="facet_subdivide", face=list(sigma), fresh={"apex": apex}))
    return K, records


def stacked_sphere(d: int, n_vertices: int, seed: Optional[int] = None) -> SimplicialComplex:
    """A stacked d-sphere on n_vertices vertices: ∂Δ^{d+1} with seeded facet subdivisions."""
    if d < 1:
        raise BadParameters(f"Stacked spheres need d >= 1, got {d}")
    if n_vertices < d + 2:
        raise BadParameters(f"A stacked {d}-sphere has at least {d + 2} vertices, got {n_vertices}")
    K, _ = subdivided(boundary_simplex(d + 1), n_vertices - d - 2, seed=seed)
    return K.renamed(f"stacked_sphere_{d}_{n_vertices}")


def rp2_6() -> SimplicialComplex:
    """The 6-vertex RP^2; every vertex is a graph cone point."""
    return SimplicialComplex.from_facets(RP2_6_FACETS, name="rp2_6")


def torus_7() -> SimplicialComplex:
    """The 7-vertex torus: triangles {i, i+1, i+3} and {i, i+2, i+3} mod 7."""
    facets = []
    for i in range(7):
        facets.append([i, (i + 1) % 7, (i + 3) % 7])
        facets.append([i, (i + 2) % 7, (i + 3) % 7])
    return SimplicialComplex.from_facets(facets, name="torus_7")


def cyclic_polytope_boundary(n: int) -> SimplicialComplex:
    """Boundary of the cyclic 4-polytope on n >= 6 vertices (Gale evenness).

    Facets are the unions of two disjoint pairs {i, i+1} of cyclically consecutive vertices.
    """
    if n < 6:
        raise BadParameters(f"Cyclic 4-polytope boundary needs n >= 6, got {n}")
    pairs = [(i, (i + 1) % n) for i in range(n)]
    facets = {make_face(p + q) for p, q in combinations(pairs, 2) if not set(p) & set(q)}
    return SimplicialComplex(facets, name=f"cyclic_4_{n}")


def _sum_at_cone_points(S: SimplicialComplex, T: SimplicialComplex, rng: random.Random) -> SimplicialComplex:
    c = graph_cone_points(S)[0]
    t = graph_cone_points(T)[0]
    sigma1 = rng.choice([f for f in S.facets if c in f])
    sigma2 = rng.choice([f for f in T.facets if t in f])
    rest1 = [w for w in sigma1 if w != c]
    rest2 = [w for w in sigma2 if w != t]
    rng.shuffle(rest2)
    psi = FacetBijection.from_mapping({c: t, **dict(zip(rest1, rest2))})
    return connected_sum(S, T, psi)


def cone_point_surface(b1: int, orientable: bool, seed: Optional[int] = None) -> SimplicialComplex:
    """A surface with first Betti number b1 (over Z/2) and a graph cone point.

    Connected sums of copies of the 7-vertex torus or the 6-vertex RP^2, always
    summed at a cone point so the merged vertex stays adjacent to everything.
    """
    if b1 < 0:
        raise BadParameters(f"b1 must be >= 0, got {b1}")
    if orientable and b1 % 2:
        raise BadParameters(f"Orientable surfaces have even b1, got {b1}")
    if not orientable and b1 == 0:
        raise BadParameters("A non-orientable surface has b1 >= 1")
    if b1 == 0:
        return boundary_simplex(3)
    rng = random.Random(resolve_seed(seed))
    piece, copies = (torus_7, b1 // 2) if orientable else (rp2_6, b1)
    S = piece()
    for _ in range(copies - 1):
        S = _sum_at_cone_points(S, piece(), rng)
    cls = SurfaceClass(b1=b1, orientable=orientable)
    logger.debug(f"Cone-point surface for {cls.model_dump()} has {len(S.vertices)} vertices")
    return S.renamed(f"surface_b{b1}_{'o' if orientable else 'n'}")


def klein_bottle() -> SimplicialComplex:
    return cone_point_surface(2, False, seed=0).renamed("klein_bottle")


def suspended_rp2() -> SimplicialComplex:
    """Σ_0 of the 6-vertex RP^2, suspension points 6 and 7."""
    return one_vertex_suspension(rp2_6(), 0, x=6, y=7).renamed("suspended_rp2")


# ----------------------------------------------------------------------
# Golden instances
# TODO: add the N3 normal 3-pseudomanifold here once a verified facet list is available.


@dataclass
class CatalogEntry:
    name: str
    complex: SimplicialComplex
    f_vector: Tuple[int, ...]
    g2: int
    multiset: List[SurfaceClass] = field(default_factory=list)
    records: List[ConstructionRecord] = field(default_factory=list)
    description: str = ""


def _edge_fold_base() -> Tuple[SimplicialComplex, List[ConstructionRecord]]:
    """∂Δ^4 with two chains of four subdivisions around the edge 01."""
    K, _, records_a = grow_chain(boundary_simplex(4), (0, 1), (0, 1, 2, 3), 4)
    K, _, records_b = grow_chain(K, (0, 1), (0, 1, 3, 4), 4)
    return K, records_a + records_b


def _handle_base() -> Tuple[SimplicialComplex, List[ConstructionRecord]]:
    """∂Δ^4 with a chain of eleven subdivisions away from vertex 0."""
    K, _, records = grow_chain(boundary_simplex(4), (), (1, 2, 3, 4), 11)
    return K, records


def _vertex_fold_base() -> Tuple[SimplicialComplex, List[ConstructionRecord]]:
    """Suspended RP^2 with fold sites grown at 7, away from the other singular vertex 6."""
    K, _, _, records = grow_fold_sites(suspended_rp2(), 7, avoid=[6], steps=6)
    return K, records


def edge_fold_instance(normal: bool = True) -> Tuple[SimplicialComplex, FacetBijection]:
    K, _ = _edge_fold_base()
    mapping = {0: 0, 1: 1, 7: 11, 8: 12} if normal else {0: 0, 1: 1, 7: 12, 8: 11}
    return K, FacetBijection.from_mapping(mapping, kind=BijectionKind.EDGE_FOLDING, edge=(0, 1))


def golden_instances() -> List[CatalogEntry]:
    """Hand-checked complexes with their face vectors, g2 and singularities."""
    rp2 = [PROJECTIVE_PLANE, PROJECTIVE_PLANE]
    entries = [
        CatalogEntry(
            name="rp2_6", complex=rp2_6(), f_vector=(1, 6, 15, 10), g2=3,
            description="6-vertex RP^2",
        ),
        CatalogEntry(
            name="torus_7", complex=torus_7(), f_vector=(1, 7, 21, 14), g2=6,
            description="7-vertex torus",
        ),
        CatalogEntry(
            name="stacked_sphere_8", complex=SimplicialComplex.from_facets(STACKED_SPHERE_8_FACETS),
            f_vector=(1, 8, 18, 12), g2=0,
            description="vertex unfolding of rp2_6 at {0, 1, 3}",
        ),
        CatalogEntry(
            name="suspended_rp2", complex=suspended_rp2(), f_vector=(1, 7, 21, 30, 15), g2=3, multiset=rp2,
            records=[ConstructionRecord(op="one_vertex_suspension", vertex=0, fresh={"x": 6, "y": 7})],
            description="one-vertex suspension of rp2_6 at 0",
        ),
        CatalogEntry(
            name="stacked_sphere_9", complex=SimplicialComplex.from_facets(STACKED_SPHERE_9_FACETS),
            f_vector=(1, 9, 26, 34, 17), g2=0,
            description="edge unfolding of suspended_rp2 at {1, 3, 6, 7}",
        ),
        CatalogEntry(
            name="cyclic_4_7", complex=cyclic_polytope_boundary(7), f_vector=(1, 7, 21, 28, 14), g2=3,
            description="neighborly 3-sphere without singularities",
        ),
    ]

    base, records = _edge_fold_base()
    entries.append(CatalogEntry(
        name="edge_fold_base", complex=base, f_vector=(1, 13, 42, 58, 29), g2=0, records=records,
        description="stacked sphere with two chains around the edge 01",
    ))
    K, psi = edge_fold_instance(normal=True)
    folded, _ = edge_fold(K, psi)
    entries.append(CatalogEntry(
        name="edge_fold", complex=folded, f_vector=(1, 11, 37, 54, 27), g2=3, multiset=rp2,
        records=records + [ConstructionRecord.for_bijection("edge_fold", psi)],
        description="normal edge folding of edge_fold_base at 01",
    ))

    base, records = _handle_base()
    entries.append(CatalogEntry(
        name="handle_base", complex=base, f_vector=(1, 16, 54, 76, 38), g2=0, records=records,
        description="stacked sphere with far-apart facets {0,1,2,3} and {12,13,14,15}",
    ))
    psi = FacetBijection.from_mapping({0: 12, 1: 13, 2: 14, 3: 15})
    entries.append(CatalogEntry(
        name="handle", complex=handle_addition(base, psi), f_vector=(1, 12, 48, 72, 36), g2=10,
        records=records + [ConstructionRecord.for_bijection("handle_addition", psi)],
        description="handle addition on handle_base",
    ))

    base, records = _vertex_fold_base()
    entries.append(CatalogEntry(
        name="vertex_fold_base", complex=base, f_vector=(1, 19, 69, 102, 51), g2=3, multiset=rp2, records=records,
        description="suspended_rp2 with fold sites grown at 7",
    ))
    psi = FacetBijection.from_mapping({7: 7, 11: 17, 12: 18, 13: 19}, kind=BijectionKind.VERTEX_FOLDING, apex=7)
    entries.append(CatalogEntry(
        name="vertex_fold", complex=vertex_fold(base, psi), f_vector=(1, 16, 63, 98, 49), g2=9,
        multiset=[SurfaceClass(b1=3, orientable=False), PROJECTIVE_PLANE],
        records=records + [ConstructionRecord.for_bijection("vertex_fold", psi)],
        description="vertex folding of vertex_fold_base at 7",
    ))
    return entries


def golden_by_name() -> Dict[str, CatalogEntry]:
    return {entry.name: entry for entry in golden_instances()}


GENERATORS = {
    "boundary_simplex": lambda args: boundary_simplex(int(args.get("n", 4))),
    "stacked_sphere": lambda args: stacked_sphere(int(args.get("d", 3)), int(args.get("n", 8)), seed=args.get("seed")),
    "rp2_6": lambda args: rp2_6(),
    "torus_7": lambda args: torus_7(),
    "klein_bottle": lambda args: klein_bottle(),
    "cyclic_polytope_boundary": lambda args: cyclic_polytope_boundary(int(args.get("n", 7))),
    "suspended_rp2": lambda args: suspended_rp2(),
    "cone_point_surface": lambda args: cone_point_surface(
        int(args.get("b1", 1)), str(args.get("orientable", "false")).lower() in ("1", "true", "yes"), seed=args.get("seed")
    ),
}
