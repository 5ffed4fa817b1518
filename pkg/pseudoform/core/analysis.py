"""
Pseudomanifold Analysis for pseudoform

Predicates and classifiers on top of SimplicialComplex:
- pseudomanifold / boundary / normality tests
- closed surface classification as (b1, orientable)
- singular vertices and the singularity multiset of a 3-dimensional normal pseudomanifold
- stacked sphere recognition
- sides of a missing face inside a vertex link, and the cut of a surface along a 3-circle
"""

import logging
from collections import Counter, defaultdict, deque
from typing import Dict, FrozenSet, Iterable, List, Sequence, Tuple

import networkx as nx
from pydantic import BaseModel, ConfigDict, model_validator

from ..utils.errors import (
    NotACircleInSurface,
    NotASurface,
    NotNormal,
    NotPseudomanifold,
    NotPure,
    PostconditionViolation,
)
from .complex import (
    Face,
    SimplicialComplex,
    euler_characteristic,
    g2,
    is_connected,
    link,
)

logger = logging.getLogger(__name__)


class SurfaceClass(BaseModel):
    """A closed connected surface up to homeomorphism."""

    model_config = ConfigDict(frozen=True)

    b1: int  # Z/2 first Betti number
    orientable: bool

    @model_validator(mode="after")
    def _check_parity(self) -> "SurfaceClass":
        if self.b1 < 0:
            raise ValueError("b1 must be non-negative")
        if self.orientable and self.b1 % 2:
            raise ValueError(f"An orientable surface has even b1, got {self.b1}")
        return self

    @property
    def is_sphere(self) -> bool:
        return self.b1 == 0

    @property
    def euler(self) -> int:
        return 2 - self.b1

    def sort_key(self) -> Tuple[int, bool]:
        return (-self.b1, self.orientable)


SPHERE = SurfaceClass(b1=0, orientable=True)
PROJECTIVE_PLANE = SurfaceClass(b1=1, orientable=False)
TORUS = SurfaceClass(b1=2, orientable=True)
KLEIN_BOTTLE = SurfaceClass(b1=2, orientable=False)


def sort_multiset(classes: Iterable[SurfaceClass]) -> List[SurfaceClass]:
    """Canonical order: b1 descending, non-orientable first on ties."""
    return sorted(classes, key=SurfaceClass.sort_key)


class SideReport(BaseModel):
    component_count: int  # components after cutting along the circle
    two_sided: bool


# ----------------------------------------------------------------------
# Pseudomanifolds


def ridge_incidence(K: SimplicialComplex) -> Dict[Face, List[Face]]:
    """Map each codimension-one face of a pure complex to the facets containing it."""
    if not K.is_pure:
        raise NotPure("Complex is not pure", f_vector=list(K.f_vector))
    incidence: Dict[Face, List[Face]] = defaultdict(list)
    for facet in K.facets:
        for i in range(len(facet)):
            incidence[facet[:i] + facet[i + 1:]].append(facet)
    return incidence


def is_pseudomanifold(K: SimplicialComplex) -> bool:
    """Every ridge lies in exactly two facets."""
    if not K.facets:
        return False
    return all(len(facets) == 2 for facets in ridge_incidence(K).values())


def is_pseudomanifold_with_boundary(K: SimplicialComplex) -> bool:
    if not K.facets:
        return False
    counts = [len(facets) for facets in ridge_incidence(K).values()]
    return all(count in (1, 2) for count in counts)


def boundary_complex(K: SimplicialComplex) -> SimplicialComplex:
    """Ridges lying in exactly one facet, with their faces."""
    return SimplicialComplex(ridge for ridge, facets in ridge_incidence(K).items() if len(facets) == 1)


def is_normal(K: SimplicialComplex) -> bool:
    """Connected, with connected links of all faces of codimension two or more.

    Raises:
        NotPseudomanifold: if K is not a (closed) pseudomanifold
    """
    if not is_pseudomanifold(K):
        raise NotPseudomanifold("Normality is only defined for pseudomanifolds")
    d = K.dim
    if d == 0:
        return True
    if not is_connected(K):
        return False
    for dim in range(0, d - 1):
        for face in K.faces(dim):
            if not is_connected(link(K, face)):
                logger.debug(f"Link of {list(face)} is disconnected")
                return False
    return True


def require_normal(K: SimplicialComplex) -> None:
    try:
        normal = is_normal(K)
    except (NotPseudomanifold, NotPure) as e:
        raise NotNormal(f"Complex is not a normal pseudomanifold: {e}") from e
    if not normal:
        raise NotNormal("Complex is not a normal pseudomanifold")


# ----------------------------------------------------------------------
# Surfaces


def _is_single_circle(L: SimplicialComplex) -> bool:
    if L.dim != 1 or not L.is_pure:
        return False
    return all(len(L.adjacency[v]) == 2 for v in L.vertices) and is_connected(L)


def _orientable(K: SimplicialComplex, edge_facets: Dict[Face, List[Face]]) -> bool:
    # Orientation s of a sorted triangle (a, b, c): +1 means a->b->c.
    def edge_sign(triangle: Face, edge: Face) -> int:
        return -1 if edge == (triangle[0], triangle[2]) else 1

    orientation: Dict[Face, int] = {}
    for start in K.facets:
        if start in orientation:
            continue
        orientation[start] = 1
        queue = deque([start])
        while queue:
            triangle = queue.popleft()
            for i in range(3):
                edge = triangle[:i] + triangle[i + 1:]
                for other in edge_facets[edge]:
                    if other == triangle:
                        continue
                    required = -orientation[triangle] * edge_sign(triangle, edge) * edge_sign(other, edge)
                    if other not in orientation:
                        orientation[other] = required
                        queue.append(other)
                    elif orientation[other] != required:
                        return False
    return True


def surface_classify(K: SimplicialComplex) -> SurfaceClass:
    """Classify a closed connected triangulated surface.

    Returns:
        SurfaceClass with b1 = 2 - χ and orientability from coherent orientation propagation

    Raises:
        NotASurface: if K is not a connected closed 2-pseudomanifold whose vertex links are circles
    """
    if K.dim != 2 or not K.is_pure:
        raise NotASurface(f"Expected a pure 2-dimensional complex, got dim {K.dim}")
    edge_facets = ridge_incidence(K)
    if any(len(facets) != 2 for facets in edge_facets.values()):
        raise NotASurface("Some edge is not in exactly two triangles")
    if not is_connected(K):
        raise NotASurface("Surface is not connected")
    for v in K.vertices:
        if not _is_single_circle(link(K, (v,))):
            raise NotASurface(f"Link of vertex {v} is not a circle", vertex=v)
    b1 = 2 - euler_characteristic(K)
    return SurfaceClass(b1=b1, orientable=_orientable(K, edge_facets))


def vertex_link_classes(K: SimplicialComplex) -> Dict[int, SurfaceClass]:
    """Surface class of every vertex link of a normal 3-pseudomanifold."""
    require_normal(K)
    if K.dim != 3:
        raise ValueError(f"Vertex link classes need a 3-dimensional complex, got dim {K.dim}")
    return {v: surface_classify(link(K, (v,))) for v in K.vertices}


def singular_vertices(K: SimplicialComplex) -> List[int]:
    return [v for v, cls in vertex_link_classes(K).items() if not cls.is_sphere]


def singularity_multiset(K: SimplicialComplex) -> List[SurfaceClass]:
    return sort_multiset(cls for cls in vertex_link_classes(K).values() if not cls.is_sphere)


# ----------------------------------------------------------------------
# Stacked spheres


def _is_boundary_simplex(K: SimplicialComplex) -> bool:
    n = len(K.vertices)
    return n == K.dim + 2 and len(K.facets) == n


def _peel_stacked_surface(K: SimplicialComplex) -> bool:
    current = K
    while not _is_boundary_simplex(current):
        for v in current.vertices:
            if len(current.adjacency[v]) != 3:
                continue
            opposite = tuple(sorted(current.adjacency[v]))
            if opposite in current.face_set:
                continue
            current = SimplicialComplex([f for f in current.facets if v not in f] + [opposite])
            break
        else:
            return False
    return True


def is_stacked_sphere(K: SimplicialComplex) -> bool:
    """Stacked sphere test for a normal pseudomanifold of dimension >= 2.

    In dimension >= 3 this is g2 = 0. In dimension 2 every sphere has g2 = 0, so
    degree-3 vertices are removed (star replaced by the opposite triangle) until
    the boundary of a tetrahedron is reached.
    """
    require_normal(K)
    if K.dim < 2:
        raise ValueError(f"Stacked sphere recognition needs dim >= 2, got {K.dim}")
    if K.dim >= 3:
        return g2(K) == 0
    stacked = _peel_stacked_surface(K)
    if stacked and (g2(K) != 0 or not surface_classify(K).is_sphere):
        raise PostconditionViolation("Peeled to a tetrahedron boundary but g2 or class disagrees")
    return stacked


# ----------------------------------------------------------------------
# Sides and cuts


def facet_sides(K: SimplicialComplex, cut: Iterable[int]) -> List[FrozenSet[Face]]:
    """Components of the facets of K, flooding across ridges not contained in `cut`.

    With `cut` the vertex set of a missing face, these are the sides of its boundary.
    """
    cut_set = frozenset(cut)
    incidence = ridge_incidence(K)
    graph = nx.Graph()
    graph.add_nodes_from(K.facets)
    for ridge, facets in incidence.items():
        if cut_set.issuperset(ridge):
            continue
        for i in range(len(facets) - 1):
            graph.add_edge(facets[i], facets[i + 1])
    components = [frozenset(c) for c in nx.connected_components(graph)]
    return sorted(components, key=lambda c: min(c))


def link_sides(K: SimplicialComplex, x: int, rho: Iterable[int]) -> List[FrozenSet[Face]]:
    """Sides of ∂(ρ ∖ x) inside lk(x), as sets of link facets."""
    rest = [v for v in rho if v != x]
    return facet_sides(link(K, (x,)), rest)


def _split_circle(circle: SimplicialComplex, p: int, q: int) -> Tuple[FrozenSet[Face], FrozenSet[Face]]:
    """The two arcs (as edge sets) of a circle between vertices p and q."""
    arcs = []
    for first in sorted(circle.adjacency[p]):
        edges = []
        previous, current = p, first
        edges.append(tuple(sorted((p, first))))
        while current != q:
            step = next(w for w in circle.adjacency[current] if w != previous)
            previous, current = current, step
            edges.append(tuple(sorted((previous, current))))
        arcs.append(frozenset(edges))
    return arcs[0], arcs[1]


def cut_along_circle(S: SimplicialComplex, C: Sequence[int]) -> SideReport:
    """Cut a closed surface along a circle of length three.

    Raises:
        NotACircleInSurface: if C is not three distinct vertices pairwise joined by edges of S,
            or S is not a closed surface around C
    """
    circle = tuple(C)
    if len(circle) != 3 or len(set(circle)) != 3:
        raise NotACircleInSurface(f"Only circles of length 3 are supported, got {list(circle)}")
    if S.dim != 2 or not is_pseudomanifold(S):
        raise NotACircleInSurface("Host complex is not a closed 2-pseudomanifold")
    for i in range(3):
        edge = tuple(sorted((circle[i], circle[(i + 1) % 3])))
        if edge not in S.face_set:
            raise NotACircleInSurface(f"Edge {list(edge)} of the circle is not in the surface")

    component_count = len(facet_sides(S, circle))

    # Corner walk: each circle vertex contributes two half-discs (arcs of its link);
    # triangles along a circle edge glue half-discs at its two ends.
    parent: Dict[Tuple[int, int], Tuple[int, int]] = {}

    def find(node):
        while parent[node] != node:
            parent[node] = parent[parent[node]]
            node = parent[node]
        return node

    arcs: Dict[int, Tuple[FrozenSet[Face], FrozenSet[Face]]] = {}
    for i, c in enumerate(circle):
        L = link(S, (c,))
        if not _is_single_circle(L):
            raise NotACircleInSurface(f"Link of circle vertex {c} is not a circle")
        others = [w for w in circle if w != c]
        arcs[c] = _split_circle(L, others[0], others[1])
        parent[(c, 0)] = (c, 0)
        parent[(c, 1)] = (c, 1)

    def arc_of(c: int, edge: Face) -> Tuple[int, int]:
        return (c, 0) if edge in arcs[c][0] else (c, 1)

    for i in range(3):
        a, b = circle[i], circle[(i + 1) % 3]
        for triangle in S.facets:
            if a in triangle and b in triangle:
                w = next(v for v in triangle if v != a and v != b)
                left = arc_of(a, tuple(sorted((b, w))))
                right = arc_of(b, tuple(sorted((a, w))))
                parent[find(left)] = find(right)

    halves = len({find(node) for node in parent})
    two_sided = halves == 2
    if component_count == 2 and not two_sided:
        raise PostconditionViolation(f"Circle {list(circle)} separates but is one-sided")
    return SideReport(component_count=component_count, two_sided=two_sided)
