"""
Simplicial Complexes for pseudoform

Finite abstract simplicial complexes stored by their facets. A face is a sorted
tuple of non-negative integer labels; the empty tuple is the (-1)-dimensional
face. Complexes are immutable values: every operation returns a new complex,
and derived data (face lattice, 1-skeleton, adjacency) is computed lazily and
cached on the instance.

Key Features:
- Canonical storage: facets sorted, non-maximal faces dropped on construction
- Face vectors: f, h and g vectors, g2 and Euler characteristic
- Links, closed stars, induced subcomplexes and cones
- 1-skeleton queries through networkx (edge distance, chordless circles)
- Missing simplices (boundary present, interior absent)
- Isomorphism testing by VF2 matching on the vertex/facet incidence graph
"""

import logging
import math
from functools import cached_property
from itertools import combinations
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Tuple, Union

import networkx as nx
from networkx.algorithms.isomorphism import GraphMatcher
from pydantic import BaseModel

from ..utils.config import ISOMORPHISM_VERTEX_LIMIT
from ..utils.errors import (
    DuplicateVertexInFacet,
    FaceNotPresent,
    SizeLimitExceeded,
    VertexNotPresent,
)

logger = logging.getLogger(__name__)

Face = Tuple[int, ...]
Circle = Tuple[int, ...]


def make_face(vertices: Iterable[int]) -> Face:
    """Return the canonical (sorted) face on `vertices`.

    Raises:
        DuplicateVertexInFacet: if a label repeats
        ValueError: if a label is not a non-negative integer
    """
    face = tuple(sorted(vertices))
    for label in face:
        if isinstance(label, bool) or not isinstance(label, int) or label < 0:
            raise ValueError(f"Vertex labels must be non-negative integers, got {label!r}")
    if len(set(face)) != len(face):
        raise DuplicateVertexInFacet(f"Facet {list(face)} repeats a vertex label", facet=list(face))
    return face


def _maximal(faces: Iterable[Face]) -> List[Face]:
    """Keep the inclusion-maximal faces of `faces` (empty faces dropped)."""
    unique = {face for face in faces if face}
    if not unique:
        return []
    sizes = {len(face) for face in unique}
    if len(sizes) == 1:
        return sorted(unique)
    kept: List[Face] = []
    for face in sorted(unique, key=lambda f: (-len(f), f)):
        as_set = set(face)
        if not any(len(other) > len(face) and as_set.issubset(other) for other in kept):
            kept.append(face)
    return sorted(kept)


class SimplicialComplex:
    """An immutable abstract simplicial complex given by its facets.

    The complex with no facets is the complex {∅}: dimension -1, f = (1).
    Equality and hashing use the facet set only; `name` is informational.
    """

    def __init__(self, facets: Iterable[Face] = (), name: Optional[str] = None):
        # Trusted constructor: facets must already be canonical and maximal.
        self._facets: Tuple[Face, ...] = tuple(sorted({face for face in facets if face}))
        self.name = name

    @classmethod
    def from_facets(cls, facets: Iterable[Sequence[int]], name: Optional[str] = None) -> "SimplicialComplex":
        """Build a complex from vertex lists, keeping only inclusion-maximal faces.

        Args:
            facets: iterable of vertex lists; order inside a list is irrelevant
            name: optional display name

        Returns:
            SimplicialComplex with canonical facet storage
        """
        faces = []
        for vertices in facets:
            face = make_face(vertices)
            if not face:
                raise ValueError("Facets must be nonempty")
            faces.append(face)
        return cls(_maximal(faces), name=name)

    # ------------------------------------------------------------------
    # Basic data

    @property
    def facets(self) -> Tuple[Face, ...]:
        return self._facets

    @cached_property
    def dim(self) -> int:
        return max((len(face) - 1 for face in self._facets), default=-1)

    @cached_property
    def vertices(self) -> Tuple[int, ...]:
        return tuple(sorted({v for face in self._facets for v in face}))

    @cached_property
    def vertex_set(self) -> FrozenSet[int]:
        return frozenset(self.vertices)

    @cached_property
    def faces_by_dim(self) -> Dict[int, Tuple[Face, ...]]:
        buckets: Dict[int, set] = {i: set() for i in range(self.dim + 1)}
        for facet in self._facets:
            for size in range(1, len(facet) + 1):
                buckets[size - 1].update(combinations(facet, size))
        return {i: tuple(sorted(faces)) for i, faces in buckets.items()}

    @cached_property
    def face_set(self) -> FrozenSet[Face]:
        faces = {()}
        for bucket in self.faces_by_dim.values():
            faces.update(bucket)
        return frozenset(faces)

    @cached_property
    def f_vector(self) -> Tuple[int, ...]:
        """(f_-1, f_0, ..., f_d)."""
        return (1,) + tuple(len(self.faces_by_dim[i]) for i in range(self.dim + 1))

    @cached_property
    def graph(self) -> nx.Graph:
        """The 1-skeleton G(K), frozen."""
        graph = nx.Graph()
        graph.add_nodes_from(self.vertices)
        for facet in self._facets:
            graph.add_edges_from(combinations(facet, 2))
        return nx.freeze(graph)

    @cached_property
    def adjacency(self) -> Dict[int, FrozenSet[int]]:
        return {v: frozenset(self.graph.adj[v]) for v in self.vertices}

    @cached_property
    def is_pure(self) -> bool:
        return len({len(face) for face in self._facets}) <= 1

    # ------------------------------------------------------------------
    # Value semantics

    def faces(self, dim: int) -> Tuple[Face, ...]:
        return self.faces_by_dim.get(dim, ())

    def __contains__(self, face: Iterable[int]) -> bool:
        return tuple(sorted(face)) in self.face_set

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SimplicialComplex):
            return NotImplemented
        return self._facets == other._facets

    def __hash__(self) -> int:
        return hash(self._facets)

    def __repr__(self) -> str:
        label = f" {self.name!r}" if self.name else ""
        return f"<SimplicialComplex{label} dim={self.dim} f={list(self.f_vector)}>"

    def renamed(self, name: Optional[str]) -> "SimplicialComplex":
        return SimplicialComplex(self._facets, name=name)

    def facet_list(self) -> List[List[int]]:
        return [list(face) for face in self._facets]


class FaceVectorReport(BaseModel):
    """Enumerative invariants of a complex."""

    dim: int
    f: List[int]  # f_-1 .. f_d
    h: List[int]  # h_0 .. h_{d+1}
    g: List[int]  # g_0 = h_0, g_i = h_i - h_{i-1}
    g2: int
    euler: int


def h_from_f(f: Sequence[int], d: int) -> List[int]:
    """h_i = sum_{j<=i} (-1)^{i-j} C(d+1-j, i-j) f_{j-1}, for i = 0..d+1."""
    return [
        sum((-1) ** (i - j) * math.comb(d + 1 - j, i - j) * f[j] for j in range(i + 1))
        for i in range(d + 2)
    ]


def h_to_f(h: Sequence[int], d: int) -> List[int]:
    """Inverse of h_from_f: f_{j-1} = sum_{i<=j} C(d+1-i, j-i) h_i."""
    return [
        sum(math.comb(d + 1 - i, j - i) * h[i] for i in range(j + 1))
        for j in range(d + 2)
    ]


def g2_closed_form(f: Sequence[int], d: int) -> int:
    f0 = f[1] if len(f) > 1 else 0
    f1 = f[2] if len(f) > 2 else 0
    return f1 - (d + 1) * f0 + math.comb(d + 2, 2)


def face_vectors(K: SimplicialComplex) -> FaceVectorReport:
    """Compute f, h, g vectors, g2 and the Euler characteristic of K."""
    d = K.dim
    f = list(K.f_vector)
    h = h_from_f(f, d)
    g = [h[0]] + [h[i] - h[i - 1] for i in range(1, len(h))]
    euler = sum((-1) ** i * f[i + 1] for i in range(d + 1))
    return FaceVectorReport(dim=d, f=f, h=h, g=g, g2=g2_closed_form(f, d), euler=euler)


def g2(K: SimplicialComplex) -> int:
    return g2_closed_form(K.f_vector, K.dim)


def euler_characteristic(K: SimplicialComplex) -> int:
    return sum((-1) ** i * count for i, count in enumerate(K.f_vector[1:]))


# ----------------------------------------------------------------------
# Links, stars and subcomplexes


def _require_face(K: SimplicialComplex, sigma: Iterable[int]) -> Face:
    face = tuple(sorted(sigma))
    if face not in K.face_set:
        raise FaceNotPresent(f"Face {list(face)} is not in the complex", face=list(face))
    return face


def _require_vertex(K: SimplicialComplex, v: int) -> None:
    if v not in K.vertex_set:
        raise VertexNotPresent(f"Vertex {v} is not in the complex", vertex=v)


def link(K: SimplicialComplex, sigma: Iterable[int]) -> SimplicialComplex:
    """lk(σ) = {τ : τ ∩ σ = ∅, τ ∪ σ ∈ K}; lk(∅) = K."""
    face = _require_face(K, sigma)
    if not face:
        return K
    as_set = set(face)
    return SimplicialComplex(
        tuple(v for v in facet if v not in as_set) for facet in K.facets if as_set.issubset(facet)
    )


def star(K: SimplicialComplex, sigma: Iterable[int]) -> SimplicialComplex:
    """Closed star: the facets containing σ, with their faces."""
    face = _require_face(K, sigma)
    as_set = set(face)
    return SimplicialComplex(facet for facet in K.facets if as_set.issubset(facet))


def induced_subcomplex(K: SimplicialComplex, W: Iterable[int]) -> SimplicialComplex:
    """All faces of K whose vertices lie in W."""
    keep = set(W)
    return SimplicialComplex(_maximal(tuple(v for v in facet if v in keep) for facet in K.facets))


def deletion(K: SimplicialComplex, v: int) -> SimplicialComplex:
    """K minus the open star of v (the induced subcomplex on V ∖ v)."""
    return induced_subcomplex(K, K.vertex_set - {v})


def cone(K: SimplicialComplex, apex: Optional[int] = None) -> SimplicialComplex:
    """Cone over K with a fresh (or given) apex."""
    if apex is None:
        apex = fresh_labels(K, 1)[0]
    elif apex in K.vertex_set:
        raise ValueError(f"Cone apex {apex} is already a vertex")
    if not K.facets:
        return SimplicialComplex([(apex,)])
    return SimplicialComplex(make_face(facet + (apex,)) for facet in K.facets)


def relabel(K: SimplicialComplex, mapping: Dict[int, int], name: Optional[str] = None) -> SimplicialComplex:
    """Rename vertices through `mapping` (identity outside it); must stay injective."""
    images = [mapping.get(v, v) for v in K.vertices]
    if len(set(images)) != len(images):
        raise ValueError("Relabeling must be injective on the vertex set")
    return SimplicialComplex((make_face(mapping.get(v, v) for v in facet) for facet in K.facets), name=name)


def fresh_labels(K: SimplicialComplex, count: int, start: Optional[int] = None) -> List[int]:
    """`count` unused labels: max(V)+1, max(V)+2, ... (or from `start`)."""
    first = start if start is not None else (max(K.vertices) + 1 if K.vertices else 0)
    labels = []
    candidate = first
    while len(labels) < count:
        if candidate not in K.vertex_set:
            labels.append(candidate)
        candidate += 1
    return labels


# ----------------------------------------------------------------------
# Graph queries


def is_connected(K: SimplicialComplex) -> bool:
    return len(K.vertices) > 0 and nx.is_connected(K.graph)


def edge_distance(K: SimplicialComplex, u: int, v: int) -> Union[int, float]:
    """Shortest-path length in G(K); math.inf across components."""
    _require_vertex(K, u)
    _require_vertex(K, v)
    if u == v:
        return 0
    try:
        return nx.shortest_path_length(K.graph, u, v)
    except nx.NetworkXNoPath:
        return math.inf


def graph_cone_points(K: SimplicialComplex) -> List[int]:
    """Vertices adjacent to every other vertex."""
    n = len(K.vertices)
    return [v for v in K.vertices if len(K.adjacency[v]) == n - 1]


def missing_simplices(K: SimplicialComplex, dim: int) -> List[Face]:
    """Vertex sets of size dim+1 that are not faces but whose boundary is in K."""
    if dim < 2:
        raise ValueError(f"missing_simplices needs dim >= 2, got {dim}")
    found = []
    faces = K.face_set
    for rho in K.faces(dim - 1):
        common = set.intersection(*(set(K.adjacency[x]) for x in rho))
        for w in sorted(common):
            if w <= rho[-1]:
                continue
            sigma = rho + (w,)
            if sigma in faces:
                continue
            if all(sigma[:i] + sigma[i + 1:] in faces for i in range(len(sigma) - 1)):
                found.append(sigma)
    return sorted(found)


def canonical_circle(cycle: Sequence[int]) -> Circle:
    """Rotate a cyclic vertex sequence to start at its minimum, heading to the smaller neighbour."""
    cycle = list(cycle)
    i = cycle.index(min(cycle))
    rotated = cycle[i:] + cycle[:i]
    if len(rotated) > 2 and rotated[-1] < rotated[1]:
        rotated = [rotated[0]] + rotated[1:][::-1]
    return tuple(rotated)


def induced_circles(K: SimplicialComplex, max_len: int) -> List[Circle]:
    """Vertex sets of size <= max_len whose induced subcomplex is a circle.

    Chordless cycles of G(K) are exactly the induced graph circles; a 3-cycle
    also has to avoid bounding a triangle of K.
    """
    if max_len < 3:
        raise ValueError(f"induced_circles needs max_len >= 3, got {max_len}")
    seen = set()
    circles = []
    for cycle in nx.chordless_cycles(K.graph, length_bound=max_len):
        if len(cycle) < 3:
            continue
        key = frozenset(cycle)
        if key in seen:
            continue
        seen.add(key)
        if len(cycle) == 3 and tuple(sorted(cycle)) in K.face_set:
            continue
        circles.append(canonical_circle(cycle))
    return sorted(circles, key=lambda c: (len(c), c))


# ----------------------------------------------------------------------
# Isomorphism


def _vertex_signatures(K: SimplicialComplex) -> Dict[int, Tuple]:
    return {v: (len(K.adjacency[v]), link(K, (v,)).f_vector) for v in K.vertices}


def _incidence_graph(K: SimplicialComplex, signatures: Dict[int, Tuple]) -> nx.Graph:
    graph = nx.Graph()
    for v in K.vertices:
        graph.add_node(("v", v), sig=("v",) + signatures[v])
    for facet in K.facets:
        graph.add_node(("f", facet), sig=("f", len(facet)))
        graph.add_edges_from((("f", facet), ("v", v)) for v in facet)
    return graph


def is_isomorphic(
    K1: SimplicialComplex,
    K2: SimplicialComplex,
    max_vertices: int = ISOMORPHISM_VERTEX_LIMIT,
) -> Optional[Dict[int, int]]:
    """Return a vertex bijection mapping the facets of K1 onto those of K2, or None.

    Raises:
        SizeLimitExceeded: if either complex has more than `max_vertices` vertices
    """
    for K in (K1, K2):
        if len(K.vertices) > max_vertices:
            raise SizeLimitExceeded(
                f"Isomorphism test limited to {max_vertices} vertices, got {len(K.vertices)}",
                limit=max_vertices,
            )
    if K1.f_vector != K2.f_vector:
        return None
    if K1 == K2:
        return {v: v for v in K1.vertices}
    sig1 = _vertex_signatures(K1)
    sig2 = _vertex_signatures(K2)
    if sorted(sig1.values()) != sorted(sig2.values()):
        return None

    matcher = GraphMatcher(
        _incidence_graph(K1, sig1),
        _incidence_graph(K2, sig2),
        node_match=lambda a, b: a["sig"] == b["sig"],
    )
    if not matcher.is_isomorphic():
        return None
    mapping = {node[1]: image[1] for node, image in matcher.mapping.items() if node[0] == "v"}
    logger.debug(f"Isomorphism found on {len(mapping)} vertices")
    return mapping
