"""
Relatively Minimal Decomposition for pseudoform

A normal 3-pseudomanifold K is relatively minimal with respect to a face σ when
g2(K) = g2(lk σ). This module finds such witnesses, checks their structural
consequences, and decomposes a relatively minimal complex into a surface (or
the boundary of the 4-simplex) through recognised constructions:

- peel facet subdivisions (degree-4 vertices whose link bounds a missing tetrahedron)
- recognise a one-vertex suspension of lk(u)
- otherwise unfold at a missing tetrahedron containing u and recurse

The result is an OperationTrace: a tree whose leaves are seed complexes and
whose inner nodes are ConstructionRecords; `replay` rebuilds the input exactly.

It also builds pseudocompression-body models: for an admissible singularity
multiset, a normal 3-pseudomanifold that is relatively minimal at its top
vertex and realises the multiset.
"""

import logging
import random
from dataclasses import dataclass, field
from itertools import permutations
from typing import List, Optional, Sequence, Set, Tuple

from pydantic import BaseModel, Field

from ..core.analysis import (
    PROJECTIVE_PLANE,
    SPHERE,
    SurfaceClass,
    is_stacked_sphere,
    require_normal,
    singular_vertices,
    singularity_multiset,
    sort_multiset,
    surface_classify,
    vertex_link_classes,
)
from ..core.complex import (
    Circle,
    Face,
    SimplicialComplex,
    face_vectors,
    fresh_labels,
    g2,
    graph_cone_points,
    induced_circles,
    link,
    missing_simplices,
    star,
)
from ..utils.config import INDUCED_CIRCLE_CAP, SUBDIVISION_BUDGET, resolve_seed
from ..utils.errors import (
    BadParameters,
    DecompositionStuck,
    EmptyMultiset,
    G2Mismatch,
    PostconditionViolation,
    PseudoformError,
    SearchExhausted,
    StructureViolation,
)
from .constructions import (
    BijectionKind,
    ConstructionRecord,
    FacetBijection,
    apply_record,
    connected_sum,
    connected_sum_relabeling,
    fold_candidates,
    grow_fold_sites,
    one_vertex_suspension,
    vertex_fold,
)
from .recognition import (
    HandleWitness,
    Verdict,
    classify_missing_tetrahedron,
    edge_unfold,
    edge_unfold_bijection,
    split_connected_sum,
    vertex_unfold,
    vertex_unfold_bijection,
)

logger = logging.getLogger(__name__)


# ----------------------------------------------------------------------
# Traces


class TraceNode(BaseModel):
    """A construction tree: leaves carry a seed complex, inner nodes a record."""

    record: Optional[ConstructionRecord] = None
    children: List["TraceNode"] = Field(default_factory=list)
    name: Optional[str] = None  # leaf label
    facets: Optional[List[List[int]]] = None  # leaf complex

    @classmethod
    def leaf(cls, K: SimplicialComplex, name: str) -> "TraceNode":
        return cls(name=name, facets=K.facet_list())

    @property
    def is_leaf(self) -> bool:
        return self.record is None

    def operations(self) -> List[str]:
        """Operation names in construction order (children first)."""
        ops = []
        for child in self.children:
            ops.extend(child.operations())
        if self.record is not None:
            ops.append(self.record.op)
        return ops

    def leaves(self) -> List["TraceNode"]:
        if self.is_leaf:
            return [self]
        return [leaf for child in self.children for leaf in child.leaves()]


TraceNode.model_rebuild()

OperationTrace = TraceNode


def replay(trace: TraceNode) -> SimplicialComplex:
    """Rebuild the complex a trace describes."""
    if trace.is_leaf:
        if trace.facets is None:
            raise ValueError(f"Leaf {trace.name} carries no facets")
        return SimplicialComplex.from_facets(trace.facets, name=trace.name)
    inputs = [replay(child) for child in trace.children]
    return apply_record(trace.record, inputs)


def _wrap(node: TraceNode, records: Sequence[ConstructionRecord]) -> TraceNode:
    for record in records:
        node = TraceNode(record=record, children=[node])
    return node


# ----------------------------------------------------------------------
# Witnesses and structure


class RelMinWitness(BaseModel):
    face: List[int]
    g2_complex: int
    g2_link: int


class StructureLemmaReport(BaseModel):
    face: List[int]
    circles_in_link: bool
    circle_counterexample: Optional[List[int]] = None
    outside_links_stacked: bool
    link_counterexample: Optional[int] = None

    @property
    def holds(self) -> bool:
        return self.circles_in_link and self.outside_links_stacked


def relatively_minimal_witnesses(K: SimplicialComplex) -> List[RelMinWitness]:
    """Faces σ of dimension <= d-3 with g2(K) = g2(lk σ)."""
    require_normal(K)
    d = K.dim
    if d < 3:
        raise ValueError(f"Relative minimality needs dim >= 3, got {d}")
    total = g2(K)
    witnesses = []
    for dim in range(0, d - 2):
        for face in K.faces(dim):
            g2_link = g2(link(K, face))
            if g2_link == total:
                witnesses.append(RelMinWitness(face=list(face), g2_complex=total, g2_link=g2_link))
    return witnesses


def _circle_edges(circle: Circle) -> List[Face]:
    return [tuple(sorted((circle[i], circle[(i + 1) % len(circle)]))) for i in range(len(circle))]


def check_structure_lemmas(
    K: SimplicialComplex, sigma: Sequence[int], cap: int = INDUCED_CIRCLE_CAP
) -> StructureLemmaReport:
    """For a witness σ: induced circles of length <= cap lie in lk σ, and every vertex
    outside st σ has a stacked link.

    Raises:
        StructureViolation: if σ is not a relatively minimal witness
    """
    require_normal(K)
    face = tuple(sorted(sigma))
    L = link(K, face)
    if g2(L) != g2(K):
        raise StructureViolation(f"{list(face)} is not a relatively minimal witness", face=list(face))

    counterexample = None
    for circle in induced_circles(K, cap):
        if any(edge not in L.face_set for edge in _circle_edges(circle)):
            counterexample = list(circle)
            break

    star_vertices = set(star(K, face).vertices)
    bad_vertex = None
    for v in K.vertices:
        if v in star_vertices:
            continue
        if not is_stacked_sphere(link(K, (v,))):
            bad_vertex = v
            break

    return StructureLemmaReport(
        face=list(face),
        circles_in_link=counterexample is None,
        circle_counterexample=counterexample,
        outside_links_stacked=bad_vertex is None,
        link_counterexample=bad_vertex,
    )


# ----------------------------------------------------------------------
# Peeling


def _removable(K: SimplicialComplex, v: int) -> Optional[Face]:
    neighbors = K.adjacency[v]
    if len(neighbors) != K.dim + 1:
        return None
    if sum(1 for facet in K.facets if v in facet) != K.dim + 1:
        return None
    sigma = tuple(sorted(neighbors))
    if sigma in K.face_set:
        return None
    return sigma


def peel_facet_subdivisions(
    K: SimplicialComplex, protected: Sequence[int] = ()
) -> Tuple[SimplicialComplex, List[ConstructionRecord]]:
    """Undo facet subdivisions, largest removable label first.

    A vertex v is removable when lk(v) = ∂σ for a (d+1)-set σ that is not a face.
    Stops at the boundary of the (d+1)-simplex.

    Returns:
        (core, records) where replaying the records on the core gives K back
    """
    require_normal(K)
    keep = set(protected)
    current = K
    undone: List[ConstructionRecord] = []
    while len(current.vertices) > current.dim + 2:
        for v in sorted(current.vertices, reverse=True):
            if v in keep:
                continue
            sigma = _removable(current, v)
            if sigma is None:
                continue
            current = SimplicialComplex([f for f in current.facets if v not in f] + [sigma])
            undone.append(ConstructionRecord(op="facet_subdivide", face=list(sigma), fresh={"apex": v}))
            break
        else:
            break
    if undone:
        logger.debug(f"Peeled {len(undone)} facet subdivisions, f0 {len(K.vertices)} -> {len(current.vertices)}")
    return current, list(reversed(undone))


# ----------------------------------------------------------------------
# Decomposition


def _suspension_node(core: SimplicialComplex, u: int, v: int) -> Optional[TraceNode]:
    """Recognise core = Σ_v(lk u) with suspension points u and v."""
    surface = link(core, (u,))
    if v not in surface.vertex_set:
        return None
    lk_u = surface.face_set
    for triangle in link(core, (v,)).facets:
        if u not in triangle and triangle not in lk_u:
            return None
    record = ConstructionRecord(op="one_vertex_suspension", vertex=v, fresh={"x": u, "y": v})
    try:
        rebuilt = apply_record(record, [surface])
    except PseudoformError as e:
        logger.debug(f"Suspension at {u},{v} rejected: {e}")
        return None
    if rebuilt != core:
        return None
    return TraceNode(record=record, children=[TraceNode.leaf(surface, "surface")])


def _require_witness(K: SimplicialComplex, u: int) -> None:
    if u not in K.vertex_set:
        raise DecompositionStuck(f"Vertex {u} is not in the complex", state=K.facet_list())
    if g2(link(K, (u,))) != g2(K):
        raise DecompositionStuck(
            f"Vertex {u} is not a relatively minimal witness (g2 {g2(K)} vs {g2(link(K, (u,)))})",
            state=K.facet_list(),
        )


def decompose_relmin(K: SimplicialComplex, u: int) -> TraceNode:
    """Decompose a 3-pseudomanifold that is relatively minimal with respect to vertex u.

    Raises:
        DecompositionStuck: with the current state, if no step applies
    """
    require_normal(K)
    if K.dim != 3:
        raise ValueError(f"decompose_relmin works in dimension 3, got {K.dim}")
    _require_witness(K, u)

    core, records = peel_facet_subdivisions(K, protected=[u])
    if g2(core) == 0:
        core, extra = peel_facet_subdivisions(core)
        records = extra + records
        if len(core.vertices) != 5:
            raise DecompositionStuck("Stacked core did not peel to the 4-simplex boundary", state=core.facet_list())
        logger.info(f"Decomposition reached the 4-simplex boundary after {len(records)} subdivisions")
        return _wrap(TraceNode.leaf(core, "boundary_simplex"), records)

    if not _same_edges(core, u):
        raise DecompositionStuck(f"G(K) differs from G(st {u}) after peeling", state=core.facet_list())

    for v in singular_vertices(core):
        if v == u:
            continue
        node = _suspension_node(core, u, v)
        if node is not None:
            logger.info(f"Recognised a one-vertex suspension of lk({u}) at {v}")
            return _wrap(node, records)

    node = _unfold_step(core, u)
    if node is None:
        raise DecompositionStuck(f"No construction step applies at {u}", state=core.facet_list())
    return _wrap(node, records)


def _same_edges(K: SimplicialComplex, u: int) -> bool:
    star_edges = {tuple(sorted(e)) for e in star(K, (u,)).graph.edges()}
    return star_edges == {tuple(sorted(e)) for e in K.graph.edges()}


def _unfold_step(core: SimplicialComplex, u: int) -> Optional[TraceNode]:
    candidates = [tau for tau in missing_simplices(core, 3) if u in tau]
    classified = []
    for tau in candidates:
        try:
            classified.append(classify_missing_tetrahedron(core, tau, check_normal=False))
        except PseudoformError as e:
            logger.debug(f"Skipping {list(tau)}: {e}")

    for c in classified:
        if c.verdict != Verdict.SUM_OR_HANDLE:
            continue
        split = split_connected_sum(core, c.tetra)
        if isinstance(split, HandleWitness):
            continue
        K1, K2 = split
        identity = FacetBijection.from_mapping({v: v for v in c.tetra})
        record = ConstructionRecord.for_bijection("connected_sum", identity)
        logger.info(f"Splitting along {c.tetra}")
        return TraceNode(record=record, children=[decompose_relmin(K1, u), decompose_relmin(K2, u)])

    for c in classified:
        if c.verdict != Verdict.VERTEX_FOLD_AT or c.apex != u:
            continue
        try:
            unfolded = vertex_unfold(core, c.tetra, u)
        except PseudoformError as e:
            logger.debug(f"Vertex unfolding along {c.tetra} failed: {e}")
            continue
        record = ConstructionRecord.for_bijection("vertex_fold", vertex_unfold_bijection(core, c.tetra, u))
        logger.info(f"Vertex unfolding at {u} along {c.tetra}")
        return TraceNode(record=record, children=[decompose_relmin(unfolded, u)])

    for c in classified:
        if c.verdict != Verdict.EDGE_FOLD_AT or u not in c.edge:
            continue
        try:
            unfolded = edge_unfold(core, c.tetra, c.edge)
        except PseudoformError as e:
            logger.debug(f"Edge unfolding along {c.tetra} failed: {e}")
            continue
        record = ConstructionRecord.for_bijection("edge_fold", edge_unfold_bijection(core, c.tetra, c.edge))
        logger.info(f"Edge unfolding at {c.edge} along {c.tetra}")
        return TraceNode(record=record, children=[decompose_relmin(unfolded, u)])
    return None


# ----------------------------------------------------------------------
# g2 = 3


class G2ThreeVerdict(BaseModel):
    kind: str  # "no_singularities" or "suspension"
    surface: Optional[List[List[int]]] = None
    cone_point: Optional[int] = None
    suspension_point: Optional[int] = None
    records: List[ConstructionRecord] = Field(default_factory=list)


def classify_g2_3(K: SimplicialComplex) -> G2ThreeVerdict:
    """Classify a normal 3-pseudomanifold with g2 = 3.

    Either K has no singularities, or K is obtained from a one-vertex suspension
    of an RP^2 at a graph cone point by facet subdivisions.

    Raises:
        G2Mismatch: if g2(K) != 3
        StructureViolation: if the singularities do not fit either case
    """
    require_normal(K)
    if K.dim != 3:
        raise ValueError(f"classify_g2_3 works in dimension 3, got {K.dim}")
    if g2(K) != 3:
        raise G2Mismatch(f"g2 = {g2(K)}, expected 3", g2=g2(K))

    classes = vertex_link_classes(K)
    singular = sorted(v for v, cls in classes.items() if not cls.is_sphere)
    if not singular:
        return G2ThreeVerdict(kind="no_singularities")
    if len(singular) != 2 or any(classes[v] != PROJECTIVE_PLANE for v in singular):
        raise StructureViolation(
            f"Singular vertices {singular} do not form a pair of RP^2 singularities", singular=singular
        )

    core, records = peel_facet_subdivisions(K, protected=singular)
    for x, y in (singular, singular[::-1]):
        node = _suspension_node(core, x, y)
        if node is None:
            continue
        surface = link(core, (x,))
        if y not in graph_cone_points(surface):
            continue
        return G2ThreeVerdict(
            kind="suspension", surface=surface.facet_list(), cone_point=y, suspension_point=x, records=records
        )
    raise StructureViolation("Core is not a one-vertex suspension of an RP^2", state=core.facet_list())


def verify_h_identity(K: SimplicialComplex) -> bool:
    """h3 - h1 = Σ_v (2 - χ(lk v)) for a normal 3-pseudomanifold."""
    require_normal(K)
    if K.dim != 3:
        raise ValueError(f"verify_h_identity works in dimension 3, got {K.dim}")
    h = face_vectors(K).h
    defect = sum(2 - cls.euler for cls in vertex_link_classes(K).values())
    return h[3] - h[1] == defect


# ----------------------------------------------------------------------
# Pseudocompression bodies


class PCBMultisetVerdict(BaseModel):
    admissible: bool
    failed_condition: Optional[str] = None
    multiset: List[SurfaceClass]


def pcb_multiset_admissible(M: Sequence[SurfaceClass]) -> PCBMultisetVerdict:
    """Decide whether a multiset of surfaces is the singularity multiset of a
    pseudocompression body. K1 is the first entry after sorting by (-b1, orientable).

    Conditions, checked in order:
        parity: Σ b1 is even
        orientability_closure: K1 orientable implies every entry orientable
        dominance: b1(K1) >= Σ_{i>=2} b1(Ki)
        nonorientable_strict: K1 non-orientable implies b1(K1) > Σ of orientable b1

    Raises:
        EmptyMultiset: for an empty multiset
    """
    if not M:
        raise EmptyMultiset("A singularity multiset needs at least one surface")
    classes = sort_multiset(M)
    if any(cls.is_sphere for cls in classes):
        raise BadParameters("Singularity multisets contain no spheres")
    top, rest = classes[0], classes[1:]

    def verdict(failed: Optional[str]) -> PCBMultisetVerdict:
        return PCBMultisetVerdict(admissible=failed is None, failed_condition=failed, multiset=classes)

    if sum(cls.b1 for cls in classes) % 2:
        return verdict("parity")
    if top.orientable and not all(cls.orientable for cls in rest):
        return verdict("orientability_closure")
    if top.b1 < sum(cls.b1 for cls in rest):
        return verdict("dominance")
    if not top.orientable and top.b1 <= sum(cls.b1 for cls in rest if cls.orientable):
        return verdict("nonorientable_strict")
    return verdict(None)


def gamma_bounds(M: Sequence[SurfaceClass], built: Optional[SimplicialComplex] = None) -> Tuple[int, Optional[int]]:
    """Bounds on the least g2 over normal 3-pseudomanifolds with singularities M.

    The lower bound is g2 of the largest singular link, 3 * max b1. The upper bound
    is g2 of `built` when given.
    """
    if not M:
        raise EmptyMultiset("A singularity multiset needs at least one surface")
    lower = 3 * max(cls.b1 for cls in M)
    upper = g2(built) if built is not None else None
    if upper is not None and upper < lower:
        raise PostconditionViolation(f"Upper bound {upper} is below the lower bound {lower}")
    return lower, upper


@dataclass
class PseudocompressionResult:
    complex: SimplicialComplex
    trace: TraceNode
    top: int
    bottoms: List[int] = field(default_factory=list)
    gamma: Tuple[int, Optional[int]] = (0, None)


def _combine_class(a: SurfaceClass, b: SurfaceClass) -> SurfaceClass:
    return SurfaceClass(b1=a.b1 + b.b1, orientable=a.orientable and b.orientable)


def _suspended_bottom(cls: SurfaceClass, seed: int) -> Tuple[SimplicialComplex, TraceNode, int, int]:
    from ..catalog import cone_point_surface

    surface = cone_point_surface(cls.b1, cls.orientable, seed=seed)
    v = graph_cone_points(surface)[0]
    x, y = fresh_labels(surface, 2)
    X = one_vertex_suspension(surface, v, x=x, y=y)
    record = ConstructionRecord(op="one_vertex_suspension", vertex=v, fresh={"x": x, "y": y})
    return X, TraceNode(record=record, children=[TraceNode.leaf(surface, "surface")]), y, x


def _first_facet(K: SimplicialComplex, vertex: int, avoid: Set[int]) -> Face:
    return next(f for f in K.facets if vertex in f and not avoid.intersection(f))


def _sum_bottoms(
    pieces: List[Tuple[SimplicialComplex, TraceNode, int, int]]
) -> Tuple[SimplicialComplex, TraceNode, int, List[int]]:
    K, trace, top, first_bottom = pieces[0]
    bottoms = [first_bottom]
    for X, X_trace, y, x in pieces[1:]:
        sigma1 = _first_facet(K, top, set(bottoms))
        sigma2 = _first_facet(X, y, {x})
        rest1 = [w for w in sigma1 if w != top]
        rest2 = [w for w in sigma2 if w != y]
        psi = FacetBijection.from_mapping({top: y, **dict(zip(rest1, rest2))})
        relabel = connected_sum_relabeling(K, X, psi)
        K = connected_sum(K, X, psi, relabel=relabel)
        record = ConstructionRecord.for_bijection("connected_sum", psi, relabel=relabel)
        trace = TraceNode(record=record, children=[trace, X_trace])
        bottoms.append(relabel.get(x, x))
    return K, trace, top, bottoms


def _fold_toward(
    K: SimplicialComplex, top: int, bottoms: Sequence[int], orientable: bool, budget: int
) -> Tuple[SimplicialComplex, List[ConstructionRecord]]:
    """One vertex folding at `top` whose new link has the requested orientability."""
    for psi in fold_candidates(K, top, avoid=bottoms):
        folded = vertex_fold(K, psi)
        if surface_classify(link(folded, (top,))).orientable == orientable:
            return folded, [ConstructionRecord.for_bijection("vertex_fold", psi)]

    steps = 6
    if 2 * steps > budget:
        raise SearchExhausted(f"Growing fold sites needs {2 * steps} subdivisions, budget is {budget}")
    grown, sigma1, sigma2, records = grow_fold_sites(K, top, avoid=bottoms, steps=steps)
    rest1 = [w for w in sigma1 if w != top]
    rest2 = [w for w in sigma2 if w != top]
    for image in permutations(rest2):
        psi = FacetBijection.from_mapping(
            {top: top, **dict(zip(rest1, image))}, kind=BijectionKind.VERTEX_FOLDING, apex=top
        )
        try:
            folded = vertex_fold(grown, psi)
        except PseudoformError as e:
            logger.debug(f"Fold {psi.pairs} rejected: {e}")
            continue
        if surface_classify(link(folded, (top,))).orientable == orientable:
            return folded, records + [ConstructionRecord.for_bijection("vertex_fold", psi)]
    raise SearchExhausted(f"No vertex folding at {top} reaches orientable={orientable}")


def build_pseudocompression(
    M: Sequence[SurfaceClass], seed: Optional[int] = None, budget: int = SUBDIVISION_BUDGET
) -> PseudocompressionResult:
    """Build a normal 3-pseudomanifold with singularity multiset M, relatively
    minimal with respect to its top vertex.

    Bottoms are one-vertex suspensions of cone-point surfaces, joined by connected
    sums at their top vertices; vertex foldings at the top then add handles until
    the top link has the class of K1.

    Raises:
        BadParameters: if M is not admissible
        SearchExhausted: if a fold site cannot be found within the budget
    """
    verdict = pcb_multiset_admissible(M)
    if not verdict.admissible:
        raise BadParameters(f"Multiset is not admissible: {verdict.failed_condition}", condition=verdict.failed_condition)
    rng = random.Random(resolve_seed(seed))
    target, bottom_classes = verdict.multiset[0], verdict.multiset[1:]

    if bottom_classes:
        pieces = [_suspended_bottom(cls, rng.randrange(2**31)) for cls in bottom_classes]
        K, trace, top, bottoms = _sum_bottoms(pieces)
        current = SPHERE
        for cls in bottom_classes:
            current = _combine_class(current, cls)
    else:
        from ..catalog import boundary_simplex

        K = boundary_simplex(4)
        trace, top, bottoms, current = TraceNode.leaf(K, "boundary_simplex"), 0, [], SPHERE

    for _ in range((target.b1 - current.b1) // 2):
        K, records = _fold_toward(K, top, bottoms, target.orientable, budget)
        trace = _wrap(trace, records)

    require_normal(K)
    realised = singularity_multiset(K)
    if realised != verdict.multiset:
        raise PostconditionViolation(
            f"Built multiset {[c.model_dump() for c in realised]} differs from the request",
        )
    if g2(K) != g2(link(K, (top,))):
        raise PostconditionViolation(f"Built complex is not relatively minimal at its top vertex {top}")
    logger.info(f"Built a pseudocompression body with f = {list(K.f_vector)}, g2 = {g2(K)}")
    return PseudocompressionResult(
        complex=K, trace=trace, top=top, bottoms=bottoms, gamma=gamma_bounds(verdict.multiset, K)
    )


def preserves_relative_minimality(before: SimplicialComplex, after: SimplicialComplex, face: Sequence[int]) -> bool:
    """Whether a construction kept `face` a relatively minimal witness."""
    sigma = tuple(sorted(face))
    was = g2(link(before, sigma)) == g2(before)
    return (not was) or g2(link(after, sigma)) == g2(after)
