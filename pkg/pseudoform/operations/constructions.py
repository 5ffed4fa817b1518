"""
Constructions for pseudoform

The forward operations on pseudomanifolds, each with exact postcondition checks
on g2 and on the links of identified vertices:

1. One-vertex suspension Σ_vK
2. Facet subdivision
3. Connected sum along an admissible facet bijection
4. Handle addition (two facets of the same complex, plain admissible bijection)
5. Vertex folding (bijection fixing a shared apex)
6. Edge folding (bijection fixing a shared edge), with a normality flag in dimension 3

All identifications merge the target vertex into the source label and drop the
identified facet. Fresh vertices take labels max(V)+1, max(V)+2, ... unless
given explicitly, and every operation is recorded as a ConstructionRecord that
`apply_record` replays exactly.
"""

import logging
import math
from enum import Enum
from itertools import combinations, permutations
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import networkx as nx
from pydantic import BaseModel, Field, model_validator

from ..core.complex import (
    Face,
    SimplicialComplex,
    edge_distance,
    fresh_labels,
    g2,
    is_isomorphic,
    link,
    make_face,
)
from ..utils.errors import NotAdmissible, NotAFacet, PostconditionViolation, VertexNotPresent

logger = logging.getLogger(__name__)


class BijectionKind(str, Enum):
    PLAIN = "plain"
    VERTEX_FOLDING = "vertex_folding"
    EDGE_FOLDING = "edge_folding"


class NormalityFlag(str, Enum):
    NORMAL = "normal"
    NON_NORMAL = "non_normal"
    UNCHECKED = "unchecked"


class FacetBijection(BaseModel):
    """A bijection ψ from the source facet onto the target facet."""

    source: List[int]
    target: List[int]
    pairs: List[Tuple[int, int]]
    kind: BijectionKind = BijectionKind.PLAIN
    apex: Optional[int] = None  # vertex folding: the fixed vertex
    edge: Optional[List[int]] = None  # edge folding: the fixed edge

    @model_validator(mode="after")
    def _check_bijection(self) -> "FacetBijection":
        self.source = sorted(self.source)
        self.target = sorted(self.target)
        self.pairs = sorted((int(a), int(b)) for a, b in self.pairs)
        if sorted(a for a, _ in self.pairs) != self.source or len(set(self.source)) != len(self.source):
            raise ValueError("Pairs must cover the source facet exactly once")
        if sorted(b for _, b in self.pairs) != self.target or len(set(self.target)) != len(self.target):
            raise ValueError("Pairs must cover the target facet exactly once")
        mapping = dict(self.pairs)
        if self.kind == BijectionKind.VERTEX_FOLDING:
            if self.apex is None or mapping.get(self.apex) != self.apex:
                raise ValueError("A vertex folding must fix its apex")
        if self.kind == BijectionKind.EDGE_FOLDING:
            if self.edge is None or len(self.edge) != 2:
                raise ValueError("An edge folding needs an edge")
            self.edge = sorted(self.edge)
            if any(mapping.get(v) != v for v in self.edge):
                raise ValueError("An edge folding must fix both edge endpoints")
        return self

    @classmethod
    def from_mapping(
        cls,
        mapping: Dict[int, int],
        kind: BijectionKind = BijectionKind.PLAIN,
        apex: Optional[int] = None,
        edge: Optional[Sequence[int]] = None,
    ) -> "FacetBijection":
        return cls(
            source=list(mapping.keys()),
            target=list(mapping.values()),
            pairs=list(mapping.items()),
            kind=kind,
            apex=apex,
            edge=list(edge) if edge is not None else None,
        )

    @property
    def mapping(self) -> Dict[int, int]:
        return dict(self.pairs)

    @property
    def source_face(self) -> Face:
        return tuple(self.source)

    @property
    def target_face(self) -> Face:
        return tuple(self.target)

    @property
    def fixed(self) -> Tuple[int, ...]:
        if self.kind == BijectionKind.VERTEX_FOLDING:
            return (self.apex,)
        if self.kind == BijectionKind.EDGE_FOLDING:
            return tuple(self.edge)
        return ()

    def merge_map(self) -> Dict[int, int]:
        """target label -> source label, for the moving vertices."""
        return {b: a for a, b in self.pairs if a != b}


class AdmissibilityReport(BaseModel):
    admissible: bool
    kind: BijectionKind
    violation: Optional[str] = None
    pair: Optional[Tuple[int, int]] = None
    witness: Optional[List[int]] = None  # offending short path


class ConstructionRecord(BaseModel):
    """One replayable construction step."""

    op: str
    inputs: List[str] = Field(default_factory=list)
    face: Optional[List[int]] = None  # facet subdivided
    vertex: Optional[int] = None  # suspension vertex
    bijection: Optional[List[Tuple[int, int]]] = None
    kind: Optional[BijectionKind] = None
    apex: Optional[int] = None
    edge: Optional[List[int]] = None
    fresh: Dict[str, int] = Field(default_factory=dict)
    relabel: Dict[int, int] = Field(default_factory=dict)

    def facet_bijection(self) -> FacetBijection:
        if self.bijection is None:
            raise ValueError(f"Record for {self.op} carries no bijection")
        return FacetBijection.from_mapping(
            dict(self.bijection), kind=self.kind or BijectionKind.PLAIN, apex=self.apex, edge=self.edge
        )

    @classmethod
    def for_bijection(cls, op: str, psi: FacetBijection, **fields) -> "ConstructionRecord":
        return cls(op=op, bijection=list(psi.pairs), kind=psi.kind, apex=psi.apex, edge=psi.edge, **fields)


# ----------------------------------------------------------------------
# Shared helpers


def _identify(facets: Sequence[Face], merge: Dict[int, int], removed: Face) -> List[Face]:
    """Apply `merge` to every facet and drop the copies of `removed`.

    Raises PostconditionViolation if the identification collapses a facet or glues
    two facets other than the removed one.
    """
    result = set()
    for facet in facets:
        image = tuple(sorted({merge.get(v, v) for v in facet}))
        if len(image) != len(facet):
            raise PostconditionViolation(f"Identification collapses facet {list(facet)}")
        if image == removed:
            continue
        if image in result:
            raise PostconditionViolation(f"Identification glues an extra facet {list(image)}")
        result.add(image)
    return sorted(result)


def _require_facet(K: SimplicialComplex, face: Sequence[int]) -> Face:
    facet = tuple(sorted(face))
    if facet not in set(K.facets):
        raise NotAFacet(f"{list(facet)} is not a facet", face=list(facet))
    return facet


def _check_g2(label: str, before: int, after: int, delta: int) -> None:
    if after != before + delta:
        raise PostconditionViolation(f"{label}: g2 went from {before} to {after}, expected +{delta}")


def _check_link(label: str, result: SimplicialComplex, vertex: int, expected_facets: List[Face]) -> None:
    actual = link(result, (vertex,))
    if actual != SimplicialComplex(expected_facets):
        raise PostconditionViolation(f"{label}: link of {vertex} differs from the expected identification")


def _merged_link_facets(
    K: SimplicialComplex, vertices: Sequence[int], merge: Dict[int, int], removed: Face
) -> List[Face]:
    """Identify the links of `vertices` (all merging to one vertex) along `merge`."""
    facets: List[Face] = []
    for v in vertices:
        facets.extend(link(K, (v,)).facets)
    return _identify(facets, merge, removed)


# ----------------------------------------------------------------------
# Suspensions and subdivisions


def one_vertex_suspension(
    K: SimplicialComplex, v: int, x: Optional[int] = None, y: Optional[int] = None
) -> SimplicialComplex:
    """Σ_vK: replace v by the edge xy with lk(xy) = lk(v), and cone the rest from x and y.

    Args:
        K: input complex
        v: the suspended vertex (removed from the output)
        x, y: labels of the suspension points; default max(V)+1, max(V)+2.
              Either may reuse the label v.
    """
    if v not in K.vertex_set:
        raise VertexNotPresent(f"Vertex {v} is not in the complex", vertex=v)
    if x is None or y is None:
        first, second = fresh_labels(K, 2)
        x = first if x is None else x
        y = second if y is None else y
    taken = K.vertex_set - {v}
    if x == y or x in taken or y in taken:
        raise ValueError(f"Suspension points {x}, {y} must be distinct labels not used by K - v")

    lk_v = link(K, (v,))
    facets = [make_face(tau + (x, y)) for tau in lk_v.facets]
    for facet in K.facets:
        if v in facet:
            continue
        facets.append(make_face(facet + (x,)))
        facets.append(make_face(facet + (y,)))
    result = SimplicialComplex(facets)

    non_neighbors = len(K.vertices) - 1 - len(K.adjacency[v])
    _check_g2("one_vertex_suspension", g2(K), g2(result), non_neighbors)
    if link(result, (x, y)) != lk_v:
        raise PostconditionViolation("one_vertex_suspension: lk(xy) differs from lk(v)")
    logger.debug(f"Suspended vertex {v} into edge {x}{y}, g2 +{non_neighbors}")
    return result


def two_point_suspension(K: SimplicialComplex, x: Optional[int] = None, y: Optional[int] = None) -> SimplicialComplex:
    if x is None or y is None:
        x, y = fresh_labels(K, 2)
    return SimplicialComplex([make_face(f + (x,)) for f in K.facets] + [make_face(f + (y,)) for f in K.facets])


def _stellar_subdivide_edge(K: SimplicialComplex, edge: Sequence[int], w: int) -> SimplicialComplex:
    a, b = sorted(edge)
    facets = []
    for facet in K.facets:
        if a in facet and b in facet:
            facets.append(make_face([u for u in facet if u != a] + [w]))
            facets.append(make_face([u for u in facet if u != b] + [w]))
        else:
            facets.append(facet)
    return SimplicialComplex(facets)


def verify_suspension_subdivision(K: SimplicialComplex, v: int) -> bool:
    """Subdividing the edge xy of Σ_vK (new vertex labelled v) gives the two-point suspension."""
    x, y = fresh_labels(K, 2)
    suspended = one_vertex_suspension(K, v, x=x, y=y)
    subdivided = _stellar_subdivide_edge(suspended, (x, y), v)
    expected = two_point_suspension(K, x, y)
    return subdivided.f_vector == expected.f_vector and is_isomorphic(subdivided, expected) is not None


def facet_subdivide(K: SimplicialComplex, sigma: Sequence[int], apex: Optional[int] = None) -> SimplicialComplex:
    """Replace the facet σ by the cone over its boundary from a fresh apex."""
    facet = _require_facet(K, sigma)
    if K.dim < 2:
        raise ValueError(f"facet_subdivide needs dim >= 2, got {K.dim}")
    if apex is None:
        apex = fresh_labels(K, 1)[0]
    elif apex in K.vertex_set:
        raise ValueError(f"Subdivision apex {apex} is already a vertex")
    facets = [f for f in K.facets if f != facet]
    facets.extend(make_face(facet[:i] + facet[i + 1:] + (apex,)) for i in range(len(facet)))
    result = SimplicialComplex(facets)
    _check_g2("facet_subdivide", g2(K), g2(result), 0)
    return result


# ----------------------------------------------------------------------
# Admissibility


def _violation(kind, text, pair, witness) -> AdmissibilityReport:
    return AdmissibilityReport(admissible=False, kind=kind, violation=text, pair=pair, witness=witness)


def _short_path_violation(
    K: SimplicialComplex, psi: FacetBijection, allowed: frozenset
) -> Optional[AdmissibilityReport]:
    """Every path of length <= 2 from y to ψ(y) must pass through `allowed`."""
    for y, image in psi.pairs:
        if y in allowed:
            continue
        if image in K.adjacency[y]:
            return _violation(psi.kind, "adjacent pair", (y, image), [y, image])
        common = (K.adjacency[y] & K.adjacency[image]) - allowed
        if common:
            return _violation(psi.kind, "common neighbor", (y, image), [y, min(common), image])
    return None


def check_admissible(
    K: SimplicialComplex, psi: FacetBijection, other: Optional[SimplicialComplex] = None
) -> AdmissibilityReport:
    """Check the admissibility condition of ψ for its kind.

    With `other` given, ψ maps a facet of K onto a facet of `other` (connected sum),
    which is always admissible.
    """
    source = _require_facet(K, psi.source)
    if other is not None:
        _require_facet(other, psi.target)
        if psi.kind != BijectionKind.PLAIN:
            return _violation(psi.kind, "foldings act within one complex", None, None)
        return AdmissibilityReport(admissible=True, kind=psi.kind)
    target = _require_facet(K, psi.target)
    if source == target:
        return _violation(psi.kind, "source and target coincide", None, None)

    shared = set(source) & set(target)
    if psi.kind == BijectionKind.PLAIN:
        for y, image in psi.pairs:
            distance = edge_distance(K, y, image)
            if distance < 3:
                path = [y] if y == image else _shortest_path(K, y, image)
                return _violation(psi.kind, f"edge distance {distance} < 3", (y, image), path)
        return AdmissibilityReport(admissible=True, kind=psi.kind)

    fixed = frozenset(psi.fixed)
    if shared != set(fixed):
        return _violation(psi.kind, f"facets meet in {sorted(shared)}, expected {sorted(fixed)}", None, None)
    report = _short_path_violation(K, psi, fixed)
    return report or AdmissibilityReport(admissible=True, kind=psi.kind)


def _shortest_path(K: SimplicialComplex, u: int, v: int) -> List[int]:
    return list(nx.shortest_path(K.graph, u, v))


def _require_admissible(K: SimplicialComplex, psi: FacetBijection, kind: BijectionKind, other=None) -> None:
    if psi.kind != kind:
        raise NotAdmissible(f"Expected a {kind.value} bijection, got {psi.kind.value}")
    report = check_admissible(K, psi, other)
    if not report.admissible:
        raise NotAdmissible(f"Bijection is not admissible: {report.violation} at {report.pair}", report=report)


# ----------------------------------------------------------------------
# Identifications


def handle_addition(K: SimplicialComplex, psi: FacetBijection) -> SimplicialComplex:
    """Identify two far-apart facets of K along ψ and drop them."""
    _require_admissible(K, psi, BijectionKind.PLAIN)
    merge = psi.merge_map()
    removed = psi.source_face
    result = SimplicialComplex(_identify(K.facets, merge, removed))

    _check_g2("handle_addition", g2(K), g2(result), math.comb(K.dim + 2, 2))
    for x, image in psi.pairs:
        expected = _merged_link_facets(K, (x, image), merge, tuple(v for v in removed if v != x))
        _check_link("handle_addition", result, x, expected)
    logger.info(f"Handle addition along {psi.source} -> {psi.target}")
    return result


def connected_sum_relabeling(K1: SimplicialComplex, K2: SimplicialComplex, psi: FacetBijection) -> Dict[int, int]:
    """Labels for K2: targets take their source labels, colliding others get fresh labels."""
    inverse = {b: a for a, b in psi.pairs}
    taken = set(K1.vertex_set) | set(K2.vertex_set)
    next_label = max(taken) + 1 if taken else 0
    relabel = {}
    for w in K2.vertices:
        if w in inverse:
            relabel[w] = inverse[w]
        elif w in K1.vertex_set:
            relabel[w] = next_label
            next_label += 1
        else:
            relabel[w] = w
    return relabel


def connected_sum(
    K1: SimplicialComplex,
    K2: SimplicialComplex,
    psi: FacetBijection,
    relabel: Optional[Dict[int, int]] = None,
) -> SimplicialComplex:
    """K1 #_ψ K2 for a facet of K1 (source) and a facet of K2 (target)."""
    if K1.dim != K2.dim:
        raise ValueError(f"Connected sum needs equal dimensions, got {K1.dim} and {K2.dim}")
    _require_admissible(K1, psi, BijectionKind.PLAIN, other=K2)
    if relabel is None:
        relabel = connected_sum_relabeling(K1, K2, psi)
    removed = psi.source_face
    moved = [make_face(relabel.get(v, v) for v in facet) for facet in K2.facets]
    if len(set(moved) & set(K1.facets)) != 1:
        raise PostconditionViolation("connected_sum: relabeled summands share more than the glued facet")
    result = SimplicialComplex([f for f in K1.facets if f != removed] + [f for f in moved if f != removed])

    _check_g2("connected_sum", g2(K1) + g2(K2), g2(result), 0)
    K2_moved = SimplicialComplex(moved)
    for x in removed:
        facets = list(link(K1, (x,)).facets) + list(link(K2_moved, (x,)).facets)
        expected = _identify(facets, {}, tuple(v for v in removed if v != x))
        _check_link("connected_sum", result, x, expected)
    logger.info(f"Connected sum along {psi.source} -> {psi.target}")
    return result


def vertex_fold(K: SimplicialComplex, psi: FacetBijection) -> SimplicialComplex:
    """Vertex folding at the apex fixed by ψ."""
    _require_admissible(K, psi, BijectionKind.VERTEX_FOLDING)
    apex = psi.apex
    merge = psi.merge_map()
    removed = psi.source_face
    result = SimplicialComplex(_identify(K.facets, merge, removed))

    _check_g2("vertex_fold", g2(K), g2(result), math.comb(K.dim + 1, 2))
    apex_link = _identify(link(K, (apex,)).facets, merge, tuple(v for v in removed if v != apex))
    _check_link("vertex_fold", result, apex, apex_link)
    for y, image in psi.pairs:
        if y == apex:
            continue
        expected = _merged_link_facets(K, (y, image), merge, tuple(v for v in removed if v != y))
        _check_link("vertex_fold", result, y, expected)
    logger.info(f"Vertex folding at {apex} along {psi.source} -> {psi.target}")
    return result


def edge_fold(K: SimplicialComplex, psi: FacetBijection) -> Tuple[SimplicialComplex, NormalityFlag]:
    """Edge folding at the edge fixed by ψ.

    Returns:
        (folded complex, NormalityFlag); the flag is only computed in dimension 3,
        where the fold is normal iff the new link of the edge is a single circle
    """
    _require_admissible(K, psi, BijectionKind.EDGE_FOLDING)
    u, v = psi.edge
    merge = psi.merge_map()
    removed = psi.source_face
    result = SimplicialComplex(_identify(K.facets, merge, removed))

    _check_g2("edge_fold", g2(K), g2(result), math.comb(K.dim, 2))
    if K.dim != 3:
        return result, NormalityFlag.UNCHECKED
    for endpoint in (u, v):
        expected = _identify(link(K, (endpoint,)).facets, merge, tuple(w for w in removed if w != endpoint))
        _check_link("edge_fold", result, endpoint, expected)

    edge_link = link(result, (u, v))
    flag = NormalityFlag.NORMAL if nx.is_connected(edge_link.graph) else NormalityFlag.NON_NORMAL
    logger.info(f"Edge folding at {u}{v} along {psi.source} -> {psi.target}: {flag.value}")
    return result, flag


# ----------------------------------------------------------------------
# Fold sites


def fold_candidates(
    K: SimplicialComplex, apex: int, avoid: Sequence[int] = ()
) -> Iterator[FacetBijection]:
    """Admissible vertex foldings at `apex`, facet pairs in lexicographic order.

    Facets touching a vertex of `avoid` are skipped.
    """
    blocked = set(avoid)
    star_facets = [f for f in K.facets if apex in f and not blocked.intersection(f)]
    for first, second in combinations(star_facets, 2):
        if set(first) & set(second) != {apex}:
            continue
        rest1 = [w for w in first if w != apex]
        rest2 = [w for w in second if w != apex]
        for image in permutations(rest2):
            mapping = {apex: apex, **dict(zip(rest1, image))}
            psi = FacetBijection.from_mapping(mapping, kind=BijectionKind.VERTEX_FOLDING, apex=apex)
            if check_admissible(K, psi).admissible:
                yield psi


def grow_chain(
    K: SimplicialComplex, core: Sequence[int], start: Sequence[int], steps: int
) -> Tuple[SimplicialComplex, Face, List[ConstructionRecord]]:
    """Subdivide `steps` times around `core`, each time the facet spanned by the core
    and the newest vertices, starting from the facet `start`.

    Returns:
        (complex, final facet of the chain, subdivision records)
    """
    core = list(core)
    window = [w for w in sorted(start) if w not in core]
    current = K
    records = []
    for _ in range(steps):
        facet = make_face(core + window)
        apex = fresh_labels(current, 1)[0]
        current = facet_subdivide(current, facet, apex=apex)
        records.append(ConstructionRecord(op="facet_subdivide", face=list(facet), fresh={"apex": apex}))
        window = window[1:] + [apex]
    return current, make_face(core + window), records


def grow_fold_sites(
    K: SimplicialComplex, apex: int, avoid: Sequence[int] = (), steps: int = 6
) -> Tuple[SimplicialComplex, Face, Face, List[ConstructionRecord]]:
    """Grow two chains of subdivisions around `apex` whose last facets form an
    admissible vertex-folding pair for every bijection fixing the apex.
    """
    blocked = set(avoid)

    def pick(excluded: set) -> Face:
        for facet in K_now.facets:
            if apex in facet and not blocked.intersection(facet) and not excluded.intersection(facet):
                return facet
        raise NotAFacet(f"No facet at {apex} avoids {sorted(blocked | excluded)}")

    K_now = K
    start_a = pick(set())
    K_now, sigma1, records_a = grow_chain(K_now, (apex,), start_a, steps)
    chain_a = {r.fresh["apex"] for r in records_a}
    start_b = pick(chain_a)
    K_now, sigma2, records_b = grow_chain(K_now, (apex,), start_b, steps)
    logger.debug(f"Grew fold sites {list(sigma1)} and {list(sigma2)} at {apex}")
    return K_now, sigma1, sigma2, records_a + records_b


# ----------------------------------------------------------------------
# Replay


def apply_record(record: ConstructionRecord, inputs: Sequence[SimplicialComplex]) -> SimplicialComplex:
    """Re-run one construction step on its input complexes."""
    op = record.op
    if op == "one_vertex_suspension":
        return one_vertex_suspension(inputs[0], record.vertex, x=record.fresh.get("x"), y=record.fresh.get("y"))
    if op == "facet_subdivide":
        return facet_subdivide(inputs[0], record.face, apex=record.fresh.get("apex"))
    if op == "connected_sum":
        return connected_sum(inputs[0], inputs[1], record.facet_bijection(), relabel=record.relabel or None)
    if op == "handle_addition":
        return handle_addition(inputs[0], record.facet_bijection())
    if op == "vertex_fold":
        return vertex_fold(inputs[0], record.facet_bijection())
    if op == "edge_fold":
        return edge_fold(inputs[0], record.facet_bijection())[0]
    raise ValueError(f"Unknown construction: {op}")

