"""
Recognition of Constructions for pseudoform

Inverse operations driven by missing tetrahedra of a 3-dimensional normal
pseudomanifold. For a missing tetrahedron τ, each vertex x ∈ τ sees the missing
triangle τ ∖ x inside its link; whether that triangle separates the link, and
whether it is one- or two-sided, decides how K was built:

- all four separate            -> connected sum or handle addition
- exactly one does not         -> vertex folding at that vertex
- exactly two do not, Möbius   -> edge folding at the edge they span
- exactly two do not, annulus  -> reported, not unfolded

`split_connected_sum`, `vertex_unfold` and `edge_unfold` rebuild the complex
before the operation and check that redoing the operation gives K back.
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor, as_completed
from enum import Enum
from typing import Dict, FrozenSet, List, Optional, Sequence, Tuple, Union

from pydantic import BaseModel

from ..core.analysis import (
    SideReport,
    boundary_complex,
    cut_along_circle,
    facet_sides,
    is_normal,
    link_sides,
    require_normal,
    surface_classify,
)
from ..core.complex import (
    Face,
    SimplicialComplex,
    cone,
    fresh_labels,
    g2,
    induced_subcomplex,
    link,
    make_face,
    missing_simplices,
)
from ..utils.config import CLASSIFY_MAX_WORKERS
from ..utils.errors import (
    AnnulusCaseUnsupported,
    NormalityViolation,
    NotMissing,
    ParityViolation,
    PostconditionViolation,
    PseudoformError,
    VerdictMismatch,
)
from .constructions import BijectionKind, FacetBijection, NormalityFlag, connected_sum, edge_fold, vertex_fold

logger = logging.getLogger(__name__)


class Verdict(str, Enum):
    SUM_OR_HANDLE = "sum_or_handle"
    VERTEX_FOLD_AT = "vertex_fold_at"
    EDGE_FOLD_AT = "edge_fold_at"
    EDGE_FOLD_ANNULUS_NONSEPARATING = "edge_fold_annulus_nonseparating"
    UNCLASSIFIED = "unclassified"


class VertexSideReport(BaseModel):
    vertex: int
    separates: bool
    side: SideReport


class MissingTetraClassification(BaseModel):
    tetra: List[int]
    vertices: List[VertexSideReport]
    verdict: Verdict
    apex: Optional[int] = None  # vertex folding
    edge: Optional[List[int]] = None  # edge folding (Möbius or annulus)

    def explain(self) -> str:
        lines = [f"Missing tetrahedron {self.tetra}:"]
        for report in self.vertices:
            rest = [v for v in self.tetra if v != report.vertex]
            sided = "two-sided" if report.side.two_sided else "one-sided"
            separates = "separates" if report.separates else "does not separate"
            lines.append(f"  triangle {rest} {separates} lk({report.vertex}) and is {sided}")
        if self.verdict == Verdict.SUM_OR_HANDLE:
            lines.append("  every triangle separates: connected sum or handle addition")
        elif self.verdict == Verdict.VERTEX_FOLD_AT:
            lines.append(f"  only lk({self.apex}) is not separated: vertex folding at {self.apex}")
        elif self.verdict == Verdict.EDGE_FOLD_AT:
            lines.append(f"  Möbius neighborhoods at {self.edge}: edge folding at {self.edge}")
        elif self.verdict == Verdict.EDGE_FOLD_ANNULUS_NONSEPARATING:
            lines.append(f"  annulus neighborhoods at {self.edge}: the unfolding would not be normal")
        else:
            lines.append("  no construction pattern matches")
        return "\n".join(lines)


class HandleWitness(BaseModel):
    """∂τ does not separate K: K is a handle addition along τ."""

    tetra: List[int]
    g2: int


# ----------------------------------------------------------------------
# Classification


def _require_missing_tetrahedron(K: SimplicialComplex, tau: Sequence[int]) -> Face:
    face = tuple(sorted(tau))
    if len(face) != 4 or len(set(face)) != 4:
        raise NotMissing(f"{list(face)} is not a set of four vertices")
    if face in K.face_set:
        raise NotMissing(f"{list(face)} is a face of the complex")
    for i in range(4):
        if face[:i] + face[i + 1:] not in K.face_set:
            raise NotMissing(f"Triangle {list(face[:i] + face[i + 1:])} is not in the complex")
    return face


def classify_missing_tetrahedron(K: SimplicialComplex, tau: Sequence[int], check_normal: bool = True) -> MissingTetraClassification:
    """Classify a missing tetrahedron of a normal 3-pseudomanifold.

    Raises:
        NotMissing: if τ is not a missing tetrahedron
        ParityViolation: if two separating vertices leave an annulus/Möbius mismatch on the other two
    """
    if check_normal:
        require_normal(K)
    if K.dim != 3:
        raise ValueError(f"Missing tetrahedra are classified in dimension 3, got {K.dim}")
    face = _require_missing_tetrahedron(K, tau)

    reports = []
    for x in face:
        rest = [v for v in face if v != x]
        side = cut_along_circle(link(K, (x,)), rest)
        reports.append(VertexSideReport(vertex=x, separates=side.component_count == 2, side=side))
    by_vertex = {r.vertex: r for r in reports}

    separating = [r.vertex for r in reports if r.separates]
    for i, a in enumerate(separating):
        for b in separating[i + 1:]:
            u, v = [w for w in face if w not in (a, b)]
            if by_vertex[u].side.two_sided != by_vertex[v].side.two_sided:
                raise ParityViolation(
                    f"Separating pair {a},{b} of {list(face)} leaves sides of {u} and {v} mismatched",
                    tetra=list(face),
                )

    non_separating = [r.vertex for r in reports if not r.separates]
    verdict, apex, edge = Verdict.UNCLASSIFIED, None, None
    if not non_separating:
        verdict = Verdict.SUM_OR_HANDLE
    elif len(non_separating) == 1:
        verdict, apex = Verdict.VERTEX_FOLD_AT, non_separating[0]
    elif len(non_separating) == 2:
        edge = sorted(non_separating)
        if not by_vertex[edge[0]].side.two_sided and not by_vertex[edge[1]].side.two_sided:
            verdict = Verdict.EDGE_FOLD_AT
        elif by_vertex[edge[0]].side.two_sided and by_vertex[edge[1]].side.two_sided:
            verdict = Verdict.EDGE_FOLD_ANNULUS_NONSEPARATING
    logger.debug(f"Missing tetrahedron {list(face)} classified as {verdict.value}")
    return MissingTetraClassification(tetra=list(face), vertices=reports, verdict=verdict, apex=apex, edge=edge)


def classify_all(
    K: SimplicialComplex, parallel: bool = True, max_workers: int = CLASSIFY_MAX_WORKERS
) -> List[MissingTetraClassification]:
    """Classify every missing tetrahedron of K, in sorted order."""
    require_normal(K)
    tetrahedra = missing_simplices(K, 3)
    if not parallel or max_workers < 2 or len(tetrahedra) < 2:
        return [classify_missing_tetrahedron(K, tau, check_normal=False) for tau in tetrahedra]

    results: Dict[Face, MissingTetraClassification] = {}
    with ThreadPoolExecutor(max_workers=min(len(tetrahedra), max_workers)) as executor:
        future_to_tetra = {
            executor.submit(classify_missing_tetrahedron, K, tau, False): tau for tau in tetrahedra
        }
        for future in as_completed(future_to_tetra):
            results[future_to_tetra[future]] = future.result()
    return [results[tau] for tau in tetrahedra]


# ----------------------------------------------------------------------
# Connected sums


def split_connected_sum(
    K: SimplicialComplex, tau: Sequence[int]
) -> Union[Tuple[SimplicialComplex, SimplicialComplex], HandleWitness]:
    """Cut K along ∂τ.

    Returns:
        (K1, K2), each side closed by τ, with connected_sum(K1, K2, identity on τ) == K;
        or a HandleWitness when ∂τ does not separate K

    Raises:
        VerdictMismatch: if τ is not classified as a sum or handle
    """
    classification = classify_missing_tetrahedron(K, tau)
    if classification.verdict != Verdict.SUM_OR_HANDLE:
        raise VerdictMismatch(f"Tetrahedron {classification.tetra} is {classification.verdict.value}")
    face = tuple(classification.tetra)

    sides = facet_sides(K, face)
    if len(sides) == 1:
        logger.info(f"∂{list(face)} does not separate: handle addition")
        return HandleWitness(tetra=list(face), g2=g2(K))
    if len(sides) != 2:
        raise PostconditionViolation(f"∂{list(face)} cuts K into {len(sides)} pieces")

    K1 = SimplicialComplex(list(sides[0]) + [face])
    K2 = SimplicialComplex(list(sides[1]) + [face])
    if g2(K) != g2(K1) + g2(K2):
        raise PostconditionViolation("split_connected_sum: g2 is not additive over the pieces")
    identity = FacetBijection.from_mapping({v: v for v in face})
    if connected_sum(K1, K2, identity) != K:
        raise PostconditionViolation("split_connected_sum: re-summing the pieces does not give K")
    logger.info(f"Split along {list(face)} into pieces with f0 = {len(K1.vertices)}, {len(K2.vertices)}")
    return K1, K2


# ----------------------------------------------------------------------
# Unfoldings


def _side_vertices(side: FrozenSet[Face], excluded: Sequence[int]) -> set:
    return {v for facet in side for v in facet} - set(excluded)


def _plus_minus(sides: List[FrozenSet[Face]], plus_facet: Face) -> Tuple[FrozenSet[Face], FrozenSet[Face]]:
    if len(sides) != 2:
        raise NormalityViolation(f"Expected two sides, found {len(sides)}")
    if plus_facet in sides[0]:
        return sides[0], sides[1]
    if plus_facet in sides[1]:
        return sides[1], sides[0]
    raise NormalityViolation(f"Facet {list(plus_facet)} lies on neither side")


def vertex_unfold(K: SimplicialComplex, tau: Sequence[int], apex: int) -> SimplicialComplex:
    """Undo a vertex folding at `apex` whose removed facet is τ.

    Works for 3-dimensional K (after classification) and for surfaces (d = 2).
    The three other vertices of τ are split off as fresh copies on the side of
    their links away from p, where lk(τ ∖ apex) = {p, n} with p < n.

    Raises:
        VerdictMismatch: if τ is not a vertex folding at `apex`
        NormalityViolation: if the construction fails any of its checks
    """
    face = tuple(sorted(tau))
    d = K.dim
    if apex not in face:
        raise VerdictMismatch(f"Apex {apex} is not a vertex of {list(face)}")
    if d == 3:
        classification = classify_missing_tetrahedron(K, face)
        if classification.verdict != Verdict.VERTEX_FOLD_AT or classification.apex != apex:
            raise VerdictMismatch(
                f"Tetrahedron {list(face)} is {classification.verdict.value}"
                + (f" at {classification.apex}" if classification.apex is not None else "")
            )
        apex_side = next(r.side for r in classification.vertices if r.vertex == apex)
        if not apex_side.two_sided:
            raise NormalityViolation(f"Triangle opposite {apex} is one-sided in its link; lk({apex}) is not a handle addition")
    elif d == 2:
        require_normal(K)
        if len(face) != 3 or face in K.face_set or any(e not in K.face_set for e in _boundary(face)):
            raise NotMissing(f"{list(face)} is not a missing triangle")
    else:
        raise ValueError(f"vertex_unfold supports dimensions 2 and 3, got {d}")

    base = tuple(v for v in face if v != apex)
    p, n = sorted(link(K, base).vertices)
    primed = dict(zip(base, fresh_labels(K, len(base))))

    minus: Dict[int, set] = {}
    for x in base:
        sides = link_sides(K, x, face)
        plus_side, minus_side = _plus_minus(sides, tuple(sorted((set(base) - {x}) | {p})))
        minus[x] = _side_vertices(minus_side, face)
        if _side_vertices(plus_side, face) & minus[x]:
            raise NormalityViolation(f"A vertex of lk({x}) lies on both sides of the missing face")

    lifted = []
    for facet in induced_subcomplex(K, K.vertex_set - {apex}).facets:
        touching = [x for x in facet if x in primed]
        if not touching:
            lifted.append(facet)
            continue
        signs = {w in minus[x] for x in touching for w in facet if w not in primed}
        if len(signs) > 1:
            raise NormalityViolation(f"Facet {list(facet)} straddles both sides")
        if signs == {True}:
            lifted.append(make_face(primed.get(v, v) for v in facet))
        else:
            lifted.append(facet)
    lifted.append(make_face([n] + list(primed.values())))
    interior = SimplicialComplex(lifted)
    unfolded = SimplicialComplex(list(interior.facets) + list(cone(boundary_complex(interior), apex).facets))

    if not _is_normal_quietly(unfolded):
        raise NormalityViolation("vertex_unfold: result is not a normal pseudomanifold")
    if g2(unfolded) != g2(K) - math.comb(d + 1, 2):
        raise NormalityViolation(f"vertex_unfold: g2 dropped from {g2(K)} to {g2(unfolded)}")
    psi = vertex_unfold_bijection(K, face, apex)
    try:
        refolded = vertex_fold(unfolded, psi)
    except PseudoformError as e:
        raise NormalityViolation(f"vertex_unfold: refolding failed: {e}") from e
    if refolded != K:
        raise NormalityViolation("vertex_unfold: refolding does not reproduce the input")
    logger.info(f"Vertex unfolding at {apex} along {list(face)}: g2 {g2(K)} -> {g2(unfolded)}")
    return unfolded


def vertex_unfold_bijection(K: SimplicialComplex, tau: Sequence[int], apex: int) -> FacetBijection:
    """The folding ψ that maps the unfolded complex back onto K."""
    face = tuple(sorted(tau))
    base = [v for v in face if v != apex]
    primed = dict(zip(base, fresh_labels(K, len(base))))
    return FacetBijection.from_mapping({apex: apex, **primed}, kind=BijectionKind.VERTEX_FOLDING, apex=apex)


def edge_unfold(K: SimplicialComplex, tau: Sequence[int], edge: Sequence[int]) -> SimplicialComplex:
    """Undo an edge folding at `edge` whose removed facet is τ = abuv.

    The separating vertices a < b are split into a⁺ = a, b⁺ = b and fresh a⁻, b⁻.
    The + sides are fixed by the first facet containing both a and b.

    Raises:
        VerdictMismatch: if τ is not an edge folding at `edge`
        AnnulusCaseUnsupported: for the annulus verdict, whose unfolding is not normal
        NormalityViolation: if the construction fails any of its checks
    """
    face = tuple(sorted(tau))
    uv = sorted(edge)
    classification = classify_missing_tetrahedron(K, face)
    if classification.verdict == Verdict.EDGE_FOLD_ANNULUS_NONSEPARATING and classification.edge == uv:
        raise AnnulusCaseUnsupported(f"Annulus sides at {uv}: the unfolding is not a normal pseudomanifold")
    if classification.verdict != Verdict.EDGE_FOLD_AT or classification.edge != uv:
        raise VerdictMismatch(f"Tetrahedron {list(face)} is {classification.verdict.value}, not an edge folding at {uv}")

    u, v = uv
    a, b = [w for w in face if w not in uv]
    a_minus, b_minus = fresh_labels(K, 2)
    reference = next(f for f in K.facets if a in f and b in f)

    side_of: Dict[int, Tuple[FrozenSet[Face], FrozenSet[Face]]] = {}
    for x in (a, b):
        plus_facet = tuple(w for w in reference if w != x)
        side_of[x] = _plus_minus(link_sides(K, x, face), plus_facet)

    def sign(x: int, facet: Face) -> bool:
        rest = tuple(w for w in facet if w != x)
        return rest in side_of[x][0]

    lifted = []
    for facet in K.facets:
        present = [x for x in (a, b) if x in facet]
        if not present:
            lifted.append(facet)
            continue
        signs = {sign(x, facet) for x in present}
        if len(signs) > 1:
            raise NormalityViolation(f"Facet {list(facet)} lies on + at one of {a},{b} and - at the other")
        if signs == {True}:
            lifted.append(facet)
        else:
            lifted.append(make_face({a: a_minus, b: b_minus}.get(w, w) for w in facet))
    lifted.append(make_face((a, b, u, v)))
    lifted.append(make_face((a_minus, b_minus, u, v)))
    unfolded = SimplicialComplex(lifted)

    if not _is_normal_quietly(unfolded):
        raise NormalityViolation("edge_unfold: result is not a normal pseudomanifold")
    for endpoint in (u, v):
        before = surface_classify(link(K, (endpoint,))).b1
        after = surface_classify(link(unfolded, (endpoint,))).b1
        if after != before - 1:
            raise NormalityViolation(f"edge_unfold: b1 of lk({endpoint}) went from {before} to {after}")
    if g2(unfolded) != g2(K) - math.comb(3, 2):
        raise NormalityViolation(f"edge_unfold: g2 dropped from {g2(K)} to {g2(unfolded)}")
    psi = edge_unfold_bijection(K, face, uv)
    try:
        refolded, flag = edge_fold(unfolded, psi)
    except PseudoformError as e:
        raise NormalityViolation(f"edge_unfold: refolding failed: {e}") from e
    if refolded != K or flag != NormalityFlag.NORMAL:
        raise NormalityViolation("edge_unfold: refolding does not reproduce the input")
    logger.info(f"Edge unfolding at {u}{v} along {list(face)}: g2 {g2(K)} -> {g2(unfolded)}")
    return unfolded


def edge_unfold_bijection(K: SimplicialComplex, tau: Sequence[int], edge: Sequence[int]) -> FacetBijection:
    """The folding ψ: a⁺b⁺uv -> a⁻b⁻uv that maps the unfolded complex back onto K."""
    face = tuple(sorted(tau))
    uv = sorted(edge)
    a, b = [w for w in face if w not in uv]
    a_minus, b_minus = fresh_labels(K, 2)
    mapping = {a: a_minus, b: b_minus, uv[0]: uv[0], uv[1]: uv[1]}
    return FacetBijection.from_mapping(mapping, kind=BijectionKind.EDGE_FOLDING, edge=uv)


def _boundary(face: Face) -> List[Face]:
    return [face[:i] + face[i + 1:] for i in range(len(face))]


def _is_normal_quietly(K: SimplicialComplex) -> bool:
    try:
        return is_normal(K)
    except PseudoformError:
        return False
