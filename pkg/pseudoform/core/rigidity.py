"""
Generic Rigidity for pseudoform

Rigidity matrices of graphs at random integer configurations, with exact
rational ranks (sympy DomainMatrix over QQ). The generic rank is estimated as
the maximum rank over several seeded trials: a non-generic draw can only lower
the rank. The stress space is the left null space of the rigidity matrix, and
for a normal d-pseudomanifold its dimension in ambient dimension d+1 is g2.
"""

import logging
import math
import random
from concurrent.futures import ThreadPoolExecutor, as_completed
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import networkx as nx
from pydantic import BaseModel
from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from ..utils.config import COORDINATE_BOUND, RIGIDITY_MAX_WORKERS, RIGIDITY_TRIALS, resolve_seed
from ..utils.errors import CodimTooSmall, HypothesisNotMet, MissingCoordinate, PostconditionViolation
from .analysis import require_normal
from .complex import SimplicialComplex, cone, g2, link, star

logger = logging.getLogger(__name__)

GraphLike = Union[SimplicialComplex, nx.Graph]
Edge = Tuple[int, int]


class Configuration(BaseModel):
    """Integer points for the vertices of a graph."""

    ambient_d: int
    seed: int
    bound: int
    points: Dict[int, List[int]]

    @classmethod
    def random(cls, vertices: Sequence[int], ambient_d: int, seed: int, bound: int = COORDINATE_BOUND) -> "Configuration":
        rng = random.Random(seed)
        points = {v: [rng.randint(-bound, bound) for _ in range(ambient_d)] for v in sorted(vertices)}
        return cls(ambient_d=ambient_d, seed=seed, bound=bound, points=points)


class StressSpaceReport(BaseModel):
    ambient_d: int
    vertex_count: int
    edge_count: int
    matrix_rank: int
    stress_dim: int
    trials: int
    seed: int
    trial_ranks: List[int]
    is_generically_rigid: bool


def _as_graph(G: GraphLike) -> nx.Graph:
    return G.graph if isinstance(G, SimplicialComplex) else G


def graph_edges(G: GraphLike) -> List[Edge]:
    return sorted(tuple(sorted(edge)) for edge in _as_graph(G).edges())


def rigidity_matrix(G: GraphLike, cfg: Configuration) -> List[List[int]]:
    """Rows indexed by sorted edges, columns by (vertex, coordinate).

    Row uv carries f(u) - f(v) in u's block and f(v) - f(u) in v's block.

    Raises:
        MissingCoordinate: if a vertex of G has no point in cfg
    """
    graph = _as_graph(G)
    vertices = sorted(graph.nodes())
    for v in vertices:
        if v not in cfg.points:
            raise MissingCoordinate(f"No coordinate for vertex {v}", vertex=v)
    d = cfg.ambient_d
    column = {v: i * d for i, v in enumerate(vertices)}
    rows = []
    for u, v in graph_edges(graph):
        row = [0] * (d * len(vertices))
        for k in range(d):
            diff = cfg.points[u][k] - cfg.points[v][k]
            row[column[u] + k] = diff
            row[column[v] + k] = -diff
        rows.append(row)
    return rows


def _domain_matrix(rows: List[List[int]], width: int) -> DomainMatrix:
    return DomainMatrix([[QQ(x) for x in row] for row in rows], (len(rows), width), QQ)


def exact_rank(rows: List[List[int]], width: int) -> int:
    if not rows or width == 0:
        return 0
    return _domain_matrix(rows, width).rank()


def _trial_rank(graph: nx.Graph, ambient_d: int, seed: int, bound: int) -> int:
    cfg = Configuration.random(graph.nodes(), ambient_d, seed, bound)
    return exact_rank(rigidity_matrix(graph, cfg), ambient_d * graph.number_of_nodes())


def _trial_seed(seed: int, trial: int) -> int:
    return seed * 7919 + trial


def expected_rigid_rank(vertex_count: int, ambient_d: int) -> int:
    if vertex_count >= ambient_d + 1:
        return ambient_d * vertex_count - math.comb(ambient_d + 1, 2)
    return math.comb(vertex_count, 2)


def stress_dimension(
    G: GraphLike,
    ambient_d: int,
    trials: int = RIGIDITY_TRIALS,
    seed: Optional[int] = None,
    bound: int = COORDINATE_BOUND,
    parallel: bool = True,
) -> StressSpaceReport:
    """Generic rank and stress-space dimension of a graph in ambient dimension d.

    Args:
        G: a graph or a complex (its 1-skeleton is used)
        ambient_d: dimension of the configuration space
        trials: number of random configurations; the maximum rank is reported
        seed: base seed (PSEUDOFORM_SEED when None)
        bound: coordinates are drawn uniformly from [-bound, bound]
        parallel: run trials in a thread pool

    Returns:
        StressSpaceReport
    """
    if ambient_d < 1:
        raise ValueError(f"ambient_d must be >= 1, got {ambient_d}")
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    base_seed = resolve_seed(seed)
    graph = _as_graph(G)
    seeds = [_trial_seed(base_seed, t) for t in range(trials)]

    ranks: Dict[int, int] = {}
    if parallel and trials > 1:
        with ThreadPoolExecutor(max_workers=min(trials, RIGIDITY_MAX_WORKERS)) as executor:
            future_to_trial = {
                executor.submit(_trial_rank, graph, ambient_d, trial_seed, bound): t
                for t, trial_seed in enumerate(seeds)
            }
            for future in as_completed(future_to_trial):
                ranks[future_to_trial[future]] = future.result()
    else:
        for t, trial_seed in enumerate(seeds):
            ranks[t] = _trial_rank(graph, ambient_d, trial_seed, bound)

    trial_ranks = [ranks[t] for t in range(trials)]
    rank = max(trial_ranks)
    if len(set(trial_ranks)) > 1:
        logger.warning(f"Rigidity trials disagree (ranks {trial_ranks}); using the maximum {rank}")

    n = graph.number_of_nodes()
    m = graph.number_of_edges()
    rigid = rank == expected_rigid_rank(n, ambient_d)
    if n < ambient_d + 1:
        rigid = rigid and m == math.comb(n, 2)
    return StressSpaceReport(
        ambient_d=ambient_d,
        vertex_count=n,
        edge_count=m,
        matrix_rank=rank,
        stress_dim=m - rank,
        trials=trials,
        seed=base_seed,
        trial_ranks=trial_ranks,
        is_generically_rigid=rigid,
    )


def _to_fraction(value) -> Fraction:
    return Fraction(int(value.p), int(value.q))


def is_stress(edges: Sequence[Edge], weights: Sequence[Fraction], cfg: Configuration) -> bool:
    """Check sum over edges uv of w(uv) (f(v) - f(u)) = 0 at every vertex."""
    force: Dict[int, List[Fraction]] = {v: [Fraction(0)] * cfg.ambient_d for v in cfg.points}
    for (u, v), w in zip(edges, weights):
        if w == 0:
            continue
        for k in range(cfg.ambient_d):
            diff = cfg.points[v][k] - cfg.points[u][k]
            force[u][k] += w * diff
            force[v][k] -= w * diff
    return all(all(x == 0 for x in vector) for vector in force.values())


def stress_basis(
    G: GraphLike,
    ambient_d: int,
    seed: Optional[int] = None,
    bound: int = COORDINATE_BOUND,
) -> Tuple[List[Edge], List[List[Fraction]], Configuration]:
    """Exact basis of the stress space at the first trial configuration.

    Returns:
        (edges, basis vectors indexed like edges, configuration used)
    """
    graph = _as_graph(G)
    cfg = Configuration.random(graph.nodes(), ambient_d, _trial_seed(resolve_seed(seed), 0), bound)
    edges = graph_edges(graph)
    rows = rigidity_matrix(graph, cfg)
    width = ambient_d * graph.number_of_nodes()
    if not rows:
        return edges, [], cfg
    if exact_rank(rows, width) == len(rows):
        return edges, [], cfg

    null = _domain_matrix(rows, width).transpose().nullspace()
    basis = [[_to_fraction(x) for x in vector] for vector in null.to_Matrix().tolist()]
    for vector in basis:
        if not is_stress(edges, vector, cfg):
            raise PostconditionViolation("Computed null vector fails the stress equation")
    logger.debug(f"Stress basis of dimension {len(basis)} over {len(edges)} edges")
    return edges, basis, cfg


def verify_g2_stress(K: SimplicialComplex, trials: int = RIGIDITY_TRIALS, seed: Optional[int] = None) -> bool:
    """dim of the stress space in ambient dimension d+1 equals g2, and G(K) is (d+1)-rigid."""
    require_normal(K)
    if K.dim < 2:
        raise ValueError(f"verify_g2_stress needs dim >= 2, got {K.dim}")
    report = stress_dimension(K, K.dim + 1, trials=trials, seed=seed)
    return report.stress_dim == g2(K) and report.is_generically_rigid


def _has_clique(graph: nx.Graph, size: int) -> bool:
    if graph.number_of_nodes() == 0:
        return False
    return any(len(clique) >= size for clique in nx.find_cliques(graph))


def check_union_lemma(G1: GraphLike, G2: GraphLike, d: int, seed: Optional[int] = None) -> bool:
    """Two generically d-rigid graphs sharing a K_d have a d-rigid union.

    Raises:
        HypothesisNotMet: naming the first failing hypothesis
    """
    graph1, graph2 = _as_graph(G1), _as_graph(G2)
    if not stress_dimension(graph1, d, seed=seed).is_generically_rigid:
        raise HypothesisNotMet("First graph is not generically rigid", hypothesis="rigid_first")
    if not stress_dimension(graph2, d, seed=seed).is_generically_rigid:
        raise HypothesisNotMet("Second graph is not generically rigid", hypothesis="rigid_second")
    shared = nx.Graph()
    shared.add_nodes_from(set(graph1) & set(graph2))
    shared.add_edges_from(edge for edge in graph1.edges() if graph2.has_edge(*edge))
    if not _has_clique(shared, d):
        raise HypothesisNotMet(f"Intersection contains no K_{d}", hypothesis="shared_clique")
    union = nx.compose(graph1, graph2)
    return stress_dimension(union, d, seed=seed).is_generically_rigid


def check_cone_lemma(K: GraphLike, d: int, seed: Optional[int] = None) -> bool:
    """If G(K) is d-rigid, the cone is (d+1)-rigid, and any nonzero stress space of the
    cone has a basis vector with an apex edge in its support.

    Raises:
        HypothesisNotMet: if G(K) is not generically d-rigid
    """
    if isinstance(K, SimplicialComplex):
        base = K
    else:
        base = SimplicialComplex((tuple(sorted(e)) for e in K.edges()))
    if not stress_dimension(base, d, seed=seed).is_generically_rigid:
        raise HypothesisNotMet(f"Base graph is not generically {d}-rigid", hypothesis="rigid_base")
    coned = cone(base)
    apex = max(coned.vertices)
    report = stress_dimension(coned, d + 1, seed=seed)
    if not report.is_generically_rigid:
        return False
    if report.stress_dim == 0:
        return True
    edges, basis, _ = stress_basis(coned, d + 1, seed=seed)
    touching = [i for i, edge in enumerate(edges) if apex in edge]
    return any(any(vector[i] != 0 for i in touching) for vector in basis)


def lower_bound_check(K: SimplicialComplex, sigma: Sequence[int]) -> bool:
    """g2(K) >= g2(lk σ), after checking g2(st σ) = g2(lk σ).

    Raises:
        CodimTooSmall: if σ has codimension less than three
    """
    require_normal(K)
    if K.dim < 3:
        raise ValueError(f"lower_bound_check needs dim >= 3, got {K.dim}")
    face = tuple(sorted(sigma))
    if K.dim - (len(face) - 1) < 3:
        raise CodimTooSmall(f"Face {list(face)} has codimension {K.dim - len(face) + 1} < 3")
    g2_link = g2(link(K, face))
    g2_star = g2(star(K, face))
    if g2_link != g2_star:
        raise PostconditionViolation(f"g2(st) = {g2_star} differs from g2(lk) = {g2_link}")
    return g2(K) >= g2_link
