# tests/planted.py
"""Seeded planted constructions on stacked 3-spheres.

Each builder grows admissible sites on a stacked sphere, applies one identification,
and returns everything a test needs to check the construction or undo it.

Usage:
    from tests.planted import planted_vertex_fold

    site = planted_vertex_fold(9, seed=3)
    assert g2(site.result) == g2(site.base) + 6
"""

import random
from dataclasses import dataclass
from typing import Optional

from pseudoform.catalog import stacked_sphere
from pseudoform.core.complex import SimplicialComplex
from pseudoform.operations.constructions import (
    BijectionKind,
    FacetBijection,
    NormalityFlag,
    connected_sum,
    edge_fold,
    grow_chain,
    grow_fold_sites,
    handle_addition,
    vertex_fold,
)


@dataclass
class Planted:
    base: SimplicialComplex  # complex the identification was applied to
    psi: FacetBijection
    result: SimplicialComplex
    other: Optional[SimplicialComplex] = None  # second summand of a connected sum

    @property
    def tetra(self):
        """The facet removed by the identification, missing in the result."""
        return self.psi.source_face


def planted_vertex_fold(n: int, seed: int) -> Planted:
    """Vertex folding at a random vertex of stacked_sphere(3, n), on grown fold sites."""
    rng = random.Random(seed)
    K = stacked_sphere(3, n, seed=seed)
    apex = rng.choice(K.vertices)
    grown, sigma1, sigma2, _ = grow_fold_sites(K, apex)
    rest1 = [w for w in sigma1 if w != apex]
    rest2 = [w for w in sigma2 if w != apex]
    rng.shuffle(rest2)
    psi = FacetBijection.from_mapping(
        {apex: apex, **dict(zip(rest1, rest2))}, kind=BijectionKind.VERTEX_FOLDING, apex=apex
    )
    return Planted(base=grown, psi=psi, result=vertex_fold(grown, psi))


def edge_fold_sites(n: int, seed: int):
    """Two chains of four subdivisions around a random edge of stacked_sphere(3, n).

    Returns:
        (grown complex, edge, first chain facet, second chain facet)
    """
    rng = random.Random(seed)
    K = stacked_sphere(3, n, seed=seed)
    u, v = rng.choice(K.faces(1))
    start_a = rng.choice([f for f in K.facets if u in f and v in f])
    grown, sigma1, records = grow_chain(K, (u, v), start_a, 4)
    chain = {r.fresh["apex"] for r in records}
    start_b = rng.choice([f for f in grown.facets if u in f and v in f and not chain.intersection(f)])
    grown, sigma2, _ = grow_chain(grown, (u, v), start_b, 4)
    return grown, (u, v), sigma1, sigma2


def edge_fold_bijections(sigma1, sigma2, edge):
    """Both edge foldings of sigma1 onto sigma2 that fix `edge`."""
    rest1 = [w for w in sigma1 if w not in edge]
    rest2 = [w for w in sigma2 if w not in edge]
    fixed = {w: w for w in edge}
    return [
        FacetBijection.from_mapping(
            {**fixed, **dict(zip(rest1, image))}, kind=BijectionKind.EDGE_FOLDING, edge=edge
        )
        for image in (rest2, rest2[::-1])
    ]


def planted_edge_fold(n: int, seed: int) -> Planted:
    """The normal one of the two edge foldings on grown sites."""
    grown, edge, sigma1, sigma2 = edge_fold_sites(n, seed)
    for psi in edge_fold_bijections(sigma1, sigma2, edge):
        folded, flag = edge_fold(grown, psi)
        if flag == NormalityFlag.NORMAL:
            return Planted(base=grown, psi=psi, result=folded)
    raise AssertionError(f"No normal edge folding at {edge}")


def planted_handle(n: int, seed: int) -> Planted:
    """Handle addition between a facet of stacked_sphere(3, n) and the end of an
    eleven-step chain grown from another facet."""
    rng = random.Random(seed)
    K = stacked_sphere(3, n, seed=seed)
    start = rng.choice(K.facets)
    grown, far, _ = grow_chain(K, (), start, 11)
    # only max(start) lies within distance 2 of the chain's end
    tau = rng.choice([f for f in K.facets if f != start and max(start) not in f])
    image = list(far)
    rng.shuffle(image)
    psi = FacetBijection.from_mapping(dict(zip(tau, image)))
    return Planted(base=grown, psi=psi, result=handle_addition(grown, psi))


def planted_sum(n: int, other: SimplicialComplex, seed: int) -> Planted:
    """stacked_sphere(3, n) # other along random facets and a random bijection."""
    rng = random.Random(seed)
    K = stacked_sphere(3, n, seed=seed)
    sigma1 = rng.choice(K.facets)
    sigma2 = list(rng.choice(other.facets))
    rng.shuffle(sigma2)
    psi = FacetBijection.from_mapping(dict(zip(sigma1, sigma2)))
    return Planted(base=K, psi=psi, result=connected_sum(K, other, psi), other=other)
