"""
Configuration for pseudoform

Default seeds, search budgets and size limits. Only PSEUDOFORM_SEED is read
from the environment; everything else is a plain constant that the relevant
operations accept as a keyword override.
"""

import logging
import os

logger = logging.getLogger(__name__)

# Default seed for every seeded operation (rigidity trials, stacked spheres, builders)
try:
    DEFAULT_SEED = int(os.getenv("PSEUDOFORM_SEED", "0"))
    if DEFAULT_SEED < 0:
        logger.warning(f"Invalid PSEUDOFORM_SEED value ({DEFAULT_SEED}), using default seed 0")
        DEFAULT_SEED = 0
except ValueError:
    logger.warning(f"Invalid PSEUDOFORM_SEED value ('{os.getenv('PSEUDOFORM_SEED')}'), using default seed 0")
    DEFAULT_SEED = 0

# Rigidity
RIGIDITY_TRIALS = 3
COORDINATE_BOUND = 10**6
RIGIDITY_MAX_WORKERS = 4

# Missing-tetrahedron classification
CLASSIFY_MAX_WORKERS = 5

# Searches
SUBDIVISION_BUDGET = 20  # facet subdivisions allowed per fold or sum step
INDUCED_CIRCLE_CAP = 6

# Isomorphism testing refuses complexes larger than this
ISOMORPHISM_VERTEX_LIMIT = 64


def resolve_seed(seed=None) -> int:
    """Return `seed`, or the configured default when it is None."""
    return DEFAULT_SEED if seed is None else int(seed)
