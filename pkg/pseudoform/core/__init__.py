"""Core data model: simplicial complexes, pseudomanifold analysis and rigidity."""
