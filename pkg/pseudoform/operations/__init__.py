"""Constructions, their recognition, and the relative-minimality decomposition."""
