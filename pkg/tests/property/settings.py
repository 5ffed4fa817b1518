# tests/property/settings.py
"""Hypothesis settings tiers shared by the property tests.

Usage:
    from tests.property.settings import STANDARD_SETTINGS

    @given(n=st.integers(6, 12))
    @STANDARD_SETTINGS
    def test_something(n):
        ...

Tiers:
- DETERMINISM_SETTINGS: 500 examples - pure arithmetic (h/f transforms, multiset conditions)
- STANDARD_SETTINGS: 100 examples - cheap constructions on small complexes
- SLOW_SETTINGS: 50 examples - constructions followed by normality or link checks
- QUICK_SETTINGS: 20 examples - exact rank computations and recognition roundtrips

Complex-level checks run exact linear algebra and link enumeration, so no tier
has a deadline.
"""

from hypothesis import settings

DETERMINISM_SETTINGS = settings(max_examples=500, deadline=None)

STANDARD_SETTINGS = settings(max_examples=100, deadline=None)

SLOW_SETTINGS = settings(max_examples=50, deadline=None)

QUICK_SETTINGS = settings(max_examples=20, deadline=None)
