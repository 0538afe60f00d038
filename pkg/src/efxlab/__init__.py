"""Exact-arithmetic toolkit for EFX allocations: valuation-class checkers,
Greedy EFX, the leximin++ local search, and the Flip -> Kneser -> EFX
reduction pipeline."""

__version__ = "0.1.0"
