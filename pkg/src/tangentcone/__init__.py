"""Tangent cones of semialgebraic sets, exact and numeric."""
__version__ = "0.1.0"
