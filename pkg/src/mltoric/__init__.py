"""Exact tools for non-saturated affine monoids and their toric varieties."""

from mltoric.invariants import NO_SLICE, analyze
from mltoric.monoid import AffineMonoid

__version__ = "0.1.0"

__all__ = ["AffineMonoid", "analyze", "NO_SLICE", "__version__"]
