"""pcmax: exact arithmetic and automorphism-family verification for finite
p-groups of maximal class, built on weighted power-commutator presentations."""

__version__ = "0.1.0"

from .pcgroup import Element, PcPresentation, SeriesChain, Subgroup  # noqa: F401
