"""Exact structure coefficients of double-class algebras and group-algebra centres."""

from .families import ClassLabel, Kind, make_family
from .partitions import IndexedPair, PairPartition, Partition
from .perms import Permutation

__all__ = ["ClassLabel", "Kind", "make_family", "IndexedPair", "PairPartition", "Partition", "Permutation"]
__version__ = "0.1.0"
