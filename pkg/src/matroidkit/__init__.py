"""Exact structural computations on small matroids."""

from .core import (
    CapacityError, Matroid, MatroidError, MinorSpec, from_bases, from_graph, from_matrix,
    is_isomorphic, loads,
)
from .families import free_spike, free_swirl, uniform, wheel, whirl

__version__ = "0.1.0"

__all__ = [
    "CapacityError", "Matroid", "MatroidError", "MinorSpec", "from_bases", "from_graph",
    "from_matrix", "free_spike", "free_swirl", "is_isomorphic", "loads", "uniform", "wheel",
    "whirl",
]
