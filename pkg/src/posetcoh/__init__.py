"""Homotopy and net cohomology of finite posets."""

from .poset import (Poset, Simplex1, Simplex2, Path, Sieve, validate_poset,
                    enumerate_simplices, compose_paths, reverse_path,
                    is_directed, is_refinement, causal_complement, degenerate)

TAU = 1e-9
TAU_ALG = 1e-8

__version__ = "0.1.0"

__all__ = ["Poset", "Simplex1", "Simplex2", "Path", "Sieve", "validate_poset",
           "enumerate_simplices", "compose_paths", "reverse_path", "is_directed",
           "is_refinement", "causal_complement", "degenerate", "TAU", "TAU_ALG"]
