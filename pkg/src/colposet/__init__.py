"""Exact homology of coloured posets, their cube complexes and link diagrams."""
from .algebra import GF, QQ, ZZ, Matrix, Ring, homology_at, smith_normal_form
from .chromatic import AlgebraM, SimpleGraph, build_chromatic_colouring, chromatic_polynomial, euler_check
from .coloured import (ColouredMorphism, ColouredPoset, Gluing, constant_colouring, dual_coloured, glue,
                       product_coloured, union_coloured, validate_colouring, validate_morphism)
from .complexes import (ChainComplex, ChainMap, build_C, build_D_truncated, build_K, build_S_truncated,
                        chain_map_of_morphism, cohomology, homology, induced_map_on_homology, map_phi,
                        verify_les, verify_main)
from .khovanov import PlanarDiagram, build_khovanov_colouring, khovanov_table, kauffman_state_sum
from .poset import BooleanLattice, FinitePoset

__all__ = [
    "GF", "QQ", "ZZ", "Matrix", "Ring", "homology_at", "smith_normal_form",
    "AlgebraM", "SimpleGraph", "build_chromatic_colouring", "chromatic_polynomial", "euler_check",
    "ColouredMorphism", "ColouredPoset", "Gluing", "constant_colouring", "dual_coloured", "glue",
    "product_coloured", "union_coloured", "validate_colouring", "validate_morphism",
    "ChainComplex", "ChainMap", "build_C", "build_D_truncated", "build_K", "build_S_truncated",
    "chain_map_of_morphism", "cohomology", "homology", "induced_map_on_homology", "map_phi",
    "verify_les", "verify_main",
    "PlanarDiagram", "build_khovanov_colouring", "khovanov_table", "kauffman_state_sum",
    "BooleanLattice", "FinitePoset",
]
