"""Exact computations for groups acting on finite graphs with cocycles:
validation, cohomology, example constructions, the coefficient algebra and
correspondence, Toeplitz normal forms with a Fock-space oracle, and a
matrix-family relation checker."""

__version__ = "0.1.0"

from .group import (Cyclic, DirectProduct, Group, GroupElement, GroupError, Integers,
                    Permutation)
from .graph import Graph, GraphError, Path, paths_up_to
from .cocycle import (GeneratingCocycle, GraphAction, IntegerAction, FiniteAction, System,
                      TableCocycle, validate_cocycle)
from .cohomology import (CohomologyWitness, apply_witness, brute_force_cohomologous,
                         canonical_form_Za, signature, verify_cohomologous)
from .constructions import epk_decompose, epk_system, o21_system, z2_strings_system
from .spec import build, load_system, loads_system, dumps_system, fingerprint
from .toeplitz import Monomial, fock_check, monomial_multiply, normalize

__all__ = [
    "Cyclic", "DirectProduct", "Group", "GroupElement", "GroupError", "Integers", "Permutation",
    "Graph", "GraphError", "Path", "paths_up_to",
    "GeneratingCocycle", "GraphAction", "IntegerAction", "FiniteAction", "System",
    "TableCocycle", "validate_cocycle",
    "CohomologyWitness", "apply_witness", "brute_force_cohomologous", "canonical_form_Za",
    "signature", "verify_cohomologous",
    "epk_decompose", "epk_system", "o21_system", "z2_strings_system",
    "build", "load_system", "loads_system", "dumps_system", "fingerprint",
    "Monomial", "fock_check", "monomial_multiply", "normalize",
]
