"""Exact computations with towers of groups, their limits and lim^1."""

from .abgroup import (FgAbGroup, SymbolicAbGroup, Ordinal, OMEGA, hom_group, ext_group,
                      p_chain, p_length, ulm_chain, is_cotorsion, divisibility_witness_tree,
                      p_divisible_thread_check)
from .linalg import IntMatrix, smith_normal_form, solve_linear, cokernel_structure
from .groups import FiniteGroup, FreeGroup, FreeWord, ProductGroup, Subgroup, GroupHom
from .commutators import (abelianization, commutator_subgroup, commutator_length_finite,
                          commutator_length_free, is_single_commutator_free, wicks_decomposition)
from .tower import (Tower, image_stabilization, derived_subtower, windowed_lim,
                    lim1_window_surjectivity, lim1_classify, six_term_window_check)
from .eqsolve import (EquationSystem, solve_truncated, divisibility_system_global,
                      CommutatorLiftOracle, recursion_grid)
from .kernel import rho_window, kernel_presentation_window, unbounded_cl_witness

__version__ = "0.1.0"

__all__ = [
    "FgAbGroup", "SymbolicAbGroup", "Ordinal", "OMEGA", "hom_group", "ext_group", "p_chain",
    "p_length", "ulm_chain", "is_cotorsion", "divisibility_witness_tree", "p_divisible_thread_check",
    "IntMatrix", "smith_normal_form", "solve_linear", "cokernel_structure",
    "FiniteGroup", "FreeGroup", "FreeWord", "ProductGroup", "Subgroup", "GroupHom",
    "abelianization", "commutator_subgroup", "commutator_length_finite", "commutator_length_free",
    "is_single_commutator_free", "wicks_decomposition",
    "Tower", "image_stabilization", "derived_subtower", "windowed_lim", "lim1_window_surjectivity",
    "lim1_classify", "six_term_window_check",
    "EquationSystem", "solve_truncated", "divisibility_system_global", "CommutatorLiftOracle",
    "recursion_grid",
    "rho_window", "kernel_presentation_window", "unbounded_cl_witness",
]
