"""Finite quantale-valued closure, approach and convergence spaces.

Quantales are finite tables; spaces are tables over subsets (distance form),
quantale-indexed families of set operators (towers), or tables over
principal ultrafilters (convergence form). Every axiom system has an
exhaustive-or-sampled checker returning a :class:`LawReport`.
"""
from .base_change import (BaseChangeMap, Graph, b_bar_phi, b_phi, reflect, standard_maps,
                          verify_adjunction_theorem, verify_embedding_corollaries)
from .convergence import (ConvergenceStructure, a_epsilon, check_algebraic_morphism_epsilon,
                          check_beta_algebra, check_probapp_convergence, r_functor,
                          ultrafilter_monad, verify_main_theorem)
from .lattice import (MonotoneMap, Quantale, adjoints, check_quantale, classify_hom, coprimes,
                      is_ccd, totally_below)
from .quantales import (chain_frame, cost_chain, delta_grid, downset, parse_builtin, two_chain,
                        unit_grid)
from .report import Budget, CapabilityError, LawReport, Violation
from .spaces import (DistanceStructure, SpaceMap, Tower, check_closure, check_contractive,
                     check_continuity, check_probapp, check_tower, enumerate_structures,
                     from_tower, is_approach, to_tower)
from .vrel import FiniteSet, VRelation, alpha, beta, check_lax_law, rel_compose

__version__ = "0.1.0"

__all__ = [
    "BaseChangeMap", "Budget", "CapabilityError", "ConvergenceStructure", "DistanceStructure",
    "FiniteSet", "Graph", "LawReport", "MonotoneMap", "Quantale", "SpaceMap", "Tower",
    "VRelation", "Violation", "a_epsilon", "adjoints", "alpha", "b_bar_phi", "b_phi", "beta",
    "chain_frame", "check_algebraic_morphism_epsilon", "check_beta_algebra", "check_closure",
    "check_continuity", "check_contractive", "check_lax_law", "check_probapp",
    "check_probapp_convergence", "check_quantale", "check_tower", "classify_hom", "coprimes",
    "cost_chain", "delta_grid", "downset", "enumerate_structures", "from_tower", "is_approach",
    "is_ccd", "parse_builtin", "r_functor", "reflect", "rel_compose", "standard_maps",
    "to_tower", "totally_below", "two_chain", "ultrafilter_monad", "unit_grid",
    "verify_adjunction_theorem", "verify_embedding_corollaries", "verify_main_theorem",
]
