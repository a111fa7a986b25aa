"""Minimal graded free resolutions, Koszul/K2 certification, and
Stanley-Reisner homology over exact fields."""

from .errors import BoundError, InputError, K2resError
from .linalg import (DEFAULT_PRIME, ExactMatrix, FieldSpec, kernel_basis,
                     parse_field, rank, rows_independent, rref)
from .series import TruncatedSeries, polynomial_ring_series, series_inverse
from .simplicial import (SimplicialComplex, from_facets, full_simplex,
                         irrelevant_complex, parse_complex, void_complex)
from .stanleyreisner import (MonomialIdeal, betti_via_hochster,
                             complex_from_ideal, has_linear_resolution,
                             hilbert_series_from_f_vector, hilbert_series_ideal,
                             hilbert_series_quotient, hochster_ext_table, ideal,
                             ideal_from_complex, is_componentwise_linear_ideal,
                             parse_ideal, squarefree_module_bounds,
                             spec_module_bounds)
from .gradedalg import (AlgebraPresentation, DegreewiseAlgebra, Element,
                        TensorElement, expand, face_ring_presentation,
                        monomial_presentation, parse_algebra,
                        polynomial_presentation, presentation,
                        reduce_mod_iprime)
from .resolve import (BettiTable, MinimalResolution, ModuleRealization,
                      algebra_module, betti_table, component_submodule,
                      cyclic_quotient_module, ext_of_quotient_algebra,
                      free_module, ideal_module, left_submodule,
                      minimal_resolution, presented_module, quotient_module,
                      submodule, trivial_module)
from .koszulk2 import (LiftedDifferentialPair, Verdict, algebra_k2_check,
                       componentwise_linear_check, froberg_obstruction,
                       k1_check, k2_check, koszul_check, koszul_module_check,
                       lifted_pair, strongly_k2_check, trivial_action_check,
                       yoneda_generation_check)

__version__ = "0.1.0"
