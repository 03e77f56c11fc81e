"""Exact counting over finite chain rings: restricted-input/output Warning
bounds and their zero-sum, graph, hypergraph and interpolation consequences."""

from .chainring import ChainRing, RingElement, SubsetSpec, check_condition, make_chain_ring
from .errors import BudgetExceeded, ConditionError, ConsistencyError, RingMismatchError
from .mbound import m_bound, m_bound_bruteforce, m_bound_clamped, m_bound_with_witness
from .mpoly import MPoly, parse_poly
from .warning import (RestrictedSystem, VerificationReport, afk_lemma_sweep, afk_valuation,
                      count_fat_target_nonvanishing, count_nonvanishing, count_restricted_solutions,
                      sharp_alon_furedi_instance, verify_main_theorem)
from .zerosum import (GSequence, PGroup, count_weighted_sums, davenport, egz_count, fat_davenport,
                      little_d, plus_minus_davenport, verify_fat_bound, weighted_davenport)
from .graphdiv import (DivisibilitySpec, Hypergraph, MultiGraph, atomic_threshold,
                       count_divisible_subgraphs, hypergraph_count, schmitt_construction, script_E)
from .interp import InterpolationProblem, find_nonzero_interpolant, interp_count, troi_zannier

__version__ = "0.1.0"
