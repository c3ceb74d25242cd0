"""Exact moment constants and CLT verdicts for finite Markov sources."""

from .builders import block_chain, independence_curve_10_11, product, wnaf_transducer
from .chain import (ChainError, MarkovChain, Transition, dump_chain, final_component,
                    from_state_outputs, make_chain, parse_chain, validate)
from .cyclespace import cycle_rank_test, variance_zero, zero_one_variance_check
from .graph import functional_digraphs, period, scc_condensation, simple_cycles
from .jets import Jet2, char_derivatives, det_division_free
from .matrixtree import forest_sum, laplacian, laplacian_minor
from .moments import (d1_d2_sums, exact_dp_moments, moments_combinatorial,
                      moments_determinant, monte_carlo)

__version__ = "0.1.0"
