"""Sign patterns of cycle graphs that require algebraic positivity."""

from .classifier import Outcome, Rule, Gate, Verdict, classify, decompose_blocks, necessary_gates
from .determinantal import adjugate_sign, det_terms, is_sns, requires_singularity
from .digraph import build_digraph, cycle_form_labelings, is_irreducible, monotone_n_cycles
from .oracle import counterexample_search, is_algebraically_positive, mc_requires
from .pattern import QSampleConfig, Sign, SignPattern, parse_pattern, sample_q

__version__ = "0.1.0"
