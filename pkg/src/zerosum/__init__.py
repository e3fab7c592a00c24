"""Fixed-length subsequence sums over finite abelian groups, with exhaustive checkers."""
from .engine import (SumsProfile, compute_profile, is_zero_sum_free, max_zero_sum_length,
                     nsum, sigma_all, sigma_at_least, sigma_at_most, sigma_exact)
from .groups import (GroupSpec, add, element_order, enumerate_groups_of_order, make_group,
                     neg)
from .literals import parse_group_literal, parse_sequence_literal
from .sequences import Sequence, concat, enumerate_sequences, remove, translate
from .sumsets import GroupSubset, gamma, negate, restricted_self_sumset, sumset, translate_set
from .theorem import TheoremVerdict, search_counterexample, sweep, verify_instance
from .tracer import TraceReport, trace, trace_corpus

__version__ = "0.1.0"
