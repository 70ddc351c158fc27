"""Exact finite de Finetti computations for exchangeable binary vectors."""

from .combinatorics import hypergeometric_pmf, log_binomial
from .engine import (
    BoundValues,
    LemmaTerms,
    bound_report,
    bound_values,
    cmi_table,
    conditional_divergence,
    conditional_divergence_table,
    conditional_mutual_information,
    divergence_and_tv,
    divergence_to_mixture,
    lemma_term_bounds,
    marginal_weight_pmf,
    mixing_measure,
    mixture_weight_pmf,
    tv_to_mixture,
)
from .families import FamilySpec, generate
from .info import (
    AbsoluteContinuityViolation,
    InternalConsistencyError,
    binary_entropy,
    entropy_difference_bound,
    relative_entropy,
    total_variation,
)
from .kernels import BACKEND
from .types import BoundReport, CountPMF, MixingMeasure, WeightClassPMF, make_count_pmf

__version__ = "0.1.0"
