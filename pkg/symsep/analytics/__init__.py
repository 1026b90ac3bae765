from symsep.analytics.correlation import CorrelationMatrix, MarginalVector, marginal_vector, probability_matrix
from symsep.analytics.criteria import (
    AugmentedMatrix,
    CriterionReport,
    evaluate_baseline_equal_entries,
    evaluate_bipartite,
    evaluate_gsic,
    evaluate_multipartite,
    evaluate_mum,
)

__all__ = [
    "CorrelationMatrix",
    "MarginalVector",
    "probability_matrix",
    "marginal_vector",
    "AugmentedMatrix",
    "CriterionReport",
    "evaluate_bipartite",
    "evaluate_gsic",
    "evaluate_mum",
    "evaluate_baseline_equal_entries",
    "evaluate_multipartite",
]
